import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdelete import analytic as an
from qdelete.deletion import CaseTag, Mode, matched_phase
from qdelete.statevector import fidelity, uniform_state

from test_deletion import dense_step

H = math.sqrt(3) / 2
# (12 + sqrt(96)) / 8
R_N4 = 2.7247448713915890491


def plane_basis(n, tau):
    N = 1 << n
    c = np.full(N, 1 / math.sqrt(N - 1), dtype=complex)
    c[tau] = 0
    t = np.zeros(N, dtype=complex)
    t[tau] = 1
    return np.stack([c, t], axis=1)


def is_unitary(M, tol=1e-12):
    return np.abs(M.conj().T @ M - np.eye(2)).max() < tol


def test_s_matrix_two_items():
    N, phi = 2, math.pi / 2
    S = an.s_matrix(N, phi)
    assert is_unitary(S)
    out = S @ an.initial_state(N).as_array()
    np.testing.assert_allclose(out, [cmath.exp(0.5j * (phi - math.pi)), 0], atol=1e-12)


@pytest.mark.parametrize("N", [2, 4, 100])
def test_s_matrix_zero_phase(N):
    np.testing.assert_allclose(an.s_matrix(N, 0.0), -np.eye(2), atol=1e-15)


@pytest.mark.parametrize("n, tau", [(2, 0), (2, 3), (3, 5), (5, 12)])
def test_s_matrix_is_restriction_of_full_operator(n, tau):
    phi = matched_phase(1 << n).phi
    B = plane_basis(n, tau)
    restricted = B.conj().T @ dense_step(n, tau, phi) @ B
    np.testing.assert_allclose(an.s_matrix(1 << n, phi), restricted, atol=1e-13)


def test_spectral_four_items():
    d = an.spectral_decompose(4, matched_phase(4).phi)
    assert abs(d.beta_prime - math.pi / 6) < 1e-12
    assert abs(d.R - R_N4) < 1e-12


def test_spectral_reconstruction_two_items():
    d = an.spectral_decompose(2, math.pi / 2)
    np.testing.assert_allclose(d.reconstruct(), an.s_matrix(2, math.pi / 2), atol=1e-12)


@pytest.mark.parametrize("n", range(1, 21))
def test_spectral_identities(n):
    N = 1 << n
    phi = matched_phase(N).phi
    d = an.spectral_decompose(N, phi)
    assert abs(d.beta_prime - math.pi / 6) < 1e-12
    assert abs(d.R - (3 * N + math.sqrt(3 * N * (3 * N - 4))) / (2 * N)) < 1e-12
    assert is_unitary(d.U)
    np.testing.assert_allclose(d.reconstruct(), an.s_matrix(N, phi), atol=1e-12)
    expected = sorted([-cmath.exp(1j * (phi + math.pi / 3)), -cmath.exp(1j * (phi - math.pi / 3))],
                      key=cmath.phase)
    got = sorted(np.linalg.eigvals(an.s_matrix(N, phi)), key=cmath.phase)
    np.testing.assert_allclose(got, expected, atol=1e-12)


def test_s_power_zero_is_identity():
    np.testing.assert_allclose(an.s_power(8, 0), np.eye(2), atol=1e-15)


@pytest.mark.parametrize("N", [2, 4, 8, 1024, 2**20])
def test_s_power_three(N):
    phi = matched_phase(N).phi
    np.testing.assert_allclose(an.s_power(N, 3), cmath.exp(3j * phi) * np.eye(2), atol=1e-12)


def test_s_power_seven_by_repeated_product():
    phi = matched_phase(8).phi
    np.testing.assert_allclose(
        an.s_power(8, 7), np.linalg.matrix_power(an.s_matrix(8, phi), 7), atol=1e-10
    )


def test_s_power_negative():
    with pytest.raises(ValueError):
        an.s_power(4, -1)


@pytest.mark.parametrize(
    "k, row",
    [
        (1, (H, 0.5, -H, -0.5)),
        (2, (H, -0.5, H, -0.5)),
        (3, (0.0, -1.0, 0.0, 1.0)),
        (4, (-H, -0.5, -H, -0.5)),
        (5, (-H, 0.5, H, -0.5)),
        (6, (0.0, 1.0, 0.0, 1.0)),
    ],
)
def test_trig_table_rows(k, row):
    table = an.trig_period_table(12)
    assert table[k - 1].k == k
    assert table[k - 1][1:] == row
    assert table[k + 5][1:] == row


def test_trig_table_no_negative_zero():
    for r in an.trig_period_table(12):
        for v in r[1:]:
            assert math.copysign(1, v) == 1 or v != 0


def test_trig_table_k_max():
    with pytest.raises(ValueError):
        an.trig_period_table(0)


@pytest.mark.parametrize("k", range(1, 25))
def test_trig_values_match_libm(k):
    s, c = an.trig_values(k)
    assert abs(s - math.sin(k * math.pi / 3)) < 1e-14
    assert abs(c - math.cos(k * math.pi / 3)) < 1e-14


def test_approximate_matrix_residual_four_items():
    out = an.approximate_s_matrix(4) @ an.initial_state(4).as_array()
    assert abs(abs(out[1]) - 0.125) < 1e-15


def test_approximate_matrix_residual_large():
    N = 2**20
    out = an.approximate_s_matrix(N) @ an.initial_state(N).as_array()
    assert abs(abs(out[1]) / 2.0**-30 - 1) < 1e-9


@pytest.mark.parametrize("N", [2, 4, 16, 2**10, 2**20])
def test_approximate_matrix_matches_general_form(N):
    A = an.approximate_s_matrix(N)
    np.testing.assert_allclose(A, an.fixed_phase_matrix(N), atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(A, axis=0), 1, atol=1e-12)


def test_predict_one_step():
    two_d, case = an.predict_final(4, 1)
    assert case is CaseTag.DELETED
    assert two_d.a_tau == 0
    assert abs(abs(two_d.a_c) - 1) < 1e-15


def test_predict_two_steps():
    phi = matched_phase(4).phi
    two_d, case = an.predict_final(4, 2)
    assert case is CaseTag.PHASE_SHIFTED
    assert abs(abs(two_d.a_c) - H) < 1e-15
    assert abs(abs(two_d.a_tau) - 0.5) < 1e-15
    diff = cmath.phase(two_d.a_c / two_d.a_tau)
    assert abs(diff + phi) < 1e-12


def test_predict_five_steps_same_magnitudes_as_two():
    a, _ = an.predict_final(8, 5)
    b, _ = an.predict_final(8, 2)
    assert abs(abs(a.a_c) - abs(b.a_c)) < 1e-12
    assert abs(abs(a.a_tau) - abs(b.a_tau)) < 1e-12
    ref = an.s_power(8, 5) @ an.initial_state(8).as_array()
    np.testing.assert_allclose(a.as_array(), ref, atol=1e-12)


@pytest.mark.parametrize("N", [4, 64, 2**20])
def test_predict_fixed_single_step(N):
    two_d, _ = an.predict_final(N, 1, Mode.FIXED)
    assert abs(abs(two_d.a_tau) * N**1.5 - 1) < 1e-9


@pytest.mark.parametrize("N", [2, 8, 32])
@pytest.mark.parametrize("k", range(0, 13))
def test_predict_matches_closed_form_power(N, k):
    two_d, _ = an.predict_final(N, k)
    ref = an.s_power(N, k) @ an.initial_state(N).as_array()
    np.testing.assert_allclose(two_d.as_array(), ref, atol=1e-12)


def test_lift_examples():
    s = an.lift_to_full(an.TwoDState(1, 0), 2, 2)
    np.testing.assert_allclose(s.amps, [1 / math.sqrt(3)] * 2 + [0] + [1 / math.sqrt(3)], atol=1e-15)
    s = an.lift_to_full(an.TwoDState(0, 1), 5, 3)
    assert s.amps[5] == 1 and np.count_nonzero(s.amps) == 1
    for n in (1, 4, 10):
        s = an.lift_to_full(an.initial_state(1 << n), 3 % (1 << n), n)
        np.testing.assert_allclose(s.amps, uniform_state(n).amps, atol=1e-12)


def test_lift_rejects_unnormalized():
    with pytest.raises(ValueError):
        an.lift_to_full(an.TwoDState(1, 1), 0, 2)


def test_lift_rejects_bad_tau():
    with pytest.raises(IndexError):
        an.lift_to_full(an.TwoDState(1, 0), 4, 2)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 10), tau_frac=st.floats(0, 1, exclude_max=True),
       a=st.complex_numbers(max_magnitude=10), b=st.complex_numbers(max_magnitude=10))
def test_lift_project_roundtrip(n, tau_frac, a, b):
    r = math.hypot(abs(a), abs(b))
    if r < 1e-3:
        return
    tau = int(tau_frac * (1 << n))
    two_d = an.TwoDState(a / r, b / r)
    lifted = an.lift_to_full(two_d, tau, n)
    back = an.project_to_plane(lifted, tau)
    np.testing.assert_allclose(back.as_array(), two_d.as_array(), atol=1e-12)
    again = an.lift_to_full(back, tau, n)
    assert abs(fidelity(lifted, again) - 1) < 1e-12


@settings(max_examples=40, deadline=None)
@given(n=st.integers(1, 26), k=st.integers(0, 24))
def test_power_properties(n, k):
    N = 1 << n
    phi = matched_phase(N).phi
    P = an.s_power(N, k)
    assert is_unitary(P)
    np.testing.assert_allclose(an.s_power(N, k + 3), cmath.exp(3j * phi) * P, atol=1e-10)
    np.testing.assert_allclose(P, np.linalg.matrix_power(an.s_matrix(N, phi), k), atol=1e-10)
