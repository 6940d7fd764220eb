import numpy as np
import pytest

from quditmaps import channels as ch
from quditmaps import generators as g
from quditmaps import linalg as la
from quditmaps.errors import NegativeRate, NotOrthonormal, NotTraceless


def qubit_generator_transfer(kappa, nu, omega):
    """The d=2 generator built directly from sigma_+, sigma_-, sigma_z."""
    sp = np.array([[0, 1], [0, 0]], dtype=complex)
    sm = sp.conj().T
    sz = np.diag([1.0, -1.0]).astype(complex)
    ham = np.diag([omega / 2, -omega / 2]).astype(complex)
    eye = np.eye(2, dtype=complex)

    def sandwich(a, b):  # X -> a X b
        return np.kron(b.T, a)

    t = -1j * (sandwich(ham, eye) - sandwich(eye, ham))
    t += kappa * (
        sandwich(sp, sm) + sandwich(sm, sp) - np.eye(4)
        + (nu / 2.0) * (sandwich(sz, sz) - np.eye(4))
    )
    return t


def test_generator_reduces_to_qubit_form():
    kappa, nu, omega = 0.8, -0.4, 1.3
    p = g.GenParams(2, kappa, nu, (omega / 2, -omega / 2))
    assert np.abs(
        g.build_generator(p).transfer - qubit_generator_transfer(kappa, nu, omega)
    ).max() <= 1e-12


def test_generator_is_unital():
    for d in (2, 3, 5):
        gen = g.build_generator(g.GenParams(d, 1.3, -0.7))
        assert np.abs(gen(np.eye(d))).max() <= 1e-12


def test_generator_offdiagonal_eigenvalue():
    gen = g.build_generator(g.GenParams(3, 1.0, 0.0))
    e12 = la.basis_matrix(0, 1, 3)
    assert np.allclose(gen(e12), -2.0 * e12)


def test_generator_compact_form():
    # I Tr(rho) + (nu-1) Delta(rho) - (d-1+nu) rho equals the literal sums
    rng = np.random.default_rng(0)
    for d, kappa, nu in ((2, 0.7, -0.4), (3, 1.0, -1.2), (5, 2.0, 0.6)):
        gen = g.build_generator(g.GenParams(d, kappa, nu))
        for _ in range(10):
            x = la.ginibre(d, rng)
            expected = kappa * (
                np.eye(d) * np.trace(x) + (nu - 1.0) * ch.dephase(x)
                - (d - 1.0 + nu) * x
            )
            assert np.abs(gen(x) - expected).max() <= 1e-12


def test_generator_annihilates_trace():
    rng = np.random.default_rng(1)
    for d in (2, 3, 4):
        gen = g.build_generator(g.GenParams(d, 1.0, -0.8, tuple(rng.uniform(-1, 1, d))))
        for _ in range(200):
            x = la.ginibre(d, rng)
            assert abs(np.trace(gen(x))) <= 1e-10 * max(1.0, la.frobenius(x))


# --- spectrum and rates -------------------------------------------------------

def test_spectrum_rates_example():
    rep = g.spectrum_rates(g.GenParams(3, 1.0, -0.5))
    assert rep.gamma_diag == pytest.approx(3.0)
    assert rep.gamma_offdiag == pytest.approx(1.5)
    assert rep.gamma_total == pytest.approx(15.0)


def test_spectrum_consistency_with_hamiltonian():
    rng = np.random.default_rng(2)
    for d in (2, 3, 5):
        p = g.GenParams(d, 0.9, -0.3, tuple(rng.uniform(-2, 2, d)))
        eig = np.linalg.eigvals(g.build_generator(p).transfer)
        assert la.match_multisets(eig, g.expected_spectrum(p), tol=1e-9 * d)


def test_rate_report_total_consistency():
    rep = g.spectrum_rates(g.GenParams(5, 1.7, -0.9))
    total = (rep.d - 1) * rep.gamma_diag + rep.d * (rep.d - 1) * rep.gamma_offdiag
    assert rep.gamma_total == pytest.approx(total, abs=1e-12)


def test_rate_bound_saturated_only_at_d2():
    assert g.spectrum_rates(g.GenParams(2, 1.0, 0.0), "kpositive").bound_saturated
    rep3 = g.spectrum_rates(g.GenParams(3, 1.0, 0.0), "kpositive")
    assert rep3.bound_satisfied and not rep3.bound_saturated
    assert rep3.gamma_max == pytest.approx(3.0)
    assert rep3.c_d * rep3.gamma_total == pytest.approx(6.0)


def test_rates_reject_invalid_parameters():
    with pytest.raises(NegativeRate):
        g.spectrum_rates(g.GenParams(3, -1.0, 0.0))
    with pytest.raises(NegativeRate):
        g.spectrum_rates(g.GenParams(3, 1.0, -2.5))


# --- conditional positivity ---------------------------------------------------

def saturating_pair(d):
    x = np.zeros(d, dtype=complex)
    y = np.zeros(d, dtype=complex)
    x[0] = x[1] = 1.0 / np.sqrt(2.0)
    y[0], y[1] = 1.0 / np.sqrt(2.0), -1.0 / np.sqrt(2.0)
    return x, y


def test_pair_functional_closed_form():
    # <y|L(|x><x|)|y> = kappa (1 - (1 - nu) sum |x_k|^2 |y_k|^2)
    rng = np.random.default_rng(3)
    for d, kappa, nu in ((3, 1.0, -0.7), (4, 0.6, 0.4)):
        gen = g.build_generator(g.GenParams(d, kappa, nu))
        for _ in range(50):
            x, y = la.haar_orthonormal_pair(d, rng)
            val = g.pair_functional(gen, x, y)
            s = float(np.sum(np.abs(x) ** 2 * np.abs(y) ** 2))
            assert val == pytest.approx(kappa * (1.0 - (1.0 - nu) * s), abs=1e-10)


def test_conditional_positivity_boundary_pair():
    d, kappa = 4, 1.0
    gen = g.build_generator(g.GenParams(d, kappa, -1.0))
    x, y = saturating_pair(d)
    assert g.pair_functional(gen, x, y) == pytest.approx(0.0, abs=1e-12)


def test_conditional_positivity_sampled_minima():
    rep0 = g.is_conditionally_positive(g.GenParams(3, 1.0, 0.0), 2000, seed=5)
    assert rep0.closed_form
    assert rep0.sampled_min == pytest.approx(0.5, abs=1e-10)  # kappa/2 at nu=0

    rep_neg = g.is_conditionally_positive(g.GenParams(3, 1.0, -1.5), 2000, seed=5)
    assert not rep_neg.closed_form
    assert rep_neg.sampled_min == pytest.approx(-0.25, abs=1e-10)

    rep_b = g.is_conditionally_positive(g.GenParams(3, 1.0, -1.0), 2000, seed=5)
    assert rep_b.closed_form and rep_b.sampled_min >= -1e-9


# --- conditional complete positivity -------------------------------------------

def test_ccp_boundary_and_interior():
    assert g.is_ccp(g.GenParams(3, 1.0, 0.0)).min_eig_projected == pytest.approx(
        0.0, abs=1e-12
    )
    assert g.is_ccp(g.GenParams(3, 1.0, 0.5)).min_eig_projected == pytest.approx(
        0.5, abs=1e-12
    )
    rep = g.is_ccp(g.GenParams(3, 1.0, -0.1))
    assert not rep.closed_form
    assert rep.min_eig_projected == pytest.approx(-0.1, abs=1e-12)


def test_ccp_sign_matches_closed_form():
    for d in (2, 4):
        for nu in (-0.6, -0.05, 0.05, 0.8):
            rep = g.is_ccp(g.GenParams(d, 1.3, nu))
            assert (rep.min_eig_projected >= -1e-9) == rep.closed_form


def test_ccp_insensitive_to_hamiltonian():
    a = g.is_ccp(g.GenParams(3, 1.0, -0.2)).min_eig_projected
    b = g.is_ccp(g.GenParams(3, 1.0, -0.2, (0.5, -1.0, 0.5))).min_eig_projected
    assert a == pytest.approx(b, abs=1e-10)


# --- dissipativity --------------------------------------------------------------

def test_dissipativity_matrix_on_matrix_unit():
    for d, a in ((3, 1.6), (4, 0.5)):
        m = g.dissipativity_matrix(d, a, la.basis_matrix(0, 1, d))
        expected = np.eye(d) + (d - 2 * a) * la.basis_matrix(1, 1, d)
        assert np.abs(m - expected).max() <= 1e-12


def test_dissipativity_matrix_zero():
    assert np.abs(g.dissipativity_matrix(3, 1.2, np.zeros((3, 3)))).max() == 0.0


def test_dissipativity_matrix_requires_traceless():
    with pytest.raises(NotTraceless):
        g.dissipativity_matrix(3, 1.0, np.eye(3))


def test_witness_threshold_saturation():
    # at a = 2(d+1)/(d+2) the optimal witness eigenvalue is exactly zero
    d = 3
    a = 2.0 * (d + 1) / (d + 2)
    assert a == pytest.approx(1.6)
    c_star = d / (d + 2 - 2 * a)
    assert c_star == pytest.approx(5.0 / 3.0)
    assert g.witness_min_eig(d, a, c_star) == pytest.approx(0.0, abs=1e-12)


def test_is_dissipative_threshold_values():
    rep = g.is_dissipative(g.GenParams(3, 1.0, -0.6), 500, seed=6)
    assert rep.closed_form
    assert rep.min_witness_eig == pytest.approx(0.0, abs=1e-12)

    rep2 = g.is_dissipative(g.GenParams(3, 1.0, -0.8), 500, seed=6)
    assert not rep2.closed_form
    assert rep2.min_witness_eig == pytest.approx(5.0 - 9.0 / 1.4, abs=1e-10)

    # d=2 recovers the qubit threshold nu >= -1/2
    assert g.schwarz_threshold(2) == pytest.approx(-0.5)
    assert g.is_dissipative(g.GenParams(2, 1.0, -0.5), 500, seed=6).closed_form
    assert not g.is_dissipative(g.GenParams(2, 1.0, -0.51), 500, seed=6).closed_form


def test_is_dissipative_witness_unbounded_region():
    # deep below threshold (d + 2 - 2a <= 0) large deterministic c shows divergence
    rep = g.is_dissipative(g.GenParams(3, 1.0, -2.0), 10, seed=7)
    assert not rep.closed_form
    assert rep.min_witness_eig < -100.0


def test_dissipativity_sampling_soundness():
    for d in (2, 3, 6):
        nu = g.schwarz_threshold(d)
        rep = g.is_dissipative(g.GenParams(d, 1.0, nu), 10_000, seed=8)
        assert rep.min_sampled_eig >= -1e-9
        assert rep.min_witness_eig >= -1e-9


def test_dissipative_is_exactly_schwarz_of_small_time_map():
    # L(X^+X) - L(X^+)X - X^+L(X) equals kappa M(a, X) for traceless X
    rng = np.random.default_rng(9)
    d, kappa, nu = 3, 0.7, -0.45
    gen = g.build_generator(g.GenParams(d, kappa, nu))
    for _ in range(25):
        x = la.random_traceless(d, rng)
        lhs = gen(x.conj().T @ x) - gen(x.conj().T) @ x - x.conj().T @ gen(x)
        rhs = kappa * g.dissipativity_matrix(d, 1.0 - nu, x)
        assert np.abs(lhs - rhs).max() <= 1e-10


# --- the pair-functional bound ---------------------------------------------------

def test_lemma1_disjoint_supports():
    x = np.array([1.0, 0.0, 0.0])
    y = np.array([0.0, 1.0, 0.0])
    assert g.lemma1_value(x, y) == 0.0


def test_lemma1_saturating_pair():
    x, y = saturating_pair(2)
    # 1/sqrt(2) is not exactly representable, so the sum lands within 1 ulp of 1/2
    assert abs(g.lemma1_value(x, y) - 0.5) <= 1e-15


def test_lemma1_monte_carlo_bound():
    rng = np.random.default_rng(10)
    for d in range(2, 9):
        xs, ys = la.haar_orthonormal_pair(d, rng, n=2000)
        vals = np.sum(np.abs(xs) ** 2 * np.abs(ys) ** 2, axis=1)
        assert vals.max() <= 0.5 + 1e-12


def test_lemma1_rejects_bad_pairs():
    with pytest.raises(NotOrthonormal):
        g.lemma1_value(np.array([1.0, 0.0]), np.array([1.0, 0.0]))
    with pytest.raises(NotOrthonormal):
        g.lemma1_value(np.array([2.0, 0.0]), np.array([0.0, 1.0]))


# --- threshold ordering ----------------------------------------------------------

def test_threshold_ordering_and_nesting():
    for d in range(2, 9):
        assert -1.0 < g.schwarz_threshold(d) < 0.0
        for nu in np.linspace(-1.3, 0.3, 17):
            p = g.GenParams(d, 1.0, float(nu))
            ccp = g.is_ccp(p).closed_form
            dis = g.is_dissipative(p, 0).closed_form
            pos = g.is_conditionally_positive(p, 0).closed_form
            assert (not ccp or dis) and (not dis or pos)
