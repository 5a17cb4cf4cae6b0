from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tdent.torus import cat_matrix
from tdent.weyl import (ZERO_PHASES, RepPhases, admissible_phases, heisenberg_step, hs_norm,
                        is_admissible, parity_class, symplectic_form, tau, weyl_compose_phase,
                        weyl_expand, weyl_matrix, weyl_reconstruct, weyl_trace)


def test_weyl_examples():
    assert np.allclose(weyl_matrix(5, ZERO_PHASES, (0, 0)), np.eye(5))
    assert np.allclose(weyl_matrix(2, ZERO_PHASES, (1, 0)), [[0, 1], [1, 0]])
    assert np.allclose(weyl_matrix(2, ZERO_PHASES, (0, 1)), np.diag([1, -1]))


def _direct_weyl(n_dim, u, v, n1, n2):
    # entrywise from the defining action, with no vectorisation
    out = np.zeros((n_dim, n_dim), dtype=complex)
    pre = np.exp(1j * np.pi / n_dim * (-n1 * n2 + 2 * n1 * u + 2 * n2 * v))
    for j in range(n_dim):
        out[(j + n1) % n_dim, j] = pre * np.exp(-2j * np.pi * j * n2 / n_dim)
    return out


@settings(max_examples=60)
@given(st.integers(2, 16), st.integers(-40, 40), st.integers(-40, 40),
       st.sampled_from([0, Fraction(1, 2), Fraction(1, 3)]), st.sampled_from([0, Fraction(1, 2)]))
def test_weyl_matrix_matches_direct_definition(n_dim, n1, n2, u, v):
    w = weyl_matrix(n_dim, RepPhases(u, v), (n1, n2))
    assert np.allclose(w, _direct_weyl(n_dim, float(u), float(v), n1, n2), atol=1e-12)
    assert np.max(np.abs(w.conj().T @ w - np.eye(n_dim))) <= 1e-12
    assert np.allclose(weyl_matrix(n_dim, RepPhases(u, v), (-n1, -n2)), w.conj().T, atol=1e-12)


def test_compose_phase_examples():
    assert weyl_compose_phase(4, (1, 2), (1, 2)) == pytest.approx(1)
    assert weyl_compose_phase(4, (1, 0), (0, 1)) == pytest.approx(np.exp(1j * np.pi / 4))
    assert weyl_compose_phase(4, (0, 1), (1, 0)) == pytest.approx(np.exp(-1j * np.pi / 4))


@settings(max_examples=80)
@given(st.integers(2, 16), st.lists(st.integers(-32, 32), min_size=4, max_size=4))
def test_group_law_and_commutator(n_dim, vals):
    ph = RepPhases(Fraction(1, 4), Fraction(2, 3))
    n, m = np.array(vals[:2]), np.array(vals[2:])
    wn, wm, wnm = (weyl_matrix(n_dim, ph, k) for k in (n, m, n + m))
    assert np.max(np.abs(wn @ wm - weyl_compose_phase(n_dim, n, m) * wnm)) <= 1e-12
    comm = 2j * np.sin(np.pi * symplectic_form(n, m) / n_dim) * wnm
    assert np.max(np.abs(wn @ wm - wm @ wn - comm)) <= 1e-12


def test_trace_examples():
    assert weyl_trace(7, ZERO_PHASES, (0, 0)) == pytest.approx(1)
    assert weyl_trace(5, ZERO_PHASES, (2, 3)) == 0
    direct = np.trace(weyl_matrix(3, ZERO_PHASES, (3, 0))) / 3
    assert weyl_trace(3, ZERO_PHASES, (3, 0)) == pytest.approx(direct, abs=1e-14)
    assert direct == pytest.approx(1, abs=1e-14)


@pytest.mark.parametrize("n_dim", [2, 3, 6, 9, 16])
def test_trace_matches_matrix_and_averaging_identity(n_dim):
    ph = RepPhases(Fraction(1, 2), Fraction(1, 5))
    rng = np.random.default_rng(n_dim)
    for n in rng.integers(-2 * n_dim, 2 * n_dim, (6, 2)).tolist() + [[n_dim, 0], [0, -n_dim], [n_dim, n_dim]]:
        w = weyl_matrix(n_dim, ph, n)
        assert abs(weyl_trace(n_dim, ph, n) - np.trace(w) / n_dim) <= 1e-12
        acc = sum(weyl_matrix(n_dim, ph, (-p1, -p2)) @ w @ weyl_matrix(n_dim, ph, (p1, p2))
                  for p1 in range(n_dim) for p2 in range(n_dim))
        assert np.max(np.abs(acc / n_dim - np.trace(w) * np.eye(n_dim))) <= 1e-10


def test_folding_is_scalar():
    # W(N n) is a multiple of the identity
    ph = RepPhases(Fraction(1, 3), Fraction(1, 2))
    for n_dim in (3, 4, 7):
        w = weyl_matrix(n_dim, ph, (n_dim, 2 * n_dim))
        assert np.allclose(w, w[0, 0] * np.eye(n_dim), atol=1e-12)


def test_expand_identity_and_single_operator():
    c = weyl_expand(np.eye(5))
    assert c[0, 0] == pytest.approx(1)
    assert np.sum(np.abs(c)) == pytest.approx(1)
    ph = RepPhases(Fraction(1, 2), 0)
    c = weyl_expand(weyl_matrix(6, ph, (2, 5)), ph)
    assert abs(abs(c[2, 5]) - 1) <= 1e-12
    c[2, 5] = 0
    assert np.max(np.abs(c)) <= 1e-12


def test_expand_matches_trace_definition():
    rng = np.random.default_rng(4)
    n_dim = 5
    ph = RepPhases(Fraction(1, 2), Fraction(1, 2))
    x = rng.normal(size=(n_dim, n_dim)) + 1j * rng.normal(size=(n_dim, n_dim))
    c = weyl_expand(x, ph)
    for p1 in range(n_dim):
        for p2 in range(n_dim):
            direct = tau(x @ weyl_matrix(n_dim, ph, (-p1, -p2)))
            assert abs(c[p1, p2] - direct) <= 1e-12


@pytest.mark.parametrize("n_dim", [2, 6, 11])
def test_expand_reconstruction_random_hermitian(n_dim):
    rng = np.random.default_rng(n_dim)
    a = rng.normal(size=(n_dim, n_dim)) + 1j * rng.normal(size=(n_dim, n_dim))
    x = a + a.conj().T
    ph = RepPhases(Fraction(1, 3), Fraction(1, 7))
    assert np.max(np.abs(weyl_reconstruct(weyl_expand(x, ph), ph) - x)) <= 1e-10


def test_admissible_phases_examples():
    t1 = cat_matrix(1)
    assert RepPhases(0, 0) in admissible_phases(t1, 4)
    assert RepPhases(Fraction(1, 2), Fraction(1, 2)) in admissible_phases(t1, 5)
    with pytest.raises(ValueError, match="parabolic"):
        admissible_phases(cat_matrix(0), 4)


@pytest.mark.parametrize("alpha", [1, 2, 3, -5, -6])
@pytest.mark.parametrize("n_dim", [2, 3, 4, 5, 8, 9])
def test_admissible_phases_satisfy_condition_exactly(alpha, n_dim):
    t = cat_matrix(alpha)
    phases = admissible_phases(t, n_dim)
    assert phases
    assert all(is_admissible(t, n_dim, ph) for ph in phases)
    assert len(set(phases)) == len(phases)


def test_admissible_phases_complete_on_rational_grid():
    # brute force over (u, v) in (1/k) Z^2 finds nothing the enumeration missed
    for alpha in (1, 2, 3):
        t = cat_matrix(alpha)
        den = abs(alpha + 3 - 2) * 2
        for n_dim in (3, 4):
            got = set(admissible_phases(t, n_dim))
            brute = {RepPhases(Fraction(i, den), Fraction(j, den)) for i in range(den) for j in range(den)
                     if is_admissible(t, n_dim, RepPhases(Fraction(i, den), Fraction(j, den)))}
            assert brute <= got


def test_folding_phases_for_admissible_pairs():
    t1 = cat_matrix(1)
    for n_dim in (4, 5):
        for ph in admissible_phases(t1, n_dim):
            for e, lab in (((1, 0), ph.u), ((0, 1), ph.v)):
                wn = np.linalg.matrix_power(weyl_matrix(n_dim, ph, e), n_dim)
                assert np.allclose(wn, np.exp(2j * np.pi * float(lab)) * np.eye(n_dim), atol=1e-12)


def test_parity_class():
    assert parity_class(cat_matrix(1)) == 2
    assert parity_class([[0, 1], [-1, 0]]) == 1
    assert parity_class(cat_matrix(2)) == 3
    assert parity_class([[1, 1], [1, 2]]) == 3


def test_hs_norm():
    assert hs_norm(np.eye(4)) == pytest.approx(1)
    assert hs_norm(weyl_matrix(7, ZERO_PHASES, (3, 2))) == pytest.approx(1)
    assert hs_norm(np.zeros((3, 3))) == 0


@pytest.mark.parametrize("alpha,n_dim", [(1, 4), (1, 5), (2, 6), (3, 7)])
def test_heisenberg_step_is_automorphism(alpha, n_dim):
    t = cat_matrix(alpha)
    ph = admissible_phases(t, n_dim)[0]
    rng = np.random.default_rng(alpha * 100 + n_dim)
    a = rng.normal(size=(n_dim, n_dim)) + 1j * rng.normal(size=(n_dim, n_dim))
    x = a + a.conj().T
    y = heisenberg_step(x, t, ph)
    assert abs(tau(y) - tau(x)) <= 1e-12
    assert abs(hs_norm(y) - hs_norm(x)) <= 1e-10
    assert np.max(np.abs(y - y.conj().T)) <= 1e-10
    assert np.allclose(heisenberg_step(np.eye(n_dim), t, ph), np.eye(n_dim), atol=1e-12)
    n, m = rng.integers(-n_dim, n_dim, 2), rng.integers(-n_dim, n_dim, 2)
    wn, wm = weyl_matrix(n_dim, ph, n), weyl_matrix(n_dim, ph, m)
    prod = heisenberg_step(wn @ wm, t, ph)
    assert np.max(np.abs(prod - heisenberg_step(wn, t, ph) @ heisenberg_step(wm, t, ph))) <= 1e-10
    assert np.max(np.abs(heisenberg_step(wn, t, ph) - weyl_matrix(n_dim, ph, t @ n))) <= 1e-12


def test_heisenberg_multi_step_matches_iteration():
    t = cat_matrix(1)
    x = np.random.default_rng(0).normal(size=(5, 5))
    ph = admissible_phases(t, 5)[0]
    once = heisenberg_step(heisenberg_step(x, t, ph), t, ph)
    assert np.allclose(heisenberg_step(x, t, ph, steps=2), once, atol=1e-12)


def test_heisenberg_rejects_bad_phases():
    with pytest.raises(ValueError):
        heisenberg_step(np.eye(5), cat_matrix(1), ZERO_PHASES)


def test_table_offset_for_t2_is_not_admissible():
    # T_2 has the odd-odd/even-odd pattern; the tabulated half-offset along e1
    # gives phases that violate the condition, the direct offset along e2 does not
    t2 = cat_matrix(2)
    (a, b), (c, d) = t2.tolist()
    n_dim = 5
    table = RepPhases(Fraction((1 - d) * Fraction(1, 2), a + d - 2), Fraction(b * Fraction(1, 2), a + d - 2))
    assert not is_admissible(t2, n_dim, table)
    assert all(is_admissible(t2, n_dim, ph) for ph in admissible_phases(t2, n_dim))
