"""Fast invariant checks per module, used by `tdent verify`."""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import coherent, entropy, geometry, quantize, torus, weyl

Check = tuple  # (name, passed, measured value)


def _weyl_checks(rng) -> list:
    out = []
    worst_comp = worst_comm = worst_avg = 0.0
    for n_dim in (2, 5, 8, 16):
        ph = weyl.RepPhases(rng.integers(0, 4) / 4, rng.integers(0, 4) / 4)
        for _ in range(10):
            a = rng.integers(-2 * n_dim, 2 * n_dim, 2)
            b = rng.integers(-2 * n_dim, 2 * n_dim, 2)
            wa, wb = weyl.weyl_matrix(n_dim, ph, a), weyl.weyl_matrix(n_dim, ph, b)
            wab = weyl.weyl_matrix(n_dim, ph, a + b)
            worst_comp = max(worst_comp, np.abs(wa @ wb - weyl.weyl_compose_phase(n_dim, a, b) * wab).max())
            sig = float(weyl.symplectic_form(a, b))
            comm = 2j * np.sin(np.pi * sig / n_dim) * wab
            worst_comm = max(worst_comm, np.abs(wa @ wb - wb @ wa - comm).max())
        n = rng.integers(-2 * n_dim, 2 * n_dim, 2)
        w = weyl.weyl_matrix(n_dim, ph, n)
        acc = np.zeros((n_dim, n_dim), dtype=complex)
        for p1 in range(n_dim):
            for p2 in range(n_dim):
                wp = weyl.weyl_matrix(n_dim, ph, (p1, p2))
                acc += wp.conj().T @ w @ wp
        worst_avg = max(worst_avg, np.abs(acc / n_dim - np.trace(w) * np.eye(n_dim)).max())
    out.append(("weyl composition phase", worst_comp <= 1e-12, worst_comp))
    out.append(("weyl commutator identity", worst_comm <= 1e-12, worst_comm))
    out.append(("weyl averaging identity", worst_avg <= 1e-10, worst_avg))
    x = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    rec = np.abs(weyl.weyl_reconstruct(weyl.weyl_expand(x)) - x).max()
    out.append(("weyl expansion round trip", rec <= 1e-10, rec))
    return out


def _cs_checks(rng) -> list:
    res = max(coherent.cs1_resolution_check(coherent.CS1Family(n)) for n in range(2, 33))
    cs3 = max(coherent.cs3_overcompleteness_check(n) for n in (2, 5, 8))
    beta = np.abs(coherent.beta_overlap_matrix(5, 64) - coherent.beta_gamma_matrix(5)).max()
    return [("cs1 resolution of identity", res <= 1e-10, res),
            ("cs3 overcompleteness", cs3 <= 1e-14, cs3),
            ("beta overlap vs gamma product (M=64)", beta <= 1e-3, beta)]


def _quantize_checks(rng) -> list:
    f = quantize.sin_x1()
    d = [quantize.egorov_defect(torus.MapParam(0.5, n), f, 2) for n in (32, 64, 128)]
    exact = max(quantize.egorov_defect(torus.MapParam(1, n), f, 3) for n in (16, 32))
    unital = np.abs(quantize.antiwick_quantize_MN(quantize.constant(1.0), coherent.CS1Family(12))
                    - np.eye(12)).max()
    return [("egorov defect decreasing in N (alpha=0.5)", d[0] > d[1] > d[2], d[2]),
            ("egorov defect zero for integer alpha", exact == 0.0, exact),
            ("anti-Wick map unital", unital <= 1e-10, unital)]


def _entropy_checks(rng) -> list:
    worst_fact = worst_dual = 0.0
    for _ in range(10):
        n_dim = int(rng.integers(2, 8))
        part = entropy.PartitionSpec(n_dim, rng.integers(0, n_dim, (int(rng.integers(1, 4)), 2)))
        n = int(rng.integers(1, 4))
        p = torus.MapParam(float(rng.choice([0.3, 1.0, 2.7])), n_dim)
        worst_fact = max(worst_fact, np.abs(entropy.build_gram(p, part, n)
                                            - entropy.gram_from_strings(p, part, n)).max())
        q = torus.MapParam(int(rng.choice([-2, 0, 1, 3])), n_dim)
        worst_dual = max(worst_dual, abs(entropy.vn_entropy(entropy.build_gram(q, part, n))
                                         - entropy.shannon_entropy(entropy.frequency_field(q, part, n))))
    return [("gram factorization vs strings", worst_fact <= 1e-12, worst_fact),
            ("spectral/frequency entropy agreement", worst_dual <= 1e-8, worst_dual)]


def _geometry_checks(rng) -> list:
    worst = float("inf")
    for alpha in rng.uniform(-5, 5, 20):
        eta = geometry.eta_bound(alpha).eta
        fwd, bwd = geometry.norm_sandwich(alpha, rng.normal(size=(10**4, 2)))
        lo = min(fwd.min(), bwd.min()) - 1 / eta
        hi = eta - max(fwd.max(), bwd.max())
        worst = min(worst, lo, hi)
    p = torus.MapParam(0.5, 512)
    pts, _ = geometry.sample_good_set(p, 2, 200, seed=1, max_draws=10**5)
    ratio = max(float(np.max(geometry.shadowing_error(pts, p, q) / geometry.shadowing_bound(p, q)))
                for q in range(3)) if len(pts) else float("inf")
    return [("eta norm sandwich", worst >= -1e-12, worst),
            ("shadowing bound (alpha=0.5, n=2, N=512)", ratio <= 1.0, ratio)]


SUITES: dict = {
    "weyl": _weyl_checks,
    "cs": _cs_checks,
    "quantize": _quantize_checks,
    "entropy": _entropy_checks,
    "geometry": _geometry_checks,
}


def run_suite(name: str, seed: int = 0, emit: Callable = print) -> bool:
    names = list(SUITES) if name == "all" else [name]
    ok = True
    for suite in names:
        rng = np.random.Generator(np.random.PCG64(seed))
        for check, passed, value in SUITES[suite](rng):
            emit(f"{'PASS' if passed else 'FAIL'} [{suite}] {check}: {value:.3e}")
            ok = ok and bool(passed)
    return ok
