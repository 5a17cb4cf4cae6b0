"""Discretization maps between torus functions and N x N (diagonal or full) matrix algebras."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.stats import qmc

from .coherent import CS1Family, beta_coefficients, cs1_state, cs1_state_matrix
from .torus import (MapParam, _as_points, cat_matrix, frac, lattice_map_U, lattice_permutation,
                    nearest_lattice)
from .weyl import ZERO_PHASES, admissible_phases, heisenberg_step, hs_norm, is_admissible

ADAPTIVE_START = 16
ADAPTIVE_CAP = 256
ADAPTIVE_TOL = 1e-8


@dataclass(frozen=True)
class TestFunction:
    """A function on T^2 with optional exact hooks.

    `func` maps (..., 2) arrays to (...) arrays. `square_average(centre, side)`,
    when given, returns the exact average over axis-aligned squares and is used
    instead of quadrature. `fourier` maps integer pairs to coefficients of
    exp(2 pi i n.x) for trigonometric polynomials.
    """

    __test__ = False  # not a pytest class

    func: Callable
    kind: str = "lipschitz"
    square_average: Optional[Callable] = None
    fourier: Optional[dict] = None

    def __call__(self, x):
        return self.func(_as_points(x))


def fourier_mode(n1: int, n2: int) -> TestFunction:
    """e_n(x) = exp(2 pi i (n1 x1 + n2 x2)), with its exact square averages."""
    n = np.array([n1, n2], dtype=float)

    def f(x):
        return np.exp(2j * np.pi * (x @ n))

    def avg(centre, side):
        # product of sinc factors; sin(pi k s)/(pi k s) -> 1 at k = 0
        fac = np.sinc(n * side)
        return f(np.asarray(centre, dtype=float)) * fac[0] * fac[1]

    return TestFunction(f, "fourier-poly", avg, {(int(n1), int(n2)): 1.0})


def trig_polynomial(coeffs: dict) -> TestFunction:
    """sum_n c_n exp(2 pi i n.x) for a finite coefficient map."""
    modes = [(c, fourier_mode(*k)) for k, c in coeffs.items()]

    def f(x):
        return sum(c * m.func(x) for c, m in modes)

    def avg(centre, side):
        return sum(c * m.square_average(centre, side) for c, m in modes)

    return TestFunction(f, "fourier-poly", avg, dict(coeffs))


def compose_linear(f: TestFunction, a) -> TestFunction:
    """f o A for an integer matrix A; exact for trigonometric polynomials.

    e_n(A x) = e_{A^tr n}(x), so the coefficient map is re-indexed.
    """
    a = np.asarray(a, dtype=np.int64)
    if f.fourier is None:
        return TestFunction(lambda x: f(frac(x @ a.T)), f.kind)
    out: dict = {}
    for k, c in f.fourier.items():
        key = tuple(int(v) for v in a.T @ np.array(k))
        out[key] = out.get(key, 0) + c
    return trig_polynomial(out)


def sin_x1() -> TestFunction:
    return trig_polynomial({(1, 0): -0.5j, (-1, 0): 0.5j})


def cos_x1() -> TestFunction:
    return trig_polynomial({(1, 0): 0.5, (-1, 0): 0.5})


def sin_sin() -> TestFunction:
    """sin(2 pi x1) sin(2 pi x2)."""
    return trig_polynomial({(1, 1): -0.25, (-1, -1): -0.25, (1, -1): 0.25, (-1, 1): 0.25})


def constant(c: complex) -> TestFunction:
    return TestFunction(lambda x: np.full(x.shape[:-1], c, dtype=complex), "fourier-poly",
                        lambda centre, side: np.full(np.shape(centre)[:-1], c, dtype=complex),
                        {(0, 0): c})


def lattice_points(n_dim: int) -> np.ndarray:
    """(N, N, 2) array of l / N."""
    g1, g2 = np.meshgrid(np.arange(n_dim), np.arange(n_dim), indexing="ij")
    return np.stack([g1, g2], axis=-1) / n_dim


# ---- Weyl (sampling) scheme on the diagonal algebra ----

def discretize_weyl(f: TestFunction, n_dim: int) -> np.ndarray:
    """Grid g(l) = f(l / N)."""
    return np.asarray(f(lattice_points(n_dim)), dtype=complex)


def dediscretize_beta(g: np.ndarray) -> TestFunction:
    """x -> <beta(x)| diag(g) |beta(x)>: cosine-blended interpolation of the grid."""
    g = np.asarray(g)
    n_dim = g.shape[0]

    def f(x):
        corners, w = beta_coefficients(n_dim, x)
        return np.sum(w**2 * g[corners[..., 0], corners[..., 1]], axis=-1)

    return TestFunction(f, "lipschitz")


def quasi_random_points(samples: int) -> np.ndarray:
    """Deterministic unscrambled Halton points in [0, 1)^2."""
    return qmc.Halton(d=2, scramble=False).random(samples)


def weyl_roundtrip_error(f: TestFunction, n_dim: int, samples: int = 4096) -> float:
    """sup over quasi-random x of |f(x) - dediscretize_beta(discretize_weyl(f, N))(x)|."""
    x = quasi_random_points(samples)
    back = dediscretize_beta(discretize_weyl(f, n_dim))
    return float(np.max(np.abs(f(x) - back(x))))


# ---- anti-Wick scheme on the diagonal algebra (CS3 states) ----

def _midpoint_offsets(quad: int) -> np.ndarray:
    t = (np.arange(quad) + 0.5) / quad - 0.5
    a, b = np.meshgrid(t, t, indexing="ij")
    return np.stack([a.ravel(), b.ravel()], axis=-1)


def square_average(f: TestFunction, centres, side: float, quad: Optional[int] = None):
    """Average of f over squares of the given side centred at `centres`.

    Uses the exact hook when available. Otherwise an M x M midpoint rule; with
    quad=None, M doubles from 16 until successive values agree to 1e-8 (cap 256).
    """
    centres = _as_points(centres)
    if f.square_average is not None and quad is None:
        return np.asarray(f.square_average(centres, side))

    flat = centres.reshape(-1, 2)

    def rule(m):
        offs = side * _midpoint_offsets(m)
        # chunk over centres to keep the point cloud below ~2**22 points
        step = max(1, (1 << 22) // len(offs))
        parts = [np.mean(f(frac(flat[i:i + step, None, :] + offs)), axis=-1)
                 for i in range(0, len(flat), step)]
        return np.concatenate(parts).reshape(centres.shape[:-1])

    if quad is not None:
        if quad < 1:
            raise ValueError("quadrature order must be positive")
        return rule(quad)
    m = ADAPTIVE_START
    prev = rule(m)
    while m < ADAPTIVE_CAP:
        m *= 2
        cur = rule(m)
        if np.max(np.abs(cur - prev)) < ADAPTIVE_TOL:
            return cur
        prev = cur
    return prev


def running_average(f: TestFunction, n_dim: int, x, quad: Optional[int] = None):
    """N^2 times the integral of f over the side-1/N square centred at x."""
    return square_average(f, x, 1.0 / n_dim, quad)


def antiwick_discretize(f: TestFunction, n_dim: int, quad: Optional[int] = None) -> np.ndarray:
    """Grid J(f)(l) = running average of f around l / N."""
    return np.asarray(running_average(f, n_dim, lattice_points(n_dim), quad), dtype=complex)


def antiwick_dediscretize(g: np.ndarray, x):
    """Step interpolation: value of g at the nearest lattice point of x."""
    g = np.asarray(g)
    idx = nearest_lattice(x, g.shape[0])
    return g[idx[..., 0], idx[..., 1]]


# ---- anti-Wick scheme on M_N (CS1 states) ----

def cell_averages(f: TestFunction, n_dim: int, quad: Optional[int] = None) -> np.ndarray:
    """Averages of f over the cells [p/N, (p+1)/N), flattened to index p1*N + p2."""
    centres = lattice_points(n_dim) + 0.5 / n_dim
    return np.asarray(square_average(f, centres, 1.0 / n_dim, quad), dtype=complex).ravel()


def antiwick_quantize_MN(f: TestFunction, fam: CS1Family, quad: Optional[int] = None) -> np.ndarray:
    """N int f(x) |C(x)><C(x)| dx = (1/N) sum_p fbar_p W(p)|C><C|W(p)^*."""
    v = cs1_state_matrix(fam)
    fbar = cell_averages(f, fam.n_dim, quad)
    return (v * fbar[None, :]) @ v.conj().T / fam.n_dim


def antiwick_dequantize_MN(x_op: np.ndarray, fam: CS1Family, x) -> complex:
    """<C(x), X C(x)>."""
    c = cs1_state(fam, x)
    return complex(np.vdot(c, x_op @ c))


# ---- lattice dynamics ----

class DiagonalDynamics:
    """The automorphism g -> g o V_alpha of the diagonal algebra, via a permutation table."""

    def __init__(self, p: MapParam):
        self.param = p
        self.perm = lattice_permutation(p, 1)
        if len(np.unique(self.perm)) != self.perm.size:
            raise RuntimeError("lattice map is not a bijection")

    def table(self, steps: int) -> np.ndarray:
        out = np.arange(self.perm.size)
        for _ in range(steps):
            out = self.perm[out]
        return out

    def apply(self, g: np.ndarray, steps: int = 1) -> np.ndarray:
        g = np.asarray(g)
        return g.ravel()[self.table(steps)].reshape(g.shape)


def diagonal_dynamics_apply(dyn: DiagonalDynamics, g: np.ndarray, steps: int) -> np.ndarray:
    """Output(l) = g(V_alpha^steps(l))."""
    return dyn.apply(g, steps)


def egorov_defect(p: MapParam, f: TestFunction, steps: int) -> float:
    """RMS over the lattice of f(V^k(l)/N) - f(S^k(l/N)) (diagonal scheme, sampling J)."""
    n = p.n_lattice
    evolved = DiagonalDynamics(p).apply(discretize_weyl(f, n), steps)
    # S^k(l/N) = U^k(l)/N, iterated in lattice units so integer alpha stays exact
    y = lattice_points(n) * n
    for _ in range(steps):
        y = lattice_map_U(p, y)
    classical = np.asarray(f(y / n), dtype=complex)
    return float(np.sqrt(np.mean(np.abs(evolved - classical) ** 2)))


def cat_phases(t, n_dim: int):
    """Zero phases when admissible, else the first admissible pair."""
    if is_admissible(t, n_dim, ZERO_PHASES):
        return ZERO_PHASES
    return admissible_phases(t, n_dim)[0]


def egorov_defect_cat(alpha: int, f: TestFunction, n_dim: int, steps: int,
                      quad: Optional[int] = None) -> float:
    """HS norm of Theta_N^k(J(f)) - J(f o T^{-k}) with J the CS1 anti-Wick map on M_N.

    Theta_N(W(n)) = W(T n) corresponds to composing with T^{-1} on symbols.
    """
    t = cat_matrix(alpha)
    fam = CS1Family(n_dim, cat_phases(t, n_dim))
    t_inv = np.round(np.linalg.inv(np.linalg.matrix_power(t, steps))).astype(np.int64)
    pulled = compose_linear(f, t_inv)
    lhs = heisenberg_step(antiwick_quantize_MN(f, fam, quad), t, fam.phases, steps)
    rhs = antiwick_quantize_MN(pulled, fam, quad)
    return hs_norm(lhs - rhs)
