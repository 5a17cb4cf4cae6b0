"""Coherent-state families on the torus: binomial (CS1), lattice (CS3) and beta states."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lgamma, log

import numpy as np

from .torus import _as_points, frac, nearest_lattice, safe_floor, torus_distance
from .weyl import ZERO_PHASES, RepPhases, weyl_matrix, weyl_phase


def binary_entropy(t):
    """eta(t) = -t log2 t - (1-t) log2(1-t), with eta(0) = eta(1) = 0."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(t > 0, -t * np.log2(np.where(t > 0, t, 1.0)), 0.0)
        b = np.where(t < 1, -(1 - t) * np.log2(np.where(t < 1, 1 - t, 1.0)), 0.0)
    out = a + b
    return out if out.ndim else float(out)


def log_binom(n: int, k):
    k = np.asarray(k, dtype=float)
    lg = np.vectorize(lgamma)
    return lgamma(n + 1) - lg(k + 1) - lg(n - k + 1)


def cs1_fundamental(n_dim: int) -> np.ndarray:
    """C_N(j) = 2^{-(N-1)/2} sqrt(binom(N-1, j)), evaluated in log space."""
    if n_dim < 1:
        raise ValueError("N must be >= 1")
    j = np.arange(n_dim)
    logc = 0.5 * (log_binom(n_dim - 1, j) - (n_dim - 1) * log(2.0))
    return np.exp(logc)


@dataclass(frozen=True)
class CS1Family:
    n_dim: int
    phases: RepPhases = ZERO_PHASES
    fundamental: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fundamental", cs1_fundamental(self.n_dim))


def cs1_cell(n_dim: int, x) -> np.ndarray:
    """Integer index floor(N x) of the cell containing x (x taken mod 1)."""
    return safe_floor(n_dim * frac(_as_points(x))).astype(np.int64) % n_dim


def cs1_state(fam: CS1Family, x) -> np.ndarray:
    """|C(x)> = W(floor(N x)) |C_N>."""
    return weyl_matrix(fam.n_dim, fam.phases, cs1_cell(fam.n_dim, x)) @ fam.fundamental


def cs1_state_matrix(fam: CS1Family) -> np.ndarray:
    """N x N^2 matrix whose column p1*N + p2 is W(p)|C_N>, p over (Z/NZ)^2."""
    n = fam.n_dim
    p1, p2 = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    p1 = p1.ravel()
    p2 = p2.ravel()
    j = np.arange(n)
    ph = weyl_phase(n, fam.phases, np.stack([p1, p2], axis=-1))
    out = np.zeros((n, n * n), dtype=complex)
    cols = np.arange(n * n)
    vals = ph[:, None] * np.exp(-2j * np.pi * np.mod(p2[:, None] * j[None, :], n) / n) * fam.fundamental[None, :]
    out[(p1[:, None] + j[None, :]) % n, cols[:, None]] = vals
    return out


def cs1_resolution_check(fam: CS1Family) -> float:
    """max |(1/N) sum_p W(p)|C><C|W(p)^* - Id|, the cell-sum form of N int |C(x)><C(x)| dx."""
    v = cs1_state_matrix(fam)
    res = v @ v.conj().T / fam.n_dim
    return float(np.max(np.abs(res - np.eye(fam.n_dim))))


def cs1_weyl_expectation(fam: CS1Family, n) -> complex:
    """<C_N, W(n) C_N> as an exact finite sum (n reduced mod N first)."""
    n = np.mod(np.asarray(n, dtype=np.int64), fam.n_dim)
    c = fam.fundamental
    return complex(np.vdot(c, weyl_matrix(fam.n_dim, fam.phases, n) @ c))


def cs1_expectation_closed_form(n_dim: int, n2: int) -> float:
    """N |<C_N, W(0, n2) C_N>|^2 = N cos^2(pi n2 / N)^(N-1)."""
    return n_dim * np.cos(np.pi * n2 / n_dim) ** (2 * (n_dim - 1))


def cs1_overlaps(fam: CS1Family) -> np.ndarray:
    """N |<C(p), C(q)>|^2 for all cells, as an N^2 x N^2 array indexed by p1*N + p2."""
    v = cs1_state_matrix(fam)
    g = v.conj().T @ v
    return fam.n_dim * np.abs(g) ** 2


def localization_scan(fam: CS1Family, d0: float) -> float:
    """Max of N |<C(x), C(y)>|^2 over cell pairs whose representatives are >= d0 apart.

    Cells are represented by their lower-left corners p/N; a pair is scanned when
    the corner distance is at least d0.
    """
    n = fam.n_dim
    if not 0 < d0 <= 0.5:
        raise ValueError("d0 must lie in (0, 1/2]")
    if d0 <= np.sqrt(2) / n:
        raise ValueError(f"d0={d0} does not separate neighbouring cells at N={n}")
    ov = cs1_overlaps(fam)
    idx = np.arange(n * n)
    pts = np.stack([idx // n, idx % n], axis=-1) / n
    worst = 0.0
    for a in range(n * n):
        far = torus_distance(pts[a], pts) >= d0
        if np.any(far):
            worst = max(worst, float(ov[a, far].max()))
    return worst


def cs3_state(n_dim: int, x) -> np.ndarray:
    """Index of the lattice basis vector |x_hat_N> carrying the CS3 state at x."""
    return nearest_lattice(x, n_dim)


def cs3_overcompleteness_check(n_dim: int, refine: int = 4) -> float:
    """max |I_{l,m} - delta_{l,m}| with I = N^2 int <l|C3(x)><C3(x)|m> dx.

    C3(x) is a basis vector, so I is diagonal and I_{l,l} = N^2 * area of
    {x : x_hat_N = l}. The area is counted exactly on a refined grid of
    (N*refine)^2 subcells whose edges include the cell boundaries.
    """
    k = n_dim * refine
    t = (np.arange(k) + 0.5) / k
    g1, g2 = np.meshgrid(t, t, indexing="ij")
    hits = cs3_state(n_dim, np.stack([g1.ravel(), g2.ravel()], axis=-1))
    counts = np.bincount(hits[:, 0] * n_dim + hits[:, 1], minlength=n_dim * n_dim)
    # integer counts divided once, so a perfect tiling gives exactly 1.0
    gram = np.diag(counts / refine**2)
    return float(np.max(np.abs(gram - np.eye(n_dim * n_dim))))


def beta_coefficients(n_dim: int, x):
    """Corner indices (4, 2) and weights (4,) of the beta state at x.

    Corners are floor(N x) + (mu, nu) for mu, nu in {0, 1}; weights are the
    cos/sin products of (pi/2) times the fractional parts of N x.
    """
    y = n_dim * frac(_as_points(x))
    base = safe_floor(y)
    t = np.clip(y - base, 0.0, 1.0)
    base = base.astype(np.int64)
    c = np.cos(0.5 * np.pi * t)
    s = np.sin(0.5 * np.pi * t)
    corners, weights = [], []
    for mu, w1 in ((0, c[..., 0]), (1, s[..., 0])):
        for nu, w2 in ((0, c[..., 1]), (1, s[..., 1])):
            corners.append(np.mod(base + np.array([mu, nu]), n_dim))
            weights.append(w1 * w2)
    return np.stack(corners, axis=-2), np.stack(weights, axis=-1)


def beta_state(n_dim: int, x) -> np.ndarray:
    """Dense unit vector in C^{N^2} (index l1*N + l2) with at most 4 nonzeros."""
    corners, weights = beta_coefficients(n_dim, x)
    out = np.zeros(n_dim * n_dim)
    np.add.at(out, corners[:, 0] * n_dim + corners[:, 1], weights)
    return out


def beta_gamma_formula(p: int, q: int, n_dim: int) -> float:
    """Gamma_{p,q} = delta(q, p) + (delta(q, p+1) + delta(q+1, p)) / pi, indices mod N."""
    p %= n_dim
    q %= n_dim
    out = 1.0 if p == q else 0.0
    if q == (p + 1) % n_dim:
        out += 1.0 / np.pi
    if (q + 1) % n_dim == p:
        out += 1.0 / np.pi
    return out


def beta_gamma_matrix(n_dim: int) -> np.ndarray:
    g = np.array([[beta_gamma_formula(p, q, n_dim) for q in range(n_dim)] for p in range(n_dim)])
    return np.kron(g, g)


def beta_overlap_matrix(n_dim: int, quad: int = 64) -> np.ndarray:
    """I_{l,m} = N^2 int <l|beta(x)><beta(x)|m> dx by an M x M midpoint rule per cell."""
    if quad < 1:
        raise ValueError("quadrature order must be positive")
    # inside one cell the weights depend only on the offset, so integrate once
    t = (np.arange(quad) + 0.5) / quad
    w = np.stack([np.cos(0.5 * np.pi * t), np.sin(0.5 * np.pi * t)])  # (2, M)
    one_d = w @ w.T / quad  # 2x2: int_0^1 w_a w_b dt
    n2 = n_dim * n_dim
    out = np.zeros((n2, n2))
    for b1 in range(n_dim):
        for b2 in range(n_dim):
            idx = [((b1 + mu) % n_dim) * n_dim + (b2 + nu) % n_dim for mu in (0, 1) for nu in (0, 1)]
            block = np.kron(one_d, one_d)
            for i, li in enumerate(idx):
                for k, mk in enumerate(idx):
                    out[li, mk] += block[i, k]
    return out


def beta_overlap_direct(n_dim: int, quad: int = 8) -> np.ndarray:
    """Slow oracle for beta_overlap_matrix: sums outer products of beta states at every node."""
    t = (np.arange(n_dim * quad) + 0.5) / (n_dim * quad)
    g1, g2 = np.meshgrid(t, t, indexing="ij")
    pts = np.stack([g1.ravel(), g2.ravel()], axis=-1)
    states = np.stack([beta_state(n_dim, x) for x in pts])
    return n_dim**2 * states.T @ states / len(pts)
