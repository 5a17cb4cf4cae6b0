"""Finite Weyl algebra on C^N: Weyl operators, expansion and cat-map dynamics."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np


@dataclass(frozen=True)
class RepPhases:
    """Representation labels (u, v) in [0, 1), kept as exact rationals."""

    u: Fraction = Fraction(0)
    v: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u) % 1)
        object.__setattr__(self, "v", Fraction(self.v) % 1)

    def as_floats(self) -> tuple[float, float]:
        return float(self.u), float(self.v)


ZERO_PHASES = RepPhases()


def symplectic_form(n, m):
    """sigma(n, m) = n1 m2 - n2 m1."""
    n = np.asarray(n)
    m = np.asarray(m)
    return n[..., 0] * m[..., 1] - n[..., 1] * m[..., 0]


def weyl_phase(n_dim: int, phases: RepPhases, n) -> np.ndarray:
    """Scalar prefactor exp(i pi/N (-n1 n2 + 2 n1 u + 2 n2 v)) of W(n)."""
    n = np.asarray(n)
    u, v = phases.as_floats()
    n1 = n[..., 0].astype(float)
    n2 = n[..., 1].astype(float)
    # n1*n2 can be large for evolved indices; reduce the integer part mod 2N first
    prod = np.mod(n[..., 0].astype(np.int64) * n[..., 1].astype(np.int64), 2 * n_dim)
    return np.exp(1j * np.pi / n_dim * (-prod + 2 * n1 * u + 2 * n2 * v))


def weyl_matrix(n_dim: int, phases: RepPhases, n) -> np.ndarray:
    """Dense N x N matrix of W(n): W|j> = phase * exp(-2 pi i j n2/N) |j+n1>."""
    n1, n2 = (int(c) for c in n)
    j = np.arange(n_dim)
    out = np.zeros((n_dim, n_dim), dtype=complex)
    out[(j + n1) % n_dim, j] = weyl_phase(n_dim, phases, np.array([n1, n2])) * np.exp(
        -2j * np.pi * np.mod(j * n2, n_dim) / n_dim
    )
    return out


def weyl_compose_phase(n_dim: int, n, m) -> complex:
    """Phase c with W(n) W(m) = c W(n+m)."""
    return complex(np.exp(1j * np.pi * float(symplectic_form(n, m)) / n_dim))


def weyl_trace(n_dim: int, phases: RepPhases, n) -> complex:
    """Normalized trace tau_N(W(n)) = phase * periodic delta(n, 0)."""
    n = np.asarray(n)
    if n[0] % n_dim or n[1] % n_dim:
        return 0j
    return complex(weyl_phase(n_dim, phases, n))


def tau(x: np.ndarray) -> complex:
    """Normalized trace Tr(X)/N."""
    return complex(np.trace(x) / x.shape[0])


def hs_norm(x: np.ndarray) -> float:
    """Normalized Hilbert-Schmidt norm sqrt(tau(X^* X))."""
    x = np.asarray(x)
    return float(np.sqrt(np.sum(np.abs(x) ** 2) / x.shape[0]))


def _index_grid(n_dim: int) -> np.ndarray:
    p1, p2 = np.meshgrid(np.arange(n_dim), np.arange(n_dim), indexing="ij")
    return np.stack([p1, p2], axis=-1)


def weyl_expand(x: np.ndarray, phases: RepPhases = ZERO_PHASES) -> np.ndarray:
    """Coefficients c[p1, p2] = tau(X W(-p)) so that X = sum_p c_p W(p).

    For fixed p1, tau(X W(-p)) is a DFT over the entries X[k, k - p1],
    which gives all N^2 coefficients in O(N^2 log N).
    """
    x = np.asarray(x, dtype=complex)
    n_dim = x.shape[0]
    k = np.arange(n_dim)
    diags = np.stack([x[k, (k - p1) % n_dim] for p1 in range(n_dim)])
    # sum_k d[k] exp(+2 pi i k p2 / N) == N * ifft
    sums = np.fft.ifft(diags, axis=1) * n_dim
    grid = _index_grid(n_dim)
    return weyl_phase(n_dim, phases, -grid) * sums / n_dim


def weyl_combine(coeffs: np.ndarray, indices: np.ndarray, n_dim: int,
                 phases: RepPhases = ZERO_PHASES) -> np.ndarray:
    """Dense sum_k coeffs[k] W(indices[k]) for arbitrary (unreduced) integer indices."""
    coeffs = np.asarray(coeffs, dtype=complex).ravel()
    indices = np.asarray(indices, dtype=np.int64).reshape(-1, 2)
    j = np.arange(n_dim)
    scale = coeffs * weyl_phase(n_dim, phases, indices)
    rows = np.mod(indices[:, :1] + j[None, :], n_dim)
    vals = scale[:, None] * np.exp(
        -2j * np.pi * np.mod(indices[:, 1:2] * j[None, :], n_dim) / n_dim
    )
    flat = (rows * n_dim + j[None, :]).ravel()
    out = np.zeros(n_dim * n_dim, dtype=complex)
    # bincount sums in input order, so the result does not depend on threading
    out += np.bincount(flat, weights=vals.real.ravel(), minlength=n_dim * n_dim)
    out += 1j * np.bincount(flat, weights=vals.imag.ravel(), minlength=n_dim * n_dim)
    return out.reshape(n_dim, n_dim)


def weyl_reconstruct(coeffs: np.ndarray, phases: RepPhases = ZERO_PHASES) -> np.ndarray:
    n_dim = coeffs.shape[0]
    return weyl_combine(coeffs, _index_grid(n_dim), n_dim, phases)


def _check_sl2(t) -> np.ndarray:
    t = np.asarray(t, dtype=np.int64)
    if t.shape != (2, 2) or round(np.linalg.det(t)) != 1:
        raise ValueError("T must be a 2x2 integer matrix with determinant 1")
    return t


def is_admissible(t, n_dim: int, phases: RepPhases) -> bool:
    """(T^tr - Id)(u, v) - N/2 (ac, bd) has integer entries (exact arithmetic)."""
    (a, b), (c, d) = _check_sl2(t).tolist()
    u, v = phases.u, phases.v
    r1 = (a - 1) * u + c * v - Fraction(n_dim * a * c, 2)
    r2 = b * u + (d - 1) * v - Fraction(n_dim * b * d, 2)
    return r1.denominator == 1 and r2.denominator == 1


def admissible_phases(t, n_dim: int) -> list[RepPhases]:
    """All (u, v) for which the cat map T is implementable in the (u, v) representation."""
    (a, b), (c, d) = _check_sl2(t).tolist()
    trace = a + d
    if trace == 2:
        raise ValueError("parabolic trace, Tr(T) = 2 makes the admissibility denominator vanish")
    # offset N/2 (ac, bd) mod 1: zero for even N, a half-unit vector for odd N
    p = (Fraction(n_dim * a * c, 2) % 1, Fraction(n_dim * b * d, 2) % 1)
    den = trace - 2
    period = abs(den)
    seen: dict[tuple[Fraction, Fraction], None] = {}
    for m1 in range(period):
        for m2 in range(period):
            w1, w2 = p[0] + m1, p[1] + m2
            u = Fraction((1 - d) * w1 + c * w2, den) % 1
            v = Fraction(b * w1 + (1 - a) * w2, den) % 1
            seen.setdefault((u, v), None)
    return [RepPhases(u, v) for u, v in seen]


_PARITY_TABLE = {
    ((0, 1), (1, 0)): 1, ((1, 0), (0, 1)): 1,
    ((0, 1), (1, 1)): 2, ((1, 0), (1, 1)): 2,
    ((1, 1), (1, 0)): 3, ((1, 1), (0, 1)): 3,
}


def parity_class(t) -> int:
    """Class 1, 2 or 3 of an SL2(Z) matrix from the parity pattern of its entries.

    admissible_phases does not use this table: it takes the half-integer offset
    directly from N/2 (ac, bd), which is what the admissibility condition needs.
    """
    key = tuple(tuple(int(v) % 2 for v in row) for row in np.asarray(t).tolist())
    return _PARITY_TABLE[key]


def heisenberg_step(x: np.ndarray, t, phases: RepPhases = ZERO_PHASES, steps: int = 1) -> np.ndarray:
    """Theta_N^steps(X) = sum_p c_p W(T^steps p), with c = weyl_expand(X)."""
    t = _check_sl2(t)
    n_dim = x.shape[0]
    if not is_admissible(t, n_dim, phases):
        raise ValueError(f"phases {phases} are not admissible for T={t.tolist()} at N={n_dim}")
    coeffs = weyl_expand(x, phases)
    tk = np.linalg.matrix_power(t, steps)
    idx = _index_grid(n_dim).reshape(-1, 2) @ tk.T
    return weyl_combine(coeffs.ravel(), idx, n_dim, phases)


def weyl_orbit_check(n_dim: int, phases: RepPhases, ns: Iterable) -> float:
    """Max entrywise deviation of W(n)^* W(n) from Id over the given indices."""
    worst = 0.0
    eye = np.eye(n_dim)
    for n in ns:
        w = weyl_matrix(n_dim, phases, n)
        worst = max(worst, float(np.max(np.abs(w.conj().T @ w - eye))))
    return worst
