"""Torus arithmetic, sawtooth/cat map dynamics and their lattice versions.

Points of the torus are arrays whose last axis has length 2; every function
broadcasts over leading axes. Lattice points are integer arrays reduced mod N.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

# Values are rounded to this many decimals before floor/frac so that exact
# lattice inputs (k/N in floating point) never land in the wrong cell.
FLOOR_DECIMALS = 12


@dataclass(frozen=True)
class MapParam:
    alpha: float
    n_lattice: int

    def __post_init__(self):
        if int(self.n_lattice) != self.n_lattice or self.n_lattice < 2:
            raise ValueError(f"n_lattice must be an integer >= 2, got {self.n_lattice}")
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        # within the floor tolerance of an integer the rounded and exact
        # lattice maps disagree, so such alphas are taken as that integer
        near = round(float(self.alpha))
        if abs(self.alpha - near) < 10.0 ** -FLOOR_DECIMALS:
            object.__setattr__(self, "alpha", float(near))

    @property
    def is_integer(self) -> bool:
        return float(self.alpha).is_integer()


class RegimeClass(str, Enum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"


def safe_floor(t):
    """floor() applied after rounding to FLOOR_DECIMALS digits."""
    return np.floor(np.round(t, FLOOR_DECIMALS))


def frac(t):
    """Fractional part t - floor(t), in [0, 1)."""
    t = np.asarray(t, dtype=float)
    out = t - safe_floor(t)
    out = np.where(out < 0.0, 0.0, out)
    out = np.where(out >= 1.0, out - 1.0, out)
    return out if out.ndim else float(out)


def _as_points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != 2:
        raise ValueError(f"points need a trailing axis of length 2, got shape {x.shape}")
    return x


def torus_distance(a, b):
    """Shortest distance on T^2 = R^2/Z^2 between points a and b."""
    a = frac(_as_points(a))
    b = frac(_as_points(b))
    d = np.abs(a - b)
    # reduced coordinates differ by < 1, so min(d, 1-d) covers the 3x3 shift window
    d = np.minimum(d, 1.0 - d)
    out = np.sqrt(np.sum(d * d, axis=-1))
    return out if np.ndim(out) else float(out)


def sawtooth_apply(p: MapParam, x):
    """S_alpha(x) = [[1+a, 1], [a, 1]] . (frac(x1), x2) mod 1."""
    x = _as_points(x)
    a = float(p.alpha)
    x1 = frac(x[..., 0])
    x2 = x[..., 1]
    return frac(np.stack([(1.0 + a) * x1 + x2, a * x1 + x2], axis=-1))


def sawtooth_inverse(p: MapParam, x):
    """Inverse sawtooth map: [[1, 0], [-a, 1]] . frac((x1 - x2, x2)) mod 1."""
    x = _as_points(x)
    a = float(p.alpha)
    y1 = frac(x[..., 0] - x[..., 1])
    y2 = frac(x[..., 1])
    return frac(np.stack([y1, -a * y1 + y2], axis=-1))


def sawtooth_power(p: MapParam, x, steps: int):
    """Apply S_alpha (steps > 0) or its inverse (steps < 0) |steps| times."""
    step = sawtooth_apply if steps >= 0 else sawtooth_inverse
    y = frac(_as_points(x))
    for _ in range(abs(steps)):
        y = step(p, y)
    return y


def cat_matrix(alpha: int) -> np.ndarray:
    """Integer matrix T_alpha = [[1+alpha, 1], [alpha, 1]] (determinant 1)."""
    if int(alpha) != alpha:
        raise ValueError(f"cat_matrix needs an integer alpha, got {alpha}")
    a = int(alpha)
    return np.array([[1 + a, 1], [a, 1]], dtype=np.int64)


def lattice_map_U(p: MapParam, y):
    """U_alpha(y) = N * S_alpha(y / N), for y in [0, N)^2.

    Evaluated directly in lattice units, so integer inputs with integer alpha
    stay exact in floating point.
    """
    y = _as_points(y)
    n = p.n_lattice
    a = float(p.alpha)
    y1 = _mod_n(y[..., 0], n)
    y2 = y[..., 1]
    return _mod_n(np.stack([(1.0 + a) * y1 + y2, a * y1 + y2], axis=-1), n)


def _mod_n(v, n: int):
    v = np.asarray(v, dtype=float)
    out = v - n * safe_floor(v / n)
    out = np.where(out < 0.0, 0.0, out)
    return np.where(out >= n, out - n, out)


def lattice_map_V(p: MapParam, l, steps: int = 1) -> np.ndarray:
    """V_alpha(l) = floor(U_alpha(l)) on (Z/NZ)^2, iterated `steps` times."""
    n = p.n_lattice
    out = np.mod(np.asarray(l, dtype=np.int64), n)
    if p.is_integer:
        t = cat_matrix(p.alpha)
        for _ in range(steps):
            out = np.mod(out @ t.T, n)
        return out
    for _ in range(steps):
        out = np.mod(safe_floor(lattice_map_U(p, out)).astype(np.int64), n)
    return out


def lattice_permutation(p: MapParam, steps: int = 1) -> np.ndarray:
    """Flat permutation table: perm[l1*N + l2] = flat index of V_alpha^steps(l)."""
    n = p.n_lattice
    grid = np.stack(np.meshgrid(np.arange(n), np.arange(n), indexing="ij"), axis=-1)
    img = lattice_map_V(p, grid.reshape(-1, 2), steps)
    return img[:, 0] * n + img[:, 1]


def nearest_lattice(x, n: int) -> np.ndarray:
    """x_hat_N = floor(N x + 1/2) mod N, componentwise."""
    x = _as_points(x)
    return np.mod(safe_floor(n * frac(x) + 0.5).astype(np.int64), n)


def classify_regime(alpha: float) -> RegimeClass:
    """Elliptic on (-4, 0), parabolic at the endpoints, hyperbolic otherwise."""
    if alpha == 0 or alpha == -4:
        return RegimeClass.PARABOLIC
    if -4 < alpha < 0:
        return RegimeClass.ELLIPTIC
    return RegimeClass.HYPERBOLIC
