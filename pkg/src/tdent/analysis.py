"""Time-scale analysis of entropy series and a classical Monte-Carlo entropy oracle."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .entropy import EntropySeries, PartitionSpec, entropy_series
from .torus import MapParam, RegimeClass, cat_matrix, classify_regime, sawtooth_apply

MAX_DEGREE = 8


@dataclass(frozen=True)
class LyapunovEstimate:
    alpha: float
    degree: int
    value: float
    n_lattice: int
    n_max: int


@dataclass(frozen=True)
class BreakingTimeReport:
    predicted: Optional[float]
    detected: Optional[int]
    transition: Optional[float]


def theoretical_lyapunov(alpha: float) -> float:
    """ln of the expanding eigenvalue of [[1+a, 1], [a, 1]]; 0 unless hyperbolic."""
    if classify_regime(alpha) is not RegimeClass.HYPERBOLIC:
        return 0.0
    tr = alpha + 2.0
    # the larger-modulus root of z^2 - tr z + 1
    lam = (abs(tr) + math.sqrt(tr * tr - 4.0)) / 2.0
    return math.log(lam)


def predicted_breaking_time(alpha: float, n_lattice: float) -> float:
    """tau_B = 2 ln N / ln lambda."""
    lyap = theoretical_lyapunov(alpha)
    if lyap <= 0:
        raise ValueError(f"breaking time needs a hyperbolic alpha, got {alpha}")
    return 2.0 * math.log(n_lattice) / lyap


def predicted_transition_time(d: int, n_lattice: float) -> float:
    """n_bar = log_D N^2."""
    if d < 2:
        raise ValueError("transition time needs D >= 2")
    return 2.0 * math.log(n_lattice) / math.log(d)


def detect_plateau(series: EntropySeries, n_lattice: int, tol: float = 0.01) -> Optional[int]:
    """First n with H(n) >= 2 ln N - tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    top = 2.0 * math.log(n_lattice)
    for n, h in zip(series.steps, series.entropies):
        if h >= top - tol:
            return n
    return None


def breaking_time_report(alpha: float, series: EntropySeries, n_lattice: int, d: int,
                         tol: float = 0.01) -> BreakingTimeReport:
    try:
        pred = predicted_breaking_time(alpha, n_lattice)
    except ValueError:
        pred = None
    trans = predicted_transition_time(d, n_lattice) if d >= 2 else None
    return BreakingTimeReport(pred, detect_plateau(series, n_lattice, tol), trans)


def compactified_time(n) -> np.ndarray:
    """s_n = (2/pi) arctan(n - 1), mapping n >= 1 onto [0, 1)."""
    out = 2.0 / np.pi * np.arctan(np.asarray(n, dtype=float) - 1.0)
    return out if np.ndim(out) else float(out)


def lagrange_at_one(values: Sequence[float], nodes: Sequence[float]) -> float:
    """Value at s = 1 of the interpolating polynomial through (nodes, values)."""
    s = np.asarray(nodes, dtype=float)
    if len(np.unique(s)) != len(s):
        raise ValueError("interpolation nodes must be distinct")
    total = 0.0
    for i, hi in enumerate(values):
        w = 1.0
        for j in range(len(s)):
            if j != i:
                w *= (1.0 - s[j]) / (s[i] - s[j])
        total += hi * w
    return float(total)


def lagrange_extrapolate(series: EntropySeries, m: int, alpha: float = float("nan"),
                         n_lattice: int = 0) -> LyapunovEstimate:
    """l^m: extrapolate h(n) = H(n)/n to compactified time 1 from the first m points."""
    if not 2 <= m <= len(series):
        raise ValueError(f"degree m={m} must satisfy 2 <= m <= {len(series)}")
    if m > MAX_DEGREE:
        raise ValueError(f"degree above {MAX_DEGREE} is too ill-conditioned")
    steps = series.steps[:m]
    value = lagrange_at_one(series.rates[:m], compactified_time(steps))
    return LyapunovEstimate(alpha, m, value, n_lattice, len(series))


def _sweep_row(alpha, n_lattice, labels, n_max, degrees):
    p = MapParam(float(alpha), n_lattice)
    series = entropy_series(p, PartitionSpec(n_lattice, labels), n_max)
    return [lagrange_extrapolate(series, m, float(alpha), n_lattice) for m in degrees]


def lyapunov_sweep(alphas: Sequence[float], n_lattice: int, part: PartitionSpec, n_max: int,
                   degrees: Sequence[int], threads: int = 1) -> list:
    """Rows of LyapunovEstimate (one row per alpha, in input order)."""
    labels = np.array(part.labels)
    args = [(a, n_lattice, labels, n_max, list(degrees)) for a in alphas]
    if threads <= 1:
        return [_sweep_row(*a) for a in args]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map preserves input order regardless of completion order
        return list(pool.map(lambda a: _sweep_row(*a), args))


@dataclass(frozen=True)
class KSEstimate:
    entropies: list
    slope: float
    undersampled: bool


def _grid_codes(x: np.ndarray, cells: tuple) -> np.ndarray:
    k1, k2 = cells
    i = np.minimum((x[:, 0] * k1).astype(np.int64), k1 - 1)
    j = np.minimum((x[:, 1] * k2).astype(np.int64), k2 - 1)
    return i * k2 + j


def classical_ks_oracle(p: MapParam, cells: tuple, n_max: int, samples: int, seed: int,
                        steps_per_tick: int = 1) -> KSEstimate:
    """Monte-Carlo Shannon entropies of n-step itineraries on a rectangular grid partition.

    entropies[n-1] estimates S(E^[0, n-1]); slope is S(n_max) - S(n_max - 1).
    steps_per_tick=0 replaces the map by the identity.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    x = rng.random((samples, 2))
    ncell = cells[0] * cells[1]
    words = np.zeros(samples, dtype=np.int64)
    ents, undersampled = [], False
    for n in range(1, n_max + 1):
        words = words * ncell + _grid_codes(x, cells)
        _, counts = np.unique(words, return_counts=True)
        freq = counts / samples
        ents.append(float(-np.sum(freq * np.log(freq))))
        if samples < 100 * len(counts):
            undersampled = True
        for _ in range(steps_per_tick):
            x = sawtooth_apply(p, x)
    slope = ents[-1] - ents[-2] if n_max >= 2 else ents[-1]
    return KSEstimate(ents, slope, undersampled)


def elliptic_period_check(alpha: int) -> int:
    """Smallest j with T_alpha^j = Id, for alpha in {-1, -2, -3}."""
    if alpha not in (-1, -2, -3):
        raise ValueError("elliptic periods are tabulated for alpha in {-1, -2, -3}")
    t = cat_matrix(alpha)
    cur = np.eye(2, dtype=np.int64)
    for j in range(1, 13):
        cur = cur @ t
        if np.array_equal(cur, np.eye(2, dtype=np.int64)):
            return j
    raise RuntimeError("no period found up to 12")
