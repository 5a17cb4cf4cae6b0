"""Expansion bounds, discontinuity curves of the sawtooth maps and shadowing of lattice orbits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .torus import MapParam, frac, lattice_map_U, lattice_map_V, nearest_lattice, sawtooth_inverse, torus_distance

# samples of gamma_0 per unit of eta^q; spacing along gamma_q is then <= 1/DENSITY
DENSITY = 4096


@dataclass(frozen=True)
class ExpansionBound:
    alpha: float
    eta: float


def eta_bound(alpha: float) -> ExpansionBound:
    """Largest singular value of [[1+a, 1], [a, 1]] from the eigenvalues of S^T S."""
    a = float(alpha)
    tr = (1 + a) ** 2 + a * a + 2.0  # trace of S^T S; its determinant is 1
    eta2 = (tr + math.sqrt(tr * tr - 4.0)) / 2.0
    return ExpansionBound(a, math.sqrt(eta2))


def sawtooth_linear_part(alpha: float) -> np.ndarray:
    a = float(alpha)
    return np.array([[1.0 + a, 1.0], [a, 1.0]])


@dataclass(frozen=True)
class Polyline:
    points: np.ndarray  # (K, 2) samples on the torus
    resolution: float   # every point of the curve is within this arc length of a sample


def gamma_polyline(p: MapParam, q: int, samples: int | None = None) -> Polyline:
    """gamma_q = S^{-q}(gamma_0), gamma_0 = {x1 = 0}, sampled from equispaced points of gamma_0."""
    eta = eta_bound(p.alpha).eta
    if samples is None:
        samples = int(math.ceil(DENSITY * eta**q))
    t = np.arange(samples) / samples
    pts = np.stack([np.zeros(samples), t], axis=-1)
    for _ in range(q):
        pts = sawtooth_inverse(p, pts)
    # an arc of gamma_0 of length 1/samples has image of length <= eta^q / samples
    return Polyline(frac(pts), eta**q / samples)


class DiscontinuitySet:
    """Union of gamma_0 .. gamma_{n-1} with periodic nearest-sample queries."""

    def __init__(self, p: MapParam, n: int, samples: int | None = None):
        lines = [gamma_polyline(p, q, None if samples is None else samples) for q in range(n)]
        pts = np.concatenate([ln.points for ln in lines])
        pts = np.where(pts >= 1.0, 0.0, pts)
        self.tree = cKDTree(pts, boxsize=1.0)
        self.resolution = max(ln.resolution for ln in lines)

    def upper(self, x) -> np.ndarray:
        """Distance to the nearest sample: an upper bound on the distance to the set."""
        d, _ = self.tree.query(frac(np.asarray(x, dtype=float)))
        return d

    def lower(self, x) -> np.ndarray:
        """Upper bound minus the sampling resolution: a lower bound on the true distance."""
        return np.maximum(self.upper(x) - self.resolution, 0.0)


def distance_to_discontinuity(x, p: MapParam, n: int, samples: int | None = None):
    """min over q < n of the distance from x to sampled gamma_q (an upper bound)."""
    out = DiscontinuitySet(p, n, samples).upper(x)
    return out if np.ndim(out) else float(out)


def tilde_n(alpha: float, n: int) -> float:
    return 2.0 * math.sqrt(2.0) * n * eta_bound(alpha).eta ** (2 * n)


@dataclass(frozen=True)
class GoodSetThreshold:
    epsilon: float
    tilde_n: float
    vacuous: bool  # N <= tilde_N + 3: no shadowing guarantee at this N


def good_set_threshold(p: MapParam, n: int) -> GoodSetThreshold:
    nt = tilde_n(p.alpha, n)
    return GoodSetThreshold(nt / (2.0 * p.n_lattice), nt, p.n_lattice <= nt + 3)


def good_set_member(x, p: MapParam, n: int, dset: DiscontinuitySet | None = None):
    """x_hat_N / N lies outside the closed strips of width tilde_N/(2N) around gamma_0..gamma_{n-1}.

    Uses the conservative lower bound on the distance, so sampling never admits a bad point.
    """
    dset = dset or DiscontinuitySet(p, n)
    thr = good_set_threshold(p, n).epsilon
    xhat = nearest_lattice(x, p.n_lattice) / p.n_lattice
    return dset.lower(xhat) > thr


def shadowing_error(x, p: MapParam, q: int):
    """Torus distance between U^q(N x)/N and V^q(x_hat_N)/N."""
    n = p.n_lattice
    x = np.asarray(x, dtype=float)
    y = frac(x) * n
    for _ in range(q):
        y = lattice_map_U(p, y)
    lat = lattice_map_V(p, nearest_lattice(x, n), q)
    return torus_distance(y / n, lat / n)


def shadowing_bound(p: MapParam, q: int) -> float:
    """(sqrt 2 / N) (eta^{q+1} - 1)/(eta - 1)."""
    eta = eta_bound(p.alpha).eta
    return math.sqrt(2.0) / p.n_lattice * (eta ** (q + 1) - 1.0) / (eta - 1.0)


def sample_good_set(p: MapParam, n: int, count: int, seed: int, max_draws: int = 10**6):
    """Rejection-sample up to `count` good-set points; returns (points, draws used)."""
    rng = np.random.Generator(np.random.PCG64(seed))
    dset = DiscontinuitySet(p, n)
    found, draws = [], 0
    batch = 10**4
    while draws < max_draws and sum(len(f) for f in found) < count:
        x = rng.random((batch, 2))
        draws += batch
        found.append(x[good_set_member(x, p, n, dset)])
    pts = np.concatenate(found)[:count] if found else np.zeros((0, 2))
    return pts, draws


@dataclass(frozen=True)
class StripEstimate:
    measure: float
    sigma: float
    bound: float


def strip_measure_bound(alpha: float, n: int, eps: float) -> float:
    eta = eta_bound(alpha).eta
    return eps * n * (2.0 * eta**n + math.pi * eps)


def strip_measure_mc(p: MapParam, n: int, eps: float, samples: int, seed: int) -> StripEstimate:
    """Monte-Carlo estimate of the measure of the union of closed eps-strips around gamma_0..gamma_{n-1}.

    Membership uses the lower distance bound, so the estimate errs on the large side.
    """
    bound = strip_measure_bound(p.alpha, n, eps)
    if eps <= 0:
        return StripEstimate(0.0, 0.0, bound)
    rng = np.random.Generator(np.random.PCG64(seed))
    dset = DiscontinuitySet(p, n)
    hits = 0
    for start in range(0, samples, 10**5):
        x = rng.random((min(10**5, samples - start), 2))
        hits += int(np.count_nonzero(dset.lower(x) <= eps))
    est = hits / samples
    return StripEstimate(est, math.sqrt(est * (1 - est) / samples), bound)


def norm_sandwich(alpha: float, vectors: np.ndarray):
    """Ratios ||S v|| / ||v|| and ||S^-1 v|| / ||v|| for the linear part S."""
    s = sawtooth_linear_part(alpha)
    v = np.asarray(vectors, dtype=float)
    nv = np.linalg.norm(v, axis=-1)
    fwd = np.linalg.norm(v @ s.T, axis=-1) / nv
    bwd = np.linalg.norm(v @ np.linalg.inv(s).T, axis=-1) / nv
    return fwd, bwd
