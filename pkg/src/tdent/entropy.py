"""Dynamical entropy of Weyl partitions of unity: Gram matrices, frequency fields, entropies."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .torus import MapParam, cat_matrix, lattice_map_V

# n * D * N^4 above this raises; the dense Gram matrix is N^2 x N^2
GRAM_BUDGET = 4e10
GRAM_MAX_SIDE = 6400  # N^2 cap, ~650 MB of complex128
CLIP_WINDOW = 1e-10


@dataclass(frozen=True)
class PartitionSpec:
    n_dim: int
    labels: np.ndarray = field(compare=False)

    def __post_init__(self):
        lab = np.mod(np.asarray(self.labels, dtype=np.int64).reshape(-1, 2), self.n_dim)
        if not 1 <= len(lab) <= self.n_dim**2:
            raise ValueError(f"need 1 <= D <= N^2 labels, got {len(lab)}")
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def has_duplicates(self) -> bool:
        return len(np.unique(self.labels, axis=0)) < len(self.labels)


def random_partition(n_dim: int, d: int, seed: int) -> PartitionSpec:
    """D labels drawn uniformly without replacement from (Z/NZ)^2."""
    rng = np.random.Generator(np.random.PCG64(seed))
    flat = rng.choice(n_dim * n_dim, size=d, replace=False)
    return PartitionSpec(n_dim, np.stack([flat // n_dim, flat % n_dim], axis=-1))


def parse_labels(text: str) -> np.ndarray:
    """'x,y;x,y;...' -> (D, 2) integer array."""
    try:
        rows = [tuple(int(v) for v in item.split(",")) for item in text.split(";") if item.strip()]
    except ValueError as exc:
        raise ValueError(f"bad partition string {text!r}") from exc
    if not rows or any(len(r) != 2 for r in rows):
        raise ValueError(f"bad partition string {text!r}")
    return np.array(rows, dtype=np.int64)


@dataclass
class EntropySeries:
    steps: list = field(default_factory=list)
    entropies: list = field(default_factory=list)

    def append(self, n: int, h: float):
        self.steps.append(n)
        self.entropies.append(h)

    @property
    def rates(self) -> list:
        return [h / n for n, h in zip(self.steps, self.entropies)]

    def rows(self):
        return list(zip(self.steps, self.entropies, self.rates))

    def __len__(self):
        return len(self.steps)


def _lattice(n_dim: int) -> np.ndarray:
    g1, g2 = np.meshgrid(np.arange(n_dim), np.arange(n_dim), indexing="ij")
    return np.stack([g1.ravel(), g2.ravel()], axis=-1)


def _slot_matrix(p: MapParam, part: PartitionSpec, step: int) -> np.ndarray:
    """A[l, j] = exp(2 pi i r_j . V^step(l) / N) / sqrt(D), rows in l1*N + l2 order."""
    n = p.n_lattice
    img = lattice_map_V(p, _lattice(n), step)
    phase = np.mod(img @ part.labels.T, n)
    return np.exp(2j * np.pi * phase / n) / math.sqrt(part.size)


def _check_budget(p: MapParam, part: PartitionSpec, n: int):
    side = p.n_lattice**2
    if side > GRAM_MAX_SIDE or n * part.size * float(side) ** 2 > GRAM_BUDGET:
        raise ValueError(
            f"instance too large for a dense Gram matrix (N={p.n_lattice}, D={part.size}, n={n})")


def _check_part(p: MapParam, part: PartitionSpec):
    if part.n_dim != p.n_lattice:
        raise ValueError("partition and map use different N")


def build_gram(p: MapParam, part: PartitionSpec, n: int) -> np.ndarray:
    """G(n)_{l1,l2} = N^-2 prod_{s<n} c_s(l1, l2), with c_s = A_s A_s^*.

    For integer alpha the factors depend only on l1 - l2, so the kernel is
    built on N^2 differences and then spread over the matrix.
    """
    _check_part(p, part)
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_budget(p, part, n)
    nn = p.n_lattice
    pts = _lattice(nn)
    if p.is_integer:
        kern = np.ones(nn * nn, dtype=complex)
        for s in range(n):
            kern *= (_slot_matrix(p, part, s) * math.sqrt(part.size)).mean(axis=1)
        diff = np.mod(pts[:, None, :] - pts[None, :, :], nn)
        return kern[diff[..., 0] * nn + diff[..., 1]] / nn**2
    g = np.full((nn * nn, nn * nn), 1.0 / nn**2, dtype=complex)
    for s in range(n):
        a = _slot_matrix(p, part, s)
        g *= a @ a.conj().T
    return g


def string_matrix(p: MapParam, part: PartitionSpec, n: int, limit: int = 4096) -> np.ndarray:
    """M[l, i] = <i|g_l(n)> over multi-indices i (first time slot most significant)."""
    _check_part(p, part)
    if part.size**n > limit:
        raise ValueError(f"D^n = {part.size ** n} exceeds the string limit {limit}")
    nn = p.n_lattice
    m = np.full((nn * nn, 1), 1.0 / nn, dtype=complex)
    for s in range(n):
        a = _slot_matrix(p, part, s)
        m = (m[:, :, None] * a[:, None, :]).reshape(nn * nn, -1)
    return m


def gram_from_strings(p: MapParam, part: PartitionSpec, n: int) -> np.ndarray:
    """Oracle: explicit Gram matrix of the D^n-dimensional vectors g_l."""
    m = string_matrix(p, part, n, 4096)
    return m @ m.conj().T


def rho_full(p: MapParam, part: PartitionSpec, n: int) -> np.ndarray:
    """Oracle: rho = sum_l |g_l><g_l| as a D^n x D^n matrix."""
    m = string_matrix(p, part, n, 512)
    return m.T @ m.conj()


def _t_transpose_powers(alpha, n_dim: int, n: int):
    tt = cat_matrix(alpha).T
    out, cur = [], np.eye(2, dtype=np.int64)
    for _ in range(n):
        out.append(cur.copy())
        cur = np.mod(tt @ cur, n_dim)
    return out


def frequency_counts(p: MapParam, part: PartitionSpec, n: int) -> np.ndarray:
    """Exact integer counts #{strings i : f(i) = r} on an N x N grid (total D^n).

    f(i) = sum_s (T^tr)^s r_{i_s} mod N, accumulated one time slot at a time.
    """
    _check_part(p, part)
    if not p.is_integer:
        raise ValueError("frequency shortcut requires the T_alpha subfamily (integer alpha)")
    nn = p.n_lattice
    dtype = np.int64 if part.size**n < 2**62 else object
    counts = np.zeros((nn, nn), dtype=dtype)
    counts[0, 0] = 1
    for power in _t_transpose_powers(p.alpha, nn, n):
        shifts = np.mod(part.labels @ power.T, nn)
        nxt = np.zeros_like(counts)
        for sx, sy in shifts:
            nxt += np.roll(counts, (int(sx), int(sy)), axis=(0, 1))
        counts = nxt
    return counts


def frequency_field(p: MapParam, part: PartitionSpec, n: int) -> np.ndarray:
    counts = frequency_counts(p, part, n)
    return (counts / part.size**n).astype(float)


def frequencies_brute(p: MapParam, part: PartitionSpec, n: int) -> np.ndarray:
    """Oracle: enumerate all D^n strings and count f(i) directly (integer alpha)."""
    if part.size**n > 10**6:
        raise ValueError("D^n exceeds the brute-force limit 10^6")
    if not p.is_integer:
        raise ValueError("frequency shortcut requires the T_alpha subfamily (integer alpha)")
    nn = p.n_lattice
    t = cat_matrix(p.alpha)
    counts = np.zeros((nn, nn), dtype=np.int64)
    for word in itertools.product(range(part.size), repeat=n):
        acc = np.zeros(2, dtype=np.int64)
        for s, j in enumerate(word):
            acc += np.linalg.matrix_power(t.T, s) @ part.labels[j]
        counts[acc[0] % nn, acc[1] % nn] += 1
    return counts / part.size**n


def shannon_entropy(nu) -> float:
    """-sum nu ln nu with 0 ln 0 = 0."""
    nu = np.asarray(nu, dtype=float).ravel()
    if np.any(nu < 0):
        raise ValueError("frequencies must be nonnegative")
    nz = np.sort(nu[nu > 0])
    return float(math.fsum(-nz * np.log(nz)))


def hermitian_eigenvalues(h: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    h = np.asarray(h)
    scale = max(1.0, float(np.max(np.abs(h)))) if h.size else 1.0
    if np.max(np.abs(h - h.conj().T), initial=0.0) > tol * scale:
        raise ValueError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(h)


def entropy_from_spectrum(eig) -> float:
    eig = np.sort(np.asarray(eig, dtype=float))
    if eig.size and eig[0] < -CLIP_WINDOW:
        raise ValueError(f"eigenvalue {eig[0]:.3e} is below the PSD clipping window")
    pos = eig[eig > 0]
    return float(math.fsum(-pos * np.log(pos)))


def vn_entropy(g: np.ndarray) -> float:
    """-sum eta ln eta over eigenvalues, clipping tiny negatives to 0."""
    return entropy_from_spectrum(hermitian_eigenvalues(g))


def support_set(nu: np.ndarray):
    """Lattice points with nonzero frequency and their number."""
    pts = np.argwhere(np.asarray(nu) > 0)
    return pts, len(pts)


def _spectral_series(p: MapParam, part: PartitionSpec, n_max: int, series: EntropySeries):
    # G(n) and rho(n) share the nonzero spectrum; diagonalize whichever is smaller
    nn = p.n_lattice
    side = nn * nn
    d = part.size
    if d ** n_max > side:
        _check_budget(p, part, n_max)
    m = np.full((side, 1), 1.0 / nn, dtype=complex)
    g: Optional[np.ndarray] = None
    for n in range(1, n_max + 1):
        a = _slot_matrix(p, part, n - 1)
        if d**n <= side:
            m = (m[:, :, None] * a[:, None, :]).reshape(side, -1)
            mat = m.T @ m.conj()
        else:
            if g is None:
                g = m @ m.conj().T
                m = None
            g *= a @ a.conj().T
            mat = g
        series.append(n, vn_entropy(mat))


def entropy_series(p: MapParam, part: PartitionSpec, n_max: int, method: str = "auto") -> EntropySeries:
    """H(n) for n = 1..n_max; 'auto' uses frequencies for integer alpha, else spectra."""
    _check_part(p, part)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if method == "auto":
        method = "frequency" if p.is_integer else "spectral"
    series = EntropySeries()
    if method == "frequency":
        if not p.is_integer:
            raise ValueError("frequency shortcut requires the T_alpha subfamily (integer alpha)")
        for n in range(1, n_max + 1):
            series.append(n, shannon_entropy(frequency_field(p, part, n)))
    elif method == "spectral":
        _spectral_series(p, part, n_max, series)
    else:
        raise ValueError(f"unknown method {method!r}")
    return series
