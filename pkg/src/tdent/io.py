"""Deterministic CSV and plain-PGM writers."""

from __future__ import annotations

from pathlib import Path

import numpy as np

NUMBER_FORMAT = "{:.12f}"


def fmt(x: float) -> str:
    out = NUMBER_FORMAT.format(float(x))
    return "0.000000000000" if out == "-0.000000000000" else out


def write_table(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) if isinstance(v, (int, np.integer)) else fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    # newline="" keeps '\n' on every platform
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(text)


def write_entropy_csv(series, path):
    write_table(path, ["n", "H", "h"], [(int(n), h, r) for n, h, r in series.rows()])


def write_lyapunov_csv(rows, path):
    """rows: list (per alpha) of lists of LyapunovEstimate."""
    from .analysis import theoretical_lyapunov
    out = []
    for row in rows:
        for est in row:
            out.append((est.alpha, int(est.degree), est.value, theoretical_lyapunov(est.alpha)))
    write_table(path, ["alpha", "m", "l", "log_lambda"], out)


def heatmap_pixels(nu: np.ndarray) -> np.ndarray:
    """Pixel (r, c) = round(255 nu(c, N-1-r) / max nu), so l2 increases upward."""
    nu = np.asarray(nu, dtype=float)
    if np.any(nu < 0):
        raise ValueError("heatmap values must be nonnegative")
    top = float(nu.max()) if nu.size else 0.0
    if top <= 0:
        return np.zeros(nu.shape[::-1], dtype=np.int64)
    img = np.floor(255.0 * nu / top + 0.5).astype(np.int64)
    return img.T[::-1, :]


def write_heatmap_pgm(nu: np.ndarray, path):
    pix = heatmap_pixels(nu)
    rows, cols = pix.shape
    lines = ["P2", f"{cols} {rows}", "255"]
    lines += [" ".join(str(int(v)) for v in row) for row in pix]
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_pgm(path) -> np.ndarray:
    tokens = Path(path).read_text(encoding="ascii").split()
    if tokens[0] != "P2":
        raise ValueError("not a plain PGM file")
    cols, rows = int(tokens[1]), int(tokens[2])
    return np.array([int(t) for t in tokens[4:4 + rows * cols]]).reshape(rows, cols)


def ensure_parent(path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
