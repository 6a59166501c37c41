"""Trail export: CSV tables and grayscale PGM (P2) heatmaps."""

from pathlib import Path
from typing import Union

import numpy as np
import polars as pl

from .trail import Trail1D, Trail2D

PGM_MAX = 255


def matrix_to_pgm(matrix, path: Union[str, Path]) -> Path:
    """Write a non-negative matrix as an ASCII PGM, rescaled linearly to 0..255.

    Rows are written in array order (row 0 first). An all-zero matrix gives an
    all-black image.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2:
        raise ValueError(f"PGM export needs a 2-D matrix, got shape {matrix.shape}")
    peak = matrix.max() if matrix.size else 0.0
    if peak > 0:
        pixels = np.rint(np.clip(matrix, 0.0, None) * (PGM_MAX / peak)).astype(int)
    else:
        pixels = np.zeros(matrix.shape, dtype=int)

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    height, width = pixels.shape
    lines = ["P2", f"{width} {height}", str(PGM_MAX)]
    lines.extend(" ".join(str(v) for v in row) for row in pixels)
    path.write_text("\n".join(lines) + "\n")
    return path


def trail_to_pgm(trail: Trail2D, path: Union[str, Path]) -> Path:
    """Heatmap of a spatial trail with north (largest y) on the top row."""
    return matrix_to_pgm(np.flipud(trail.intensity), path)


def trail_to_csv(trail: Union[Trail1D, Trail2D], path: Union[str, Path]) -> Path:
    """Write a 1-D trail as ``value,intensity`` rows or a 2-D trail as a dense matrix."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(trail, Trail1D):
        pl.DataFrame({"value": trail.grid.centers, "intensity": trail.intensity}).write_csv(path)
    else:
        frame = pl.DataFrame(trail.intensity, schema=[f"x{i}" for i in range(trail.grid.nx)], orient="row")
        frame.write_csv(path, include_header=False)
    return path
