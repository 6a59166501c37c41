"""CSV loaders for archetype templates and labeled training windows."""

from pathlib import Path
from typing import Dict, List, Union

import numpy as np
import polars as pl

from stigpattern.errors import IngestError
from stigpattern.srf import ARCHETYPE_SHAPES
from stigpattern.training import LabeledWindow
from .base import BaseLoader


class ArchetypeCSVLoader(BaseLoader):
    """Load archetype templates stored one column per archetype."""

    def load(self, filepath: Union[str, Path]) -> Dict[str, np.ndarray]:
        """
        Load templates from a CSV whose header names archetypes.

        Args:
            filepath: Path to CSV file

        Returns:
            Dictionary mapping archetype name to its template samples
        """
        path = self._require_file(filepath)
        try:
            frame = pl.read_csv(path)
        except Exception as e:
            raise IngestError(f"cannot read archetype CSV: {e}", path=str(path))
        known = {name.lower(): name for name in ARCHETYPE_SHAPES}
        templates = {}
        for column in frame.columns:
            name = known.get(column.strip().lower())
            if name is None:
                raise IngestError(f"unknown archetype column {column!r}", path=str(path), row=1)
            values = frame[column].cast(pl.Float64, strict=False)
            if values.null_count():
                raise IngestError(f"archetype {name} has missing or non-numeric samples", path=str(path))
            samples = values.to_numpy()
            if samples.min() < 0 or samples.max() > 1:
                raise IngestError(f"archetype {name} samples must lie in [0, 1]", path=str(path))
            templates[name] = samples
        return templates


class LabeledWindowLoader(BaseLoader):
    """Load training windows stored as ``target,s0,...,sN`` rows."""

    def load(self, filepath: Union[str, Path]) -> List[LabeledWindow]:
        """
        Load labeled windows from CSV.

        Args:
            filepath: Path to CSV file

        Returns:
            List of LabeledWindow in file order
        """
        path = self._require_file(filepath)
        try:
            frame = pl.read_csv(path)
        except Exception as e:
            raise IngestError(f"cannot read labeled-window CSV: {e}", path=str(path))
        if not frame.columns or frame.columns[0].strip().lower() != "target":
            raise IngestError("first column must be 'target'", path=str(path), row=1)
        if frame.width < 3:
            raise IngestError("need at least two sample columns", path=str(path), row=1)
        values = frame.select(pl.all().cast(pl.Float64, strict=False))
        windows = []
        for i, row in enumerate(values.iter_rows()):
            if any(v is None for v in row):
                raise IngestError("missing or non-numeric value", path=str(path), row=i + 2)
            try:
                windows.append(LabeledWindow(np.array(row[1:]), float(row[0])))
            except ValueError as e:
                raise IngestError(str(e), path=str(path), row=i + 2) from e
        return windows
