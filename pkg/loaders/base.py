"""Base class for data-source loaders."""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Union

from stigpattern.errors import IngestError


class BaseLoader(ABC):
    """Abstract base class for loaders reading one kind of input file."""

    @abstractmethod
    def load(self, source: Union[str, Path]) -> Any:
        """
        Load data from a source file.

        Args:
            source: Path to the source

        Returns:
            Loader-specific parsed content
        """
        pass

    @staticmethod
    def _require_file(source: Union[str, Path]) -> Path:
        path = Path(source)
        if not path.is_file():
            raise IngestError("input file not found", path=str(path))
        return path
