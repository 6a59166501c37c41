"""Data-source loaders for trip records and training material."""

from .base import BaseLoader

# Concrete loaders are imported on first access
def __getattr__(name):
    if name in ("TLCLoader", "IngestStats", "ingest_csv", "ingest_many", "bin_csv"):
        from . import tlc_loader
        return getattr(tlc_loader, name)
    elif name in ("ArchetypeCSVLoader", "LabeledWindowLoader"):
        from . import archetype_loader
        return getattr(archetype_loader, name)
    raise AttributeError(f"module '{__name__}' has no attribute '{name}'")

__all__ = [
    "BaseLoader",
    "TLCLoader",
    "IngestStats",
    "ingest_csv",
    "ingest_many",
    "bin_csv",
    "ArchetypeCSVLoader",
    "LabeledWindowLoader",
]
