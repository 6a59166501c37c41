"""stigpattern package - exposes StigPatternSystem lazily.

Importing this package loads a `.env` file (so STIGPATTERN_* variables are
visible to the config layer) but does not import the pipeline until
`StigPatternSystem` or `run_pipeline` is accessed.
"""
try:
	from dotenv import load_dotenv

	load_dotenv(override=True)
except ImportError:
	pass

__version__ = "0.1.0"
__all__ = ["StigPatternSystem", "run_pipeline", "load_config"]


def __getattr__(name: str):
	if name in ("StigPatternSystem", "run_pipeline"):
		import importlib

		mod = importlib.import_module("stigpattern.pipeline")
		return getattr(mod, name)
	elif name == "load_config":
		from stigpattern.config import load_config

		return load_config
	raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
	return __all__
