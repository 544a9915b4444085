"""Spec files, trace cache, pipeline stages and the command line front end."""

from .cache import CacheIntegrityError, TraceCache
from .pipeline import PipelineError, run_pipeline
from .specfile import SpecError, SurfaceSpec, load_spec

__all__ = ["CacheIntegrityError", "TraceCache", "PipelineError", "run_pipeline", "SpecError", "SurfaceSpec",
           "load_spec"]
