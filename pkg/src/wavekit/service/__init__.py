"""HTTP service exposing the construction/verification kernel."""

from .app import app

__all__ = ["app"]
