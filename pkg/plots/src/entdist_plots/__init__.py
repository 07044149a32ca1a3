"""Figure rendering for entdist CSV output."""

from .figures import FigureKind, FigureSpec, load_csv, render

__all__ = ["FigureKind", "FigureSpec", "load_csv", "render"]

__version__ = "0.1.0"
