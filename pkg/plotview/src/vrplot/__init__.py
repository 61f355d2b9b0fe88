"""Figure rendering for simulator scenario output."""

from .figures import (FIGURES, FigureSpec, RenderError, RenderResult,
                      figure_spec, render, render_all)

__version__ = "0.1.0"

__all__ = ["FIGURES", "FigureSpec", "RenderError", "RenderResult",
           "figure_spec", "render", "render_all", "__version__"]
