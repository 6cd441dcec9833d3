from .render import (
    Curve,
    CurveFormatError,
    PlotSpec,
    build_figure,
    main,
    read_curve_csv,
    render,
)

__all__ = [
    "Curve",
    "CurveFormatError",
    "PlotSpec",
    "build_figure",
    "main",
    "read_curve_csv",
    "render",
]

__version__ = "0.1.0"
