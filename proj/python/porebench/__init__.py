"""Periodic 2D pore geometries: generation, metrics, volume averaging and closure fitting."""

from ._core import (
    Error,
    Image,
    __version__,
    analyze,
    average,
    decompose,
    fit,
    generate,
    keep_largest_component,
    label_components,
    max_flow,
    porosity,
    read_raster,
    surface,
    tortuosity,
    write_raster,
)

__all__ = [
    "Error",
    "Image",
    "__version__",
    "analyze",
    "average",
    "decompose",
    "fit",
    "generate",
    "keep_largest_component",
    "label_components",
    "max_flow",
    "porosity",
    "read_raster",
    "surface",
    "tortuosity",
    "write_raster",
]
