"""Open book stabilization toolkit.

Exact combinatorics of curves and arcs on triangulated surfaces with
boundary: normal coordinates, geometric intersection numbers, Dehn twist
words, curve-complex distance certificates, and positive stabilization of
open book monodromies.
"""

from obd.surface import (
    Surface,
    SurfaceError,
    BandData,
    BoundaryPoint,
    standard_surface,
    attach_band,
    euler_characteristic,
)

__all__ = [
    "Surface",
    "SurfaceError",
    "BandData",
    "BoundaryPoint",
    "standard_surface",
    "attach_band",
    "euler_characteristic",
]
