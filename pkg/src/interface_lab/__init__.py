"""Solid-fluid interface waves: transmission systems, Scholte waves, rays,
and radial travel-time inversion."""

__version__ = "0.1.0"

from .media import (  # noqa: F401
    FluidParams,
    MaterialPoint,
    RadialModel,
    SampledProfile,
    SolidParams,
    canonical_material,
    canonical_radial_model,
    fluid_speed,
    load_model,
    material_point,
    solid_speeds,
)
from .microlocal import (  # noqa: F401
    BoundaryCovector,
    GlancingRejection,
    RegionLabel,
    classify,
    rotate_to_frame,
    rotate_vector_back,
    vertical_wavenumbers,
)
