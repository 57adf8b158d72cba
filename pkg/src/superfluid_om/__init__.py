"""Design and analysis toolkit for superfluid-helium optomechanical cavities."""

from .materials import (
    CONSTANTS,
    CylinderGeometry,
    HeliumProperties,
    NiobiumProperties,
    PhysicalConstants,
    cavity_volume,
    helium_mass,
    with_overrides,
)

__version__ = "0.1.0"

__all__ = [
    "CONSTANTS",
    "CylinderGeometry",
    "HeliumProperties",
    "NiobiumProperties",
    "PhysicalConstants",
    "cavity_volume",
    "helium_mass",
    "with_overrides",
]
