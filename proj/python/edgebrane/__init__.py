"""Worldsheet geometry, edge equations and massive-end string evolution."""

from ._core import (
    CatalogEntry,
    Expectation,
    GeometryError,
    InvalidParameters,
    SimulationConfig,
    catalog_names,
    entry,
    evolve,
    rotating_orbit_omega,
)

__all__ = [
    "CatalogEntry",
    "Expectation",
    "GeometryError",
    "InvalidParameters",
    "SimulationConfig",
    "catalog_names",
    "entry",
    "evolve",
    "rotating_orbit_omega",
]
