"""Energy-dependent potentials: self-consistent spectra, saturation and quarkonium masses."""

from .core import (
    BaseSpectrum,
    SaturationModel,
    SolvedLevel,
    base_energy,
    saturation_limit,
    solve,
    solve_closed,
    solve_generic,
    spectrum_table,
)
from .specfun import SeriesParams, hyp1f1, hyp2f1

__version__ = "0.1.0"

__all__ = [
    "BaseSpectrum",
    "SaturationModel",
    "SeriesParams",
    "SolvedLevel",
    "base_energy",
    "hyp1f1",
    "hyp2f1",
    "saturation_limit",
    "solve",
    "solve_closed",
    "solve_generic",
    "spectrum_table",
]
