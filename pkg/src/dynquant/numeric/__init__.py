"""Independent numerical pipeline: grids, discretised operators, eigensolver, extrapolation."""
from .discretize import (Bands, OriginSingularityError, PositionSpectrum, discretize_hamiltonian_1d,
                         discretize_hamiltonian_radial, discretize_position_1d,
                         hamiltonian_bands_1d, hamiltonian_bands_radial)
from .eigen import AsymmetryError, EigenReport, NumericFailure, eig_herm, eig_sym, tridiagonal_eigh
from .grids import MomentumGrid, make_grid
from .richardson import OrderWarning, richardson
from .spectra import (DomainTruncationError, count_sign_changes, position_spectrum,
                      spectrum_1d, spectrum_radial)

__all__ = [
    "Bands", "OriginSingularityError", "PositionSpectrum", "discretize_hamiltonian_1d",
    "discretize_hamiltonian_radial", "discretize_position_1d", "hamiltonian_bands_1d",
    "hamiltonian_bands_radial", "AsymmetryError", "EigenReport", "NumericFailure", "eig_herm",
    "eig_sym", "tridiagonal_eigh", "MomentumGrid", "make_grid", "OrderWarning", "richardson",
    "DomainTruncationError", "count_sign_changes", "position_spectrum", "spectrum_1d",
    "spectrum_radial",
]
