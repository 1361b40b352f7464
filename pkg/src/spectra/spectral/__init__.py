"""Eigensolvers and rank-one secular machinery.

=============================  =============================================
``eig_sym_tridiag``            QL / bisection / truncated block, tridiagonal
``eig_hermitian_dense``        Householder reduction then tridiagonal solve
``eig_complex_dense``          Hessenberg reduction and shifted complex QR
``roots_aberth``               simultaneous polynomial root iteration
``solve_secular_real``         interlacing-bracketed real rank-one zeros
``solve_secular_complex``      zeros for an anti-Hermitian rank-one coupling
``scattering_s``               s(E) from the resolvent and from the zeros
``overlaps_from_eigs``         eigenvector overlaps from eigenvalues alone
``first_component_product``    squared first components from two spectra
=============================  =============================================
"""
from ._types import (
    ComplexSpectrum,
    ConvergenceError,
    OverlapSet,
    RealSpectrum,
    SecularProblem,
)
from .dense import eig_complex_dense, eig_hermitian_dense, eigvalsh_batch, hermitian_to_tridiagonal
from .roots import roots_aberth
from .secular import (
    first_component_product,
    overlaps_from_eigs,
    scattering_s,
    solve_secular_complex,
    solve_secular_real,
)
from .tridiag import all_eigenvalues, eig_sym_tridiag, largest_eigenvalues, truncation_size

__all__ = [
    "ComplexSpectrum",
    "ConvergenceError",
    "OverlapSet",
    "RealSpectrum",
    "SecularProblem",
    "all_eigenvalues",
    "eig_complex_dense",
    "eig_hermitian_dense",
    "eig_sym_tridiag",
    "eigvalsh_batch",
    "first_component_product",
    "hermitian_to_tridiagonal",
    "largest_eigenvalues",
    "overlaps_from_eigs",
    "roots_aberth",
    "scattering_s",
    "solve_secular_complex",
    "solve_secular_real",
    "truncation_size",
]
