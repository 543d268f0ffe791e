"""Exact analysis of a disordered asymmetric Glauber spin-flip chain.

Each site ``i`` of an open chain flips at rate ``alpha_i`` when it differs
from its left neighbour and at ``beta_i`` when it agrees; a virtual empty
site sits left of site 1. The package builds the generator over exact
rationals or multivariate integer polynomials and checks its spectrum,
stationary state, limits and transfer matrices without floating point.
"""
from .algebra import MPoly, RingMatrix, exact_div, kernel_vector, parse_poly
from .limits import LimitKind, limit_profile, transfer, verify_ansatz, z_closed, z_from_transfer
from .model import (
    Config,
    Generator,
    RateProfile,
    build_generator,
    build_generator_recursive,
    load_profile,
    profile_from_document,
    second_order_blocks,
    site_flip_rate,
)
from .spectral import conjugate_and_check, eigenvalues, hadamard_sign, spectral_gap
from .steady import conjecture_check, exact_density, stationary

__all__ = [
    "Config",
    "Generator",
    "LimitKind",
    "MPoly",
    "RateProfile",
    "RingMatrix",
    "build_generator",
    "build_generator_recursive",
    "conjecture_check",
    "conjugate_and_check",
    "eigenvalues",
    "exact_density",
    "exact_div",
    "hadamard_sign",
    "kernel_vector",
    "limit_profile",
    "load_profile",
    "parse_poly",
    "profile_from_document",
    "second_order_blocks",
    "site_flip_rate",
    "spectral_gap",
    "stationary",
    "transfer",
    "verify_ansatz",
    "z_closed",
    "z_from_transfer",
]
