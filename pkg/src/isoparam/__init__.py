"""Exact decision procedures for isoparametric hypersurfaces built from restricted root data."""

from .rootsys import (FactorSpec, RootDatum, RootEntry, SpaceSpec, SpecError, build_root_datum,
                      check_axioms, dual_vector, h_delta, hyperbolic_planes, positive_root, preset,
                      single, split)
from .geometry import (AustereWitness, HypothesisError, Spectrum, Subspace, extension_spectrum,
                       find_collinear_witness, focal_spectrum, has_constant_principal_curvatures,
                       is_austere, is_cpc, is_minimal, jacobi_eigenvalue_check,
                       mean_curvature_vector, non_austere_sufficient, tube_spectrum)
from .congruence import IsometryWitness, are_congruent, automorphism_group, orbit_count

__version__ = "0.1.0"

__all__ = [
    "FactorSpec",
    "RootDatum",
    "RootEntry",
    "SpaceSpec",
    "SpecError",
    "build_root_datum",
    "check_axioms",
    "dual_vector",
    "h_delta",
    "hyperbolic_planes",
    "positive_root",
    "preset",
    "single",
    "split",
    "AustereWitness",
    "HypothesisError",
    "Spectrum",
    "Subspace",
    "extension_spectrum",
    "find_collinear_witness",
    "focal_spectrum",
    "has_constant_principal_curvatures",
    "is_austere",
    "is_cpc",
    "is_minimal",
    "jacobi_eigenvalue_check",
    "mean_curvature_vector",
    "non_austere_sufficient",
    "tube_spectrum",
    "IsometryWitness",
    "are_congruent",
    "automorphism_group",
    "orbit_count",
]
