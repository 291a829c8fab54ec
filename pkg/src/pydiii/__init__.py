from .core import (
    InvolutiveGrid1D,
    InvolutiveGrid2D,
    SewingField,
    HamiltonianField,
    SymmetryTriple,
    standard_triple,
    standard_form,
    extract_sewing,
    hamiltonian_from_sewing,
    check_sewing,
)

from .invariants import (
    teo_kane_1d,
    classify_1d,
    relative_invariant,
    gerbe_sign_1d,
    strong_invariant_2d,
    weak_invariants_2d,
    full_invariant_2d,
    direct_sum,
    apply_intertwiner,
)

from .toeplitz import (
    BandedSymbol,
    fourier_coefficients,
    fit_symbol,
    z2_index,
    index_theorem_check,
)

from .models import build_model

from .results import SampleFile, InvariantReport, compute_report

from . import exceptions

__all__ = [
    "InvolutiveGrid1D",
    "InvolutiveGrid2D",
    "SewingField",
    "HamiltonianField",
    "SymmetryTriple",
    "standard_triple",
    "standard_form",
    "extract_sewing",
    "hamiltonian_from_sewing",
    "check_sewing",
    "teo_kane_1d",
    "classify_1d",
    "relative_invariant",
    "gerbe_sign_1d",
    "strong_invariant_2d",
    "weak_invariants_2d",
    "full_invariant_2d",
    "direct_sum",
    "apply_intertwiner",
    "BandedSymbol",
    "fourier_coefficients",
    "z2_index",
    "fit_symbol",
    "index_theorem_check",
    "build_model",
    "SampleFile",
    "InvariantReport",
    "compute_report",
    "exceptions",
    "core",
]
