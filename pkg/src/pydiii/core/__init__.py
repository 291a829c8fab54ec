from .grid import InvolutiveGrid1D, InvolutiveGrid2D, circle_grid, torus_grid
from .fields import SewingField, HamiltonianField, PhaseField, Residuals
from .symmetry import (
    AntiUnitaryOp,
    SymmetryTriple,
    standard_triple,
    standard_form,
    extract_sewing,
    hamiltonian_from_sewing,
    verify_class_diii,
    verify_intertwiner,
)
from .sewing import check_sewing, det_field
from .linalg import pfaffian, skew_takagi, kernel_dimension, standard_symplectic

__all__ = [
    "InvolutiveGrid1D",
    "InvolutiveGrid2D",
    "circle_grid",
    "torus_grid",
    "SewingField",
    "HamiltonianField",
    "PhaseField",
    "Residuals",
    "AntiUnitaryOp",
    "SymmetryTriple",
    "standard_triple",
    "standard_form",
    "extract_sewing",
    "hamiltonian_from_sewing",
    "verify_class_diii",
    "verify_intertwiner",
    "check_sewing",
    "det_field",
    "pfaffian",
    "skew_takagi",
    "kernel_dimension",
    "standard_symplectic",
]
