"""Invariant reports for sample files.

A report bundles the invariants of one input with every residual that went into them.
Its JSON form is deterministic: identical input bytes and options give identical text.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np
import xarray as xr

from .config import SERIES_CONFIG, STD_DIM_NAMES, FIXED_POINT_LABELS
from .sample_file import SampleFile, parse_sample_text
from ..config import DEFAULT_TOLERANCES, DEFAULT_BANDWIDTH
from ..core.fields import SewingField
from ..core.sewing import check_sewing
from ..core.symmetry import (
    extract_sewing,
    standard_triple,
    to_standard_representation,
    verify_class_diii,
)
from ..exceptions import ParseError
from ..invariants import (
    evaluate_teo_kane,
    evaluate_strong_2d,
    weak_invariants_2d,
    normalize_determinant,
    gerbe_sign_1d,
)
from ..toeplitz import IndexTheoremReport, index_theorem_check

logger = logging.getLogger(__name__)

REPORT_SCHEMA = "diii-report/1"


@dataclass
class ReportOptions:
    """Flags of an invariant run.

    Attributes:
        toeplitz (bool): Also compute the Toeplitz Z2 index (circle only).
        gerbe (bool): Also compute the gerbe sign of the det normalized field (circle
            only).
        witness (bool): Embed kernel witnesses in the Toeplitz section.
        bandwidth (int): Starting Fourier bandwidth of the Toeplitz symbol fit.
        tol (float): Validation tolerance.
        kernel_tol (float): Singular value cut of the kernel computation.
    """

    toeplitz: bool = False
    gerbe: bool = False
    witness: bool = False
    bandwidth: int = DEFAULT_BANDWIDTH
    tol: float = DEFAULT_TOLERANCES["validation"]
    kernel_tol: float = DEFAULT_TOLERANCES["kernel"]


@dataclass
class InvariantReport:
    """Invariants and diagnostics of one sample file.

    Attributes:
        source (str): Name of the input, for display only.
        digest (str): SHA-256 of the input bytes.
        sample (SampleFile): The parsed input.
        invariants (dict): ``nu_1d`` (circle) or ``triple`` (torus) and optional extras.
        diagnostics (dict): Residuals and raw values before rounding.
        toeplitz (IndexTheoremReport, optional): Toeplitz side of the index theorem.
        det_phase (np.ndarray): Unwrapped phase of det q.
        pfaffians (list[complex]): Pf q at the fixed points.
        witness (bool): Include kernel witnesses in ``to_dict``.
    """

    source: str
    digest: str
    sample: SampleFile = field(repr=False)
    invariants: dict
    diagnostics: dict
    toeplitz: Optional[IndexTheoremReport] = None
    det_phase: np.ndarray = field(default=None, repr=False)
    pfaffians: list = field(default_factory=list, repr=False)
    witness: bool = False

    def __str__(self):
        lines = [f"{self.source} ({self.sample.space}, rank {self.sample.rank})"]
        for name, val in self.invariants.items():
            lines.append(f"  {name}: {_format_value(val)}")
        if self.toeplitz is not None:
            agree = "agree" if self.toeplitz.agree else "DISAGREE"
            lines.append(
                f"  toeplitz: {self.toeplitz.ind:+d} "
                f"(kernel dim {self.toeplitz.kernel.dim}, {agree})"
            )
        return "\n".join(lines)

    def to_dict(self) -> dict:
        out = {
            "schema": REPORT_SCHEMA,
            "input": {
                "sha256": self.digest,
                "space": self.sample.space,
                "grid": list(self.sample.grid),
                "rank": self.sample.rank,
                "kind": self.sample.kind,
            },
            "invariants": self.invariants,
            "diagnostics": self.diagnostics,
        }
        if self.toeplitz is not None:
            out["toeplitz"] = self.toeplitz.to_dict(witnesses=self.witness)
        return out

    def to_json(self) -> str:
        return format_json(self.to_dict())

    def series(self) -> xr.Dataset:
        """Raw series for external plotting as an xarray Dataset."""
        space = self.sample.space
        data_vars = {}

        phase_dims = SERIES_CONFIG["det_phase"]["dims"][space]
        data_vars["det_phase"] = (phase_dims, np.asarray(self.det_phase, dtype=float))

        pfs = np.asarray(self.pfaffians, dtype=complex)
        for name, part in [("pfaffian_real", pfs.real), ("pfaffian_imag", pfs.imag)]:
            data_vars[name] = (SERIES_CONFIG[name]["dims"][space], part)

        if self.toeplitz is not None:
            svals = np.asarray(self.toeplitz.kernel.singular_values, dtype=float)
            data_vars["singular_values"] = (
                SERIES_CONFIG["singular_values"]["dims"]["circle"],
                svals,
            )

        coords = {STD_DIM_NAMES["fixed_point"]: FIXED_POINT_LABELS[space]}
        for dim, n in zip(phase_dims, self.sample.grid):
            coords[dim] = 2 * np.pi * np.arange(n) / n

        ds = xr.Dataset(data_vars, coords=coords)
        for name in ds.data_vars:
            ds[name].attrs["name"] = name
            ds[name].attrs["unit"] = SERIES_CONFIG[name]["unit"]
            ds[name].attrs["description"] = SERIES_CONFIG[name]["description"]
        ds.attrs["sha256"] = self.digest
        return ds


def _format_value(val) -> str:
    if isinstance(val, (list, tuple)):
        return "(" + ", ".join(f"{v:+d}" for v in val) + ")"
    if isinstance(val, int) and not isinstance(val, bool):
        return f"{val:+d}"
    return str(val)


def format_json(payload: dict) -> str:
    """Sorted keys, two space indentation and a trailing newline."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _complex_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def sewing_field_of(
    sample: SampleFile, tol: float, diagnostics: dict
) -> SewingField:
    """Sewing field of a sample, extracting it from a Hamiltonian when needed."""
    sampled = sample.to_field()
    if isinstance(sampled, SewingField):
        return sampled

    H = to_standard_representation(sampled, sample.symmetry_triple(), tol)
    diagnostics["gap"] = H.gap
    scale = max(1.0, float(np.max(np.abs(H.samples))))
    diagnostics["class_diii"] = verify_class_diii(
        H, standard_triple(H.dim // 2), tol * scale
    ).to_dict()
    return extract_sewing(H, tol)


def compute_report(
    sample: SampleFile,
    options: Optional[ReportOptions] = None,
    digest: str = "",
    source: str = "<input>",
) -> InvariantReport:
    """Compute the invariants of a parsed sample file.

    Raises:
        DIIIError: Any validation or numerical failure of the underlying computations.
    """
    options = options or ReportOptions()
    diagnostics = {}
    q = sewing_field_of(sample, options.tol, diagnostics)
    diagnostics["sewing"] = check_sewing(q, options.tol).to_dict()

    invariants, toeplitz = {}, None
    if sample.space == "circle":
        result = evaluate_teo_kane(q, options.tol)
        invariants["nu_1d"] = result.value
        diagnostics["raw"] = _complex_pair(result.raw)
        diagnostics["rounding_deviation"] = result.deviation

        if options.gerbe:
            invariants["gerbe"] = gerbe_sign_1d(normalize_determinant(q, options.tol))
        if options.toeplitz:
            toeplitz = index_theorem_check(q, options.bandwidth, options.kernel_tol)
    else:
        result = evaluate_strong_2d(q, options.tol)
        w1, w2 = weak_invariants_2d(q, options.tol)
        invariants["triple"] = [w1, w2, result.value]
        diagnostics["raw"] = _complex_pair(result.raw)
        diagnostics["rounding_deviation"] = result.deviation
        if options.gerbe or options.toeplitz:
            logger.warning("Gerbe and Toeplitz options apply to circle inputs only.")

    diagnostics["pfaffians"] = [_complex_pair(pf) for pf in result.pfaffians]
    logger.info("%s: %s", source, invariants)

    return InvariantReport(
        source=source,
        digest=digest,
        sample=sample,
        invariants=invariants,
        diagnostics=diagnostics,
        toeplitz=toeplitz,
        det_phase=result.det_phase.theta,
        pfaffians=list(result.pfaffians),
        witness=options.witness,
    )


def report_for_file(
    path: Union[str, Path], options: Optional[ReportOptions] = None
) -> InvariantReport:
    """Read a sample file and compute its report."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as err:
        raise ParseError(f"Could not read {path}: {err}") from err
    digest = hashlib.sha256(raw).hexdigest()
    sample = parse_sample_text(raw.decode("utf-8", errors="replace"), str(path))
    return compute_report(sample, options, digest, path.name)
