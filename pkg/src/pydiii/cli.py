"""Command line interface.

Subcommands: ``models``, ``emit``, ``check``, ``invariant`` and ``classify``. Errors are
reported on stderr and mapped to exit codes by family: validation 1, input 2, parse 3,
numerical 4.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

import pandas as pd

from .config import DEFAULT_TOLERANCES, DEFAULT_BANDWIDTH
from .core.sewing import check_sewing
from .core.symmetry import (
    hamiltonian_from_sewing,
    extract_sewing,
    standard_triple,
    to_standard_representation,
    verify_class_diii,
)
from .core.fields import HamiltonianField, SewingField
from .exceptions import DIIIError, MismatchError
from .invariants import (
    classify_1d,
    teo_kane_1d,
    full_invariant_2d,
    relative_invariant,
)
from .models import build_model, nonflat_hamiltonian
from .results.config import MODEL_CONFIG
from .results.report import (
    ReportOptions,
    format_json,
    report_for_file,
)
from .results.sample_file import SampleFile, read_sample_file, write_sample_file
from .results.series import save_series, SUPPORTED_FORMATS
from .worker import run_invariants_parallel

logger = logging.getLogger(__name__)


def _write_output(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


# ---- models ----


def cmd_models_list(args: argparse.Namespace) -> int:
    rows = [
        {
            "name": name,
            "space": conf["space"],
            "rank": conf["rank"],
            "expected": conf["expected"],
        }
        for name, conf in MODEL_CONFIG.items()
    ]
    df = pd.DataFrame(rows, columns=["name", "space", "rank", "expected"])
    sys.stdout.write(df.to_csv(sep=" ", index=False))
    return 0


# ---- emit ----


def cmd_emit(args: argparse.Namespace) -> int:
    q = build_model(args.model, args.grid, args.n)
    if args.kind == "sewing":
        field = q
    elif args.nonflat is not None:
        field = nonflat_hamiltonian(q, args.nonflat, args.seed)
    else:
        field = hamiltonian_from_sewing(q)

    sample = SampleFile.from_field(field)
    if args.out is None:
        sys.stdout.write(sample.dumps() + "\n")
    else:
        write_sample_file(sample, args.out)
        logger.info("Wrote %s samples of %s to %s", sample.grid, args.model, args.out)
    return 0


# ---- check ----


def _residual_lines(values: dict, locations: dict, tol: float) -> list[str]:
    lines = []
    for name, val in values.items():
        verdict = "ok" if val <= tol else "FAIL"
        line = f"{name:<22} {val:.3e}  {verdict}"
        if val > tol and locations.get(name) is not None:
            line += f" at index {locations[name]}"
        lines.append(line)
    return lines


def cmd_check(args: argparse.Namespace) -> int:
    sample = read_sample_file(args.file)
    field = sample.to_field()
    tol = args.tol
    lines = []
    passed = True

    if isinstance(field, SewingField):
        q = field
    else:
        H = to_standard_representation(field, sample.symmetry_triple(), tol)
        checks = verify_class_diii(H, standard_triple(H.dim // 2), tol)
        lines += _residual_lines(checks.values, checks.locations, tol)
        gap = H.gap
        gap_ok = gap > tol
        lines.append(f"{'gap':<22} {gap:.3e}  {'ok' if gap_ok else 'FAIL'}")
        passed = checks.passed and gap_ok
        q = extract_sewing(H, tol) if passed else None

    if q is not None:
        sewing = check_sewing(q, tol)
        lines += _residual_lines(sewing.values, sewing.locations, tol)
        passed = passed and sewing.passed

    lines.append("PASS" if passed else "FAIL")
    sys.stdout.write("\n".join(lines) + "\n")
    return 0 if passed else 1


# ---- invariant ----


def cmd_invariant(args: argparse.Namespace) -> int:
    options = ReportOptions(
        toeplitz=args.toeplitz,
        gerbe=args.gerbe,
        witness=args.witness,
        bandwidth=args.bandwidth,
        tol=args.tol,
        kernel_tol=args.tol_kernel,
    )

    if len(args.files) == 1:
        results = [(args.files[0], report_for_file(args.files[0], options), None)]
    else:
        results = run_invariants_parallel(
            args.files, options, args.workers, show_progress=not args.quiet
        )

    exit_code = 0
    reports = []
    for path, report, err in results:
        if err is not None:
            sys.stderr.write(f"{path}: {err}\n")
            exit_code = exit_code or err.exit_code
            continue
        reports.append(report)
        if args.series_dir is not None:
            save_series(
                report.series(),
                str(args.series_dir),
                Path(path).stem,
                args.series_format or ["netcdf"],
            )

    if args.format == "json":
        payload = [r.to_dict() for r in reports]
        text = format_json(payload[0] if len(args.files) == 1 else payload)
    else:
        text = "".join(str(r) + "\n" for r in reports)
    _write_output(text, args.out)
    return exit_code


# ---- classify ----


def _format_z2(val) -> str:
    if isinstance(val, tuple):
        return "(" + ", ".join(f"{v:+d}" for v in val) + ")"
    return f"{val:+d}"


def _hamiltonian_of(sample: SampleFile, standardize: bool, tol: float) -> HamiltonianField:
    field = sample.to_field()
    if isinstance(field, SewingField):
        return hamiltonian_from_sewing(field)
    if standardize:
        return to_standard_representation(field, sample.symmetry_triple(), tol)
    return field


def cmd_classify(args: argparse.Namespace) -> int:
    sample_a = read_sample_file(args.file_a)
    sample_b = read_sample_file(args.file_b)
    if sample_a.space != sample_b.space:
        raise MismatchError(
            f"Inputs live on different spaces: {sample_a.space} and {sample_b.space}."
        )
    if sample_a.rank != sample_b.rank:
        raise MismatchError(f"Inputs have ranks {sample_a.rank} and {sample_b.rank}.")
    if sample_a.grid != sample_b.grid:
        raise MismatchError(f"Inputs have grids {sample_a.grid} and {sample_b.grid}.")

    # Two Hamiltonians with the same symmetry block share one standard form identification.
    shared = (
        sample_a.kind == sample_b.kind == "hamiltonian"
        and sample_a.symmetry is not None
        and sample_a.symmetry == sample_b.symmetry
    )
    symmetry = sample_a.symmetry_triple() if shared else None
    H_a = _hamiltonian_of(sample_a, not shared, args.tol)
    H_b = _hamiltonian_of(sample_b, not shared, args.tol)

    relative = relative_invariant(H_a, H_b, symmetry, args.tol)
    q_a = extract_sewing(H_a, args.tol, symmetry)
    q_b = extract_sewing(H_b, args.tol, symmetry)

    if sample_a.space == "circle":
        nu_a, nu_b = teo_kane_1d(q_a, args.tol), teo_kane_1d(q_b, args.tol)
        lines = [
            classify_1d(q_a, q_b, args.tol),
            f"nu_A: {_format_z2(nu_a)}",
            f"nu_B: {_format_z2(nu_b)}",
            f"relative: {_format_z2(relative)}",
        ]
    else:
        t_a, t_b = full_invariant_2d(q_a, args.tol), full_invariant_2d(q_b, args.tol)
        lines = [
            f"triple_A: {_format_z2(t_a)}",
            f"triple_B: {_format_z2(t_b)}",
            f"relative: {_format_z2(relative)}",
        ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


# ---- parser ----


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pydiii", description="Z2 invariants of class DIII sewing matrices."
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_models = sub.add_parser("models", help="List the built in models.")
    p_models.set_defaults(func=cmd_models_list)

    p_emit = sub.add_parser("emit", help="Write a model to a sample file.")
    p_emit.add_argument("model")
    p_emit.add_argument("--grid", type=int, nargs="+", default=None)
    p_emit.add_argument("--n", type=int, default=1, help="Half rank of the model.")
    p_emit.add_argument("--kind", choices=["sewing", "hamiltonian"], default="sewing")
    p_emit.add_argument(
        "--nonflat", type=float, default=None, metavar="STRENGTH",
        help="Emit a gapped non-flat Hamiltonian with this deformation strength.",
    )
    p_emit.add_argument("--seed", type=int, default=0)
    p_emit.add_argument("--out", type=Path, default=None)
    p_emit.set_defaults(func=cmd_emit)

    p_check = sub.add_parser("check", help="Validate a sample file.")
    p_check.add_argument("file", type=Path)
    p_check.add_argument("--tol", type=float, default=DEFAULT_TOLERANCES["validation"])
    p_check.set_defaults(func=cmd_check)

    p_inv = sub.add_parser("invariant", help="Compute invariants of sample files.")
    p_inv.add_argument("files", nargs="+")
    p_inv.add_argument("--toeplitz", action="store_true")
    p_inv.add_argument("--gerbe", action="store_true")
    p_inv.add_argument("--witness", action="store_true")
    p_inv.add_argument("--format", choices=["text", "json"], default="text")
    p_inv.add_argument("--out", type=Path, default=None)
    p_inv.add_argument("--tol", type=float, default=DEFAULT_TOLERANCES["validation"])
    p_inv.add_argument(
        "--tol-kernel", type=float, default=DEFAULT_TOLERANCES["kernel"]
    )
    p_inv.add_argument(
        "--bandwidth", type=int, default=DEFAULT_BANDWIDTH,
        help="Starting bandwidth of the Toeplitz symbol fit, doubled until it fits.",
    )
    p_inv.add_argument("--workers", type=int, default=None)
    p_inv.add_argument("--series-dir", type=Path, default=None)
    p_inv.add_argument(
        "--series-format", action="append", choices=list(SUPPORTED_FORMATS)
    )
    p_inv.add_argument("--quiet", action="store_true", help="Hide the progress bar.")
    p_inv.set_defaults(func=cmd_invariant)

    p_cls = sub.add_parser("classify", help="Compare two sample files.")
    p_cls.add_argument("file_a", type=Path)
    p_cls.add_argument("file_b", type=Path)
    p_cls.add_argument("--tol", type=float, default=DEFAULT_TOLERANCES["validation"])
    p_cls.set_defaults(func=cmd_classify)

    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    try:
        return args.func(args)
    except DIIIError as err:
        sys.stderr.write(f"error: {err}\n")
        return err.exit_code


def run():
    sys.exit(main())
