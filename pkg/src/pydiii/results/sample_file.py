"""JSON interchange format for sampled sewing and Hamiltonian fields.

Complex numbers are written as ``[re, im]`` pairs. Samples are listed per grid point in
index-lexicographic order and each matrix is flattened row-major.
"""

import json
import math
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    FiniteFloat,
    ValidationError,
    model_validator,
)

from ..core.fields import SewingField, HamiltonianField, grid_for_samples
from ..core.symmetry import SymmetryTriple
from ..exceptions import ParseError

SAMPLE_SCHEMA = "diii-sample/1"

# NaN and infinite entries are rejected at parse time.
ComplexPair = tuple[FiniteFloat, FiniteFloat]


def encode_complex(values: np.ndarray) -> list[list[float]]:
    """Flatten an array into ``[re, im]`` pairs in C order."""
    flat = np.asarray(values, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def decode_complex(pairs, shape: tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float).reshape(-1, 2)
    return (arr[:, 0] + 1j * arr[:, 1]).reshape(shape)


class SymmetryBlock(BaseModel):
    """Unitary parts of T and C, one list of ``[re, im]`` pairs per row."""

    T: list[list[ComplexPair]]
    C: list[list[ComplexPair]]

    def to_triple(self) -> SymmetryTriple:
        U_T = decode_complex(self.T, (len(self.T), len(self.T)))
        U_C = decode_complex(self.C, (len(self.C), len(self.C)))
        return SymmetryTriple.from_operators(U_T, U_C)

    @classmethod
    def from_triple(cls, sym: SymmetryTriple) -> "SymmetryBlock":
        def rows(U):
            return [encode_complex(row) for row in U]

        return cls(T=rows(sym.T.unitary_part), C=rows(sym.C.unitary_part))


class SampleFile(BaseModel):
    """A field sampled on a circle or torus grid.

    Attributes:
        schema_id (str): Always ``"diii-sample/1"``, serialised as ``schema``.
        space (str): ``"circle"`` or ``"torus"``.
        grid (list[int]): ``[N]`` or ``[N1, N2]``.
        rank (int): Rank 2n of the sewing matrices.
        kind (str): ``"sewing"`` or ``"hamiltonian"``; Hamiltonians have dimension
            ``2 * rank``.
        data (list): Complex entries as ``[re, im]`` pairs.
        symmetry (SymmetryBlock, optional): T and C of a Hamiltonian field that is not in
            the standard representation.
    """

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_id: Literal["diii-sample/1"] = Field(default=SAMPLE_SCHEMA, alias="schema")
    space: Literal["circle", "torus"]
    grid: list[int]
    rank: int = Field(gt=0)
    kind: Literal["sewing", "hamiltonian"] = "sewing"
    data: list[ComplexPair]
    symmetry: Optional[SymmetryBlock] = None

    @property
    def matrix_dim(self) -> int:
        return self.rank if self.kind == "sewing" else 2 * self.rank

    @model_validator(mode="after")
    def _check_lengths(self) -> "SampleFile":
        expected_axes = 1 if self.space == "circle" else 2
        if len(self.grid) != expected_axes:
            raise ValueError(
                f"A {self.space} grid has {expected_axes} size(s), received {self.grid}."
            )
        expected = math.prod(self.grid) * self.matrix_dim**2
        if len(self.data) != expected:
            raise ValueError(
                f"Expected {expected} data entries for grid {self.grid} and "
                f"{self.kind} of dimension {self.matrix_dim}, received {len(self.data)}."
            )
        if self.symmetry is not None and len(self.symmetry.T) != 2 * self.rank:
            raise ValueError("Symmetry operators must act on dimension 2 * rank.")
        return self

    @classmethod
    def from_field(
        cls,
        field: Union[SewingField, HamiltonianField],
        symmetry: Optional[SymmetryTriple] = None,
    ) -> "SampleFile":
        if isinstance(field, SewingField):
            kind, rank = "sewing", field.rank
        else:
            kind, rank = "hamiltonian", field.dim // 2
        return cls(
            space=field.space,
            grid=list(field.grid.shape),
            rank=rank,
            kind=kind,
            data=encode_complex(field.samples),
            symmetry=None if symmetry is None else SymmetryBlock.from_triple(symmetry),
        )

    def samples(self) -> np.ndarray:
        d = self.matrix_dim
        return decode_complex(self.data, tuple(self.grid) + (d, d))

    def to_field(self) -> Union[SewingField, HamiltonianField]:
        """The sampled field. Structural errors of the samples propagate."""
        samples = self.samples()
        grid = grid_for_samples(samples, self.space)
        if self.kind == "sewing":
            return SewingField(grid, samples)
        return HamiltonianField(grid, samples)

    def symmetry_triple(self) -> Optional[SymmetryTriple]:
        return None if self.symmetry is None else self.symmetry.to_triple()

    def dumps(self) -> str:
        """Compact, deterministic JSON text."""
        payload = self.model_dump(by_alias=True, exclude_none=True)
        return json.dumps(payload, separators=(",", ":"))


def read_sample_file(path: Union[str, Path]) -> SampleFile:
    """Load and validate a sample file.

    Raises:
        ParseError: The file is not JSON or does not follow the sample schema.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ParseError(f"Could not read {path}: {err}") from err
    return parse_sample_text(text, str(path))


def parse_sample_text(text: str, source: str = "<input>") -> SampleFile:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"{source} is not valid JSON: {err}") from err
    try:
        return SampleFile.model_validate(payload)
    except ValidationError as err:
        raise ParseError(
            f"{source} is not a valid sample file.",
            {"errors": [e["msg"] for e in err.errors()]},
        ) from err


def write_sample_file(sample: SampleFile, path: Union[str, Path]) -> None:
    Path(path).write_text(sample.dumps() + "\n")
