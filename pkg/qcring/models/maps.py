from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple

from qcring.core.errors import ShapeMismatch
from qcring.core.scalars import ONE, ZERO, GaussRational, Rational


class Verdict(str, Enum):
  verified = "verified"
  refuted = "refuted"
  solved = "solved"
  no_diagonal_solution = "no-diagonal-solution"
  needs_field_extension = "needs-field-extension"


@dataclass(frozen=True)
class LinearMap:
  """Degree-preserving map; column a holds the image of source basis element a."""

  source_degrees: Tuple[Rational, ...]
  target_degrees: Tuple[Rational, ...]
  matrix: Tuple[Tuple[GaussRational, ...], ...]  # matrix[target][source]

  def __post_init__(self):
    n = len(self.source_degrees)
    if len(self.target_degrees) != n or len(self.matrix) != n or any(len(row) != n for row in self.matrix):
      raise ShapeMismatch("linear map must be square between bases of equal dimension")
    if sorted(self.source_degrees) != sorted(self.target_degrees):
      raise ShapeMismatch("source and target degree multisets differ")
    for b, row in enumerate(self.matrix):
      for a, value in enumerate(row):
        if value and self.source_degrees[a] != self.target_degrees[b]:
          raise ShapeMismatch(f"entry ({b},{a}) mixes degrees {self.source_degrees[a]} and {self.target_degrees[b]}")

  @property
  def size(self) -> int:
    return len(self.source_degrees)

  def column(self, a: int) -> Tuple[GaussRational, ...]:
    return tuple(row[a] for row in self.matrix)


@dataclass(frozen=True)
class DiagonalMap:
  scalars: Tuple[GaussRational, ...]

  def __post_init__(self):
    if any(not value for value in self.scalars):
      raise ShapeMismatch("diagonal map scalars must be nonzero")

  @property
  def size(self) -> int:
    return len(self.scalars)

  @classmethod
  def identity(cls, size: int) -> "DiagonalMap":
    return cls(tuple(ONE for _ in range(size)))

  def as_linear(self, degrees: Sequence[Rational]) -> LinearMap:
    matrix = tuple(
      tuple(self.scalars[a] if a == b else ZERO for a in range(self.size)) for b in range(self.size)
    )
    return LinearMap(tuple(degrees), tuple(degrees), matrix)


@dataclass(frozen=True)
class Obstruction:
  """A failing constraint: lhs != rhs at the named basis triple.

  ``relation`` is set when the failure is a multiplicative relation between
  constraint ratios rather than a single substitution.
  """

  triple: Tuple[str, str, str]
  lhs: GaussRational
  rhs: GaussRational
  kind: str = "product"
  relation: Tuple[Tuple[Tuple[str, str, str], int], ...] = ()


@dataclass(frozen=True)
class NumericWitness:
  values: Tuple[complex, ...]
  residual: float
  certifying: bool = False


@dataclass(frozen=True)
class IsoReport:
  verdict: Verdict
  witness: Optional[DiagonalMap] = None
  linear_witness: Optional[LinearMap] = None
  obstruction: Optional[Obstruction] = None
  numeric_witness: Optional[NumericWitness] = None
  kernel: Tuple[Tuple[int, ...], ...] = ()
  notes: Tuple[str, ...] = field(default_factory=tuple)

  @property
  def ok(self) -> bool:
    return self.verdict in (Verdict.verified, Verdict.solved)


@dataclass(frozen=True)
class Constraint:
  """lambda^exponents == ratio, read off one basis triple."""

  triple: Tuple[int, int, int]
  exponents: Tuple[int, ...]
  ratio: GaussRational
