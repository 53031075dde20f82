from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ_I
from sympy.polys.matrices import DomainMatrix

from qcring.core.errors import BasisMismatch, GradingViolation
from qcring.core.scalars import ZERO, GaussRational, Rational

Triple = Tuple[int, int, int]
Vector = Tuple[GaussRational, ...]


@dataclass(frozen=True)
class BasisElement:
  name: str
  degree: Rational
  sector: Optional[str] = None  # conjugacy-class representative, None for untwisted data

  def is_odd(self) -> bool:
    return self.degree.denominator == 1 and int(self.degree.numerator) % 2 == 1


@dataclass(frozen=True)
class PairingMatrix:
  rows: Tuple[Vector, ...]

  @classmethod
  def from_rows(cls, rows: Sequence[Sequence[GaussRational]]) -> "PairingMatrix":
    size = len(rows)
    if any(len(row) != size for row in rows):
      raise BasisMismatch("pairing matrix must be square")
    return cls(tuple(tuple(row) for row in rows))

  @property
  def size(self) -> int:
    return len(self.rows)

  def entry(self, i: int, j: int) -> GaussRational:
    return self.rows[i][j]

  def is_symmetric(self) -> bool:
    return all(self.rows[i][j] == self.rows[j][i] for i in range(self.size) for j in range(i))

  def to_domain_matrix(self) -> DomainMatrix:
    return DomainMatrix([list(row) for row in self.rows], (self.size, self.size), QQ_I)


@dataclass(frozen=True)
class TripleTensor:
  """Fully symmetric sparse 3-tensor keyed by sorted index triples."""

  size: int
  entries: Dict[Triple, GaussRational] = field(default_factory=dict)
  top_degree: Optional[Rational] = None

  @classmethod
  def build(
    cls,
    size: int,
    items: Iterable[Tuple[Sequence[int], GaussRational]],
    top_degree: Optional[Rational] = None,
  ) -> "TripleTensor":
    seen: Dict[Triple, GaussRational] = {}
    for indices, value in items:
      key = _sorted_key(indices, size)
      if key in seen and seen[key] != value:
        raise GradingViolation(f"conflicting values for triple {key}")
      seen[key] = value
    entries = {key: value for key, value in seen.items() if value}
    return cls(size, dict(sorted(entries.items())), top_degree)

  @classmethod
  def zero(cls, size: int, top_degree: Optional[Rational] = None) -> "TripleTensor":
    return cls(size, {}, top_degree)

  def get(self, i: int, j: int, k: int) -> GaussRational:
    return self.entries.get(tuple(sorted((i, j, k))), ZERO)

  def items(self) -> Iterator[Tuple[Triple, GaussRational]]:
    return iter(self.entries.items())

  def is_zero(self) -> bool:
    return not self.entries

  def full_items(self) -> Iterator[Tuple[Triple, GaussRational]]:
    """Every ordered triple with a nonzero value (all permutations)."""
    for key, value in self.entries.items():
      for perm in sorted(set(permutations(key))):
        yield perm, value

  def __add__(self, other: "TripleTensor") -> "TripleTensor":
    if self.size != other.size or self.top_degree != other.top_degree:
      raise BasisMismatch("tensors live on different bases")
    merged = dict(self.entries)
    for key, value in other.entries.items():
      merged[key] = merged.get(key, ZERO) + value
    return TripleTensor(self.size, {k: v for k, v in sorted(merged.items()) if v}, self.top_degree)


def _sorted_key(indices: Sequence[int], size: int) -> Triple:
  if len(indices) != 3:
    raise GradingViolation(f"triple must have three indices, got {tuple(indices)}")
  if any(i < 0 or i >= size for i in indices):
    raise GradingViolation(f"triple {tuple(indices)} out of range for dimension {size}")
  a, b, c = sorted(indices)
  return (a, b, c)


@dataclass(frozen=True)
class CubicForm:
  names: Tuple[str, ...]
  tensor: TripleTensor

  @property
  def size(self) -> int:
    return len(self.names)

  def value(self, i: int, j: int, k: int) -> GaussRational:
    return self.tensor.get(i, j, k)


@dataclass(frozen=True)
class GradedAlgebra:
  basis: Tuple[BasisElement, ...]
  unit: Optional[int]
  pairing: Optional[PairingMatrix]
  triples: Optional[TripleTensor]
  products: Dict[Tuple[int, int], Vector]

  @property
  def dim(self) -> int:
    return len(self.basis)

  def names(self) -> List[str]:
    return [element.name for element in self.basis]

  def index(self, name: str) -> int:
    for position, element in enumerate(self.basis):
      if element.name == name:
        return position
    raise KeyError(name)

  def degree(self, i: int) -> Rational:
    return self.basis[i].degree

  def zero_vector(self) -> Vector:
    return tuple(ZERO for _ in self.basis)

  def product(self, i: int, j: int) -> Vector:
    return self.products.get((i, j)) or self.zero_vector()


@dataclass(frozen=True)
class Violation:
  """One failed identity found by a structural check."""

  kind: str  # degree | commutativity | unit | associativity
  indices: Tuple[int, ...]
  detail: str = ""
