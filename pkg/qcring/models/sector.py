from dataclasses import dataclass, replace
from typing import Dict, Tuple

from qcring.core.scalars import ZERO, GaussRational, Rational
from qcring.models.algebra import GradedAlgebra, Vector


@dataclass(frozen=True)
class GroupSpec:
  names: Tuple[str, ...]
  table: Tuple[Tuple[int, ...], ...]
  identity: int

  @property
  def order(self) -> int:
    return len(self.names)

  def index(self, name: str) -> int:
    return self.names.index(name)

  def multiply(self, a: int, b: int) -> int:
    return self.table[a][b]

  def inverse(self, a: int) -> int:
    for b in range(self.order):
      if self.table[a][b] == self.identity:
        return b
    raise ValueError(f"{self.names[a]} has no inverse")

  def conjugate(self, a: int, b: int) -> int:
    """b a b^-1"""
    return self.multiply(self.multiply(b, a), self.inverse(b))


@dataclass(frozen=True)
class ConjugacyClass:
  representative: int
  members: Tuple[int, ...]
  centralizer_order: int

  @property
  def size(self) -> int:
    return len(self.members)


@dataclass(frozen=True)
class SectorLabel:
  class_id: int  # representative element of the conjugacy class
  iota: Rational


@dataclass(frozen=True, order=True)
class SectorKey:
  left: int
  right: int
  target: int


@dataclass(frozen=True)
class SectorAlgebra:
  algebra: GradedAlgebra
  group: GroupSpec
  labels: Tuple[SectorLabel, ...]
  iota: Dict[int, Rational]
  components: Dict[SectorKey, Dict[Tuple[int, int], Vector]]

  def total(self) -> GradedAlgebra:
    """Sum of all sector components, i.e. the full product."""
    summed: Dict[Tuple[int, int], list] = {}
    for parts in self.components.values():
      for pair, vector in parts.items():
        acc = summed.setdefault(pair, [ZERO] * self.algebra.dim)
        for position, value in enumerate(vector):
          acc[position] = acc[position] + value
    products = {pair: tuple(acc) for pair, acc in sorted(summed.items()) if any(acc)}
    return replace(self.algebra, products=products, triples=None)


@dataclass(frozen=True)
class HermitianMatrix:
  rows: Tuple[Tuple[GaussRational, ...], ...]

  @property
  def size(self) -> int:
    return len(self.rows)

  def entry(self, i: int, j: int) -> GaussRational:
    return self.rows[i][j]
