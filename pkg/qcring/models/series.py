from dataclasses import dataclass
from typing import Tuple

from qcring.core.scalars import GaussRational


@dataclass(frozen=True)
class ExtremalRaySet:
  names: Tuple[str, ...]
  nondegenerate: bool = False

  @property
  def size(self) -> int:
    return len(self.names)

  def index(self, name: str) -> int:
    return self.names.index(name)


@dataclass(frozen=True)
class SeriesTerm:
  degree: Tuple[int, ...]  # one exponent per ray
  value: GaussRational


@dataclass(frozen=True)
class SeriesTail:
  """sum_{d >= start} value * q_ray^d along a single ray."""

  ray: int
  start: int
  value: GaussRational


@dataclass(frozen=True)
class GWSeries:
  triple: Tuple[int, int, int]
  terms: Tuple[SeriesTerm, ...] = ()
  tails: Tuple[SeriesTail, ...] = ()


@dataclass(frozen=True)
class QPoint:
  values: Tuple[GaussRational, ...]
