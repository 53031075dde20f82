from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from qcring.core.scalars import GaussRational, Rational
from qcring.models.algebra import BasisElement, PairingMatrix, TripleTensor
from qcring.models.maps import DiagonalMap
from qcring.models.sector import GroupSpec
from qcring.models.series import ExtremalRaySet, GWSeries


@dataclass(frozen=True)
class Bundle:
  """A fully resolved bundle file: every scalar exact, every name an index."""

  name: str
  description: str
  basis: Tuple[BasisElement, ...]
  triples: TripleTensor
  parameters: Dict[str, GaussRational] = field(default_factory=dict)
  notes: Tuple[str, ...] = ()
  unit: Optional[int] = None
  top_degree: Optional[Rational] = None
  pairing: Optional[PairingMatrix] = None
  cubic_form: bool = False
  rays: Optional[ExtremalRaySet] = None
  series: Tuple[GWSeries, ...] = ()
  group: Optional[GroupSpec] = None
  iota: Optional[Dict[int, Rational]] = None  # class representative -> degree shift
  involution: Optional[Tuple[int, ...]] = None
  candidate_map: Optional[DiagonalMap] = None
  counterpart: Optional["Bundle"] = None
  source: Optional[str] = None

  @property
  def dim(self) -> int:
    return len(self.basis)

  def names(self) -> Tuple[str, ...]:
    return tuple(element.name for element in self.basis)

  def index(self, name: str) -> int:
    return self.names().index(name)

  @property
  def has_correction(self) -> bool:
    return bool(self.series)
