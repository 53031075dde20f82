from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

ScalarText = Union[int, str]


class Metadata(BaseModel):
  model_config = ConfigDict(extra="forbid")

  name: str
  description: str = ""
  notes: List[str] = Field(default_factory=list)


class BasisEntry(BaseModel):
  model_config = ConfigDict(extra="forbid")

  name: str = Field(min_length=1)
  degree: ScalarText
  sector: Optional[str] = None  # group element naming the twisted sector


class TripleEntry(BaseModel):
  model_config = ConfigDict(extra="forbid")

  i: str
  j: str
  k: str
  value: ScalarText


class RaysEntry(BaseModel):
  model_config = ConfigDict(extra="forbid")

  names: List[str]
  nondegenerate: bool = False


class TermEntry(BaseModel):
  model_config = ConfigDict(extra="forbid")

  degree: Dict[str, int]  # ray name -> exponent
  value: ScalarText


class TailEntry(BaseModel):
  model_config = ConfigDict(extra="forbid", populate_by_name=True)

  ray: str
  start: int = Field(default=1, alias="from")
  value: ScalarText
  kind: str = "constant"


class SeriesEntry(BaseModel):
  model_config = ConfigDict(extra="forbid")

  triple: List[str] = Field(min_length=3, max_length=3)
  terms: List[TermEntry] = Field(default_factory=list)
  tails: List[TailEntry] = Field(default_factory=list)


class AgeIota(BaseModel):
  model_config = ConfigDict(extra="forbid")

  age: List[ScalarText]


class CycleTypeIota(BaseModel):
  model_config = ConfigDict(extra="forbid")

  cycle_type: List[int]
  fiber_dim: int


IotaEntry = Union[AgeIota, CycleTypeIota, ScalarText]


class GroupEntry(BaseModel):
  model_config = ConfigDict(extra="forbid")

  standard: Optional[str] = None  # "Z<n>" or "S<n>"
  order: Optional[int] = None
  elements: Optional[List[str]] = None
  table: Optional[List[List[str]]] = None
  iota: Dict[str, IotaEntry] = Field(default_factory=dict)


class BundleDocument(BaseModel):
  model_config = ConfigDict(extra="forbid")

  metadata: Metadata
  parameters: Dict[str, ScalarText] = Field(default_factory=dict)
  basis: List[BasisEntry]
  unit: Optional[str] = None
  top_degree: Optional[ScalarText] = None
  pairing: Optional[Union[Literal["from_unit"], List[List[ScalarText]]]] = None
  cubic_form: bool = False
  triples: List[TripleEntry] = Field(default_factory=list)
  rays: Optional[RaysEntry] = None
  series: List[SeriesEntry] = Field(default_factory=list)
  group: Optional[GroupEntry] = None
  involution: Optional[Dict[str, str]] = None
  candidate_map: Optional[Dict[str, ScalarText]] = None
  counterpart: Optional["BundleDocument"] = None


BundleDocument.model_rebuild()
