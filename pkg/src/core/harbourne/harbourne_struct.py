import json
from typing import Annotated, Any, List, Literal, Optional, Union

from pydantic import BaseModel, Field

from src.utils.constants import SCHEMA_VERSION


class PrimeFieldSpec(BaseModel):
    kind: Literal["prime"] = "prime"
    p: int


class RationalFieldSpec(BaseModel):
    kind: Literal["rational"] = "rational"


class EisensteinFieldSpec(BaseModel):
    kind: Literal["eisenstein"] = "eisenstein"


FieldSpec = Annotated[
    Union[PrimeFieldSpec, RationalFieldSpec, EisensteinFieldSpec],
    Field(discriminator="kind"),
]


class Certificate(BaseModel):
    label: str
    field: FieldSpec
    lines: List[List[Any]]
    claimed_tvector: Optional[str] = None

    def dump(self) -> str:
        return json.dumps(self.model_dump(exclude_none=True), indent=2)


class Verdict(BaseModel):
    status: str
    criterion: Optional[str] = None
    detail: str = ""


class Partition(BaseModel):
    d: int
    points: List[List[int]] = []


class TVectorRecord(BaseModel):
    tvector: str
    q: str
    decimal: str
    mixed: Optional[str] = None


class CandidateRecord(BaseModel):
    tvector: str
    q: str
    decimal: str
    status: str
    criterion: Optional[str] = None
    certificate: Optional[str] = None
    field: Optional[str] = None
    detail: Optional[str] = None
    nodes_explored: Optional[int] = None


class TableRowRecord(BaseModel):
    d: int
    mode: str
    value: Optional[str] = None
    decimal: Optional[str] = None
    mixed: Optional[str] = None
    witness: Optional[str] = None
    integrity_ok: bool = True
    audit: Optional[List[CandidateRecord]] = None


class Report(BaseModel):
    label: str
    field: str
    d: int
    s: int
    tvector: str
    h: str
    decimal: str


class Response(BaseModel):
    schema_version: int = SCHEMA_VERSION
    command: str


class EnumerateResponse(Response):
    command: str = "enumerate"
    d: int
    below: Optional[str] = None
    tvectors: List[TVectorRecord] = []


class FilterResponse(Response):
    command: str = "filter"
    d: int
    tvector: str
    mode: str
    verdicts: List[Verdict] = []
    overall: Verdict


class FeasibleResponse(Response):
    command: str = "feasible"
    d: int
    tvector: str
    result: str
    nodes_explored: int
    exhausted: bool
    criterion: Optional[str] = None
    witness: Optional[Partition] = None


class RealizeResponse(Response):
    command: str = "realize"
    d: int
    tvector: str
    field: str
    result: str
    nodes_explored: int
    exhausted: bool
    certificate: Optional[Certificate] = None


class VerifyResponse(Response):
    command: str = "verify"
    ok: bool
    report: Optional[Report] = None
    error: Optional[str] = None


class TableResponse(Response):
    command: str = "table"
    mode: str
    fields: List[int] = []
    integrity_ok: bool = True
    rows: List[TableRowRecord] = []
