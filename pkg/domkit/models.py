from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_serializer, model_validator


def render_value(value: Any) -> Any:
    """Render a poset element, or a nested tuple/set of them, for JSON output."""
    if isinstance(value, (tuple, list)):
        return [render_value(item) for item in value]
    if isinstance(value, (set, frozenset)):
        return sorted(render_value(item) for item in value)
    return str(value)


class SubsetReport(BaseModel):
    """Outcome of a predicate evaluated on a poset, a subset or a relation.

    A failing, applicable report always carries a witness that can be
    re-checked on its own: an offending element tuple, subset or family.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    predicate: str
    holds: bool
    witness: Optional[tuple[Any, ...]] = None
    reason: str = ""
    applicable: bool = True
    subject: Optional[tuple[Any, ...]] = None
    details: tuple["SubsetReport", ...] = ()

    @model_validator(mode="after")
    def _witness_on_failure(self) -> "SubsetReport":
        if not self.holds and self.applicable and self.witness is None:
            raise ValueError(f"failing report for {self.predicate} needs a witness")
        return self

    @field_serializer("witness", "subject")
    def _render_elements(self, value: Optional[tuple[Any, ...]]) -> Optional[list]:
        if value is None:
            return None
        return [render_value(item) for item in value]

    def __bool__(self) -> bool:
        return self.holds

    @classmethod
    def passed(
        cls,
        predicate: str,
        subject: Optional[tuple[Any, ...]] = None,
        details: tuple["SubsetReport", ...] = (),
        reason: str = "",
    ) -> "SubsetReport":
        return cls(
            predicate=predicate,
            holds=True,
            subject=subject,
            details=details,
            reason=reason,
        )

    @classmethod
    def failed(
        cls,
        predicate: str,
        witness: tuple[Any, ...],
        reason: str,
        subject: Optional[tuple[Any, ...]] = None,
        details: tuple["SubsetReport", ...] = (),
    ) -> "SubsetReport":
        return cls(
            predicate=predicate,
            holds=False,
            witness=witness,
            reason=reason,
            subject=subject,
            details=details,
        )

    @classmethod
    def not_applicable(cls, predicate: str, reason: str) -> "SubsetReport":
        return cls(predicate=predicate, holds=False, applicable=False, reason=reason)

    def detail(self, predicate: str) -> "SubsetReport":
        """Return the sub-report for a named condition."""
        for report in self.details:
            if report.predicate == predicate:
                return report
        raise KeyError(predicate)


SubsetReport.model_rebuild()


class IsoWitness(BaseModel):
    """An order isomorphism, stored as its sorted graph."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mapping: tuple[tuple[Any, Any], ...]

    def as_dict(self) -> dict[Any, Any]:
        return dict(self.mapping)

    def __call__(self, element: Any) -> Any:
        return self.as_dict()[element]

    def inverse(self) -> "IsoWitness":
        return IsoWitness(
            mapping=tuple(sorted(((b, a) for a, b in self.mapping), key=lambda p: str(p[0])))
        )

    @field_serializer("mapping")
    def _render_mapping(self, value: tuple[tuple[Any, Any], ...]) -> list:
        return [[str(a), str(b)] for a, b in value]


class Limits(BaseModel):
    """Caps on exhaustive scans; every cap is configurable from the TOML file."""

    model_config = ConfigDict(frozen=True)

    # largest set whose 2^n subsets are scanned exhaustively
    subset_cap: int = Field(default=14, ge=1)
    iso_limit: int = Field(default=12, ge=1)
    am_product_cap: int = Field(default=20, ge=1)
    function_space_cap: int = Field(default=4096, ge=1)
    cardinality_cap: int = Field(default=5000, ge=1)


class ConstructorParams(BaseModel):
    """Parameters shared by the domain constructors."""

    model_config = ConfigDict(frozen=True)

    max_seq_len: int = Field(default=2, ge=0)
    cardinality_cap: int = Field(default=5000, ge=1)
    record_ordering: Literal["pointwise", "equal-keys"] = "pointwise"


class CoopSettings(BaseModel):
    """Defaults for the COOP iteration, read from the ``[coop]`` section."""

    model_config = ConfigDict(frozen=True)

    max_seq_len: int = Field(default=1, ge=0)
    max_iters: int = Field(default=3, ge=0)
    cardinality_cap: int = Field(default=5000, ge=1)
