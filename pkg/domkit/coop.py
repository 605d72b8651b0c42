"""
Bounded least-fixed-point construction of the COOP object domain

    O = B + L -o (O* -> O)

Starting from the one-point basis, each step builds the method basis
M = O* -> O (strict), the record basis R = L -o M and the next stage
O' = B + R. Stages are named with canonical terms over the previous stage's
terms, so their carriers nest literally and the union of the trace is the
last stage.
"""

import logging
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from domkit.basis import FiniteBasis, is_finitary_basis, one_point_basis
from domkit.completion import check_subdomain
from domkit.constructors import (
    coalesced_sum,
    kleene_star,
    normalize_labels,
    record_basis,
    strict_fun,
)
from domkit.errors import CardinalityCapError, CoopCapError, PreconditionError
from domkit.models import ConstructorParams, SubsetReport
from domkit.terms import BOTTOM, InL

log = logging.getLogger(__name__)

INITIAL_STAGE_NOTE = (
    "the iteration starts from the one-point basis {bot}, the least pointed "
    "domain, in place of an empty domain"
)

StopReason = Literal["converged", "iter_cap", "card_cap"]


class CoopParams(BaseModel):
    """Inputs of the COOP iteration: base objects, labels and caps."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    base: FiniteBasis
    labels: tuple[str, ...]
    max_seq_len: int = Field(default=1, ge=0)
    max_iters: int = Field(default=3, ge=0)
    cardinality_cap: int = Field(default=5000, ge=1)
    record_ordering: Literal["pointwise", "equal-keys"] = "pointwise"

    @field_validator("labels")
    @classmethod
    def _labels(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        if not value:
            raise ValueError("at least one label is required")
        return normalize_labels(value)

    @field_validator("base")
    @classmethod
    def _finitary_base(cls, value: FiniteBasis) -> FiniteBasis:
        report = is_finitary_basis(value)
        if not report.holds:
            raise ValueError(f"base is not a finitary basis: {report.reason}")
        return value

    @property
    def constructor_params(self) -> ConstructorParams:
        return ConstructorParams(
            max_seq_len=self.max_seq_len,
            cardinality_cap=self.cardinality_cap,
            record_ordering=self.record_ordering,
        )


class CoopTrace(BaseModel):
    """The stages O_0, O_1, ... of one COOP run, with their intermediate bases."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    params: CoopParams
    stages: tuple[FiniteBasis, ...]
    method_stages: tuple[FiniteBasis, ...] = ()
    record_stages: tuple[FiniteBasis, ...] = ()
    stop_reason: StopReason
    embeddings: tuple[SubsetReport, ...] = ()
    base_embeddings: tuple[SubsetReport, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.stages) - 1

    @property
    def disclaimer(self) -> str:
        if self.stop_reason == "converged":
            return f"stages converged at depth {self.depth}; the last stage is a fixed point"
        return (
            f"depth-{self.depth} approximation of the object domain, bounded by "
            f"max_seq_len={self.params.max_seq_len}, max_iters={self.params.max_iters} "
            f"and cardinality_cap={self.params.cardinality_cap}; not the domain itself"
        )

    def sizes(self) -> list[int]:
        return [len(stage) for stage in self.stages]

    def approximation(self) -> FiniteBasis:
        """The union of the stage carriers, ordered as in the last stage."""
        last = self.stages[-1]
        for stage in self.stages[:-1]:
            outside = [x for x in stage.elements if x not in last]
            if outside:
                raise PreconditionError(f"stage {stage.name} does not nest: {outside[0]}")
        return FiniteBasis(
            last.elements,
            last.leq_pairs,
            f"depth-{self.depth} approximation",
            notes={"disclaimer": self.disclaimer},
        )

    def summary(self) -> dict[str, Any]:
        """JSON-ready description of the run."""
        return {
            "stage_sizes": self.sizes(),
            "method_sizes": [len(m) for m in self.method_stages],
            "record_sizes": [len(r) for r in self.record_stages],
            "stop_reason": self.stop_reason,
            "labels": list(self.params.labels),
            "caps": {
                "max_seq_len": self.params.max_seq_len,
                "max_iters": self.params.max_iters,
                "cardinality_cap": self.params.cardinality_cap,
            },
            "embeddings": [r.model_dump(mode="json") for r in self.embeddings],
            "base_embeddings": [r.model_dump(mode="json") for r in self.base_embeddings],
            "initial_stage": INITIAL_STAGE_NOTE,
            "disclaimer": self.disclaimer,
        }


def _renamed(basis: FiniteBasis, name: str) -> FiniteBasis:
    return FiniteBasis(basis.elements, basis.leq_pairs, name, basis.notes)


def coop_step(
    stage: FiniteBasis, params: CoopParams
) -> tuple[FiniteBasis, FiniteBasis, FiniteBasis]:
    """
    One application of the iteration function.

    Args:
        stage: The current stage O_i
        params: COOP parameters

    Returns:
        The method basis, the record basis and the next stage

    Raises:
        CardinalityCapError: Naming the constructor step that passed the cap
    """
    constructor_params = params.constructor_params
    sequences = kleene_star(stage, params.max_seq_len, constructor_params)
    methods = strict_fun(sequences, stage, constructor_params)
    records = record_basis(params.labels, methods, constructor_params)
    return methods, records, coalesced_sum(params.base, records, constructor_params)


def check_base_embedding(base: FiniteBasis, stage: FiniteBasis) -> SubsetReport:
    """Whether the inl-tagged copy of the base is a subdomain of a stage."""
    tagged = base.relabel(
        lambda x: BOTTOM if x == base.bottom else InL(x), name=f"inl({base.name})"
    )
    return check_subdomain(tagged, stage)


def coop_construct(params: CoopParams) -> CoopTrace:
    """
    Iterate coop_step from the one-point basis.

    Stops when two consecutive stages are equal as canonical-term bases
    (converged) or after max_iters steps (iter_cap).

    Args:
        params: COOP parameters

    Returns:
        The trace of all stages

    Raises:
        CoopCapError: If a constructor passes the cardinality cap; the error
                      carries the completed prefix with stop_reason card_cap
    """
    stages = [one_point_basis("O_0")]
    methods: list[FiniteBasis] = []
    records: list[FiniteBasis] = []
    embeddings: list[SubsetReport] = []
    base_embeddings: list[SubsetReport] = []

    def trace(stop_reason: StopReason) -> CoopTrace:
        return CoopTrace(
            params=params,
            stages=tuple(stages),
            method_stages=tuple(methods),
            record_stages=tuple(records),
            stop_reason=stop_reason,
            embeddings=tuple(embeddings),
            base_embeddings=tuple(base_embeddings),
        )

    for i in range(params.max_iters):
        try:
            m, r, following = coop_step(stages[-1], params)
        except CardinalityCapError as e:
            log.warning("COOP stopped at step %d: %s", i + 1, e)
            raise CoopCapError(e, trace("card_cap")) from e
        following = _renamed(following, f"O_{i + 1}")
        methods.append(_renamed(m, f"M_{i + 1}"))
        records.append(_renamed(r, f"R_{i + 1}"))
        embeddings.append(check_subdomain(stages[-1], following))
        base_embeddings.append(check_base_embedding(params.base, following))
        log.info(
            "COOP stage %d: |M|=%d |R|=%d |O|=%d", i + 1, len(m), len(r), len(following)
        )
        converged = following == stages[-1]
        stages.append(following)
        if converged:
            return trace("converged")
    return trace("iter_cap")


def verify_ascending(trace: CoopTrace) -> SubsetReport:
    """
    Check that every stage is a subdomain of the next.

    Returns:
        A report with one subdomain detail per step; the witness of a
        failure comes from the first failing step
    """
    steps = tuple(
        check_subdomain(lower, upper) for lower, upper in zip(trace.stages, trace.stages[1:])
    )
    for i, step in enumerate(steps):
        if not step.holds:
            return SubsetReport.failed(
                "ascending",
                step.witness or (),
                f"O_{i} is not a subdomain of O_{i + 1}: {step.reason}",
                details=steps,
            )
    return SubsetReport.passed("ascending", details=steps)
