"""
Workflow module executing workbench commands: reads basis files, calls the
library operations and turns their outcome into an exit status and a
standard-output payload.

Exit statuses: 0 success or predicate holds, 1 predicate fails, 2 input or
usage error, 3 a cap was exceeded.
"""

import json
import logging
from pathlib import Path
from typing import Any, Callable, Literal, Optional

from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from domkit.basis import (
    FiniteBasis,
    Poset,
    is_antichain,
    is_bounded,
    is_chain,
    is_consistent,
    is_directed,
    is_downward_closed,
    is_finitary_basis,
    is_ideal,
    is_weak_ideal,
)
from domkit.codec import (
    export_dot,
    parse_basis,
    parse_poset,
    serialize_basis,
    serialize_completion,
)
from domkit.completion import check_cpo, check_domain, check_isomorphic, check_subdomain, ideal_completion
from domkit.constructors import (
    coalesced_sum,
    function_space,
    kleene_star,
    record_basis,
    strict_product,
)
from domkit.context import WorkbenchContext
from domkit.coop import CoopParams, coop_construct, verify_ascending
from domkit.errors import CoopCapError, DomkitError, InputError, NoContainingMappingError
from domkit.mappings import check_am, enumerate_ams, smallest_am_containing, step_generators
from domkit.models import SubsetReport, render_value
from domkit.terms import Am, parse_term, parse_term_list

log = logging.getLogger(__name__)

Verb = Literal[
    "check", "props", "complete", "iso", "subdomain", "am",
    "sum", "prod", "fun", "star", "rec", "coop", "export",
]

INPUT_COUNTS: dict[str, int] = {
    "check": 1,
    "props": 1,
    "complete": 1,
    "iso": 2,
    "subdomain": 2,
    "am": 2,
    "sum": 2,
    "prod": 2,
    "fun": 2,
    "star": 1,
    "rec": 1,
    "coop": 0,
    "export": 1,
}

AM_ACTIONS = ("check", "enumerate", "close")


class Command(BaseModel):
    """One CLI invocation: a verb, its input files and its flags."""

    model_config = ConfigDict(frozen=True)

    verb: Verb
    inputs: tuple[str, ...] = ()
    options: dict[str, Any] = {}

    @model_validator(mode="after")
    def _verb_requirements(self) -> "Command":
        expected = INPUT_COUNTS[self.verb]
        if len(self.inputs) != expected:
            raise ValueError(f"{self.verb} expects {expected} input file(s), got {len(self.inputs)}")
        if self.verb == "am":
            action = self.options.get("action")
            if action not in AM_ACTIONS:
                raise ValueError(f"am needs an action out of {', '.join(AM_ACTIONS)}")
            if action != "enumerate" and not self.options.get("pairs"):
                raise ValueError(f"am {action} needs --pairs")
        if self.verb == "rec" and not self.options.get("labels"):
            raise ValueError("rec needs --labels")
        if self.verb == "coop" and not (self.options.get("base") and self.options.get("labels")):
            raise ValueError("coop needs --base and --labels")
        return self


class CommandResult(BaseModel):
    exit_status: int
    output: str = ""
    diagnostics: str = ""


def split_labels(value: Any) -> tuple[str, ...]:
    """Normalize a labels flag given as "l1,l2" or as a sequence."""
    if value is None:
        return ()
    items = [value] if isinstance(value, str) else list(value)
    return tuple(
        part.strip() for item in items for part in str(item).split(",") if part.strip()
    )


def _as_json(payload: Any) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _report_result(report: SubsetReport, **extra: Any) -> CommandResult:
    payload = {**extra, "report": report.model_dump(mode="json")}
    return CommandResult(exit_status=0 if report.holds else 1, output=_as_json(payload))


class CommandRunner:
    """
    Executes commands against a workbench context.
    """

    def __init__(self, context: WorkbenchContext):
        """
        Initialize the runner with a context object.

        Args:
            context: Limits, constructor parameters and COOP defaults
        """
        self.context = context
        self.handlers: dict[str, Callable[[Command], CommandResult]] = {
            "check": self._check,
            "props": self._props,
            "complete": self._complete,
            "iso": self._iso,
            "subdomain": self._subdomain,
            "am": self._am,
            "sum": self._construct,
            "prod": self._construct,
            "fun": self._construct,
            "star": self._construct,
            "rec": self._construct,
            "coop": self._coop,
            "export": self._export,
        }

    def run(self, command: Command) -> CommandResult:
        """
        Execute a command, mapping every domkit error onto its exit status.

        Args:
            command: A validated command

        Returns:
            The exit status, the standard-output payload and diagnostics
        """
        log.debug("running %s on %s", command.verb, command.inputs)
        try:
            return self.handlers[command.verb](command)
        except CoopCapError as e:
            payload = {"error": str(e), "trace": e.trace.summary()}
            return CommandResult(exit_status=e.exit_status, output=_as_json(payload), diagnostics=str(e))
        except NoContainingMappingError as e:
            payload = {"error": str(e), "witness": render_value(e.witness)}
            return CommandResult(exit_status=e.exit_status, output=_as_json(payload), diagnostics=str(e))
        except DomkitError as e:
            return CommandResult(exit_status=e.exit_status, diagnostics=str(e))
        except ValidationError as e:
            return CommandResult(exit_status=InputError.exit_status, diagnostics=str(e))

    def _read(self, path: str) -> str:
        try:
            return Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"cannot read {path}: {e.strerror or e}") from e
        except UnicodeDecodeError as e:
            raise InputError(f"{path} is not valid UTF-8: {e.reason} at byte {e.start}") from e

    def _poset(self, path: str) -> Poset:
        return parse_poset(self._read(path))

    def _basis(self, path: str) -> FiniteBasis:
        return parse_basis(self._read(path))

    def _check(self, command: Command) -> CommandResult:
        poset = self._poset(command.inputs[0])
        pointed = (
            SubsetReport.passed("pointed")
            if poset.least() is not None
            else SubsetReport.failed("pointed", (), f"{poset.name} has no least element")
        )
        finitary = is_finitary_basis(poset, limits=self.context.limits)
        details = (SubsetReport.passed("partial-order"), pointed, finitary)
        if pointed.holds and finitary.holds:
            report = SubsetReport.passed("basis", details=details)
        else:
            failing = pointed if not pointed.holds else finitary
            report = SubsetReport.failed(
                "basis", failing.witness or (), failing.reason, details=details
            )
        return _report_result(report, name=poset.name, size=len(poset))

    def _props(self, command: Command) -> CommandResult:
        poset = self._poset(command.inputs[0])
        limits = self.context.limits
        predicate = command.options.get("predicate")
        whole: dict[str, Callable[[], SubsetReport]] = {
            "finitary-basis": lambda: is_finitary_basis(
                poset, exhaustive=bool(command.options.get("exhaustive")), limits=limits
            ),
            "cpo": lambda: check_cpo(poset, limits=limits),
            "domain": lambda: check_domain(poset, limits=limits),
        }
        on_subsets: dict[str, Callable[[list], SubsetReport]] = {
            "bounded": lambda s: is_bounded(poset, s),
            "consistent": lambda s: is_consistent(poset, s, limits),
            "directed": lambda s: is_directed(poset, s, limits),
            "downward-closed": lambda s: is_downward_closed(poset, s),
            "chain": lambda s: is_chain(poset, s),
            "antichain": lambda s: is_antichain(poset, s),
            "ideal": lambda s: is_ideal(poset, s, limits),
            "weak-ideal": lambda s: is_weak_ideal(poset, s, limits),
        }
        if predicate is None:
            reports = tuple(check() for check in whole.values())
            failing = [r for r in reports if not r.holds]
            report = (
                SubsetReport.passed("properties", details=reports)
                if not failing
                else SubsetReport.failed(
                    "properties", failing[0].witness or (), failing[0].reason, details=reports
                )
            )
            return _report_result(report, name=poset.name)
        if predicate in whole:
            return _report_result(whole[predicate](), name=poset.name)
        if predicate in on_subsets:
            subset = command.options.get("subset")
            if subset is None:
                raise InputError(f"predicate {predicate} needs --subset")
            terms = (
                parse_term_list(subset)
                if isinstance(subset, str)
                else [parse_term(str(t)) for t in subset]
            )
            return _report_result(on_subsets[predicate](terms), name=poset.name)
        known = ", ".join([*whole, *on_subsets])
        raise InputError(f"unknown predicate {predicate!r}; expected one of {known}")

    def _complete(self, command: Command) -> CommandResult:
        basis = self._basis(command.inputs[0])
        completed = ideal_completion(
            basis, exhaustive=bool(command.options.get("exhaustive")), limits=self.context.limits
        )
        return CommandResult(exit_status=0, output=serialize_completion(completed))

    def _iso(self, command: Command) -> CommandResult:
        first, second = (self._poset(path) for path in command.inputs)
        witness = check_isomorphic(first, second, self.context.limits)
        payload = {
            "isomorphic": witness is not None,
            "witness": witness.model_dump(mode="json")["mapping"] if witness else None,
        }
        return CommandResult(exit_status=0 if witness else 1, output=_as_json(payload))

    def _subdomain(self, command: Command) -> CommandResult:
        smaller, larger = (self._poset(path) for path in command.inputs)
        return _report_result(check_subdomain(smaller, larger))

    def _pairs(self, command: Command) -> tuple:
        term = parse_term(str(command.options["pairs"]))
        if not isinstance(term, Am):
            raise InputError(f"--pairs must be an am{{...}} term, got {term}")
        return term.pairs

    def _am(self, command: Command) -> CommandResult:
        source, target = (self._basis(path) for path in command.inputs)
        action = command.options["action"]
        if action == "check":
            return _report_result(check_am(source, target, self._pairs(command)))
        if action == "enumerate":
            found = enumerate_ams(source, target, self.context.limits)
            payload = {"count": len(found), "mappings": [str(am) for am in found]}
            return CommandResult(exit_status=0, output=_as_json(payload))
        am = smallest_am_containing(source, target, self._pairs(command))
        payload = {
            "mapping": str(am),
            "generators": str(Am.of(step_generators(am))),
            "size": len(am.pairs),
        }
        return CommandResult(exit_status=0, output=_as_json(payload))

    def _construct(self, command: Command) -> CommandResult:
        params = self.context.constructors
        options = command.options
        if command.verb == "star":
            max_len = options.get("max_len")
            result = kleene_star(
                self._basis(command.inputs[0]),
                params.max_seq_len if max_len is None else int(max_len),
                params,
            )
        elif command.verb == "rec":
            result = record_basis(
                split_labels(options["labels"]), self._basis(command.inputs[0]), params
            )
        else:
            a, b = (self._basis(path) for path in command.inputs)
            if command.verb == "sum":
                result = coalesced_sum(a, b, params)
            elif command.verb == "prod":
                result = strict_product(a, b, params)
            else:
                result = function_space(a, b, strict=bool(options.get("strict", True)), params=params)
        log.info("built %s with %d elements", result.name, len(result))
        return CommandResult(
            exit_status=0,
            output=serialize_basis(result, full_order=bool(options.get("full_order"))),
        )

    def _coop(self, command: Command) -> CommandResult:
        options = command.options
        defaults = self.context.coop

        def pick(key: str, fallback: int) -> int:
            value: Optional[Any] = options.get(key)
            return fallback if value is None else int(value)

        params = CoopParams(
            base=self._basis(str(options["base"])),
            labels=split_labels(options["labels"]),
            max_seq_len=pick("max_seq_len", defaults.max_seq_len),
            max_iters=pick("iters", defaults.max_iters),
            cardinality_cap=pick("max_card", defaults.cardinality_cap),
            record_ordering=self.context.constructors.record_ordering,
        )
        trace = coop_construct(params)
        emit = options.get("emit_stages")
        if emit:
            directory = Path(str(emit))
            directory.mkdir(parents=True, exist_ok=True)
            for stage in trace.stages:
                (directory / f"{stage.name}.json").write_text(serialize_basis(stage), encoding="utf-8")
        payload = {
            **trace.summary(),
            "verification": verify_ascending(trace).model_dump(mode="json"),
        }
        return CommandResult(exit_status=0, output=_as_json(payload))

    def _export(self, command: Command) -> CommandResult:
        poset = self._poset(command.inputs[0])
        if command.options.get("completion"):
            poset = ideal_completion(poset, limits=self.context.limits)
        return CommandResult(
            exit_status=0, output=export_dot(poset, full_order=bool(command.options.get("full_order")))
        )
