"""
Approximable mappings between finite bases, their set images, finite-step
closure, and the correspondence with continuous functions on completions.

Between finite bases an approximable mapping is determined by its point
function a -> max r(a), which is monotone; conversely the down-closure of
the graph of any monotone function satisfies all four conditions.
Enumeration therefore walks monotone functions instead of all relations.
"""

import itertools
import logging
from typing import Any, Iterable, Iterator, Mapping, Optional

from domkit.basis import DEFAULT_LIMITS, FiniteBasis, Poset, is_ideal, lub, subsets_by_size
from domkit.completion import CompletedDomain, Ideal, ideal_completion
from domkit.errors import (
    CapExceededError,
    NoContainingMappingError,
    PreconditionError,
    UnknownElementError,
)
from domkit.models import Limits, SubsetReport
from domkit.terms import Am, sort_key

log = logging.getLogger(__name__)

PairSet = frozenset[tuple[Any, Any]]


class ApproxMapping:
    """A relation between two bases, stored extensionally as its pair set."""

    def __init__(self, source: FiniteBasis, target: FiniteBasis, pairs: Iterable[tuple[Any, Any]]):
        self.source = source
        self.target = target
        self.pairs: PairSet = frozenset(pairs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ApproxMapping):
            return NotImplemented
        return (
            self.pairs == other.pairs
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self) -> int:
        return hash(self.pairs)

    def __le__(self, other: "ApproxMapping") -> bool:
        return self.pairs <= other.pairs

    def __str__(self) -> str:
        return self.to_term().render()

    def __repr__(self) -> str:
        return f"ApproxMapping({self.source.name} -> {self.target.name}, {self})"

    def to_term(self) -> Am:
        return Am.of(self.pairs)

    def image(self, subset: Iterable[Any]) -> frozenset:
        return set_image(self.pairs, subset)

    def point(self, element: Any) -> Optional[Any]:
        """The point view r(a), collapsed to its lub."""
        return lub(self.target, self.image({element}))


def set_image(relation: Iterable[tuple[Any, Any]], subset: Iterable[Any]) -> frozenset:
    """{b | (a, b) in relation for some a in subset}."""
    inside = set(subset)
    return frozenset(b for a, b in relation if a in inside)


def _validate_pairs(source: Poset, target: Poset, pairs: Iterable[tuple[Any, Any]]) -> PairSet:
    checked = frozenset(pairs)
    for a, b in checked:
        if a not in source:
            raise UnknownElementError(a, source.name)
        if b not in target:
            raise UnknownElementError(b, target.name)
    return checked


def _point_view(source: Poset, pairs: PairSet) -> dict[Any, set]:
    view: dict[Any, set] = {a: set() for a in source.elements}
    for a, b in pairs:
        view[a].add(b)
    return view


def check_am(
    source: FiniteBasis, target: FiniteBasis, pairs: Iterable[tuple[Any, Any]]
) -> SubsetReport:
    """
    Check the four approximable-mapping conditions separately.

    Args:
        source: The source basis
        target: The target basis
        pairs: The candidate relation

    Returns:
        A report with one detail per condition (pointedness,
        downward-closure, directedness, monotonicity), each with a witness
        on failure
    """
    relation = _validate_pairs(source, target, pairs)
    view = _point_view(source, relation)
    ordered = sorted(relation, key=lambda p: (sort_key(p[0]), sort_key(p[1])))
    conditions = []

    base = (source.bottom, target.bottom)
    if base in relation:
        conditions.append(SubsetReport.passed("pointedness"))
    else:
        conditions.append(
            SubsetReport.failed("pointedness", base, f"({base[0]}, {base[1]}) is missing")
        )

    conditions.append(_first_failure(
        "downward-closure",
        (
            ((a, b, lower), f"({a}, {b}) present but ({a}, {lower}) missing")
            for a, b in ordered
            for lower in sorted(target.down_set(b), key=sort_key)
            if lower not in view[a]
        ),
    ))

    def directedness_failures() -> Iterator[tuple[tuple, str]]:
        for a in source.elements:
            for b1, b2 in itertools.combinations(sorted(view[a], key=sort_key), 2):
                joined = target.join(b1, b2)
                if joined is None:
                    yield (a, b1, b2), f"{b1} and {b2} have no lub in {target.name}"
                elif joined not in view[a]:
                    yield (a, b1, b2), f"({a}, {joined}) missing for the lub of {b1} and {b2}"

    conditions.append(_first_failure("directedness", directedness_failures()))

    conditions.append(_first_failure(
        "monotonicity",
        (
            ((a, b, higher), f"({a}, {b}) present and {a} <= {higher} but ({higher}, {b}) missing")
            for a, b in ordered
            for higher in sorted(source.up_set(a), key=sort_key)
            if b not in view[higher]
        ),
    ))

    for condition in conditions:
        if not condition.holds:
            return SubsetReport.failed(
                "approximable-mapping",
                condition.witness or (),
                f"{condition.predicate} fails: {condition.reason}",
                details=tuple(conditions),
            )
    return SubsetReport.passed("approximable-mapping", details=tuple(conditions))


def _first_failure(predicate: str, failures: Iterator[tuple[tuple, str]]) -> SubsetReport:
    failure = next(failures, None)
    if failure is None:
        return SubsetReport.passed(predicate)
    witness, reason = failure
    return SubsetReport.failed(predicate, witness, reason)


def monotone_maps(
    source: FiniteBasis, target: FiniteBasis, strict: bool = False
) -> Iterator[dict[Any, Any]]:
    """
    Enumerate monotone point functions source -> target.

    Args:
        source: Domain of the functions
        target: Codomain of the functions
        strict: Only functions sending the source bottom to the target bottom

    Yields:
        Each function as a dict, in a deterministic order
    """
    order = source.linear_extension
    below = {x: [y for y in source.down_set(x) if y != x] for x in order}
    candidates_all = tuple(sorted(target.elements, key=sort_key))

    def extend(index: int, assignment: dict[Any, Any]) -> Iterator[dict[Any, Any]]:
        if index == len(order):
            yield dict(assignment)
            return
        element = order[index]
        if strict and element == source.bottom:
            choices: Iterable[Any] = (target.bottom,)
        else:
            allowed = frozenset(target.elements)
            for lower in below[element]:
                allowed &= target.up_set(assignment[lower])
            choices = [c for c in candidates_all if c in allowed]
        for choice in choices:
            assignment[element] = choice
            yield from extend(index + 1, assignment)
        assignment.pop(element, None)

    yield from extend(0, {})


def relation_of(target: Poset, point_function: Mapping[Any, Any]) -> PairSet:
    """Down-closure of the graph of a point function."""
    return frozenset(
        (a, b) for a, value in point_function.items() for b in target.down_set(value)
    )


def enumerate_ams(
    source: FiniteBasis, target: FiniteBasis, limits: Limits = DEFAULT_LIMITS
) -> tuple[ApproxMapping, ...]:
    """
    All approximable mappings from source to target, canonically sorted.

    Raises:
        CapExceededError: If |source| * |target| exceeds limits.am_product_cap
    """
    product = len(source) * len(target)
    if product > limits.am_product_cap:
        raise CapExceededError("approximable-mapping enumeration", product, limits.am_product_cap)
    found = [
        ApproxMapping(source, target, relation_of(target, f))
        for f in monotone_maps(source, target)
    ]
    log.debug("%d approximable mappings %s -> %s", len(found), source.name, target.name)
    return tuple(sorted(found, key=str))


def is_strict(am: ApproxMapping) -> bool:
    return am.image({am.source.bottom}) == {am.target.bottom}


def generators_of(source: FiniteBasis, target: FiniteBasis, point_function: Mapping[Any, Any]) -> PairSet:
    """
    The finite-step presentation of a monotone function.

    A pair (a, f(a)) is a generator when f(a) is not bottom and rises above
    the lub of f over the elements strictly below a.
    """
    generators = set()
    for a in source.elements:
        value = point_function[a]
        if value == target.bottom:
            continue
        lower = lub(target, (point_function[x] for x in source.down_set(a) if x != a))
        if lower != value:
            generators.add((a, value))
    return frozenset(generators)


def step_generators(am: ApproxMapping) -> PairSet:
    """Minimal seed whose smallest containing approximable mapping is am."""
    points = {a: am.point(a) for a in am.source.elements}
    return generators_of(am.source, am.target, points)


def smallest_am_containing(
    source: FiniteBasis, target: FiniteBasis, seed: Iterable[tuple[Any, Any]]
) -> ApproxMapping:
    """
    The finite-step mapping generated by a seed.

    Closes seed plus (bottom, bottom) under downward-closure, pairwise lubs
    and monotonicity until nothing changes.

    Args:
        source: The source basis
        target: The target basis
        seed: Finite set of pairs that must be contained

    Returns:
        The least approximable mapping containing the seed

    Raises:
        NoContainingMappingError: If closing under pairwise lubs needs a
                                  lub that does not exist in the target
    """
    relation = _validate_pairs(source, target, seed)
    view = _point_view(source, relation)
    view[source.bottom].add(target.bottom)

    changed = True
    while changed:
        changed = False
        for a in source.linear_extension:
            current = set(view[a])
            for b in list(current):
                current |= target.down_set(b)
            for b1, b2 in itertools.combinations(sorted(current, key=sort_key), 2):
                joined = target.join(b1, b2)
                if joined is None:
                    raise NoContainingMappingError((a, b1, b2))
                current.add(joined)
            for higher in source.up_set(a):
                if not current <= view[higher]:
                    view[higher] |= current
                    changed = True
            if current != view[a]:
                view[a] = current
                changed = True
    return ApproxMapping(source, target, ((a, b) for a, bs in view.items() for b in bs))


def _require_ideal(basis: Poset, ideal: Ideal, limits: Limits) -> None:
    if not is_ideal(basis, ideal.members, limits).holds:
        raise PreconditionError(f"{ideal} is not an ideal of {basis.name}")


def am_image_is_ideal(
    am: ApproxMapping, ideal: Ideal, limits: Limits = DEFAULT_LIMITS
) -> SubsetReport:
    """The image of an ideal under an approximable mapping is an ideal; the report's subject is the image."""
    _require_ideal(am.source, ideal, limits)
    image = am.image(ideal.members)
    report = is_ideal(am.target, image, limits)
    if report.holds:
        return SubsetReport.passed("image-is-ideal", subject=report.subject, details=(report,))
    return SubsetReport.failed(
        "image-is-ideal", report.witness or (), report.reason, report.subject, (report,)
    )


def am_monotone(
    am: ApproxMapping, smaller: Ideal, larger: Ideal, limits: Limits = DEFAULT_LIMITS
) -> SubsetReport:
    """Images of nested ideals are nested."""
    _require_ideal(am.source, smaller, limits)
    _require_ideal(am.source, larger, limits)
    if not smaller.issubset(larger):
        raise PreconditionError(f"{smaller} is not contained in {larger}")
    low, high = am.image(smaller.members), am.image(larger.members)
    escaped = sorted(low - high, key=sort_key)
    if escaped:
        return SubsetReport.failed(
            "monotone", (escaped[0],), f"{escaped[0]} is in the image of {smaller} only"
        )
    return SubsetReport.passed("monotone")


class IdealFunction:
    """A function between two completions, stored as its full graph."""

    def __init__(
        self,
        source: CompletedDomain,
        target: CompletedDomain,
        graph: Mapping[Ideal, Ideal],
    ):
        self.source = source
        self.target = target
        self.graph = dict(graph)

    def __call__(self, ideal: Ideal) -> Ideal:
        return self.graph[ideal]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IdealFunction):
            return NotImplemented
        return self.graph == other.graph

    def __hash__(self) -> int:
        return hash(frozenset(self.graph.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{i} -> {self.graph[i]}" for i in self.source.elements if i in self.graph)
        return f"IdealFunction({body})"


def am_to_ideal_function(
    am: ApproxMapping,
    source_completion: Optional[CompletedDomain] = None,
    target_completion: Optional[CompletedDomain] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> IdealFunction:
    """
    The continuous function determined by an approximable mapping.

    Args:
        am: A relation passing check_am
        source_completion: Completion of am.source, computed if omitted
        target_completion: Completion of am.target, computed if omitted
        limits: Scan caps

    Returns:
        The function sending each source ideal to its set image
    """
    report = check_am(am.source, am.target, am.pairs)
    if not report.holds:
        raise PreconditionError(f"not an approximable mapping: {report.reason}")
    source_completion = source_completion or ideal_completion(am.source, limits=limits)
    target_completion = target_completion or ideal_completion(am.target, limits=limits)
    graph = {}
    for ideal in source_completion.elements:
        image = Ideal(am.image(ideal.members))
        if image not in target_completion:
            raise PreconditionError(f"image {image} is not an ideal of {am.target.name}")
        graph[ideal] = image
    return IdealFunction(source_completion, target_completion, graph)


def _monotonicity(f: IdealFunction) -> SubsetReport:
    for smaller in f.source.elements:
        for larger in f.source.up_set(smaller):
            if not f(smaller).issubset(f(larger)):
                return SubsetReport.failed(
                    "monotone",
                    (smaller, larger),
                    f"{smaller} is below {larger} but {f(smaller)} is not below {f(larger)}",
                )
    return SubsetReport.passed("monotone")


def check_continuous(f: IdealFunction, limits: Limits = DEFAULT_LIMITS) -> SubsetReport:
    """
    Check that f preserves unions of every directed family of source ideals.

    The witness of a failure is the offending family; a monotonicity
    sub-report is attached as a corollary.
    """
    missing = [i for i in f.source.elements if i not in f.graph]
    if missing:
        raise PreconditionError(f"function undefined at {missing[0]}")
    monotone = _monotonicity(f)
    for family in subsets_by_size(f.source.elements, limits.subset_cap, "continuity scan"):
        if not family:
            continue
        union = frozenset().union(*(i.members for i in family))
        if not any(union == i.members for i in family):
            continue
        joined = Ideal(union)
        images = frozenset().union(*(f(i).members for i in family))
        if f(joined).members != images:
            suffix = "" if monotone.holds else " (not monotone)"
            return SubsetReport.failed(
                "continuous",
                family,
                f"image of the union differs from the union of images{suffix}",
                details=(monotone,),
            )
    return SubsetReport.passed("continuous", details=(monotone,))


def continuous_functions(
    source: CompletedDomain, target: CompletedDomain, limits: Limits = DEFAULT_LIMITS
) -> tuple[IdealFunction, ...]:
    """
    Every continuous function between two completions, by exhaustive scan
    of the full function space.
    """
    size = len(target) ** len(source)
    if size > limits.function_space_cap:
        raise CapExceededError("function-space scan", size, limits.function_space_cap)
    found = []
    for images in itertools.product(target.elements, repeat=len(source)):
        f = IdealFunction(source, target, dict(zip(source.elements, images)))
        if check_continuous(f, limits).holds:
            found.append(f)
    return tuple(found)


def compose_ams(f: ApproxMapping, g: ApproxMapping) -> ApproxMapping:
    """Relational composition g after f, re-closed as a finite-step mapping."""
    if f.target != g.source:
        raise PreconditionError(f"cannot compose: {f.target.name} is not {g.source.name}")
    for am in (f, g):
        report = check_am(am.source, am.target, am.pairs)
        if not report.holds:
            raise PreconditionError(f"not an approximable mapping: {report.reason}")
    g_view = _point_view(g.source, g.pairs)
    composed = {(a, c) for a, b in f.pairs for c in g_view[b]}
    return smallest_am_containing(f.source, g.target, composed)
