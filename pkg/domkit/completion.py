"""
Ideal completion of finite bases, finite elements, isomorphism, and the
domain / subdomain checks.

At finite scale every ideal is principal, so completions are computed by
generating lower sets; the exhaustive subset scan stays available as an
oracle.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Optional

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from domkit.basis import (
    DEFAULT_LIMITS,
    FiniteBasis,
    Poset,
    induced_subposet,
    is_directed,
    is_finitary_basis,
    is_ideal,
    lower_set,
    lub,
    subsets_by_size,
)
from domkit.errors import CapExceededError, NotFinitaryBasisError
from domkit.models import IsoWitness, Limits, SubsetReport
from domkit.terms import sort_key

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ideal:
    """A downward-closed directed subset of a host basis."""

    members: frozenset

    @cached_property
    def _text(self) -> str:
        return "{" + ",".join(sorted(sort_key(m) for m in self.members)) + "}"

    def __str__(self) -> str:
        return self._text

    def __lt__(self, other: "Ideal") -> bool:
        return self._text < other._text

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, element: object) -> bool:
        return element in self.members

    def issubset(self, other: "Ideal") -> bool:
        return self.members <= other.members

    def sorted_members(self) -> tuple[Any, ...]:
        return tuple(sorted(self.members, key=sort_key))


class CompletedDomain(FiniteBasis):
    """The ideals of a host basis ordered by inclusion."""

    def __init__(self, host: Poset, ideals: Iterable[Ideal], name: str = ""):
        ideals = tuple(ideals)
        pairs = [(i, j) for i in ideals for j in ideals if i.issubset(j)]
        super().__init__(
            ideals,
            pairs,
            name or f"ideals({host.name})",
            {"host": host.name},
        )
        self.host = host

    @property
    def ideals(self) -> tuple[Ideal, ...]:
        return self.elements


def principal_ideal(basis: Poset, element: Any) -> Ideal:
    """The lower set of an element, as an Ideal."""
    return Ideal(lower_set(basis, element))


def enumerate_ideals(
    basis: Poset, exhaustive: bool = False, limits: Limits = DEFAULT_LIMITS
) -> tuple[Ideal, ...]:
    """
    Enumerate the ideals of a finite basis.

    Args:
        basis: The host basis
        exhaustive: Scan all 2^n subsets with is_ideal instead of generating
                    the principal ideals
        limits: Cap on the exhaustive scan

    Returns:
        The ideals, smallest first
    """
    if exhaustive:
        found = {
            Ideal(frozenset(subset))
            for subset in subsets_by_size(basis.elements, limits.subset_cap, "ideal scan")
            if subset and is_ideal(basis, subset, limits).holds
        }
    else:
        found = {principal_ideal(basis, x) for x in basis.elements}
    log.debug("%s has %d ideals", basis.name, len(found))
    return tuple(sorted(found, key=lambda i: (len(i), str(i))))


def ideal_completion(
    basis: Poset, exhaustive: bool = False, limits: Limits = DEFAULT_LIMITS
) -> CompletedDomain:
    """
    The domain determined by a finitary basis.

    Args:
        basis: A finitary basis
        exhaustive: Enumerate ideals by the exhaustive subset scan
        limits: Scan caps

    Returns:
        All ideals ordered by subset inclusion

    Raises:
        NotFinitaryBasisError: If the basis fails is_finitary_basis
    """
    report = is_finitary_basis(basis, limits=limits)
    if not report.holds:
        raise NotFinitaryBasisError(report)
    return CompletedDomain(basis, enumerate_ideals(basis, exhaustive, limits))


def principal_embedding(basis: Poset, completed: Optional[CompletedDomain] = None) -> IsoWitness:
    """The map x -> principal_ideal(x) from a basis onto its completion's finite elements."""
    completed = completed or ideal_completion(basis)
    mapping = tuple((x, principal_ideal(basis, x)) for x in basis.elements)
    for _, ideal in mapping:
        assert ideal in completed
    return IsoWitness(mapping=mapping)


def _has_greatest(poset: Poset, subset: tuple[Any, ...]) -> bool:
    inside = set(subset)
    return any(inside <= poset.down_set(m) for m in subset)


def check_cpo(
    poset: Poset, exhaustive: Optional[bool] = None, limits: Limits = DEFAULT_LIMITS
) -> SubsetReport:
    """
    Check that every directed subset has a lub.

    The empty subset is treated as directed, so a cpo must have a least
    element. A finite non-empty directed subset contains an upper bound of
    itself, which is then its lub; the exhaustive scan confirms this
    subset by subset and is used whenever the poset is within the scan cap.

    Args:
        poset: A finite poset
        exhaustive: Force (True) or skip (False) the subset scan; by default
                    scan whenever the poset fits under limits.subset_cap
        limits: Scan caps

    Returns:
        A report whose witness is a directed subset without a lub
    """
    if poset.least() is None:
        return SubsetReport.failed("cpo", (), "the empty directed subset has no lub")
    if exhaustive is None:
        exhaustive = len(poset) <= limits.subset_cap
    if not exhaustive:
        return SubsetReport.passed(
            "cpo", reason="finite: every non-empty directed subset contains its lub"
        )
    for subset in subsets_by_size(poset.elements, limits.subset_cap, "cpo scan"):
        if is_directed(poset, subset, limits).holds and lub(poset, subset) is None:
            return SubsetReport.failed("cpo", subset, "directed subset without a lub")
    return SubsetReport.passed("cpo")


def finite_elements(cpo: Poset, limits: Limits = DEFAULT_LIMITS) -> frozenset:
    """
    Elements that belong to every directed subset they are the lub of.

    For completions these are the principal ideals, which at finite scale
    is every ideal.

    Args:
        cpo: A finite cpo (a completion or any finite pointed poset)
        limits: Cap on the directed-subset scan

    Returns:
        The set of finite elements
    """
    if len(cpo) > limits.subset_cap:
        log.debug("%s exceeds the scan cap; every element of a finite cpo is finite", cpo.name)
        return frozenset(cpo.elements)
    infinite = set()
    for subset in subsets_by_size(cpo.elements, limits.subset_cap, "finite-element scan"):
        if subset and _has_greatest(cpo, subset):
            top = lub(cpo, subset)
            if top is not None and top not in subset:
                infinite.add(top)
    return frozenset(e for e in cpo.elements if e not in infinite)


def _signature(poset: Poset, element: Any) -> tuple[int, int, int]:
    return (
        poset.heights[element],
        len(poset.down_set(element)) - 1,
        len(poset.up_set(element)) - 1,
    )


def is_order_isomorphism(p1: Poset, p2: Poset, witness: IsoWitness) -> bool:
    """Re-check a witness: a bijection preserving the order in both directions."""
    mapping = witness.as_dict()
    if set(mapping) != set(p1.elements) or set(mapping.values()) != set(p2.elements):
        return False
    if len(set(mapping.values())) != len(mapping):
        return False
    return all(
        p1.leq(a, b) == p2.leq(mapping[a], mapping[b])
        for a in p1.elements
        for b in p1.elements
    )


def check_isomorphic(
    p1: Poset, p2: Poset, limits: Limits = DEFAULT_LIMITS
) -> Optional[IsoWitness]:
    """
    Search for an order isomorphism between two finite posets.

    Elements are compared by their (height, elements below, elements above)
    signature first; the backtracking search then runs over the strict
    order digraphs with nodes inserted in signature order.

    Args:
        p1: First poset
        p2: Second poset
        limits: limits.iso_limit bounds the size of either poset

    Returns:
        A witness bijection, or None when the posets are not isomorphic

    Raises:
        CapExceededError: If either poset is larger than limits.iso_limit
    """
    size = max(len(p1), len(p2))
    if size > limits.iso_limit:
        raise CapExceededError("isomorphism search", size, limits.iso_limit)
    if len(p1) != len(p2):
        return None
    sig1 = {e: _signature(p1, e) for e in p1.elements}
    sig2 = {e: _signature(p2, e) for e in p2.elements}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return None

    def graph(poset: Poset, sig: dict) -> nx.DiGraph:
        g = nx.DiGraph()
        for element in sorted(poset.elements, key=lambda e: (sig[e], sort_key(e))):
            g.add_node(element, sig=sig[element])
        g.add_edges_from(poset.to_graph(strict=True).edges())
        return g

    matcher = DiGraphMatcher(
        graph(p1, sig1), graph(p2, sig2), node_match=lambda a, b: a["sig"] == b["sig"]
    )
    if not matcher.is_isomorphic():
        return None
    mapping = tuple(sorted(matcher.mapping.items(), key=lambda pair: sort_key(pair[0])))
    return IsoWitness(mapping=mapping)


def check_domain(poset: Poset, limits: Limits = DEFAULT_LIMITS) -> SubsetReport:
    """
    A cpo is a domain iff its finite elements form a finitary basis whose
    completion is isomorphic to it.
    """
    cpo = check_cpo(poset, limits=limits)
    if not cpo.holds:
        return SubsetReport.failed(
            "domain", cpo.witness or (), f"not a cpo: {cpo.reason}", details=(cpo,)
        )
    basis = induced_subposet(poset, finite_elements(poset, limits), f"{poset.name}^0")
    finitary = is_finitary_basis(basis, limits=limits)
    if not finitary.holds:
        return SubsetReport.failed(
            "domain",
            finitary.witness or (),
            f"finite elements are not a finitary basis: {finitary.reason}",
            details=(cpo, finitary),
        )
    witness = check_isomorphic(poset, ideal_completion(basis, limits=limits), limits)
    if witness is None:
        return SubsetReport.failed(
            "domain",
            (),
            "not isomorphic to the completion of its finite elements",
            details=(cpo, finitary),
        )
    return SubsetReport.passed("domain", details=(cpo, finitary))


def _lub_clause(d: Poset, e: Poset, shared: list[Any]) -> SubsetReport:
    # d1 join_d d2 = d3  <=>  d1 join_e d2 = d3, for d3 ranging over d
    for i, x in enumerate(shared):
        for y in shared[i + 1 :]:
            in_d, in_e = d.join(x, y), e.join(x, y)
            if in_d == in_e:
                continue
            if in_d is not None or in_e in d:
                return SubsetReport.failed(
                    "lub",
                    (x, y, in_d if in_d is not None else in_e),
                    f"lub of {x} and {y} is {in_d} in {d.name} but {in_e} in {e.name}",
                )
    return SubsetReport.passed("lub")


def check_subdomain(d: Poset, e: Poset) -> SubsetReport:
    """
    Check the four subdomain clauses of d inside e.

    Args:
        d: The candidate subdomain
        e: The enclosing domain

    Returns:
        A report with one detail per clause (universe, bottom, order, lub);
        the overall witness comes from the first failing clause. Posets
        without a least element get a not-applicable report.
    """
    if d.least() is None or e.least() is None:
        return SubsetReport.not_applicable("subdomain", "both posets need a bottom element")

    clauses = []
    missing = [x for x in d.elements if x not in e]
    if missing:
        clauses.append(
            SubsetReport.failed("universe", (missing[0],), f"{missing[0]} is not an element of {e.name}")
        )
    else:
        clauses.append(SubsetReport.passed("universe"))

    bottom_d, bottom_e = d.least(), e.least()
    if bottom_d != bottom_e:
        clauses.append(
            SubsetReport.failed("bottom", (bottom_d, bottom_e), "the bottom elements differ")
        )
    else:
        clauses.append(SubsetReport.passed("bottom"))

    shared = [x for x in d.elements if x in e]
    order_failure = next(
        (
            (x, y)
            for x in shared
            for y in shared
            if d.leq(x, y) != e.leq(x, y)
        ),
        None,
    )
    if order_failure:
        x, y = order_failure
        clauses.append(
            SubsetReport.failed(
                "order", order_failure, f"{x} <= {y} holds in only one of the two orders"
            )
        )
    else:
        clauses.append(SubsetReport.passed("order"))

    clauses.append(_lub_clause(d, e, shared))

    for number, clause in enumerate(clauses, start=1):
        if not clause.holds:
            return SubsetReport.failed(
                "subdomain",
                clause.witness or (),
                f"clause {number} ({clause.predicate}) fails: {clause.reason}",
                details=tuple(clauses),
            )
    return SubsetReport.passed("subdomain", details=tuple(clauses))
