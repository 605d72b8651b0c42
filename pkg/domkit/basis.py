"""
Finite posets and finitary bases as values, and the order-theoretic
predicates on their subsets.
"""

import itertools
import logging
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Iterator, Optional, Sequence

import networkx as nx

from domkit.errors import (
    AxiomViolationError,
    CapExceededError,
    InputError,
    PreconditionError,
    UnknownElementError,
)
from domkit.models import Limits, SubsetReport
from domkit.terms import BOTTOM, Atom, is_bottom_term, sort_key

log = logging.getLogger(__name__)

DEFAULT_LIMITS = Limits()

Pair = tuple[Any, Any]


class Poset:
    """
    A finite partial order whose relation is already reflexive-transitive closed.

    Elements may be any hashable value with a canonical ``str`` rendering;
    bases use Element terms, completions use Ideal values. The universe is
    kept sorted by rendering so that every derived listing is deterministic.
    """

    def __init__(
        self,
        elements: Iterable[Hashable],
        leq: Iterable[Pair],
        name: str = "poset",
        notes: Optional[dict[str, Any]] = None,
    ):
        """
        Initialize the poset.

        Args:
            elements: The universe of the ordering
            leq: Pairs (lo, hi) of the approximation relation; reflexive pairs
                 are added automatically
            name: Display name used in serialized output
            notes: Free-form metadata (constructor truncation, provenance)
        """
        self.name = name
        self.elements: tuple[Any, ...] = tuple(sorted(set(elements), key=sort_key))
        if not self.elements:
            raise InputError("a poset needs at least one element")
        self.notes: dict[str, Any] = dict(notes or {})

        up: dict[Any, set] = {e: {e} for e in self.elements}
        down: dict[Any, set] = {e: {e} for e in self.elements}
        for lo, hi in leq:
            if lo not in up:
                raise UnknownElementError(lo, name)
            if hi not in up:
                raise UnknownElementError(hi, name)
            up[lo].add(hi)
            down[hi].add(lo)
        self._up = {e: frozenset(s) for e, s in up.items()}
        self._down = {e: frozenset(s) for e, s in down.items()}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Any]:
        return iter(self.elements)

    def __contains__(self, element: object) -> bool:
        return element in self._up

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self._up == other._up

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r}, {len(self)} elements)"

    def leq(self, lo: Any, hi: Any) -> bool:
        return hi in self._up[lo]

    def up_set(self, element: Any) -> frozenset:
        return self._up[element]

    def down_set(self, element: Any) -> frozenset:
        return self._down[element]

    @cached_property
    def leq_pairs(self) -> frozenset[Pair]:
        return frozenset((lo, hi) for lo in self.elements for hi in self._up[lo])

    def least(self) -> Optional[Any]:
        """Return the least element, if the poset has one."""
        size = len(self.elements)
        for element in self.elements:
            if len(self._up[element]) == size:
                return element
        return None

    def join(self, a: Any, b: Any) -> Optional[Any]:
        """Binary lub without membership checks."""
        bounds = self._up[a] & self._up[b]
        for candidate in bounds:
            if bounds <= self._up[candidate]:
                return candidate
        return None

    @cached_property
    def linear_extension(self) -> tuple[Any, ...]:
        """Elements listed so that every element follows everything below it."""
        return tuple(sorted(self.elements, key=lambda e: (len(self._down[e]), sort_key(e))))

    @cached_property
    def heights(self) -> dict[Any, int]:
        """Length of the longest strict chain ending at each element."""
        height: dict[Any, int] = {}
        for element in self.linear_extension:
            below = [height[x] for x in self._down[element] if x != element]
            height[element] = 1 + max(below) if below else 0
        return height

    def to_graph(self, strict: bool = True) -> nx.DiGraph:
        """The order relation as a networkx digraph (edges point upward)."""
        graph = nx.DiGraph()
        graph.add_nodes_from(self.elements)
        graph.add_edges_from(
            (lo, hi) for lo, hi in sorted(self.leq_pairs, key=_pair_sort) if not strict or lo != hi
        )
        return graph

    @cached_property
    def covers(self) -> tuple[Pair, ...]:
        """The covering relation (Hasse diagram edges), sorted."""
        reduced = nx.transitive_reduction(self.to_graph(strict=True))
        return tuple(sorted(reduced.edges(), key=_pair_sort))

    def relabel(self, rename: Callable[[Any], Any], name: Optional[str] = None) -> "Poset":
        """
        Build an isomorphic copy under an injective renaming of elements.

        Args:
            rename: Injective function applied to every element
            name: Name of the copy (defaults to this poset's name)

        Returns:
            The relabelled poset, pointed if this one is
        """
        mapping = {e: rename(e) for e in self.elements}
        if len(set(mapping.values())) != len(mapping):
            raise InputError("relabelling must be injective")
        return make_poset(
            mapping.values(),
            ((mapping[lo], mapping[hi]) for lo, hi in self.leq_pairs),
            name or self.name,
            self.notes,
        )


class FiniteBasis(Poset):
    """A finite pointed poset; whether it is finitary is a separate check."""

    def __init__(
        self,
        elements: Iterable[Hashable],
        leq: Iterable[Pair],
        name: str = "basis",
        notes: Optional[dict[str, Any]] = None,
        bottom: Optional[Any] = None,
    ):
        super().__init__(elements, leq, name, notes)
        least = self.least()
        if least is None:
            raise PreconditionError(f"{name} has no least element")
        if bottom is not None and bottom != least:
            raise PreconditionError(f"{bottom} is not below every element of {name}")
        stray = [e for e in self.elements if e != least and is_bottom_term(e)]
        if stray:
            raise PreconditionError(
                f"{stray[0]} names a bottom element but is not the least element of {name}"
            )
        self.bottom = least

    def non_bottom(self) -> tuple[Any, ...]:
        return tuple(e for e in self.elements if e != self.bottom)


def make_poset(
    elements: Iterable[Hashable],
    leq: Iterable[Pair],
    name: str = "poset",
    notes: Optional[dict[str, Any]] = None,
) -> Poset:
    """Build a FiniteBasis when the order has a least element, a Poset otherwise."""
    poset = Poset(elements, leq, name, notes)
    if poset.least() is None:
        return poset
    return FiniteBasis(poset.elements, poset.leq_pairs, name, notes)


def _pair_sort(pair: Pair) -> tuple[str, str]:
    return (sort_key(pair[0]), sort_key(pair[1]))


def _members(poset: Poset, subset: Iterable[Any]) -> tuple[Any, ...]:
    """Validate membership and return the subset sorted."""
    items = set(subset)
    for item in items:
        if item not in poset:
            raise UnknownElementError(item, poset.name)
    return tuple(sorted(items, key=sort_key))


def subsets_by_size(
    items: Sequence[Any], cap: int, what: str = "subset scan"
) -> Iterator[tuple[Any, ...]]:
    """Yield every subset of items, smallest first, guarded by a cap on len(items)."""
    if len(items) > cap:
        raise CapExceededError(what, len(items), cap)
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def check_partial_order(
    elements: Iterable[Any], relation: Iterable[Pair], close: bool = True
) -> SubsetReport:
    """
    Check the partial-order axioms on a relation.

    Args:
        elements: The intended universe
        relation: Pairs (lo, hi); with close=True these may be generators
                  (e.g. Hasse covers)
        close: Whether to take the reflexive-transitive closure first

    Returns:
        A report naming the first violated axiom with its offending pair or triple
    """
    universe = tuple(sorted(set(elements), key=sort_key))
    if not universe:
        raise InputError("a partial order needs a non-empty universe")
    known = set(universe)
    pairs = set()
    for lo, hi in relation:
        for item in (lo, hi):
            if item not in known:
                raise UnknownElementError(item, "relation")
        pairs.add((lo, hi))

    if close:
        graph = nx.DiGraph()
        graph.add_nodes_from(universe)
        graph.add_edges_from(pairs)
        pairs = set(nx.transitive_closure(graph, reflexive=True).edges())
        pairs.update((e, e) for e in universe)

    above: dict[Any, set] = {e: set() for e in universe}
    for lo, hi in pairs:
        above[lo].add(hi)

    for x in universe:
        if x not in above[x]:
            return SubsetReport.failed("reflexivity", (x,), f"{x} does not approximate itself")
    for x, y in itertools.combinations(universe, 2):
        if y in above[x] and x in above[y]:
            return SubsetReport.failed(
                "antisymmetry", (x, y), f"{x} and {y} approximate each other"
            )
    for x in universe:
        for y in sorted(above[x], key=sort_key):
            for z in sorted(above[y], key=sort_key):
                if z not in above[x]:
                    return SubsetReport.failed(
                        "transitivity", (x, y, z), f"{x} <= {y} <= {z} but not {x} <= {z}"
                    )
    return SubsetReport.passed("partial-order")


def poset_from_relation(
    elements: Iterable[Any],
    relation: Iterable[Pair],
    name: str = "poset",
    close: bool = True,
) -> Poset:
    """Build a poset from a (possibly generating) relation, enforcing the axioms."""
    universe = list(elements)
    relation = list(relation)
    report = check_partial_order(universe, relation, close=close)
    if not report.holds:
        raise AxiomViolationError(report)
    if close:
        graph = nx.DiGraph()
        graph.add_nodes_from(universe)
        graph.add_edges_from(relation)
        relation = list(nx.transitive_closure(graph, reflexive=True).edges())
    return make_poset(universe, relation, name)


def upper_bounds(poset: Poset, subset: Iterable[Any]) -> frozenset:
    members = _members(poset, subset)
    if not members:
        return frozenset(poset.elements)
    return frozenset.intersection(*(poset.up_set(m) for m in members))


def minimal_upper_bounds(poset: Poset, subset: Iterable[Any]) -> tuple[Any, ...]:
    bounds = upper_bounds(poset, subset)
    minimal = [u for u in bounds if not any(v != u and poset.leq(v, u) for v in bounds)]
    return tuple(sorted(minimal, key=sort_key))


def lub(poset: Poset, subset: Iterable[Any]) -> Optional[Any]:
    """
    Least upper bound of a subset.

    Args:
        poset: The ambient poset
        subset: Elements of the poset

    Returns:
        The least upper bound, or None when the subset is unbounded or its
        upper bounds have no minimum. The lub of the empty set is the least
        element of the poset.
    """
    bounds = upper_bounds(poset, subset)
    for candidate in bounds:
        if bounds <= poset.up_set(candidate):
            return candidate
    return None


def is_bounded(poset: Poset, subset: Iterable[Any]) -> SubsetReport:
    members = _members(poset, subset)
    if upper_bounds(poset, members):
        return SubsetReport.passed("bounded", subject=members)
    return SubsetReport.failed("bounded", members, "no upper bound in the poset", members)


def is_consistent(
    poset: Poset, subset: Iterable[Any], limits: Limits = DEFAULT_LIMITS
) -> SubsetReport:
    """Every finite subset of the set is bounded in the whole poset."""
    members = _members(poset, subset)
    if upper_bounds(poset, members):
        return SubsetReport.passed("consistent", subject=members)
    for candidate in subsets_by_size(members, limits.subset_cap, "consistency scan"):
        if not upper_bounds(poset, candidate):
            return SubsetReport.failed(
                "consistent", candidate, "finite subset has no upper bound", members
            )
    raise AssertionError("an unbounded set has an unbounded finite subset")


def is_directed(
    poset: Poset, subset: Iterable[Any], limits: Limits = DEFAULT_LIMITS
) -> SubsetReport:
    """Every finite subset of the set is bounded inside the set itself."""
    members = _members(poset, subset)
    if not members:
        return SubsetReport.failed(
            "directed", (), "the empty subset has no upper bound inside the empty set", members
        )
    inside = set(members)
    if any(set(members) <= poset.down_set(m) for m in members):
        return SubsetReport.passed("directed", subject=members)
    for candidate in subsets_by_size(members, limits.subset_cap, "directedness scan"):
        if not (upper_bounds(poset, candidate) & inside):
            return SubsetReport.failed(
                "directed", candidate, "finite subset has no upper bound inside the set", members
            )
    raise AssertionError("a finite set without a greatest element is not directed")


def is_downward_closed(poset: Poset, subset: Iterable[Any]) -> SubsetReport:
    members = _members(poset, subset)
    inside = set(members)
    for member in members:
        for below in sorted(poset.down_set(member), key=sort_key):
            if below not in inside:
                return SubsetReport.failed(
                    "downward-closed",
                    (below, member),
                    f"{below} approximates {member} but is missing",
                    members,
                )
    return SubsetReport.passed("downward-closed", subject=members)


def lower_set(poset: Poset, element: Any) -> frozenset:
    """All elements that approximate the given one."""
    if element not in poset:
        raise UnknownElementError(element, poset.name)
    return poset.down_set(element)


def is_chain(poset: Poset, subset: Iterable[Any]) -> SubsetReport:
    members = _members(poset, subset)
    if not members:
        return SubsetReport.failed("chain", (), "a chain must be non-empty", members)
    for a, b in itertools.combinations(members, 2):
        if not (poset.leq(a, b) or poset.leq(b, a)):
            return SubsetReport.failed("chain", (a, b), f"{a} and {b} are incomparable", members)
    return SubsetReport.passed("chain", subject=members)


def is_antichain(poset: Poset, subset: Iterable[Any]) -> SubsetReport:
    members = _members(poset, subset)
    if not members:
        return SubsetReport.failed("antichain", (), "an anti-chain must be non-empty", members)
    for a, b in itertools.combinations(members, 2):
        if poset.leq(a, b) or poset.leq(b, a):
            lo, hi = (a, b) if poset.leq(a, b) else (b, a)
            return SubsetReport.failed("antichain", (lo, hi), f"{lo} approximates {hi}", members)
    return SubsetReport.passed("antichain", subject=members)


def is_ideal(
    poset: Poset, subset: Iterable[Any], limits: Limits = DEFAULT_LIMITS
) -> SubsetReport:
    """Downward-closed and directed."""
    members = _members(poset, subset)
    closed = is_downward_closed(poset, members)
    directed = is_directed(poset, members, limits)
    details = (closed, directed)
    for part in details:
        if not part.holds:
            return SubsetReport.failed(
                "ideal",
                part.witness or (),
                f"not {part.predicate}: {part.reason}",
                members,
                details,
            )
    return SubsetReport.passed("ideal", subject=members, details=details)


def _chains(poset: Poset, members: Sequence[Any]) -> Iterator[tuple[Any, ...]]:
    """Non-empty chains inside members, each listed bottom-up."""
    inside = set(members)
    ordered = [e for e in poset.linear_extension if e in inside]

    def extend(chain: tuple[Any, ...], start: int) -> Iterator[tuple[Any, ...]]:
        yield chain
        for index in range(start, len(ordered)):
            candidate = ordered[index]
            if candidate != chain[-1] and poset.leq(chain[-1], candidate):
                yield from extend(chain + (candidate,), index + 1)

    for index, element in enumerate(ordered):
        yield from extend((element,), index + 1)


def is_weak_ideal(
    poset: Poset, subset: Iterable[Any], limits: Limits = DEFAULT_LIMITS
) -> SubsetReport:
    """
    Non-empty, downward-closed and closed under lubs of its chains.

    The chain scan is bounded by limits.subset_cap on the size of the set.
    """
    members = _members(poset, subset)
    if not members:
        raise InputError("a weak ideal must be non-empty")
    if len(members) > limits.subset_cap:
        raise CapExceededError("weak-ideal chain scan", len(members), limits.subset_cap)
    closed = is_downward_closed(poset, members)
    if not closed.holds:
        return SubsetReport.failed(
            "weak-ideal",
            closed.witness or (),
            f"not downward-closed: {closed.reason}",
            members,
            (closed,),
        )
    inside = set(members)
    for chain in _chains(poset, members):
        top = lub(poset, chain)
        if top is not None and top not in inside:
            return SubsetReport.failed(
                "weak-ideal", chain, f"lub {top} of a chain lies outside the set", members
            )
    return SubsetReport.passed("weak-ideal", subject=members, details=(closed,))


def is_finitary_basis(
    poset: Poset, exhaustive: bool = False, limits: Limits = DEFAULT_LIMITS
) -> SubsetReport:
    """
    Check that every finite bounded subset has a lub.

    The default criterion checks the empty subset and every bounded pair;
    lubs of larger bounded sets then exist by folding pairwise lubs under a
    common bound. ``exhaustive=True`` scans every subset instead.

    Args:
        poset: The poset to check
        exhaustive: Scan all subsets rather than pairs
        limits: Caps for the exhaustive scan

    Returns:
        A report whose witness is a bounded subset without a lub
    """
    if exhaustive:
        for candidate in subsets_by_size(poset.elements, limits.subset_cap, "finitary scan"):
            if upper_bounds(poset, candidate) and lub(poset, candidate) is None:
                return SubsetReport.failed(
                    "finitary-basis",
                    candidate,
                    f"bounded with minimal upper bounds {list(map(str, minimal_upper_bounds(poset, candidate)))}",
                )
        return SubsetReport.passed("finitary-basis")

    if poset.least() is None:
        return SubsetReport.failed(
            "finitary-basis", (), "the empty subset is bounded but has no least upper bound"
        )
    for a, b in itertools.combinations(poset.elements, 2):
        if poset.up_set(a) & poset.up_set(b) and poset.join(a, b) is None:
            bounds = minimal_upper_bounds(poset, (a, b))
            return SubsetReport.failed(
                "finitary-basis",
                (a, b),
                f"bounded with minimal upper bounds {[str(u) for u in bounds]}",
            )
    return SubsetReport.passed("finitary-basis")


def lift_antichain(names: Sequence[str], name: str = "") -> FiniteBasis:
    """
    Lift an anti-chain of atoms by a fresh bottom.

    Args:
        names: Distinct atom names
        name: Basis name (defaults to flat-N)

    Returns:
        The flat basis with bot below every atom and the atoms incomparable
    """
    if not names:
        raise InputError("cannot lift an empty anti-chain; use one_point_basis")
    if len(set(names)) != len(names):
        raise InputError(f"duplicate atom names in {list(names)}")
    try:
        atoms = [Atom(n) for n in names]
    except ValueError as e:
        raise InputError(str(e)) from e
    return FiniteBasis(
        [BOTTOM, *atoms],
        [(BOTTOM, atom) for atom in atoms],
        name or f"flat-{len(atoms) + 1}",
    )


def one_point_basis(name: str = "one-point") -> FiniteBasis:
    return FiniteBasis([BOTTOM], [], name)


def induced_subposet(poset: Poset, subset: Iterable[Any], name: str = "") -> Poset:
    """The order restricted to a non-empty subset; pointed only if the restriction is."""
    members = _members(poset, subset)
    if not members:
        raise InputError("induced partial order needs a non-empty subset")
    inside = set(members)
    pairs = [(lo, hi) for lo in members for hi in poset.up_set(lo) if hi in inside]
    return make_poset(members, pairs, name or f"{poset.name}|{len(members)}")
