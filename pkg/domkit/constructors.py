"""
The domain constructors: coalesced sum, strict product, function space,
bounded Kleene star and records.

Every constructor names its elements with canonical terms built from the
terms of its arguments, so applying a constructor to a subdomain yields a
literal subset of applying it to the larger domain.
"""

import itertools
import logging
from typing import Iterable, Optional

from domkit.basis import FiniteBasis
from domkit.errors import CardinalityCapError, InputError
from domkit.mappings import generators_of, monotone_maps
from domkit.models import ConstructorParams
from domkit.terms import (
    BOTTOM,
    EMPTY_MAPPING,
    EMPTY_RECORD,
    NAME_PATTERN,
    Am,
    Element,
    InL,
    InR,
    Pair,
    Rec,
    Seq,
)

log = logging.getLogger(__name__)

DEFAULT_PARAMS = ConstructorParams()


def _guard(step: str, size: int, params: ConstructorParams) -> None:
    if size > params.cardinality_cap:
        raise CardinalityCapError(step, size, params.cardinality_cap)


def coalesced_sum(
    a: FiniteBasis, b: FiniteBasis, params: ConstructorParams = DEFAULT_PARAMS
) -> FiniteBasis:
    """
    Disjoint union with the two bottoms identified.

    Args:
        a: Left summand, tagged with inl
        b: Right summand, tagged with inr
        params: Cardinality cap

    Returns:
        A basis of size |a| + |b| - 1
    """
    _guard("sum", len(a) + len(b) - 1, params)
    left = {x: InL(x) for x in a.non_bottom()}
    right = {y: InR(y) for y in b.non_bottom()}
    elements = [BOTTOM, *left.values(), *right.values()]
    leq = [(BOTTOM, e) for e in elements]
    for tags, summand in ((left, a), (right, b)):
        leq.extend(
            (tags[lo], tags[hi])
            for lo, hi in summand.leq_pairs
            if lo in tags and hi in tags
        )
    return FiniteBasis(elements, leq, f"({a.name} + {b.name})", bottom=BOTTOM)


def strict_product(
    a: FiniteBasis, b: FiniteBasis, params: ConstructorParams = DEFAULT_PARAMS
) -> FiniteBasis:
    """Smash product: pairs of non-bottom elements under a fresh bottom."""
    _guard("prod", (len(a) - 1) * (len(b) - 1) + 1, params)
    pairs = [Pair(x, y) for x, y in itertools.product(a.non_bottom(), b.non_bottom())]
    leq = [(BOTTOM, p) for p in pairs]
    leq.extend(
        (p, q)
        for p, q in itertools.product(pairs, repeat=2)
        if a.leq(p.left, q.left) and b.leq(p.right, q.right)
    )
    return FiniteBasis([BOTTOM, *pairs], leq, f"({a.name} x {b.name})", bottom=BOTTOM)


def function_space(
    a: FiniteBasis,
    b: FiniteBasis,
    strict: bool = True,
    params: ConstructorParams = DEFAULT_PARAMS,
) -> FiniteBasis:
    """
    The basis of approximable mappings from a to b, ordered by inclusion.

    Each element is named by the step generators of its mapping, which is
    the same term whichever larger source basis the mapping is later
    extended to. With ``strict`` only mappings sending bottom to bottom are
    kept; the one-step functions bottom -> y are removed, not identified
    with the bottom mapping.

    Args:
        a: Source basis
        b: Target basis
        strict: Keep strict mappings only
        params: Cardinality cap

    Returns:
        A basis whose bottom is the empty mapping am{}

    Raises:
        CardinalityCapError: As soon as the enumeration passes the cap
    """
    points: list[dict] = []
    for f in monotone_maps(a, b, strict=strict):
        points.append(f)
        _guard("fun", len(points), params)
    terms = [Am.of(generators_of(a, b, f)) for f in points]
    leq = [
        (terms[i], terms[j])
        for i, f in enumerate(points)
        for j, g in enumerate(points)
        if i != j and all(b.leq(f[x], g[x]) for x in a.elements)
    ]
    arrow = "->" if strict else "=>"
    log.debug("function space %s %s %s has %d elements", a.name, arrow, b.name, len(terms))
    return FiniteBasis(
        terms,
        leq,
        f"({a.name} {arrow} {b.name})",
        notes={"strict": strict},
        bottom=EMPTY_MAPPING,
    )


def strict_fun(
    a: FiniteBasis, b: FiniteBasis, params: ConstructorParams = DEFAULT_PARAMS
) -> FiniteBasis:
    return function_space(a, b, strict=True, params=params)


def kleene_star(
    d: FiniteBasis,
    max_len: Optional[int] = None,
    params: ConstructorParams = DEFAULT_PARAMS,
) -> FiniteBasis:
    """
    Strict finite sequences of non-bottom elements, up to max_len long.

    Sequences of unequal length are incomparable, so the bound never
    changes the order among the sequences it keeps. The bound is recorded
    in the basis notes.
    """
    length = params.max_seq_len if max_len is None else max_len
    if length < 0:
        raise InputError(f"max_len must be non-negative, got {length}")
    proper = d.non_bottom()
    _guard("star", 1 + sum(len(proper) ** k for k in range(length + 1)), params)

    sequences: list[Seq] = []
    leq: list[tuple[Element, Element]] = []
    for k in range(length + 1):
        level = [Seq(items) for items in itertools.product(proper, repeat=k)]
        sequences.extend(level)
        leq.extend(
            (u, v)
            for u, v in itertools.product(level, repeat=2)
            if all(d.leq(x, y) for x, y in zip(u.items, v.items))
        )
    leq.extend((BOTTOM, s) for s in sequences)
    return FiniteBasis(
        [BOTTOM, *sequences],
        leq,
        f"{d.name}*",
        notes={"max_seq_len": length, "truncated": bool(proper)},
        bottom=BOTTOM,
    )


def normalize_labels(labels: Iterable[str]) -> tuple[str, ...]:
    """Validate a label set and return it sorted."""
    names = tuple(labels)
    for label in names:
        if not isinstance(label, str) or not NAME_PATTERN.fullmatch(label):
            raise InputError(f"invalid label {label!r}")
    if len(set(names)) != len(names):
        raise InputError(f"duplicate labels in {list(names)}")
    return tuple(sorted(names))


def _record_leq(m: FiniteBasis, r1: Rec, r2: Rec, ordering: str) -> bool:
    if ordering == "equal-keys" and r1 != EMPTY_RECORD and r1.keys() != r2.keys():
        return False
    values = r2.as_dict()
    return all(label in values and m.leq(v, values[label]) for label, v in r1.fields)


def record_basis(
    labels: Iterable[str],
    m: FiniteBasis,
    params: ConstructorParams = DEFAULT_PARAMS,
) -> FiniteBasis:
    """
    Finite records from a label set into the non-bottom elements of m.

    An absent label reads as bottom. Under the default pointwise ordering a
    record approximates another with more labels; under ``equal-keys`` only
    the empty record sits below records with other key sets.

    Args:
        labels: Proper labels; the bottom label never appears as a key
        m: The method basis
        params: Cardinality cap and record ordering

    Returns:
        A basis of size |m| ** |labels| with the empty record as bottom
    """
    names = normalize_labels(labels)
    _guard("rec", len(m) ** len(names), params)
    choices = [None, *m.non_bottom()]
    records = [
        Rec(tuple((label, v) for label, v in zip(names, values) if v is not None))
        for values in itertools.product(choices, repeat=len(names))
    ]
    ordering = params.record_ordering
    leq = [
        (r1, r2)
        for r1, r2 in itertools.product(records, repeat=2)
        if r1 != r2 and _record_leq(m, r1, r2, ordering)
    ]
    return FiniteBasis(
        records,
        leq,
        f"{{{','.join(names)}}} -o {m.name}",
        notes={"labels": list(names), "record_ordering": ordering},
        bottom=EMPTY_RECORD,
    )
