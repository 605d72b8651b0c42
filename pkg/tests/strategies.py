"""
Hypothesis strategies producing random relations and random finitary bases.
"""

import itertools

from hypothesis import assume
from hypothesis import strategies as st

from domkit.basis import FiniteBasis, poset_from_relation
from domkit.terms import BOTTOM, Atom


@st.composite
def relations(draw, max_size: int = 6):
    """An arbitrary binary relation over at most max_size atoms."""
    size = draw(st.integers(min_value=1, max_value=max_size))
    elements = [Atom(f"e{i}") for i in range(size)]
    pairs = list(itertools.product(elements, repeat=2))
    relation = draw(st.sets(st.sampled_from(pairs)))
    return elements, relation


@st.composite
def pointed_posets(draw, max_size: int = 6) -> FiniteBasis:
    """A poset with a least element, generated from a random acyclic cover set."""
    size = draw(st.integers(min_value=1, max_value=max_size))
    atoms = [Atom(f"e{i}") for i in range(1, size)]
    candidates = list(itertools.combinations(atoms, 2))
    edges = draw(st.sets(st.sampled_from(candidates))) if candidates else set()
    relation = [(BOTTOM, atom) for atom in atoms] + list(edges)
    return poset_from_relation([BOTTOM, *atoms], relation, f"random-{size}")


@st.composite
def trees(draw, max_size: int = 6) -> FiniteBasis:
    """A tree rooted at bottom; comparable pairs are the only bounded ones."""
    size = draw(st.integers(min_value=1, max_value=max_size))
    nodes = [BOTTOM] + [Atom(f"n{i}") for i in range(1, size)]
    parents = [draw(st.integers(min_value=0, max_value=i - 1)) for i in range(1, size)]
    covers = [(nodes[p], nodes[i]) for i, p in enumerate(parents, start=1)]
    return poset_from_relation(nodes, covers, f"tree-{size}")


@st.composite
def intersection_families(draw, max_size: int = 6) -> FiniteBasis:
    """Subsets of a 4-set closed under intersection, ordered by inclusion."""
    family = set(
        draw(st.lists(st.frozensets(st.integers(min_value=0, max_value=3)), min_size=1, max_size=3))
    )
    while True:
        meets = {a & b for a, b in itertools.combinations(family, 2)} - family
        if not meets:
            break
        family |= meets
    assume(len(family) <= max_size)
    least = frozenset.intersection(*family)

    def term(s):
        return BOTTOM if s == least else Atom("s" + "".join(str(i) for i in sorted(s)))

    relation = [(term(a), term(b)) for a in family for b in family if a < b]
    return poset_from_relation([term(s) for s in family], relation, f"meets-{len(family)}")


def finitary_bases(max_size: int = 6):
    """Finitary bases with at most max_size elements."""
    return st.one_of(trees(max_size), intersection_families(max_size))
