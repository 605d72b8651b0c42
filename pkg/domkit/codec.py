"""
The JSON basis document, its parser and serializer, and DOT export.

Document shape::

    {"name": str, "elements": [term, ...], "bottom": term,
     "order": [[lo, hi], ...], "closure": "auto" | "given"}

With ``"auto"`` the order lists generators (usually Hasse covers) and the
reflexive-transitive closure is taken; with ``"given"`` it must already be
the full relation.
"""

import json
import logging
from collections import Counter
from pathlib import Path
from typing import Any, Literal, Optional

from jinja2 import Environment, FileSystemLoader
from pydantic import BaseModel, Field, ValidationError

from domkit.basis import FiniteBasis, Poset, poset_from_relation
from domkit.completion import CompletedDomain
from domkit.errors import AxiomViolationError, BasisFormatError, UnknownElementError
from domkit.models import SubsetReport, render_value
from domkit.terms import parse_term, sort_key

log = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).parent / "templates"


class BasisDocument(BaseModel):
    """The decoded JSON form of a basis, before terms are parsed."""

    name: str = "basis"
    elements: list[str] = Field(min_length=1)
    bottom: Optional[str] = None
    order: list[tuple[str, str]] = []
    closure: Literal["auto", "given"] = "auto"
    notes: dict[str, Any] = {}


def _decode(text: str) -> BasisDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise BasisFormatError(e.msg, e.lineno, e.colno) from e
    try:
        return BasisDocument.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        raise BasisFormatError(f"{where}: {first['msg']}" if where else first["msg"]) from e


def parse_poset(text: str) -> Poset:
    """
    Parse a basis document without requiring a least element.

    Raises:
        BasisFormatError: For malformed JSON or document fields
        TermSyntaxError: For malformed terms
        UnknownElementError: If the order mentions an undeclared term
        AxiomViolationError: If the order fails the partial-order axioms
    """
    document = _decode(text)
    elements = [parse_term(term) for term in document.elements]
    duplicates = sorted((e for e, n in Counter(elements).items() if n > 1), key=sort_key)
    if duplicates:
        raise BasisFormatError(f"duplicate element {duplicates[0]}")
    known = set(elements)
    relation = []
    for lo_text, hi_text in document.order:
        lo, hi = parse_term(lo_text), parse_term(hi_text)
        for term in (lo, hi):
            if term not in known:
                raise UnknownElementError(term, document.name)
        relation.append((lo, hi))

    poset = poset_from_relation(
        elements, relation, document.name, close=document.closure == "auto"
    )
    poset.notes.update(document.notes)
    if document.bottom is not None:
        bottom = parse_term(document.bottom)
        if bottom not in known:
            raise UnknownElementError(bottom, document.name)
        if poset.least() != bottom:
            raise AxiomViolationError(
                SubsetReport.failed(
                    "bottom", (bottom,), f"{bottom} is not below every element"
                )
            )
    return poset


def parse_basis(text: str) -> FiniteBasis:
    """
    Parse a basis document into a pointed basis.

    Args:
        text: The JSON document

    Returns:
        The basis, with canonical terms and the closed order

    Raises:
        AxiomViolationError: Additionally when there is no least element
    """
    poset = parse_poset(text)
    if not isinstance(poset, FiniteBasis):
        raise AxiomViolationError(
            SubsetReport.failed("bottom", (), f"{poset.name} has no least element")
        )
    return poset


def _pair_list(pairs: Any) -> list[list[str]]:
    return sorted([str(lo), str(hi)] for lo, hi in pairs)


def basis_document(basis: Poset, full_order: bool = False) -> dict[str, Any]:
    document: dict[str, Any] = {"name": basis.name, "elements": [str(e) for e in basis.elements]}
    least = basis.least()
    if least is not None:
        document["bottom"] = str(least)
    if full_order:
        document["order"] = _pair_list(basis.leq_pairs)
        document["closure"] = "given"
    else:
        document["order"] = _pair_list(basis.covers)
        document["closure"] = "auto"
    if basis.notes:
        document["notes"] = json.loads(json.dumps(basis.notes, default=str))
    return document


def serialize_basis(basis: Poset, full_order: bool = False) -> str:
    """
    Serialize a basis canonically; parse_basis inverts it.

    Args:
        basis: The basis to write
        full_order: Write the full relation with closure "given" instead of
                    the covers with closure "auto"
    """
    return json.dumps(basis_document(basis, full_order), indent=2) + "\n"


def completion_document(completed: CompletedDomain) -> dict[str, Any]:
    return {
        "name": completed.name,
        "host": completed.host.name,
        "elements": [render_value(i.sorted_members()) for i in completed.elements],
        "bottom": render_value(completed.bottom.sorted_members()),
        "order": sorted(
            [render_value(lo.sorted_members()), render_value(hi.sorted_members())]
            for lo, hi in completed.covers
        ),
        "closure": "auto",
    }


def serialize_completion(completed: CompletedDomain) -> str:
    """The completion with each ideal written as its sorted member list."""
    return json.dumps(completion_document(completed), indent=2) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(basis: Poset, full_order: bool = False) -> str:
    """
    Render a Hasse diagram in DOT, bottom at the lowest rank.

    Node ids follow the sorted canonical terms, so the output is stable.
    """
    env = Environment(
        loader=FileSystemLoader(str(TEMPLATES_DIR)),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    ids = {e: f"n{i}" for i, e in enumerate(basis.elements)}
    if full_order:
        edges = [(lo, hi) for lo, hi in basis.leq_pairs if lo != hi]
    else:
        edges = list(basis.covers)
    edges.sort(key=lambda p: (sort_key(p[0]), sort_key(p[1])))
    least = basis.least()
    return env.get_template("hasse.dot.j2").render(
        name=_dot_escape(basis.name),
        nodes=[{"id": ids[e], "label": _dot_escape(str(e))} for e in basis.elements],
        bottom=ids[least] if least is not None else None,
        edges=[(ids[lo], ids[hi]) for lo, hi in edges],
    )
