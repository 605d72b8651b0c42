"""
Canonical structural terms naming basis elements, and the term-string parser.

Every element of every basis domkit builds is one of the term shapes below.
Terms are immutable and compare structurally; their canonical rendering is
also their sort key, so sorted collections of terms are deterministic.

Rendering grammar:

    bot | atom:NAME | inl(T) | inr(T) | pair(T,T) | seq[T,...]
        | rec{L:T,...} | am{(T,T),...}
"""

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from domkit.errors import TermSyntaxError

NAME_PATTERN = re.compile(r"[A-Za-z0-9_.'\-]+")


def _check_name(name: str, kind: str) -> None:
    if not isinstance(name, str) or not NAME_PATTERN.fullmatch(name):
        raise ValueError(f"invalid {kind} name {name!r}")


class Element:
    """Base class of all terms."""

    def render(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.render()

    def __lt__(self, other: "Element") -> bool:
        return self.render() < other.render()


@dataclass(frozen=True, eq=True)
class Bottom(Element):
    def render(self) -> str:
        return "bot"


@dataclass(frozen=True, eq=True)
class Atom(Element):
    name: str

    def __post_init__(self) -> None:
        _check_name(self.name, "atom")

    def render(self) -> str:
        return f"atom:{self.name}"


@dataclass(frozen=True, eq=True)
class InL(Element):
    inner: Element

    @cached_property
    def _text(self) -> str:
        return f"inl({self.inner.render()})"

    def render(self) -> str:
        return self._text


@dataclass(frozen=True, eq=True)
class InR(Element):
    inner: Element

    @cached_property
    def _text(self) -> str:
        return f"inr({self.inner.render()})"

    def render(self) -> str:
        return self._text


@dataclass(frozen=True, eq=True)
class Pair(Element):
    left: Element
    right: Element

    def __post_init__(self) -> None:
        if is_bottom_term(self.left) or is_bottom_term(self.right):
            raise ValueError("strict pairs cannot hold a bottom component")

    @cached_property
    def _text(self) -> str:
        return f"pair({self.left.render()},{self.right.render()})"

    def render(self) -> str:
        return self._text


@dataclass(frozen=True, eq=True)
class Seq(Element):
    items: tuple[Element, ...] = ()

    def __post_init__(self) -> None:
        if any(is_bottom_term(item) for item in self.items):
            raise ValueError("strict sequences cannot hold a bottom member")

    @cached_property
    def _text(self) -> str:
        return "seq[" + ",".join(item.render() for item in self.items) + "]"

    def render(self) -> str:
        return self._text

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True, eq=True)
class Rec(Element):
    """A record: labels sorted and distinct, no label bound to a bottom term."""

    fields: tuple[tuple[str, Element], ...] = ()

    def __post_init__(self) -> None:
        labels = [label for label, _ in self.fields]
        for label in labels:
            _check_name(label, "label")
        if labels != sorted(set(labels)):
            raise ValueError(f"record labels must be sorted and distinct: {labels}")
        if any(is_bottom_term(value) for _, value in self.fields):
            raise ValueError("records cannot bind a label to a bottom term")

    @classmethod
    def of(cls, mapping: Mapping[str, Element]) -> "Rec":
        return cls(tuple(sorted(mapping.items(), key=lambda item: item[0])))

    def keys(self) -> frozenset[str]:
        return frozenset(label for label, _ in self.fields)

    def as_dict(self) -> dict[str, Element]:
        return dict(self.fields)

    @cached_property
    def _text(self) -> str:
        body = ",".join(f"{label}:{value.render()}" for label, value in self.fields)
        return "rec{" + body + "}"

    def render(self) -> str:
        return self._text


@dataclass(frozen=True, eq=True)
class Am(Element):
    """A relation between two bases, pairs sorted and deduplicated."""

    pairs: tuple[tuple[Element, Element], ...] = ()

    def __post_init__(self) -> None:
        keys = [_pair_key(pair) for pair in self.pairs]
        if keys != sorted(set(keys)):
            raise ValueError("mapping pairs must be sorted and deduplicated")

    @classmethod
    def of(cls, pairs: Iterable[tuple[Element, Element]]) -> "Am":
        return cls(tuple(sorted(set(pairs), key=_pair_key)))

    @cached_property
    def _text(self) -> str:
        body = ",".join(f"({a.render()},{b.render()})" for a, b in self.pairs)
        return "am{" + body + "}"

    def render(self) -> str:
        return self._text


def _pair_key(pair: tuple[Element, Element]) -> tuple[str, str]:
    return (pair[0].render(), pair[1].render())


BOTTOM = Bottom()
EMPTY_RECORD = Rec()
EMPTY_MAPPING = Am()


def is_bottom_term(term: Element) -> bool:
    """Whether a term is the bottom of one of the built-in constructors."""
    return term == BOTTOM or term == EMPTY_RECORD or term == EMPTY_MAPPING


def sort_key(value: object) -> str:
    """Sort key shared by every ordered collection of poset elements."""
    return str(value)


class _TermParser:
    """Recursive-descent parser for canonical term strings.

    Arguments of a constructor are split at top-level commas before they are
    parsed, so arity errors are reported before anything inside them.
    """

    _OPEN = {"(": ")", "[": "]", "{": "}"}

    def __init__(self, text: str):
        self.text = text

    def error(self, message: str, column: int) -> TermSyntaxError:
        return TermSyntaxError(message, self.text, column + 1)

    def parse(self) -> Element:
        return self._parse_span(0, len(self.text))

    def _parse_span(self, start: int, end: int) -> Element:
        while start < end and self.text[start].isspace():
            start += 1
        while end > start and self.text[end - 1].isspace():
            end -= 1
        chunk = self.text[start:end]
        if not chunk:
            raise self.error("empty term", start)

        if chunk == "bot":
            return BOTTOM
        if chunk.startswith("atom:"):
            name = chunk[len("atom:") :]
            if not NAME_PATTERN.fullmatch(name):
                raise self.error(f"invalid atom name {name!r}", start + 5)
            return Atom(name)

        for tag, opener, arity in (
            ("inl", "(", 1),
            ("inr", "(", 1),
            ("pair", "(", 2),
            ("seq", "[", None),
            ("rec", "{", None),
            ("am", "{", None),
        ):
            if chunk.startswith(tag + opener):
                inner_start = start + len(tag) + 1
                args = self._split_args(inner_start - 1, end)
                return self._build(tag, args, arity, start)

        raise self.error(f"unknown term tag in {chunk!r}", start)

    def _split_args(self, open_pos: int, end: int) -> list[tuple[int, int]]:
        """Split the bracketed region starting at open_pos into argument spans."""
        closer = self._OPEN[self.text[open_pos]]
        stack = [closer]
        spans: list[tuple[int, int]] = []
        arg_start = open_pos + 1
        pos = open_pos + 1
        while pos < end:
            char = self.text[pos]
            if char in self._OPEN:
                stack.append(self._OPEN[char])
            elif char in ")]}":
                if char != stack[-1]:
                    raise self.error(f"unbalanced {char!r}", pos)
                stack.pop()
                if not stack:
                    if pos != end - 1:
                        raise self.error("trailing characters after term", pos + 1)
                    if self.text[arg_start:pos].strip() or spans:
                        spans.append((arg_start, pos))
                    return spans
            elif char == "," and len(stack) == 1:
                spans.append((arg_start, pos))
                arg_start = pos + 1
            pos += 1
        raise self.error(f"missing {closer!r}", end)

    def _build(
        self, tag: str, args: list[tuple[int, int]], arity: int | None, start: int
    ) -> Element:
        if arity is not None and len(args) != arity:
            raise self.error(
                f"{tag} expects {arity} argument{'s' if arity > 1 else ''}, got {len(args)}",
                start,
            )
        try:
            if tag == "inl":
                return InL(self._parse_span(*args[0]))
            if tag == "inr":
                return InR(self._parse_span(*args[0]))
            if tag == "pair":
                return Pair(self._parse_span(*args[0]), self._parse_span(*args[1]))
            if tag == "seq":
                return Seq(tuple(self._parse_span(*span) for span in args))
            if tag == "rec":
                return self._build_record(args)
            return self._build_mapping(args)
        except ValueError as e:
            raise self.error(str(e), start) from e

    def _build_record(self, args: list[tuple[int, int]]) -> Rec:
        fields: dict[str, Element] = {}
        for arg_start, arg_end in args:
            colon = self.text.find(":", arg_start, arg_end)
            if colon < 0:
                raise self.error("record field needs 'label:term'", arg_start)
            label = self.text[arg_start:colon].strip()
            if not NAME_PATTERN.fullmatch(label):
                raise self.error(f"invalid label {label!r}", arg_start)
            if label in fields:
                raise self.error(f"duplicate label {label!r}", arg_start)
            fields[label] = self._parse_span(colon + 1, arg_end)
        return Rec.of(fields)

    def _build_mapping(self, args: list[tuple[int, int]]) -> Am:
        pairs = []
        for arg_start, arg_end in args:
            while arg_start < arg_end and self.text[arg_start].isspace():
                arg_start += 1
            while arg_end > arg_start and self.text[arg_end - 1].isspace():
                arg_end -= 1
            if arg_start >= arg_end or self.text[arg_start] != "(":
                raise self.error("mapping entries must be '(term,term)'", arg_start)
            spans = self._split_args(arg_start, arg_end)
            if len(spans) != 2:
                raise self.error(
                    f"mapping pair expects 2 arguments, got {len(spans)}", arg_start
                )
            pairs.append((self._parse_span(*spans[0]), self._parse_span(*spans[1])))
        return Am.of(pairs)


def parse_term(text: str) -> Element:
    """
    Parse a canonical term string.

    Args:
        text: A term rendering such as ``pair(atom:a,inl(atom:b))``

    Returns:
        The parsed term, canonicalized (record labels and mapping pairs sorted)

    Raises:
        TermSyntaxError: If the text does not follow the term grammar
    """
    return _TermParser(text).parse()


def parse_term_list(text: str) -> list[Element]:
    """
    Parse a comma-separated list of terms; commas inside brackets do not split.

    Raises:
        TermSyntaxError: If any entry does not follow the term grammar
    """
    if not text.strip():
        return []
    parser = _TermParser(f"({text})")
    return [parser._parse_span(*span) for span in parser._split_args(0, len(parser.text))]
