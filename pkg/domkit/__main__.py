#!/usr/bin/env python3
"""
Command-line interface for domkit.
Usage: domkit <command> [args...]
"""

import logging
import sys
from typing import Any, Optional

import fire  # type: ignore
from pydantic import ValidationError

from domkit.context import WorkbenchContextProvider
from domkit.workflow import Command, CommandRunner


class DomkitCLI:
    """Domain-theory workbench: finite bases, completions, mappings, constructors and COOP."""

    def __init__(self, config_path: str = ""):
        self.config_path = config_path

    def _execute(self, verb: str, *inputs: str, **options: Any) -> None:
        try:
            context = WorkbenchContextProvider.get_default_context(self.config_path)
            command = Command(
                verb=verb,  # type: ignore[arg-type]
                inputs=tuple(str(i) for i in inputs),
                options={k: v for k, v in options.items() if v is not None},
            )
        except ValidationError as e:
            print(f"usage error: {e}", file=sys.stderr)
            sys.exit(2)
        logging.basicConfig(
            level=context.log_level,
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )
        result = CommandRunner(context).run(command)
        if result.output:
            sys.stdout.write(result.output)
        if result.diagnostics:
            print(result.diagnostics, file=sys.stderr)
        sys.exit(result.exit_status)

    def check(self, basis: str) -> None:
        """
        Check that a file holds a finitary basis.

        Args:
            basis: Path to a basis JSON file
        """
        self._execute("check", basis)

    def props(
        self,
        basis: str,
        predicate: Optional[str] = None,
        subset: Optional[Any] = None,
        exhaustive: bool = False,
    ) -> None:
        """
        Evaluate order-theoretic predicates.

        Args:
            basis: Path to a basis JSON file
            predicate: finitary-basis, cpo, domain, or a subset predicate
                       (bounded, consistent, directed, downward-closed, chain,
                       antichain, ideal, weak-ideal)
            subset: Comma-separated terms for subset predicates
            exhaustive: Scan all subsets for finitary-basis

        Examples:
            domkit props butterfly.json --predicate finitary-basis
            domkit props flat3.json --predicate ideal --subset "bot,atom:t"
        """
        self._execute("props", basis, predicate=predicate, subset=subset, exhaustive=exhaustive)

    def complete(self, basis: str, exhaustive: bool = False) -> None:
        """Print the ideal completion of a basis."""
        self._execute("complete", basis, exhaustive=exhaustive)

    def iso(self, first: str, second: str) -> None:
        """Search for an order isomorphism between two posets."""
        self._execute("iso", first, second)

    def subdomain(self, smaller: str, larger: str) -> None:
        """Check the subdomain clauses of one basis inside another."""
        self._execute("subdomain", smaller, larger)

    def am(self, action: str, source: str, target: str, pairs: Optional[str] = None) -> None:
        """
        Approximable mappings between two bases.

        Args:
            action: check, enumerate or close
            source: Path to the source basis
            target: Path to the target basis
            pairs: An am{(s,t),...} term (the relation to check or the seed to close)

        Examples:
            domkit am enumerate flat2.json flat2.json
            domkit am close flat2.json flat2.json --pairs "am{(atom:a,atom:a)}"
        """
        self._execute("am", source, target, action=action, pairs=pairs)

    def sum(self, a: str, b: str, full_order: bool = False) -> None:
        """Coalesced sum of two bases."""
        self._execute("sum", a, b, full_order=full_order)

    def prod(self, a: str, b: str, full_order: bool = False) -> None:
        """Strict product of two bases."""
        self._execute("prod", a, b, full_order=full_order)

    def fun(
        self, a: str, b: str, strict: bool = True, no_strict: bool = False, full_order: bool = False
    ) -> None:
        """
        Function-space basis of approximable mappings from a to b.

        Args:
            a: Path to the source basis
            b: Path to the target basis
            strict: Keep only mappings sending bottom to bottom
            no_strict: Keep every mapping
            full_order: Write the full relation instead of the covers
        """
        self._execute("fun", a, b, strict=strict and not no_strict, full_order=full_order)

    def star(self, basis: str, max_len: Optional[int] = None, full_order: bool = False) -> None:
        """Bounded Kleene star of a basis."""
        self._execute("star", basis, max_len=max_len, full_order=full_order)

    def rec(self, methods: str, labels: Any = None, full_order: bool = False) -> None:
        """
        Record basis over a label set.

        Args:
            methods: Path to the method basis
            labels: Comma-separated labels, e.g. l1,l2
            full_order: Write the full relation instead of the covers
        """
        self._execute("rec", methods, labels=labels, full_order=full_order)

    def coop(
        self,
        base: Optional[str] = None,
        labels: Any = None,
        max_seq_len: Optional[int] = None,
        iters: Optional[int] = None,
        max_card: Optional[int] = None,
        emit_stages: Optional[str] = None,
    ) -> None:
        """
        Iterate the COOP object-domain construction.

        Args:
            base: Path to the basis of atomic base objects
            labels: Comma-separated method labels
            max_seq_len: Longest argument sequence
            iters: Maximum number of iterations
            max_card: Cardinality cap for every constructor step
            emit_stages: Directory to write each stage into

        Examples:
            domkit coop --base flat2.json --labels l --max-seq-len 1 --iters 2
        """
        self._execute(
            "coop",
            base=base,
            labels=labels,
            max_seq_len=max_seq_len,
            iters=iters,
            max_card=max_card,
            emit_stages=emit_stages,
        )

    def export(self, basis: str, full_order: bool = False, completion: bool = False) -> None:
        """
        Print a DOT Hasse diagram.

        Args:
            basis: Path to a basis JSON file
            full_order: Draw every strict order edge, not only covers
            completion: Draw the ideal completion instead of the basis
        """
        self._execute("export", basis, full_order=full_order, completion=completion)


def main() -> None:
    fire.Fire(DomkitCLI)


if __name__ == "__main__":
    main()
