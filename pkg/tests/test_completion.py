"""
Tests for ideal completion, finite elements, isomorphism and subdomains.
"""

import pytest
from hypothesis import given, settings

from domkit.basis import (
    Poset,
    induced_subposet,
    is_directed,
    is_ideal,
    lift_antichain,
    poset_from_relation,
)
from domkit.completion import (
    CompletedDomain,
    Ideal,
    check_cpo,
    check_domain,
    check_isomorphic,
    check_subdomain,
    enumerate_ideals,
    finite_elements,
    ideal_completion,
    is_order_isomorphism,
    principal_embedding,
    principal_ideal,
)
from domkit.errors import CapExceededError, NotFinitaryBasisError, UnknownElementError
from domkit.models import Limits
from domkit.terms import BOTTOM, Atom
from tests.conftest import A, B, F, T, TOP
from tests.strategies import finitary_bases

TOP2 = Atom("top'")


def ideal(*members) -> Ideal:
    return Ideal(frozenset(members))


class TestIdeals:
    """Tests for ideal enumeration and principal ideals."""

    def test_flat3(self, flat3):
        """Test the three ideals of the flat basis."""
        ideals = enumerate_ideals(flat3)
        assert set(ideals) == {ideal(BOTTOM), ideal(BOTTOM, T), ideal(BOTTOM, F)}
        assert ideals[0] == ideal(BOTTOM)

    def test_one_point(self, one_point):
        """Test the single ideal of the one-point basis."""
        assert enumerate_ideals(one_point) == (ideal(BOTTOM),)

    @pytest.mark.parametrize("atoms", [1, 2, 3, 4, 5])
    def test_flat_counts(self, atoms):
        """Test that n lifted atoms give n + 1 ideals, matching the subset scan."""
        flat = lift_antichain([f"x{i}" for i in range(atoms)])
        principal = enumerate_ideals(flat)
        assert len(principal) == atoms + 1
        assert set(principal) == set(enumerate_ideals(flat, exhaustive=True))

    def test_principal_ideal(self, diamond, flat3):
        """Test principal ideals."""
        assert principal_ideal(diamond, BOTTOM) == ideal(BOTTOM)
        assert principal_ideal(diamond, TOP) == ideal(BOTTOM, A, B, TOP)
        assert principal_ideal(flat3, T) == ideal(BOTTOM, T)
        with pytest.raises(UnknownElementError):
            principal_ideal(flat3, A)

    def test_ideal_rendering(self):
        """Test that ideals render as sorted member sets."""
        assert str(ideal(T, BOTTOM)) == "{atom:t,bot}"

    @settings(max_examples=50, deadline=None)
    @given(finitary_bases())
    def test_principal_ideals_are_ideals(self, basis):
        """Test that every principal ideal passes is_ideal."""
        for x in basis.elements:
            assert is_ideal(basis, principal_ideal(basis, x).members).holds

    @settings(max_examples=30, deadline=None)
    @given(finitary_bases())
    def test_generation_matches_scan(self, basis):
        """Test principal-ideal generation against the exhaustive scan."""
        assert set(enumerate_ideals(basis)) == set(enumerate_ideals(basis, exhaustive=True))


class TestIdealCompletion:
    """Tests for ideal_completion and check_cpo."""

    def test_completion_is_pointed_domain(self, diamond):
        """Test the shape of a completion."""
        completed = ideal_completion(diamond)
        assert isinstance(completed, CompletedDomain)
        assert completed.bottom == ideal(BOTTOM)
        assert completed.host == diamond
        assert len(completed.ideals) == 4
        assert completed.leq(ideal(BOTTOM, A), ideal(BOTTOM, A, B, TOP))

    def test_not_finitary(self, butterfly):
        """Test that completing the butterfly is refused."""
        with pytest.raises(NotFinitaryBasisError):
            ideal_completion(butterfly)

    @pytest.mark.parametrize("fixture", ["flat3", "one_point", "diamond", "chain3"])
    def test_isomorphic_to_host(self, fixture, request):
        """Test that a finite basis is isomorphic to its completion."""
        basis = request.getfixturevalue(fixture)
        completed = ideal_completion(basis)
        witness = check_isomorphic(basis, completed)
        assert witness is not None
        assert is_order_isomorphism(basis, completed, witness)

    def test_principal_embedding(self, diamond):
        """Test the principal embedding witness."""
        completed = ideal_completion(diamond)
        witness = principal_embedding(diamond, completed)
        assert witness(TOP) == ideal(BOTTOM, A, B, TOP)
        assert is_order_isomorphism(diamond, completed, witness)

    def test_check_cpo(self, diamond):
        """Test cpo checks."""
        assert check_cpo(diamond).holds
        assert check_cpo(ideal_completion(diamond)).holds
        report = check_cpo(Poset([A, B], []))
        assert not report.holds
        assert report.witness == ()

    def test_cpo_scan_checks_directedness(self, diamond, monkeypatch):
        """Test that the exhaustive scan asks is_directed about every subset."""
        seen = []

        def recording(poset, subset, limits):
            seen.append(tuple(subset))
            return is_directed(poset, subset, limits)

        monkeypatch.setattr("domkit.completion.is_directed", recording)
        assert check_cpo(diamond, exhaustive=True).holds
        assert len(seen) == 2 ** len(diamond)

    @pytest.mark.slow
    @settings(max_examples=50, deadline=None)
    @given(finitary_bases())
    def test_completions_are_cpos(self, basis):
        """Test that every completion passes the exhaustive cpo scan."""
        assert check_cpo(ideal_completion(basis), exhaustive=True).holds


class TestFiniteElements:
    """Tests for finite_elements."""

    def test_flat3(self, flat3):
        """Test that every ideal of a finite completion is finite."""
        completed = ideal_completion(flat3)
        assert finite_elements(completed) == frozenset(completed.elements)

    def test_diamond_and_one_point(self, diamond, one_point):
        """Test the diamond and one-point completions."""
        assert len(finite_elements(ideal_completion(diamond))) == 4
        assert finite_elements(ideal_completion(one_point)) == {ideal(BOTTOM)}


class TestIsomorphism:
    """Tests for check_isomorphic."""

    def test_self(self, diamond):
        """Test that a poset is isomorphic to itself."""
        witness = check_isomorphic(diamond, diamond)
        assert witness is not None
        assert is_order_isomorphism(diamond, diamond, witness)

    def test_flat_vs_chain(self, flat3, chain3):
        """Test non-isomorphic posets of equal size."""
        assert check_isomorphic(flat3, chain3) is None

    def test_size_mismatch(self, flat3, diamond):
        """Test posets of different sizes."""
        assert check_isomorphic(flat3, diamond) is None

    def test_symmetric(self, diamond):
        """Test that the inverse witness is an isomorphism back."""
        renamed = diamond.relabel(lambda x: x if x == BOTTOM else Atom(f"r{x.name}"))
        witness = check_isomorphic(diamond, renamed)
        assert witness is not None
        assert is_order_isomorphism(renamed, diamond, witness.inverse())
        assert check_isomorphic(renamed, diamond) is not None

    def test_cap(self):
        """Test the isomorphism size cap."""
        big = lift_antichain([f"x{i}" for i in range(5)])
        with pytest.raises(CapExceededError):
            check_isomorphic(big, big, Limits(iso_limit=4))

    @settings(max_examples=50, deadline=None)
    @given(finitary_bases())
    def test_basis_vs_completion(self, basis):
        """Test that every finitary basis is isomorphic to its completion."""
        assert check_isomorphic(basis, ideal_completion(basis)) is not None


class TestDomainAndSubdomain:
    """Tests for check_domain and check_subdomain."""

    def test_completions_are_domains(self, diamond, one_point):
        """Test that completions and the one-point poset are domains."""
        assert check_domain(ideal_completion(diamond)).holds
        assert check_domain(one_point).holds

    def test_butterfly_not_domain(self, butterfly):
        """Test that the butterfly is not a domain."""
        report = check_domain(butterfly)
        assert not report.holds
        assert report.witness == (A, B)

    @settings(max_examples=30, deadline=None)
    @given(finitary_bases(max_size=5))
    def test_generated_completions_are_domains(self, basis):
        """Test check_domain on generated completions."""
        assert check_domain(ideal_completion(basis)).holds

    def test_reflexive(self, diamond):
        """Test that a basis is a subdomain of itself."""
        assert check_subdomain(diamond, diamond).holds

    def test_one_point_inside(self, one_point, diamond):
        """Test that {bot} is a subdomain of any basis with the same bottom."""
        assert check_subdomain(one_point, diamond).holds

    def test_lub_clause(self, diamond):
        """Test a subset whose lubs disagree with the larger basis."""
        extended = poset_from_relation(
            [*diamond.elements, TOP2], [*diamond.leq_pairs, (TOP, TOP2)], "diamond+"
        )
        smaller = induced_subposet(extended, {BOTTOM, A, B, TOP2})
        report = check_subdomain(smaller, extended)
        assert not report.holds
        assert report.detail("universe").holds
        assert report.detail("order").holds
        assert not report.detail("lub").holds
        assert report.witness == (A, B, TOP2)
        assert report.reason.startswith("clause 4")

    def test_universe_clause(self, flat3, diamond):
        """Test a basis with elements outside the larger one."""
        report = check_subdomain(flat3, diamond)
        assert report.reason.startswith("clause 1")
        assert report.witness == (F,)

    def test_not_applicable(self, flat3):
        """Test unpointed inputs."""
        report = check_subdomain(induced_subposet(flat3, {T, F}), flat3)
        assert not report.applicable

    @settings(max_examples=30, deadline=None)
    @given(finitary_bases())
    def test_transitive_on_lower_sets(self, basis):
        """Test reflexivity and transitivity on nested principal lower sets."""
        assert check_subdomain(basis, basis).holds
        for x in basis.elements:
            lower = induced_subposet(basis, basis.down_set(x))
            if check_subdomain(lower, basis).holds:
                for y in lower.elements:
                    smaller = induced_subposet(lower, lower.down_set(y))
                    if check_subdomain(smaller, lower).holds:
                        assert check_subdomain(smaller, basis).holds
