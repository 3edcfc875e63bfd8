import itertools
from fractions import Fraction

import numpy as np
import pytest

from conftest import SQRT2
from wernerwolf.boolfn import SignFunction, all_sign_functions, random_f, walsh_beta
from wernerwolf.errors import TooLarge
from wernerwolf.polytope import (
    ClassicalVertex,
    chsh_base,
    chsh_facets_n2,
    enumerate_vertices,
    facet_value,
    facet_values,
    first_violated_facet,
    membership,
    quantum_point,
)
from wernerwolf.spectrum import AngleConfig, full_spectrum, maximize_norm


def naive_vertex_vector(assignments):
    n = len(assignments)
    return [int(np.prod([assignments[j][(s >> j) & 1] for j in range(n)])) for s in range(2**n)]


class TestVertices:
    @pytest.mark.parametrize("n,total,distinct", [(1, 4, 4), (2, 16, 8), (3, 64, 16)])
    def test_counts(self, n, total, distinct):
        enum = enumerate_vertices(n)
        assert enum.assignments == total
        assert enum.distinct_vectors == distinct

    def test_distinct_count_by_hashing(self):
        # independent brute force: hash the naive product vectors
        for n in (1, 2, 3):
            pairs = list(itertools.product((1, -1), repeat=2))
            seen = {tuple(naive_vertex_vector(a)) for a in itertools.product(pairs, repeat=n)}
            assert len(seen) == enumerate_vertices(n).distinct_vectors

    def test_vector_matches_naive(self):
        for v in enumerate_vertices(3).vertices:
            assert list(v.vector) == naive_vertex_vector(v.assignments)

    def test_cap(self):
        with pytest.raises(TooLarge):
            enumerate_vertices(5)


class TestFacetValue:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_exhaustive(self, n):
        verts = enumerate_vertices(n).vertices
        for f in all_sign_functions(n):
            for v in verts:
                assert facet_value(f, v) in (1, -1)

    def test_chsh_all_plus(self):
        v = ClassicalVertex(((1, 1), (1, 1)))
        assert facet_value(chsh_base(), v) == 1

    def test_value_is_f_at_assignment_pattern(self):
        # with X^j = (1, (-1)^{e_j}) the vertex is the character chi_e,
        # and the facet pairs beta_f with it to give f(e)
        f = random_f(3, 4)
        for e in itertools.product((0, 1), repeat=3):
            v = ClassicalVertex(tuple((1, (-1) ** b) for b in e))
            assert facet_value(f, v) == f(e)

    def test_n_mismatch(self):
        with pytest.raises(ValueError):
            facet_value(random_f(2, 0), ClassicalVertex(((1, 1),)))


class TestMembership:
    def test_zero_inside(self):
        assert membership([0] * 4)
        assert membership(np.zeros(8))

    def test_tsirelson_point_outside(self):
        r = 1 / SQRT2
        q = [r, r, r, -r]
        bad = first_violated_facet(q)
        assert bad is not None
        assert bad.to_hex() == "7"
        assert abs(float(np.dot(walsh_beta(bad).beta, q))) == pytest.approx(SQRT2)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_vertices_inside_and_tight(self, n):
        for v in enumerate_vertices(n).vertices[::3]:
            q = [int(x) for x in v.vector]
            assert membership(q)
            assert np.isclose(np.abs(facet_values(q)), 1).any()

    def test_exact_fraction_path(self):
        # the midpoint of two vertices is inside; nudging it out by 1/1000 is caught exactly
        a = enumerate_vertices(2).vertices[0].vector
        b = enumerate_vertices(2).vertices[5].vector
        mid = [Fraction(int(x) + int(y), 2) for x, y in zip(a, b)]
        assert membership(mid)
        assert membership([Fraction(1)] * 4)
        assert not membership([Fraction(1001, 1000)] + [Fraction(1)] * 3)

    def test_box_constraints(self):
        # |q(s)| <= 1 is implied by the trivial facets
        assert not membership([1.01, 0, 0, 0])
        assert membership([1.0, 0, 0, 0])
        assert not membership([0, 0, 0, -1.5])

    def test_bad_length(self):
        with pytest.raises(ValueError):
            membership([0, 0, 0])

    def test_facet_cap(self):
        with pytest.raises(TooLarge):
            membership(np.zeros(32))


class TestQuantumPoint:
    def test_chsh_point(self, chsh, chsh_angles):
        q = quantum_point(chsh, chsh_angles)
        assert float(np.dot(walsh_beta(chsh).beta, q)) == pytest.approx(SQRT2, abs=1e-12)
        assert not membership(q)

    def test_pairing_is_eigenvalue(self):
        f, a = random_f(3, 2), AngleConfig.random(3, 2)
        spec = full_spectrum(f, a)
        for omega, mag in zip(spec.omegas[:3], spec.magnitudes[:3]):
            q = quantum_point(f, a, omega)
            assert float(np.dot(walsh_beta(f).beta, q)) == pytest.approx(mag, abs=1e-12)

    def test_outside_when_norm_exceeds_one(self):
        f = random_f(3, 11)
        rep = maximize_norm(f, restarts=8)
        q = quantum_point(f, rep.best_angles)
        assert np.all(np.abs(q) <= 1 + 1e-12)
        assert membership(q) == (rep.best_norm <= 1 + 1e-12)


class TestChshFacets:
    def test_classification(self):
        res = chsh_facets_n2()
        assert res.total == 16
        assert len(res.trivial) == 8
        assert len(res.chsh) == 8
        assert res.in_chsh_orbit
        assert res.matches_relabel_family

    def test_chsh_functions_have_four_halves(self):
        for f in chsh_facets_n2().chsh:
            assert sorted(abs(x) for x in walsh_beta(f).fractions()) == [Fraction(1, 2)] * 4

    def test_trivial_facets_are_box_constraints(self):
        for f in chsh_facets_n2().trivial:
            support = walsh_beta(f).support()
            assert len(support) == 1
            assert SignFunction.from_hex(f.to_hex(), 2) == f
