import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from blweight.errors import CapExceededError, InputError, PreconditionError
from blweight.structure import (Flat, VectorSet, brute_force_flats, closure, enumerate_flats,
                                extend_generic, is_generic)
from helpers import EXAMPLE3, TRIANGLE, oracle_flats, random_generic


def test_zero_vector_rejected():
    with pytest.raises(InputError, match="zero vector at index 1"):
        VectorSet.from_rows([[1, 0], [0, 0]])


def test_length_mismatch():
    with pytest.raises(InputError):
        VectorSet.from_rows([[1, 0], [1]])


class TestGeneric:
    def test_example1(self):
        assert is_generic(VectorSet.from_rows([[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]]))

    def test_example3(self):
        assert not is_generic(EXAMPLE3)

    def test_standard_basis(self):
        assert is_generic(VectorSet.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))

    def test_extend_plane_basis(self):
        assert extend_generic(VectorSet.from_rows([[1, 0], [0, 1]])) == (1, 1)

    def test_extend_space_basis(self):
        assert extend_generic(VectorSet.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == (1, 1, 1)

    def test_extend_triangle(self):
        assert extend_generic(TRIANGLE) == (1, 2)

    def test_extend_requires_generic(self):
        with pytest.raises(PreconditionError):
            extend_generic(EXAMPLE3)

    @given(st.integers(0, 10 ** 6), st.integers(2, 4), st.integers(0, 3))
    def test_extension_stays_generic(self, seed, m, extra):
        E = random_generic(random.Random(seed), m, m + extra, max_den=6)
        assert is_generic(E.appended(extend_generic(E)))


class TestClosure:
    def test_example3_pair(self):
        assert closure([1, 3], EXAMPLE3) == Flat(2, (0, 1, 3))

    def test_empty(self):
        assert closure([], TRIANGLE) == Flat(0, ())

    def test_out_of_range(self):
        with pytest.raises(InputError):
            closure([5], TRIANGLE)

    @given(st.integers(0, 10 ** 6), st.data())
    def test_idempotent_and_monotone(self, seed, data):
        rng = random.Random(seed)
        rows = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(6)]
        rows = [r for r in rows if any(r)] or [[1, 0, 0]]
        E = VectorSet.from_rows(rows)
        S = data.draw(st.sets(st.integers(0, E.N - 1)))
        T = S | data.draw(st.sets(st.integers(0, E.N - 1)))
        cS = closure(S, E)
        assert closure(cS.members, E) == cS
        assert set(cS.members) <= set(closure(T, E).members)

    @given(st.integers(0, 10 ** 6), st.integers(2, 4), st.data())
    def test_generic_small_sets_closed(self, seed, m, data):
        E = random_generic(random.Random(seed), m, m + 2, max_den=6)
        S = data.draw(st.sets(st.integers(0, E.N - 1), max_size=m - 1))
        assert closure(S, E) == Flat(len(S), tuple(sorted(S)))


class TestFlats:
    def test_triangle(self):
        assert enumerate_flats(TRIANGLE) == [Flat(0, ()), Flat(1, (0,)), Flat(1, (1,)), Flat(1, (2,)),
                                             Flat(2, (0, 1, 2))]

    def test_plane_basis(self):
        E = VectorSet.from_rows([[1, 0], [0, 1]])
        assert [f.members for f in enumerate_flats(E)] == [(), (0,), (1,), (0, 1)]

    def test_example3(self):
        flats = enumerate_flats(EXAMPLE3)
        members = {f.members for f in flats if f.rank == 2}
        assert {(0, 1, 3), (0, 2, 4), (1, 2)} <= members
        assert len(flats) == 13

    def test_cap(self):
        with pytest.raises(CapExceededError):
            enumerate_flats(EXAMPLE3, cap=4)

    def test_matches_oracle(self):
        for E in (TRIANGLE, EXAMPLE3):
            assert [(f.rank, f.members) for f in enumerate_flats(E)] == oracle_flats(E)

    @given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 6))
    def test_matches_brute_force(self, seed, m, N):
        rng = random.Random(seed)
        rows = [[rng.randint(-1, 1) for _ in range(m)] for _ in range(N)]
        rows = [r for r in rows if any(r)] or [[1] * m]
        E = VectorSet.from_rows(rows)
        assert enumerate_flats(E) == brute_force_flats(E)


def test_collinear_pairs():
    E = VectorSet.from_rows([[1, 2], [2, 4], [0, 1]])
    assert E.collinear_pairs() == [(0, 1)]
    with pytest.raises(PreconditionError):
        E.require_noncollinear()


def test_flat_label_is_one_based():
    assert Flat(2, (0, 2, 4)).label() == "{1,3,5}"
    assert Flat(1, (1,)).complement(3) == (0, 2)
    assert F(1) in EXAMPLE3.vectors[0]
