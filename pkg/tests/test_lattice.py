"""pp-definable subgroup lattices, filters, and definability checks."""

import itertools

import numpy as np
import pytest

from ppmod import (
    Field,
    all_filters,
    direct_sum,
    evaluate,
    filter_analysis,
    hasse_edges,
    is_pp_definable,
    linalg,
    make_filter,
    pp_lattice,
    principal_filter,
    regular_module,
    ziegler_irreducible,
)
from ppmod.errors import CapExceeded, ValidationFailure
from ppmod.fixtures import mod_rr, mod_s, r2, tri2

F2 = Field(2)


def test_rr_lattice_is_the_three_chain():
    lat = pp_lattice(mod_rr(), 1)
    assert lat.size == 3
    assert [e.dim for e in lat.elements] == [0, 1, 2]
    assert lat.bottom == 0 and lat.top == 2
    # total order
    for i in range(3):
        for j in range(3):
            assert bool(lat.leq[i, j]) == (i <= j)
    assert hasse_edges(lat) == [(0, 1), (1, 2)]


def test_witnesses_evaluate_to_their_elements():
    for m in (mod_rr(), regular_module(tri2(), "right")):
        lat = pp_lattice(m, 1)
        for i in range(lat.size):
            sol = evaluate(lat.witnesses[i], m)
            assert linalg.subspace_eq(sol.basis, lat.elements[i].basis)


def test_lattice_operations_match_subspace_operations():
    m = regular_module(tri2(), "right")
    lat = pp_lattice(m, 1)
    assert lat.size == 7
    f = m.algebra.field
    for i in range(lat.size):
        for j in range(lat.size):
            want_meet = linalg.subspace_intersect(
                f, lat.elements[i].basis, lat.elements[j].basis
            )
            got_meet = lat.elements[lat.meet[i, j]].basis
            assert linalg.subspace_eq(got_meet, want_meet)
            want_join = linalg.subspace_sum(
                f, lat.elements[i].basis, lat.elements[j].basis
            )
            got_join = lat.elements[lat.join[i, j]].basis
            assert linalg.subspace_eq(got_join, want_join)


def test_leq_is_a_partial_order_and_absorption_holds():
    lat = pp_lattice(regular_module(tri2(), "right"), 1)
    n = lat.size
    for i in range(n):
        assert lat.leq[i, i]
        assert lat.meet[i, lat.top] == i
        assert lat.join[i, lat.bottom] == i
        for j in range(n):
            if lat.leq[i, j] and lat.leq[j, i]:
                assert i == j
            for k in range(n):
                if lat.leq[i, j] and lat.leq[j, k]:
                    assert lat.leq[i, k]


def test_lattice_is_modular():
    """Subgroup lattices of modules satisfy the modular law."""
    lat = pp_lattice(regular_module(tri2(), "right"), 1)
    n = lat.size
    for a, b, c in itertools.product(range(n), repeat=3):
        if lat.leq[a, c]:
            lhs = lat.join[a, lat.meet[b, c]]
            rhs = lat.meet[lat.join[a, b], c]
            assert lhs == rhs


def test_index_of_roundtrip():
    lat = pp_lattice(mod_rr(), 1)
    for i in range(lat.size):
        assert lat.index_of(lat.elements[i].basis) == i
    with pytest.raises(ValidationFailure):
        lat.index_of(linalg.row_space(F2, F2.asarray([[1, 0]])))


def test_arity_two_lattice_contains_diagonal():
    lat = pp_lattice(mod_s(), 2)
    f = F2
    diag = linalg.row_space(f, f.asarray([[1, 1]]))
    found = any(
        e.dim == 1 and linalg.subspace_eq(e.basis, diag) for e in lat.elements
    )
    assert found  # x1 = x2 is pp-definable in two variables


def test_cap_is_enforced():
    with pytest.raises(CapExceeded):
        pp_lattice(mod_rr(), 1, cap=2)


def test_s_squared_lattice_collapses():
    # the matrix ring acts transitively, so only 0 and the whole survive
    m = direct_sum([mod_s(), mod_s()]).module
    lat = pp_lattice(m, 1)
    assert lat.size == 2
    assert [e.dim for e in lat.elements] == [0, 2]


def test_all_filters_are_filters():
    lat = pp_lattice(regular_module(tri2(), "right"), 1)
    filters = all_filters(lat)
    assert len(filters) == 7
    for filt in filters:
        members = filt.members
        assert lat.top in members
        for i in members:
            for j in range(lat.size):
                if lat.leq[i, j]:
                    assert j in members
            for j in members:
                assert lat.meet[i, j] in members


def test_principal_filter_and_generator():
    lat = pp_lattice(regular_module(tri2(), "right"), 1)
    for g in range(lat.size):
        filt = principal_filter(lat, g)
        assert filt.generator == g
        assert filt.members == frozenset(
            j for j in range(lat.size) if lat.leq[g, j]
        )


def test_make_filter_validates():
    lat = pp_lattice(regular_module(tri2(), "right"), 1)
    # an upward-closed set that misses a meet: take two coatoms
    coatoms = [i for i in range(lat.size) if lat.leq[i, lat.top] and i != lat.top
               and not any(lat.leq[i, j] and j not in (i, lat.top)
                           for j in range(lat.size))]
    assert len(coatoms) >= 2
    a, b = coatoms[0], coatoms[1]
    bad = frozenset({a, b, lat.top})
    if lat.meet[a, b] not in bad:
        with pytest.raises(ValidationFailure):
            make_filter(lat, bad)
    with pytest.raises(ValidationFailure):
        make_filter(lat, [lat.bottom])  # not upward closed in a 7-element lattice


def test_filter_analysis_on_rr():
    lat = pp_lattice(mod_rr(), 1)
    out = filter_analysis(lat, avoid=lat.bottom)
    assert len(out) == 1
    assert out[0].ziegler
    filt = out[0].filter
    assert lat.bottom not in filt.members
    assert ziegler_irreducible(filt)


def test_filter_analysis_avoiding_top_is_empty():
    lat = pp_lattice(mod_rr(), 1)
    assert filter_analysis(lat, avoid=lat.top) == []


def test_definability_positive_and_negative():
    reg = regular_module(tri2(), "right")
    pos = is_pp_definable(reg, F2.asarray([[1, 0, 0]]))
    assert pos.definable
    assert pos.witness is not None
    sol = evaluate(pos.witness, reg)
    assert linalg.subspace_eq(sol.basis, linalg.row_space(F2, F2.asarray([[1, 0, 0]])))
    neg = is_pp_definable(reg, F2.asarray([[0, 0, 1]]))
    assert not neg.definable
    # the witness formula defines the pp-closure, strictly above the input
    assert linalg.subspace_eq(evaluate(neg.witness, reg).basis, neg.closure)
    assert linalg.subspace_le(F2, linalg.row_space(F2, F2.asarray([[0, 0, 1]])), neg.closure)
    assert neg.closure.shape[0] > 1


def test_definability_closure_is_itself_definable():
    reg = regular_module(tri2(), "right")
    neg = is_pp_definable(reg, F2.asarray([[0, 0, 1]]))
    again = is_pp_definable(reg, neg.closure)
    assert again.definable
    assert linalg.subspace_eq(again.closure, neg.closure)
