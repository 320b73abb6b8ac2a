import pytest

from azumaya.autgrp import make_point
from azumaya.descent import (Cocycle, GaloisExtension, SplitOverL, check_band_and_equivalence, cocycle_from_json,
                             h1_classes, twist_algebra, validate_cocycle)
from azumaya.errors import InvalidCocycle
from azumaya.exactring import PrimeField
from azumaya.invalg import InvolutionKind, ClassicalType, adjoint_involution, is_isomorphic, make_split

from oracles import symmetric_similarity_classes

F3 = PrimeField(3)
E2 = GaloisExtension.of(3, 2)
O, S, U = InvolutionKind.ORTHOGONAL, InvolutionKind.SYMPLECTIC, InvolutionKind.UNITARY


def test_extension_basics():
    assert E2.L.size == 9
    assert sorted(E2.fixed_field()) == [0, 1, 2]
    assert all(E2.norm(a) in (1, 2) for a in range(1, 9))


@pytest.mark.parametrize("kind,expected", [(O, 2), (S, 1), (U, 2)])
def test_h1_counts_degree_two(kind, expected):
    assert len(h1_classes(make_split(kind, 2, F3), E2)) == expected


def test_orthogonal_h1_matches_congruence_classes():
    # the orthogonal degree-2 fixture: H^1 classes vs direct congruence classification
    assert len(h1_classes(make_split(O, 2, F3), E2)) == len(symmetric_similarity_classes(3, 2))


def test_h1_independent_of_base_point():
    A = make_split(O, 2, F3)
    B = adjoint_involution(((2, 0), (0, 2)), O, F3)  # isomorphic to A
    assert is_isomorphic(A, B) is not None
    assert len(h1_classes(A, E2)) == len(h1_classes(B, E2))


def test_trivial_cocycle_twists_to_split():
    for kind, n in [(O, 2), (S, 2), (U, 2), (O, 3)]:
        A = make_split(kind, n, F3)
        ctx = SplitOverL(A, E2)
        form = twist_algebra(A, Cocycle(A, E2, ctx.identity))
        assert form.verify()
        assert is_isomorphic(form.result, A) is not None


def test_invalid_cocycle_rejected():
    A = make_split(O, 2, F3)
    ctx = SplitOverL(A, E2)
    # diag(1, x) with x^2 = -1 has a non-trivial norm class
    x = E2.L.generator()
    bad = make_point(ctx.AL, ((1, 0), (0, x)), False)
    assert not validate_cocycle(Cocycle(A, E2, bad))
    with pytest.raises(InvalidCocycle):
        twist_algebra(A, Cocycle(A, E2, bad))


def test_cocycle_json_round_trip():
    A = make_split(U, 2, F3)
    for c in h1_classes(A, E2):
        back = cocycle_from_json(A, c.to_json())
        assert back.value == c.value and validate_cocycle(back)


def test_outer_twist_gives_field_center():
    A = make_split(U, 2, F3)
    forms = [twist_algebra(A, c) for c in h1_classes(A, E2)]
    centers = sorted(f.result.center.split for f in forms)
    assert centers == [False, True]
    assert all(f.verify() for f in forms)


def test_degree_three_extension_inner_twists():
    E3 = GaloisExtension.of(3, 3)
    A = make_split(O, 2, F3)
    reps = h1_classes(A, E3)
    for c in reps:
        assert twist_algebra(A, c, E3).verify()
    # the other similarity class keeps its discriminant over an odd-degree extension
    assert len(reps) == 1


@pytest.mark.parametrize("t", [("C", 1, 2), ("B", 1, 3)])
def test_band_check_passes(t):
    rep = check_band_and_equivalence(ClassicalType(*t), F3, E2)
    assert rep.passed, rep.failures
