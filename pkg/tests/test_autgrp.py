import pytest

from azumaya.autgrp import (apply, check_pullback_commutes, classical_order, compose, enumerate_aut_points,
                            inverse, is_automorphism, neutral_subgroup, point_from_json)
from azumaya.errors import Unsupported
from azumaya.exactring import ChainRing, ExtensionField, PrimeField, QuadraticEtale, RingMap
from azumaya.invalg import InvolutionKind, adjoint_involution, make_split

from oracles import pgl_order

F3, F5 = PrimeField(3), PrimeField(5)
F9 = ExtensionField.canonical(3, 2)
O, S, U = InvolutionKind.ORTHOGONAL, InvolutionKind.SYMPLECTIC, InvolutionKind.UNITARY

# DERIVED by tests/oracles.py brute force (re-checked in test_oracles.py), frozen here
ORDERS = {
    ("sp", 2, 3): (24, 24),
    ("sp", 2, 5): (120, 120),
    ("tr", 2, 3): (8, 4),
    ("tr", 3, 3): (24, 24),
}


@pytest.mark.parametrize("key", sorted(ORDERS))
def test_orders_match_oracle(key):
    kind, n, q = key
    A = make_split(S if kind == "sp" else O, n, PrimeField(q))
    G = enumerate_aut_points(A)
    assert (G.order, neutral_subgroup(G).order) == ORDERS[key]


def test_hyperbolic_plane_orders():
    A = adjoint_involution(((1, 0), (0, 2)), O, F3)
    G = enumerate_aut_points(A)
    assert (G.order, neutral_subgroup(G).order) == (4, 2)


def test_unitary_orders_against_formula():
    # split center: PGL_n x outer swap; field center: PGU_n x Frobenius
    G = enumerate_aut_points(make_split(U, 2, F3))
    assert G.order == 2 * pgl_order(2, 3)
    assert neutral_subgroup(G).order == classical_order("A", 1, 3)
    H = enumerate_aut_points(make_split(U, 2, QuadraticEtale.field_over(F3)))
    assert neutral_subgroup(H).order == classical_order("A", 1, 3, unitary_field=True)
    assert H.order == 2 * neutral_subgroup(H).order


def test_chain_ring_orders_against_smooth_formula():
    R = ChainRing(F3, 2)
    assert neutral_subgroup(enumerate_aut_points(make_split(S, 2, R))).order == classical_order("C", 1, 3, m=2)
    assert neutral_subgroup(enumerate_aut_points(make_split(O, 3, R))).order == classical_order("B", 1, 3, m=2)


def test_group_axioms_and_histogram():
    G = enumerate_aut_points(make_split(S, 2, F3))
    assert G.check_axioms()
    assert G.order_histogram == {1: 1, 2: 9, 3: 8, 4: 6}


def test_point_operations():
    A = make_split(U, 2, F3)
    G = enumerate_aut_points(A)
    e = G.identity
    for p in G.elements[::7]:
        assert is_automorphism(A, p.c, p.outer)
        assert compose(A, p, inverse(A, p)) == e
        assert point_from_json(A, p.to_json(A)) == p
        x = ((A.total.join(1, 2), 0), (A.total.join(0, 1), 1))
        # automorphisms commute with the involution
        assert apply(A, p, A.sigma(x)) == A.sigma(apply(A, p, x))


def test_classical_order_values():
    assert classical_order("C", 1, 3) == 24 == 3**3 - 3
    assert classical_order("C", 1, 5) == 120 == 5**3 - 5
    assert classical_order("A", 1, 3) == pgl_order(2, 3)
    assert classical_order("A", 2, 3) == pgl_order(3, 3)
    assert classical_order("D", 3, 3) == pgl_order(4, 3)  # D3 = A3
    with pytest.raises(Unsupported):
        classical_order("B", 0, 3)


@pytest.mark.parametrize("kind,n", [(O, 2), (S, 2), (U, 2), (O, 3)])
def test_pullback_small(kind, n):
    assert check_pullback_commutes(make_split(kind, n, F3), RingMap.extension(F3, F9))
    assert check_pullback_commutes(make_split(kind, n, ChainRing(F3, 2)), RingMap.residue(ChainRing(F3, 2)))


def test_pullback_field_center():
    A = make_split(U, 2, QuadraticEtale.field_over(F3))
    rep = check_pullback_commutes(A, RingMap.extension(F3, F9))
    assert rep and rep.expected_order == rep.image_order == 48
