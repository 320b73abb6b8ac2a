import itertools

import pytest

from azumaya import matrices as mx
from azumaya.errors import (CenterNotSplit, ExcludedTriality, InvalidDegree, NotAbsolutelySimple, SingularGram,
                            UnsupportedBaseChange, WrongSymmetry)
from azumaya.exactring import ChainRing, ExtensionField, PrimeField, QuadraticEtale, RingMap
from azumaya.invalg import (AlgebraWithInvolution, Gram, InvolutionKind, adjoint_involution,
                            algebra_from_json, base_change, classify_kind, is_isomorphic, make_split, classical_type,
                            unitary_split_decomposition, verify_involution)

from oracles import symmetric_class_labels

F3 = PrimeField(3)
F9 = ExtensionField.canonical(3, 2)
O, S, U = InvolutionKind.ORTHOGONAL, InvolutionKind.SYMPLECTIC, InvolutionKind.UNITARY


def herm_f9():
    E = QuadraticEtale.field_over(F3)
    return adjoint_involution(((1, 0), (0, 2)), U, E)


@pytest.mark.parametrize("kind,n", [(O, 1), (O, 2), (O, 3), (S, 2), (S, 4), (U, 1), (U, 2), (U, 3)])
def test_split_objects_verify(kind, n):
    A = make_split(kind, n, F3)
    assert verify_involution(A)
    assert classify_kind(A) == kind
    assert algebra_from_json(A.to_json()) == A


def test_split_over_chain_and_product_rings():
    for R in [ChainRing(F3, 2), F9]:
        for kind, n in [(O, 3), (S, 2), (U, 2)]:
            A = make_split(kind, n, R)
            assert verify_involution(A)
            assert classify_kind(A) == kind


def test_hermitian_field_center():
    A = herm_f9()
    assert verify_involution(A)
    assert classify_kind(A) == U
    t = classical_type(A)
    assert (t.letter, t.rank) == ("A", 1)


def test_adjoint_involution_errors():
    with pytest.raises(SingularGram):
        adjoint_involution(((1, 1), (1, 1)), O, F3)
    with pytest.raises(WrongSymmetry):
        adjoint_involution(((1, 1), (0, 1)), O, F3)
    with pytest.raises(WrongSymmetry):
        adjoint_involution(((1, 0), (0, 1)), S, F3)
    with pytest.raises(InvalidDegree):
        make_split(S, 3, F3)


def test_corrupted_descriptors_name_axiom():
    bad = AlgebraWithInvolution(F3, None, 2, Gram(((1, 1), (0, 1)), 1))
    assert verify_involution(bad).failures == ["order_two"]
    sing = AlgebraWithInvolution(F3, None, 2, Gram(((1, 1), (1, 1)), 1))
    assert verify_involution(sing).failures == ["invertible"]
    E = QuadraticEtale.field_over(F3)
    wrong = AlgebraWithInvolution(F3, E, 2, Gram(mx.identity(F9, 2), 1))
    assert verify_involution(wrong).failures == ["center_action"]


def test_type_dictionary_small():
    assert classical_type(make_split(S, 2, F3)).letter == "C"
    assert (classical_type(make_split(O, 3, F3)).letter, classical_type(make_split(O, 3, F3)).rank) == ("B", 1)
    with pytest.raises(NotAbsolutelySimple):
        classical_type(make_split(O, 2, F3))
    with pytest.raises(NotAbsolutelySimple):
        classical_type(make_split(U, 1, F3))
    with pytest.raises(ExcludedTriality):
        classical_type(make_split(O, 8, F3), check=False)


def test_isomorphism_examples():
    I = adjoint_involution(((1, 0), (0, 1)), O, F3)
    hyp = adjoint_involution(((1, 0), (0, 2)), O, F3)
    two = adjoint_involution(((2, 0), (0, 2)), O, F3)
    assert is_isomorphic(I, hyp) is None
    iso = is_isomorphic(I, two)
    assert iso is not None and iso.verify(I, two)
    f = RingMap.extension(F3, F9)
    assert is_isomorphic(base_change(hyp, f), base_change(I, f)) is not None


def test_isomorphism_matches_congruence_oracle():
    # is_isomorphic on symmetric 2x2 forms over F_3 agrees with naive similarity classes
    labels = symmetric_class_labels(3, 2)
    forms = sorted(labels)
    algs = {k: adjoint_involution(((k[0], k[1]), (k[2], k[3])), O, F3) for k in forms}
    for a, b in itertools.combinations(forms, 2):
        same = is_isomorphic(algs[a], algs[b]) is not None
        assert same == (labels[a] == labels[b]), (a, b)


def test_unitary_decomposition():
    A = herm_f9()
    with pytest.raises(CenterNotSplit):
        unitary_split_decomposition(A)
    AL = base_change(A, RingMap.extension(F3, F9))
    assert AL.center.split
    dec = unitary_split_decomposition(AL)
    assert dec.verify()
    T = AL.total
    assert AL.conj(dec.idempotent) == T.sub(T.one, dec.idempotent)


def test_odd_extension_of_field_center_unsupported():
    A = herm_f9()
    with pytest.raises(UnsupportedBaseChange):
        base_change(A, RingMap.extension(F3, ExtensionField.canonical(3, 3)))


def test_residue_base_change():
    R = ChainRing(F3, 2)
    t = R.t()
    g = ((1, 0), (0, R.add(1, t)))
    A = adjoint_involution(g, O, R)
    B = base_change(A, RingMap.residue(R))
    assert B.gram == ((1, 0), (0, 1))
    assert verify_involution(B)
