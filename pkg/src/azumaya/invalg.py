"""Matrix models of Azumaya algebras with involution.

Over the rings handled here every Azumaya algebra of degree ``n`` is a full
matrix ring, so an algebra with involution is a degree, a center (trivial or
a quadratic étale extension) and a Gram matrix ``g`` giving
``sigma(x) = g conj(x)^T g^-1``.  The split unitary object keeps its own
``Exchange`` descriptor; in the matrix model it is ``g = I`` over
``base x base``, and ``to_pair``/``from_pair`` pass to the pair model
``(A, B^op)`` in which sigma is the exchange.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np

from . import matrices as mx
from . import similitude
from .errors import (CenterNotSplit, ExcludedTriality, InvalidDegree, MalformedInvolution, NotAbsolutelySimple,
                     NotAUnit, SingularGram, UnsupportedBaseChange, WrongSymmetry)
from .exactring import (PrimeField, ProductRing, QuadraticEtale, Ring, etale_from_json, ring_from_json, subfield_embedding)


class InvolutionKind(str, Enum):
    ORTHOGONAL = "orthogonal"
    SYMPLECTIC = "symplectic"
    UNITARY = "unitary"


@dataclass(frozen=True)
class Gram:
    g: tuple
    eps: int = 1


@dataclass(frozen=True)
class Hermitian:
    g: tuple


@dataclass(frozen=True)
class Exchange:
    pass


@dataclass(frozen=True)
class ClassicalType:
    letter: str
    rank: int
    degree: int

    def __post_init__(self):
        n, d = self.rank, self.degree
        expected = {"A": n + 1, "B": 2 * n + 1, "C": 2 * n, "D": 2 * n}.get(self.letter)
        if expected is None or n < 1 or d != expected:
            raise InvalidDegree(f"type {self.letter}{n} does not have degree {d}")
        if self.letter == "D" and (n < 3 or n == 4):
            raise InvalidDegree(f"D{n} is outside the classified range")

    def __str__(self):
        return f"{self.letter}{self.rank}"


@dataclass(frozen=True)
class AlgebraWithInvolution:
    """Raw container; use make_split / adjoint_involution for validated objects."""

    base: Ring
    center: QuadraticEtale | None
    degree: int
    involution: Gram | Hermitian | Exchange

    @property
    def total(self):
        return self.center.total if self.center is not None else self.base

    @property
    def is_unitary_model(self):
        return self.center is not None

    @cached_property
    def gram(self):
        if isinstance(self.involution, Exchange):
            return mx.identity(self.total, self.degree)
        return self.involution.g

    @cached_property
    def conj_np(self):
        if self.center is None:
            return np.arange(self.total.size, dtype=np.int64)
        return self.center.conj_np

    def conj(self, a):
        return self.center.conj(a) if self.center is not None else a

    def conj_matrix(self, X):
        return mx.emap(self.conj, X) if self.center is not None else X

    @cached_property
    def gram_inverse(self):
        return mx.inverse(self.total, self.gram)

    def sigma(self, x):
        """The involution in the matrix model."""
        T = self.total
        xt = mx.transpose(x)
        if not isinstance(self.involution, Gram):
            xt = self.conj_matrix(xt)
        return mx.mul_many(T, self.gram, xt, self.gram_inverse)

    def mul(self, x, y):
        return mx.mul(self.total, x, y)

    def spanning_set(self):
        T, n = self.total, self.degree
        basis = self.center.module_basis() if self.center is not None else [T.one]
        return [mx.unit_matrix(n, i, j, s) for i in range(n) for j in range(n) for s in basis]

    # -- pair model of the exchange object --
    def to_pair(self, x):
        T = self.total
        a = mx.emap(lambda v: T.split(v)[0], x)
        b = mx.emap(lambda v: T.split(v)[1], x)
        return a, mx.transpose(b)

    def from_pair(self, pair):
        T = self.total
        a, b = pair
        return tuple(tuple(T.join(u, v) for u, v in zip(r, s)) for r, s in zip(a, mx.transpose(b)))

    def describe(self):
        inv = type(self.involution).__name__.lower()
        c = self.center.describe() if self.center is not None else "trivial"
        return f"deg {self.degree} over {self.base.describe()} center {c} ({inv})"

    def to_json(self):
        T = self.total
        inv = self.involution
        if isinstance(inv, Exchange):
            invd = {"kind": "exchange"}
        elif isinstance(inv, Hermitian):
            invd = {"kind": "hermitian", "g": mx.to_json(T, inv.g)}
        else:
            invd = {"kind": "gram", "g": mx.to_json(T, inv.g), "eps": inv.eps}
        return {"ring": self.base.to_json(), "center": "trivial" if self.center is None else self.center.to_json(),
                "degree": self.degree, "involution": invd}


def algebra_from_json(data):
    base = ring_from_json(data["ring"])
    center = None if data["center"] == "trivial" else etale_from_json(data["center"])
    if center is not None and center.base != base:
        raise MalformedInvolution("center base differs from the algebra's ring")
    n = int(data["degree"])
    T = center.total if center is not None else base
    inv = data["involution"]
    kind = inv["kind"]
    if kind == "exchange":
        if center is None or not center.split:
            raise MalformedInvolution("exchange involution needs a split center")
        return AlgebraWithInvolution(base, center, n, Exchange())
    g = mx.from_json(T, inv["g"])
    if len(g) != n or any(len(r) != n for r in g):
        raise InvalidDegree(f"Gram matrix is not {n} x {n}")
    if kind == "hermitian":
        return AlgebraWithInvolution(base, center, n, Hermitian(g))
    return AlgebraWithInvolution(base, center, n, Gram(g, int(inv.get("eps", 1))))


def standard_alternating(R, m):
    """``[[0, I_m], [-I_m, 0]]``."""
    n = 2 * m
    rows = []
    for i in range(n):
        row = [0] * n
        if i < m:
            row[i + m] = R.one
        else:
            row[i - m] = R.neg(R.one)
        rows.append(tuple(row))
    return tuple(rows)


def _coerce_setting(kind, ring_or_etale):
    if isinstance(ring_or_etale, QuadraticEtale):
        if kind != InvolutionKind.UNITARY:
            raise MalformedInvolution("first-kind involutions take a base ring, not an étale extension")
        return ring_or_etale.base, ring_or_etale
    if kind == InvolutionKind.UNITARY:
        return ring_or_etale, QuadraticEtale.split_over(ring_or_etale)
    return ring_or_etale, None


def make_split(kind, degree, ring_or_etale):
    kind = InvolutionKind(kind)
    if degree < 1:
        raise InvalidDegree("degree must be positive")
    base, center = _coerce_setting(kind, ring_or_etale)
    if kind == InvolutionKind.ORTHOGONAL:
        return AlgebraWithInvolution(base, None, degree, Gram(mx.identity(base, degree), 1))
    if kind == InvolutionKind.SYMPLECTIC:
        if degree % 2:
            raise InvalidDegree(f"symplectic involutions need even degree, got {degree}")
        return AlgebraWithInvolution(base, None, degree, Gram(standard_alternating(base, degree // 2), -1))
    if center.split:
        return AlgebraWithInvolution(base, center, degree, Exchange())
    # a non-split center has no split object; the identity hermitian form is the quasi-split one
    return AlgebraWithInvolution(base, center, degree, Hermitian(mx.identity(center.total, degree)))


def adjoint_involution(g, kind, ring_or_etale):
    kind = InvolutionKind(kind)
    base, center = _coerce_setting(kind, ring_or_etale)
    T = center.total if center is not None else base
    g = mx.freeze(g)
    n = len(g)
    if n < 1 or any(len(r) != n for r in g):
        raise InvalidDegree("Gram matrix must be square and non-empty")
    if not mx.is_invertible(T, g):
        raise SingularGram("Gram matrix is not invertible")
    gt = mx.transpose(g)
    if kind == InvolutionKind.ORTHOGONAL:
        if gt != g:
            raise WrongSymmetry("orthogonal Gram matrix must be symmetric")
        return AlgebraWithInvolution(base, None, n, Gram(g, 1))
    if kind == InvolutionKind.SYMPLECTIC:
        if gt != mx.scale(T, T.neg(T.one), g):
            raise WrongSymmetry("symplectic Gram matrix must be skew-symmetric")
        return AlgebraWithInvolution(base, None, n, Gram(g, -1))
    if mx.emap(center.conj, gt) != g:
        raise WrongSymmetry("unitary Gram matrix must be hermitian")
    return AlgebraWithInvolution(base, center, n, Hermitian(g))


@dataclass
class InvolutionReport:
    passed: bool
    failures: list = field(default_factory=list)
    checked_pairs: int = 0

    def __bool__(self):
        return self.passed

    def to_json(self):
        return {"passed": self.passed, "failures": list(self.failures), "checked_pairs": self.checked_pairs}


def _verify_pair_model(A):
    R, n = A.base, A.degree

    def pmul(x, y):
        return mx.mul(R, x[0], y[0]), mx.mul(R, y[1], x[1])

    def psig(x):
        return x[1], x[0]

    Z = mx.zeros(n)
    span = [(mx.unit_matrix(n, i, j), Z) for i in range(n) for j in range(n)]
    span += [(Z, mx.unit_matrix(n, i, j)) for i in range(n) for j in range(n)]
    failures = []
    if any(psig(psig(x)) != x for x in span):
        failures.append("order_two")
    pairs = 0
    for x in span:
        for y in span:
            pairs += 1
            if psig(pmul(x, y)) != pmul(psig(y), psig(x)):
                failures.append("anti_multiplicative")
                break
        else:
            continue
        break
    # center e = (I, 0): the exchange must swap the two central idempotents
    I = mx.identity(R, n)
    if psig((I, Z)) != (Z, I):
        failures.append("center_action")
    return InvolutionReport(not failures, failures, pairs)


def verify_involution(A):
    """Check the involution axioms on all matrix units (times a center basis)."""
    if isinstance(A.involution, Exchange):
        if A.center is None or not A.center.split:
            return InvolutionReport(False, ["center_action"])
        return _verify_pair_model(A)
    T = A.total
    try:
        A.gram_inverse
    except NotAUnit:
        return InvolutionReport(False, ["invertible"])
    failures = []
    span = A.spanning_set()
    sig = {x: A.sigma(x) for x in span}
    if any(A.sigma(sig[x]) != x for x in span):
        failures.append("order_two")
    pairs = 0
    bad = False
    for x in span:
        for y in span:
            pairs += 1
            if A.sigma(A.mul(x, y)) != A.mul(sig[y], sig[x]):
                bad = True
                break
        if bad:
            failures.append("anti_multiplicative")
            break
    basis = A.center.module_basis() if A.center is not None else [T.one]
    n = A.degree
    for s in basis:
        S = mx.scale(T, s, mx.identity(T, n))
        if A.sigma(S) != mx.scale(T, A.conj(s), mx.identity(T, n)):
            failures.append("center_action")
            break
    return InvolutionReport(not failures, failures, pairs)


def _residue_grams(A):
    """(field, Gram) pairs over the residue field(s) of a first-kind object."""
    R, g = A.base, A.gram
    if isinstance(R, ProductRing):
        left = AlgebraWithInvolution(R.left, None, A.degree, Gram(mx.emap(lambda x: R.split(x)[0], g)))
        right = AlgebraWithInvolution(R.right, None, A.degree, Gram(mx.emap(lambda x: R.split(x)[1], g)))
        return _residue_grams(left) + _residue_grams(right)
    return [(R.residue_field, mx.emap(R.residue, g))]


def fixed_dimension(F, g):
    """Dimension over ``F`` of the fixed space of ``x -> g x^T g^-1`` on M_n(F)."""
    n = len(g)
    gi = mx.inverse(F, g)
    cols = []
    for i in range(n):
        for j in range(n):
            e = mx.unit_matrix(n, i, j, F.one)
            d = mx.sub(F, mx.mul_many(F, g, mx.transpose(e), gi), e)
            cols.append(mx.flat(d))
    return n * n - mx.rank(F, [list(r) for r in zip(*cols)])


def classify_kind(A, check=True):
    if check:
        report = verify_involution(A)
        if not report:
            raise MalformedInvolution(f"involution axioms fail: {', '.join(report.failures)}")
    if A.center is not None:
        if isinstance(A.involution, Gram):
            raise MalformedInvolution("Gram descriptor on a nontrivial center")
        return InvolutionKind.UNITARY
    n = A.degree
    kinds = set()
    for F, g in _residue_grams(A):
        d = fixed_dimension(F, g)
        if d == n * (n + 1) // 2:
            kinds.add(InvolutionKind.ORTHOGONAL)
        elif d == n * (n - 1) // 2:
            kinds.add(InvolutionKind.SYMPLECTIC)
        else:
            raise MalformedInvolution(f"fixed space of dimension {d} fits no type in degree {n}")
    if len(kinds) != 1:
        raise MalformedInvolution("factors of the base ring disagree on the type")
    return kinds.pop()


def classical_type(A, check=True):
    kind = classify_kind(A, check=check)
    n = A.degree
    if kind == InvolutionKind.UNITARY:
        if n < 2:
            raise NotAbsolutelySimple("unitary degree 1 gives the trivial group")
        return ClassicalType("A", n - 1, n)
    if kind == InvolutionKind.SYMPLECTIC:
        return ClassicalType("C", n // 2, n)
    if n % 2:
        if n == 1:
            raise NotAbsolutelySimple("orthogonal degree 1 gives the trivial group")
        return ClassicalType("B", (n - 1) // 2, n)
    if n == 8:
        raise ExcludedTriality("orthogonal degree 8 (D4) is excluded")
    if n in (2, 4):
        raise NotAbsolutelySimple(f"orthogonal degree {n} has no absolutely simple group")
    return ClassicalType("D", n // 2, n)


# -- base change --

@dataclass(frozen=True)
class CenterChange:
    """How the center's total ring moves along a base ring map."""

    center: QuadraticEtale | None
    total_map: object
    galois: object  # Frobenius on the new total ring over the old one, or None


def center_change(A, f):
    if f.source != A.base:
        raise UnsupportedBaseChange("ring map does not start at the algebra's base ring")
    galois = None
    if f.kind == "identity":
        return CenterChange(A.center, lambda a: a, None)
    if A.center is None:
        if f.kind == "extension":
            galois = f.galois
        return CenterChange(None, f, galois)
    E = A.center
    if E.split:
        newE = QuadraticEtale.split_over(f.target)
        T, T2 = E.total, newE.total

        def tmap(a):
            l, r = T.split(a)
            return T2.join(f(l), f(r))

        if f.kind == "extension":
            def galois(a):
                l, r = T2.split(a)
                return T2.join(f.galois(l), f.galois(r))
        return CenterChange(newE, tmap, galois)
    if f.kind == "residue":
        T = E.total
        newE = QuadraticEtale.field_over(f.target, T.base)
        return CenterChange(newE, T.residue, None)
    if f.kind == "extension" and isinstance(E.base, PrimeField):
        L = f.target
        if f.degree % 2:
            raise UnsupportedBaseChange("odd-degree extension keeps the center a field; not modeled")
        newE = QuadraticEtale.split_over(L)
        T2 = newE.total
        iota = subfield_embedding(E.total, L)

        def tmap(a):
            return T2.join(iota(a), iota(E.conj(a)))

        def galois(a):
            l, r = T2.split(a)
            return T2.join(L.frobenius(r), L.frobenius(l))

        return CenterChange(newE, tmap, galois)
    raise UnsupportedBaseChange(f"{f.kind} map on a {E.describe()} center is not supported")


def base_change(A, f):
    ch = center_change(A, f)
    inv = A.involution
    if isinstance(inv, Exchange):
        new_inv = Exchange()
    elif isinstance(inv, Hermitian):
        new_inv = Hermitian(mx.emap(ch.total_map, inv.g))
    else:
        new_inv = Gram(mx.emap(ch.total_map, inv.g), inv.eps)
    return AlgebraWithInvolution(f.target, ch.center, A.degree, new_inv)


# -- the idempotent decomposition of a split-center unitary object --

@dataclass
class SplitDecomposition:
    """``a -> (e a, (e sigma(a))^op)`` onto ``(B x B^op, exchange)`` with ``B = M_n(base)``."""

    algebra: AlgebraWithInvolution
    idempotent: int

    @property
    def factor_ring(self):
        return self.algebra.base

    @property
    def degree(self):
        return self.algebra.degree

    def _first(self, x):
        T = self.algebra.total
        return mx.emap(lambda v: T.split(v)[0], x)

    def iso(self, x):
        A = self.algebra
        return self._first(x), self._first(A.sigma(x))

    def inverse(self, pair):
        A, T = self.algebra, self.algebra.total
        a1, x = pair
        g1 = self._first(A.gram)
        g2 = mx.emap(lambda v: T.split(v)[1], A.gram)
        # second component a2 from x = g1 a2^T g2^-1
        B = A.base
        a2 = mx.transpose(mx.mul_many(B, mx.inverse(B, g1), x, g2))
        return tuple(tuple(T.join(u, v) for u, v in zip(r, s)) for r, s in zip(a1, a2))

    def verify(self):
        A, T, B = self.algebra, self.algebra.total, self.algebra.base
        failures = []
        e = self.idempotent
        if A.conj(e) != T.sub(T.one, e):
            failures.append("idempotent_conjugation")

        def pmul(x, y):
            return mx.mul(B, x[0], y[0]), mx.mul(B, y[1], x[1])

        span = A.spanning_set()
        images = {x: self.iso(x) for x in span}
        for x in span:
            if self.inverse(images[x]) != x:
                failures.append("bijective")
                break
        for x in span:
            if self.iso(A.sigma(x)) != (images[x][1], images[x][0]):
                failures.append("respects_involution")
                break
        done = False
        for x in span:
            for y in span:
                if self.iso(A.mul(x, y)) != pmul(images[x], images[y]):
                    failures.append("multiplicative")
                    done = True
                    break
            if done:
                break
        return InvolutionReport(not failures, failures, len(span) ** 2)


def unitary_split_decomposition(A):
    if A.center is None:
        raise MalformedInvolution("not a unitary object")
    if not A.center.split:
        raise CenterNotSplit("center is a field; base change to split it first")
    T = A.total
    return SplitDecomposition(A, T.join(A.base.one, 0))


# -- isomorphism --

@dataclass(frozen=True)
class Isomorphism:
    """``x -> c conj^outer(x) c^-1`` with ``c g1 conj(c)^T = multiplier g2``
    (``conj(g1)`` in place of ``g1`` when ``outer``)."""

    c: tuple
    outer: bool
    multiplier: int

    def verify(self, A1, A2):
        T = A1.total
        src = A1.conj_matrix(A1.gram) if self.outer else A1.gram
        lhs = mx.mul_many(T, self.c, src, mx.transpose(A1.conj_matrix(self.c)))
        return lhs == mx.scale(T, self.multiplier, A2.gram)


def multipliers(A):
    R = A.base
    units = R.unit_codes()
    if A.center is None:
        return units
    return [A.center.embed(u) for u in units]


def _det_class_differs(A1, A2):
    n = A1.degree
    if A1.center is not None or n % 2:
        return False
    R = A1.base
    try:
        d1, d2 = mx.det(R, A1.gram), mx.det(R, A2.gram)
        return R.is_square(R.mul(d1, R.inv(d2))) is False
    except Exception:
        return False


def is_isomorphic(A1, A2):
    """An explicit Isomorphism ``A1 -> A2`` or None."""
    if A1.base != A2.base:
        raise UnsupportedBaseChange("objects live over different rings")
    if A1.degree != A2.degree or A1.center != A2.center:
        return None
    k1, k2 = classify_kind(A1, check=False), classify_kind(A2, check=False)
    if k1 != k2:
        return None
    if _det_class_differs(A1, A2):
        return None
    T = A1.total
    lams = multipliers(A1)
    options = [False, True] if A1.center is not None else [False]
    for outer in options:
        src = A1.conj_matrix(A1.gram) if outer else A1.gram
        found = similitude.search(T, A1.conj_np, src, A2.gram, lams, first_only=True)
        if found:
            c, lam = found[0]
            iso = Isomorphism(c, outer, lam)
            assert iso.verify(A1, A2)
            return iso
    return None
