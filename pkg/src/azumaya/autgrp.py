"""Points of the automorphism group of an algebra with involution.

An automorphism is ``x -> c conj^outer(x) c^-1`` for an invertible ``c`` over
the center's total ring; it preserves ``sigma_g`` exactly when ``c`` is a
similitude of ``g`` (of ``conj(g)`` for the semilinear ``outer`` ones, which
only exist for unitary objects).  Points are stored with ``c`` normalized so
that its first unit entry is one, which makes them canonical modulo central
scalars.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property

from . import matrices as mx
from . import similitude
from .errors import MalformedInvolution, Unsupported
from .invalg import InvolutionKind, base_change, center_change, classify_kind, multipliers


@dataclass(frozen=True, order=True)
class AutPoint:
    outer: bool
    c: tuple
    multiplier: int = 0

    @property
    def key(self):
        return (self.outer, self.c)

    def __eq__(self, other):
        return isinstance(other, AutPoint) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def center_action(self, A):
        if not self.outer:
            return "identity"
        return "exchange" if A.center.split else "conj"

    def to_json(self, A):
        T = A.total
        return {"c": mx.to_json(T, self.c), "centerAction": self.center_action(A),
                "multiplier": T.element_to_json(self.multiplier)}


def _multiplier(A, c, outer):
    T, g = A.total, A.gram
    src = A.conj_matrix(g) if outer else g
    lhs = mx.mul_many(T, c, src, mx.transpose(A.conj_matrix(c)))
    pos = mx.first_unit_position(T, g)
    if pos is None:
        raise MalformedInvolution("Gram matrix has no unit entry")
    i, j = pos
    return T.mul(lhs[i][j], T.inv(g[i][j]))


def make_point(A, c, outer):
    T = A.total
    c = mx.normalize(T, c)
    return AutPoint(bool(outer), c, _multiplier(A, c, outer))


def point_from_json(A, data):
    T = A.total
    c = mx.from_json(T, data["c"])
    return make_point(A, c, data.get("centerAction", "identity") != "identity")


def is_automorphism(A, c, outer):
    """Direct similitude check for an arbitrary matrix ``c``."""
    T, g = A.total, A.gram
    if not mx.is_invertible(T, c):
        return False
    src = A.conj_matrix(g) if outer else g
    lhs = mx.mul_many(T, c, src, mx.transpose(A.conj_matrix(c)))
    try:
        lam = _multiplier(A, c, outer)
    except Exception:
        return False
    return lhs == mx.scale(T, lam, g) and A.conj(lam) == lam and T.is_unit(lam)


def compose(A, p1, p2):
    """``p1 o p2``."""
    T = A.total
    c2 = A.conj_matrix(p2.c) if p1.outer else p2.c
    return make_point(A, mx.mul(T, p1.c, c2), p1.outer != p2.outer)


def inverse(A, p):
    ci = mx.inverse(A.total, p.c)
    return make_point(A, A.conj_matrix(ci) if p.outer else ci, p.outer)


def identity_point(A):
    return make_point(A, mx.identity(A.total, A.degree), False)


def apply(A, p, x):
    T = A.total
    y = A.conj_matrix(x) if p.outer else x
    return mx.mul_many(T, p.c, y, mx.inverse(T, p.c))


class PointGroup:
    """A finite group of AutPoints of ``algebra`` in canonical order."""

    def __init__(self, algebra, elements):
        self.algebra = algebra
        self.elements = tuple(sorted(elements))
        self.index = {p: i for i, p in enumerate(self.elements)}

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p):
        return p in self.index

    @cached_property
    def identity(self):
        return identity_point(self.algebra)

    def compose(self, p, q):
        return compose(self.algebra, p, q)

    def inverse(self, p):
        return inverse(self.algebra, p)

    def element_order(self, p):
        e, x, k = self.identity, p, 1
        while x != e:
            x = self.compose(x, p)
            k += 1
            if k > self.order:
                raise MalformedInvolution("element order exceeds group order")
        return k

    @cached_property
    def order_histogram(self):
        return dict(sorted(Counter(self.element_order(p) for p in self.elements).items()))

    def signature(self):
        return self.order, tuple(self.order_histogram.items())

    def check_axioms(self):
        """Exhaustive closure, identity and inverse check (associativity is inherited from matrices)."""
        e = self.identity
        if e not in self.index:
            return False
        for p in self.elements:
            if self.inverse(p) not in self.index:
                return False
            for q in self.elements:
                if self.compose(p, q) not in self.index:
                    return False
        return True

    def subgroup(self, elements):
        return PointGroup(self.algebra, elements)

    def generators(self):
        """A small generating set, chosen greedily in canonical order."""
        gens, span = [], {self.identity}
        for p in self.elements:
            if p in span:
                continue
            gens.append(p)
            span = closure(self.algebra, gens)
            if len(span) == self.order:
                break
        return gens

    def to_json(self, neutral=None):
        A = self.algebra
        neutral = neutral if neutral is not None else neutral_subgroup(self)
        return {"order": self.order, "elements": [p.to_json(A) for p in self.elements],
                "neutral_indices": [self.index[p] for p in neutral.elements]}


def closure(A, gens):
    e = identity_point(A)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(A, x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def enumerate_aut_points(A):
    T, g = A.total, A.gram
    lams = multipliers(A)
    pts = [AutPoint(False, c, lam) for c, lam in similitude.search(T, A.conj_np, g, g, lams)]
    if A.center is not None:
        src = A.conj_matrix(g)
        pts += [AutPoint(True, c, lam) for c, lam in similitude.search(T, A.conj_np, src, g, lams)]
    return PointGroup(A, pts)


def neutral_membership(phi, A, kind=None):
    kind = kind or classify_kind(A, check=False)
    if kind == InvolutionKind.UNITARY:
        return not phi.outer
    if kind == InvolutionKind.SYMPLECTIC:
        return True
    n = A.degree
    if n % 2:
        return True
    T = A.total
    return mx.det(T, phi.c) == T.pow(phi.multiplier, n // 2)


def neutral_subgroup(G):
    A = G.algebra
    kind = classify_kind(A, check=False)
    sub = G.subgroup([p for p in G.elements if neutral_membership(p, A, kind)])
    if G.order % sub.order or G.order // sub.order not in (1, 2):
        raise MalformedInvolution(f"neutral subgroup has index {G.order / sub.order}")
    return sub


def _gl_order(m, q):
    out = q ** (m * (m - 1) // 2)
    for i in range(1, m + 1):
        out *= q**i - 1
    return out


def _gu_order(m, q):
    out = q ** (m * (m - 1) // 2)
    for i in range(1, m + 1):
        out *= q**i - (-1) ** i
    return out


def _sp_order(n, q):
    out = q ** (n * n)
    for i in range(1, n + 1):
        out *= q ** (2 * i) - 1
    return out


def classical_order(letter, rank, q, *, unitary_field=False, plus=True, m=1):
    """Order of the adjoint group's points over ``F_q[t]/(t^m)``.

    A: PGL_{n+1}, or PGU_{n+1} when ``unitary_field``; B: SO_{2n+1};
    C: PGSp_{2n}; D: PGO^+_{2n} of plus (``plus``) or minus type.  Chain-ring
    orders multiply the residue count by ``q^(dim (m-1))`` (smoothness).
    """
    if rank < 1:
        raise Unsupported(f"rank {rank} is outside the classical range")
    n = rank
    if letter == "A":
        base = _gu_order(n + 1, q) // (q + 1) if unitary_field else _gl_order(n + 1, q) // (q - 1)
        dim = n * (n + 2)
    elif letter in ("B", "C"):
        base = _sp_order(n, q)
        dim = n * (2 * n + 1)
    elif letter == "D":
        eps = 1 if plus else -1
        base = q ** (n * (n - 1)) * (q**n - eps)
        for i in range(1, n):
            base *= q ** (2 * i) - 1
        dim = n * (2 * n - 1)
    else:
        raise Unsupported(f"unknown type letter {letter!r}")
    return base * q ** (dim * (m - 1))


def map_point(A, f, p, ch=None):
    """Image of a point of ``A`` in the points of ``base_change(A, f)``."""
    ch = ch or center_change(A, f)
    B = base_change(A, f)
    return make_point(B, mx.emap(ch.total_map, p.c), p.outer)


def galois_point(B, galois, p):
    return make_point(B, mx.emap(galois, p.c), p.outer)


@dataclass
class PullbackReport:
    passed: bool
    map_kind: str
    source_order: int
    target_order: int
    expected_order: int
    image_order: int
    neutral_image_order: int
    neutral_expected_order: int
    failures: list

    def __bool__(self):
        return self.passed

    def to_json(self):
        return dict(self.__dict__)


def check_pullback_commutes(A, f):
    """Compare Aut(f*A) with the image of Aut(A) along ``f``.

    For identity, residue and projection maps the image must be all of
    Aut(f*A)(R') (surjectivity on points); for a Galois extension it must be
    exactly the Frobenius-fixed points.  Neutral filtering must commute too.
    """
    ch = center_change(A, f)
    B = base_change(A, f)
    GA = enumerate_aut_points(A)
    GB = enumerate_aut_points(B)
    NA = neutral_subgroup(GA)
    NB = neutral_subgroup(GB)
    image = {map_point(A, f, p, ch) for p in GA}
    neutral_image = {map_point(A, f, p, ch) for p in NA}
    failures = []
    if not image <= set(GB.elements):
        failures.append("image_not_in_target")
    if f.kind == "extension":
        expected = {p for p in GB if galois_point(B, ch.galois, p) == p}
    else:
        expected = set(GB.elements)
    if image != expected:
        failures.append("image_mismatch")
    neutral_expected = expected & set(NB.elements)
    if neutral_image != neutral_expected:
        failures.append("neutral_mismatch")
    return PullbackReport(not failures, f.kind, GA.order, GB.order, len(expected), len(image),
                          len(neutral_image), len(neutral_expected), failures)
