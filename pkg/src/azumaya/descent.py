"""Galois descent over finite fields: cocycles, twisted forms and H^1.

Covers are cyclic extensions ``L = F_{p^d}`` of a prime field ``k = F_p``
with the Frobenius ``phi`` as generator, so a cocycle is determined by its
value ``a = a_phi`` in Aut(split)(L) subject to
``a phi(a) ... phi^{d-1}(a) = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import matrices as mx
from .autgrp import (PointGroup, apply, compose, enumerate_aut_points, galois_point, identity_point, inverse,
                     is_automorphism, neutral_subgroup, point_from_json)
from .errors import InvalidCocycle, Unsupported
from .exactring import ExtensionField, PrimeField, QuadraticEtale, RingMap
from .invalg import (AlgebraWithInvolution, ClassicalType, Gram, Hermitian, InvolutionKind, Isomorphism, base_change,
                     center_change, is_isomorphic, make_split, verify_involution)


@dataclass(frozen=True)
class GaloisExtension:
    k: PrimeField
    L: object
    d: int

    @classmethod
    def of(cls, q, d):
        k = PrimeField(q)
        L = k if d == 1 else ExtensionField.canonical(q, d)
        return cls(k, L, d)

    @property
    def ring_map(self):
        return RingMap.extension(self.k, self.L)

    def frobenius(self, a, times=1):
        for _ in range(times % self.d):
            a = self.L.frobenius(a)
        return a

    def fixed_field(self):
        return [a for a in range(self.L.size) if self.L.frobenius(a) == a]

    def norm(self, a):
        out, x = self.L.one, a
        for _ in range(self.d):
            out = self.L.mul(out, x)
            x = self.L.frobenius(x)
        return out

    def to_json(self):
        return {"q": self.k.p, "d": self.d}


class SplitOverL:
    """The split object over ``k``, its base change to ``L`` and the Galois action on points."""

    def __init__(self, A, E):
        if A.base != E.k:
            raise Unsupported("descent is implemented over prime fields only")
        self.A, self.E = A, E
        f = E.ring_map
        self.change = center_change(A, f)
        self.AL = base_change(A, f)

    @cached_property
    def group(self):
        return enumerate_aut_points(self.AL)

    @cached_property
    def neutral(self):
        return neutral_subgroup(self.group)

    def galois(self, a):
        return self.change.galois(a)

    def galois_point(self, p, times=1):
        for _ in range(times % self.E.d):
            p = galois_point(self.AL, self.galois, p)
        return p

    def galois_matrix(self, x):
        return mx.emap(self.galois, x)

    def compose(self, p, q):
        return compose(self.AL, p, q)

    def inverse(self, p):
        return inverse(self.AL, p)

    @cached_property
    def identity(self):
        return identity_point(self.AL)

    def cocycle_values(self, a):
        """``[a_1, a_phi, a_phi^2, ...]`` from the value on the generator."""
        vals = [self.identity]
        for i in range(1, self.E.d + 1):
            vals.append(self.compose(vals[-1], self.galois_point(a, i - 1)))
        return vals

    def is_cocycle(self, a):
        return self.cocycle_values(a)[self.E.d] == self.identity

    def twisted_action(self, a, x):
        """``x -> a(phi(x))`` on matrices over the total ring of A_L."""
        return apply(self.AL, a, self.galois_matrix(x))


@dataclass
class Cocycle:
    split: AlgebraWithInvolution
    extension: GaloisExtension
    value: object  # AutPoint of the split object over L

    def to_json(self):
        ctx = SplitOverL(self.split, self.extension)
        return {"extension": self.extension.to_json(), "values": {"phi": self.value.to_json(ctx.AL)}}


def cocycle_from_json(split, data):
    ext = data["extension"]
    E = GaloisExtension.of(int(ext["q"]), int(ext["d"]))
    ctx = SplitOverL(split, E)
    return Cocycle(split, E, point_from_json(ctx.AL, data["values"]["phi"]))


def validate_cocycle(c, E=None):
    E = E or c.extension
    ctx = SplitOverL(c.split, E)
    a = c.value
    if not is_automorphism(ctx.AL, a.c, a.outer):
        return False
    vals = ctx.cocycle_values(a)
    if vals[E.d] != ctx.identity:
        return False
    d = E.d
    for i in range(d):
        for j in range(d):
            if vals[(i + j) % d] != ctx.compose(vals[i], ctx.galois_point(vals[j], i)):
                return False
    return True


@dataclass
class TwistedForm:
    result: AlgebraWithInvolution
    witness: Isomorphism  # from base_change(result, k -> L) to the split object over L
    cocycle: Cocycle
    fixed_dimension: int = 0

    def to_json(self):
        ctx = SplitOverL(self.cocycle.split, self.cocycle.extension)
        T = ctx.AL.total
        return {"result": self.result.to_json(),
                "witness": {"c": mx.to_json(T, self.witness.c), "outer": self.witness.outer,
                            "multiplier": T.element_to_json(self.witness.multiplier)},
                "fixed_dimension": self.fixed_dimension}

    def verify(self):
        """Witness, involution axioms and fixed-point containment."""
        ctx = SplitOverL(self.cocycle.split, self.cocycle.extension)
        RL = base_change(self.result, ctx.E.ring_map)
        if RL.center != ctx.AL.center or not self.witness.verify(RL, ctx.AL):
            return False
        if not verify_involution(self.result):
            return False
        return _embedded_result_is_fixed(ctx, self)


def _prime_basis(F):
    """Codes of the F_p-basis ``1, x, x^2, ...`` of F."""
    return [F.from_prime_coords([1 if i == j else 0 for i in range(F.prime_dim)]) for j in range(F.prime_dim)]


def _descend_vectors(E, B, t):
    """F_p-basis of ``{v in L^n : t B phi(v) = v}`` as the columns of a matrix."""
    L, n = E.L, len(B)
    Fp = E.k
    basis = _prime_basis(L)
    cols = []
    for i in range(n):
        for b in basis:
            v = [0] * n
            v[i] = b
            w = [L.mul(t, L.sum(L.mul(B[r][s], L.frobenius(v[s])) for s in range(n))) for r in range(n)]
            diff = [L.sub(x, y) for x, y in zip(w, v)]
            cols.append([c for x in diff for c in L.prime_coords(x)])
    rows = [list(r) for r in zip(*cols)]
    null = mx.nullspace(Fp, rows, n * len(basis))
    if len(null) != n:
        raise InvalidCocycle(f"descended space has dimension {len(null)}, expected {n}")
    d = len(basis)
    vecs = [[L.from_prime_coords(v[i * d:(i + 1) * d]) for i in range(n)] for v in null]
    return tuple(tuple(vec[r] for vec in vecs) for r in range(n))


def _lang_matrix(E, B):
    """``y`` with ``B phi(y) = y`` up to a scalar, for ``B`` with scalar norm."""
    L, n = E.L, len(B)
    N, X = mx.identity(L, n), B
    for _ in range(E.d):
        N = mx.mul(L, N, X)
        X = mx.emap(L.frobenius, X)
    if not mx.is_scalar(N):
        raise InvalidCocycle("cocycle norm is not scalar")
    mu = N[0][0]
    target = L.inv(mu)
    t = next(x for x in range(1, L.size) if E.norm(x) == target)
    return _descend_vectors(E, B, t)


def _scale_into_base(ctx, g):
    """Central scalar multiple of ``g`` with entries fixed by Galois, and the scalar."""
    T = ctx.AL.total
    if ctx.A.center is None:
        pos = mx.first_unit_position(T, g)
        s = T.inv(g[pos[0]][pos[1]])
    else:
        L = T.left
        g1 = mx.emap(lambda x: T.split(x)[0], g)
        pos = mx.first_unit_position(L, g1)
        u = L.inv(g1[pos[0]][pos[1]])
        s = T.join(u, u)
    out = mx.scale(T, s, g)
    if mx.emap(ctx.galois, out) != out:
        raise InvalidCocycle("twisted Gram matrix does not descend")
    return out, s


def _descend_entries(ctx, g):
    """Matrix over the total ring of A_L with Galois-fixed entries -> matrix over the k-side total."""
    T = ctx.AL.total
    if ctx.A.center is None:
        return g
    Tk = ctx.A.total
    return mx.emap(lambda x: Tk.join(*T.split(x)), g)


def twist_algebra(A, cocycle, E=None):
    E = E or cocycle.extension
    if not validate_cocycle(cocycle, E):
        raise InvalidCocycle("not a cocycle")
    ctx = SplitOverL(A, E)
    a = cocycle.value
    AL, T = ctx.AL, ctx.AL.total
    g = AL.gram
    if not a.outer:
        if A.center is None:
            y = _lang_matrix(E, a.c)
        else:
            b1 = mx.emap(lambda x: T.split(x)[0], a.c)
            b2 = mx.emap(lambda x: T.split(x)[1], a.c)
            y1, y2 = _lang_matrix(E, b1), _lang_matrix(E, b2)
            y = tuple(tuple(T.join(u, v) for u, v in zip(r, s)) for r, s in zip(y1, y2))
        yi = mx.inverse(T, y)
        gp = mx.mul_many(T, yi, g, mx.transpose(AL.conj_matrix(yi)))
        gk, _ = _scale_into_base(ctx, gp)
        gk = _descend_entries(ctx, gk)
        if A.center is None:
            result = AlgebraWithInvolution(A.base, None, A.degree, Gram(gk, A.involution.eps))
        else:
            result = AlgebraWithInvolution(A.base, A.center, A.degree, Hermitian(gk))
        witness_c = y
    else:
        if E.d != 2:
            raise Unsupported("outer twists are implemented for quadratic covers only")
        L = E.L
        g1 = mx.emap(lambda x: T.split(x)[0], g)
        b2 = mx.emap(lambda x: T.split(x)[1], a.c)
        h = mx.mul(L, g1, mx.transpose(mx.inverse(L, b2)))
        for s in range(1, L.size):
            sh = mx.scale(L, s, h)
            if mx.transpose(mx.emap(L.frobenius, sh)) == sh:
                break
        else:
            raise InvalidCocycle("no hermitian rescaling of the twisted form")
        center = QuadraticEtale.field_over(A.base, L)
        result = AlgebraWithInvolution(A.base, center, A.degree, Hermitian(sh))
        witness_c = tuple(tuple(T.join(L.one if i == j else 0, x) for j, x in enumerate(row))
                          for i, row in enumerate(b2))
    RL = base_change(result, E.ring_map)
    lhs = mx.mul_many(T, witness_c, RL.gram, mx.transpose(AL.conj_matrix(witness_c)))
    pos = mx.first_unit_position(T, g)
    lam = T.mul(lhs[pos[0]][pos[1]], T.inv(g[pos[0]][pos[1]]))
    witness = Isomorphism(witness_c, False, lam)
    form = TwistedForm(result, witness, cocycle, _fixed_dimension(ctx, a))
    if not witness.verify(RL, AL):
        raise InvalidCocycle("twist witness does not verify")
    return form


def _fixed_dimension(ctx, a):
    """F_p-dimension of the fixed points of ``x -> a(phi(x))`` on M_n(T_L)."""
    T, n = ctx.AL.total, ctx.AL.degree
    Fp = ctx.E.k
    basis = _prime_basis(T)
    cols = []
    for i in range(n):
        for j in range(n):
            for b in basis:
                x = mx.unit_matrix(n, i, j, b)
                d = mx.sub(T, ctx.twisted_action(a, x), x)
                cols.append([c for v in mx.flat(d) for c in T.prime_coords(v)])
    rows = [list(r) for r in zip(*cols)]
    return len(cols) - mx.rank(Fp, rows)


def _embedded_result_is_fixed(ctx, form):
    """Images of a k-spanning set of the result lie in the fixed algebra and fill it."""
    R = form.result
    tmap = center_change(R, ctx.E.ring_map).total_map
    T = ctx.AL.total
    c = form.witness.c
    ci = mx.inverse(T, c)
    span = R.spanning_set()
    for x in span:
        xl = mx.mul_many(T, c, mx.emap(tmap, x), ci)
        if ctx.twisted_action(form.cocycle.value, xl) != xl:
            return False
    return form.fixed_dimension == len(span)


def h1_classes(A, E):
    """Least cocycle representative of each class, in canonical order."""
    ctx = SplitOverL(A, E)
    G = ctx.group
    z1 = [a for a in G.elements if ctx.is_cocycle(a)]
    galois = {b: ctx.galois_point(b) for b in G.elements}
    seen, reps = set(), []
    for a in z1:
        if a in seen:
            continue
        reps.append(Cocycle(A, E, a))
        for b in G.elements:
            seen.add(ctx.compose(ctx.compose(b, a), ctx.inverse(galois[b])))
    return reps


def cocycle_set(A, E):
    ctx = SplitOverL(A, E)
    return [Cocycle(A, E, a) for a in ctx.group.elements if ctx.is_cocycle(a)]


def cohomologous(ctx, a, b):
    for h in ctx.group.elements:
        if ctx.compose(ctx.compose(h, a), ctx.inverse(ctx.galois_point(h))) == b:
            return True
    return False


def split_object_for_type(t, k):
    if t.letter == "A":
        return make_split(InvolutionKind.UNITARY, t.degree, k)
    if t.letter == "C":
        return make_split(InvolutionKind.SYMPLECTIC, t.degree, k)
    return make_split(InvolutionKind.ORTHOGONAL, t.degree, k)


@dataclass
class EquivalenceReport:
    type: str
    q: int
    d: int
    band_injective: bool = False
    band_kernel_size: int = 0
    classes: list = field(default_factory=list)
    algebra_classes: int = 0
    group_classes: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def __bool__(self):
        return self.passed

    def to_json(self):
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def _twisted_fixed_group(ctx, a):
    G0 = ctx.neutral
    ai = ctx.inverse(a)
    fixed = [p for p in G0.elements if ctx.compose(ctx.compose(a, ctx.galois_point(p)), ai) == p]
    return PointGroup(ctx.AL, fixed)


def check_band_and_equivalence(t, k, E):
    """Point-level checks of the algebra/group correspondence for type ``t`` over ``k``.

    (i) Aut(A)(L) acts faithfully by conjugation on Aut0(A)(L); (ii) each
    twisted algebra's neutral group matches the correspondingly twisted
    neutral group of the split object; (iii) algebra classes and group
    classes are equinumerous.
    """
    if not isinstance(t, ClassicalType):
        t = ClassicalType(*t)
    A = split_object_for_type(t, k)
    ctx = SplitOverL(A, E)
    G, G0 = ctx.group, ctx.neutral
    gens0 = G0.generators()
    report = EquivalenceReport(str(t), k.p, E.d)

    kernel = [p for p in G.elements
              if all(ctx.compose(p, s) == ctx.compose(s, p) for s in gens0)]
    report.band_kernel_size = len(kernel)
    report.band_injective = kernel == [ctx.identity]
    if not report.band_injective:
        report.failures.append(f"band map has kernel of size {len(kernel)}")

    reps = h1_classes(A, E)
    forms = [twist_algebra(A, c, E) for c in reps]
    for c, form in zip(reps, forms):
        GT = enumerate_aut_points(form.result)
        NT = neutral_subgroup(GT)
        twisted = _twisted_fixed_group(ctx, c.value)
        entry = {"cocycle": c.value.to_json(ctx.AL), "algebra": form.result.to_json(),
                 "algebra_neutral_order": NT.order, "twisted_group_order": twisted.order,
                 "algebra_histogram": [list(x) for x in NT.order_histogram.items()],
                 "twisted_histogram": [list(x) for x in twisted.order_histogram.items()],
                 "matches": NT.signature() == twisted.signature()}
        report.classes.append(entry)
        if not entry["matches"]:
            report.failures.append(f"neutral group mismatch for class {len(report.classes) - 1}")
        if not form.verify():
            report.failures.append(f"twisted form {len(report.classes) - 1} fails verification")

    # algebra side: twisted forms pairwise non-isomorphic
    alg = len(forms)
    for i in range(len(forms)):
        for j in range(i):
            if is_isomorphic(forms[i].result, forms[j].result) is not None:
                alg -= 1
                report.failures.append(f"classes {j} and {i} give isomorphic algebras")
    report.algebra_classes = alg

    # group side: twisted Frobenius actions on G0 up to conjugation by Aut(A)(L)
    def twisted(a, psi):
        return ctx.compose(ctx.compose(a, ctx.galois_point(psi)), ctx.inverse(a))

    parent = list(range(len(reps)))
    for i in range(len(reps)):
        for j in range(i):
            a, b = reps[i].value, reps[j].value
            for h in G.elements:
                hi = ctx.inverse(h)
                if all(ctx.compose(ctx.compose(h, twisted(a, ctx.compose(ctx.compose(hi, s), h))), hi)
                       == twisted(b, s) for s in gens0):
                    parent[_root(parent, i)] = _root(parent, j)
                    break
    report.group_classes = len({_root(parent, i) for i in range(len(reps))})
    if report.group_classes != report.algebra_classes:
        report.failures.append(f"{report.algebra_classes} algebra classes vs {report.group_classes} group classes")
    return report


def _root(parent, i):
    while parent[i] != i:
        i = parent[i]
    return i
