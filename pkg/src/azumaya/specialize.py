"""Reduction to the residue field over chain rings and the class bijection check.

Forms are held as numpy stacks of full ``n x n`` code matrices.  A form over
``R = k[t]/(t^m)`` lies in the fiber over its reduction ``g0``; the classes
over R that reduce into the class of ``g0`` are the orbits, on that fiber, of
the similitudes whose reduction fixes ``g0``.  That group is generated by the
congruence kernel ``I + t^j b E_il``, the multiplier kernel ``1 + t^j`` and
literal lifts of generators of the residue stabilizer.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matrices as mx
from .autgrp import enumerate_aut_points
from .errors import InvalidRing, TooLarge, Unsupported
from .exactring import ChainRing, ProductRing, QuadraticEtale, RingMap, check_bound
from .invalg import (AlgebraWithInvolution, Exchange, Gram, Hermitian, InvolutionKind, base_change,
                     is_isomorphic, verify_involution)


def reduce(A):
    if not isinstance(A.base, ChainRing):
        raise InvalidRing("reduce needs an object over a chain ring")
    out = base_change(A, RingMap.residue(A.base))
    if not verify_involution(out):
        raise Unsupported("reduction does not satisfy the involution axioms")
    return out


def _lift_code(TR, Tk, a):
    # chain codes start with the residue coefficient, so lifts keep the code
    if isinstance(TR, ProductRing):
        return TR.join(*Tk.split(a))
    return a


def _residue_code(TR, Tk, a):
    if isinstance(TR, ProductRing):
        l, r = TR.split(a)
        return Tk.join(TR.left.residue(l), TR.right.residue(r))
    return TR.residue(a)


def _lift_center(E, R):
    if E is None:
        return None
    return QuadraticEtale.split_over(R) if E.split else QuadraticEtale.field_over(R)


def lift(A, R):
    if not isinstance(R, ChainRing) or R.base != A.base:
        raise InvalidRing("lift needs a chain ring over the object's base field")
    center = _lift_center(A.center, R)
    TR = center.total if center is not None else R
    inv = A.involution
    if isinstance(inv, Exchange):
        return AlgebraWithInvolution(R, center, A.degree, Exchange())
    g = mx.emap(lambda a: _lift_code(TR, A.total, a), inv.g)
    new = Hermitian(g) if isinstance(inv, Hermitian) else Gram(g, inv.eps)
    return AlgebraWithInvolution(R, center, A.degree, new)


# -- form spaces --

@dataclass
class FormSetting:
    kind: InvolutionKind
    base: object
    center: object  # QuadraticEtale or None

    @property
    def T(self):
        return self.center.total if self.center is not None else self.base

    @property
    def conj(self):
        if self.center is None:
            return np.arange(self.T.size, dtype=np.int64)
        return self.center.conj_np

    def algebra(self, g):
        g = mx.freeze(g)
        n = len(g)
        if self.kind == InvolutionKind.UNITARY:
            return AlgebraWithInvolution(self.base, self.center, n, Hermitian(g))
        return AlgebraWithInvolution(self.base, None, n, Gram(g, 1 if self.kind == InvolutionKind.ORTHOGONAL else -1))

    def multipliers(self):
        units = self.base.unit_codes()
        return [self.center.embed(u) for u in units] if self.center is not None else list(units)

    def embed(self, a):
        return self.center.embed(a) if self.center is not None else a


def _positions(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


def _fill(setting, n, base, values):
    """All forms ``base + delta`` where upper-triangle entries of delta range over ``values``.

    ``values[(i, j)]`` lists the allowed codes for the entry; the lower triangle
    follows from the symmetry of the kind.
    """
    T = setting.T
    pos = _positions(n)
    sizes = [len(values[p]) for p in pos]
    total = int(np.prod(sizes, dtype=object))
    check_bound(total, f"forms of degree {n} over {T.describe()}")
    idx = np.arange(total, dtype=np.int64)
    out = np.zeros((total, n, n), dtype=np.int64)
    add, neg, conj = T.add_np, T.neg_np, setting.conj
    for p, s in zip(reversed(pos), reversed(sizes)):
        idx, r = np.divmod(idx, s)
        i, j = p
        v = add[base[i][j], np.asarray(values[p], dtype=np.int64)[r]]
        out[:, i, j] = v
        if i != j:
            if setting.kind == InvolutionKind.ORTHOGONAL:
                out[:, j, i] = v
            elif setting.kind == InvolutionKind.SYMPLECTIC:
                out[:, j, i] = neg[v]
            else:
                out[:, j, i] = conj[v]
    return out


def _diag_values(setting, codes):
    if setting.kind == InvolutionKind.SYMPLECTIC:
        return [0]
    if setting.kind == InvolutionKind.UNITARY:
        conj = setting.conj
        return [a for a in codes if conj[a] == a]
    return list(codes)


def all_unit_forms(setting, n):
    T = setting.T
    codes = list(range(T.size))
    values = {(i, j): (_diag_values(setting, codes) if i == j else codes) for i, j in _positions(n)}
    forms = _fill(setting, n, mx.zeros(n), values)
    keep = [k for k in range(len(forms)) if T.is_unit(mx.det(T, mx.freeze(forms[k])))]
    return forms[keep]


def fiber(setting_R, setting_k, g0):
    """Forms over R reducing to ``g0`` exactly."""
    TR, Tk = setting_R.T, setting_k.T
    n = len(g0)
    base = mx.emap(lambda a: _lift_code(TR, Tk, a), g0)
    radical = [a for a in range(TR.size) if _residue_code(TR, Tk, a) == 0]
    values = {(i, j): (_diag_values(setting_R, radical) if i == j else radical) for i, j in _positions(n)}
    return _fill(setting_R, n, base, values)


# -- the group action --

def _act(setting, forms, c, lam, outer):
    """``lam^-1 c conj^outer(g) conj(c)^T`` on a stack of forms."""
    T = setting.T
    add, mul, conj = T.add_np, T.mul_np, setting.conj
    n = len(c)
    g = conj[forms] if outer else forms
    d = [[int(conj[c[j][i]]) for j in range(n)] for i in range(n)]  # conj(c)^T
    N = len(forms)
    left = np.zeros_like(g)
    for i in range(n):
        for j in range(n):
            acc = np.zeros(N, dtype=np.int64)
            for k in range(n):
                if c[i][k]:
                    acc = add[acc, mul[c[i][k], g[:, k, j]]]
            left[:, i, j] = acc
    out = np.zeros_like(g)
    li = T.inv(lam)
    for i in range(n):
        for j in range(n):
            acc = np.zeros(N, dtype=np.int64)
            for k in range(n):
                if d[k][j]:
                    acc = add[acc, mul[left[:, i, k], d[k][j]]]
            out[:, i, j] = mul[li, acc]
    return out


def _keys(T, forms):
    n = forms.shape[1]
    if T.size ** (n * n) >= 2**62:
        raise TooLarge("form keys do not fit in 64 bits")
    flat = forms.reshape(len(forms), n * n)
    key = np.zeros(len(forms), dtype=np.int64)
    for p in range(n * n):
        key = key * T.size + flat[:, p]
    return key


def orbit_labels(setting, forms, generators):
    """Orbit label per form (index of the least form in its orbit) for the
    group generated by ``(c, lam, outer)`` triples; ``forms`` must be
    sorted row-major and closed under the generators."""
    T = setting.T
    keys = _keys(T, forms)
    order = np.argsort(keys, kind="stable")
    if not np.array_equal(order, np.arange(len(forms))):
        raise ValueError("forms must be sorted")
    perms = []
    for c, lam, outer in generators:
        img = _keys(T, _act(setting, forms, c, lam, outer))
        pos = np.searchsorted(keys, img)
        if (pos >= len(keys)).any() or not np.array_equal(keys[np.minimum(pos, len(keys) - 1)], img):
            raise ValueError("form space is not closed under the action")
        perms.append(pos)
    lab = np.arange(len(forms), dtype=np.int64)
    while True:
        old = lab.copy()
        for p in perms:
            # edges x -> p[x]: pull the smaller label across both ways
            np.minimum.at(lab, p, lab)
            lab = np.minimum(lab, lab[p])
        lab = lab[lab]
        if np.array_equal(lab, old):
            return lab


def _sorted(setting, forms):
    keys = _keys(setting.T, forms)
    return forms[np.argsort(keys, kind="stable")]


def _additive_basis(T):
    return [T.from_prime_coords([1 if i == j else 0 for i in range(T.prime_dim)]) for j in range(T.prime_dim)]


def _full_generators(setting, n):
    T = setting.T
    I = mx.identity(T, n)
    gens = []
    for b in _additive_basis(T):
        for i in range(n):
            for l in range(n):
                if i != l:
                    gens.append((mx.add(T, I, mx.unit_matrix(n, i, l, b)), T.one, False))
    for u in T.unit_codes():
        if u != T.one:
            for i in range(n):
                d = [list(r) for r in I]
                d[i][i] = u
                gens.append((mx.freeze(d), T.one, False))
    gens += [(I, lam, False) for lam in setting.multipliers() if lam != T.one]
    if setting.kind == InvolutionKind.UNITARY:
        gens.append((I, T.one, True))
    return gens


def residue_classes(setting, n):
    """Least representatives of the similitude classes of unit forms over a field."""
    forms = _sorted(setting, all_unit_forms(setting, n))
    lab = orbit_labels(setting, forms, _full_generators(setting, n))
    return [mx.freeze(forms[i]) for i in np.unique(lab)]


def _stabilizer_generators(setting_k, g0):
    A = setting_k.algebra(g0)
    G = enumerate_aut_points(A)
    return [(p.c, p.multiplier, p.outer) for p in G.generators()]


def _kernel_generators(setting_R, n):
    R, T = setting_R.base, setting_R.T
    I = mx.identity(T, n)
    gens = []
    t = R.t()
    for j in range(1, R.m):
        tj = setting_R.embed(R.pow(t, j))
        for b in _basis_lifts(setting_R):
            x = T.mul(tj, b)
            for i in range(n):
                for l in range(n):
                    gens.append((mx.add(T, I, mx.unit_matrix(n, i, l, x)), T.one, False))
        gens.append((I, setting_R.embed(R.add(R.one, R.pow(t, j))), False))
    return gens


def _basis_lifts(setting_R):
    """Lifts of an additive basis of the residue total ring."""
    T = setting_R.T
    if isinstance(T, ProductRing):
        kb = _additive_basis(T.left.base)
        return [T.join(b, 0) for b in kb] + [T.join(0, b) for b in kb]
    return list(_additive_basis(T.base))


def fiber_classes(setting_R, setting_k, g0):
    """Least representatives of the classes over R inside the fiber over ``g0``."""
    TR, Tk = setting_R.T, setting_k.T
    forms = _sorted(setting_R, fiber(setting_R, setting_k, g0))
    gens = _kernel_generators(setting_R, len(g0))
    for c, lam, outer in _stabilizer_generators(setting_k, g0):
        gens.append((mx.emap(lambda a: _lift_code(TR, Tk, a), c), _lift_code(TR, Tk, lam), outer))
    lab = orbit_labels(setting_R, forms, gens)
    return [mx.freeze(forms[i]) for i in np.unique(lab)]


def settings_for(kind, R, center=None):
    """``(setting over R, setting over its residue field)`` for the requested kind."""
    kind = InvolutionKind(kind)
    k = R.base
    if kind != InvolutionKind.UNITARY:
        return FormSetting(kind, R, None), FormSetting(kind, k, None)
    if center == "field":
        return (FormSetting(kind, R, QuadraticEtale.field_over(R)), FormSetting(kind, k, QuadraticEtale.field_over(k)))
    return (FormSetting(kind, R, QuadraticEtale.split_over(R)), FormSetting(kind, k, QuadraticEtale.split_over(k)))


@dataclass
class SpecializationReport:
    ring: dict
    kind: str
    degree: int
    center: str | None
    classesOverR: list = field(default_factory=list)
    classesOverK: list = field(default_factory=list)
    matching: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def bijective(self):
        return not self.failures

    def __bool__(self):
        return self.bijective

    def to_json(self):
        d = dict(self.__dict__)
        d["bijective"] = self.bijective
        return d


def check_specialization_bijection(kind, degree, R, center=None):
    """Classes over the chain ring ``R`` against classes over its residue field.

    For unitary objects ``center`` selects "split" or "field"; None runs both
    and concatenates the class lists.
    """
    if not isinstance(R, ChainRing):
        raise InvalidRing("specialization needs a chain ring")
    kind = InvolutionKind(kind)
    if kind == InvolutionKind.SYMPLECTIC and degree % 2:
        raise Unsupported("symplectic forms need even degree")
    if kind == InvolutionKind.UNITARY and center is None:
        parts = [check_specialization_bijection(kind, degree, R, c) for c in ("split", "field")]
        out = SpecializationReport(R.to_json(), kind.value, degree, None)
        for part in parts:
            off_r, off_k = len(out.classesOverR), len(out.classesOverK)
            out.classesOverR += part.classesOverR
            out.classesOverK += part.classesOverK
            out.matching += [[i + off_r, j + off_k] for i, j in part.matching]
            out.failures += [f"{part.center}: {f}" for f in part.failures]
        return out
    if kind != InvolutionKind.UNITARY:
        center = None
    sR, sk = settings_for(kind, R, center)
    report = SpecializationReport(R.to_json(), kind.value, degree, center)
    reps_k = residue_classes(sk, degree)
    reps_R = []
    for j, g0 in enumerate(reps_k):
        over = fiber_classes(sR, sk, g0)
        if not over:
            report.failures.append(f"class {j} over the residue field has no lift")
        if len(over) > 1:
            report.failures.append(f"class {j} over the residue field has {len(over)} classes above it")
        for g in over:
            report.matching.append([len(reps_R), j])
            reps_R.append(g)
    for i, j in report.matching:
        red = reduce(sR.algebra(reps_R[i]))
        if is_isomorphic(red, sk.algebra(reps_k[j])) is None:
            report.failures.append(f"reduction of class {i} is not isomorphic to residue class {j}")
    report.classesOverR = [sR.algebra(g).to_json() for g in reps_R]
    report.classesOverK = [sk.algebra(g).to_json() for g in reps_k]
    return report
