"""The nine acceptance criteria, exact (tolerance 0).

Each test records one pass/fail line in RESULTS (printed in the terminal
summary by conftest.py) before asserting.  Criteria 4 and 6 contain sub-cases
that cannot pass (see the decisions ledger); those tests run everything,
record FAIL, and are marked strict xfail so an unexpected pass is reported.
"""
import itertools
import json
import random
import subprocess
import sys
import time
from pathlib import Path

import pytest

from azumaya import matrices as mx
from azumaya.autgrp import check_pullback_commutes, classical_order, enumerate_aut_points, neutral_subgroup
from azumaya.cli import ENVELOPE_SCHEMA, PAYLOAD_SCHEMAS, RESULT_SCHEMAS, dumps, validate
from azumaya.descent import (Cocycle, GaloisExtension, SplitOverL, check_band_and_equivalence, cocycle_set,
                             twist_algebra)
from azumaya.errors import AzumayaError, ExcludedTriality, NotAbsolutelySimple
from azumaya.exactring import ChainRing, ExtensionField, PrimeField, QuadraticEtale, RingMap
from azumaya.invalg import (AlgebraWithInvolution, Exchange, Gram, Hermitian, InvolutionKind, ClassicalType,
                            adjoint_involution, algebra_from_json, base_change, classify_kind, is_isomorphic,
                            make_split, classical_type, unitary_split_decomposition, verify_involution)
from azumaya.specialize import check_specialization_bijection

RESULTS = {}
F3, F5 = PrimeField(3), PrimeField(5)
F9 = ExtensionField.canonical(3, 2)
O, S, U = InvolutionKind.ORTHOGONAL, InvolutionKind.SYMPLECTIC, InvolutionKind.UNITARY
EXAMPLES = Path(__file__).resolve().parent.parent / "cli_examples"


def record(num, passed, detail):
    RESULTS[num] = (bool(passed), detail)
    print(f"criterion {num}: {'PASS' if passed else 'FAIL'} - {detail}")


# -- criterion 1 --

def _rand_matrix(rng, T, n, codes=None):
    codes = codes if codes is not None else range(T.size)
    codes = list(codes)
    return tuple(tuple(rng.choice(codes) for _ in range(n)) for _ in range(n))


def _symmetrize(T, g, eps):
    n = len(g)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if i == j:
                out[i][i] = g[i][i] if eps == 1 else 0
            else:
                out[i][j] = g[i][j]
                out[j][i] = g[i][j] if eps == 1 else T.neg(g[i][j])
    return mx.freeze(out)


def _hermitize(E, g):
    n = len(g)
    fixed = sorted(E.fixed_codes())
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if i == j:
                out[i][i] = fixed[g[i][i] % len(fixed)]
            else:
                out[i][j] = g[i][j]
                out[j][i] = E.conj(g[i][j])
    return mx.freeze(out)


def _valid_descriptor(rng):
    q = rng.choice([3, 5, 9])
    F = {3: F3, 5: F5, 9: F9}[q]
    kind = rng.choice(["orthogonal", "symplectic", "unitary"])
    n = rng.choice([2, 4]) if kind == "symplectic" else rng.randint(1, 4)
    if kind != "unitary":
        eps = 1 if kind == "orthogonal" else -1
        while True:
            g = _symmetrize(F, _rand_matrix(rng, F, n), eps)
            if mx.is_invertible(F, g):
                return AlgebraWithInvolution(F, None, n, Gram(g, eps))
    if q == 9 or rng.random() < 0.4:
        E = QuadraticEtale.split_over(F)
        if rng.random() < 0.2:
            return AlgebraWithInvolution(F, E, n, Exchange())
    else:
        E = QuadraticEtale.field_over(F)
    while True:
        g = _hermitize(E, _rand_matrix(rng, E.total, n))
        if mx.is_invertible(E.total, g):
            return AlgebraWithInvolution(F, E, n, Hermitian(g))


def _corrupted_descriptor(rng, which):
    q = rng.choice([3, 5])
    F = {3: F3, 5: F5}[q]
    n = rng.randint(2, 4)
    if which == "invertible":
        while True:
            g = _symmetrize(F, _rand_matrix(rng, F, n), 1)
            if not mx.is_invertible(F, g):
                return AlgebraWithInvolution(F, None, n, Gram(g, 1))
    if which == "order_two":
        if rng.random() < 0.5:
            while True:
                g = _rand_matrix(rng, F, n)
                gt = mx.transpose(g)
                if mx.is_invertible(F, g) and gt != g and gt != mx.scale(F, F.neg(F.one), g):
                    return AlgebraWithInvolution(F, None, n, Gram(g, 1))
        E = rng.choice([QuadraticEtale.split_over(F), QuadraticEtale.field_over(F)])
        T = E.total
        while True:
            g = _rand_matrix(rng, T, n)
            h = mx.transpose(mx.emap(E.conj, g))
            if mx.is_invertible(T, g) and all(h != mx.scale(T, c, g) for c in T.unit_codes()):
                return AlgebraWithInvolution(F, E, n, Hermitian(g))
    # center_action: a Gram descriptor (no conjugation) forced onto a unitary center,
    # or an exchange on a field center
    E = rng.choice([QuadraticEtale.split_over(F), QuadraticEtale.field_over(F)])
    if not E.split and rng.random() < 0.3:
        return AlgebraWithInvolution(F, E, n, Exchange())
    T = E.total
    while True:
        g = _symmetrize(T, _rand_matrix(rng, T, n), 1)
        if mx.is_invertible(T, g):
            return AlgebraWithInvolution(F, E, n, Gram(g, 1))


def test_criterion_1_involution_axioms():
    rng = random.Random(20240601)
    t0 = time.time()
    valid_ok = 0
    bad = []
    for _ in range(500):
        A = _valid_descriptor(rng)
        rep = verify_involution(A)
        if rep:
            valid_ok += 1
        else:
            bad.append((A.describe(), rep.failures))
    corrupted_ok = 0
    for i in range(120):
        which = ("invertible", "order_two", "center_action")[i % 3]
        A = _corrupted_descriptor(rng, which)
        rep = verify_involution(A)
        if not rep and rep.failures == [which]:
            corrupted_ok += 1
        else:
            bad.append((which, A.describe(), rep.failures))
    elapsed = time.time() - t0
    passed = valid_ok == 500 and corrupted_ok == 120 and elapsed < 60
    record(1, passed, f"{valid_ok}/500 valid pass, {corrupted_ok}/120 corrupted name the axiom, {elapsed:.1f}s")
    assert passed, bad[:5]


# -- criterion 2 --

def test_criterion_2_type_dictionary():
    problems = []
    for n in range(1, 9):
        cases = [(O, n), (U, n)] + ([(S, n)] if n % 2 == 0 else [])
        for kind, deg in cases:
            A = make_split(kind, deg, F3)
            if deg == 8 and kind != O:
                continue
            try:
                if classify_kind(A) != kind:
                    problems.append((kind, deg, "kind"))
                t = classical_type(A)
                got = (t.letter, t.rank)
            except NotAbsolutelySimple:
                got = "NotAbsolutelySimple"
            except ExcludedTriality:
                got = "ExcludedTriality"
            if kind == U:
                want = ("A", deg - 1) if deg >= 2 else "NotAbsolutelySimple"
            elif kind == S:
                want = ("C", deg // 2)
            elif deg == 8:
                want = "ExcludedTriality"
            elif deg in (2, 4) or deg == 1:
                want = "NotAbsolutelySimple"
            elif deg % 2:
                want = ("B", (deg - 1) // 2)
            else:
                want = ("D", deg // 2)
            if got != want:
                problems.append((kind.value, deg, got, want))
    record(2, not problems, "all split objects n' <= 8" if not problems else f"mismatches {problems}")
    assert not problems


# -- criterion 3 --

def test_criterion_3_aut_orders():
    t0 = time.time()
    out = {}
    for q in (3, 5):
        G = enumerate_aut_points(make_split(S, 2, PrimeField(q)))
        out[q] = (neutral_subgroup(G).order, classical_order("C", 1, q), q**3 - q)
    G = enumerate_aut_points(make_split(O, 2, F3))
    N = neutral_subgroup(G)
    elapsed = time.time() - t0
    passed = (out[3] == (24, 24, 24) and out[5] == (120, 120, 120) and G.order == 8
              and G.order // N.order == 2 and elapsed < 120)
    record(3, passed, f"sp2: {out}, tr2: order {G.order} index {G.order // N.order}, {elapsed:.1f}s")
    assert passed


# -- criterion 4 --

SPLIT_UP_TO_3 = [(O, 1), (O, 2), (O, 3), (S, 2), (U, 1), (U, 2), (U, 3)]


def _pullback_cases():
    R = ChainRing(F3, 2)
    out = {}
    for kind, n in SPLIT_UP_TO_3:
        for label, A, f in [("F3->F9", make_split(kind, n, F3), RingMap.extension(F3, F9)),
                            ("F3[t]/t^2->F3", make_split(kind, n, R), RingMap.residue(R))]:
            try:
                rep = check_pullback_commutes(A, f)
                out[(kind.value, n, label)] = (bool(rep), ",".join(rep.failures) or "ok")
            except AzumayaError as e:
                out[(kind.value, n, label)] = (False, f"{e.code}")
    return out


_PULLBACK = {}


def _pullback():
    if not _PULLBACK:
        _PULLBACK.update(_pullback_cases())
    return _PULLBACK


def test_criterion_4_feasible_subcases():
    bad = {k: v for k, v in _pullback().items() if not v[0] and not (k[0] == "unitary" and k[1] == 3)}
    assert not bad


@pytest.mark.xfail(strict=True, reason="unitary n'=3 target groups have ~8e7 points; enumeration exceeds the bound")
def test_criterion_4_pullback():
    res = _pullback()
    failed = {k: v[1] for k, v in res.items() if not v[0]}
    passed = not failed
    record(4, passed, f"{sum(v[0] for v in res.values())}/{len(res)} pass; failing: {failed}")
    assert passed


# -- criterion 5 --

def _orbit_labels(ctx, z1):
    G = ctx.group.elements
    labels = {}
    for a in z1:
        if a in labels:
            continue
        for b in G:
            labels[ctx.compose(ctx.compose(b, a), ctx.inverse(ctx.galois_point(b)))] = a
    return labels


def test_criterion_5_descent_round_trip():
    t0 = time.time()
    E = GaloisExtension.of(3, 2)
    problems = []
    counts = {}
    for kind in (O, S, U):
        A = make_split(kind, 2, F3)
        ctx = SplitOverL(A, E)
        triv = twist_algebra(A, Cocycle(A, E, ctx.identity), E)
        if not triv.verify() or is_isomorphic(triv.result, A) is None:
            problems.append((kind.value, "trivial"))
        z1 = [c.value for c in cocycle_set(A, E)]
        labels = _orbit_labels(ctx, z1)
        forms = {a: twist_algebra(A, Cocycle(A, E, a), E) for a in z1}
        for a in z1:
            if not forms[a].verify():
                problems.append((kind.value, "witness", a))
        for a, b in itertools.combinations(z1, 2):
            iso = is_isomorphic(forms[a].result, forms[b].result) is not None
            if iso != (labels[a] == labels[b]):
                problems.append((kind.value, "iso/cohomologous", a, b))
        counts[kind.value] = (len(z1), len(set(labels.values())))
    elapsed = time.time() - t0
    passed = not problems and elapsed < 300
    record(5, passed, f"(|Z1|, classes) {counts}, {elapsed:.1f}s")
    assert passed, problems[:5]


# -- criterion 6 --

_EQUIV = {}
_EQUIV_TIME = []


def _equiv():
    if not _EQUIV:
        t0 = time.time()
        E = GaloisExtension.of(3, 2)
        for t in [("A", 1, 2), ("C", 1, 2), ("B", 1, 3)]:
            _EQUIV[t] = check_band_and_equivalence(ClassicalType(*t), F3, E)
        _EQUIV_TIME.append(time.time() - t0)
    return _EQUIV


def test_criterion_6_types_b_and_c():
    res = _equiv()
    assert res[("C", 1, 2)].passed and res[("B", 1, 3)].passed


@pytest.mark.xfail(strict=True, reason="type A at degree 2: the outer automorphism acts trivially on PGL_2")
def test_criterion_6_equivalence():
    res = _equiv()
    elapsed = _EQUIV_TIME[0]
    detail = "; ".join(f"{t[0]}{t[1]}: {'ok' if r.passed else r.failures}" for t, r in res.items())
    passed = all(r.passed for r in res.values()) and elapsed < 600
    record(6, passed, f"{detail}, {elapsed:.1f}s")
    assert passed


# -- criterion 7 --

def test_criterion_7_specialization():
    t0 = time.time()
    out = {}
    for m in (2, 3):
        R = ChainRing(F3, m)
        for kind, n in [("orthogonal", 2), ("orthogonal", 3), ("symplectic", 2), ("unitary", 2)]:
            rep = check_specialization_bijection(kind, n, R)
            out[(kind, n, m)] = (rep.bijective, len(rep.classesOverR), len(rep.classesOverK))
    elapsed = time.time() - t0
    passed = all(v[0] for v in out.values()) and elapsed < 600
    record(7, passed, f"{sum(v[0] for v in out.values())}/{len(out)} bijective, {elapsed:.1f}s")
    assert passed, out


# -- criterion 8 --

def test_criterion_8_unitary_decomposition():
    E = QuadraticEtale.field_over(F3)
    A = adjoint_involution(((1, 0), (0, 2)), U, E)
    AL = base_change(A, RingMap.extension(F3, F9))
    dec = unitary_split_decomposition(AL)
    rep = dec.verify()
    T = AL.total
    e = dec.idempotent
    passed = bool(rep) and AL.conj(e) == T.sub(T.one, e)
    record(8, passed, f"decomposition {'verified' if rep else rep.failures}, conj(e) = 1 - e: "
                      f"{AL.conj(e) == T.sub(T.one, e)}")
    assert passed


# -- criterion 9 --

def _run_cli(sub, path):
    return subprocess.run([sys.executable, "-m", "azumaya", sub, "--input", str(path)], capture_output=True)


def _algebras_in(obj):
    if isinstance(obj, dict):
        if {"ring", "center", "degree", "involution"} <= set(obj):
            yield obj
        for v in obj.values():
            yield from _algebras_in(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _algebras_in(v)


def test_criterion_9_cli_determinism(tmp_path):
    files = sorted(EXAMPLES.glob("*.json"))
    problems = []
    subs = set()
    for f in files:
        ex = json.loads(f.read_text())
        sub, payload = ex["subcommand"], ex["payload"]
        subs.add(sub)
        validate(PAYLOAD_SCHEMAS[sub], payload)
        p = tmp_path / f.name
        p.write_text(json.dumps(payload))
        a, b = _run_cli(sub, p), _run_cli(sub, p)
        if a.stdout != b.stdout or a.returncode != b.returncode:
            problems.append((f.name, "nondeterministic"))
            continue
        doc = json.loads(a.stdout)
        validate(ENVELOPE_SCHEMA, doc)
        if doc["ok"]:
            validate(RESULT_SCHEMAS[sub], doc["result"])
        if dumps(doc).encode() != a.stdout:
            problems.append((f.name, "round trip"))
        for alg in _algebras_in(doc):
            if algebra_from_json(alg).to_json() != alg:
                problems.append((f.name, "algebra round trip"))
    passed = not problems and subs == set(PAYLOAD_SCHEMAS)
    record(9, passed, f"{len(files)} examples over {len(subs)} subcommands, byte-identical"
           if passed else f"{problems}, covered {sorted(subs)}")
    assert passed
