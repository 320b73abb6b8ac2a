"""Row-by-row search for similitudes ``c * src * conj(c)^T = lam * tgt``.

Both automorphism enumeration and isomorphism testing reduce to this search.
Row ``i`` of ``c`` must satisfy ``B(c_i, c_j) = lam * tgt[i][j]`` for every
earlier row ``j`` (and the mirrored equation) where
``B(r, s) = r * src * conj(s)^T``.  All candidate rows are held in one numpy
array and filtered with the ring's operation tables, so each node of the
search costs a handful of vectorized passes.  Only rows whose first unit
entry is one are allowed in position 0, which picks one representative per
class of scalar multiples.
"""
from __future__ import annotations

import numpy as np

from .errors import TooLarge
from .exactring import ProductRing, check_bound, enumeration_bound

_ROW_CACHE = {}


def all_rows(T, n):
    key = (T, n)
    if key not in _ROW_CACHE:
        N = T.size**n
        check_bound(N, f"rows of length {n} over {T.describe()}")
        idx = np.arange(N, dtype=np.int64)
        cols = []
        for _ in range(n):
            idx, r = np.divmod(idx, T.size)
            cols.append(r)
        # column 0 varies slowest so row order is lexicographic in codes
        _ROW_CACHE[key] = np.stack(cols[::-1], axis=1)
    return _ROW_CACHE[key]


def normalized_mask(T, rows):
    """Rows whose first unit entry is one (factorwise over a product ring)."""
    if isinstance(T, ProductRing):
        left, right = rows % T.left.size, rows // T.left.size
        return normalized_mask(T.left, left) & normalized_mask(T.right, right)
    unit = T.unit_np[rows]
    has = unit.any(axis=1)
    first = unit.argmax(axis=1)
    val = rows[np.arange(len(rows)), first]
    return has & (val == T.one)


def search(T, conj, src, tgt, multipliers, *, first_only=False):
    """All normalized ``(c, lam)`` with ``c src conj(c)^T = lam tgt``.

    ``conj`` is a numpy lookup array on codes of ``T`` (the identity for
    first-kind problems); ``multipliers`` are the allowed codes of ``lam``.
    Raises TooLarge when the candidate rows or the estimated number of
    solutions exceed the enumeration bound.
    """
    n = len(src)
    rows = all_rows(T, n)
    add, mul = T.add_np, T.mul_np
    crow = conj[rows]
    N = len(rows)
    zero = np.zeros(N, dtype=np.int64)

    quad = zero.copy()
    for k in range(n):
        inner = zero.copy()
        for l in range(n):
            if src[k][l]:
                inner = add[inner, mul[src[k][l], crow[:, l]]]
        quad = add[quad, mul[rows[:, k], inner]]
    norm0 = normalized_mask(T, rows)

    def left_form(s):
        # B(rows, s)
        cs = [int(conj[x]) for x in s]
        acc = zero.copy()
        for k in range(n):
            v = T.sum(T.mul(src[k][l], cs[l]) for l in range(n))
            if v:
                acc = add[acc, mul[rows[:, k], v]]
        return acc

    def right_form(s):
        # B(s, rows)
        acc = zero.copy()
        for l in range(n):
            w = T.sum(T.mul(s[k], src[k][l]) for k in range(n))
            if w:
                acc = add[acc, mul[w, crow[:, l]]]
        return acc

    bound = enumeration_bound()
    results = []
    estimate = [len(multipliers), 0]

    class _Done(Exception):
        pass

    def descend(lam, i, chosen, forms, target):
        mask = quad == target[i][i]
        if i == 0:
            mask &= norm0
        for j, (lf, rf) in enumerate(forms):
            mask &= (lf == target[i][j]) & (rf == target[j][i])
        cand = np.flatnonzero(mask)
        if estimate[1] == i:
            # leftmost-path size estimate of the whole search tree
            estimate[0] *= max(len(cand), 1)
            estimate[1] += 1
            if estimate[0] > bound:
                raise TooLarge(f"similitude search over {T.describe()} in degree {n} "
                               f"is estimated at {estimate[0]} solutions, bound is {bound}")
        for idx in cand:
            row = tuple(int(x) for x in rows[idx])
            if i == n - 1:
                results.append((tuple(chosen) + (row,), lam))
                if first_only:
                    raise _Done
                if len(results) > bound:
                    raise TooLarge(f"more than {bound} similitudes")
                continue
            descend(lam, i + 1, chosen + [row], forms + [(left_form(row), right_form(row))], target)

    try:
        for lam in multipliers:
            target = [[T.mul(lam, x) for x in r] for r in tgt]
            descend(lam, 0, [], [], target)
    except _Done:
        pass
    return results
