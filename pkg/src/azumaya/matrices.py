"""Dense matrices over a finite ring, stored as tuples of tuples of codes."""
from __future__ import annotations

import itertools

from .errors import NotAUnit
from .exactring import ProductRing


def identity(R, n):
    return tuple(tuple(R.one if i == j else 0 for j in range(n)) for i in range(n))


def zeros(n):
    return tuple((0,) * n for _ in range(n))


def unit_matrix(n, i, j, s=1):
    return tuple(tuple(s if (a, b) == (i, j) else 0 for b in range(n)) for a in range(n))


def freeze(rows):
    return tuple(tuple(int(x) for x in r) for r in rows)


def transpose(A):
    return tuple(zip(*A))


def emap(f, A):
    return tuple(tuple(f(x) for x in row) for row in A)


def add(R, A, B):
    return tuple(tuple(R.add(x, y) for x, y in zip(r, s)) for r, s in zip(A, B))


def sub(R, A, B):
    return tuple(tuple(R.sub(x, y) for x, y in zip(r, s)) for r, s in zip(A, B))


def scale(R, s, A):
    return tuple(tuple(R.mul(s, x) for x in row) for row in A)


def mul(R, A, B):
    Bt = tuple(zip(*B))
    m, a = R.mul_rows, R.add_rows
    if m is None:
        return tuple(tuple(R.sum(R.mul(x, y) for x, y in zip(row, col)) for col in Bt) for row in A)
    out = []
    for row in A:
        new = []
        for col in Bt:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = a[acc][m[x][y]]
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mul_many(R, *Ms):
    out = Ms[0]
    for M in Ms[1:]:
        out = mul(R, out, M)
    return out


def is_scalar(A):
    n = len(A)
    return all(A[i][j] == (A[0][0] if i == j else 0) for i in range(n) for j in range(n))


def _components(R, A):
    return emap(lambda x: R.split(x)[0], A), emap(lambda x: R.split(x)[1], A)


def _join(R, L, Rm):
    return tuple(tuple(R.join(x, y) for x, y in zip(r, s)) for r, s in zip(L, Rm))


def inverse(R, A):
    """Inverse over a local ring or a product of local rings; NotAUnit if singular."""
    if isinstance(R, ProductRing):
        L, Rr = _components(R, A)
        return _join(R, inverse(R.left, L), inverse(R.right, Rr))
    n = len(A)
    M = [list(row) + list(e) for row, e in zip(A, identity(R, n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if R.is_unit(M[r][col])), None)
        if piv is None:
            raise NotAUnit("matrix is not invertible")
        M[col], M[piv] = M[piv], M[col]
        s = R.inv(M[col][col])
        M[col] = [R.mul(s, x) for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def is_invertible(R, A):
    try:
        inverse(R, A)
    except NotAUnit:
        return False
    return True


def _perm_sign(perm):
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det(R, A):
    n = len(A)
    if n == 0:
        return R.one
    if isinstance(R, ProductRing):
        L, Rr = _components(R, A)
        return R.join(det(R.left, L), det(R.right, Rr))
    if n <= 4:
        total = 0
        for perm in itertools.permutations(range(n)):
            term = R.one
            for i, j in enumerate(perm):
                term = R.mul(term, A[i][j])
                if not term:
                    break
            if term:
                total = R.add(total, term) if _perm_sign(perm) > 0 else R.sub(total, term)
        return total
    # elimination with unit pivots; a column without one means det is not a unit,
    # in which case fall back to the expansion
    M = [list(r) for r in A]
    d = R.one
    for col in range(n):
        piv = next((r for r in range(col, n) if R.is_unit(M[r][col])), None)
        if piv is None:
            return _det_expand(R, A)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            d = R.neg(d)
        d = R.mul(d, M[col][col])
        s = R.inv(M[col][col])
        for r in range(col + 1, n):
            if M[r][col]:
                f = R.mul(M[r][col], s)
                M[r] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[r], M[col])]
    return d


def _det_expand(R, A):
    n = len(A)
    if n == 1:
        return A[0][0]
    total = 0
    for j in range(n):
        if A[0][j]:
            minor = tuple(tuple(r[:j] + r[j + 1:]) for r in A[1:])
            term = R.mul(A[0][j], _det_expand(R, minor))
            total = R.add(total, term) if j % 2 == 0 else R.sub(total, term)
    return total


def first_unit_position(R, A):
    for i, row in enumerate(A):
        for j, x in enumerate(row):
            if R.is_unit(x):
                return i, j
    return None


def normalizing_scalar(R, A):
    """Unit ``s`` such that ``s*A`` has its first unit entry equal to one.

    Over a product ring each factor is normalized on its own.
    """
    if isinstance(R, ProductRing):
        L, Rr = _components(R, A)
        return R.join(normalizing_scalar(R.left, L), normalizing_scalar(R.right, Rr))
    pos = first_unit_position(R, A)
    if pos is None:
        raise NotAUnit("matrix has no unit entry")
    return R.inv(A[pos[0]][pos[1]])


def normalize(R, A):
    return scale(R, normalizing_scalar(R, A), A)


def flat(A):
    return tuple(x for row in A for x in row)


def to_json(R, A):
    return [[R.element_to_json(x) for x in row] for row in A]


def from_json(R, data):
    return tuple(tuple(R.element_from_json(x) for x in row) for row in data)


# -- linear algebra over a field (codes) --

def row_reduce(F, rows):
    """Reduced row echelon form over the field ``F``; returns (rows, pivot columns)."""
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        s = F.inv(M[r][c])
        M[r] = [F.mul(s, x) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(F, rows):
    return len(row_reduce(F, rows)[1]) if rows else 0


def nullspace(F, rows, ncols):
    """Basis of ``{v : rows . v = 0}`` over the field ``F``."""
    if not rows:
        return [[F.one if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    R, pivots = row_reduce(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = F.one
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[f])
        basis.append(v)
    return basis
