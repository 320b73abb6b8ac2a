"""Exact arithmetic over the finite rings the package works over.

Supported rings are odd prime fields, their finite extensions, products of two
rings and chain rings ``k[t]/(t^m)`` over a field ``k``.  Every ring encodes
its elements as integer codes ``0 .. size-1`` (``0`` is always zero); the
``RingElement`` wrapper gives them operators and coordinates.  Small rings
cache full operation tables so the enumeration code can work with numpy.
"""
from __future__ import annotations

import itertools
from contextlib import contextmanager
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import IncompatibleRings, InvalidRing, NotAUnit, TooLarge, Unsupported

_bound = 10**6

# rings up to this size get precomputed operation tables
TABLE_LIMIT = 1024


def enumeration_bound():
    return _bound


def set_enumeration_bound(n):
    global _bound
    if n < 1:
        raise ValueError("enumeration bound must be positive")
    _bound = int(n)


@contextmanager
def bound_override(n):
    old = _bound
    set_enumeration_bound(n)
    try:
        yield
    finally:
        set_enumeration_bound(old)


def check_bound(count, what="enumeration"):
    if count > _bound:
        raise TooLarge(f"{what} needs {count} items, bound is {_bound}")


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- polynomials over F_p, coefficient lists with the constant term first --

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = [c % p for c in a]
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return _poly_trim(a[:dm])


def _monic_polys(p, deg):
    for tail in itertools.product(range(p), repeat=deg):
        yield list(tail) + [1]


def is_irreducible(modulus, p):
    modulus = [c % p for c in modulus]
    deg = len(modulus) - 1
    if deg < 1 or modulus[-1] != 1:
        return False
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(modulus, f, p):
                return False
    return True


def canonical_modulus(p, k):
    """Least monic irreducible of degree ``k`` (base-``p`` order, constant first)."""
    if k == 1:
        return [0, 1]
    candidates = sorted(_monic_polys(p, k), key=lambda f: sum(c * p**i for i, c in enumerate(f)))
    for f in candidates:
        if is_irreducible(f, p):
            return f
    raise InvalidRing(f"no irreducible polynomial of degree {k} over F_{p}")


class Ring:
    """Common machinery; subclasses define the arithmetic on codes."""

    size: int
    p: int
    one: int

    # -- subclass hooks --
    def _add(self, a, b):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    def _inv(self, a):
        """Inverse code or None for non-units."""
        raise NotImplementedError

    # -- tables --
    @cached_property
    def has_tables(self):
        return self.size <= TABLE_LIMIT

    @cached_property
    def add_rows(self):
        n = self.size
        return [[self._add(a, b) for b in range(n)] for a in range(n)] if self.has_tables else None

    @cached_property
    def mul_rows(self):
        n = self.size
        return [[self._mul(a, b) for b in range(n)] for a in range(n)] if self.has_tables else None

    @cached_property
    def neg_list(self):
        return [self._neg(a) for a in range(self.size)] if self.has_tables else None

    @cached_property
    def inv_list(self):
        if not self.has_tables:
            return None
        return [-1 if (x := self._inv(a)) is None else x for a in range(self.size)]

    def _require_tables(self):
        if not self.has_tables:
            raise TooLarge(f"ring of size {self.size} is too large for table-driven enumeration")

    @cached_property
    def add_np(self):
        self._require_tables()
        return np.array(self.add_rows, dtype=np.int64)

    @cached_property
    def mul_np(self):
        self._require_tables()
        return np.array(self.mul_rows, dtype=np.int64)

    @cached_property
    def neg_np(self):
        self._require_tables()
        return np.array(self.neg_list, dtype=np.int64)

    @cached_property
    def unit_np(self):
        self._require_tables()
        return np.array([x >= 0 for x in self.inv_list], dtype=bool)

    @cached_property
    def frob_np(self):
        self._require_tables()
        return np.array([self.frobenius(a) for a in range(self.size)], dtype=np.int64)

    # -- arithmetic on codes --
    def add(self, a, b):
        t = self.add_rows
        return t[a][b] if t is not None else self._add(a, b)

    def mul(self, a, b):
        t = self.mul_rows
        return t[a][b] if t is not None else self._mul(a, b)

    def neg(self, a):
        t = self.neg_list
        return t[a] if t is not None else self._neg(a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def inv(self, a):
        t = self.inv_list
        r = t[a] if t is not None else self._inv(a)
        if r is None or r < 0:
            raise NotAUnit(f"{self.element_to_json(a)} is not a unit in {self.describe()}")
        return r

    def is_unit(self, a):
        t = self.inv_list
        if t is not None:
            return t[a] >= 0
        return self._inv(a) is not None

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def from_int(self, n):
        n %= self.p
        r = 0
        for _ in range(n):
            r = self.add(r, self.one)
        return r

    def sum(self, codes):
        r = 0
        for c in codes:
            r = self.add(r, c)
        return r

    # -- elements --
    def __call__(self, x):
        return RingElement(self, self.code_of(x))

    def code_of(self, x):
        if isinstance(x, RingElement):
            if x.owner != self:
                raise IncompatibleRings(f"element of {x.owner.describe()} used in {self.describe()}")
            return x.code
        if isinstance(x, int):
            return self.from_int(x)
        return self.encode(x)

    def elements(self):
        check_bound(self.size, f"elements of {self.describe()}")
        return [RingElement(self, c) for c in range(self.size)]

    def units(self):
        return [e for e in self.elements() if self.is_unit(e.code)]

    def unit_codes(self):
        check_bound(self.size, f"elements of {self.describe()}")
        return [c for c in range(self.size) if self.is_unit(c)]

    # -- structure used elsewhere --
    @property
    def is_field(self):
        return False

    @property
    def is_local(self):
        return True

    def frobenius(self, a):
        """Coefficientwise p-power Frobenius (fixes ``t`` in chain rings)."""
        raise NotImplementedError

    def residue(self, a):
        return a

    @property
    def residue_field(self):
        return self

    def is_square(self, a):
        """Whether the unit ``a`` is a square."""
        rf = self.residue_field
        r = self.residue(a)
        q = rf.size
        return rf.pow(r, (q - 1) // 2) == rf.one

    def describe(self):
        return repr(self)

    def element_to_json(self, a):
        raise NotImplementedError

    def element_from_json(self, data):
        raise NotImplementedError

    def prime_coords(self, a):
        """Coordinates of ``a`` as a vector over the prime field."""
        raise NotImplementedError

    def from_prime_coords(self, v):
        raise NotImplementedError

    @property
    def prime_dim(self):
        raise NotImplementedError


@dataclass(frozen=True)
class PrimeField(Ring):
    p: int

    def __post_init__(self):
        if self.p == 2:
            raise InvalidRing("characteristic 2 is not supported (2 must be invertible)")
        if not is_prime(self.p):
            raise InvalidRing(f"{self.p} is not an odd prime")

    @property
    def size(self):
        return self.p

    @property
    def one(self):
        return 1

    @property
    def is_field(self):
        return True

    def _add(self, a, b):
        return (a + b) % self.p

    def _mul(self, a, b):
        return a * b % self.p

    def _neg(self, a):
        return -a % self.p

    def _inv(self, a):
        return pow(a, self.p - 2, self.p) if a % self.p else None

    def frobenius(self, a):
        return a

    def encode(self, x):
        if isinstance(x, (list, tuple)):
            (x,) = x
        return int(x) % self.p

    def decode(self, a):
        return a

    def describe(self):
        return f"F_{self.p}"

    def to_json(self):
        return {"kind": "prime", "p": self.p}

    def element_to_json(self, a):
        return [a]

    def element_from_json(self, data):
        if isinstance(data, list):
            if len(data) != 1:
                raise InvalidRing(f"prime field element must have one coordinate: {data}")
            data = data[0]
        return int(data) % self.p

    def prime_coords(self, a):
        return [a]

    def from_prime_coords(self, v):
        return v[0] % self.p

    @property
    def prime_dim(self):
        return 1


@dataclass(frozen=True)
class ExtensionField(Ring):
    p: int
    k: int
    modulus: tuple

    def __post_init__(self):
        PrimeField(self.p)
        mod = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if self.k < 1 or len(mod) != self.k + 1 or mod[-1] != 1:
            raise InvalidRing(f"modulus {list(mod)} is not monic of degree {self.k}")
        if not is_irreducible(mod, self.p):
            raise InvalidRing(f"modulus {list(mod)} is reducible over F_{self.p}")

    @classmethod
    def canonical(cls, p, k):
        return cls(p, k, tuple(canonical_modulus(p, k)))

    @property
    def size(self):
        return self.p ** self.k

    @property
    def one(self):
        return 1

    @property
    def is_field(self):
        return True

    def decode(self, a):
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def encode(self, coords):
        coords = list(coords)
        if len(coords) > self.k:
            coords = _poly_mod(coords, list(self.modulus), self.p)
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coords))

    def _add(self, a, b):
        return self.encode(x + y for x, y in zip(self.decode(a), self.decode(b)))

    def _neg(self, a):
        return self.encode(-x for x in self.decode(a))

    def _mul(self, a, b):
        x, y = self.decode(a), self.decode(b)
        prod = [0] * (2 * self.k - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        return self.encode(_poly_mod(prod, list(self.modulus), self.p))

    def _inv(self, a):
        if a == 0:
            return None
        return self.pow(a, self.size - 2)

    def frobenius(self, a):
        return self.pow(a, self.p)

    def generator(self):
        """Code of the class of ``x``."""
        return self.encode([0, 1]) if self.k > 1 else self.encode([-self.modulus[0]])

    def describe(self):
        return f"F_{self.p}^{self.k}[{list(self.modulus)}]"

    def to_json(self):
        return {"kind": "ext", "p": self.p, "deg": self.k, "modulus": list(self.modulus)}

    def element_to_json(self, a):
        return list(self.decode(a))

    def element_from_json(self, data):
        if isinstance(data, int):
            return self.from_int(data)
        if len(data) != self.k:
            raise InvalidRing(f"extension element needs {self.k} coordinates: {data}")
        return self.encode(data)

    def prime_coords(self, a):
        return list(self.decode(a))

    def from_prime_coords(self, v):
        return self.encode(v)

    @property
    def prime_dim(self):
        return self.k


@dataclass(frozen=True)
class ProductRing(Ring):
    left: Ring
    right: Ring

    def __post_init__(self):
        if self.left.p != self.right.p:
            raise InvalidRing("product factors must share the characteristic")

    @property
    def p(self):
        return self.left.p

    @property
    def size(self):
        return self.left.size * self.right.size

    @property
    def one(self):
        return self.join(self.left.one, self.right.one)

    @property
    def is_local(self):
        return False

    def split(self, a):
        r, l = divmod(a, self.left.size)
        return l, r

    def join(self, l, r):
        return l + self.left.size * r

    def decode(self, a):
        l, r = self.split(a)
        return (self.left.decode(l), self.right.decode(r))

    def encode(self, coords):
        l, r = coords
        return self.join(self.left.code_of(l), self.right.code_of(r))

    def from_int(self, n):
        return self.join(self.left.from_int(n), self.right.from_int(n))

    def _add(self, a, b):
        (al, ar), (bl, br) = self.split(a), self.split(b)
        return self.join(self.left.add(al, bl), self.right.add(ar, br))

    def _mul(self, a, b):
        (al, ar), (bl, br) = self.split(a), self.split(b)
        return self.join(self.left.mul(al, bl), self.right.mul(ar, br))

    def _neg(self, a):
        l, r = self.split(a)
        return self.join(self.left.neg(l), self.right.neg(r))

    def _inv(self, a):
        l, r = self.split(a)
        if not (self.left.is_unit(l) and self.right.is_unit(r)):
            return None
        return self.join(self.left.inv(l), self.right.inv(r))

    def frobenius(self, a):
        l, r = self.split(a)
        return self.join(self.left.frobenius(l), self.right.frobenius(r))

    def is_square(self, a):
        l, r = self.split(a)
        return self.left.is_square(l) and self.right.is_square(r)

    def residue(self, a):
        raise Unsupported("product rings are not local")

    @property
    def residue_field(self):
        raise Unsupported("product rings are not local")

    def describe(self):
        return f"({self.left.describe()} x {self.right.describe()})"

    def to_json(self):
        return {"kind": "product", "parts": [self.left.to_json(), self.right.to_json()]}

    def element_to_json(self, a):
        l, r = self.split(a)
        return [self.left.element_to_json(l), self.right.element_to_json(r)]

    def element_from_json(self, data):
        if isinstance(data, int):
            return self.from_int(data)
        l, r = data
        return self.join(self.left.element_from_json(l), self.right.element_from_json(r))

    def prime_coords(self, a):
        l, r = self.split(a)
        return self.left.prime_coords(l) + self.right.prime_coords(r)

    def from_prime_coords(self, v):
        d = self.left.prime_dim
        return self.join(self.left.from_prime_coords(v[:d]), self.right.from_prime_coords(v[d:]))

    @property
    def prime_dim(self):
        return self.left.prime_dim + self.right.prime_dim


@dataclass(frozen=True)
class ChainRing(Ring):
    """``base[t]/(t^m)`` for a finite field ``base``; local with residue field ``base``."""

    base: Ring
    m: int

    def __post_init__(self):
        if not self.base.is_field:
            raise InvalidRing("chain ring base must be a field")
        if self.m < 1:
            raise InvalidRing("nilpotency length must be at least 1")

    @property
    def p(self):
        return self.base.p

    @property
    def size(self):
        return self.base.size ** self.m

    @property
    def one(self):
        return self.base.one

    def coeffs(self, a):
        q = self.base.size
        out = []
        for _ in range(self.m):
            a, r = divmod(a, q)
            out.append(r)
        return out

    def from_coeffs(self, cs):
        q = self.base.size
        return sum(c * q**i for i, c in enumerate(cs))

    def decode(self, a):
        return tuple(self.base.decode(c) for c in self.coeffs(a))

    def encode(self, coords):
        coords = list(coords)
        if len(coords) > self.m:
            coords = coords[: self.m]
        cs = [self.base.code_of(c) for c in coords] + [0] * (self.m - len(coords))
        return self.from_coeffs(cs)

    def from_int(self, n):
        return self.base.from_int(n)

    def t(self):
        """Code of the uniformizer ``t`` (zero when ``m == 1``)."""
        return self.from_coeffs([0, self.base.one] + [0] * (self.m - 2)) if self.m > 1 else 0

    def _add(self, a, b):
        B = self.base
        return self.from_coeffs([B.add(x, y) for x, y in zip(self.coeffs(a), self.coeffs(b))])

    def _neg(self, a):
        return self.from_coeffs([self.base.neg(x) for x in self.coeffs(a)])

    def _mul(self, a, b):
        B = self.base
        x, y = self.coeffs(a), self.coeffs(b)
        out = [0] * self.m
        for i, xi in enumerate(x):
            if xi:
                for j in range(self.m - i):
                    out[i + j] = B.add(out[i + j], B.mul(xi, y[j]))
        return self.from_coeffs(out)

    def _inv(self, a):
        c0 = self.coeffs(a)[0]
        if c0 == 0:
            return None
        # Newton iteration u <- u(2 - a u), doubling the t-adic precision each round
        u = self.base.inv(c0)
        two = self.from_int(2)
        prec = 1
        while prec < self.m:
            u = self._mul(u, self._add(two, self._neg(self._mul(a, u))))
            prec *= 2
        return u

    def frobenius(self, a):
        return self.from_coeffs([self.base.frobenius(c) for c in self.coeffs(a)])

    def residue(self, a):
        return self.coeffs(a)[0]

    @property
    def residue_field(self):
        return self.base

    def lift(self, c):
        """Literal lift of a residue code (constant polynomial)."""
        return c

    def describe(self):
        return f"{self.base.describe()}[t]/(t^{self.m})"

    def to_json(self):
        return {"kind": "chain", "m": self.m, "parts": [self.base.to_json()]}

    def element_to_json(self, a):
        return [self.base.element_to_json(c) for c in self.coeffs(a)]

    def element_from_json(self, data):
        if isinstance(data, int):
            return self.from_int(data)
        if len(data) > self.m:
            raise InvalidRing(f"chain ring element has more than {self.m} coefficients: {data}")
        cs = [self.base.element_from_json(c) for c in data] + [0] * (self.m - len(data))
        return self.from_coeffs(cs)

    def prime_coords(self, a):
        out = []
        for c in self.coeffs(a):
            out += self.base.prime_coords(c)
        return out

    def from_prime_coords(self, v):
        d = self.base.prime_dim
        return self.from_coeffs([self.base.from_prime_coords(v[i * d:(i + 1) * d]) for i in range(self.m)])

    @property
    def prime_dim(self):
        return self.base.prime_dim * self.m


def ring_from_json(data):
    kind = data.get("kind")
    if kind == "prime":
        return PrimeField(int(data["p"]))
    if kind == "ext":
        p, k = int(data["p"]), int(data["deg"])
        if "modulus" in data:
            return ExtensionField(p, k, tuple(data["modulus"]))
        return ExtensionField.canonical(p, k)
    if kind == "product":
        left, right = data["parts"]
        return ProductRing(ring_from_json(left), ring_from_json(right))
    if kind == "chain":
        (base,) = data["parts"]
        return ChainRing(ring_from_json(base), int(data["m"]))
    raise InvalidRing(f"unknown ring kind {kind!r}")


@dataclass(frozen=True, eq=True)
class RingElement:
    owner: Ring
    code: int

    @property
    def coordinates(self):
        return self.owner.decode(self.code)

    def _other(self, other):
        if isinstance(other, int):
            return self.owner.from_int(other)
        if not isinstance(other, RingElement):
            return NotImplemented
        if other.owner != self.owner:
            raise IncompatibleRings(f"{self.owner.describe()} vs {other.owner.describe()}")
        return other.code

    def __add__(self, other):
        b = self._other(other)
        return RingElement(self.owner, self.owner.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return RingElement(self.owner, self.owner.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        return RingElement(self.owner, self.owner.sub(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        return RingElement(self.owner, self.owner.mul(self.code, b))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElement(self.owner, self.owner.neg(self.code))

    def __pow__(self, e):
        return RingElement(self.owner, self.owner.pow(self.code, e))

    def inverse(self):
        return RingElement(self.owner, self.owner.inv(self.code))

    def is_unit(self):
        return self.owner.is_unit(self.code)

    def to_json(self):
        return self.owner.element_to_json(self.code)

    def __repr__(self):
        return f"{self.owner.describe()}({self.to_json()})"


def ring_arith(a, b, op):
    if a.owner != b.owner:
        raise IncompatibleRings(f"{a.owner.describe()} vs {b.owner.describe()}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def invert(a):
    return a.inverse()


def enumerate_elements(R):
    return R.elements()


def enumerate_units(R):
    return R.units()


def subfield_embedding(src, dst):
    """Code map embedding the field ``src`` into the field ``dst`` (same p)."""
    if src == dst:
        return lambda a: a
    if src.p != dst.p:
        raise IncompatibleRings("fields of different characteristic")
    if isinstance(src, PrimeField):
        return dst.from_int
    if isinstance(dst, PrimeField) or dst.k % src.k:
        raise IncompatibleRings(f"{src.describe()} does not embed in {dst.describe()}")
    # first root of src's modulus in dst, in code order
    mod = src.modulus
    for r in range(dst.size):
        acc = 0
        for c in reversed(mod):
            acc = dst.add(dst.mul(acc, r), dst.from_int(c))
        if acc == 0:
            root = r
            break

    def embed(a):
        acc = 0
        for c in reversed(src.decode(a)):
            acc = dst.add(dst.mul(acc, root), dst.from_int(c))
        return acc

    return embed


@dataclass(frozen=True)
class QuadraticEtale:
    """Degree-2 étale extension ``total`` of ``base`` with its conjugation.

    ``split`` selects between ``base x base`` with the exchange and a field
    (or chain ring over a field) with the coefficient Frobenius.
    """

    base: Ring
    total: Ring
    split: bool

    def __post_init__(self):
        if self.split:
            if self.total != ProductRing(self.base, self.base):
                raise InvalidRing("split étale total must be base x base")
        else:
            b, t = self.base, self.total
            if isinstance(b, PrimeField):
                ok = isinstance(t, ExtensionField) and t.p == b.p and t.k == 2
            elif isinstance(b, ChainRing) and isinstance(b.base, PrimeField):
                ok = (isinstance(t, ChainRing) and t.m == b.m and isinstance(t.base, ExtensionField)
                      and t.base.k == 2 and t.p == b.p)
            else:
                raise Unsupported(f"non-split quadratic extension of {b.describe()} is not supported")
            if not ok:
                raise InvalidRing(f"{t.describe()} is not a quadratic extension of {b.describe()}")

    @classmethod
    def split_over(cls, base):
        return cls(base, ProductRing(base, base), True)

    @classmethod
    def field_over(cls, base, total=None):
        if total is None:
            if isinstance(base, PrimeField):
                total = ExtensionField.canonical(base.p, 2)
            elif isinstance(base, ChainRing) and isinstance(base.base, PrimeField):
                total = ChainRing(ExtensionField.canonical(base.p, 2), base.m)
            else:
                raise Unsupported(f"non-split quadratic extension of {base.describe()} is not supported")
        return cls(base, total, False)

    def conj(self, a):
        if self.split:
            l, r = self.total.split(a)
            return self.total.join(r, l)
        return self.total.frobenius(a)

    @cached_property
    def conj_np(self):
        return np.array([self.conj(a) for a in range(self.total.size)], dtype=np.int64)

    def embed(self, a):
        """Image of a base code in the total ring."""
        if self.split:
            return self.total.join(a, a)
        if isinstance(self.base, PrimeField):
            return a
        return self.total.from_coeffs(self.base.coeffs(a))

    def module_basis(self):
        """Codes of a base-module basis of the total ring."""
        T = self.total
        if self.split:
            return [T.join(self.base.one, 0), T.join(0, self.base.one)]
        if isinstance(T, ExtensionField):
            return [T.one, T.generator()]
        return [T.one, T.from_coeffs([T.base.generator()] + [0] * (T.m - 1))]

    def fixed_codes(self):
        return [a for a in range(self.total.size) if self.conj(a) == a]

    def embedded_base(self):
        return sorted(self.embed(a) for a in range(self.base.size))

    def describe(self):
        return f"{'split' if self.split else 'field'}({self.total.describe()}/{self.base.describe()})"

    def to_json(self):
        d = {"kind": "split" if self.split else "field", "base": self.base.to_json()}
        if not self.split:
            d["total"] = self.total.to_json()
        return d


def etale_from_json(data):
    base = ring_from_json(data["base"])
    if data["kind"] == "split":
        return QuadraticEtale.split_over(base)
    if data["kind"] == "field":
        total = ring_from_json(data["total"]) if "total" in data else None
        return QuadraticEtale.field_over(base, total)
    raise InvalidRing(f"unknown étale kind {data['kind']!r}")


def conjugate(E, a):
    if isinstance(a, RingElement):
        if a.owner != E.total:
            raise IncompatibleRings("element is not in the étale total ring")
        return RingElement(E.total, E.conj(a.code))
    return E.conj(a)


@dataclass(frozen=True)
class RingMap:
    """One of the canonical maps out of a base ring.

    kinds: ``identity``, ``extension`` (prime field or chain ring over it into
    the same construction over a larger field), ``residue`` (chain ring onto
    its residue field) and ``projection`` (product onto factor ``index``).
    """

    source: Ring
    target: Ring
    kind: str
    index: int = 0

    @classmethod
    def identity(cls, R):
        return cls(R, R, "identity")

    @classmethod
    def extension(cls, R, L):
        if isinstance(R, PrimeField) and isinstance(L, (PrimeField, ExtensionField)) and L.p == R.p:
            return cls(R, L, "extension")
        if (isinstance(R, ChainRing) and isinstance(L, ChainRing) and R.m == L.m
                and isinstance(R.base, PrimeField) and L.p == R.p):
            return cls(R, L, "extension")
        from .errors import UnsupportedBaseChange
        raise UnsupportedBaseChange(f"no extension map {R.describe()} -> {L.describe()}")

    @classmethod
    def residue(cls, R):
        if not isinstance(R, ChainRing):
            from .errors import UnsupportedBaseChange
            raise UnsupportedBaseChange(f"{R.describe()} is not a chain ring")
        return cls(R, R.base, "residue")

    @classmethod
    def projection(cls, R, index):
        if not isinstance(R, ProductRing):
            from .errors import UnsupportedBaseChange
            raise UnsupportedBaseChange(f"{R.describe()} is not a product")
        return cls(R, R.left if index == 0 else R.right, "projection", index)

    def __call__(self, a):
        if self.kind == "identity":
            return a
        if self.kind == "extension":
            if isinstance(self.source, PrimeField):
                return self.target.from_int(a)
            return self.target.from_coeffs([self.target.base.from_int(c) for c in self.source.coeffs(a)])
        if self.kind == "residue":
            return self.source.residue(a)
        if self.kind == "projection":
            return self.source.split(a)[self.index]
        raise ValueError(self.kind)

    def galois(self, a):
        """Frobenius of the target over the image (extension maps only)."""
        return self.target.frobenius(a)

    @property
    def degree(self):
        if self.kind != "extension":
            return 1
        t = self.target.base if isinstance(self.target, ChainRing) else self.target
        return t.k if isinstance(t, ExtensionField) else 1

    def to_json(self):
        return {"kind": self.kind, "source": self.source.to_json(), "target": self.target.to_json(),
                "index": self.index}
