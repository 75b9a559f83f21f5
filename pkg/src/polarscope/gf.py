"""Arithmetic in small finite fields GF(p^h).

Elements are plain integers in ``[0, p^h)``: the polynomial
``c_0 + c_1 x + ... + c_{h-1} x^{h-1}`` over GF(p) is stored as
``c_0 + c_1 p + ... + c_{h-1} p^{h-1}``.  All table-driven operations accept
ints or integer numpy arrays.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

MAX_ORDER = 2**16
_TABLE_ORDER = 1024  # full q x q add/mul tables below this size


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


# -- polynomials over GF(p), coefficient lists low -> high --------------------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = _poly_trim(a)
    m = _poly_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _poly_trim(a)
    return a


def _monics(deg, p):
    """Monic polynomials of degree `deg`, in increasing integer encoding."""
    for tail in itertools.product(range(p), repeat=deg):
        yield list(reversed(tail)) + [1]


def is_irreducible(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = _poly_trim(poly)
    deg = len(poly) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for m in _monics(d, p):
            if not _poly_mod(poly, m, p):
                return False
    return True


def lowest_irreducible(p: int, h: int) -> tuple[int, ...]:
    for cand in _monics(h, p):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# -- the field ----------------------------------------------------------------

class GF:
    """The finite field GF(p^h) with a fixed monic irreducible modulus.

    Use :func:`field_make` rather than instantiating directly so that the
    modulus is the canonical one.
    """

    def __init__(self, p: int, h: int, modulus):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if h < 1:
            raise ValueError("extension degree must be >= 1")
        if p**h > MAX_ORDER:
            raise ValueError(f"GF({p}^{h}) exceeds the supported order {MAX_ORDER}")
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != h + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree h")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.h = h
        self.q = p**h
        self.modulus = modulus
        self._build()

    # construction
    def _digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        return np.stack([(a // self.p**i) % self.p for i in range(self.h)], axis=-1)

    def _from_digits(self, d):
        w = self.p ** np.arange(self.h, dtype=np.int64)
        return (np.asarray(d, dtype=np.int64) * w).sum(axis=-1)

    def _mulx(self, d):
        # multiply the coefficient vectors in `d` by x, reduce by the modulus
        p, h = self.p, self.h
        top = d[..., h - 1].copy()
        out = np.zeros_like(d)
        out[..., 1:] = d[..., :-1]
        for i in range(h):
            out[..., i] = (out[..., i] - top * self.modulus[i]) % p
        return out

    def _build(self):
        p, h, q = self.p, self.h, self.q
        elems = np.arange(q, dtype=np.int64)
        digits = self._digits(elems)

        # powers of every element by x^k, used to get the product of two polys
        def polymul_all(a):
            da = self._digits(a)
            acc = np.zeros((q, h), dtype=np.int64)
            xk = digits.copy()
            for k in range(h):
                acc = (acc + da[k] * xk) % p
                xk = self._mulx(xk)
            return self._from_digits(acc)

        # find a primitive element and build exp/log
        order = q - 1
        exp = None
        for g in range(1, q):
            powers = np.empty(order, dtype=np.int64)
            x = 1
            ok = True
            seen = set()
            row = polymul_all(g) if q > 2 else np.arange(q)
            for k in range(order):
                if x in seen:
                    ok = False
                    break
                seen.add(x)
                powers[k] = x
                x = int(row[x])
            if ok and x == 1:
                exp = powers
                self.primitive = g
                break
        assert exp is not None
        log = np.full(q, -1, dtype=np.int64)
        log[exp] = np.arange(order)
        self._exp = np.concatenate([exp, exp])
        self._log = log

        self.neg = self._from_digits((-digits) % p)
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = self._exp[(order - log[1:]) % order]
        self.inv_table = inv

        if q <= _TABLE_ORDER:
            self.add_table = self._from_digits((digits[:, None, :] + digits[None, :, :]) % p)
            mt = np.zeros((q, q), dtype=np.int64)
            la = log[1:, None] + log[None, 1:]
            mt[1:, 1:] = self._exp[la]
            self.mul_table = mt
        else:
            self.add_table = None
            self.mul_table = None

        # Frobenius x -> x^p as a table
        self.frob = self.pow(elems, p)
        self.conj_table = self.pow(elems, p ** (h // 2)) if h % 2 == 0 else None

    # vectorised operations
    def add(self, a, b):
        if self.add_table is not None:
            return self.add_table[a, b]
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self._from_digits((self._digits(a) + self._digits(b)) % self.p)

    def sub(self, a, b):
        return self.add(a, self.neg[b])

    def mul(self, a, b):
        if self.mul_table is not None:
            return self.mul_table[a, b]
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        if k == 0:
            return np.ones_like(a)
        out = self._exp[(self._log[a] * k) % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def conj(self, a):
        """The involution x -> x^(p^(h/2)) of GF(p^h), h even."""
        if self.conj_table is None:
            raise ValueError(f"GF({self.p}^{self.h}) has odd degree; no conjugation")
        return self.conj_table[a]

    def dot(self, x, y):
        """Sum over the last axis of x*y (broadcasting)."""
        prod = self.mul(x, y)
        acc = prod[..., 0]
        for i in range(1, prod.shape[-1]):
            acc = self.add(acc, prod[..., i])
        return acc

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        return self.dot(A[:, None, :], B.T[None, :, :])

    @property
    def subfield_order(self) -> int:
        if self.h % 2:
            raise ValueError("odd degree field has no quadratic subfield")
        return self.p ** (self.h // 2)

    def element(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    def to_dict(self) -> dict:
        return {"p": self.p, "h": self.h, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, d) -> GF:
        F = field_make(int(d["p"]), int(d["h"]))
        if "modulus" in d and tuple(d["modulus"]) != F.modulus:
            return cls(int(d["p"]), int(d["h"]), d["modulus"])
        return F

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.h, self.modulus) == (
            other.p, other.h, other.modulus)

    def __hash__(self):
        return hash((self.p, self.h, self.modulus))

    def __repr__(self):
        return f"GF({self.q})" if self.h == 1 else f"GF({self.p}^{self.h})"


@functools.lru_cache(maxsize=None)
def field_make(p: int, h: int = 1) -> GF:
    """GF(p^h) with the lowest monic irreducible modulus.

    Monic polynomials of degree h are ordered by the integer encoding of their
    coefficient vectors, so the choice is reproducible across runs.
    """
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if h < 1:
        raise ValueError("extension degree must be >= 1")
    if p**h > MAX_ORDER:
        raise ValueError(f"GF({p}^{h}) exceeds the supported order {MAX_ORDER}")
    return GF(p, h, lowest_irreducible(p, h))


def conj(x, F: GF):
    """Hermitian conjugation on GF(q^2); works on ints, arrays and FieldElement."""
    if isinstance(x, FieldElement):
        return FieldElement(F, int(F.conj(x.value)))
    out = F.conj(x)
    return int(out) if np.ndim(out) == 0 else out


class FieldElement:
    """Operator-overloaded wrapper around an integer field element."""

    __slots__ = ("field", "value")

    def __init__(self, field: GF, value: int):
        value = int(value)
        if not 0 <= value < field.q:
            raise ValueError(f"{value} is not an element of {field!r}")
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise TypeError("elements of different fields")
            return other.value
        if isinstance(other, int):
            # integers embed through the prime field
            return other % self.field.p
        return NotImplemented

    def _wrap(self, v):
        return FieldElement(self.field, int(v))

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg[self.value])

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __pow__(self, k: int):
        if k < 0:
            return self._wrap(self.field.inv(self.value)) ** (-k)
        return self._wrap(self.field.pow(self.value, k))

    def inverse(self):
        return self._wrap(self.field.inv(self.value))

    def conj(self):
        return conj(self, self.field)

    def __eq__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self.value == o

    def __hash__(self):
        return hash((self.field, self.value))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field!r}({self.value})"
