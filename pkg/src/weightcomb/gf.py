"""Exact arithmetic in F_{p^f}.

Elements are residue classes of polynomials over F_p modulo the canonical
irreducible modulus of degree f: the lexicographically least monic
irreducible polynomial, coefficients compared from degree 0 upward.  This
pins the field construction across runs without external tables.

An element is encoded as the integer sum(c_j p^j) of its coefficient
vector (c_0, ..., c_{f-1}); encoding 0 is zero and 1 is one.
"""

from __future__ import annotations

from itertools import product

from .errors import RangeError
from .params import is_prime

_TABLE_LIMIT = 2048  # build multiplication tables only for small fields


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    a = a[:]
    d = len(mod) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i] % p
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * mod[j]) % p
    out = a[:d]
    while len(out) < d:
        out.append(0)
    return out


def _is_irreducible(coeffs: list[int], p: int) -> bool:
    """Trial division by all monic polynomials of degree 1..deg/2."""
    deg = len(coeffs) - 1
    for d in range(1, deg // 2 + 1):
        for lower in product(range(p), repeat=d):
            div = list(lower) + [1]
            rem = _poly_divmod_rem(coeffs, div, p)
            if all(c == 0 for c in rem):
                return False
    return True


def _poly_divmod_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    for i in range(len(a) - 1, db - 1, -1):
        c = (a[i] * inv_lead) % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    return a[:db]


def canonical_modulus(p: int, f: int) -> tuple[int, ...]:
    """Monic irreducible of degree f with lexicographically least
    low-degree-first coefficient vector.  Returned with the leading 1."""
    for lower in product(range(p), repeat=f):
        coeffs = list(lower) + [1]
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise RangeError(f"no irreducible of degree {f} over F_{p}")  # unreachable


class GF:
    """The field F_{p^f} with integer-encoded elements."""

    def __init__(self, p: int, f: int):
        if not is_prime(p):
            raise RangeError(f"p must be prime, got {p}")
        if f < 1:
            raise RangeError(f"f must be >= 1, got {f}")
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = canonical_modulus(p, f)
        self.zero = 0
        self.one = 1
        self._mul_table: list[int] | None = None
        self._inv_table: list[int] | None = None
        if self.q <= _TABLE_LIMIT:
            self._build_tables()

    # -- encoding -----------------------------------------------------

    def coords(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def encode(self, coords) -> int:
        coords = list(coords)
        if len(coords) > self.f:
            raise RangeError(f"too many coordinates for degree {self.f}")
        return sum((c % self.p) * self.p**j for j, c in enumerate(coords))

    def from_int(self, n: int) -> int:
        """Embed an integer through the prime subfield."""
        return n % self.p

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise RangeError(f"{a} is not an element encoding in [0, {self.q})")
        return a

    # -- arithmetic ---------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self.encode(
            (x + y) % self.p for x, y in zip(self.coords(a), self.coords(b))
        )

    def sub(self, a: int, b: int) -> int:
        return self.encode(
            (x - y) % self.p for x, y in zip(self.coords(a), self.coords(b))
        )

    def neg(self, a: int) -> int:
        return self.encode((-x) % self.p for x in self.coords(a))

    def _mul_direct(self, a: int, b: int) -> int:
        prod = _poly_mul(self.coords(a), self.coords(b), self.p)
        return self.encode(_poly_mod(prod, list(self.modulus), self.p))

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a * self.q + b]
        return self._mul_direct(a, b)

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 1 if n == 0 else 0
        n %= self.q - 1
        out, base = 1, a
        while n:
            if n & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            n >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self._inv_table is not None:
            return self._inv_table[a]
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def _build_tables(self) -> None:
        q = self.q
        table = [0] * (q * q)
        inv = [0] * q
        for a in range(q):
            row = a * q
            for b in range(a, q):
                v = self._mul_direct(a, b)
                table[row + b] = v
                table[b * q + a] = v
                if v == 1:
                    inv[a], inv[b] = b, a
        self._mul_table = table
        self._inv_table = inv

    # -- enumeration --------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def generator(self) -> int:
        """Least element (by encoding) generating the unit group."""
        target = self.q - 1
        for g in self.units():
            seen, x = 1, g
            while x != 1:
                x = self.mul(x, g)
                seen += 1
            if seen == target:
                return g
        raise RangeError("no generator found")  # unreachable for a field
