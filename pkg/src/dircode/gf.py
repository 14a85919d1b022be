"""Finite field arithmetic for F_q, q = p^h.

Field elements are plain ints in range(q): the residue class
sum_i c_i X^i (mod m) with digits c_i in range(p) is encoded as the
integer sum_i c_i p^i.  Zero and one of the field are the ints 0 and 1,
and for h = 1 an element is just its residue in range(p).  All arithmetic
goes through a FieldCtx, obtained from field_create(p, h).

The modulus is pinned deterministically: the lexicographically smallest
monic irreducible polynomial of degree h over F_p, comparing coefficient
lists low-degree-first.  For h = 1 the modulus is X itself.
"""

from __future__ import annotations

import functools

import numpy as np

# full add/mul tables are built eagerly below this size; larger fields
# fall back to per-op polynomial arithmetic
_TABLE_LIMIT = 256

_Q_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p, coefficients low-degree-first


def _trim(a):
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i]


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(tuple(out))


def _poly_mod(a, f, p):
    # f monic
    a = list(a)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            for j in range(df):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
        a[i] = 0
    return _trim(tuple(a))


def _poly_mulmod(a, b, f, p):
    return _poly_mod(_poly_mul(a, b, p), f, p)


def _poly_powmod(base, e, f, p):
    result = (1,)
    acc = _poly_mod(base, f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, acc, f, p)
        acc = _poly_mulmod(acc, acc, f, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _trim(tuple(x % p for x in a)), _trim(tuple(x % p for x in b))
    while b:
        lead_inv = pow(b[-1], -1, p)
        monic_b = tuple(c * lead_inv % p for c in b)
        a, b = b, _poly_mod(a, monic_b, p)
    if a:
        lead_inv = pow(a[-1], -1, p)
        a = tuple(c * lead_inv % p for c in a)
    return a


def _is_irreducible(f, p, h):
    # no factor of degree i for any i < h, then the degree-h closure check
    x = (0, 1)
    for i in range(1, h):
        g = _poly_powmod(x, p**i, f, p)
        diff = _trim(tuple((g[k] if k < len(g) else 0) - (x[k] if k < len(x) else 0) for k in range(max(len(g), 2))))
        diff = tuple(c % p for c in diff)
        if _poly_gcd(diff, f, p) != (1,):
            return False
    g = _poly_powmod(x, p**h, f, p)
    return g == x


def _smallest_irreducible(p: int, h: int):
    # monic degree h; candidates scanned in lexicographic order of the
    # coefficient list (c_0, ..., c_{h-1}), low-degree coefficient most
    # significant
    for n in range(p**h):
        digits = []
        m = n
        for _ in range(h):
            digits.append(m % p)
            m //= p
        coeffs = tuple(reversed(digits))  # (c_0, ..., c_{h-1})
        if coeffs[0] == 0:
            continue  # X divides the candidate
        f = coeffs + (1,)
        if _is_irreducible(f, p, h):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------


class FieldCtx:
    """Arithmetic context for F_q.  Do not construct directly; use field_create."""

    def __init__(self, p: int, h: int):
        self.p = p
        self.h = h
        self.q = p**h
        if h == 1:
            self.modulus = (0, 1)
        else:
            self.modulus = _smallest_irreducible(p, h)
        self._tables_built = False
        self._mul_t = None
        self._inv_t = None
        self._regrep = None
        if self.q <= _TABLE_LIMIT:
            self._build_tables()

    def __repr__(self):
        return f"FieldCtx(p={self.p}, h={self.h})"

    # -- encoding helpers

    def coeffs(self, e: int):
        """Digits of e in base p, low degree first, length h."""
        out = []
        for _ in range(self.h):
            out.append(e % self.p)
            e //= self.p
        return tuple(out)

    def from_coeffs(self, cs) -> int:
        cs = list(cs)
        if len(cs) != self.h:
            raise ValueError(f"expected {self.h} coefficients, got {len(cs)}")
        e = 0
        for c in reversed(cs):
            c = int(c)
            if not 0 <= c < self.p:
                raise ValueError(f"coefficient {c} out of range for p = {self.p}")
            e = e * self.p + c
        return e

    def elements(self):
        return range(self.q)

    # -- scalar arithmetic on encodings

    def add(self, a: int, b: int) -> int:
        if self.h == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.h):
            out += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.h == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        for _ in range(self.h):
            out += (-a % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.h == 1:
            return (a * b) % self.p
        if self._mul_t is not None:
            return int(self._mul_t[a, b])
        prod = _poly_mulmod(self.coeffs(a), self.coeffs(b), self.modulus, self.p)
        return self._enc(prod)

    def inv(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ZeroDivisionError("division by zero in the field")
        if self.h == 1:
            return pow(a, -1, self.p)
        if self._inv_t is not None:
            return int(self._inv_t[a])
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        e %= self.q - 1
        result = 1
        acc = a
        while e:
            if e & 1:
                result = self.mul(result, acc)
            acc = self.mul(acc, acc)
            e >>= 1
        return result

    def nu(self, a: int) -> int:
        """Lift of a prime-subfield element to the integer range 0..p-1."""
        if a >= self.p:
            raise ValueError(f"element {a} is not in the prime subfield")
        return a

    def in_prime_subfield(self, a: int) -> bool:
        return a < self.p

    def scalar(self, n: int) -> int:
        """Embed the integer n (mod p) into the prime subfield."""
        return n % self.p

    def _enc(self, poly) -> int:
        e = 0
        for c in reversed(poly):
            e = e * self.p + c
        # pad: reversed(poly) covers only len(poly) digits; that is fine
        # because high digits of a reduced polynomial are zero
        return e

    # -- eager tables (q <= _TABLE_LIMIT)

    def _build_tables(self):
        p, h, q = self.p, self.h, self.q
        if h == 1:
            r = np.arange(q, dtype=np.int64)
            self._mul_t = (r[:, None] * r[None, :]) % p
            self._inv_t = np.array([0] + [pow(i, -1, p) for i in range(1, q)], dtype=np.int64)
        else:
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                ca = self.coeffs(a)
                for b in range(a, q):
                    e = self._enc(_poly_mulmod(ca, self.coeffs(b), self.modulus, p))
                    mul[a, b] = e
                    mul[b, a] = e
            self._mul_t = mul
            inv = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
            self._inv_t = inv
        self._tables_built = True

    # -- vectorized helpers on encoding arrays

    def add_arr(self, a, b):
        if self.h == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        p = self.p
        a = np.asarray(a)
        b = np.asarray(b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        mult = 1
        for _ in range(self.h):
            out += ((a + b) % p) * mult
            a = a // p
            b = b // p
            mult *= p
        return out

    def sum_arr(self, a, axis=None):
        """Field sum of an encoding array along an axis (None: over everything)."""
        if self.h == 1:
            return np.asarray(a).sum(axis=axis) % self.p
        p = self.p
        a = np.asarray(a)
        out = None
        mult = 1
        for _ in range(self.h):
            digit = (a % p).sum(axis=axis) % p * mult
            out = digit if out is None else out + digit
            a = a // p
            mult *= p
        return out

    def neg_arr(self, a):
        if self.h == 1:
            return (-np.asarray(a)) % self.p
        p = self.p
        a = np.asarray(a)
        out = np.zeros(a.shape, dtype=np.int64)
        mult = 1
        for _ in range(self.h):
            out += (-(a % p) % p) * mult
            a = a // p
            mult *= p
        return out

    def mul_arr(self, a, b):
        if self.h == 1:
            return (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % self.p
        if self._mul_t is None:
            raise ValueError(f"q = {self.q} too large for vectorized field ops")
        return self._mul_t[np.asarray(a), np.asarray(b)]

    def regrep(self):
        """Multiplication-by-a matrices: shape (q, h, h) over F_p.

        Column j of regrep()[a] holds the coefficients of a * X^j.
        """
        if self._regrep is None:
            q, h = self.q, self.h
            rep = np.zeros((q, h, h), dtype=np.int64)
            for a in range(q):
                for j in range(h):
                    prod = self.mul(a, self.from_coeffs([1 if i == j else 0 for i in range(h)]))
                    rep[a, :, j] = self.coeffs(prod)
            self._regrep = rep
        return self._regrep


@functools.lru_cache(maxsize=None)
def field_create(p: int, h: int = 1) -> FieldCtx:
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if h < 1:
        raise ValueError("h must be a positive integer")
    if p**h > _Q_LIMIT:
        raise ValueError("q = p^h exceeds the supported range 2^20")
    return FieldCtx(p, h)
