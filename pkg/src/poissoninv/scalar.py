"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Every scalar in the package is a :class:`Cyclo`.  A value carries its own
modulus ``N`` and a coefficient vector of length ``phi(N)`` in the power
basis ``1, zeta_N, ..., zeta_N^(phi(N)-1)``.  Binary operations lift both
operands into ``Q(zeta_lcm)`` first, so values built in different fields mix
freely.  Rational values are always stored with modulus 1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

__all__ = [
    "Cyclo",
    "DEFAULT_MODULUS",
    "DEFAULT_ORDER_BOUND",
    "cyclotomic_poly",
    "euler_phi",
    "cyclo_arith",
    "root_of_unity",
    "order_as_root_of_unity",
    "as_cyclo",
]

DEFAULT_MODULUS = 12
DEFAULT_ORDER_BOUND = 360


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    sign, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1
    if m > 1:
        sign = -sign
    return sign


def _int_poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # ascending coefficients, den monic
    num = list(num)
    dq = len(den) - 1
    out = [0] * (len(num) - dq)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + dq]
        out[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    if any(num[:dq]):
        raise ArithmeticError("inexact cyclotomic division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("cyclotomic modulus must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _int_poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row e is zeta_n^e reduced mod Phi_n, for 0 <= e < n (integer coords)."""
    deg = euler_phi(n)
    phi = cyclotomic_poly(n)
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by x and reduce the overflow with x^deg = -sum phi_k x^k
        top = cur[-1] if deg else 0
        cur = [0] + cur[:-1]
        if top:
            for k in range(deg):
                cur[k] -= top * phi[k]
    return tuple(rows)


@lru_cache(maxsize=None)
def _trace_weights(n: int) -> tuple[Fraction, ...]:
    # normalized trace of zeta_n^j is mu(n')/phi(n'), n' = n / gcd(n, j)
    out = []
    for j in range(euler_phi(n)):
        m = n // gcd(n, j)
        out.append(Fraction(_mobius(m), euler_phi(m)))
    return tuple(out)


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class Cyclo:
    """An element of Q(zeta_N), immutable."""

    __slots__ = ("modulus", "coeffs")

    def __init__(self, coeffs, modulus: int = 1):
        modulus = int(modulus)
        if modulus < 1:
            raise ValueError("modulus must be positive")
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != euler_phi(modulus):
            raise ValueError(
                f"Q(zeta_{modulus}) needs {euler_phi(modulus)} coefficients, got {len(coeffs)}"
            )
        if modulus > 1 and not any(coeffs[1:]):
            modulus, coeffs = 1, coeffs[:1]
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclo is immutable")

    @classmethod
    def _raw(cls, coeffs: tuple, modulus: int) -> "Cyclo":
        # trusted constructor: coeffs already Fractions of the right length
        obj = object.__new__(cls)
        if modulus > 1 and not any(coeffs[1:]):
            modulus, coeffs = 1, coeffs[:1]
        object.__setattr__(obj, "modulus", modulus)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def rational(cls, q) -> "Cyclo":
        return cls._raw((Fraction(q),), 1)

    # -- structure ---------------------------------------------------------

    def is_rational(self) -> bool:
        return self.modulus == 1

    def to_fraction(self) -> Fraction:
        if self.modulus != 1:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def lift(self, modulus: int) -> "Cyclo":
        """Embed into Q(zeta_M) via zeta_N = zeta_M^(M/N); requires N | M."""
        if modulus % self.modulus:
            raise ValueError(f"cannot embed Q(zeta_{self.modulus}) into Q(zeta_{modulus})")
        return Cyclo._raw(self._coords_in(modulus), modulus)

    def _coords_in(self, modulus: int) -> tuple:
        if modulus == self.modulus:
            return self.coeffs
        step = modulus // self.modulus
        table = _power_table(modulus)
        out = [Fraction(0)] * euler_phi(modulus)
        for j, c in enumerate(self.coeffs):
            if not c:
                continue
            row = table[(j * step) % modulus]
            for k, r in enumerate(row):
                if r:
                    out[k] += c * r
        return tuple(out)

    # -- arithmetic --------------------------------------------------------

    def _common(self, other: "Cyclo"):
        if self.modulus == other.modulus:
            return self.modulus, self.coeffs, other.coeffs
        m = _lcm(self.modulus, other.modulus)
        return m, self._coords_in(m), other._coords_in(m)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.modulus == 1 and other.modulus == 1:
            return Cyclo._raw((self.coeffs[0] + other.coeffs[0],), 1)
        m, a, b = self._common(other)
        return Cyclo._raw(tuple(x + y for x, y in zip(a, b)), m)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo._raw(tuple(-c for c in self.coeffs), self.modulus)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.modulus == 1 and other.modulus == 1:
            return Cyclo._raw((self.coeffs[0] * other.coeffs[0],), 1)
        if self.modulus == 1 or other.modulus == 1:
            s, v = (self.coeffs[0], other) if self.modulus == 1 else (other.coeffs[0], self)
            return Cyclo._raw(tuple(s * c for c in v.coeffs), v.modulus)
        m, a, b = self._common(other)
        table = _power_table(m)
        deg = len(a)
        out = [Fraction(0)] * deg
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = ai * bj
                if i + j < deg:
                    out[i + j] += c
                else:
                    for k, r in enumerate(table[(i + j) % m]):
                        if r:
                            out[k] += c * r
        return Cyclo._raw(tuple(out), m)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if not self:
            raise ZeroDivisionError("division by zero in Q(zeta_N)")
        if self.modulus == 1:
            return Cyclo._raw((1 / self.coeffs[0],), 1)
        return _poly_inverse(self)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Cyclo":
        """Complex conjugation zeta -> zeta^-1."""
        n = self.modulus
        if n == 1:
            return self
        table = _power_table(n)
        out = [Fraction(0)] * len(self.coeffs)
        for j, c in enumerate(self.coeffs):
            if c:
                for k, r in enumerate(table[(-j) % n]):
                    if r:
                        out[k] += c * r
        return Cyclo._raw(tuple(out), n)

    # -- comparison --------------------------------------------------------

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.modulus == other.modulus:
            return self.coeffs == other.coeffs
        _, a, b = self._common(other)
        return a == b

    def __hash__(self):
        # normalized trace is invariant under every embedding Q(zeta_N) -> Q(zeta_M)
        if self.modulus == 1:
            return hash(self.coeffs[0])
        w = _trace_weights(self.modulus)
        return hash(sum((c * wj for c, wj in zip(self.coeffs, w)), Fraction(0)))

    # -- text --------------------------------------------------------------

    def __repr__(self):
        return f"Cyclo({self})"

    def __str__(self):
        return self.render()

    def render(self) -> str:
        """Text form such as ``1/2*zeta(12)^2 - 1``; rationals print as ``p/q``."""
        if self.modulus == 1:
            return _frac_str(self.coeffs[0])
        parts = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if not c:
                continue
            if j == 0:
                body = _frac_str(abs(c))
            else:
                z = f"zeta({self.modulus})" + (f"^{j}" if j > 1 else "")
                body = z if abs(c) == 1 else f"{_frac_str(abs(c))}*{z}"
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def term_count(self) -> int:
        return sum(1 for c in self.coeffs if c)


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _coerce(x):
    if isinstance(x, Cyclo):
        return x
    if isinstance(x, (int, Fraction, Rational)):
        return Cyclo._raw((Fraction(x),), 1)
    return NotImplemented


def as_cyclo(x) -> Cyclo:
    """Coerce ints, Fractions and Cyclo values; anything else is a TypeError."""
    c = _coerce(x)
    if c is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as a cyclotomic number")
    return c


def _poly_inverse(a: Cyclo) -> Cyclo:
    # extended Euclid in Q[x] between a(x) and Phi_N(x)
    n = a.modulus
    phi = [Fraction(c) for c in cyclotomic_poly(n)]

    def trim(p):
        while len(p) > 1 and not p[-1]:
            p.pop()
        return p

    def divmod_(u, v):
        u = list(u)
        q = [Fraction(0)] * max(1, len(u) - len(v) + 1)
        lv = v[-1]
        while len(u) >= len(v) and any(u):
            c = u[-1] / lv
            k = len(u) - len(v)
            q[k] = c
            for i, vi in enumerate(v):
                u[k + i] -= c * vi
            u.pop()
            trim(u)
            if len(u) < len(v):
                break
        return trim(q), trim(u or [Fraction(0)])

    def sub(u, v):
        m = max(len(u), len(v))
        return trim([(u[i] if i < len(u) else 0) - (v[i] if i < len(v) else 0) for i in range(m)])

    def mul(u, v):
        out = [Fraction(0)] * (len(u) + len(v) - 1)
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    out[i + j] += ui * vj
        return trim(out)

    r0, r1 = trim(list(phi)), trim(list(a.coeffs))
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while not (len(r1) == 1 and not r1[0]):
        q, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
    # r0 is a nonzero constant since Phi_N is irreducible
    inv_c = 1 / r0[0]
    s = [c * inv_c for c in s0]
    deg = euler_phi(n)
    _, rem = divmod_(s, phi)
    rem = rem + [Fraction(0)] * (deg - len(rem))
    return Cyclo._raw(tuple(rem[:deg]), n)


ZERO = Cyclo._raw((Fraction(0),), 1)
ONE = Cyclo._raw((Fraction(1),), 1)


def root_of_unity(k: int, n: int) -> Cyclo:
    """zeta_n^k as an element of Q(zeta_n)."""
    if n < 1:
        raise ValueError("root_of_unity needs n >= 1")
    row = _power_table(n)[k % n]
    return Cyclo._raw(tuple(Fraction(r) for r in row), n)


def cyclo_arith(a, b, op: str) -> Cyclo:
    a, b = as_cyclo(a), as_cyclo(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def order_as_root_of_unity(z, bound: int = DEFAULT_ORDER_BOUND) -> int | None:
    """Smallest m <= bound with z^m = 1, or None.

    The roots of unity inside Q(zeta_N) are the +-zeta_N^k, so only divisors
    of lcm(2, N) need testing.
    """
    z = as_cyclo(z)
    if not z:
        return None
    if z.modulus == 1:
        q = z.coeffs[0]
        if q == 1:
            return 1
        if q == -1:
            return 2 if bound >= 2 else None
        return None
    top = _lcm(2, z.modulus)
    if z ** top != ONE:
        return None
    for m in _divisors(top):
        if m > bound:
            return None
        if z ** m == ONE:
            return m
    return None
