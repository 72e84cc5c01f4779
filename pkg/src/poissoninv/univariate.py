"""Univariate polynomials and rational functions in ``t`` over Q(zeta_N)."""

from __future__ import annotations

from .scalar import ONE, ZERO, Cyclo, as_cyclo

__all__ = [
    "UniPoly",
    "RatFunc",
    "PoleAtZero",
    "charpoly",
    "det_one_minus_t",
    "taylor_coeffs",
    "ratfunc_arith",
]


class PoleAtZero(ValueError):
    pass


class UniPoly:
    """Dense polynomial, coefficients ascending; the zero polynomial is ``()``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [as_cyclo(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def t(cls) -> "UniPoly":
        return cls([ZERO, ONE])

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def lc(self) -> Cyclo:
        return self.coeffs[-1] if self.coeffs else ZERO

    def __getitem__(self, k: int) -> Cyclo:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        try:
            return self == UniPoly.const(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_unipoly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_unipoly(other))

    def __rsub__(self, other):
        return _as_unipoly(other) - self

    def __mul__(self, other):
        other = _as_unipoly(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly.const(ONE)
        for _ in range(k):
            result = result * self
        return result

    def __divmod__(self, other: "UniPoly"):
        other = _as_unipoly(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) <= dq:
            return UniPoly(), self
        quo = [ZERO] * (len(rem) - dq)
        inv = other.lc().inverse()
        for k in range(len(quo) - 1, -1, -1):
            c = rem[k + dq] * inv
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return UniPoly(quo), UniPoly(rem[:dq])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "UniPoly":
        if not self:
            return self
        inv = self.lc().inverse()
        return UniPoly([c * inv for c in self.coeffs])

    def __call__(self, x):
        x = as_cyclo(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_matrix(self, m):
        from .linalg import Matrix

        n = m.rows
        acc = Matrix.zeros(n, n)
        for c in reversed(self.coeffs):
            acc = acc * m + Matrix.identity(n).scale(c)
        return acc

    def reverse(self, degree: int | None = None) -> "UniPoly":
        """``t^degree * p(1/t)``."""
        d = self.degree if degree is None else degree
        return UniPoly([self[d - k] for k in range(d + 1)])

    def render(self, var: str = "t") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            parts.append(_term(c, mono))
        return _join(parts)

    __str__ = render

    def __repr__(self):
        return f"UniPoly({self.render()})"


def _as_unipoly(x) -> UniPoly:
    return x if isinstance(x, UniPoly) else UniPoly.const(x)


def _term(c: Cyclo, mono: str) -> tuple[str, str]:
    """Sign and body of ``c*mono`` for use in a sum."""
    if not mono:
        text = c.render()
        if c.term_count() == 1 and text.startswith("-"):
            return "-", text[1:]
        return "+", text
    if c == ONE:
        return "+", mono
    if c == -ONE:
        return "-", mono
    text = c.render()
    if c.term_count() > 1:
        return "+", f"({text})*{mono}"
    if text.startswith("-"):
        return "-", f"{text[1:]}*{mono}"
    return "+", f"{text}*{mono}"


def _join(parts) -> str:
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while b:
        a, b = b, a % b
    return a.monic()


class RatFunc:
    """A reduced fraction num/den of univariate polynomials.

    The denominator is scaled to constant term 1 when that is nonzero,
    otherwise made monic, so equal functions compare equal structurally.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _as_unipoly(num)
        den = UniPoly.const(ONE) if den is None else _as_unipoly(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = UniPoly(), UniPoly.const(ONE)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        scale = den[0] if den[0] else den.lc()
        inv = scale.inverse()
        self.num = UniPoly([c * inv for c in num.coeffs])
        self.den = UniPoly([c * inv for c in den.coeffs])

    @classmethod
    def t(cls) -> "RatFunc":
        return cls(UniPoly.t())

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = RatFunc(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_ratfunc(other))

    def __rsub__(self, other):
        return _as_ratfunc(other) - self

    def __mul__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_ratfunc(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(ONE) / (self ** (-k))
        return RatFunc(self.num ** k, self.den ** k)

    def taylor(self, d: int) -> list[Cyclo]:
        return taylor_coeffs(self, d)

    def laurent_leading(self) -> tuple[int, Cyclo]:
        """Leading term of the expansion at infinity: ``(exponent, coefficient)``."""
        if not self.num:
            raise ValueError("zero function has no leading term")
        return self.num.degree - self.den.degree, self.num.lc() / self.den.lc()

    def render(self) -> str:
        """Canonical text, factoring the denominator into ``(1 - t^k)`` powers when possible."""
        if not self.num:
            return "0"
        num = self.num.render()
        if self.den.degree == 0:
            return num
        factors = _factor_den(self.den)
        den = "*".join(factors)
        if len(factors) > 1 or (factors[0].count("(") == 1 and "^" in factors[0].split(")")[-1]):
            den_text = f"({den})" if len(factors) > 1 else den
        else:
            den_text = den
        num_text = num if self.num.degree == 0 and self.num[0].term_count() == 1 else f"({num})"
        return f"{num_text}/{den_text}"

    __str__ = render

    def __repr__(self):
        return f"RatFunc({self.render()})"


def _as_ratfunc(x) -> RatFunc:
    return x if isinstance(x, RatFunc) else RatFunc(x)


def _factor_den(den: UniPoly) -> list[str]:
    """Greedy split of ``den`` into powers of ``1 - t^k`` plus a leftover factor."""
    rest = den
    counts: dict[int, int] = {}
    k = rest.degree
    while k >= 1 and rest.degree >= 1:
        f = UniPoly([ONE] + [ZERO] * (k - 1) + [-ONE])
        q, r = divmod(rest, f)
        if not r:
            counts[k] = counts.get(k, 0) + 1
            rest = q
            k = min(k, rest.degree)
        else:
            k -= 1
    out = []
    lead = rest[0]
    for k in sorted(counts):
        base = "(1-t)" if k == 1 else f"(1-t^{k})"
        out.append(base if counts[k] == 1 else f"{base}^{counts[k]}")
    if rest.degree >= 1:
        out.append(f"({rest.render().replace(' ', '')})")
    elif lead != ONE:
        out.insert(0, lead.render() if lead.term_count() == 1 else f"({lead.render()})")
    return out or ["1"]


def ratfunc_arith(a, b, op: str) -> RatFunc:
    a, b = _as_ratfunc(a), _as_ratfunc(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def taylor_coeffs(r: RatFunc, d: int) -> list[Cyclo]:
    """First ``d + 1`` power-series coefficients of ``r`` at t = 0."""
    den0 = r.den[0]
    if not den0:
        raise PoleAtZero("denominator vanishes at t = 0")
    inv = den0.inverse()
    out: list[Cyclo] = []
    for k in range(d + 1):
        acc = r.num[k]
        for j in range(1, min(k, r.den.degree) + 1):
            dj = r.den[j]
            if dj:
                acc = acc - dj * out[k - j]
        out.append(acc * inv)
    return out


def charpoly(m) -> UniPoly:
    """det(tI - M), monic, via the Faddeev-LeVerrier recursion."""
    from .linalg import Matrix

    m._require_square()
    n = m.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    ident = Matrix.identity(n)
    mk = Matrix.zeros(n, n)
    for k in range(1, n + 1):
        mk = m * mk + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(m * mk).trace() / k
    return UniPoly(coeffs)


def det_one_minus_t(m) -> UniPoly:
    """det(I - t M) as a polynomial in t."""
    return charpoly(m).reverse(m.rows)
