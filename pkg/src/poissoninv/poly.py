"""Sparse multivariate polynomials over Q(zeta_N).

Also re-exports the dense matrix and univariate layers so callers can treat
``poly`` as the single algebraic substrate.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .linalg import (  # noqa: F401  (re-exported)
    LinearSolution,
    Matrix,
    NotSquare,
    Singular,
    det,
    inverse,
    kernel,
    mat_mul,
    mat_pow,
    rank,
    rref,
    solve_linear,
)
from .scalar import ONE, ZERO, Cyclo, as_cyclo
from .univariate import (  # noqa: F401  (re-exported)
    PoleAtZero,
    RatFunc,
    UniPoly,
    charpoly,
    det_one_minus_t,
    ratfunc_arith,
    taylor_coeffs,
)
from .univariate import _join, _term

Exp = tuple  # exponent vector


class VariableCountMismatch(ValueError):
    pass


def grlex_key(e: Exp):
    """Sort key; larger key means larger monomial (x1 > x2 > ...)."""
    return (sum(e), e)


def monomials_of_degree(n: int, d: int) -> list[Exp]:
    """All exponent vectors of total degree ``d`` in ``n`` variables, grlex descending."""
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(key=grlex_key, reverse=True)
    return out


class MultiPoly:
    """Polynomial in ``nvars`` commuting variables.

    ``terms`` maps exponent tuples to nonzero Cyclo coefficients.  Instances
    are treated as immutable.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars:
                raise VariableCountMismatch(f"exponent {e} does not have {nvars} entries")
            c = as_cyclo(c)
            if c:
                clean[e] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _from_clean(cls, nvars: int, terms: dict) -> "MultiPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._from_clean(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiPoly":
        """The variable ``x_i`` (1-based)."""
        if not 1 <= i <= nvars:
            raise IndexError(f"variable index {i} outside 1..{nvars}")
        e = [0] * nvars
        e[i - 1] = 1
        return cls._from_clean(nvars, {tuple(e): ONE})

    @classmethod
    def gens(cls, nvars: int) -> list["MultiPoly"]:
        return [cls.var(nvars, i) for i in range(1, nvars + 1)]

    @classmethod
    def monomial(cls, e: Sequence[int], c=ONE) -> "MultiPoly":
        return cls(len(e), {tuple(e): c})

    # -- inspection --------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, e: Sequence[int]) -> Cyclo:
        return self.terms.get(tuple(e), ZERO)

    def constant_term(self) -> Cyclo:
        return self.terms.get((0,) * self.nvars, ZERO)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self, d: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        return len(ds) == 1 and (d is None or d in ds)

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._from_clean(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def sorted_terms(self) -> list[tuple[Exp, Cyclo]]:
        return sorted(self.terms.items(), key=lambda ec: grlex_key(ec[0]), reverse=True)

    def leading_term(self) -> tuple[Exp, Cyclo]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.sorted_terms()[0]

    def variables_used(self) -> set[int]:
        return {i + 1 for e in self.terms for i, k in enumerate(e) if k}

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "MultiPoly"):
        if self.nvars != other.nvars:
            raise VariableCountMismatch(f"{self.nvars} vs {other.nvars} variables")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.nvars, as_cyclo(other))

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            return self == MultiPoly.const(self.nvars, as_cyclo(other))
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return MultiPoly._from_clean(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._from_clean(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._from_clean(self.nvars, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self * other

    def scale(self, c) -> "MultiPoly":
        c = as_cyclo(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._from_clean(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __truediv__(self, c):
        return self.scale(as_cyclo(c).inverse())

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.nvars, ONE)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- calculus and substitution ----------------------------------------

    def diff(self, i: int) -> "MultiPoly":
        """Partial derivative in ``x_i`` (1-based)."""
        if not 1 <= i <= self.nvars:
            raise IndexError(f"variable index {i} outside 1..{self.nvars}")
        k = i - 1
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                out[tuple(ne)] = c * e[k]
        return MultiPoly._from_clean(self.nvars, out)

    def substitute(self, images: Sequence["MultiPoly"]) -> "MultiPoly":
        """Replace ``x_i`` by ``images[i-1]``; the images share a common nvars."""
        if len(images) != self.nvars:
            raise VariableCountMismatch(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        m = images[0].nvars
        cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in cache:
                cache[key] = images[i] ** k
            return cache[key]

        acc = MultiPoly.zero(m)
        for e, c in self.terms.items():
            term = MultiPoly.const(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = acc + term
        return acc

    def linear_substitute(self, m: Matrix) -> "MultiPoly":
        """Apply the graded map with ``x_i -> sum_j m[i,j] x_j``."""
        if m.rows != self.nvars or m.cols != self.nvars:
            raise VariableCountMismatch("matrix size does not match the variable count")
        gens = MultiPoly.gens(self.nvars)
        images = []
        for i in range(self.nvars):
            img = MultiPoly.zero(self.nvars)
            for j in range(self.nvars):
                if m[i, j]:
                    img = img + gens[j].scale(m[i, j])
            images.append(img)
        return self.substitute(images)

    def __call__(self, *values):
        """Evaluate at scalar values."""
        if len(values) != self.nvars:
            raise VariableCountMismatch(f"need {self.nvars} values")
        vals = [as_cyclo(v) for v in values]
        acc = ZERO
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t = t * v ** k
            acc = acc + t
        return acc

    def extend(self, nvars: int, offset: int = 0) -> "MultiPoly":
        """Embed into more variables, shifting indices by ``offset``."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            ne[offset:offset + self.nvars] = e
            out[tuple(ne)] = c
        return MultiPoly._from_clean(nvars, out)

    # -- text --------------------------------------------------------------

    def render(self, prefix: str = "x", names: Sequence[str] | None = None) -> str:
        """Canonical text: grlex descending, explicit ``*`` and ``^``."""
        if not self.terms:
            return "0"
        if names is None:
            names = [f"{prefix}{i}" for i in range(1, self.nvars + 1)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            parts.append(_term(c, mono))
        return _join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.render()})"


def poly_arith(f: MultiPoly, g: MultiPoly, op: str) -> MultiPoly:
    f._check(g)
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(f: MultiPoly, i: int) -> MultiPoly:
    return f.diff(i)


def coordinates(polys: Iterable[MultiPoly], basis: Sequence[Exp]) -> list[list[Cyclo]]:
    """Coefficient rows of ``polys`` against the monomial list ``basis``."""
    return [[p.coefficient(e) for e in basis] for p in polys]


def from_coordinates(nvars: int, vec: Sequence, basis: Sequence[Exp]) -> MultiPoly:
    return MultiPoly(nvars, {e: c for e, c in zip(basis, vec)})


def jacobian_det(polys: Sequence[MultiPoly]) -> MultiPoly:
    """Determinant of the Jacobian matrix by cofactor expansion."""
    n = len(polys)
    rows = [[p.diff(j) for j in range(1, n + 1)] for p in polys]

    def minor_det(rs, cols):
        if not rs:
            return MultiPoly.const(polys[0].nvars, ONE)
        r, rest = rs[0], rs[1:]
        acc = MultiPoly.zero(polys[0].nvars)
        for k, c in enumerate(cols):
            if rows[r][c]:
                sub = minor_det(rest, cols[:k] + cols[k + 1:])
                term = rows[r][c] * sub
                acc = acc - term if k % 2 else acc + term
        return acc

    return minor_det(list(range(n)), list(range(n)))
