"""Graded Poisson automorphisms, reflections and finite matrix groups.

A graded map is stored by its matrix ``A`` acting on degree one by
``phi(x_i) = sum_j A[i, j] x_j``.  With this row convention the matrix
product ``A1 * A2`` represents ``phi2 o phi1``; group closure and Molien
averages do not depend on the order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .poisson import PoissonStructure
from .poly import Matrix, MultiPoly, RatFunc, Singular, UniPoly, det_one_minus_t
from .scalar import DEFAULT_ORDER_BOUND, ONE, ZERO, Cyclo, order_as_root_of_unity

__all__ = [
    "GradedMap",
    "MatrixGroup",
    "ReflectionReport",
    "AutomorphismCheck",
    "NotQuadratic",
    "ClosureCapExceeded",
    "DEFAULT_CLOSURE_CAP",
    "is_poisson_automorphism",
    "emit_constraint_system",
    "order_of",
    "classify_reflection",
    "group_closure",
    "trace_series",
    "molien",
]

DEFAULT_CLOSURE_CAP = 10_000


class NotQuadratic(ValueError):
    pass


class ClosureCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class GradedMap:
    """Invertible linear action on the generators."""

    matrix: Matrix

    def __post_init__(self):
        if not isinstance(self.matrix, Matrix):
            object.__setattr__(self, "matrix", Matrix(self.matrix))
        if not self.matrix.is_square():
            raise ValueError("graded map needs a square matrix")
        if not self.matrix.det():
            raise Singular("graded map matrix is singular")

    @property
    def n(self) -> int:
        return self.matrix.rows

    def image(self, i: int) -> MultiPoly:
        """``phi(x_i)`` for 1-based ``i``."""
        row = self.matrix.row(i - 1)
        return MultiPoly(self.n, {tuple(int(k == j) for k in range(self.n)): c for j, c in enumerate(row)})

    def apply(self, f: MultiPoly) -> MultiPoly:
        return f.linear_substitute(self.matrix)

    def then(self, other: "GradedMap") -> "GradedMap":
        """``other o self``."""
        return GradedMap(self.matrix * other.matrix)

    def __repr__(self):
        return f"GradedMap({self.matrix.render()})"


def _as_map(phi) -> GradedMap:
    return phi if isinstance(phi, GradedMap) else GradedMap(phi)


@dataclass(frozen=True)
class AutomorphismCheck:
    ok: bool
    witness: tuple[int, int] | None = None
    lhs: MultiPoly | None = None
    rhs: MultiPoly | None = None

    def __bool__(self):
        return self.ok


def _transformed_bracket(table, a, i: int, j: int, zero):
    """``sum_{k<l} (a_ik a_jl - a_il a_jk) {x_k, x_l}`` with generic scalars ``a``."""
    acc = zero
    for (k, l), b in table.items():
        minor = a(i, k) * a(j, l) - a(i, l) * a(j, k)
        if minor:
            acc = acc + minor * b
    return acc


def is_poisson_automorphism(P: PoissonStructure, phi) -> AutomorphismCheck:
    """Check ``phi({x_i,x_j}) = {phi(x_i), phi(x_j)}`` on generator pairs."""
    phi = _as_map(phi)
    if phi.n != P.nvars:
        raise ValueError("matrix size does not match the structure")
    m = phi.matrix
    zero = MultiPoly.zero(P.nvars)
    for i in range(1, P.nvars + 1):
        for j in range(i + 1, P.nvars + 1):
            lhs = phi.apply(P.gen_bracket(i, j))
            rhs = _transformed_bracket(P.table, lambda r, c: m[r - 1, c - 1], i, j, zero)
            if lhs != rhs:
                return AutomorphismCheck(False, (i, j), lhs, rhs)
    return AutomorphismCheck(True)


@dataclass(frozen=True)
class Equation:
    """``poly = 0`` in the entries ``a11..ann``; records its origin."""

    poly: MultiPoly
    pair: tuple[int, int]
    monomial: tuple

    def render(self) -> str:
        n = int(round(self.poly.nvars ** 0.5))
        names = [f"a{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1)]
        return f"{self.poly.render(names=names)} = 0"


def emit_constraint_system(P: PoissonStructure) -> list[Equation]:
    """Coefficient equations of the automorphism condition in symbolic ``a_ij``.

    Each equation is scaled so its grlex-leading coefficient is 1, and
    repeated equations are dropped.
    """
    if not P.is_quadratic:
        raise NotQuadratic("constraint emission needs a quadratic structure")
    n = P.nvars
    nsym = n * n
    total = nsym + n

    def a(i, j):
        return MultiPoly.var(total, (i - 1) * n + j)

    xs = [MultiPoly.var(total, nsym + k) for k in range(1, n + 1)]
    images = []
    for i in range(1, n + 1):
        img = MultiPoly.zero(total)
        for j in range(1, n + 1):
            img = img + a(i, j) * xs[j - 1]
        images.append(img)
    lifted = {k: v.extend(total, nsym) for k, v in P.table.items()}
    zero = MultiPoly.zero(total)
    seen = set()
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            b = P.gen_bracket(i, j)
            lhs = b.substitute(images) if b else zero
            rhs = _transformed_bracket(lifted, a, i, j, zero)
            diff = lhs - rhs
            by_x: dict = {}
            for e, c in diff.terms.items():
                key = e[nsym:]
                by_x.setdefault(key, {})[e[:nsym]] = c
            for key in sorted(by_x, reverse=True):
                eq = MultiPoly(nsym, by_x[key])
                eq = eq / eq.leading_term()[1]
                if eq not in seen:
                    seen.add(eq)
                    out.append(Equation(eq, (i, j), key))
    return out


def order_of(phi, bound: int = DEFAULT_ORDER_BOUND) -> int | None:
    """Least ``m <= bound`` with ``phi^m = I``."""
    m = _as_map(phi).matrix
    p = m
    for k in range(1, bound + 1):
        if p.is_identity():
            return k
        p = p * m
    return None


@dataclass(frozen=True)
class ReflectionReport:
    is_reflection: bool
    order: int | None
    xi: Cyclo | None
    eigen_profile: str
    reason: str = ""

    def summary(self) -> str:
        if self.is_reflection:
            return f"reflection, xi = {self.xi.render()}, order {self.order}"
        return f"not a reflection ({self.reason})"


def _profile(cp: UniPoly, n: int) -> tuple[str, Cyclo | None]:
    """Describe the characteristic polynomial; second item is the repeated eigenvalue if all coincide."""
    t = UniPoly.t()
    c = -cp[n - 1] / n
    if cp == (t - c) ** n:
        return f"(t - {c.render()})^{n}" if c.term_count() <= 1 else f"(t - ({c.render()}))^{n}", c
    return cp.render(), None


def classify_reflection(P: PoissonStructure | None, phi, bound: int = DEFAULT_ORDER_BOUND) -> ReflectionReport:
    """Decide whether ``phi`` is a Poisson reflection.

    With ``lam = tr(phi) - (n - 1)``, ``phi`` has eigenvalues ``1,...,1,lam``
    and is diagonalizable exactly when ``(phi - I)(phi - lam I) = 0`` and
    ``phi != I``.  A reflection additionally needs ``lam`` to be a root of
    unity other than 1 and ``phi`` to preserve the bracket.  Passing
    ``P=None`` skips the bracket check.
    """
    phi = _as_map(phi)
    m = phi.matrix
    n = phi.n
    cp = m.charpoly()
    profile, repeated = _profile(cp, n)
    lam = m.trace() - (n - 1)
    if P is not None and not is_poisson_automorphism(P, phi):
        return ReflectionReport(False, order_of(phi, bound), None, profile, "not a Poisson automorphism")
    if m.is_identity():
        return ReflectionReport(False, 1, None, profile, "identity")
    if repeated is not None and n > 2:
        return ReflectionReport(False, order_of(phi, bound), None, profile, _multiplicity_word(n) + " eigenvalue")
    ident = Matrix.identity(n)
    if (m - ident) * (m - ident.scale(lam)) != Matrix.zeros(n, n):
        return ReflectionReport(False, order_of(phi, bound), None, profile, "eigenvalues are not 1, ..., 1, xi")
    if lam == ONE:
        return ReflectionReport(False, order_of(phi, bound), None, profile, "lambda = 1")
    k = order_as_root_of_unity(lam, bound)
    if k is None:
        return ReflectionReport(False, None, None, profile, "xi is not a root of unity")
    return ReflectionReport(True, k, lam, profile, "")


def _multiplicity_word(n: int) -> str:
    return {3: "triple", 4: "quadruple"}.get(n, f"{n}-fold")


@dataclass
class MatrixGroup:
    """Finite group generated by ``generators``; ``elements`` in discovery order."""

    generators: list[GradedMap]
    elements: list[Matrix] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def maps(self) -> list[GradedMap]:
        return [GradedMap(m) for m in self.elements]


def group_closure(gens: Iterable, cap: int = DEFAULT_CLOSURE_CAP, n: int | None = None) -> MatrixGroup:
    """Breadth-first closure of the generators under multiplication."""
    gens = [_as_map(g) for g in gens]
    if not gens:
        if n is None:
            raise ValueError("need generators or an explicit size")
        gens = [GradedMap(Matrix.identity(n))]
    size = gens[0].n
    ident = Matrix.identity(size)
    seen = {ident}
    order = [ident]
    frontier = [ident]
    gm = [g.matrix for g in gens]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gm:
                b = a * g
                if b not in seen:
                    seen.add(b)
                    order.append(b)
                    nxt.append(b)
                    if len(order) > cap:
                        raise ClosureCapExceeded(f"group has more than {cap} elements")
        frontier = nxt
    return MatrixGroup(gens, order)


def trace_series(phi) -> RatFunc:
    """``1 / det(I - t phi)``, the graded trace of ``phi`` on the polynomial ring."""
    m = phi.matrix if isinstance(phi, GradedMap) else phi
    return RatFunc(UniPoly.const(ONE), det_one_minus_t(m))


def molien(G: MatrixGroup) -> RatFunc:
    """Average of the trace series over the group."""
    acc = RatFunc(ZERO)
    for m in G.elements:
        acc = acc + trace_series(m)
    return acc / len(G.elements)


def symmetric_power_trace(m: Matrix, d: int) -> Cyclo:
    """Trace of the induced action on degree-``d`` polynomials, by direct expansion."""
    from .poly import monomials_of_degree

    n = m.rows
    phi = GradedMap(m) if m.det() else None
    acc = ZERO
    for e in monomials_of_degree(n, d):
        mono = MultiPoly.monomial(e)
        img = mono.linear_substitute(m) if phi is None else phi.apply(mono)
        acc = acc + img.coefficient(e)
    return acc


def instantiate(gens: Sequence[Matrix]) -> list[GradedMap]:
    return [GradedMap(g) for g in gens]
