"""Polynomial Poisson structures: brackets, Jacobi, modular derivation,
superpotentials and the quotient by the bracket ideal."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Mapping, Sequence

from .poly import MultiPoly, VariableCountMismatch, coordinates, monomials_of_degree, rank
from .scalar import ONE

__all__ = [
    "PoissonStructure",
    "Superpotential",
    "NotHomogeneousDegree3",
    "WrongVariableCount",
    "JacobiResult",
    "from_superpotential",
    "bracket",
    "verify_jacobi",
    "modular_derivation",
    "is_unimodular",
    "solve_superpotential",
    "bracket_quotient_hilbert",
]


class NotHomogeneousDegree3(ValueError):
    pass


class WrongVariableCount(ValueError):
    pass


class PoissonStructure:
    """Bracket table ``{x_i, x_j}`` for ``i < j`` on k[x_1..x_n].

    Missing pairs are zero.  The remaining brackets follow from
    antisymmetry.
    """

    def __init__(self, nvars: int, table: Mapping[tuple[int, int], MultiPoly] | None = None, prefix: str = "x"):
        self.nvars = nvars
        self.prefix = prefix
        clean = {}
        for (i, j), v in (table or {}).items():
            if not (1 <= i < j <= nvars):
                raise ValueError(f"table key {(i, j)} must satisfy 1 <= i < j <= {nvars}")
            if not isinstance(v, MultiPoly):
                v = MultiPoly.const(nvars, v)
            if v.nvars != nvars:
                raise VariableCountMismatch(f"entry {(i, j)} has {v.nvars} variables, expected {nvars}")
            if v:
                clean[(i, j)] = v
        self.table = clean

    @classmethod
    def zero(cls, nvars: int) -> "PoissonStructure":
        return cls(nvars, {})

    @classmethod
    def from_cyclic(cls, b12: MultiPoly, b23: MultiPoly, b31: MultiPoly, prefix: str = "x") -> "PoissonStructure":
        """Three-variable structure from ``({x1,x2}, {x2,x3}, {x3,x1})``."""
        return cls(3, {(1, 2): b12, (2, 3): b23, (1, 3): -b31}, prefix)

    def gen_bracket(self, i: int, j: int) -> MultiPoly:
        """``{x_i, x_j}`` for any 1-based pair."""
        if i == j:
            return MultiPoly.zero(self.nvars)
        if i < j:
            return self.table.get((i, j), MultiPoly.zero(self.nvars))
        return -self.table.get((j, i), MultiPoly.zero(self.nvars))

    def cyclic(self) -> tuple[MultiPoly, MultiPoly, MultiPoly]:
        if self.nvars != 3:
            raise WrongVariableCount("cyclic form needs three variables")
        return self.gen_bracket(1, 2), self.gen_bracket(2, 3), self.gen_bracket(3, 1)

    @property
    def is_quadratic(self) -> bool:
        return all(v.is_homogeneous(2) for v in self.table.values())

    def is_homogeneous(self) -> bool:
        return all(v.is_homogeneous() for v in self.table.values())

    def __eq__(self, other):
        if not isinstance(other, PoissonStructure):
            return NotImplemented
        return self.nvars == other.nvars and self.table == other.table

    def __hash__(self):
        return hash((self.nvars, frozenset(self.table.items())))

    def render(self) -> str:
        if self.nvars == 3:
            return "(" + ", ".join(b.render(self.prefix) for b in self.cyclic()) + ")"
        p = self.prefix
        return "; ".join(
            f"{{{p}{i},{p}{j}}} = {self.gen_bracket(i, j).render(p)}"
            for i in range(1, self.nvars + 1)
            for j in range(i + 1, self.nvars + 1)
        )

    def __repr__(self):
        return f"PoissonStructure({self.nvars}, {self.render()})"


class Superpotential:
    """A homogeneous cubic in three variables (zero allowed)."""

    def __init__(self, omega: MultiPoly):
        if omega.nvars != 3:
            raise WrongVariableCount(f"superpotential needs 3 variables, got {omega.nvars}")
        if omega and not omega.is_homogeneous(3):
            raise NotHomogeneousDegree3(f"{omega.render()} is not homogeneous of degree 3")
        self.omega = omega

    def __repr__(self):
        return f"Superpotential({self.omega.render()})"


def from_superpotential(omega) -> PoissonStructure:
    """Jacobian structure of a cubic: ``{x1,x2} = d3 W``, ``{x2,x3} = d1 W``, ``{x3,x1} = d2 W``."""
    if not isinstance(omega, Superpotential):
        omega = Superpotential(omega)
    w = omega.omega
    return PoissonStructure.from_cyclic(w.diff(3), w.diff(1), w.diff(2))


def bracket(P: PoissonStructure, f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Leibniz extension ``sum_{i<j} (f_i g_j - f_j g_i) {x_i, x_j}``."""
    if f.nvars != P.nvars or g.nvars != P.nvars:
        raise VariableCountMismatch("bracket arguments do not match the structure")
    df = [f.diff(i) for i in range(1, P.nvars + 1)]
    dg = [g.diff(i) for i in range(1, P.nvars + 1)]
    acc = MultiPoly.zero(P.nvars)
    for (i, j), b in P.table.items():
        coeff = df[i - 1] * dg[j - 1] - df[j - 1] * dg[i - 1]
        if coeff:
            acc = acc + coeff * b
    return acc


@dataclass(frozen=True)
class JacobiResult:
    ok: bool
    witness: tuple[int, int, int] | None = None
    value: MultiPoly | None = None

    def __bool__(self):
        return self.ok


def verify_jacobi(P: PoissonStructure) -> JacobiResult:
    """Cyclic Jacobi sum on every generator triple; first failure is the witness."""
    n = P.nvars
    xs = MultiPoly.gens(n)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                s = (
                    bracket(P, xs[i - 1], P.gen_bracket(j, k))
                    + bracket(P, xs[j - 1], P.gen_bracket(k, i))
                    + bracket(P, xs[k - 1], P.gen_bracket(i, j))
                )
                if s:
                    return JacobiResult(False, (i, j, k), s)
    return JacobiResult(True)


def modular_derivation(P: PoissonStructure, f: MultiPoly) -> MultiPoly:
    """``m(f) = sum_i d{x_i, f}/dx_i``."""
    xs = MultiPoly.gens(P.nvars)
    acc = MultiPoly.zero(P.nvars)
    for i in range(1, P.nvars + 1):
        acc = acc + bracket(P, xs[i - 1], f).diff(i)
    return acc


def is_unimodular(P: PoissonStructure) -> bool:
    return all(not modular_derivation(P, x) for x in MultiPoly.gens(P.nvars))


def _integrate(f: MultiPoly, i: int) -> MultiPoly:
    k = i - 1
    out = {}
    for e, c in f.terms.items():
        ne = list(e)
        ne[k] += 1
        out[tuple(ne)] = c / ne[k]
    return MultiPoly(f.nvars, out)


def _free_of(f: MultiPoly, idx: Sequence[int]) -> bool:
    return all(not e[i - 1] for e in f.terms for i in idx)


def solve_superpotential(P: PoissonStructure) -> MultiPoly | None:
    """Find W with grad W = ({x2,x3}, {x3,x1}, {x1,x2}), or None.

    Integrates the first component in x1, then corrects with functions of
    (x2, x3) and finally of x3 alone.  The constant of integration is 0.
    """
    if P.nvars != 3:
        raise WrongVariableCount("superpotentials are defined for three variables")
    b12, b23, b31 = P.cyclic()
    target = (b23, b31, b12)
    omega = _integrate(target[0], 1)
    for i in (2, 3):
        rest = target[i - 1] - omega.diff(i)
        if not _free_of(rest, range(1, i)):
            return None
        omega = omega + _integrate(rest, i)
    if any(omega.diff(i) != target[i - 1] for i in (1, 2, 3)):
        return None
    return omega


def bracket_quotient_hilbert(P: PoissonStructure, dmax: int) -> list[int]:
    """``dim (k[x] / ({x_i,x_j}))_d`` for d = 0..dmax; generators must be homogeneous."""
    n = P.nvars
    gens = [g for g in P.table.values() if g]
    for g in gens:
        if not g.is_homogeneous():
            raise ValueError(f"bracket {g.render(P.prefix)} is not homogeneous")
    out = []
    for d in range(dmax + 1):
        basis = monomials_of_degree(n, d)
        spanning = []
        for g in gens:
            e = g.degree()
            if e > d:
                continue
            for m in monomials_of_degree(n, d - e):
                spanning.append(g * MultiPoly.monomial(m, ONE))
        r = rank(coordinates(spanning, basis), len(basis)) if spanning else 0
        out.append(comb(n + d - 1, d) - r)
    return out
