"""Invariant subalgebras of finite matrix groups and their induced brackets."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from .autgrp import GradedMap, MatrixGroup, molien
from .poisson import PoissonStructure, bracket
from .poly import (
    MultiPoly,
    RatFunc,
    UniPoly,
    coordinates,
    from_coordinates,
    jacobian_det,
    kernel,
    monomials_of_degree,
    rank,
    solve_linear,
)
from .scalar import ONE

__all__ = [
    "InvariantBasis",
    "GeneratorSet",
    "InducedStructure",
    "NotClosedUnderBracket",
    "reynolds",
    "invariant_basis",
    "find_generators",
    "express_in_generators",
    "induced_bracket_table",
    "same_algebra",
]


class NotClosedUnderBracket(ValueError):
    def __init__(self, pair: tuple[int, int], value: MultiPoly):
        self.pair = pair
        self.value = value
        super().__init__(f"{{y{pair[0]}, y{pair[1]}}} = {value.render()} is not a polynomial in the generators")


def _elements(G) -> list[GradedMap]:
    return G.maps() if isinstance(G, MatrixGroup) else [g if isinstance(g, GradedMap) else GradedMap(g) for g in G]


def reynolds(G: MatrixGroup, f: MultiPoly) -> MultiPoly:
    """Group average ``(1/|G|) sum_g g(f)``."""
    acc = MultiPoly.zero(f.nvars)
    for m in G.elements:
        acc = acc + f.linear_substitute(m)
    return acc / len(G.elements)


@dataclass(frozen=True)
class InvariantBasis:
    degree: int
    basis: tuple[MultiPoly, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def invariant_basis(G: MatrixGroup, d: int, n: int | None = None) -> InvariantBasis:
    """Basis of the degree-``d`` invariants.

    The basis is the kernel of the stacked ``g - I`` over the generators,
    with monomial columns in descending grlex order.  Each vector therefore
    has coefficient 1 on its own free monomial and 0 on the other free
    monomials.
    """
    n = n if n is not None else G.elements[0].rows
    mons = monomials_of_degree(n, d)
    rows = []
    gens = G.generators if isinstance(G, MatrixGroup) else list(G)
    for g in gens:
        m = g.matrix if isinstance(g, GradedMap) else g
        imgs = [MultiPoly.monomial(e).linear_substitute(m) - MultiPoly.monomial(e) for e in mons]
        # column j holds the image of monomial j; rows index output monomials
        cols = coordinates(imgs, mons)
        rows.extend([list(r) for r in zip(*cols)])
    vecs = kernel(rows, len(mons))
    return InvariantBasis(d, tuple(from_coordinates(n, v, mons) for v in vecs))


@dataclass(frozen=True)
class GeneratorSet:
    nvars: int
    gens: tuple[MultiPoly, ...]
    degrees: tuple[int, ...]
    jacobian_independent: bool
    complete: bool = False

    def __len__(self):
        return len(self.gens)

    def render(self, prefix: str = "x") -> list[str]:
        return [g.render(prefix) for g in self.gens]


def make_generator_set(gens: Sequence[MultiPoly], complete: bool = False) -> GeneratorSet:
    gens = tuple(gens)
    n = gens[0].nvars
    degs = tuple(g.degree() for g in gens)
    indep = len(gens) == n and bool(jacobian_det(list(gens)))
    return GeneratorSet(n, gens, degs, indep, complete)


def _exponents(degs: Sequence[int], total: int):
    """Exponent tuples ``a`` with ``sum a_i * degs[i] == total``."""
    if not degs:
        if total == 0:
            yield ()
        return
    d0, rest = degs[0], degs[1:]
    if d0 == 0:
        raise ValueError("generators must have positive degree")
    for a in range(total // d0, -1, -1):
        for tail in _exponents(rest, total - a * d0):
            yield (a,) + tail


class _ProductCache:
    def __init__(self, gens: Sequence[MultiPoly]):
        self.gens = list(gens)
        self.powers: dict = {}

    def power(self, i: int, k: int) -> MultiPoly:
        key = (i, k)
        if key not in self.powers:
            self.powers[key] = self.gens[i] ** k
        return self.powers[key]

    def product(self, alpha) -> MultiPoly:
        n = self.gens[0].nvars
        out = MultiPoly.const(n, ONE)
        for i, k in enumerate(alpha):
            if k:
                out = out * self.power(i, k)
        return out


def _products_of_degree(cache: _ProductCache, degs, d):
    return [(alpha, cache.product(alpha)) for alpha in _exponents(degs, d)]


def _free_series(degs: Sequence[int]) -> RatFunc:
    den = reduce(lambda acc, k: acc * UniPoly([ONE] + [0] * (k - 1) + [-ONE]), degs, UniPoly.const(ONE))
    return RatFunc(UniPoly.const(ONE), den)


def find_generators(G: MatrixGroup, dmax: int | None = None) -> GeneratorSet:
    """Greedy degree-by-degree search for algebra generators of the invariants.

    At each degree the invariant basis vectors not already in the span of
    products of earlier generators are added.  The search stops at ``dmax``
    (default: the group order, which suffices in characteristic 0) or
    earlier when the generators are algebraically independent and their
    free Hilbert series equals the Molien series.
    """
    n = G.elements[0].rows
    if dmax is None:
        dmax = len(G.elements)
    series = molien(G)
    chosen: list[MultiPoly] = []
    for d in range(1, dmax + 1):
        degs = [g.degree() for g in chosen]
        cache = _ProductCache(chosen)
        span = [p for _, p in _products_of_degree(cache, degs, d)] if chosen else []
        mons = monomials_of_degree(n, d)
        current = rank(coordinates(span, mons), len(mons)) if span else 0
        for b in invariant_basis(G, d, n).basis:
            trial = span + [b]
            r = rank(coordinates(trial, mons), len(mons))
            if r > current:
                chosen.append(b)
                span, current = trial, r
        if len(chosen) == n:
            gs = make_generator_set(chosen)
            if gs.jacobian_independent and _free_series(gs.degrees) == series:
                return make_generator_set(chosen, complete=True)
    return make_generator_set(chosen, complete=True) if chosen else GeneratorSet(n, (), (), False, True)


def express_in_generators(f: MultiPoly, gens, prefix_nvars: int | None = None) -> MultiPoly | None:
    """Write ``f`` as a polynomial in the generators, or return None.

    Homogeneous components are solved separately by linear algebra over all
    generator monomials of the matching weighted degree.
    """
    glist = list(gens.gens if isinstance(gens, GeneratorSet) else gens)
    k = len(glist)
    degs = [g.degree() for g in glist]
    for g in glist:
        if not g.is_homogeneous():
            raise ValueError("generators must be homogeneous")
    out = MultiPoly.zero(k)
    cache = _ProductCache(glist)
    for d in sorted(f.degrees()):
        part = f.homogeneous_part(d)
        if d == 0:
            out = out + MultiPoly.const(k, part.constant_term())
            continue
        prods = _products_of_degree(cache, degs, d)
        if not prods:
            return None
        mons = sorted({e for _, p in prods for e in p.terms} | set(part.terms), reverse=True)
        cols = coordinates([p for _, p in prods], mons)
        a = [list(r) for r in zip(*cols)]
        sol = solve_linear(a, [part.coefficient(e) for e in mons])
        if not sol.consistent:
            return None
        out = out + MultiPoly(k, {alpha: c for (alpha, _), c in zip(prods, sol.particular)})
    return out


@dataclass(frozen=True)
class InducedStructure:
    structure: PoissonStructure
    gens: GeneratorSet
    source: PoissonStructure

    def substitution_check(self) -> bool:
        """Expanding each induced bracket in the x-variables reproduces the original bracket."""
        g = list(self.gens.gens)
        k = len(g)
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                lhs = self.structure.gen_bracket(i, j).substitute(g)
                if lhs != bracket(self.source, g[i - 1], g[j - 1]):
                    return False
        return True

    def render(self) -> str:
        return self.structure.render()


def induced_bracket_table(P: PoissonStructure, gens) -> InducedStructure:
    if not isinstance(gens, GeneratorSet):
        gens = make_generator_set(gens)
    g = list(gens.gens)
    k = len(g)
    table = {}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            b = bracket(P, g[i - 1], g[j - 1])
            e = express_in_generators(b, gens)
            if e is None:
                raise NotClosedUnderBracket((i, j), b)
            table[(i, j)] = e
    return InducedStructure(PoissonStructure(k, table, prefix="y"), gens, P)


def same_algebra(a: Sequence[MultiPoly], b: Sequence[MultiPoly]) -> bool:
    """True when each list's members are polynomials in the other list."""
    return all(express_in_generators(f, b) is not None for f in a) and all(
        express_in_generators(f, a) is not None for f in b
    )


def is_invariant(G, f: MultiPoly) -> bool:
    gens = G.generators if isinstance(G, MatrixGroup) else G
    return all((g.apply(f) if isinstance(g, GradedMap) else f.linear_substitute(g)) == f for g in gens)
