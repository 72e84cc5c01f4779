"""The Poisson enveloping algebra U(P) of a quadratic Poisson structure.

U(P) is generated by x_1..x_n, y_1..y_n with

    [x_i, x_j] = 0,   [y_i, x_j] = {x_i, x_j},   [y_i, y_j] = sum_k d{x_i,x_j}/dx_k y_k.

Letters are encoded as integers: x_i is ``i - 1`` and y_i is ``n + i - 1``,
so the PBW order x_1 < ... < x_n < y_1 < ... < y_n is integer order and a
word is a normal (PBW) monomial exactly when it is nondecreasing.  Every
rewrite rule replaces a descent by words of the same length that are
lexicographically smaller, so rewriting terminates; confluence is checked
rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement, product
from math import comb
from typing import Iterable, Mapping, Sequence

from .autgrp import ClosureCapExceeded, GradedMap, MatrixGroup, NotQuadratic, order_of  # noqa: F401
from .poisson import PoissonStructure
from .poly import Matrix, MultiPoly, RatFunc, UniPoly, det_one_minus_t, monomials_of_degree, rank
from .scalar import DEFAULT_ORDER_BOUND, ONE, ZERO, Cyclo, as_cyclo, order_as_root_of_unity

__all__ = [
    "EnvelopingAlgebra",
    "PBWElement",
    "InducedMap",
    "InfiniteOrder",
    "ConsistencyResult",
    "parse_word",
    "normal_form",
    "verify_pbw_consistency",
    "induce",
    "check_induced_hom",
    "eigen_profile_doubling",
    "quasi_reflection_screen",
    "trace_series_env",
    "brute_force_env_trace",
    "diagonal_env_trace",
    "hdet_env",
    "laurent_hdet",
    "gorenstein_criterion",
    "env_invariant_dims",
    "env_molien",
    "log_canonical_plane",
    "check_cyclic_example",
]

Word = tuple  # tuple of letter codes


class InfiniteOrder(ValueError):
    pass


def parse_word(src: str, n: int) -> Word:
    """``"x1 y2 x1"`` (whitespace-separated, or concatenated) to a word."""
    import re

    letters = re.findall(r"([xy])_?\{?(\d+)\}?", src.replace(" ", ""))
    if "".join(f"{a}{b}" for a, b in letters) != re.sub(r"[_{}\s]", "", src):
        raise ValueError(f"cannot read {src!r} as a word in x1..x{n}, y1..y{n}")
    out = []
    for kind, idx in letters:
        i = int(idx)
        if not 1 <= i <= n:
            raise ValueError(f"letter {kind}{i} outside 1..{n}")
        out.append(i - 1 if kind == "x" else n + i - 1)
    return tuple(out)


def letter_name(c: int, n: int) -> str:
    return f"x{c + 1}" if c < n else f"y{c - n + 1}"


def _x_words(poly: MultiPoly) -> list[tuple[Word, Cyclo]]:
    """A commutative polynomial in the x's as sorted words."""
    out = []
    for e, c in poly.terms.items():
        w = tuple(i for i, k in enumerate(e) for _ in range(k))
        out.append((w, c))
    return out


def _add_into(acc: dict, w, c):
    s = acc.get(w)
    if s is None:
        acc[w] = c
    else:
        s = s + c
        if s:
            acc[w] = s
        else:
            del acc[w]


@dataclass(frozen=True)
class PBWElement:
    """Linear combination of PBW monomials ``x^p y^q``, keyed by ``(p, q)``."""

    n: int
    terms: Mapping

    @classmethod
    def from_words(cls, n: int, combo: Mapping[Word, Cyclo]) -> "PBWElement":
        terms = {}
        for w, c in combo.items():
            if not c:
                continue
            p = [0] * n
            q = [0] * n
            for letter in w:
                if letter < n:
                    p[letter] += 1
                else:
                    q[letter - n] += 1
            terms[(tuple(p), tuple(q))] = c
        return cls(n, terms)

    def words(self) -> dict:
        out = {}
        for (p, q), c in self.terms.items():
            w = tuple(i for i, k in enumerate(p) for _ in range(k)) + tuple(
                self.n + i for i, k in enumerate(q) for _ in range(k)
            )
            out[w] = c
        return out

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PBWElement):
            return NotImplemented
        return self.n == other.n and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def degrees(self) -> set[int]:
        return {sum(p) + sum(q) for p, q in self.terms}

    def as_multipoly(self) -> MultiPoly:
        return MultiPoly(2 * self.n, {p + q: c for (p, q), c in self.terms.items()})

    def render(self) -> str:
        names = [f"x{i}" for i in range(1, self.n + 1)] + [f"y{i}" for i in range(1, self.n + 1)]
        return self.as_multipoly().render(names=names)

    def __str__(self):
        return self.render()


class EnvelopingAlgebra:
    """Rewriting system for U(P) with memoized normal forms."""

    def __init__(self, P: PoissonStructure):
        if not P.is_quadratic:
            raise NotQuadratic("U(P) rewriting needs a quadratic structure")
        self.P = P
        n = self.n = P.nvars
        # y_i x_j -> x_j y_i + {x_i, x_j}
        self._yx = {}
        # y_j y_i (j > i) -> y_i y_j - sum_k d_k{x_i,x_j} y_k
        self._yy = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                b = P.gen_bracket(i, j)
                self._yx[(i, j)] = _x_words(b)
                if j > i:
                    tail = []
                    for k in range(1, n + 1):
                        dk = b.diff(k)
                        for e, c in dk.terms.items():
                            xl = e.index(1)
                            tail.append(((xl, n + k - 1), -c))
                    self._yy[(j, i)] = tail
        self._memo = {"left": {}, "right": {}}

    # -- single rewrite steps ---------------------------------------------

    def rewrite_pair(self, u: int, v: int) -> list[tuple[Word, Cyclo]]:
        """Replacement for the descent ``u v`` (``u > v``) as weighted two-letter words."""
        n = self.n
        if u < n:  # x x
            return [((v, u), ONE)]
        if v < n:  # y_i x_j
            i, j = u - n + 1, v + 1
            return [((v, u), ONE)] + self._yx[(i, j)]
        j, i = u - n + 1, v - n + 1  # y_j y_i
        return [((v, u), ONE)] + self._yy[(j, i)]

    def rewrite_at(self, w: Word, pos: int) -> list[tuple[Word, Cyclo]]:
        return [(w[:pos] + r + w[pos + 2:], c) for r, c in self.rewrite_pair(w[pos], w[pos + 1])]

    # -- normal forms -------------------------------------------------------

    def nf_word(self, w: Word, strategy: str = "left") -> dict:
        """Normal form of one word as ``{sorted word: coefficient}``."""
        memo = self._memo[strategy]
        hit = memo.get(w)
        if hit is not None:
            return hit
        descents = [k for k in range(len(w) - 1) if w[k] > w[k + 1]]
        if not descents:
            result = {w: ONE}
        else:
            pos = descents[0] if strategy == "left" else descents[-1]
            result = {}
            for w2, c in self.rewrite_at(w, pos):
                for w3, c3 in self.nf_word(w2, strategy).items():
                    _add_into(result, w3, c * c3)
        memo[w] = result
        return result

    def nf(self, combo: Mapping[Word, Cyclo] | Iterable, strategy: str = "left") -> dict:
        if not isinstance(combo, Mapping):
            combo = {tuple(combo): ONE}
        out = {}
        for w, c in combo.items():
            for w2, c2 in self.nf_word(tuple(w), strategy).items():
                _add_into(out, w2, as_cyclo(c) * c2)
        return out

    def normal_form(self, combo, strategy: str = "left") -> PBWElement:
        return PBWElement.from_words(self.n, self.nf(combo, strategy))

    def multiply(self, a: Mapping[Word, Cyclo], b: Mapping[Word, Cyclo]) -> dict:
        out = {}
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                for w, c in self.nf_word(w1 + w2).items():
                    _add_into(out, w, c1 * c2 * c)
        return out

    def relations(self) -> list[tuple[str, dict]]:
        """Defining relations as ``(label, element)`` pairs; each must vanish in U(P)."""
        n = self.n
        rels = []
        for i in range(n):
            for j in range(n):
                if i < j:
                    rels.append((f"[x{i+1},x{j+1}]", {(i, j): ONE, (j, i): -ONE}))
                r = {(n + i, j): ONE, (j, n + i): -ONE}
                for w, c in self._yx[(i + 1, j + 1)]:
                    _add_into(r, w, -c)
                rels.append((f"[y{i+1},x{j+1}]", r))
                if i < j:
                    r = {(n + i, n + j): ONE, (n + j, n + i): -ONE}
                    for w, c in self._yy[(j + 1, i + 1)]:
                        _add_into(r, w, c)
                    rels.append((f"[y{i+1},y{j+1}]", r))
        return rels


def normal_form(P: PoissonStructure, w, strategy: str = "left") -> PBWElement:
    """Normal form of a word (string, letter tuple) or ``{word: coeff}`` combination."""
    alg = P if isinstance(P, EnvelopingAlgebra) else EnvelopingAlgebra(P)
    if isinstance(w, str):
        w = parse_word(w, alg.n)
    return alg.normal_form(w, strategy)


@dataclass(frozen=True)
class ConsistencyResult:
    ok: bool
    witness: tuple | None = None
    reason: str = ""
    counts: tuple = ()

    def __bool__(self):
        return self.ok


def verify_pbw_consistency(P: PoissonStructure, dmax: int = 4) -> ConsistencyResult:
    """Check that the rewriting system presents a PBW basis through degree ``dmax``.

    1. Every overlap ``a > b > c`` resolves: rewriting ``ab`` first or ``bc``
       first gives the same normal form.
    2. Leftmost and rightmost strategies agree on every word of length
       ``<= dmax``.
    3. The number of normal monomials in degree ``d`` is ``C(2n-1+d, d)``.
    """
    alg = P if isinstance(P, EnvelopingAlgebra) else EnvelopingAlgebra(P)
    n = alg.n
    letters = range(2 * n)
    for a in letters:
        for b in range(a):
            for c in range(b):
                w = (a, b, c)
                left = alg.nf({w2: c2 for w2, c2 in alg.rewrite_at(w, 0)})
                right = alg.nf({w2: c2 for w2, c2 in alg.rewrite_at(w, 1)})
                if left != right:
                    return ConsistencyResult(False, tuple(letter_name(k, n) for k in w), "overlap does not resolve")
    for d in range(2, dmax + 1):
        for w in product(letters, repeat=d):
            if alg.nf_word(w, "left") != alg.nf_word(w, "right"):
                return ConsistencyResult(
                    False, tuple(letter_name(k, n) for k in w), "leftmost and rightmost rewriting disagree"
                )
    counts = tuple(normal_monomial_count(n, d) for d in range(dmax + 1))
    for d, c in enumerate(counts):
        if c != comb(2 * n - 1 + d, d):
            return ConsistencyResult(False, (d,), "normal monomial count is off", counts)
    return ConsistencyResult(True, None, "", counts)


def normal_monomial_count(n: int, d: int) -> int:
    """Number of nondecreasing words of length ``d`` over ``2n`` letters."""
    return sum(1 for _ in combinations_with_replacement(range(2 * n), d))


def pbw_basis(n: int, d: int) -> list[Word]:
    return list(combinations_with_replacement(range(2 * n), d))


# -- induced maps -------------------------------------------------------------


@dataclass(frozen=True)
class InducedMap:
    """Block-diagonal action ``x_i -> sum M_ij x_j``, ``y_i -> sum M_ij y_j``."""

    matrix: Matrix
    source: Matrix

    @property
    def n(self) -> int:
        return self.source.rows

    def letter_image(self, letter: int) -> dict:
        n = self.n
        i, off = (letter, 0) if letter < n else (letter - n, n)
        return {(off + j,): c for j, c in enumerate(self.source.row(i)) if c}

    def apply(self, alg: EnvelopingAlgebra, combo: Mapping[Word, Cyclo]) -> dict:
        """Image of a combination of words, returned in normal form."""
        out = {}
        for w, c in combo.items():
            acc = {(): as_cyclo(c)}
            for letter in w:
                acc = alg.multiply(acc, self.letter_image(letter))
            for w2, c2 in acc.items():
                _add_into(out, w2, c2)
        return out


def induce(phi) -> InducedMap:
    m = phi.matrix if isinstance(phi, GradedMap) else phi
    if not m.det():
        raise ValueError("induce needs an invertible matrix")
    return InducedMap(Matrix.block_diag(m, m), m)


@dataclass(frozen=True)
class HomCheck:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_induced_hom(P: PoissonStructure, phi1, phi2) -> HomCheck:
    """Induction respects products, and each induced map kills the relations of U(P)."""
    m1 = phi1.matrix if isinstance(phi1, GradedMap) else phi1
    m2 = phi2.matrix if isinstance(phi2, GradedMap) else phi2
    if induce(m1).matrix * induce(m2).matrix != induce(m1 * m2).matrix:
        return HomCheck(False, "induced matrices do not multiply compatibly")
    alg = EnvelopingAlgebra(P)
    for name, m in (("phi1", m1), ("phi2", m2)):
        psi = induce(m)
        for label, rel in alg.relations():
            if psi.apply(alg, rel):
                return HomCheck(False, f"{name} does not preserve relation {label}")
    return HomCheck(True)


def eigen_profile_doubling(phi) -> bool:
    m = phi.matrix if isinstance(phi, GradedMap) else phi
    return induce(m).matrix.charpoly() == m.charpoly() ** 2


def quasi_reflection_screen(psi, bound: int = DEFAULT_ORDER_BOUND) -> str:
    """Classify a graded map of a 2n-variable algebra as ``classical``, ``mystic`` or ``none``."""
    m = psi.matrix if isinstance(psi, (InducedMap, GradedMap)) else psi
    size = m.rows
    cp = m.charpoly()
    t = UniPoly.t()
    ident = Matrix.identity(size)
    xi = m.trace() - (size - 1)
    if xi != ONE and order_as_root_of_unity(xi, bound) is not None:
        if cp == (t - 1) ** (size - 1) * (t - xi) and (m - ident) * (m - ident.scale(xi)) == Matrix.zeros(size, size):
            return "classical"
    if size >= 2 and cp == (t - 1) ** (size - 2) * (t * t + 1) and order_of(m, bound) == 4:
        return "mystic"
    return "none"


# -- traces -------------------------------------------------------------------


def trace_series_env(phi) -> RatFunc:
    """``1 / det(I - t phi)^2``."""
    m = phi.matrix if isinstance(phi, GradedMap) else phi
    d = det_one_minus_t(m)
    return RatFunc(UniPoly.const(ONE), d * d)


def brute_force_env_trace(P: PoissonStructure, phi, d: int, alg: EnvelopingAlgebra | None = None) -> Cyclo:
    """Trace of the induced map on U(P)_d, by rewriting the image of every PBW monomial."""
    m = phi.matrix if isinstance(phi, GradedMap) else phi
    alg = alg or EnvelopingAlgebra(P)
    psi = induce(m)
    acc = ZERO
    for w in pbw_basis(alg.n, d):
        img = psi.apply(alg, {w: ONE})
        acc = acc + img.get(w, ZERO)
    return acc


def diagonal_env_trace(phi, d: int) -> Cyclo:
    """Sum of ``b_p b_q`` over ``|p| + |q| = d``, with ``b_p`` the diagonal coefficient of ``x^p`` under ``phi``."""
    m = phi.matrix if isinstance(phi, GradedMap) else phi
    n = m.rows
    diag = {}
    for k in range(d + 1):
        for e in monomials_of_degree(n, k):
            diag[e] = MultiPoly.monomial(e).linear_substitute(m).coefficient(e)
    acc = ZERO
    for k in range(d + 1):
        sx = sum((diag[e] for e in monomials_of_degree(n, k)), ZERO)
        sy = sum((diag[e] for e in monomials_of_degree(n, d - k)), ZERO)
        acc = acc + sx * sy
    return acc


def hdet_env(phi, bound: int = DEFAULT_ORDER_BOUND) -> Cyclo:
    """Homological determinant of the induced map, ``det(phi)^2``.

    Refused for maps of infinite order.  The value is cross-checked against
    the leading term ``hdet^{-1} t^{-2n}`` of the trace series at infinity.
    """
    m = phi.matrix if isinstance(phi, GradedMap) else phi
    if order_of(m, bound) is None:
        raise InfiniteOrder(f"no finite order up to {bound}")
    value = m.det() ** 2
    exponent, lead = trace_series_env(m).laurent_leading()
    if exponent != -2 * m.rows or lead.inverse() != value:
        raise ArithmeticError("trace series leading term disagrees with det^2")
    return value


def gorenstein_criterion(G, bound: int = DEFAULT_ORDER_BOUND) -> bool:
    """True when every generator has hdet 1; hdet is multiplicative, so the whole group then does."""
    gens = G.generators if isinstance(G, MatrixGroup) else list(G)
    return all(hdet_env(g, bound) == ONE for g in gens)


def laurent_hdet(phi) -> tuple[int, Cyclo]:
    """``(exponent, 1 / leading coefficient)`` of the trace series at infinity."""
    m = phi.matrix if isinstance(phi, GradedMap) else phi
    exponent, lead = trace_series_env(m).laurent_leading()
    return exponent, lead.inverse()


# -- invariants of U(P) -------------------------------------------------------


def induced_matrix_on_degree(alg: EnvelopingAlgebra, phi, d: int) -> list[list[Cyclo]]:
    """Matrix of the induced map on U(P)_d in the PBW basis; column k is the image of basis word k."""
    m = phi.matrix if isinstance(phi, GradedMap) else phi
    psi = induce(m)
    basis = pbw_basis(alg.n, d)
    index = {w: k for k, w in enumerate(basis)}
    cols = []
    for w in basis:
        img = psi.apply(alg, {w: ONE})
        col = [ZERO] * len(basis)
        for w2, c in img.items():
            col[index[w2]] = c
        cols.append(col)
    return [list(r) for r in zip(*cols)]


def env_invariant_dims(P: PoissonStructure, G, dmax: int) -> list[int]:
    """Dimensions of the degree-d fixed spaces of U(P) under the induced group."""
    alg = EnvelopingAlgebra(P)
    gens = G.generators if isinstance(G, MatrixGroup) else list(G)
    out = []
    for d in range(dmax + 1):
        size = comb(2 * alg.n - 1 + d, d)
        rows = []
        for g in gens:
            mat = induced_matrix_on_degree(alg, g, d)
            for k, row in enumerate(mat):
                rows.append([c - ONE if j == k else c for j, c in enumerate(row)])
        out.append(size - (rank(rows, size) if rows else 0))
    return out


def env_molien(G: MatrixGroup) -> RatFunc:
    acc = RatFunc(ZERO)
    for m in G.elements:
        acc = acc + trace_series_env(m)
    return acc / len(G.elements)


# -- the rank-two example with {x1, x2} = q x1 x2 ---------------------------


def log_canonical_plane(q) -> PoissonStructure:
    """k[x1, x2] with ``{x1, x2} = q x1 x2``."""
    return PoissonStructure(2, {(1, 2): MultiPoly(2, {(1, 1): q})})


@dataclass(frozen=True)
class RelationReport:
    commuting: bool
    exchange: bool
    b_relations: tuple[bool, ...]
    c_solutions: tuple  # per i: value of p making the relation vanish, or None


def check_cyclic_example(n: int, q) -> RelationReport:
    """Test the listed relations among ``a_{k+1} = x1^{n-k} y1^k``, ``b = x2``, ``c = y2``.

    The last family contains an otherwise unspecified scalar ``p``; for each
    ``i`` the report gives the ``p`` that makes it vanish, or None if none does.
    """
    q = as_cyclo(q)
    alg = EnvelopingAlgebra(log_canonical_plane(q))
    x1, x2, y1, y2 = 0, 1, 2, 3
    a = [None] + [{(x1,) * (n - k) + (y1,) * k: ONE} for k in range(n + 1)]  # a[1..n+1]
    b = {(x2,): ONE}
    c = {(y2,): ONE}

    def sub(u, v):
        out = dict(u)
        for w, coef in v.items():
            _add_into(out, w, -coef)
        return out

    def scale(u, s):
        return {w: s * coef for w, coef in u.items()} if s else {}

    commuting = all(
        not alg.nf(sub(alg.multiply(a[i], a[j]), alg.multiply(a[j], a[i])))
        for i in range(1, n + 2)
        for j in range(1, n + 2)
    )
    exchange = all(
        alg.nf(alg.multiply(a[i], a[j])) == alg.nf(alg.multiply(a[k], a[i + j - k]))
        for i in range(1, n + 2)
        for j in range(1, n + 2)
        for k in range(1, n + 2)
        if 1 <= i + j - k <= n + 1
    )
    b_rel = []
    c_sol = []
    for i in range(n + 1):
        rhs_b = {}
        rhs_c0 = {}
        rhs_c1 = {}
        for j in range(i + 1):
            coef = as_cyclo(comb(i, j)) * q ** j
            for w, v in alg.multiply(b, a[i + 1 - j]).items():
                _add_into(rhs_b, w, coef * v)
            for w, v in alg.multiply(c, a[i + 1 - j]).items():
                _add_into(rhs_c0, w, coef * v)
            for w, v in alg.multiply(scale(b, as_cyclo(n)), a[i + 1 - j]).items():
                _add_into(rhs_c1, w, coef * v)
        b_rel.append(not alg.nf(sub(alg.multiply(a[i + 1], b), rhs_b)))
        r0 = alg.nf(sub(alg.multiply(a[i + 1], c), rhs_c0))
        r1 = alg.nf(rhs_c1)
        c_sol.append(_solve_scalar(r0, r1))
    return RelationReport(commuting, exchange, tuple(b_rel), tuple(c_sol))


def _solve_scalar(r0: dict, r1: dict):
    """The ``p`` with ``r0 - p r1 = 0``, "any" if every p works, None if none does."""
    if not r1:
        return "any" if not r0 else None
    w = next(iter(r1))
    p = r0.get(w, ZERO) / r1[w]
    ok = all(r0.get(k, ZERO) == p * r1.get(k, ZERO) for k in set(r0) | set(r1))
    return p if ok else None
