"""Text input: polynomial expressions, matrices, rational functions and
key/value structure documents.

Expression grammar (whitespace is insignificant)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary | <juxtaposed atom>)*
    unary   := '-' unary | power
    power   := atom ('^' exponent)?
    atom    := INT | NAME | 'zeta(' INT ')' | 'sqrt(' INT ')' | '(' expr ')'

A factor may follow another without ``*`` when it starts with a name,
``zeta``/``sqrt`` or a parenthesis, so ``3x1``, ``x_1^2x_2`` and ``2(x1+x2)``
are accepted.  Names are letters followed by an optional index written
``1``, ``_1`` or ``_{1}``.  A leading backslash is dropped, so TeX-style
``\\lambda`` reads as ``lambda``, and ``\\frac{a}{b}`` means ``(a)/(b)``.
Exponents are nonnegative integer literals, optionally braced.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .poly import Matrix, MultiPoly, RatFunc
from .scalar import ONE, Cyclo, as_cyclo, root_of_unity

__all__ = [
    "ParseError",
    "UnknownVariable",
    "ExponentNotInteger",
    "DimensionMismatch",
    "parse_expr",
    "evaluate",
    "parse_poly",
    "parse_scalar",
    "parse_matrix",
    "parse_ratfunc",
    "parse_structure",
    "parse_document",
    "Document",
    "Section",
]


class ParseError(ValueError):
    """Malformed input; ``pos`` is a 0-based character offset when known."""

    def __init__(self, message: str, pos: int | None = None, source: str | None = None):
        self.pos = pos
        self.source = source
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class UnknownVariable(ParseError):
    pass


class ExponentNotInteger(ParseError):
    pass


class DimensionMismatch(ParseError):
    pass


# -- lexer ------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d*)?)
  | (?P<name>\\?[A-Za-z]+(?:_\{\d+\}|_\d+|\d+)?)
  | (?P<op>[-+*/^(){}\[\],;])
    """,
    re.VERBOSE,
)

_CHAR_ALIASES = {"−": "-", "·": "*", "⋅": "*", "×": "*"}


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    text = "".join(_CHAR_ALIASES.get(ch, ch) for ch in src)
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, src)
        kind = m.lastgroup
        if kind == "num" and "." in m.group():
            raise ParseError("decimal literals are not supported; write a fraction", pos, src)
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


# -- AST ----------------------------------------------------------------------
# Nodes are tuples whose first item is the kind:
#   ("num", Fraction)  ("zeta", N)  ("sqrt", k)  ("var", base, index|None, pos)
#   ("add"|"sub"|"mul"|"div", left, right)  ("neg", operand)  ("pow", base, k)

_NAME_RE = re.compile(r"([A-Za-z]+)(?:_\{(\d+)\}|_(\d+)|(\d+))?$")


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            raise ParseError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.pos, self.src)
        return self.advance()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.tok.pos, self.src)

    def expr(self):
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def _starts_juxtaposed(self) -> bool:
        t = self.tok
        return t.kind == "name" or t.text == "("

    def term(self):
        node = self.unary()
        while True:
            if self.tok.text in ("*", "/"):
                op = self.advance().text
                node = ("mul" if op == "*" else "div", node, self.unary())
            elif self._starts_juxtaposed():
                node = ("mul", node, self.power())
            else:
                return node

    def unary(self):
        if self.tok.text == "-":
            self.advance()
            return ("neg", self.unary())
        if self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.text == "^":
            self.advance()
            braced = self.tok.text == "{"
            if braced:
                self.advance()
            t = self.tok
            if t.kind != "num":
                raise ExponentNotInteger("exponent must be a nonnegative integer literal", t.pos, self.src)
            self.advance()
            if braced:
                self.expect("}")
            if self.tok.text == "^":
                raise self.error("chained exponents need parentheses")
            return ("pow", base, int(t.text))
        return base

    def _braced(self):
        self.expect("{")
        node = self.expr()
        self.expect("}")
        return node

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return ("num", Fraction(int(t.text)))
        if t.kind == "name":
            self.advance()
            if t.text == "\\frac":
                num = self._braced()
                return ("div", num, self._braced())
            if t.text in ("zeta", "sqrt"):
                self.expect("(")
                neg = False
                if t.text == "sqrt" and self.tok.text == "-":
                    self.advance()
                    neg = True
                arg = self.tok
                if arg.kind != "num":
                    raise ParseError(f"{t.text}(...) takes an integer literal", arg.pos, self.src)
                self.advance()
                self.expect(")")
                k = int(arg.text)
                if t.text == "zeta":
                    if k < 1:
                        raise ParseError("zeta(N) needs N >= 1", arg.pos, self.src)
                    return ("zeta", k, arg.pos)
                return ("sqrt", -k if neg else k, arg.pos)
            m = _NAME_RE.match(t.text.lstrip("\\"))
            index = next((g for g in m.groups()[1:] if g is not None), None)
            return ("var", m.group(1), None if index is None else int(index), t.pos)
        if t.text in ("(", "{"):
            close = ")" if t.text == "(" else "}"
            self.advance()
            node = self.expr()
            self.expect(close)
            return node
        raise self.error(f"unexpected {t.text or 'end of input'!r}")


def parse_expr(src: str):
    """Parse a whole string into an AST."""
    p = _Parser(src)
    if p.tok.kind == "end":
        raise ParseError("empty expression", 0, src)
    node = p.expr()
    if p.tok.kind != "end":
        raise p.error(f"unexpected {p.tok.text!r}")
    return node


# -- evaluation -------------------------------------------------------------

_SQRT = {
    -1: lambda: root_of_unity(1, 4),
    -3: lambda: root_of_unity(1, 3) * 2 + 1,
    2: lambda: root_of_unity(1, 8) + root_of_unity(7, 8),
    3: lambda: root_of_unity(1, 12) + root_of_unity(11, 12),
}


def _sqrt(k: int, pos: int, src: str) -> Cyclo:
    r = int(abs(k) ** 0.5)
    for s in (r - 1, r, r + 1):
        if s >= 0 and s * s == abs(k):
            return as_cyclo(s) * (_SQRT[-1]() if k < 0 else ONE)
    if k in _SQRT:
        return _SQRT[k]()
    raise ParseError(f"sqrt({k}) is not available; write it with zeta(N)", pos, src)


def evaluate(node, resolve: Callable, src: str = "", modulus: int | None = None):
    """Evaluate an AST; ``resolve(base, index, pos)`` supplies variable values."""
    kind = node[0]
    if kind == "num":
        return as_cyclo(node[1])
    if kind == "zeta":
        n = node[1]
        if modulus is not None and modulus % n:
            raise ParseError(f"zeta({n}) does not lie in Q(zeta({modulus}))", node[2], src)
        return root_of_unity(1, n)
    if kind == "sqrt":
        return _sqrt(node[1], node[2], src)
    if kind == "var":
        return resolve(node[1], node[2], node[3])
    if kind == "neg":
        return -evaluate(node[1], resolve, src, modulus)
    if kind == "pow":
        return evaluate(node[1], resolve, src, modulus) ** node[2]
    a = evaluate(node[1], resolve, src, modulus)
    b = evaluate(node[2], resolve, src, modulus)
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        if isinstance(b, MultiPoly):
            if not b.is_constant():
                raise ParseError("division by a non-constant polynomial", None, src)
            b = b.constant_term()
        if not b:
            raise ParseError("division by zero", None, src)
        return a / b
    raise AssertionError(kind)


def _scalar_resolver(src: str, env: Mapping[str, Cyclo] | None):
    env = env or {}

    def resolve(base, index, pos):
        name = base if index is None else f"{base}{index}"
        if name in env:
            return as_cyclo(env[name])
        raise UnknownVariable(f"unknown symbol {name!r}", pos, src)

    return resolve


def parse_scalar(src: str, env: Mapping[str, Cyclo] | None = None, modulus: int | None = None) -> Cyclo:
    """Evaluate a constant expression; ``env`` binds named parameters."""
    return evaluate(parse_expr(src), _scalar_resolver(src, env), src, modulus)


def parse_poly(
    src: str,
    nvars: int,
    prefix: str = "x",
    names: Sequence[str] | None = None,
    env: Mapping[str, Cyclo] | None = None,
    modulus: int | None = None,
) -> MultiPoly:
    """Parse ``src`` as a polynomial in ``prefix1..prefix<nvars>``.

    ``names`` optionally gives explicit variable names instead; ``env`` binds
    scalar parameters that may appear in coefficients.
    """
    env = env or {}
    lookup = {n: i for i, n in enumerate(names, 1)} if names else {}
    gens = MultiPoly.gens(nvars)

    def resolve(base, index, pos):
        name = base if index is None else f"{base}{index}"
        if lookup:
            if name in lookup:
                return gens[lookup[name] - 1]
        elif base == prefix and index is not None:
            if 1 <= index <= nvars:
                return gens[index - 1]
            raise UnknownVariable(f"variable {name!r} outside 1..{nvars}", pos, src)
        if name in env:
            return MultiPoly.const(nvars, env[name])
        raise UnknownVariable(f"unknown variable {name!r}", pos, src)

    value = evaluate(parse_expr(src), resolve, src, modulus)
    if not isinstance(value, MultiPoly):
        value = MultiPoly.const(nvars, value)
    return value


def parse_ratfunc(src: str, var: str = "t", modulus: int | None = None) -> RatFunc:
    """Parse a rational function of one variable, e.g. ``1/((1-t)^2*(1-t^2))``."""
    t = RatFunc.t()

    def resolve(base, index, pos):
        if base == var and index is None:
            return t
        raise UnknownVariable(f"unknown variable {base}{index or ''!s}", pos, src)

    node = parse_expr(src)
    value = _eval_ratfunc(node, resolve, src, modulus)
    return value if isinstance(value, RatFunc) else RatFunc(value)


def _eval_ratfunc(node, resolve, src, modulus):
    if node[0] == "div":
        a = _eval_ratfunc(node[1], resolve, src, modulus)
        b = _eval_ratfunc(node[2], resolve, src, modulus)
        return RatFunc(1) * a / b
    if node[0] in ("add", "sub", "mul"):
        a = _eval_ratfunc(node[1], resolve, src, modulus)
        b = _eval_ratfunc(node[2], resolve, src, modulus)
        a = a if isinstance(a, RatFunc) else RatFunc(a)
        return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__}[node[0]](b)
    if node[0] == "neg":
        return -_eval_ratfunc(node[1], resolve, src, modulus)
    if node[0] == "pow":
        return _eval_ratfunc(node[1], resolve, src, modulus) ** node[2]
    return evaluate(node, resolve, src, modulus)


def parse_matrix(
    src: str, env: Mapping[str, Cyclo] | None = None, modulus: int | None = None
) -> Matrix:
    """Parse ``[a, b; c, d]`` (rows separated by ``;``) into a Matrix."""
    p = _Parser(src)
    resolve = _scalar_resolver(src, env)
    p.expect("[")
    rows: list[list[Cyclo]] = [[]]
    row_pos = [p.tok.pos]
    while True:
        node = p.expr()
        rows[-1].append(evaluate(node, resolve, src, modulus))
        if p.tok.text == ",":
            p.advance()
        elif p.tok.text == ";":
            p.advance()
            rows.append([])
            row_pos.append(p.tok.pos)
        elif p.tok.text == "]":
            p.advance()
            break
        else:
            raise p.error(f"expected ',', ';' or ']', found {p.tok.text or 'end of input'!r}")
    if p.tok.kind != "end":
        raise p.error(f"unexpected {p.tok.text!r} after matrix")
    width = len(rows[0])
    for r, pos in zip(rows, row_pos):
        if len(r) != width:
            raise DimensionMismatch(f"row has {len(r)} entries, expected {width}", pos, src)
    return Matrix(rows)


# -- documents ---------------------------------------------------------------


@dataclass
class Section:
    kind: str
    name: str
    values: dict = field(default_factory=dict)

    def get(self, key: str, default=None):
        return self.values.get(key, default)

    def require(self, key: str) -> str:
        if key not in self.values:
            raise ParseError(f"[{self.kind}{' ' + self.name if self.name else ''}] is missing {key!r}")
        return self.values[key]

    def prefixed(self, prefix: str) -> dict:
        """Entries ``prefix.<rest>`` as ``{rest: value}`` in file order."""
        p = prefix + "."
        return {k[len(p):]: v for k, v in self.values.items() if k.startswith(p)}


@dataclass
class Document:
    sections: list[Section]

    def find(self, kind: str, name: str | None = None) -> Section | None:
        for s in self.sections:
            if s.kind == kind and (name is None or s.name == name):
                return s
        return None

    def all(self, kind: str) -> list[Section]:
        return [s for s in self.sections if s.kind == kind]


def _unquote(v: str) -> str:
    v = v.strip()
    if len(v) >= 2 and v[0] == v[-1] and v[0] in "\"'":
        return v[1:-1]
    return v


def parse_document(text: str) -> Document:
    """Read the flat ``[kind name]`` / ``key = value`` format."""
    cp = configparser.ConfigParser(
        interpolation=None, comment_prefixes=("#",), inline_comment_prefixes=None, delimiters=("=",)
    )
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ParseError(f"malformed document: {exc}") from None
    sections = []
    for header in cp.sections():
        kind, _, name = header.strip().partition(" ")
        values = {k: _unquote(v) for k, v in cp[header].items()}
        sections.append(Section(kind, name.strip(), values))
    return Document(sections)


def structure_from_section(sec: Section, modulus: int | None = None):
    """Build a PoissonStructure from a ``[structure]`` section."""
    from .poisson import PoissonStructure, Superpotential, from_superpotential

    try:
        nvars = int(sec.get("nvars", "3"))
    except ValueError:
        raise ParseError("nvars must be an integer") from None
    prefix = sec.get("prefix", "x")
    env = {k: parse_scalar(v, modulus=modulus) for k, v in sec.prefixed("param").items()}
    omega_src = sec.get("superpotential")
    brackets = sec.prefixed("bracket")
    if omega_src is not None:
        if brackets:
            raise ParseError("give either a superpotential or bracket entries, not both")
        omega = parse_poly(omega_src, nvars, prefix, env=env, modulus=modulus)
        return from_superpotential(Superpotential(omega))
    table = {}
    for key, src in brackets.items():
        if not re.fullmatch(r"\d\d", key) and not re.fullmatch(r"\d+,\d+", key):
            raise ParseError(f"bracket key {key!r} must look like 12 or 1,2")
        i, j = (int(c) for c in (key.split(",") if "," in key else key))
        if not (1 <= i <= nvars and 1 <= j <= nvars) or i == j:
            raise DimensionMismatch(f"bracket.{key} does not name a pair of distinct variables in 1..{nvars}")
        value = parse_poly(src, nvars, prefix, env=env, modulus=modulus)
        if i > j:
            i, j, value = j, i, -value
        if (i, j) in table:
            raise ParseError(f"bracket {{x{i},x{j}}} given twice")
        table[(i, j)] = value
    return PoissonStructure(nvars, table)


def parse_structure(text: str, modulus: int | None = None):
    """Parse a document and return the PoissonStructure of its ``[structure]`` section."""
    doc = parse_document(text)
    sec = doc.find("structure")
    if sec is None:
        raise ParseError("document has no [structure] section")
    return structure_from_section(sec, modulus)
