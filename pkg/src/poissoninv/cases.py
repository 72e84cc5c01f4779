"""Bundled case files: nine cubic superpotentials with their automorphism
families, reflections, groups and expected invariant data.

A case file is a flat document (see :mod:`exprparse`) with one
``[structure]`` section, any number of ``[family name]`` sections and any
number of ``[group name]`` sections.  Expected values live under
``expect.<key>`` and each one must be paired with ``source.<key>`` set to
``literature``, ``derived`` or ``trivial``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .autgrp import (
    DEFAULT_CLOSURE_CAP,
    GradedMap,
    MatrixGroup,
    classify_reflection,
    group_closure,
    is_poisson_automorphism,
    molien,
    order_of,
)
from .exprparse import (
    Document,
    ParseError,
    Section,
    parse_document,
    parse_matrix,
    parse_poly,
    parse_ratfunc,
    parse_scalar,
    structure_from_section,
)
from .invariants import (
    find_generators,
    induced_bracket_table,
    is_invariant,
    make_generator_set,
    same_algebra,
)
from .poisson import (
    PoissonStructure,
    bracket_quotient_hilbert,
    from_superpotential,
    is_unimodular,
    solve_superpotential,
    verify_jacobi,
)
from .poly import Matrix, MultiPoly, taylor_coeffs
from .scalar import DEFAULT_ORDER_BOUND, Cyclo, as_cyclo
from .uenv import (
    brute_force_env_trace,
    eigen_profile_doubling,
    hdet_env,
    induce,
    quasi_reflection_screen,
    trace_series_env,
)

__all__ = [
    "CASE_IDS",
    "SOURCES",
    "CaseBundle",
    "Family",
    "GroupSpec",
    "CheckLine",
    "load_case",
    "load_bundle",
    "all_cases",
    "case_text",
    "parse_cyclic_table",
    "run_pipeline",
]

CASE_IDS = tuple(range(1, 10))
SOURCES = ("literature", "derived", "trivial")
KINDS = ("automorphism", "reflection", "non-automorphism")


def _split_list(src: str | None) -> list[str]:
    return [p.strip() for p in (src or "").split(",") if p.strip()]


def _expectations(sec: Section) -> dict[str, str]:
    expect = sec.prefixed("expect")
    sources = sec.prefixed("source")
    for key in expect:
        if sources.get(key) not in SOURCES:
            raise ParseError(f"[{sec.kind} {sec.name}] expect.{key} needs source.{key} in {SOURCES}")
    return expect


def _eval_env(items, base: dict | None = None, modulus: int | None = None) -> dict[str, Cyclo]:
    """Evaluate ``name = expr`` pairs in order, each seeing the earlier ones."""
    env = dict(base or {})
    for name, src in items:
        env[name] = parse_scalar(src, env, modulus)
    return env


def parse_cyclic_table(src: str, prefix: str = "y", env: dict | None = None, nvars: int = 3) -> PoissonStructure:
    """Parse ``(b12, b23, b31)`` into a three-variable structure."""
    s = src.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError("a cyclic table is written (b12, b23, b31)", 0, src)
    parts, depth, start = [], 0, 1
    for k, ch in enumerate(s[1:-1], 1):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(s[start:k])
            start = k + 1
    parts.append(s[start:-1])
    if len(parts) != 3:
        raise ParseError(f"a cyclic table needs three entries, found {len(parts)}", 0, src)
    b12, b23, b31 = (parse_poly(p, nvars, prefix, env=env) for p in parts)
    return PoissonStructure.from_cyclic(b12, b23, b31, prefix=prefix)


@dataclass
class Family:
    """Parameterized matrix shape with sampling rules."""

    name: str
    kind: str
    matrix_src: str
    params: list[str]
    nonzero: list[str]
    lets: list[tuple[str, str]]
    derived: list[tuple[str, str]]
    sample: dict[str, Cyclo]
    expect: dict[str, str]

    def instantiate(self, values: dict | None = None) -> Matrix:
        env = _eval_env(self.lets)
        env.update({k: as_cyclo(v) for k, v in (values if values is not None else self.sample).items()})
        env = _eval_env(self.derived, env)
        return parse_matrix(self.matrix_src, env)

    def random_values(self, rng: random.Random, tries: int = 200) -> dict[str, Cyclo]:
        """Nonzero-where-required rationals giving an invertible instance."""
        for _ in range(tries):
            values = {}
            for p in self.params:
                num = rng.randint(-9, 9)
                if num == 0 and p in self.nonzero:
                    num = rng.choice((-1, 1)) * rng.randint(1, 9)
                values[p] = as_cyclo(Fraction(num, rng.randint(1, 5)))
            try:
                m = self.instantiate(values)
            except (ParseError, ZeroDivisionError):
                continue
            env = _eval_env(self.derived, _eval_env(self.lets, values))
            if all(env[p] for p in self.nonzero) and m.det():
                return values
        raise RuntimeError(f"family {self.name} produced no invertible instance")

    def random_instances(self, rng: random.Random, count: int) -> list[Matrix]:
        return [self.instantiate(self.random_values(rng)) for _ in range(count)]


@dataclass
class GroupSpec:
    name: str
    env: dict[str, Cyclo]
    generator_srcs: list[str]
    basis_srcs: list[str]
    expect: dict[str, str]

    def generators(self, modulus: int | None = None) -> list[GradedMap]:
        return [GradedMap(parse_matrix(s, self.env, modulus)) for s in self.generator_srcs]

    def closure(self, cap: int = DEFAULT_CLOSURE_CAP) -> MatrixGroup:
        return group_closure(self.generators(), cap)

    def basis(self, nvars: int = 3) -> list[MultiPoly]:
        return [parse_poly(s, nvars, env=self.env) for s in self.basis_srcs]

    def expected_table(self) -> PoissonStructure | None:
        src = self.expect.get("table")
        return parse_cyclic_table(src, "y", self.env) if src else None


@dataclass
class CaseBundle:
    number: int
    title: str
    structure: PoissonStructure
    omega: MultiPoly
    heading: str
    env: dict[str, Cyclo]
    expect: dict[str, str]
    families: list[Family] = field(default_factory=list)
    groups: list[GroupSpec] = field(default_factory=list)

    def family(self, name: str) -> Family:
        for f in self.families:
            if f.name == name:
                return f
        raise KeyError(name)

    def group(self, name: str) -> GroupSpec:
        for g in self.groups:
            if g.name == name:
                return g
        raise KeyError(name)

    def heading_poly(self) -> MultiPoly:
        return parse_poly(self.heading, 3, env=self.env)


def _family(sec: Section) -> Family:
    kind = sec.require("kind")
    if kind not in KINDS:
        raise ParseError(f"[family {sec.name}] kind must be one of {KINDS}")
    sample = {}
    for item in _split_list(sec.get("sample")):
        name, eq, value = item.partition("=")
        if not eq:
            raise ParseError(f"[family {sec.name}] sample entries look like a=2")
        sample[name.strip()] = parse_scalar(value)
    params = _split_list(sec.get("params"))
    missing = [p for p in params if p not in sample]
    if missing:
        raise ParseError(f"[family {sec.name}] sample does not fix {', '.join(missing)}")
    return Family(
        sec.name,
        kind,
        sec.require("matrix"),
        params,
        _split_list(sec.get("nonzero")),
        list(sec.prefixed("let").items()),
        list(sec.prefixed("derived").items()),
        sample,
        _expectations(sec),
    )


def _group(sec: Section) -> GroupSpec:
    env = _eval_env(sec.prefixed("param").items())
    gens = list(sec.prefixed("generator").values())
    if not gens:
        raise ParseError(f"[group {sec.name}] has no generator entries")
    return GroupSpec(sec.name, env, gens, list(sec.prefixed("basis").values()), _expectations(sec))


def load_bundle(text: str, number: int = 0) -> CaseBundle:
    doc: Document = parse_document(text)
    sec = doc.find("structure")
    if sec is None:
        raise ParseError("case file has no [structure] section")
    env = _eval_env(sec.prefixed("param").items())
    structure = structure_from_section(sec)
    omega_src = sec.get("omega")
    omega = parse_poly(omega_src, 3, env=env) if omega_src else solve_superpotential(structure)
    return CaseBundle(
        number,
        sec.get("title", f"case {number}"),
        structure,
        omega,
        sec.get("heading", omega_src or ""),
        env,
        _expectations(sec),
        [_family(s) for s in doc.all("family")],
        [_group(s) for s in doc.all("group")],
    )


def case_text(number: int) -> str:
    if number not in CASE_IDS:
        raise ValueError(f"case id must be one of 1..9, got {number}")
    return resources.files("poissoninv").joinpath("data", f"case{number}.txt").read_text(encoding="utf-8")


def load_case(number: int) -> CaseBundle:
    return load_bundle(case_text(number), number)


def all_cases() -> list[CaseBundle]:
    return [load_case(k) for k in CASE_IDS]


# -- pipeline -----------------------------------------------------------------


@dataclass(frozen=True)
class CheckLine:
    """One report line; ``expected`` is None for informational lines."""

    label: str
    value: str
    expected: str | None = None
    ok: bool = True

    @property
    def status(self) -> str:
        if self.expected is None:
            return "info"
        return "match" if self.ok else "mismatch"

    def render(self) -> str:
        text = f"{self.label}: {self.value}"
        if self.expected is None:
            return text
        if self.ok:
            return f"{text} [match]"
        return f"{text} [mismatch, expected {self.expected}]"

    def as_dict(self) -> dict:
        return {"label": self.label, "value": self.value, "expected": self.expected, "status": self.status}


def _bool_word(b: bool) -> str:
    return "true" if b else "false"


def _check(label: str, value: str, expected: str | None, ok: bool | None = None) -> CheckLine:
    if expected is None:
        return CheckLine(label, value)
    return CheckLine(label, value, expected, value == expected if ok is None else ok)


def _order_word(k: int | None) -> str:
    return "none" if k is None else str(k)


def _degrees_word(degs) -> str:
    return ", ".join(str(d) for d in sorted(degs))


def run_pipeline(
    bundle: CaseBundle,
    seed: int | None = None,
    samples: int = 5,
    dmax: int = 4,
    order_bound: int = DEFAULT_ORDER_BOUND,
    closure_cap: int = DEFAULT_CLOSURE_CAP,
) -> list[CheckLine]:
    """Run every computation for a case and compare with its expectations."""
    rng = random.Random(bundle.number if seed is None else seed)
    P = bundle.structure
    ex = bundle.expect
    out: list[CheckLine] = [CheckLine("case", f"{bundle.number} ({bundle.title})")]
    out.append(CheckLine("table", P.render()))

    jac = verify_jacobi(P)
    out.append(_check("jacobi", "pass" if jac else f"fail at {jac.witness}", "pass"))
    out.append(_check("unimodular", _bool_word(is_unimodular(P)), ex.get("unimodular")))
    omega = solve_superpotential(P)
    out.append(
        _check(
            "omega",
            omega.render() if omega is not None else "none",
            bundle.omega.render(),
            omega is not None and omega == bundle.omega,
        )
    )
    out.append(_check("omega generates table", _bool_word(from_superpotential(bundle.omega) == P), "true"))
    if "hilbert" in ex:
        dims = bracket_quotient_hilbert(P, len(_split_list(ex["hilbert"])) - 1)
        out.append(_check("bracket quotient dims", ", ".join(map(str, dims)), ex["hilbert"]))

    reflections: list[tuple[Family, Matrix]] = []
    non_reflection_reasons: set[str] = set()
    for fam in bundle.families:
        tag = f"family {fam.name}"
        if fam.kind == "non-automorphism":
            chk = is_poisson_automorphism(P, fam.instantiate())
            witness = "none" if chk.ok else f"{chk.witness[0]}, {chk.witness[1]}"
            out.append(_check(f"{tag} witness", witness, fam.expect.get("witness")))
            continue
        instances = [fam.instantiate()] + fam.random_instances(rng, samples)
        auto_ok = all(is_poisson_automorphism(P, m).ok for m in instances)
        out.append(_check(f"{tag} automorphisms ({len(instances)} instances)", _bool_word(auto_ok), "true"))
        reports = [classify_reflection(P, m, order_bound) for m in instances]
        sample_report = reports[0]
        if fam.kind == "reflection":
            all_refl = all(r.is_reflection for r in reports)
            out.append(_check(f"{tag} all reflections", _bool_word(all_refl), "true"))
            xi = sample_report.xi.render() if sample_report.xi is not None else "none"
            expect_xi = fam.expect.get("xi")
            out.append(
                _check(
                    f"{tag} xi",
                    xi,
                    expect_xi,
                    sample_report.xi is not None and expect_xi is not None and sample_report.xi == parse_scalar(expect_xi),
                )
            )
            out.append(_check(f"{tag} order", _order_word(sample_report.order), fam.expect.get("order")))
            reflections.append((fam, instances[0]))
        else:
            for r in reports:
                if not r.is_reflection:
                    non_reflection_reasons.add(r.reason)
            if "verdict" in fam.expect:
                out.append(_check(f"{tag} verdict", sample_report.summary(), fam.expect["verdict"]))
            if "order" in fam.expect:
                out.append(_check(f"{tag} order", _order_word(order_of(instances[0], order_bound)), fam.expect["order"]))
            if ex.get("pr") == "empty":
                none_refl = not any(r.is_reflection for r in reports)
                out.append(_check(f"{tag} rejected", _bool_word(none_refl), "true"))

    pr = "empty" if not reflections else "nonempty"
    value = "PR(P) = empty" if not reflections else f"PR(P) has {len(reflections)} famil{'y' if len(reflections) == 1 else 'ies'}"
    expect_pr = ex.get("pr")
    out.append(CheckLine("reflections", value, None if expect_pr is None else f"PR(P) = {expect_pr}", pr == expect_pr))
    if not reflections and non_reflection_reasons:
        out.append(CheckLine("rejection reasons", "; ".join(sorted(non_reflection_reasons))))

    for gspec in bundle.groups:
        out.extend(_group_lines(P, gspec, closure_cap))

    for fam, m in reflections:
        tag = f"env {fam.name}"
        psi = induce(m)
        out.append(_check(f"{tag} eigen doubling", _bool_word(eigen_profile_doubling(m)), "true"))
        out.append(_check(f"{tag} quasi-reflection screen", quasi_reflection_screen(psi, order_bound), "none"))
        series = taylor_coeffs(trace_series_env(m), dmax)
        brute = [brute_force_env_trace(P, m, d) for d in range(dmax + 1)]
        out.append(_check(f"{tag} trace series to degree {dmax}", _bool_word(series == brute), "true"))
        h = hdet_env(m, order_bound)
        out.append(_check(f"{tag} hdet", h.render(), (m.det() ** 2).render()))
    return out


def _group_lines(P: PoissonStructure, gspec: GroupSpec, closure_cap: int) -> list[CheckLine]:
    tag = f"group {gspec.name}"
    ex = gspec.expect
    out = []
    G = gspec.closure(closure_cap)
    out.append(_check(f"{tag} order", str(G.order), ex.get("order")))
    series = molien(G)
    expect_series = ex.get("molien")
    out.append(
        _check(
            f"{tag} molien",
            series.render(),
            expect_series,
            expect_series is not None and series == parse_ratfunc(expect_series),
        )
    )
    found = find_generators(G)
    out.append(_check(f"{tag} generator degrees", _degrees_word(found.degrees), ex.get("degrees")))
    if not gspec.basis_srcs:
        return out
    basis = gspec.basis(P.nvars)
    gens = make_generator_set(basis)
    invariant = all(is_invariant(G, y) for y in basis)
    out.append(_check(f"{tag} listed generators invariant", _bool_word(invariant), "true"))
    out.append(_check(f"{tag} listed generators independent", _bool_word(gens.jacobian_independent), "true"))
    out.append(_check(f"{tag} same algebra as search", _bool_word(same_algebra(basis, list(found.gens))), "true"))
    induced = induced_bracket_table(P, gens)
    table = induced.structure
    expected = gspec.expected_table()
    out.append(
        _check(
            f"{tag} induced table",
            table.render(),
            expected.render() if expected is not None else None,
            expected is not None and table == expected,
        )
    )
    out.append(_check(f"{tag} substitution check", _bool_word(induced.substitution_check()), "true"))
    out.append(_check(f"{tag} unimodular", _bool_word(is_unimodular(table)), ex.get("unimodular")))
    omega = solve_superpotential(table)
    present = "present" if omega is not None else "absent"
    out.append(_check(f"{tag} superpotential", present, ex.get("superpotential")))
    return out
