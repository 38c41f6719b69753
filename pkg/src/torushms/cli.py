"""Command-line surface: parse brane/point/sheaf expressions, run the
library computations, print plain text or JSON.

Exit codes: 0 success, 1 usage or input-syntax error, 2 domain error
(non-transverse pair, degenerate configuration, ...).  JSON (--json) is
the stable machine interface -- byte-identical for identical inputs and
configuration; the plain format is for humans and may change.

Input grammar (EBNF; whitespace free between tokens):

    expr     := term (("+" | "-") term)*
    term     := [INT "*"] item
    item     := brane | sheaf | point
    brane    := "L" "(" int "," int ";" rat ")" [shift] [system]
    system   := "{" "M" "=" "phase" rat "," "rank" INT "}"
    shift    := "[" int "]"
    point    := "pt" "(" "x" "=" rat "," "phase" "=" rat ")"
    sheaf    := "O" "(" (int "P0" | "P0" | "D" ":" divisor) ")" [shift]
              | "Sky" "(" point "," INT ")" [shift]
              | "Bun" "(" int "," int "," point ")" [shift]
    divisor  := point (("+" | "-") point)*
    rat      := int ["/" INT]
    int      := ["-"] INT

Monodromy and point units are given as a rational number of turns:
"phase 1/7" means exp(2 pi i / 7).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .config import RunConfig, RelationBounds, numeric_context, threads_from_env
from .errors import ParseError, TorushmsError
from .floer import (
    FloerElement,
    assoc_defect,
    cf,
    generator_element,
    mu2,
    mu2_triangles,
    vanishes_truncated,
)
from .mirror import mirror_of_sheaf, theta_sharp, zeta_injectivity_witness
from .novikov import NovikovSeries, series_json, series_text
from .sheafk import (
    Bundle,
    K0Class,
    SheafSum,
    Skyscraper,
    k0_class,
    line_bundle,
    o_of_n_p0,
    relation_suite,
)
from .tate import (
    SectionCoeffs,
    TatePoint,
    eval_section,
    section_through,
    section_vanishes_at,
    theta_eval,
)
from .torus import Brane, LocalSystem
from .cobord import CobordClass, class_of_sum, normal_form, relation_check

__all__ = ["main", "parse_expr", "print_ast", "parse_ast"]


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9]*)|(.))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int" | "name" | the punctuation character | "end"
    text: str
    col: int  # 1-based column of the first character


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(1) if m.group(1) else (
            m.start(2) if m.group(2) else m.start(3)
        )
        if m.group(1):
            toks.append(_Tok("int", m.group(1), start + 1))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), start + 1))
        else:
            toks.append(_Tok(m.group(3), m.group(3), start + 1))
        pos = m.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


# ---------------------------------------------------------------------------
# syntax trees (exact rational data; realized into library objects later)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointAst:
    x: Fraction
    phase: Fraction


@dataclass(frozen=True)
class BraneAst:
    m: int
    n: int
    x: Fraction
    k: int = 0
    phase: Fraction = Fraction(0)
    rank: int = 1


@dataclass(frozen=True)
class OP0Ast:
    n: int
    k: int = 0


@dataclass(frozen=True)
class DivAst:
    plus: Tuple[PointAst, ...]
    minus: Tuple[PointAst, ...]
    k: int = 0


@dataclass(frozen=True)
class SkyAst:
    pt: PointAst
    h: int
    k: int = 0


@dataclass(frozen=True)
class BunAst:
    r: int
    d: int
    pt: PointAst
    k: int = 0


ItemAst = Union[PointAst, BraneAst, OP0Ast, DivAst, SkyAst, BunAst]


@dataclass(frozen=True)
class SumAst:
    terms: Tuple[Tuple[int, ItemAst], ...]


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    # -- primitives --------------------------------------------------------

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, expected: str) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != kind:
            self.fail(expected)
        self.i += 1
        return tok

    def fail(self, expected: str):
        tok = self.toks[self.i]
        got = repr(tok.text) if tok.kind != "end" else "end of input"
        raise ParseError(
            f"expected {expected} at column {tok.col}, got {got}",
            position=tok.col,
            expected=[expected],
        )

    def int_(self, what: str = "integer") -> int:
        sign = 1
        if self.peek().kind == "-":
            self.i += 1
            sign = -1
        return sign * int(self.take("int", what).text)

    def rat(self, what: str = "rational") -> Fraction:
        num = self.int_(what)
        if self.peek().kind == "/":
            self.i += 1
            den = int(self.take("int", "denominator").text)
            return Fraction(num, den)
        return Fraction(num)

    def name(self, word: str):
        tok = self.take("name", f"'{word}'")
        if tok.text != word:
            self.i -= 1
            self.fail(f"'{word}'")

    def shift(self) -> int:
        if self.peek().kind == "[":
            self.i += 1
            k = self.int_("shift")
            self.take("]", "']'")
            return k
        return 0

    # -- grammar -----------------------------------------------------------

    def point(self) -> PointAst:
        self.name("pt")
        self.take("(", "'('")
        self.name("x")
        self.take("=", "'='")
        x = self.rat()
        self.take(",", "','")
        self.name("phase")
        self.take("=", "'='")
        phase = self.rat()
        self.take(")", "')'")
        return PointAst(x, phase)

    def brane(self) -> BraneAst:
        self.name("L")
        self.take("(", "'('")
        m = self.int_("slope m")
        self.take(",", "','")
        n = self.int_("slope n")
        self.take(";", "';'")
        x = self.rat("shift x")
        self.take(")", "')'")
        k = self.shift()
        phase, rank = Fraction(0), 1
        if self.peek().kind == "{":
            self.i += 1
            self.name("M")
            self.take("=", "'='")
            self.name("phase")
            phase = self.rat()
            self.take(",", "','")
            self.name("rank")
            rank = int(self.take("int", "rank").text)
            self.take("}", "'}'")
        return BraneAst(m, n, x, k, phase, rank)

    def sheaf_o(self) -> Union[OP0Ast, DivAst]:
        self.name("O")
        self.take("(", "'('")
        tok = self.peek()
        if tok.kind == "name" and tok.text == "D":
            self.i += 1
            self.take(":", "':'")
            plus: List[PointAst] = [self.point()]
            minus: List[PointAst] = []
            while self.peek().kind in ("+", "-"):
                sign = self.peek().kind
                self.i += 1
                (plus if sign == "+" else minus).append(self.point())
            self.take(")", "')'")
            return DivAst(tuple(plus), tuple(minus), self.shift())
        if tok.kind == "name" and tok.text == "P0":
            self.i += 1
            n = 1
        else:
            n = self.int_("multiple of P0")
            self.name("P0")
        self.take(")", "')'")
        return OP0Ast(n, self.shift())

    def sky(self) -> SkyAst:
        self.name("Sky")
        self.take("(", "'('")
        pt = self.point()
        self.take(",", "','")
        h = int(self.take("int", "thickness").text)
        self.take(")", "')'")
        return SkyAst(pt, h, self.shift())

    def bun(self) -> BunAst:
        self.name("Bun")
        self.take("(", "'('")
        r = self.int_("rank")
        self.take(",", "','")
        d = self.int_("degree")
        self.take(",", "','")
        pt = self.point()
        self.take(")", "')'")
        return BunAst(r, d, pt, self.shift())

    def item(self) -> ItemAst:
        tok = self.peek()
        if tok.kind != "name":
            self.fail("'L', 'pt', 'O', 'Sky' or 'Bun'")
        return {
            "L": self.brane,
            "pt": self.point,
            "O": self.sheaf_o,
            "Sky": self.sky,
            "Bun": self.bun,
        }.get(tok.text, lambda: self.fail("'L', 'pt', 'O', 'Sky' or 'Bun'"))()

    def term(self) -> Tuple[int, ItemAst]:
        mult = 1
        if self.peek().kind == "int" and self.toks[self.i + 1].kind == "*":
            mult = int(self.take("int", "multiplier").text)
            self.take("*", "'*'")
        return mult, self.item()

    def expr(self) -> SumAst:
        lead = 1
        if self.peek().kind == "-":  # canonical text may open with -2*...
            self.i += 1
            lead = -1
        mult, item = self.term()
        terms = [(lead * mult, item)]
        while self.peek().kind in ("+", "-"):
            sign = 1 if self.peek().kind == "+" else -1
            self.i += 1
            mult, item = self.term()
            terms.append((sign * mult, item))
        self.take("end", "end of input")
        return SumAst(tuple(terms))


def parse_ast(text: str) -> SumAst:
    """Parse an expression to its exact syntax tree."""
    return _Parser(text).expr()


# ---------------------------------------------------------------------------
# canonical printer (round-trips through parse_ast)
# ---------------------------------------------------------------------------


def _frac(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(
        x.numerator
    )


def _shift_str(k: int) -> str:
    return f"[{k}]" if k else ""


def print_ast(ast) -> str:
    """Canonical text for a syntax tree; parse_ast inverts it exactly."""
    if isinstance(ast, SumAst):
        out = []
        for i, (mult, item) in enumerate(ast.terms):
            mag, neg = abs(mult), mult < 0
            piece = (f"{mag}*" if mag != 1 else "") + print_ast(item)
            if i == 0:
                out.append(("-" if neg else "") + piece)
            else:
                out.append(("- " if neg else "+ ") + piece)
        return " ".join(out)
    if isinstance(ast, PointAst):
        return f"pt(x={_frac(ast.x)}, phase={_frac(ast.phase)})"
    if isinstance(ast, BraneAst):
        body = f"L({ast.m},{ast.n};{_frac(ast.x)}){_shift_str(ast.k)}"
        if ast.phase != 0 or ast.rank != 1:
            body += f"{{M=phase {_frac(ast.phase)}, rank {ast.rank}}}"
        return body
    if isinstance(ast, OP0Ast):
        return f"O({ast.n}P0){_shift_str(ast.k)}"
    if isinstance(ast, DivAst):
        parts = [print_ast(ast.plus[0])]
        for p in ast.plus[1:]:
            parts.append("+ " + print_ast(p))
        for p in ast.minus:
            parts.append("- " + print_ast(p))
        return f"O(D: {' '.join(parts)}){_shift_str(ast.k)}"
    if isinstance(ast, SkyAst):
        return f"Sky({print_ast(ast.pt)}, {ast.h}){_shift_str(ast.k)}"
    if isinstance(ast, BunAst):
        return (
            f"Bun({ast.r},{ast.d},{print_ast(ast.pt)}){_shift_str(ast.k)}"
        )
    raise TypeError(f"not a syntax tree: {ast!r}")


# ---------------------------------------------------------------------------
# realization into library objects
# ---------------------------------------------------------------------------


def _realize(ast: ItemAst, ctx):
    if isinstance(ast, PointAst):
        return TatePoint(ast.x, ctx.phase(ast.phase))
    if isinstance(ast, BraneAst):
        if ast.phase == 0 and ast.rank == 1:
            system = LocalSystem.trivial()
        else:
            system = LocalSystem.from_eigenvalue(
                ctx.phase(ast.phase), ast.rank
            )
        return Brane((ast.m, ast.n), ast.x, ast.k, local_system=system)
    if isinstance(ast, OP0Ast):
        return o_of_n_p0(ast.n).shifted(ast.k)
    if isinstance(ast, DivAst):
        return line_bundle(
            [_realize(p, ctx) for p in ast.plus],
            [_realize(p, ctx) for p in ast.minus],
        ).shifted(ast.k)
    if isinstance(ast, SkyAst):
        return Skyscraper(_realize(ast.pt, ctx), ast.h, ast.k)
    if isinstance(ast, BunAst):
        return Bundle(ast.r, ast.d, _realize(ast.pt, ctx), ast.k)
    raise TypeError(f"not an item: {ast!r}")


def parse_expr(text: str, precision: int = 64):
    """Parse and realize: a single Brane / sheaf / TatePoint for a
    one-term expression with multiplier 1, else a list of
    (object, multiplier) pairs."""
    ast = parse_ast(text)
    ctx = numeric_context(precision)
    terms = [(_realize(item, ctx), mult) for mult, item in ast.terms]
    if len(terms) == 1 and terms[0][1] == 1:
        return terms[0][0]
    return terms


def _expect_all(terms, cls, what: str):
    pairs = terms if isinstance(terms, list) else [(terms, 1)]
    for obj, _ in pairs:
        if not isinstance(obj, cls):
            raise ParseError(
                f"expected only {what} in this expression, got {obj!r}"
            )
    return pairs


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------


def _point_json(p: TatePoint) -> dict:
    out = {"x": _frac(p.x)}
    terms = p.unit.terms
    if len(terms) == 1 and terms[0][0] == 0:
        z = complex(terms[0][1])
        out["unit"] = {"re": z.real, "im": z.imag}
    else:
        out["unit"] = series_json(p.unit)
    return out


def _point_text(p: TatePoint) -> str:
    terms = p.unit.terms
    if len(terms) == 1 and terms[0][0] == 0:
        z = complex(terms[0][1])
        return f"(x={_frac(p.x)}, unit={z.real:.9g}{z.imag:+.9g}i)"
    return f"(x={_frac(p.x)}, unit={series_text(p.unit)})"


def _k0_json(c: K0Class) -> dict:
    return {"rk": c.rk, "deg": c.deg, "pt": _point_json(c.pt)}


def _k0_text(c: K0Class) -> str:
    return f"rk={c.rk} deg={c.deg} pt={_point_text(c.pt)}"


def _cob_json(c: CobordClass) -> dict:
    return {"zeta": _frac(c.zeta_part), "hom": list(c.hom)}


def _brane_json(b: Brane) -> dict:
    blocks = []
    for eig, size in b.local_system.blocks:
        entry = {"size": size}
        terms = eig.terms
        if len(terms) == 1 and terms[0][0] == 0:
            z = complex(terms[0][1])
            entry["eigenvalue"] = {"re": z.real, "im": z.imag}
        else:
            entry["eigenvalue"] = series_json(eig)
        blocks.append(entry)
    return {
        "slope": list(b.slope),
        "shift": _frac(b.shift),
        "grading": b.grading_offset,
        "rank": b.rank,
        "blocks": blocks,
    }


def _element_json(e: FloerElement) -> dict:
    comps = []
    for coords, matrix in e.components:
        comps.append(
            {
                "coords": [_frac(coords[0]), _frac(coords[1])],
                "matrix": [[series_json(x) for x in row] for row in matrix],
            }
        )
    return {"components": comps}


def _element_text(e: FloerElement) -> List[str]:
    lines = []
    for coords, matrix in e.components:
        lines.append(f"at y=({_frac(coords[0])}, {_frac(coords[1])}):")
        for row in matrix:
            lines.append("  [" + ", ".join(series_text(x) for x in row) + "]")
    if not lines:
        lines.append("0")
    return lines


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _config(args) -> RunConfig:
    return RunConfig(
        cutoff=Fraction(args.cutoff),
        precision=args.prec,
        tolerance=args.tol,
        output="json" if args.json else "plain",
        threads=threads_from_env(os.environ),
    )


def _brane_arg(text: str, cfg: RunConfig) -> Brane:
    obj = parse_expr(text, cfg.precision)
    if not isinstance(obj, Brane):
        raise ParseError(f"expected a single brane, got {text!r}")
    return obj


def _point_arg(text: str, cfg: RunConfig) -> TatePoint:
    obj = parse_expr(text, cfg.precision)
    if not isinstance(obj, TatePoint):
        raise ParseError(f"expected a point literal, got {text!r}")
    return obj


def _generator(l0: Brane, l1: Brane, idx: int) -> FloerElement:
    space = cf(l0, l1)
    coords = space.coords()
    if not 0 <= idx < len(coords):
        raise ParseError(
            f"generator index {idx} out of range 0..{len(coords) - 1}"
        )
    rows, cols = space.hom_shape
    if (rows, cols) == (1, 1):
        return generator_element(l0, l1, coords[idx])
    matrix = tuple(
        tuple(
            NovikovSeries.one() if (r == 0 and c == 0) else NovikovSeries.zero()
            for c in range(cols)
        )
        for r in range(rows)
    )
    return generator_element(l0, l1, coords[idx], matrix=matrix)


def _cmd_cf(args, cfg: RunConfig):
    l0 = _brane_arg(args.l0, cfg)
    l1 = _brane_arg(args.l1, cfg)
    space = cf(l0, l1)
    gens = [
        {
            "coords": [_frac(p.coords[0]), _frac(p.coords[1])],
            "index": p.index,
            "dim": l0.rank * l1.rank,
        }
        for p in space.points
    ]
    plain = [f"generators: {len(gens)}"] + [
        f"  y=({g['coords'][0]}, {g['coords'][1]})  degree {g['index']}"
        f"  dim {g['dim']}"
        for g in gens
    ]
    return {"generators": gens}, plain


def _cmd_mu2(args, cfg: RunConfig):
    l0 = _brane_arg(args.l0, cfg)
    l1 = _brane_arg(args.l1, cfg)
    l2 = _brane_arg(args.l2, cfg)
    phi1 = _generator(l0, l1, args.phi1)
    phi2 = _generator(l1, l2, args.phi2)
    result = mu2(phi2, phi1, cfg.cutoff)
    payload = {"cutoff": _frac(cfg.cutoff), "result": _element_json(result)}
    plain = [f"mu2 product (cutoff {_frac(cfg.cutoff)}):"]
    plain += _element_text(result)
    if args.triangles:
        _, tris = mu2_triangles(phi2, phi1, cfg.cutoff)
        payload["triangles"] = tris
        plain.append(f"triangles: {len(tris)}")
    return payload, plain


def _cmd_assoc(args, cfg: RunConfig):
    branes = [
        _brane_arg(t, cfg) for t in (args.l0, args.l1, args.l2, args.l3)
    ]
    a = _generator(branes[0], branes[1], args.a)
    b = _generator(branes[1], branes[2], args.b)
    c = _generator(branes[2], branes[3], args.c)
    defect = assoc_defect(a, b, c, cfg.cutoff)
    ok = defect <= cfg.tolerance
    return (
        {"defect": defect, "pass": ok, "tolerance": cfg.tolerance},
        [f"associativity defect: {defect:.3e}  ({'ok' if ok else 'FAIL'})"],
    )


def _cmd_theta(args, cfg: RunConfig):
    p = _point_arg(args.point, cfg)
    series = theta_eval(args.kind, p, cfg.cutoff)
    return (
        {"kind": args.kind, "series": series_json(series)},
        [f"theta{args.kind} = {series_text(series)}"],
    )


def _cmd_section(args, cfg: RunConfig):
    q = _point_arg(args.q, cfg)
    at = _point_arg(args.at, cfg)
    section = section_through(q, cfg.cutoff)
    value = eval_section(section, at, cfg.cutoff)
    vanishes = section_vanishes_at(section, at, cfg.cutoff)
    payload = {
        "sigma0": series_json(section.sigma0),
        "sigma1": series_json(section.sigma1),
        "value": series_json(value),
        "vanishes": vanishes,
    }
    plain = [
        f"s = sigma0*theta0 + sigma1*theta1 through {_point_text(q)}",
        f"value at {_point_text(at)}: {series_text(value)}",
        f"vanishes: {'yes' if vanishes else 'no'}",
    ]
    return payload, plain


def _cmd_k0(args, cfg: RunConfig):
    terms = _expect_all(
        parse_expr(args.sheaf, cfg.precision),
        (Bundle, Skyscraper),
        "sheaves",
    )
    cls = k0_class(SheafSum(terms))
    return ({"class": _k0_json(cls)}, [f"K0 class: {_k0_text(cls)}"])


def _cmd_relations(args, cfg: RunConfig):
    bounds = RelationBounds(args.r_max, args.d_max, args.n_max, args.h_max)
    ctx = numeric_context(cfg.precision)
    points = [
        TatePoint.zero(),
        TatePoint.two_torsion(),
        TatePoint(Fraction(1, 3), ctx.phase(Fraction(1, 7))),
        TatePoint(Fraction(2, 5), ctx.phase(Fraction(2, 5))),
        TatePoint(Fraction(1, 7), ctx.phase(Fraction(1, 2))),
    ]
    suite = relation_suite(bounds, points)
    failures = [t for t in suite if not t.holds(cfg.tolerance)]
    payload = {
        "count": len(suite),
        "all_hold": not failures,
        "failures": [t.label for t in failures],
    }
    plain = [
        f"relations checked: {len(suite)}",
        f"all hold (tol {cfg.tolerance:g}): {'yes' if not failures else 'no'}",
    ]
    return payload, plain


def _cmd_mirror(args, cfg: RunConfig):
    obj = parse_expr(args.sheaf, cfg.precision)
    if not isinstance(obj, (Bundle, Skyscraper)):
        raise ParseError(f"expected a single sheaf, got {args.sheaf!r}")
    pair = mirror_of_sheaf(obj)
    payload = {
        "brane": _brane_json(pair.brane),
        "anchored": pair.anchored,
        "note": pair.note,
    }
    plain = [f"mirror brane: {pair.brane}  (system rank {pair.brane.rank})"]
    plain.append(f"anchored: {'yes' if pair.anchored else 'no'}")
    if pair.note:
        plain.append(f"note: {pair.note}")
    return payload, plain


def _cmd_theta_sharp(args, cfg: RunConfig):
    terms = _expect_all(
        parse_expr(args.brane, cfg.precision), Brane, "branes"
    )
    cls = theta_sharp(terms)
    return ({"class": _k0_json(cls)}, [f"theta-sharp: {_k0_text(cls)}"])


def _cmd_witness(args, cfg: RunConfig):
    cls = zeta_injectivity_witness(Fraction(args.x))
    nonzero = not cls.is_zero(cfg.tolerance)
    payload = {"class": _k0_json(cls), "nonzero": nonzero}
    plain = [
        f"witness({args.x}): {_k0_text(cls)}",
        f"nonzero: {'yes' if nonzero else 'no'}",
    ]
    return payload, plain


def _cmd_cob_nf(args, cfg: RunConfig):
    b = _brane_arg(args.brane, cfg)
    c = normal_form(b)
    return (
        {"class": _cob_json(c)},
        [f"normal form: zeta={_frac(c.zeta_part)} hom={c.hom}"],
    )


def _cmd_cob_check(args, cfg: RunConfig):
    lhs = _expect_all(parse_expr(args.lhs, cfg.precision), Brane, "branes")
    rhs = _expect_all(parse_expr(args.rhs, cfg.precision), Brane, "branes")
    equal = relation_check(lhs, rhs)
    payload = {
        "equal": equal,
        "lhs": _cob_json(class_of_sum(lhs)),
        "rhs": _cob_json(class_of_sum(rhs)),
    }
    return payload, [f"classes equal: {'yes' if equal else 'no'}"]


_COMMANDS = {
    "cf": _cmd_cf,
    "mu2": _cmd_mu2,
    "assoc": _cmd_assoc,
    "theta": _cmd_theta,
    "section": _cmd_section,
    "k0": _cmd_k0,
    "relations": _cmd_relations,
    "mirror": _cmd_mirror,
    "theta-sharp": _cmd_theta_sharp,
    "witness": _cmd_witness,
    "cob-nf": _cmd_cob_nf,
    "cob-check": _cmd_cob_check,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", default="8", help="truncation exponent p/q")
    common.add_argument("--prec", type=int, default=64, help="coefficient bits")
    common.add_argument("--tol", type=float, default=1e-9, help="tolerance")
    common.add_argument("--json", action="store_true", help="machine output")

    top = argparse.ArgumentParser(
        prog="torushms",
        description="Floer products, theta functions, K-theory and "
        "cobordism classes for straight branes on the flat torus.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cf", parents=[common], help="intersection generators")
    p.add_argument("--l0", required=True)
    p.add_argument("--l1", required=True)

    p = sub.add_parser("mu2", parents=[common], help="triangle product")
    p.add_argument("--l0", required=True)
    p.add_argument("--l1", required=True)
    p.add_argument("--l2", required=True)
    p.add_argument("--phi1", type=int, default=0, help="generator in CF(l0,l1)")
    p.add_argument("--phi2", type=int, default=0, help="generator in CF(l1,l2)")
    p.add_argument("--triangles", action="store_true", help="dump triangles")

    p = sub.add_parser("assoc", parents=[common], help="associativity defect")
    p.add_argument("--l0", required=True)
    p.add_argument("--l1", required=True)
    p.add_argument("--l2", required=True)
    p.add_argument("--l3", required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--c", type=int, default=0)

    p = sub.add_parser("theta", parents=[common], help="theta series at a point")
    p.add_argument("--kind", type=int, choices=(0, 1), required=True)
    p.add_argument("--point", required=True)

    p = sub.add_parser("section", parents=[common], help="evaluate a section")
    p.add_argument("--q", required=True, help="point the section vanishes at")
    p.add_argument("--at", required=True, help="evaluation point")

    p = sub.add_parser("k0", parents=[common], help="K-theory class of a sum")
    p.add_argument("--sheaf", required=True)

    p = sub.add_parser(
        "relations", parents=[common], help="check the K0 relation suite"
    )
    p.add_argument("--r-max", type=int, default=4)
    p.add_argument("--d-max", type=int, default=4)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--h-max", type=int, default=3)

    p = sub.add_parser("mirror", parents=[common], help="mirror brane of a sheaf")
    p.add_argument("--sheaf", required=True)

    p = sub.add_parser(
        "theta-sharp", parents=[common], help="K-class of anchored branes"
    )
    p.add_argument("--brane", required=True)

    p = sub.add_parser(
        "witness", parents=[common], help="K-class separating flux x from 0"
    )
    p.add_argument("--x", required=True, help="rational p/q")

    p = sub.add_parser(
        "cob-nf", parents=[common], help="cobordism normal form of a brane"
    )
    p.add_argument("--brane", required=True)

    p = sub.add_parser(
        "cob-check", parents=[common], help="compare two formal brane sums"
    )
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)

    return top


def _emit_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(", ", ": "))


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        cfg = _config(args)
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        payload, plain = _COMMANDS[args.command](args, cfg)
    except ParseError as exc:
        detail = {"position": exc.position, "expected": list(exc.expected)}
        if cfg.output == "json":
            print(_emit_json({"error": str(exc), "kind": "parse",
                              "detail": detail}))
        else:
            print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except TorushmsError as exc:
        if cfg.output == "json":
            print(_emit_json({"error": str(exc), "kind": exc.kind,
                              "detail": {}}))
        else:
            print(f"error[{exc.kind}]: {exc}", file=sys.stderr)
        return 2
    if cfg.output == "json":
        print(_emit_json(payload))
    else:
        for line in plain:
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
