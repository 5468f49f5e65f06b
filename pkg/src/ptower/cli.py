"""Command-line interface: word grammar, group loading, JSON output.

Word grammar: generators x, y (or x1..xd), juxtaposition for products,
^ with an integer exponent (negative allowed), [u,v] for u^-1 v^-1 u v and
the left-normed shorthand [u,v,w] = [[u,v],w].  Whitespace is insignificant.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import groupcore, gsineq, magnus, quadforms, towerdecide
from .errors import PTowerError, WordSyntaxError


# -- word parser ----------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _where(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message, pos=None):
        line, col = self._where(self.pos if pos is None else pos)
        raise WordSyntaxError(message, line, col)

    def tokens(self):
        text = self.text
        out = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch in "[],^":
                out.append((ch, ch, i))
                i += 1
                continue
            if ch == "-" or ch.isdigit():
                start = i
                i += 1
                while i < len(text) and text[i].isdigit():
                    i += 1
                if ch == "-" and i == start + 1:
                    self.pos = start
                    self.error("expected digits after '-'")
                out.append(("INT", int(text[start:i]), start))
                continue
            if ch.isalpha():
                start = i
                i += 1
                while i < len(text) and text[i].isdigit():
                    i += 1
                out.append(("NAME", text[start:i], start))
                continue
            self.pos = i
            self.error(f"unexpected character {ch!r}")
        out.append(("EOF", None, len(text)))
        return out


class _WordParser:
    """word := item* ; item := atom ('^' INT)* ; atom := NAME | '[' word (',' word)+ ']'"""

    def __init__(self, text, d):
        self.tok = _Tokenizer(text)
        self.stream = self.tok.tokens()
        self.i = 0
        self.d = d

    def peek(self):
        return self.stream[self.i]

    def take(self, kind=None):
        tok = self.stream[self.i]
        if kind is not None and tok[0] != kind:
            self.tok.pos = tok[2]
            self.tok.error(f"expected {kind}, found {tok[0]}")
        self.i += 1
        return tok

    def parse(self) -> magnus.Word:
        word = self.word()
        tok = self.peek()
        if tok[0] != "EOF":
            self.tok.pos = tok[2]
            self.tok.error(f"unexpected {tok[0]} after word")
        return word

    def word(self) -> magnus.Word:
        acc = magnus.Word.identity(self.d)
        while self.peek()[0] in ("NAME", "["):
            acc = acc * self.item()
        return acc

    def item(self) -> magnus.Word:
        w = self.atom()
        while self.peek()[0] == "^":
            self.take("^")
            _, exponent, _ = self.take("INT")
            w = w**exponent
        return w

    def atom(self) -> magnus.Word:
        kind, value, pos = self.take()
        if kind == "NAME":
            return magnus.Word.generator(self._generator_index(value, pos), self.d)
        if kind == "[":
            parts = [self.word()]
            self.take(",")
            parts.append(self.word())
            while self.peek()[0] == ",":
                self.take(",")
                parts.append(self.word())
            self.take("]")
            return magnus.commutator(*parts)
        self.tok.pos = pos
        self.tok.error(f"expected a generator or '[', found {kind}")

    def _generator_index(self, name, pos) -> int:
        if name == "x" and self.d >= 1:
            return 1
        if name == "y" and self.d >= 2:
            return 2
        if name[0] == "x" and name[1:].isdigit():
            idx = int(name[1:])
            if 1 <= idx <= self.d:
                return idx
        self.tok.pos = pos
        self.tok.error(f"unknown generator {name!r} for rank {self.d}")


def parse_word(text: str, d: int = 2) -> magnus.Word:
    """Parse relation-word text into a freely reduced Word."""
    return _WordParser(text, d).parse()


def unparse(word: magnus.Word) -> str:
    """Canonical text of a word; parse_word(unparse(w)) == w."""
    return str(word)


# -- group loading ----------------------------------------------------------------


def load_group(source: str) -> groupcore.GroupTable:
    """A builtin group by name, or a {"p", "order", "table"} JSON file."""
    if source in groupcore.BUILTIN_GROUPS:
        return groupcore.builtin_group(source)
    if not os.path.exists(source):
        return groupcore.builtin_group(source)  # raises with the name list
    with open(source) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise groupcore.SchemaError(f"invalid JSON: {exc}") from None
    return groupcore.GroupTable.from_dict(data)


# -- command implementations -------------------------------------------------------


def _resolve_discriminant(args) -> int:
    if args.m is not None:
        return quadforms.fundamental_discriminant(args.m).D
    return args.D


def _cmd_classgroup(args):
    D = _resolve_discriminant(args)
    forms = quadforms.enumerate_reduced_forms(D)
    structure = quadforms.class_group_structure(D)
    return {
        "discriminant": D,
        "class_number": len(forms),
        "elementary_divisors": list(structure.elementary_divisors),
        "forms": [[f.a, f.b, f.c] for f in forms],
    }


def _cmd_prank(args):
    D = _resolve_discriminant(args)
    return {"discriminant": D, "p": args.p, "p_rank": quadforms.p_rank(D, args.p)}


def _load_relations(value):
    if os.path.exists(value):
        with open(value) as fh:
            value = ";".join(line for line in fh.read().splitlines() if line.strip())
    parts = [part for part in value.split(";") if part.strip()]
    if len(parts) != 2:
        raise ValueError(f"expected exactly 2 relations, found {len(parts)}")
    return tuple(parse_word(part) for part in parts)


def _cmd_decide(args):
    D = _resolve_discriminant(args)
    relations = _load_relations(args.relations) if args.relations else None
    verdict = towerdecide.decide(
        towerdecide.TowerInput(
            D=D,
            p=args.p,
            relations=relations,
            dim_g3_g4=args.dim_g3g4,
            assume_33=args.assume_33,
        )
    )
    return {"discriminant": D, "p": args.p, **verdict.to_dict()}


def _parse_levels(text):
    levels = {}
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        k, _, r = piece.partition(":")
        levels[int(k)] = int(r) if r else 1
    return levels


def _fraction_str(value: Fraction) -> str:
    return str(value)


def _cmd_gs_check(args):
    Z = gsineq.ZassenhausPolynomial(args.d, _parse_levels(args.levels))
    out = {"d": Z.d, "levels": {str(k): r for k, r in Z.levels.items()}}
    if args.at is not None:
        t = Fraction(args.at)
        out["at"] = _fraction_str(t)
        out["value"] = _fraction_str(gsineq.evaluate(Z, t))
    report = gsineq.gs_contradiction(Z)
    out["has_nonpositive_point"] = report.has_nonpositive_point
    out["witness"] = _fraction_str(report.witness) if report.witness is not None else None
    out["root_count"] = report.root_count
    return out


def _cmd_gs_admissible(args):
    result = gsineq.admissible_types(args.max_level, d=args.d)
    return {
        "d": args.d,
        "max_level": result.max_level,
        "types": [[t.i, t.j] for t in result.types],
        "beyond_excluded": result.beyond_excluded,
    }


def _cmd_filtration(args):
    G = load_group(args.group)
    series = groupcore.zassenhaus_series_lazard(G)
    lcs = groupcore.lower_central_series(G)
    return {
        "group": args.group,
        "p": G.p,
        "order": G.n,
        "zassenhaus_orders": [s.order for s in series],
        "dimension_factors": groupcore.dimension_factors(G),
        "lower_central_orders": [s.order for s in lcs],
        "dim_g3_g4": groupcore.dim_g3_mod_g4(G),
    }


def _level_json(lv, truncation):
    return lv if lv is not None else f">= {truncation + 1}"


def _cmd_magnus_level(args):
    words = [parse_word(text, d=args.rank) for text in args.words]
    profile = magnus.level_profile(words, args.p, N=args.truncation)
    return {
        "p": args.p,
        "truncation": args.truncation,
        "levels": [
            {"word": unparse(w), "level": _level_json(magnus.level(w, args.p, args.truncation), args.truncation)}
            for w in words
        ],
        "profile": {str(k): r for k, r in profile.counts.items()},
        "beyond": profile.beyond,
        "approximate": profile.approximate,
        "even_level_violations": magnus.koch_venkov_violations(profile),
    }


def _cmd_massey_matrix(args):
    rho1, rho2 = parse_word(args.word1), parse_word(args.word2)
    matrix = magnus.massey_trace_matrix(rho1, rho2, args.p)
    det = (matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]) % args.p
    out = {"p": args.p, "matrix": matrix, "invertible": det != 0}
    if args.p == 3:
        c1 = magnus.deg3_coefficients(rho1, 3)
        c2 = magnus.deg3_coefficients(rho2, 3)
        out["cube_exponents"] = [[c1.e1, c1.e2], [c2.e1, c2.e2]]
    return out


# -- dispatch -------------------------------------------------------------------


def _add_field_args(sub, need_p=True):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("-D", type=int, help="fundamental discriminant (negative)")
    group.add_argument("-m", type=int, help="squarefree negative radicand of Q(sqrt(m))")
    if need_p:
        sub.add_argument("-p", type=int, required=True, help="prime")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptower",
        description="class groups, Zassenhaus filtrations and Golod-Shafarevich "
        "tests for p-class field towers over imaginary quadratic fields",
    )
    parser.add_argument("--pretty", action="store_true", help="indent the JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classgroup", help="reduced forms and group structure")
    _add_field_args(s, need_p=False)
    s.set_defaults(func=_cmd_classgroup)

    s = sub.add_parser("prank", help="p-rank of the class group")
    _add_field_args(s)
    s.set_defaults(func=_cmd_prank)

    s = sub.add_parser("decide", help="p-class field tower length decision")
    _add_field_args(s)
    s.add_argument("--relations", help="two relation words, ';'-separated, or a file")
    s.add_argument("--dim-g3g4", dest="dim_g3g4", type=int, help="dim G3/G4 of the tower group")
    s.add_argument("--assume-33", dest="assume_33", action="store_true",
                   help="allow decisions conditional on the (3,3) conjecture")
    s.set_defaults(func=_cmd_decide)

    s = sub.add_parser("gs-check", help="Golod-Shafarevich sign test for a level profile")
    s.add_argument("-d", type=int, required=True, help="generator rank")
    s.add_argument("--levels", required=True, help="comma list k:r_k, e.g. 3:1,9:1")
    s.add_argument("--at", help="also evaluate at this rational, e.g. 2/3")
    s.set_defaults(func=_cmd_gs_check)

    s = sub.add_parser("gs-admissible", help="level pairs compatible with a finite group")
    s.add_argument("-d", type=int, default=2)
    s.add_argument("--max-level", dest="max_level", type=int, default=15)
    s.set_defaults(func=_cmd_gs_admissible)

    s = sub.add_parser("filtration", help="Zassenhaus and lower central data of a finite p-group")
    s.add_argument("--group", required=True, help="builtin name (e.g. Q8) or JSON file")
    s.set_defaults(func=_cmd_filtration)

    s = sub.add_parser("magnus-level", help="levels and level profile of relation words")
    s.add_argument("words", nargs="+", metavar="WORD")
    s.add_argument("-p", type=int, required=True)
    s.add_argument("--truncation", type=int, default=magnus.DEFAULT_TRUNCATION)
    s.add_argument("--rank", type=int, default=2, help="number of free generators")
    s.set_defaults(func=_cmd_magnus_level)

    s = sub.add_parser("massey-matrix", help="degree-3 trace matrix of two relations")
    s.add_argument("word1")
    s.add_argument("word2")
    s.add_argument("-p", type=int, required=True)
    s.set_defaults(func=_cmd_massey_matrix)

    return parser


def run(argv, stdout=None, stderr=None) -> int:
    """Execute one command; returns the process exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(1_000_000)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except PTowerError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, stderr)
        stderr.write("\n")
        return 1
    except ValueError as exc:
        json.dump({"error": "ValueError", "message": str(exc)}, stderr)
        stderr.write("\n")
        return 1
    if args.pretty:
        json.dump(result, stdout, indent=2)
    else:
        json.dump(result, stdout)
    stdout.write("\n")
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
