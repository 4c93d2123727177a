"""Command line front end.

Every command builds a plain payload dict and hands it to one renderer, so
table and JSON output always show the same data.  JSON documents carry no
floats: rationals are strings and an infinite order is "infinite".
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import freeness, groupring, quadfield, quaternion, unitfactory
from .errors import HypUnitsError, NoSolutionError

SCHEMA_VERSION = "hypunits-cli/1"

OK, NO_SOLUTION, INVALID_INPUT = "OK", "NO_SOLUTION", "INVALID_INPUT"
EXIT_CODES = {OK: 0, NO_SOLUTION: 1, INVALID_INPUT: 2}


class CommandResult:
    __slots__ = ("status", "payload", "citations")

    def __init__(self, status: str, payload: dict, citations: Sequence[str] = ()):
        self.status = status
        self.payload = payload
        self.citations = list(citations)

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


class _UsageError(HypUnitsError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


# payload schemas; every OK payload validates against the one for its command

_int = {"type": "integer"}
_str = {"type": "string"}
_bool = {"type": "boolean"}
_order = {"anyOf": [_int, {"const": "infinite"}, {"type": "null"}]}


def _obj(props: dict) -> dict:
    return {"type": "object", "properties": props, "required": sorted(props), "additionalProperties": False}


_unit = _obj({"expr": _str, "norm": _int, "order": _order, "family": _str, "seed": {"type": "object"}})

PAYLOAD_SCHEMAS: dict[str, dict] = {
    "ring": _obj(
        {
            "d": _int,
            "theta_kind": _str,
            "theta": _str,
            "discriminant": _int,
            "is_real": _bool,
            "unit_group": _str,
            "torsion_order": _int,
            "rank": _int,
        }
    ),
    "fundunit": _obj(
        {
            "d": _int,
            "epsilon": _str,
            "x": _str,
            "y": _str,
            "theta_coords": {"type": "array", "items": _str},
            "norm": _int,
            "mod2_order": _int,
            "mod2_bound": _int,
        }
    ),
    "pell": _obj(
        {
            "D": _int,
            "rhs": _int,
            "solutions": {"type": "array", "items": _obj({"k": _int, "X": _int, "Y": _int})},
        }
    ),
    "rank": _obj(
        {
            "d": _int,
            "group": _str,
            "components": {
                "type": "array",
                "items": _obj(
                    {
                        "level": _int,
                        "splits": _bool,
                        "degree": _int,
                        "r1": _int,
                        "r2": _int,
                        "unit_rank": _int,
                        "multiplicity": _int,
                        "copies": _int,
                    }
                ),
            },
            "total_rank": _int,
            "base_rank": _int,
            "u1_rank": _int,
            "published": {"anyOf": [_int, {"type": "null"}]},
            "notes": {"type": "array", "items": _str},
        }
    ),
    "classify": _obj(
        {
            "d": _int,
            "group": _str,
            "hyperbolic": _bool,
            "case": _str,
            "reason": _str,
            "consistency_note": {"anyOf": [_str, {"type": "null"}]},
        }
    ),
    "units": _obj(
        {
            "d": _int,
            "family": _str,
            "units": {"type": "array", "items": _unit},
            "solutions": {"type": "array", "items": {"type": "array", "items": _int}},
        }
    ),
    "three-squares": _obj(
        {"n": _int, "triples": {"type": "array", "items": {"type": "array", "items": _int}}}
    ),
    "verify-unit": _obj(
        {
            "d": _int,
            "expr": _str,
            "norm": _str,
            "is_unit": _bool,
            "order": _order,
            "char_poly": _obj({"linear": _str, "constant": _str}),
        }
    ),
    "freeness": _obj(
        {
            "d": _int,
            "x": _str,
            "y": _str,
            "powers_disjoint": _bool,
            "max_length": _int,
            "relations": {"type": "array", "items": _str},
            "elements_examined": _int,
            "M": _int,
            "free_power": {"anyOf": [_int, {"type": "null"}]},
            "evidence_only": _bool,
        }
    ),
}

ERROR_SCHEMA = _obj({"error": _str})

ENVELOPE_SCHEMA = {
    "type": "object",
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": _str,
        "status": {"enum": [OK, NO_SOLUTION, INVALID_INPUT]},
        "payload": {"type": "object"},
        "citations": {"type": "array", "items": _str},
    },
    "required": ["schema", "command", "status", "payload", "citations"],
    "additionalProperties": False,
}


# helpers


def _frac(v: Fraction) -> str:
    return str(Fraction(v))


def _order_value(x: quaternion.Quaternion):
    o = quaternion.order(x)
    return "infinite" if o == quaternion.INFINITE else int(o)


def _unit_entry(w: unitfactory.UnitWitness) -> dict:
    return {
        "expr": quaternion.format_quaternion(w.u),
        "norm": w.norm,
        "order": _order_value(w.u),
        "family": w.family.value,
        "seed": dict(w.seed),
    }


def _group(text: str) -> groupring.GroupDescriptor:
    return groupring.parse_group(text)


# commands


def cmd_ring(a) -> CommandResult:
    r = quadfield.make_ring(a.d)
    ug = quadfield.unit_group_torsion(r)
    payload = {
        "d": r.d,
        "theta_kind": r.theta_kind.value,
        "theta": str(r.theta),
        "discriminant": r.discriminant,
        "is_real": r.is_real,
        "unit_group": ug.describe(),
        "torsion_order": ug.torsion_order,
        "rank": ug.rank,
    }
    return CommandResult(OK, payload, ["ring-of-integers", "unit-group"])


def cmd_fundunit(a) -> CommandResult:
    r = quadfield.make_ring(a.d)
    fu = quadfield.fundamental_unit(r)
    m2 = quadfield.unit_mod2_exponent(r)
    payload = {
        "d": r.d,
        "epsilon": str(fu.epsilon),
        "x": _frac(fu.epsilon.x),
        "y": _frac(fu.epsilon.y),
        "theta_coords": [_frac(c) for c in fu.epsilon.theta_coords],
        "norm": fu.norm,
        "mod2_order": fu.mod2_order,
        "mod2_bound": m2.bound,
    }
    return CommandResult(OK, payload, ["fundamental-unit", "mod2-exponent"])


def cmd_pell(a) -> CommandResult:
    if a.n < 1:
        raise _UsageError("-n must be a positive integer")
    sol = quadfield.pell_solve(a.D, a.rhs)
    if sol is None:
        return CommandResult(NO_SOLUTION, {"error": f"X^2 - {a.D}Y^2 = {a.rhs} has no integer solution"})
    sols = []
    for k in range(1, a.n + 1):
        # the k-th solution of the same sign is the (2k-1)-th power for rhs = -1
        s = quadfield.pell_nth(sol, 2 * k - 1 if a.rhs == -1 else k)
        sols.append({"k": k, "X": s.X, "Y": s.Y})
    return CommandResult(OK, {"D": a.D, "rhs": a.rhs, "solutions": sols}, ["pell"])


def cmd_rank(a) -> CommandResult:
    r = quadfield.make_ring(a.d)
    g = _group(a.group)
    rep = groupring.unit_rank(r, g)
    published = None
    if a.paper:
        if not g.is_cyclic():
            raise _UsageError("--paper needs a cyclic group C_n, n in {2,3,4,5,6,8}")
        published = groupring.paper_rank_table(g.order, r.d)
    comps = [
        {
            "level": c.level,
            "splits": c.splits,
            "degree": c.degree,
            "r1": c.r1,
            "r2": c.r2,
            "unit_rank": c.unit_rank,
            "multiplicity": c.multiplicity,
            "copies": c.copies,
        }
        for c in rep.components
    ]
    payload = {
        "d": r.d,
        "group": g.label,
        "components": comps,
        "total_rank": rep.total_rank,
        "base_rank": rep.base_rank,
        "u1_rank": rep.u1_rank,
        "published": published,
        "notes": list(rep.notes),
    }
    cites = ["wedderburn", "dirichlet"] + (["rank-table"] if a.paper else [])
    return CommandResult(OK, payload, cites)


def cmd_classify(a) -> CommandResult:
    r = quadfield.make_ring(a.d)
    g = _group(a.group)
    v = groupring.classify_hyperbolic(r, g, check=a.check)
    payload = {
        "d": r.d,
        "group": g.label,
        "hyperbolic": v.hyperbolic,
        "case": v.case_citation,
        "reason": v.reason,
        "consistency_note": v.consistency_note,
    }
    return CommandResult(OK, payload, [v.case_citation])


def cmd_units(a) -> CommandResult:
    ring = unitfactory.quaternion_ring(a.d)
    solutions: list[list[int]] = []
    fam = a.family
    if fam == "pell2":
        sol = quadfield.pell_solve(a.d, 1)
        w = unitfactory.pell2_unit(ring, sol, a.xi, a.psi)
        if a.power != 1:
            w = unitfactory.pell2_power(w, a.power)
        units = [w]
        cites = ["pell2"]
    elif fam == "pell3":
        units = [unitfactory.pell3_unit(ring, a.xi, a.psi, a.phi)]
        cites = ["pell3"]
    elif fam == "pell4":
        units = [unitfactory.pell4_unit(ring)]
        cites = ["pell4"]
    elif fam == "gauss":
        units = unitfactory.gauss_units(ring, a.m, a.norm, all=not a.first, support=a.support)
        cites = ["gauss-units", "three-squares"]
    else:
        res = unitfactory.eqgr_solve(ring, a.norm)
        solutions = [list(s) for s in res.solutions]
        units = list(res.units)
        cites = ["half-integral-units"]
        if not solutions:
            return CommandResult(NO_SOLUTION, {"error": f"m^2 + 2p^2 = {a.d + 2 * a.norm} has no solution"})
    payload = {"d": a.d, "family": fam, "units": [_unit_entry(w) for w in units], "solutions": solutions}
    return CommandResult(OK, payload, cites)


def cmd_three_squares(a) -> CommandResult:
    res = unitfactory.three_squares(a.N, all=a.all, bound=a.max_n)
    if res is None:
        return CommandResult(NO_SOLUTION, {"error": f"{a.N} is of the form 4^a(8b-1)"}, ["three-squares"])
    triples = res if a.all else [res]
    return CommandResult(OK, {"n": a.N, "triples": [list(t) for t in triples]}, ["three-squares"])


def cmd_verify_unit(a) -> CommandResult:
    ring = unitfactory.quaternion_ring(a.d)
    x = quaternion.parse_quaternion(ring, a.expr)
    unit, n = quaternion.is_unit(x)
    cp = quaternion.char_poly(x)
    payload = {
        "d": a.d,
        "expr": quaternion.format_quaternion(x),
        "norm": str(n),
        "is_unit": unit,
        "order": _order_value(x) if unit else None,
        "char_poly": {"linear": str(cp.linear), "constant": str(cp.constant)},
    }
    return CommandResult(OK, payload, ["norm-form", "torsion-orders"])


def cmd_freeness(a) -> CommandResult:
    ring = unitfactory.quaternion_ring(a.d)
    sol = quadfield.pell_solve(a.d, 1)
    x = unitfactory.u_eps_psi(ring, sol, a.psi)
    y = unitfactory.u_eps_psi(ring, sol, a.psi2)
    disjoint = freeness.powers_disjoint(x, y, a.bound)
    rep = freeness.no_relation_up_to(x.u, y.u, a.L, max_length=a.max_length)
    free_power = freeness.find_free_power(x.u, y.u, a.M, a.L, max_length=a.max_length) if a.M > 0 else None
    payload = {
        "d": a.d,
        "x": str(x.u),
        "y": str(y.u),
        "powers_disjoint": disjoint,
        "max_length": rep.max_length,
        "relations": list(rep.relations_found),
        "elements_examined": rep.elements_examined,
        "M": a.M,
        "free_power": free_power,
        "evidence_only": True,
    }
    return CommandResult(OK, payload, ["free-subgroup"])


# parser


def _basis(text: str) -> str:
    if text not in quaternion.BASIS:
        raise argparse.ArgumentTypeError(f"{text!r} is not one of 1, i, j, k")
    return text


def _sign(text: str) -> int:
    v = int(text)
    if v not in (1, -1):
        raise argparse.ArgumentTypeError("must be 1 or -1")
    return v


def build_parser() -> argparse.ArgumentParser:
    fmt = _Parser(add_help=False)
    g = fmt.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json", default=argparse.SUPPRESS)
    g.add_argument("--table", dest="fmt", action="store_const", const="table", default=argparse.SUPPRESS)

    p = _Parser(prog="hypunits", description="Exact unit computations in quadratic orders and quaternion orders.")
    top = p.add_mutually_exclusive_group()
    top.add_argument("--json", dest="fmt", action="store_const", const="json")
    top.add_argument("--table", dest="fmt", action="store_const", const="table")
    p.set_defaults(fmt="table")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, fn: Callable, help: str, field_d: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[fmt], help=help)
        sp.set_defaults(func=fn)
        if field_d:
            sp.add_argument("-d", type=int, required=True)
        return sp

    add("ring", cmd_ring, "ring of integers of Q(sqrt(d))")
    add("fundunit", cmd_fundunit, "fundamental unit of a real quadratic field")

    sp = add("pell", cmd_pell, "solve X^2 - D Y^2 = +-1", field_d=False)
    sp.add_argument("--D", type=int, required=True)
    sp.add_argument("--rhs", type=_sign, default=1)
    sp.add_argument("-n", type=int, default=1, help="number of solutions to list")

    sp = add("rank", cmd_rank, "torsion-free rank of U1(o_K[G])")
    sp.add_argument("--group", required=True)
    sp.add_argument("--paper", action="store_true", help="also report the published table value")

    sp = add("classify", cmd_classify, "is U1(o_K[G]) hyperbolic?")
    sp.add_argument("--group", required=True)
    sp.add_argument("--check", action="store_true", help="cross-check with the rank engine")

    sp = add("units", cmd_units, "construct units of H(o_K), K = Q(sqrt(-d))", field_d=False)
    sp.add_argument("family", choices=["pell2", "pell3", "pell4", "gauss", "eqgr"])
    sp.add_argument("-d", type=int, required=True, help="positive d = 7 (mod 8)")
    sp.add_argument("--xi", type=_basis, default=None)
    sp.add_argument("--psi", type=_basis, default=None)
    sp.add_argument("--phi", type=_basis, default="j")
    sp.add_argument("--power", type=int, default=1)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--norm", type=_sign, default=1)
    sp.add_argument("--support", default="ijk")
    sp.add_argument("--first", action="store_true", help="gauss: stop at the first decomposition")

    sp = add("three-squares", cmd_three_squares, "write N as a sum of three squares", field_d=False)
    sp.add_argument("N", type=int)
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--max-n", type=int, default=unitfactory.DEFAULT_SQUARES_BOUND)

    sp = add("verify-unit", cmd_verify_unit, "norm, unit test and order of a quaternion")
    sp.add_argument("--expr", required=True)

    sp = add("freeness", cmd_freeness, "bounded relation search for two 2-Pell units")
    sp.add_argument("--psi", type=_basis, default="i")
    sp.add_argument("--psi2", type=_basis, default="j")
    sp.add_argument("-L", type=int, default=6)
    sp.add_argument("-M", type=int, default=0)
    sp.add_argument("--bound", type=int, default=6, help="power bound for the disjointness check")
    sp.add_argument("--max-length", type=int, default=freeness.MAX_WORD_LENGTH)
    return p


def _fill_unit_defaults(a) -> None:
    if getattr(a, "command", None) != "units":
        return
    if a.family == "pell2":
        a.xi = a.xi or "i"
        a.psi = a.psi or "1"
    elif a.family == "pell3":
        a.xi = a.xi or "1"
        a.psi = a.psi or "i"
    elif a.family == "gauss" and a.m is None:
        raise _UsageError("units gauss needs --m")


# rendering


def envelope(command: str, result: CommandResult) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "status": result.status,
        "payload": result.payload,
        "citations": sorted(set(result.citations)),
    }


def render_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_cell(x) for x in v) + ")"
    if isinstance(v, dict):
        return " ".join(f"{k}={_cell(v[k])}" for k in sorted(v))
    return str(v)


def _table(rows: list[dict]) -> list[str]:
    cols = list(rows[0])
    cells = [[_cell(r[c]) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip() for row in cells]
    return lines


def render_table(doc: dict) -> str:
    lines = [f"{doc['command']}: {doc['status']}"]
    payload = doc["payload"]
    blocks = []
    for key in sorted(payload):
        v = payload[key]
        if isinstance(v, list) and v and isinstance(v[0], dict):
            blocks.append((key, _table(v)))
        else:
            lines.append(f"  {key}: {_cell(v)}")
    for key, tbl in blocks:
        lines.append(f"  {key}:")
        lines += ["    " + t for t in tbl]
    if doc["citations"]:
        lines.append("  citations: " + ", ".join(doc["citations"]))
    return "\n".join(lines) + "\n"


def dispatch(argv: Optional[Sequence[str]] = None) -> tuple[dict, str]:
    """Run one command; returns the envelope and the chosen output format."""
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "json" if "--json" in argv and "--table" not in argv else "table"
    command = next((t for t in argv if not t.startswith("-")), "")
    try:
        a = build_parser().parse_args(argv)
        fmt, command = a.fmt, a.command
        _fill_unit_defaults(a)
        result = a.func(a)
    except NoSolutionError as e:
        result = CommandResult(NO_SOLUTION, {"error": str(e)})
    except (HypUnitsError, ZeroDivisionError) as e:
        result = CommandResult(INVALID_INPUT, {"error": str(e) or type(e).__name__})
    return envelope(command, result), fmt


def main(argv: Optional[Sequence[str]] = None) -> int:
    doc, fmt = dispatch(argv)
    out = render_json(doc) if fmt == "json" else render_table(doc)
    sys.stdout.write(out)
    if doc["status"] != OK:
        sys.stderr.write(f"hypunits: {doc['status']}: {doc['payload'].get('error', '')}\n")
    return EXIT_CODES[doc["status"]]


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
