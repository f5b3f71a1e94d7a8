"""Command-line front end.

Exit codes: 0 success, 1 property violation, 2 input error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from typing import Sequence

from . import __version__
from . import algebra as alg
from .blueprint import Blueprint, blow_up, blueprint_from_json, profile_prefix, window_vector
from . import checks
from .core import is_tournament
from .decomposition import (decomposition_of_blueprint, is_finitely_generated, is_hereditary_minimal,
                            kernel_elements, tournament_finite_generation)
from .errors import (AgeAlgebraError, CapExceededError, InternalInconsistencyError, NotStabilizedError,
                     ValidationError)
from .groupoid import (WREATH_PAIRS, PermutationGroup, PermutationGroupoid, get_symmetry,
                       groupoid_from_json, groupoid_names, hilbert_prefix, minimal_generation_degree,
                       orbit_counts, wreath_crosscheck)
from .library import builtin_names, get_builtin
from .series import (DEFAULT_PREFIX, DEFAULT_WINDOW, bounded_profile_certificate, fit_rational, growth_degree,
                     numerator_nonneg_search, to_quasi_polynomial, validate_quasi_polynomial)

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

DEFAULT_N = {"profile": 10, "decompose": 0, "series": DEFAULT_PREFIX, "algebra": 6, "groupoid": 12, "check": 6}


class Source:
    """What a command operates on: a blueprint, a symmetry, or a bare prefix."""

    def __init__(self, label: str, blueprint: Blueprint | None = None, symmetry=None, prefix=None):
        self.label = label
        self.blueprint = blueprint
        self.symmetry = symmetry
        self.prefix = prefix

    def counts(self, N: int) -> list[int]:
        if self.blueprint is not None:
            return profile_prefix(self.blueprint, N)
        if self.symmetry is not None:
            return orbit_counts(self.symmetry, N)
        if len(self.prefix) < N + 1:
            raise ValidationError(f"input prefix has {len(self.prefix)} terms, need {N + 1}")
        return list(self.prefix[: N + 1])

    def require_blueprint(self) -> Blueprint:
        if self.blueprint is None:
            raise ValidationError(f"{self.label} is not a blueprint")
        return self.blueprint

    def require_groupoid(self) -> PermutationGroupoid:
        if isinstance(self.symmetry, PermutationGroup):
            return self.symmetry.as_groupoid()
        if self.symmetry is None:
            raise ValidationError(f"{self.label} is not a group or groupoid")
        return self.symmetry


def load_source(builtin: str | None, path: str | None) -> Source:
    if builtin:
        try:
            return Source(builtin, blueprint=get_builtin(builtin))
        except ValidationError:
            pass
        try:
            return Source(builtin, symmetry=get_symmetry(builtin))
        except ValidationError:
            raise ValidationError(f"unknown built-in {builtin!r}; blueprints: {', '.join(builtin_names())}; "
                                  f"groupoids: {', '.join(groupoid_names())}") from None
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    if "template" in data:
        return Source(path, blueprint=blueprint_from_json(data, name=data.get("name", "")))
    if "blueprint" in data:
        return Source(path, blueprint=blueprint_from_json(data["blueprint"], name=data.get("name", "")))
    if "k" in data:
        return Source(path, symmetry=groupoid_from_json(data))
    if "prefix" in data:
        prefix = data["prefix"]
        if not isinstance(prefix, list) or not all(isinstance(v, int) and v >= 0 for v in prefix):
            raise ValidationError("prefix must be a list of nonnegative integers")
        return Source(path, prefix=prefix)
    raise ValidationError(f"{path}: expected a blueprint, a groupoid or a prefix object")


# --- commands ----------------------------------------------------------------

def cmd_profile(src: Source, cfg: dict) -> tuple[dict, int]:
    N = cfg["N"]
    prefix = src.counts(N)
    growth = growth_degree(prefix, cfg["window"]) if N >= 8 else None
    return {"source": src.label, "profile": prefix,
            "growth": growth.to_json() if growth else {"degree": None, "k": None, "flagged": "need N >= 8"}}, EXIT_OK


def cmd_decompose(src: Source, cfg: dict) -> tuple[dict, int]:
    b = src.require_blueprint()
    t_max = cfg["t_max"]
    rep = decomposition_of_blueprint(b, t_max)
    hm = is_hereditary_minimal(b, t_max)
    fg = is_finitely_generated(b, t_max)
    rule = None
    if is_tournament(blow_up(b, window_vector(b, 2))):
        tv = tournament_finite_generation(b, t_max)
        if bool(tv) != bool(fg):
            raise InternalInconsistencyError("tournament rule and hereditary-minimality verdict disagree")
        rule = tv.reason
    kernel = kernel_elements(b, t_max)
    return {"source": src.label, "blocks": [list(x) for x in rep.blocks], "infinite": list(rep.infinite),
            "dimension": rep.dimension, "stabilized": rep.stabilized, "hereditary_minimal": hm,
            "finitely_generated": bool(fg), "reason": fg.reason, "tournament_rule": rule,
            "kernel": [list(e) for e in kernel.elements]}, EXIT_OK


def cmd_series(src: Source, cfg: dict) -> tuple[dict, int]:
    N, window = cfg["N"], cfg["window"]
    prefix = src.counts(N)
    k = cfg["k"]
    if k is None:
        g = growth_degree(prefix, window)
        k = g.k
    out = {"source": src.label, "prefix": prefix, "k": k, "form": None, "krull_form": None,
           "quasi_polynomial": None, "n0": None, "nonneg_search": None,
           "bounded": bounded_profile_certificate(prefix, window).to_json()}
    if k is None:
        out["form"] = {"failure": "no rational fit found for any pole order within the prefix"}
        return out, EXIT_OK
    rf = fit_rational(prefix, k, window)
    out["form"] = rf.to_json()
    krull = fit_rational(prefix, None, window, denominator=(1,) * k)
    out["krull_form"] = krull.to_json()
    if rf:
        qp = to_quasi_polynomial(rf)
        out["quasi_polynomial"] = qp.to_json()
        out["n0"] = validate_quasi_polynomial(qp, prefix)
        if k >= 1:
            out["nonneg_search"] = numerator_nonneg_search(prefix, k, cfg["bound"], window).to_json()
    return out, EXIT_OK


def cmd_algebra(src: Source, cfg: dict) -> tuple[dict, int]:
    b = src.require_blueprint()
    N, D = cfg["N"], min(cfg["D"], cfg["N"])
    order = alg.TermOrder(cfg["order"])
    consts = [{"rho": list(r.representative), "sigma": list(s.representative), "tau": list(t.representative),
               "c": c} for r, s, t, c in alg.structure_constants_table(b, min(N, 4))]
    rep = alg.addlayer_check(b, N, order)
    return {"source": src.label,
            "dimensions": [len(alg.basis(b, n)) for n in range(N + 1)],
            "e1_ranks": [alg.e1_rank(b, n) for n in range(N)],
            "structure_constants": consts,
            "addlayer": {"checked": rep.checked, "passed": rep.passed, "order": order.kind,
                         "violations": [{"degree": n, "monomial": list(m), "layer": list(S)}
                                        for n, m, S in rep.violations]},
            "generation": [{"n": r.degree, "spanned": r.spanned, "dimension": r.dimension}
                           for r in alg.generated_in_degree(b, D, N)],
            "D": D}, EXIT_OK


def cmd_groupoid(src: Source, cfg: dict) -> tuple[dict, int]:
    g = src.require_groupoid()
    N, window = cfg["N"], cfg["window"]
    prefix = hilbert_prefix(g, N)
    k = growth_degree(prefix, window).k if N >= 8 else None
    rf = fit_rational(prefix, None, window, denominator=(1,) * g.k) if g.k else None
    search = numerator_nonneg_search(prefix, k, cfg["bound"], window).to_json() if k else None
    d_max = cfg["D"] if cfg["D_given"] else g.k * (g.k + 1) // 2
    gen_N = min(N, 8)
    D = minimal_generation_degree(g, gen_N, max(1, min(d_max, gen_N)))
    wreath = None
    if src.label in WREATH_PAIRS:
        wreath = wreath_crosscheck(src.symmetry, get_builtin(WREATH_PAIRS[src.label]), min(N, 8)).to_json()
        wreath["blueprint"] = WREATH_PAIRS[src.label]
    status = EXIT_VIOLATION if wreath and not wreath["passed"] else EXIT_OK
    return {"source": src.label, "k": g.k, "size": len(g), "hilbert_prefix": prefix,
            "form": rf.to_json() if rf is not None else None, "nonneg_search": search,
            "generation_degree": D, "generation_bound": d_max, "generation_N": gen_N,
            "wreath": wreath}, status


def cmd_check(src: Source | None, cfg: dict) -> tuple[dict, int]:
    results = checks.run_checks(cfg["N"], cfg["seed"])
    ok = all(r.passed for r in results)
    return {"checks": [r.to_json() for r in results], "passed": ok}, EXIT_OK if ok else EXIT_VIOLATION


COMMANDS = {"profile": cmd_profile, "decompose": cmd_decompose, "series": cmd_series,
            "algebra": cmd_algebra, "groupoid": cmd_groupoid, "check": cmd_check}


# --- formatting --------------------------------------------------------------

def _csv_rows(command: str, result: dict) -> list[list]:
    if command == "profile":
        return [["n", "phi"]] + [[n, v] for n, v in enumerate(result["profile"])]
    if command == "series":
        qp = result["quasi_polynomial"]
        rows = [["n", "phi", "qp"]]
        for n, v in enumerate(result["prefix"]):
            val = ""
            if qp and n >= qp["start"]:
                coeffs = qp["residues"][n % qp["period"]]
                val = str(sum(Fraction(a) * n**i for i, a in enumerate(coeffs)))
            rows.append([n, v, val])
        return rows
    if command == "decompose":
        return [["block", "indices", "infinite"]] + [
            [i, " ".join(map(str, blk)), inf] for i, (blk, inf) in enumerate(zip(result["blocks"], result["infinite"]))]
    if command == "algebra":
        return [["rho", "sigma", "tau", "c"]] + [
            [" ".join(map(str, r[x])) for x in ("rho", "sigma", "tau")] + [r["c"]] for r in result["structure_constants"]]
    if command == "groupoid":
        return [["n", "orbits"]] + [[n, v] for n, v in enumerate(result["hilbert_prefix"])]
    return [["name", "passed", "detail"]] + [[c["name"], c["passed"], c["detail"]] for c in result["checks"]]


def _text(command: str, report: dict) -> str:
    r = report["result"]
    lines = [f"agealgebra {report['version']} {command} ({report['timing']['seconds']:.2f}s, seed {report['seed']})"]
    if command == "check":
        for c in r["checks"]:
            lines.append(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}: {c['detail']}")
        lines.append("all checks passed" if r["passed"] else "some checks FAILED")
        return "\n".join(lines)
    for key, val in r.items():
        lines.append(f"{key}: {json.dumps(val) if not isinstance(val, str) else val}")
    return "\n".join(lines)


def render(command: str, report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False)
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(_csv_rows(command, report["result"]))
        return buf.getvalue().rstrip("\n")
    return _text(command, report)


# --- argument parsing --------------------------------------------------------

def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="agealgebra", description="Profiles and age algebras of relational structures.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        if name != "check":
            src = p.add_mutually_exclusive_group(required=True)
            src.add_argument("--builtin", metavar="NAME")
            src.add_argument("--input", metavar="PATH")
        p.add_argument("-N", type=_positive, default=None, help="degree / prefix bound")
        p.add_argument("-D", type=_positive, default=None, help="generation degree bound")
        p.add_argument("--t-max", type=_positive, default=3, help="largest window for decompositions")
        p.add_argument("--window", type=_positive, default=DEFAULT_WINDOW, help="zero guard coefficients in fits")
        p.add_argument("-k", type=_positive, default=None, help="pole order for series fits")
        p.add_argument("--bound", type=_positive, default=8, help="exponent bound for numerator search")
        p.add_argument("--order", choices=("deglex", "lex"), default="deglex")
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--seed", type=int, default=0)
    return parser


def _fail(message: str, code: int, fmt: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    if fmt == "json":
        print(json.dumps({"error": message, "exit_code": code}))
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    command = args.command
    cfg = {"N": args.N or DEFAULT_N[command], "D": args.D or 2, "D_given": args.D is not None,
           "t_max": args.t_max, "window": args.window, "k": args.k, "bound": args.bound,
           "order": args.order, "seed": args.seed}
    if command == "decompose":
        cfg.pop("N")
    start = time.perf_counter()
    try:
        src = None if command == "check" else load_source(args.builtin, args.input)
        result, status = COMMANDS[command](src, cfg)
    except (CapExceededError, NotStabilizedError) as exc:
        return _fail(str(exc), EXIT_CAP, args.format)
    except InternalInconsistencyError as exc:
        return _fail(f"internal inconsistency: {exc}", EXIT_VIOLATION, args.format)
    except (ValidationError, AgeAlgebraError) as exc:
        return _fail(str(exc), EXIT_INPUT, args.format)
    config = {"command": command, "source": None if src is None else src.label,
              **{k: v for k, v in cfg.items() if k != "D_given"}, "format": args.format}
    report = {"tool": "agealgebra", "version": __version__, "command": command, "config": config,
              "seed": args.seed, "timing": {"seconds": round(time.perf_counter() - start, 4)}, "result": result}
    print(render(command, report, args.format))
    return status


if __name__ == "__main__":
    sys.exit(main())
