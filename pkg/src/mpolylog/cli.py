"""Command-line front end.

Exit codes: 0 success, 2 a verification residual (or fit check) failed,
3 invalid input, 4 pole or degenerate configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
from fractions import Fraction
from typing import Sequence

import mpmath

from .asymptotics import AsymptoticModel, FitError
from .cyclo import RootOfUnity, parse_root
from .domains import (
    as_profile,
    in_closure_U_z,
    in_U,
    in_U_z,
    in_V_z,
    index_set_I,
    index_set_I_prime,
    index_set_I_z,
    polar_hyperplanes,
)
from .numerics import (
    EvalConfig,
    fit_grids,
    li_value,
    partial_sums,
    regularized_value,
    verify_combi,
    verify_corollary_vrz,
    verify_expansion,
    verify_translation,
)
from .ratfield import laurent_expansion
from .specialseq import PoleError

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_POLE = 0, 2, 3, 4

VECTOR_FLAGS = ("--z", "--s", "--a", "--k")

BOUNDARY_EXAMPLES = [(("1", "-1"), (1, 1)), (("1", "-1", "-1"), (1, 1, 0))]
GENERAL_EXAMPLES = [(("-1", "1", "-1", "1"), (0, 1, 0, 1))]
VRZ_EXAMPLES = [(("1", "-1"), (2, 0)), (("1", "-1"), (2, 1)), (("-1", "1"), (-2, 3))]


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def parse_roots(text: str) -> tuple[RootOfUnity, ...]:
    try:
        return tuple(parse_root(part) for part in _split(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad root list {text!r}: {exc}") from None


def parse_numbers(text: str) -> list:
    out = []
    for part in _split(text):
        try:
            out.append(int(part))
        except ValueError:
            try:
                out.append(mpmath.mpmathify(part.replace("i", "j")))
            except (ValueError, TypeError):
                raise InputError(f"bad number {part!r}") from None
    return out


def parse_ints(text: str) -> list[int]:
    try:
        return [int(part) for part in _split(text)]
    except ValueError:
        raise InputError(f"expected integers, got {text!r}") from None


def _split(text: str) -> list[str]:
    parts = [p.strip() for p in text.split(",")]
    if not text.strip() or any(not p for p in parts):
        raise InputError(f"empty entry in {text!r}")
    return parts


def _join_vector_flags(argv: Sequence[str]) -> list[str]:
    """Glue ``--z -1,1`` into ``--z=-1,1`` so leading minus signs are not read as flags."""
    out, i = [], 0
    argv = list(argv)
    while i < len(argv):
        tok = argv[i]
        if tok in VECTOR_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def read_config_file(path: str) -> dict[str, str]:
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InputError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            values[key.strip()] = value.strip()
    return values


def build_config(args) -> EvalConfig:
    values: dict[str, str] = {}
    if args.config:
        values.update(read_config_file(args.config))
    for item in args.set or []:
        if "=" not in item:
            raise InputError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        values[key.strip()] = value.strip()
    if args.precision is not None:
        values["precision"] = str(args.precision)
    if args.tolerance is not None:
        values["tolerance"] = str(args.tolerance)
    try:
        cfg = EvalConfig.from_mapping(values)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if cfg.precision < 30:
        raise InputError("precision must be at least 30 digits")
    return cfg


def _same_length(**vectors):
    lengths = {k: len(v) for k, v in vectors.items() if v is not None}
    if len(set(lengths.values())) > 1:
        raise InputError(f"vector lengths differ: {lengths}")


def _num(x, digits: int):
    x = mpmath.mpmathify(x)
    if isinstance(x, mpmath.mpc) and x.imag != 0:
        return {"re": mpmath.nstr(x.real, digits), "im": mpmath.nstr(x.imag, digits)}
    return mpmath.nstr(mpmath.re(x), digits)


def _num_text(x, digits: int) -> str:
    v = _num(x, digits)
    return v if isinstance(v, str) else f"{v['re']} + {v['im']}*i"


def _emit(args, payload: dict, text_lines: list[str], csv_rows: list[list] | None = None):
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "csv":
        writer = csv.writer(sys.stdout)
        for row in csv_rows or []:
            writer.writerow(row)
    else:
        print("\n".join(text_lines))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eval(args, cfg: EvalConfig) -> int:
    z, s = parse_roots(args.z), parse_numbers(args.s)
    _same_length(z=z, s=s)
    value = li_value(z, s, cfg)
    digits = args.digits or cfg.precision
    out = _num(value, digits)
    zt = [w.text() for w in z]
    st = [str(x) for x in s]
    re_im = (mpmath.nstr(mpmath.re(value), digits), mpmath.nstr(mpmath.im(value), digits))
    _emit(args, {"z": zt, "s": st, "value": out},
          [_num_text(value, digits)],
          [["z", "s", "re", "im"], [" ".join(zt), " ".join(st), *re_im]])
    return EXIT_OK


def cmd_reg(args, cfg: EvalConfig) -> int:
    z, a = parse_roots(args.z), parse_ints(args.a)
    k = parse_ints(args.k) if args.k else [0] * len(z)
    if len(k) == 1 and len(z) > 1:
        k = k * len(z)
    _same_length(z=z, a=a, k=k)
    rv = regularized_value(z, a, k, cfg)
    digits = args.digits or 30
    if args.dump_samples:
        m_max = rv.diagnostics["chosen"]["m_max"]
        grid, _ = fit_grids(AsymptoticModel.from_shape(z, a, k, m_max), cfg)
        with open(args.dump_samples, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["N", "re", "im"])
            for N, v in sorted(partial_sums(z, a, k, grid, cfg).items()):
                writer.writerow([N, mpmath.nstr(mpmath.re(v), cfg.precision),
                                 mpmath.nstr(mpmath.im(v), cfg.precision)])
    lines = [f"value = {_num_text(rv.value, digits)}"]
    for term, c in rv.decomposition.coefficients.items():
        if term.e >= 0 and not term.is_constant and abs(c) > cfg.tolerance:
            lines.append(f"coefficient {term.key()} = {_num_text(c, 12)}")
    chosen = rv.diagnostics["chosen"]
    lines.append(f"two-grid gap {chosen['two_grid_gap']:.2e}, held-out residual "
                 f"{chosen['holdout_residual']:.2e}, m_max {chosen['m_max']}, terms {chosen['terms']}")
    rows = [["key", "re", "im"], ["constant", mpmath.nstr(mpmath.re(rv.value), digits),
                                  mpmath.nstr(mpmath.im(rv.value), digits)]]
    rows += [[t.key(), mpmath.nstr(mpmath.re(c), digits), mpmath.nstr(mpmath.im(c), digits)]
             for t, c in rv.decomposition.coefficients.items()]
    _emit(args, rv.to_dict(digits), lines, rows)
    return EXIT_OK


def cmd_expand(args, cfg: EvalConfig) -> int:
    z, a = parse_roots(args.z), parse_ints(args.a)
    _same_length(z=z, a=a)
    exp = laurent_expansion(z, a, args.mode)
    rows = [["index", "coefficient"]] + [[i, exp.coefficient(i).text()] for i in exp.indices]
    _emit(args, exp.to_dict(), [f"mode: {exp.mode}", exp.text()], rows)
    return EXIT_OK


def cmd_poles(args, cfg: EvalConfig) -> int:
    z = parse_roots(args.z)
    desc = polar_hyperplanes(z)
    lines = []
    for f in desc.families:
        lhs = "+".join(f"s{k}" for k in range(1, f.last_index + 1))
        lines.append(f"{lhs} = {f.max_level}" if f.exact else f"{lhs} = n, n <= {f.max_level}")
    if not lines:
        lines.append("no candidate polar hyperplanes")
    rows = [["last_index", "max_level", "only_max"]] + [
        [f.last_index, f.max_level, f.exact] for f in desc.families]
    _emit(args, {"z": [w.text() for w in z], **desc.to_dict()}, lines, rows)
    return EXIT_OK


def cmd_domains(args, cfg: EvalConfig) -> int:
    z = parse_roots(args.z)
    p = as_profile(z)
    payload = {"profile": p.to_dict(), "I_z": index_set_I_z(p)}
    lines = [f"I(z) = {index_set_I_z(p)}"]
    for row in payload["profile"]["rows"]:
        lines.append(f"i={row['i']}: J={row['J']} J'={row['J_prime']} Q={row['Q']} t={row['t']}")
    if args.a:
        a = parse_ints(args.a)
        _same_length(z=z, a=a)
        member = {"U": in_U(a), "U_z": in_U_z(p, a), "closure_U_z": in_closure_U_z(p, a),
                  "V_z": in_V_z(p, a)}
        payload.update({"a": a, "I_z_a": index_set_I(p, a),
                        "I_prime_z_a": index_set_I_prime(p, a), "membership": member})
        lines.append(f"I(z,a) = {index_set_I(p, a)}  I'(z,a) = {index_set_I_prime(p, a)}")
        lines.append(" ".join(f"{k}:{'yes' if v else 'no'}" for k, v in member.items()))
    rows = [["i", "Q", "J", "J_prime"]] + [
        [r["i"], r["Q"], " ".join(map(str, r["J"])), " ".join(map(str, r["J_prime"]))]
        for r in payload["profile"]["rows"]]
    _emit(args, payload, lines, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

_ROOT_POOL = [RootOfUnity(Fraction(p, q)) for q in (1, 2, 3, 4) for p in range(q)
              if Fraction(p, q).denominator == q]


def random_U_points(depth: int, count: int, seed: int):
    """Random roots and real points with every ``s_j > 1`` (hence inside ``U_r``)."""
    rng = random.Random(seed * 1000 + depth)
    out = []
    for _ in range(count):
        z = tuple(rng.choice(_ROOT_POOL) for _ in range(depth))
        s = [Fraction(rng.randint(110, 350), 100) for _ in range(depth)]
        s[0] += 1
        out.append((z, [mpmath.mpf(x.numerator) / x.denominator for x in s]))
    return out


def random_V_points(depth: int, count: int, seed: int):
    """Random integer points of ``V_r(z)`` with small entries."""
    rng = random.Random(seed * 1000 + 17 * depth)
    out = []
    while len(out) < count:
        z = tuple(rng.choice(_ROOT_POOL[:4]) for _ in range(depth))
        a = tuple(rng.randint(-2, 3) for _ in range(depth))
        if in_V_z(z, a) and (z, a) not in out:
            out.append((z, a))
    return out


def _suite_reports(args, cfg: EvalConfig):
    suite = args.suite
    given_z = parse_roots(args.z) if args.z else None
    depths = [args.depth] if args.depth else None
    count = args.count
    seed = cfg.seed
    if suite in ("translation", "all"):
        if given_z:
            s = parse_numbers(args.s)
            _same_length(z=given_z, s=s)
            yield verify_translation(given_z, s, args.N or 50, cfg)
        else:
            for d in depths or [1, 2]:
                for z, s in random_U_points(d, count, seed):
                    yield verify_translation(z, s, args.N or 50, cfg)
    if suite in ("combi", "all"):
        if given_z:
            s = parse_numbers(args.s)
            _same_length(z=given_z, s=s)
            yield verify_combi(given_z, s, args.N or 30, cfg)
        else:
            for d in depths or [1, 2, 3]:
                for z, s in random_U_points(d, count, seed + 1):
                    yield verify_combi(z, s, args.N or 30, cfg)
    for name, examples in (("boundary", BOUNDARY_EXAMPLES), ("general", GENERAL_EXAMPLES)):
        if suite in (name, "all"):
            if given_z and suite == name:
                a = parse_ints(args.a)
                _same_length(z=given_z, a=a)
                yield verify_expansion(given_z, a, name, cfg)
            else:
                for z, a in examples:
                    yield verify_expansion(z, a, name, cfg)
    if suite in ("vrz", "all"):
        if given_z and suite == "vrz":
            a = parse_ints(args.a)
            _same_length(z=given_z, a=a)
            yield verify_corollary_vrz(given_z, a, cfg)
        else:
            points = list(VRZ_EXAMPLES)
            for d in depths or [1, 2, 3]:
                points += random_V_points(d, max(1, count // 3), seed)
            for z, a in points:
                yield verify_corollary_vrz(z, a, cfg)


def cmd_verify(args, cfg: EvalConfig) -> int:
    # text lines stream to stdout as checks finish; structured formats get progress on stderr
    progress = sys.stdout if args.format == "text" else sys.stderr
    reports = []
    for report in _suite_reports(args, cfg):
        reports.append(report)
        print(report.line(), file=progress, flush=True)
    ok = all(r.passed for r in reports)
    rows = [["identity", "inputs", "residual", "tolerance", "pass"]] + [
        [r.identity, json.dumps(r.inputs), f"{r.residual:.6e}", r.tolerance, r.passed] for r in reports]
    _emit(args, {"suite": args.suite, "pass": ok, "reports": [r.to_dict() for r in reports]},
          [f"{'PASS' if ok else 'FAIL'} {len(reports)} checks"], rows)
    return EXIT_OK if ok else EXIT_FAILED


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpolylog",
        description="Multiple polylogarithms at roots of unity: values, regularised values, expansions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="working precision in decimal digits")
    common.add_argument("--tolerance", type=float, help="identity residual tolerance")
    common.add_argument("--config", help="file of key=value lines overriding evaluation settings")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override one evaluation setting (repeatable)")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    roots_help = "comma-separated roots: turns p/q, 1, -1, i, -i or zeta(q)^p"
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="value Li_z(s)")
    p.add_argument("--z", required=True, help=roots_help)
    p.add_argument("--s", required=True, help="comma-separated arguments (complex as 1+2j)")
    p.add_argument("--digits", type=int, help="digits to print")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("reg", parents=[common], help="regularised value at an integer point")
    p.add_argument("--z", required=True, help=roots_help)
    p.add_argument("--a", required=True, help="comma-separated integers")
    p.add_argument("--k", help="log powers per level (one value is repeated)")
    p.add_argument("--digits", type=int)
    p.add_argument("--dump-samples", metavar="CSV", help="write the sampled partial sums")
    p.set_defaults(func=cmd_reg)

    p = sub.add_parser("expand", parents=[common], help="Laurent-type expansion around an integer point")
    p.add_argument("--z", required=True, help=roots_help)
    p.add_argument("--a", required=True, help="comma-separated integers")
    p.add_argument("--mode", choices=("auto", "boundary", "general"), default="auto")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify", parents=[common], help="run identity checks")
    p.add_argument("--suite", choices=("translation", "combi", "boundary", "general", "vrz", "all"),
                   default="all")
    p.add_argument("--z", help=roots_help)
    p.add_argument("--s", help="point for translation/combi")
    p.add_argument("--a", help="integer point for boundary/general/vrz")
    p.add_argument("--N", type=int, help="tail start")
    p.add_argument("--depth", type=int, help="depth of random points")
    p.add_argument("--count", type=int, default=10, help="random points per depth")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("poles", parents=[common], help="candidate polar hyperplanes")
    p.add_argument("--z", required=True, help=roots_help)
    p.set_defaults(func=cmd_poles)

    p = sub.add_parser("domains", parents=[common], help="index sets and region membership")
    p.add_argument("--z", required=True, help=roots_help)
    p.add_argument("--a", help="integer point")
    p.set_defaults(func=cmd_domains)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_join_vector_flags(argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = build_config(args)
        return args.func(args, cfg)
    except PoleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_POLE
    except FitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (InputError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
