"""Command-line entry point.

Reports are single lines of space-separated ``key=value`` pairs.  Keys are
identifiers; values never contain whitespace or ``=``.  A missing value is
written ``-``.  Timings go to stderr so stdout is reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import alignment as al
from . import counting, inference, models, polyalg
from .svg import polygon_svg

EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_KEY = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


class ValidationError(ValueError):
    pass


def parse_rational(text: str) -> Fraction:
    """``p/q`` or an integer; decimals are rejected to keep inputs exact."""
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ValidationError(f"not a rational of the form p/q: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValidationError("zero denominator")
    return Fraction(int(num), int(den) if den else 1)


def format_value(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    s = str(v)
    if not s or any(c.isspace() for c in s) or "=" in s:
        raise ValueError(f"value {s!r} cannot appear in a record")
    return s


def format_record(fields: dict) -> str:
    for k in fields:
        if not _KEY.match(k):
            raise ValueError(f"bad record key {k!r}")
    return " ".join(f"{k}={format_value(v)}" for k, v in fields.items())


def parse_record(line: str) -> dict:
    """Inverse of :func:`format_record` (values come back as strings, ``-`` as None)."""
    out = {}
    for tok in line.split():
        k, sep, v = tok.partition("=")
        if not sep or not _KEY.match(k):
            raise ValueError(f"malformed record token {tok!r}")
        out[k] = None if v == "-" else v
    return out


def _emit(line: str = "") -> None:
    sys.stdout.write(line + "\n")


def _load_model(path: str) -> models.FactorModel:
    try:
        with open(path) as fh:
            return models.FactorModel.loads(fh.read())
    except (OSError, json.JSONDecodeError, KeyError) as e:
        raise ValidationError(f"cannot read model {path}: {e}") from None


def _positive(name: str, value: Optional[int], minimum: int = 1) -> None:
    if value is not None and value < minimum:
        raise ValidationError(f"--{name} must be >= {minimum}")


# ---------------------------------------------------------------------------
# subcommands


def cmd_model(args) -> int:
    if args.family == "hmm":
        _positive("n", args.n)
        m = models.build_homogeneous_hmm(args.n or 5, args.l, args.lp)
    elif args.family == "lowerbound":
        if args.d is None or args.n is None:
            raise ValidationError("lowerbound needs --d and --n")
        m = models.build_lowerbound_hmm(args.d, args.n)
    else:
        n1 = args.n1 if args.n1 is not None else args.n
        n2 = args.n2 if args.n2 is not None else args.n
        if n1 is None or n2 is None:
            raise ValidationError("alignment needs --n or --n1/--n2")
        m = models.build_alignment_model(n1, n2)
    text = m.dumps() + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _emit(format_record({"model": m.name, "d": m.d, "q": m.q, "n": m.n, "out": args.out}))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_viterbi(args) -> int:
    m = _load_model(args.model)
    v = [parse_rational(x) for x in args.logparams.split(",")]
    if len(v) != m.d:
        raise ValidationError(f"--logparams needs {m.d} values")
    h, score = inference.viterbi(m, args.obs, v)
    _emit(format_record({"obs": args.obs, "explanation": h, "score": score}))
    return EXIT_OK


def cmd_np(args) -> int:
    m = _load_model(args.model)
    P = inference.observation_polytope(m, args.obs)
    sys.stdout.write(P.polytope.to_text())
    for i, v in enumerate(P.vertices):
        _emit(format_record({"vertex": i, "witness": P.witness[v]}))
    return EXIT_OK


def cmd_count(args) -> int:
    m = _load_model(args.model)
    _positive("jobs", args.jobs)
    if args.sample is not None:
        _positive("sample", args.sample)
        seed = args.seed if args.seed is not None else 0
        got = counting.sample_inference_functions(m, args.sample, seed, cap=args.cap)
        _emit(format_record({"model": m.name, "samples": args.sample, "seed": seed, "sampled": got}))
        return EXIT_OK
    t0 = time.perf_counter()
    rep = counting.count_inference_functions(m, jobs=args.jobs, cap=args.cap)
    print(f"wall_time={time.perf_counter() - t0:.2f}s", file=sys.stderr)
    if args.emit_polytope:
        with open(args.emit_polytope, "w") as fh:
            fh.write(rep.polytope.to_text())
    _emit(format_record(rep.record()))
    _emit(format_record({"count": rep.count}))
    return EXIT_OK


def cmd_bound(args) -> int:
    _positive("M", args.M, 0)
    _positive("d", args.d)
    _positive("m", args.m)
    _emit(polyalg.bounds(args.m, args.M, args.d).line())
    return EXIT_OK


def cmd_arrangement(args) -> int:
    if args.rays:
        rep = counting.extreme_rays_check(args.d, args.n, jobs=args.jobs)
    else:
        rep = counting.arrangement_chambers(args.d, args.n, jobs=args.jobs)
    _emit(format_record(rep.record()))
    return EXIT_OK


def cmd_primprob(args) -> int:
    seed = args.seed if args.seed is not None else 0
    p = counting.primitive_probability(args.d, args.m, args.box, args.samples, seed)
    lo, hi = counting.zeta_reference(args.d, args.m)
    _emit(
        format_record(
            {
                "d": args.d,
                "m": args.m,
                "box": args.box,
                "samples": args.samples,
                "seed": seed,
                "p": f"{p:.6f}",
                "ref_lo": f"{float(lo):.7f}",
                "ref_hi": f"{float(hi):.7f}",
            }
        )
    )
    return EXIT_OK


def _write_svg(path: str, vertices, labels=None) -> None:
    with open(path, "w") as fh:
        fh.write(polygon_svg(vertices, labels))


def cmd_align(args) -> int:
    if args.align_cmd == "polygon":
        P = al.alignment_polygon(args.s1, args.s2)
        sys.stdout.write(P.polytope.to_text())
        if args.witnesses:
            for i, v in enumerate(P.vertices):
                _emit(format_record({"vertex": i, "mu1": P.witness[v].mu1, "mu2": P.witness[v].mu2}))
        if args.svg:
            _write_svg(args.svg, P.vertices)
        return EXIT_OK
    if args.align_cmd == "best":
        params = al.ScoringParams(parse_rational(args.alpha), parse_rational(args.beta))
        a, score = al.optimal_alignment(args.s1, args.s2, params)
        _emit(format_record({"mu1": a.mu1, "mu2": a.mu2, "score": score}))
        return EXIT_OK
    if args.align_cmd == "count":
        if not 1 <= args.n <= al.MAX_COUNT_N:
            raise counting.BudgetExceeded(f"--n must be in 1..{al.MAX_COUNT_N}")
        rep = al.count_alignment_inference_functions(args.n, jobs=args.jobs)
        _emit(format_record(rep.record()))
        if args.svg:
            _write_svg(args.svg, rep.summed.vertices, labels=[""] * len(rep.summed))
        return EXIT_OK
    # slopes
    _positive("n", args.n)
    fams = al.feasible_slopes(args.n)
    for u, v in fams:
        s1, s2 = al.slope_family(u, v, args.n)
        P = al.alignment_polygon(s1, s2)
        ok = P.vertices == tuple(al.slope_family_vertices(u, v, args.n))
        _emit(format_record({"u": u, "v": v, "s1": s1, "s2": s2, "verified": "yes" if ok else "no"}))
    _emit(format_record({"n": args.n, "families": len(fams)}))
    return EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="inferpoly", description="Exact inference-function counting for graphical models.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    m = sub.add_parser("model", help="build a model and print its JSON")
    m.add_argument("action", choices=["build"])
    m.add_argument("--family", choices=["hmm", "lowerbound", "alignment"], required=True)
    m.add_argument("--n", type=int)
    m.add_argument("--l", type=int, default=2)
    m.add_argument("--lp", type=int, default=2)
    m.add_argument("--d", type=int)
    m.add_argument("--n1", type=int)
    m.add_argument("--n2", type=int)
    m.add_argument("--out")
    m.set_defaults(func=cmd_model)

    v = sub.add_parser("viterbi", help="best explanation of one observation")
    v.add_argument("--model", required=True)
    v.add_argument("--obs", required=True)
    v.add_argument("--logparams", required=True, help="comma separated rationals p/q")
    v.set_defaults(func=cmd_viterbi)

    n = sub.add_parser("np", help="Newton polytope of one observation with witnesses")
    n.add_argument("--model", required=True)
    n.add_argument("--obs", required=True)
    n.set_defaults(func=cmd_np)

    c = sub.add_parser("count", help="count inference functions")
    c.add_argument("--model", required=True)
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--emit-polytope", dest="emit_polytope")
    c.add_argument("--cap", type=int, default=inference.DEFAULT_CAP)
    c.add_argument("--sample", type=int, help="sample this many parameter points instead")
    c.add_argument("--seed", type=int)
    c.set_defaults(func=cmd_count)

    b = sub.add_parser("bound", help="vertex-count bounds")
    b.add_argument("--M", type=int, required=True)
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--m", type=int)
    b.set_defaults(func=cmd_bound)

    a = sub.add_parser("arrangement", help="chambers of the lower-bound arrangement")
    a.add_argument("--d", type=int, required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--rays", action="store_true", help="also count extreme rays per chamber")
    a.add_argument("--jobs", type=int, default=1)
    a.set_defaults(func=cmd_arrangement)

    pp = sub.add_parser("primprob", help="Monte Carlo probability that random vectors are primitive")
    pp.add_argument("--d", type=int, required=True)
    pp.add_argument("--m", type=int, required=True)
    pp.add_argument("--box", type=int, required=True)
    pp.add_argument("--samples", type=int, required=True)
    pp.add_argument("--seed", type=int)
    pp.set_defaults(func=cmd_primprob)

    al_p = sub.add_parser("align", help="two-parameter sequence alignment")
    asub = al_p.add_subparsers(dest="align_cmd", required=True, parser_class=_Parser)
    ap = asub.add_parser("polygon")
    ap.add_argument("--s1", required=True)
    ap.add_argument("--s2", required=True)
    ap.add_argument("--witnesses", action="store_true")
    ap.add_argument("--svg")
    ab = asub.add_parser("best")
    ab.add_argument("--s1", required=True)
    ab.add_argument("--s2", required=True)
    ab.add_argument("--alpha", required=True)
    ab.add_argument("--beta", required=True)
    ac = asub.add_parser("count")
    ac.add_argument("--n", type=int, required=True)
    ac.add_argument("--jobs", type=int, default=1)
    ac.add_argument("--svg")
    asl = asub.add_parser("slopes")
    asl.add_argument("--n", type=int, required=True)
    al_p.set_defaults(func=cmd_align)
    return p


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except (counting.BudgetExceeded, inference.CapExceeded) as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
