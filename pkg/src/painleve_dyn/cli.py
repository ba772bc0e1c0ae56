"""Command-line interface: ``painleve-dyn <command> ...``; results go to stdout as JSON."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from dataclasses import asdict, replace
from fractions import Fraction

import numpy as np

from . import __version__
from .cohomology import lefschetz_number, word_pullback
from .coxeter import LoopWord, SigmaWord, conjugate_to_AS, dynamical_degree, is_elementary, phi
from .errors import AmbiguousNearWall, BudgetExhausted, PainleveDynError, ParseError
from .params import (
    BParam,
    KappaParam,
    b_to_theta,
    classify_stratum,
    discriminant,
    kappa_to_b,
)
from .periodic import SolverConfig, count_report, dumps_points, load_config, points_csv
from .resolution import riccati_periods


# ------------------------------------------------------------- parsing


def _complex_token(tok: str) -> complex:
    tok = tok.strip().replace(" ", "").replace("i", "j")
    if not tok:
        raise ParseError("empty number")
    if "/" in tok and "j" not in tok:
        try:
            return complex(float(Fraction(tok)))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad number {tok!r}") from exc
    try:
        return complex(tok)
    except ValueError as exc:
        raise ParseError(f"bad number {tok!r}") from exc


def parse_vector(text: str, length: int = 5) -> tuple:
    """Comma-separated complex numbers, or a JSON list of numbers / [re, im] pairs."""
    text = text.strip()
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON vector: {exc}") from exc
        vals = []
        for v in data:
            if isinstance(v, list) and len(v) == 2:
                vals.append(complex(v[0], v[1]))
            elif isinstance(v, (int, float)):
                vals.append(complex(v))
            else:
                raise ParseError(f"bad JSON entry {v!r}")
    else:
        vals = [_complex_token(t) for t in text.split(",")]
    if len(vals) != length:
        raise ParseError(f"expected {length} components, got {len(vals)}")
    return tuple(vals)


def _pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _parameter(args) -> tuple:
    """(BParam, kappa-or-None) from --kappa, --b or --random-kappa."""
    given = [x for x in (args.kappa, args.b, args.random_kappa) if x is not None]
    if len(given) != 1:
        raise ParseError("give exactly one of --kappa, --b, --random-kappa")
    try:
        if args.kappa is not None:
            k = KappaParam(parse_vector(args.kappa))
            return kappa_to_b(k), k
        if args.b is not None:
            return BParam(parse_vector(args.b)), None
        k = KappaParam.random(np.random.default_rng(args.random_kappa))
        return kappa_to_b(k), k
    except ValueError as exc:
        if isinstance(exc, PainleveDynError):
            raise
        raise ParseError(str(exc)) from exc


def _word(args) -> tuple:
    """(SigmaWord in AS form, loop text or None)."""
    if (args.loop is None) == (args.sigma is None):
        raise ParseError("give exactly one of --loop, --sigma")
    if args.loop is not None:
        return phi(LoopWord.parse(args.loop)), args.loop
    return SigmaWord.parse(args.sigma), None


# ------------------------------------------------------------- commands


def cmd_classify(args) -> tuple:
    b, k = _parameter(args)
    dt = classify_stratum(b)
    disc = discriminant(b)
    out = {
        "kappa": [_pair(v) for v in k] if k is not None else None,
        "b": [_pair(v) for v in b],
        "theta": [_pair(v) for v in b_to_theta(b)],
        "dynkin": {"tag": dt.tag, "sub_index": dt.sub_index, "witness": list(dt.witness)},
        "discriminant_factors": [[label, _pair(v)] for label, v in disc.factors],
        "riccati_periods": riccati_periods(b),
    }
    return out, 0


def cmd_degree(args) -> tuple:
    s, loop = _word(args)
    out = {"loop": loop, "sigma": str(s)}
    if len(s) == 0:
        out.update(elementary=True, alpha=2, lam=1.0, entropy=0.0)
        return out, 0
    s = conjugate_to_AS(s)
    out["sigma_as"] = str(s)
    if is_elementary(s):
        out.update(elementary=True, lam=1.0, entropy=0.0)
        return out, 0
    dd = dynamical_degree(s)
    out.update(elementary=False, alpha=dd.alpha, sign=dd.sign, lam=dd.lam, entropy=dd.entropy)
    return out, 0


def cmd_lefschetz(args) -> tuple:
    s, loop = _word(args)
    s = conjugate_to_AS(s)
    b, _ = _parameter(args) if _has_parameter(args) else (None, None)
    tag = classify_stratum(b).tag if b is not None else (args.stratum or "Empty")
    values = {str(n): lefschetz_number(s, n, tag) for n in range(1, args.n + 1)}
    out = {"loop": loop, "sigma": str(s), "stratum": tag, "lefschetz": values,
           "pullback": word_pullback(s, tag).to_json()}
    return out, 0


def cmd_riccati(args) -> tuple:
    b, _ = _parameter(args)
    dt = classify_stratum(b)
    return {"b": [_pair(v) for v in b], "stratum": dt.tag, "riccati_periods": riccati_periods(b)}, 0


def _solver_config(args) -> SolverConfig:
    cfg = load_config(args.config) if args.config else SolverConfig()
    threads = args.threads
    if threads is None and os.environ.get("PAINLEVE_DYN_THREADS"):
        threads = int(os.environ["PAINLEVE_DYN_THREADS"])
    changes = {}
    if threads is not None:
        changes["threads"] = threads
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.budget is not None:
        changes["budget"] = args.budget
    return replace(cfg, **changes)


def cmd_count(args) -> tuple:
    if args.n < 1:
        raise ParseError("--n must be a positive integer")
    b, _ = _parameter(args)
    s, loop = _word(args)
    s = conjugate_to_AS(s)
    cfg = _solver_config(args)
    dt = classify_stratum(b)
    periods = riccati_periods(b)
    try:
        report, res = count_report(b_to_theta(b), dt, periods, s, args.n, cfg)
        exhausted = False
    except BudgetExhausted as exc:
        report, res, exhausted = None, exc.points, True
    out = {
        "loop": loop,
        "sigma": str(s),
        "n": args.n,
        "stratum": dt.tag,
        "riccati_periods": periods,
        "config": asdict(cfg),
        "budget_exhausted": exhausted,
        "report": report.to_json() if report else None,
        "starts": res.starts,
        "warnings": res.warnings,
        "points": json.loads(dumps_points(res.points)),
    }
    args._csv = (report.to_csv() if report else "") + points_csv(res.points)
    code = 0
    if exhausted or (report and report.matches_formula is False):
        code = 1
    return out, code


COMMANDS = {
    "classify": cmd_classify,
    "degree": cmd_degree,
    "lefschetz": cmd_lefschetz,
    "riccati": cmd_riccati,
    "count": cmd_count,
}


def _has_parameter(args) -> bool:
    return any(getattr(args, a, None) is not None for a in ("kappa", "b", "random_kappa"))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="painleve-dyn", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def params(sp):
        sp.add_argument("--kappa", help="k0..k4, comma-separated (complex as re+imj) or JSON")
        sp.add_argument("--b", help="b0..b4, comma-separated or JSON; fractions like 1/30 allowed")
        sp.add_argument("--random-kappa", type=int, metavar="SEED", help="generic kappa from a seed")

    def words(sp):
        sp.add_argument("--loop", help='loop word, e.g. "1 -2 -1 2"')
        sp.add_argument("--sigma", help='sigma word, e.g. "s1 s2 s3 s2"')

    def output(sp):
        sp.add_argument("--out", help="write the result here instead of stdout")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--timing", action="store_true",
                        help="record wall-clock time (output is then not byte-reproducible)")

    sp = sub.add_parser("classify", help="stratum, discriminant and Riccati data")
    params(sp)
    output(sp)
    sp = sub.add_parser("degree", help="dynamical degree and entropy of a word")
    words(sp)
    output(sp)
    sp = sub.add_parser("lefschetz", help="Lefschetz numbers of a word's iterates")
    words(sp)
    params(sp)
    sp.add_argument("--stratum", help="Dynkin tag, when no parameter is given")
    sp.add_argument("--n", type=int, default=1, help="largest iterate")
    output(sp)
    sp = sub.add_parser("riccati", help="periods of the Riccati curves")
    params(sp)
    output(sp)
    sp = sub.add_parser("count", help="count isolated periodic points")
    params(sp)
    words(sp)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--config", help="TOML file with solver settings")
    sp.add_argument("--seed", type=int, help="solver RNG seed")
    sp.add_argument("--threads", type=int, help="defaults to $PAINLEVE_DYN_THREADS or 1")
    sp.add_argument("--budget", type=int, help="start budget")
    output(sp)
    return p


def _json_default(o):
    if isinstance(o, complex):
        return _pair(o)
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o)}")


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=_json_default, allow_nan=True)


def render(args, result, elapsed) -> str:
    inputs = {k: v for k, v in vars(args).items()
              if not k.startswith("_") and k not in ("out", "format", "timing", "command")}
    digest = hashlib.sha256(_canonical(result).encode()).hexdigest()
    manifest = {"command": args.command, "inputs": inputs, "version": __version__,
                "result_sha256": digest}
    if "config" in result:
        manifest["config"] = result["config"]
    if args.timing:
        manifest["wall_clock_s"] = round(elapsed, 3)
    if args.format == "csv":
        body = getattr(args, "_csv", None) or _flat_csv(result)
        return "".join(f"# {k}: {_canonical(v)}\n" for k, v in manifest.items()) + body
    return json.dumps({"manifest": manifest, "result": result}, sort_keys=True, indent=2,
                      default=_json_default) + "\n"


def _flat_csv(result) -> str:
    keys = sorted(result)
    return ",".join(keys) + "\n" + ",".join(json.dumps(result[k], default=_json_default).replace(",", ";") for k in keys) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        result, code = COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"painleve-dyn: error: {exc}", file=sys.stderr)
        return 2
    except AmbiguousNearWall as exc:
        print(f"painleve-dyn: AmbiguousNearWall: {exc}", file=sys.stderr)
        return 3
    except PainleveDynError as exc:
        print(f"painleve-dyn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = render(args, result, time.perf_counter() - t0)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
