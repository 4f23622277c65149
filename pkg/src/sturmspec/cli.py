"""Experiment runner: reproducible reports over the library operations.

Subcommands: word, spectrum, lyapunov, gordon, hull-check, appendix.
Exit codes: 0 success, 2 invalid input, 3 numeric/resolution failure,
4 boundary ambiguity.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .circlemap import (
    AT_ONE_MINUS_BETA,
    AT_ZERO,
    CircleParams,
    boundary_limit_window,
    circle_potential_window,
    discontinuity_indices,
    hull_factor_comparison,
)
from .errors import InvalidInputError, SturmSpecError
from .potentials import window_from_word
from .spectrum import (
    band_samples,
    intersect_intervals,
    measure_and_intersect,
    sturmian_band_spectrum,
    trace_bound_scan,
)
from .stability import gordon_membership, nondecay_verify
from .sturmian import (
    c_alpha_prefix,
    convergents,
    parse_cf_spec,
    periodic_coefficients,
    standard_words,
)
from .transfer import forward_lyapunov_batch
from .words import SUBSTITUTION_TABLE, fixed_point_prefix, parse_substitution

# Canonical substitution tables are written over letters; some models have a
# conventional binary display (fibonacci's fixed point is the golden coding).
MODEL_OUTPUT_LETTERS = {"fibonacci": "10"}

CSV_HEADERS = {
    "word": ["word"],
    "spectrum": ["level", "q", "band_count", "measure", "measure_intersect_prev"],
    "lyapunov": ["energy", "gamma_plus", "gamma_minus"],
}


def _parse_fraction(text, name):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"invalid {name}: {text!r}")
    return value


def _resolve_cf(args):
    if args.alpha_cf:
        coeffs = parse_cf_spec(args.alpha_cf)
    elif args.alpha_period:
        pre_text, _, per_text = args.alpha_period.partition(":")
        pre = parse_cf_spec(pre_text) if pre_text.strip() else []
        per = parse_cf_spec(per_text) if per_text.strip() else []
        coeffs = periodic_coefficients(pre, per, args.cf_depth)
    else:
        raise InvalidInputError("need --alpha-cf or --alpha-period")
    return convergents(coeffs)


def _circle_params(args):
    if args.beta is None:
        raise InvalidInputError("beta is required for circle-map tasks")
    cf = _resolve_cf(args)
    beta = _parse_fraction(args.beta, "beta")
    guard = _parse_fraction(args.precision, "precision") if args.precision else None
    return CircleParams(alpha=cf.value(), beta=beta, coupling=args.coupling, guard=guard)


def _parse_levels(text):
    levels = []
    for token in text.split(","):
        token = token.strip()
        if ".." in token:
            lo, _, hi = token.partition("..")
            levels.extend(range(int(lo), int(hi) + 1))
        elif token:
            levels.append(int(token))
    if not levels:
        raise InvalidInputError(f"no levels in {text!r}")
    return levels


def _parse_energies(text):
    """``a:b:n`` linspace or a comma list of energies."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidInputError(f"energy range must be a:b:n, got {text!r}")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise InvalidInputError("energy count must be >= 1")
        if n == 1:
            return [lo]
        step = (hi - lo) / (n - 1)
        return [lo + i * step for i in range(n)]
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise InvalidInputError(f"bad energy list {text!r}")


def _chunks(seq, n):
    size = max(1, (len(seq) + n - 1) // n)
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def _task_word(args):
    if args.tower is not None:
        cf = _resolve_cf(args)
        tower = standard_words(cf, args.tower)
        return {
            "tower": [tower.word(n).to_text() for n in range(-1, args.tower + 1)],
            "q": [int(q) for q in cf.q[: args.tower + 1]],
        }
    if args.length is None:
        raise InvalidInputError("word task needs --length (or --tower)")
    if args.model:
        name = args.model
        if name not in SUBSTITUTION_TABLE:
            raise InvalidInputError(
                f"unknown model {name!r}; known: {', '.join(sorted(SUBSTITUTION_TABLE))}"
            )
        subst, letters = parse_substitution(SUBSTITUTION_TABLE[name])
        out_letters = MODEL_OUTPUT_LETTERS.get(name, letters)
        word = fixed_point_prefix(subst, 0, args.length)[: args.length]
        text = word.to_text(out_letters)
    elif args.subst:
        subst, letters = parse_substitution(args.subst)
        seed = letters.index(args.seed) if args.seed else 0
        word = fixed_point_prefix(subst, seed, args.length)[: args.length]
        text = word.to_text(letters)
    else:
        cf = _resolve_cf(args)
        text = c_alpha_prefix(cf, args.length).to_text()
    return {"word": text, "length": args.length}


def _task_spectrum(args):
    cf = _resolve_cf(args)
    levels = _parse_levels(args.levels)
    rows = []
    prev = None
    for level in levels:
        spec = sturmian_band_spectrum(cf, args.coupling, level)
        inter = measure_and_intersect(prev, spec).measure_intersection if prev else None
        rows.append(
            {
                "level": level,
                "q": spec.period,
                "band_count": spec.band_count,
                "measure": spec.measure,
                "measure_intersect_prev": inter,
                "bands": [[lo, hi] for lo, hi in spec.bands],
            }
        )
        prev = spec
    return {"rows": rows}


def _task_lyapunov(args):
    energies = _parse_energies(args.energies)
    steps = args.steps
    gamma_minus = None
    if args.potential == "sturmian":
        cf = _resolve_cf(args)
        values = [args.coupling * s for s in c_alpha_prefix(cf, steps).symbols]
    elif args.potential == "free":
        values = [0.0] * steps
    else:  # circle
        params = _circle_params(args)
        window = circle_potential_window(params, Fraction(0), -steps, steps)
        values = window.slice_values(1, steps)
        backward_values = window.slice_values(-steps, -1)

    chunks = _chunks(energies, args.jobs)
    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        plus_parts = list(pool.map(lambda ch: forward_lyapunov_batch(values, ch), chunks))
        if args.potential == "circle":
            # the backward product accumulates over V(-steps)..V(-1) in order
            minus_parts = list(
                pool.map(lambda ch: forward_lyapunov_batch(backward_values, ch), chunks)
            )
            gamma_minus = [g for part in minus_parts for g in part.tolist()]
    gamma_plus = [g for part in plus_parts for g in part.tolist()]
    rows = []
    for i, e in enumerate(energies):
        rows.append(
            {
                "energy": e,
                "gamma_plus": gamma_plus[i],
                "gamma_minus": gamma_minus[i] if gamma_minus else None,
            }
        )
    return {"rows": rows, "steps": steps, "potential": args.potential}


def _task_gordon(args):
    cf = _resolve_cf(args)
    level = args.level
    tower = standard_words(cf, level)
    s_n = tower.word(level)
    q_n = cf.q[level]
    window = window_from_word(s_n + s_n, args.coupling, provenance=f"square s_{level}^2")

    if args.energies.startswith("from-spectrum:"):
        proxy = int(args.energies.split(":", 1)[1])
        scan = trace_bound_scan(cf, args.coupling, level_max=proxy, proxy_level=proxy)
        spec_a = sturmian_band_spectrum(cf, args.coupling, proxy)
        spec_b = sturmian_band_spectrum(cf, args.coupling, proxy + 1)
        energies = band_samples(intersect_intervals(spec_a.bands, spec_b.bands), 1)
        constant = {
            "value": scan.derived_constant(),
            "proxy_level": proxy,
            "sampled_sup": scan.overall_sup,
            "headroom": 0.1,
        }
        c_bound = constant["value"]
    else:
        energies = _parse_energies(args.energies)
        scan = trace_bound_scan(
            cf, args.coupling, level_max=max(level, 8), proxy_level=max(level, 8)
        )
        constant = {
            "value": scan.derived_constant(),
            "proxy_level": max(level, 8),
            "sampled_sup": scan.overall_sup,
            "headroom": 0.1,
        }
        c_bound = constant["value"]

    rng = random.Random(args.rng_seed)
    seeds = []
    for _ in range(args.seeds):
        while True:
            x, y = rng.uniform(-1, 1), rng.uniform(-1, 1)
            norm = (x * x + y * y) ** 0.5
            if norm > 1e-3:
                seeds.append((x / norm, y / norm))
                break

    certificates = []
    for e in energies:
        cert = gordon_membership(window, q_n, c_bound, [e])
        entry = {
            "energy": e,
            "square_ok": cert.square_ok,
            "abs_trace": cert.trace_samples[0][1],
            "verdict": cert.verdict,
        }
        if cert.verdict:
            rep = nondecay_verify(window, q_n, e, seeds, c_bound=c_bound)
            entry.update(
                {
                    "min_ratio": rep.min_ratio,
                    "lower_bound": rep.lower_bound,
                    "nondecay_ok": rep.ok,
                }
            )
        certificates.append(entry)
    return {
        "level": level,
        "q_n": q_n,
        "derived_constant": constant,
        "seeds": args.seeds,
        "certificates": certificates,
    }


def _grid_size(args):
    return args.grid if args.grid is not None else 4000 * args.factor_length


def _task_hull_check(args):
    params = _circle_params(args)
    report = hull_factor_comparison(params, args.factor_length, _grid_size(args), args.prefix)
    return report.to_dict()


def _task_appendix(args):
    params = _circle_params(args)
    lam = params.coupling
    w0 = boundary_limit_window(params, AT_ZERO, 0, 0)
    wb = boundary_limit_window(params, AT_ONE_MINUS_BETA, 0, 0)
    endpoint = {
        "omega0_at_0": w0.value(0),
        "omega_1mb_at_0": wb.value(0),
        "ok": w0.value(0) == lam and wb.value(0) == 0.0,
    }

    rng = random.Random(args.rng_seed)
    counts = []
    for _ in range(args.theta_samples):
        theta = Fraction(rng.randrange(0, 10**6), 10**6)
        counts.append(len(discontinuity_indices(params, theta, args.range_n)))
    disc = {"counts": counts, "max": max(counts), "ok": max(counts) <= 2}

    n_top = args.range_n
    agreement = {}
    for which, theta in ((AT_ZERO, Fraction(0)), (AT_ONE_MINUS_BETA, 1 - params.beta)):
        skip = set(discontinuity_indices(params, theta, n_top))
        plain = circle_potential_window(params, theta, 1, n_top)
        limit = boundary_limit_window(params, which, 1, n_top)
        mismatches = [
            n
            for n in range(1, n_top + 1)
            if n not in skip and plain.value(n) != limit.value(n)
        ]
        agreement[which] = {
            "mismatches_off_discontinuities": len(mismatches),
            "discontinuities_in_range": sorted(n for n in skip if 1 <= n <= n_top),
            "ok": not mismatches,
        }

    hull = hull_factor_comparison(params, args.factor_length, _grid_size(args), args.prefix)
    ok = (
        endpoint["ok"]
        and disc["ok"]
        and all(a["ok"] for a in agreement.values())
        and hull.contained
    )
    return {
        "endpoint_values": endpoint,
        "discontinuity_counts": disc,
        "boundary_agreement": agreement,
        "hull_comparison": hull.to_dict(),
        "ok": ok,
    }


TASKS = {
    "word": _task_word,
    "spectrum": _task_spectrum,
    "lyapunov": _task_lyapunov,
    "gordon": _task_gordon,
    "hull-check": _task_hull_check,
    "appendix": _task_appendix,
}


def _config_echo(args):
    skip = {"task", "func", "out"}
    return {
        k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None
    }


def run_experiment(args):
    """Dispatch a parsed config to its task; the report carries the task's
    own fields plus the config echo, library version, and wall time."""
    start = time.perf_counter()
    results = TASKS[args.task](args)
    report = {
        "schema_version": 1,
        "task": args.task,
        "config": _config_echo(args),
    }
    report.update(results)
    report["version"] = __version__
    report["wall_time_s"] = round(time.perf_counter() - start, 6)
    return report


def emit_report(report, fmt):
    """Serialize a report: full document as JSON, or the tabular projection
    as CSV with a fixed, documented header."""
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    task = report["task"]
    if task not in CSV_HEADERS:
        raise InvalidInputError(f"task {task!r} reports JSON only")
    header = CSV_HEADERS[task]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    if task == "word":
        if "word" not in report:
            raise InvalidInputError("tower export reports JSON only")
        writer.writerow([report["word"]])
    else:
        for row in report["rows"]:
            writer.writerow(["" if row[k] is None else row[k] for k in header])
    return buf.getvalue()


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sturmspec",
        description="Sturmian/substitution operator numerics: words, spectra, "
        "Lyapunov exponents, stability certificates.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha-cf", help="CF coefficients, e.g. 1,2,1x40 (x = repeat)")
    common.add_argument(
        "--alpha-period",
        help="eventually periodic CF as pre:period, e.g. ':1' for the golden mean",
    )
    common.add_argument("--cf-depth", type=int, default=40, help="periodic CF unroll depth")
    common.add_argument("--beta", default=None, help="indicator length as p/q")
    common.add_argument(
        "--lambda", dest="coupling", type=float, default=1.0, help="coupling strength"
    )
    common.add_argument("--precision", default=None, help="boundary guard as p/q")
    common.add_argument("--jobs", type=int, default=1, help="worker threads for energy scans")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    sub = parser.add_subparsers(dest="task", required=True)

    p = sub.add_parser("word", parents=[common], help="generate a word prefix")
    p.add_argument("--model", help=f"named substitution: {', '.join(sorted(SUBSTITUTION_TABLE))}")
    p.add_argument("--subst", help='custom substitution, e.g. "a:ab,b:a"')
    p.add_argument("--seed", help="seed letter for --subst (default: first key)")
    p.add_argument("--length", type=int)
    p.add_argument("--tower", type=int, help="emit the standard-word tower to this level (JSON)")

    p = sub.add_parser("spectrum", parents=[common], help="periodic approximant band spectra")
    p.add_argument("--levels", required=True, help='e.g. "1..10" or "2,4,8"')

    p = sub.add_parser("lyapunov", parents=[common], help="Lyapunov exponent estimates")
    p.add_argument("--potential", choices=["sturmian", "circle", "free"], default="sturmian")
    p.add_argument("--energies", required=True, help='"a:b:n" linspace or comma list')
    p.add_argument("--steps", type=int, default=100000)

    p = sub.add_parser("gordon", parents=[common], help="two-block stability certificates")
    p.add_argument("--level", type=int, required=True, help="square word level n")
    p.add_argument(
        "--energies",
        default="from-spectrum:8",
        help='"from-spectrum:K" proxy midpoints, or explicit energies',
    )
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--rng-seed", type=int, default=0)

    p = sub.add_parser("hull-check", parents=[common], help="coding-vs-hull factor comparison")
    p.add_argument("--L", dest="factor_length", type=int, required=True)
    p.add_argument("--grid", type=int, default=None, help="theta grid size (default 4000 L)")
    p.add_argument("--prefix", type=int, default=100000)

    p = sub.add_parser("appendix", parents=[common], help="torus-vs-hull correspondence checks")
    p.add_argument("--range-n", type=int, default=1000)
    p.add_argument("--theta-samples", type=int, default=20)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--L", dest="factor_length", type=int, default=10)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--prefix", type=int, default=10000)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        report = run_experiment(args)
        text = emit_report(report, args.format)
    except SturmSpecError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.exit_code
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as err:
            print(f"error: cannot write {args.out}: {err}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
