"""Command-line surface: verification sweeps, report serialization, and
the worker pool for multi-prime runs.

Every command emits one report document.  JSON is canonical: a
`manifest` block (command, parameters, code version, seed, verdict,
wall-clock timestamps) plus a `report` body.  Bodies are deterministic —
two runs with the same command, parameters, seed, and code version are
byte-identical, whatever --jobs is; timestamps live only in the manifest
so a determinism check strips exactly two keys.  CSV is a lossy
projection for the tabular commands.

Exit codes: 0 = pass or report-only, 1 = a verification failure
(a divisibility violation, an unclassifiable subgroup, a failed
certificate), 2 = usage or input errors.  Rationals are serialized as
"numerator/denominator" strings — no floats anywhere in a report.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from . import arith, cmbounds, curvedeg, families, gl2, orbits
from ._version import VERSION

SCHEMA_VERSION = 1
N_MAP_PREVIEW = 200


class UsageError(Exception):
    """Bad flags or malformed inputs: reported on stderr, exit code 2."""


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def _utc_now() -> str:
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def _frac(fr: Fraction) -> str:
    return f"{fr.numerator}/{fr.denominator}"


def _big_int(n: int) -> dict:
    """Decimal form of a possibly enormous integer, capped at 10^4 digits
    (beyond that only the size is reported)."""
    approx = n.bit_length() * 30103 // 100000 + 1
    if approx <= 10_000:
        if (hasattr(sys, "set_int_max_str_digits")
                and sys.get_int_max_str_digits() < 12_000):
            sys.set_int_max_str_digits(12_000)
        text = str(n)
        return {"decimal": text, "decimal_digits": len(text)}
    return {"decimal": None, "decimal_digits_estimate": approx,
            "bit_length": n.bit_length()}


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated integers, "
                         f"got {text!r}") from None
    if not values:
        raise UsageError(f"{flag} is empty")
    return values


def _parse_primes(text: str) -> list[int]:
    primes = sorted(set(_parse_int_list(text, "--primes")))
    for p in primes:
        if not arith.is_prime(p):
            raise UsageError(f"--primes: {p} is not prime")
    return primes


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _clause_from_dict(data, where: str):
    if not isinstance(data, dict):
        raise UsageError(f"{where}: clause must be an object")
    kind = data.get("kind")
    try:
        if kind == "divisor":
            return families.DivClause(int(data["m"]))
        if kind == "prime-shift":
            return families.PrimeShiftClause(int(data["c"]), int(data["C"]))
        if kind == "prime-power-div":
            return families.PrimePowerDivClause(int(data["N"]),
                                                int(data["L"]))
    except KeyError as exc:
        raise UsageError(f"{where}: missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{where}: {exc}") from None
    raise UsageError(f"{where}: unknown clause kind {kind!r}")


def _spec_from_file(path: str) -> families.IntegerSetSpec:
    data = _load_json(path)
    if not isinstance(data, dict) or "clauses" not in data:
        raise UsageError(f"{path}: expected an object with a 'clauses' list")
    clauses = data["clauses"]
    if not isinstance(clauses, list) or not clauses:
        raise UsageError(f"{path}: 'clauses' must be a nonempty list")
    return families.IntegerSetSpec(tuple(
        _clause_from_dict(c, f"{path}: clauses[{i}]")
        for i, c in enumerate(clauses)))


def _parallel_map(fn, tasks, jobs):
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs < 1:
        raise UsageError("--jobs must be a positive integer")
    if jobs == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
        return list(pool.map(fn, tasks))  # input order, schedule-free


# ---------------------------------------------------------------------------
# workers (module level so the process pool can pickle them)
# ---------------------------------------------------------------------------

def _case_task(task):
    p, mode, count, seed, ceiling, cache_dir = task
    groups = gl2.enumerate_subgroups(p, mode, count=count, seed=seed,
                                     ceiling=ceiling, cache_dir=cache_dir)
    return p, [orbits.verify_case_divisibility(G).as_dict() for G in groups]


def _lemma_task(p):
    split = [asdict(r) for r in orbits.verify_split_pointwise_stabilizers(p)]
    nonsplit = asdict(orbits.verify_nonsplit_pointwise_stabilizers(p))
    return p, split, nonsplit


# ---------------------------------------------------------------------------
# command handlers: return (parameters, body, verdict)
# ---------------------------------------------------------------------------

def _cmd_verify_cases(args):
    primes = _parse_primes(args.primes)
    if args.mode == "sampled":
        if args.count is None:
            raise UsageError("sampled mode needs --count")
        seed = args.seed = args.seed if args.seed is not None else 0
    else:
        if args.count is not None:
            raise UsageError("--count only applies to sampled mode")
        seed = None
    params = {"primes": primes, "mode": args.mode, "count": args.count,
              "ceiling": args.ceiling}
    tasks = [(p, args.mode, args.count, seed, args.ceiling, args.cache_dir)
             for p in primes]
    results = _parallel_map(_case_task, tasks, args.jobs)
    sweeps = []
    total = violations = 0
    for p, rows in sorted(results):
        bad = sum(1 for r in rows if r["verdict"] == orbits.VIOLATION)
        sweeps.append({
            "p": p,
            "checked": len(rows),
            "violations": bad,
            "not_applicable": sum(1 for r in rows
                                  if r["verdict"] == orbits.NOT_APPLICABLE),
            "subgroups": rows,
        })
        total += len(rows)
        violations += bad
    body = {"mode": args.mode, "sweeps": sweeps,
            "total_checked": total, "total_violations": violations}
    return params, body, ("fail" if violations else "pass")


def _cmd_verify_lemmas(args):
    if args.p_max < args.p_min:
        raise UsageError("--p-max must be at least --p-min")
    primes = [p for p in range(max(args.p_min, 3), args.p_max + 1)
              if p % 2 and arith.is_prime(p)]
    if not primes:
        raise UsageError(
            f"no odd primes in [{args.p_min}, {args.p_max}]")
    params = {"p_min": args.p_min, "p_max": args.p_max}
    results = _parallel_map(_lemma_task, primes, args.jobs)
    rows = []
    ok = True
    for p, split, nonsplit in sorted(results):
        verdicts = [r["verdict"] for r in split] + [nonsplit["verdict"]]
        ok &= all(v == orbits.PASS for v in verdicts)
        rows.append({"p": p, "split_lines": split, "nonsplit": nonsplit})
    body = {"primes": primes, "rows": rows}
    return params, body, ("pass" if ok else "fail")


def _analysis_body(G):
    a = gl2.analyze(G)
    return {
        "order": G.order,
        "dickson_class": a.dickson_class.value,
        "projective_type": a.projective_type.value,
        "projective_order": a.projective_order,
        "det_index": a.det_index,
        "det_image_order": a.det_image_order,
        "contains_sl2": G.contains_sl2,
    }


def _cmd_classify(args):
    p = args.p
    if not arith.is_prime(p):
        raise UsageError(f"--p: {p} is not prime")
    if (args.subgroup is None) == (args.generators is None):
        raise UsageError("give exactly one of --subgroup or --generators")
    if args.subgroup is not None:
        named = gl2.standard_subgroups(p)
        if args.subgroup not in named:
            raise UsageError(
                f"--subgroup: unknown name {args.subgroup!r}; "
                f"choose from {', '.join(sorted(named))}")
        G = named[args.subgroup]
        source = {"subgroup": args.subgroup}
    else:
        keys = _parse_int_list(args.generators, "--generators")
        G = gl2.close_generators(p, keys)
        source = {"generators": keys}
    params = {"p": p, **source}
    body = {"p": p, "source": source, **_analysis_body(G)}
    return params, body, "report-only"


def _cmd_enumerate(args):
    p = args.p
    if not arith.is_prime(p):
        raise UsageError(f"--p: {p} is not prime")
    if args.mode == "sampled":
        args.seed = args.seed if args.seed is not None else 0
    groups = gl2.enumerate_subgroups(
        p, args.mode, count=args.count,
        seed=(args.seed if args.mode == "sampled" else None),
        ceiling=args.ceiling, cache_dir=args.cache_dir)
    params = {"p": p, "mode": args.mode, "count": args.count,
              "ceiling": args.ceiling}
    rows = []
    histogram = {}
    for G in groups:
        label = gl2.classify(G).value
        histogram[label] = histogram.get(label, 0) + 1
        rows.append({
            "order": G.order,
            "dickson_class": label,
            "det_image_order": len(G.det_image),
            "materialized": G.is_materialized,
            "generators": [int(g) for g in G.generators],
        })
    body = {"p": p, "mode": args.mode, "class_count": len(groups),
            "class_histogram": sorted(histogram.items()),
            "classes": rows}
    return params, body, "report-only"


def _cmd_genus(args):
    if args.n_max < 1:
        raise UsageError("--n-max must be a positive integer")
    params = {"n_max": args.n_max}
    rows = [{"N": N, "genus": curvedeg.genus_x1(N),
             "min_degree": curvedeg.min_guaranteed_degree(N)}
            for N in range(1, args.n_max + 1)]
    return params, {"n_max": args.n_max, "rows": rows}, "report-only"


def _cmd_degrees(args):
    if args.g < 0:
        raise UsageError("--g must be nonnegative")
    gens = _parse_int_list(args.generators, "--generators")
    spec = curvedeg.SemigroupSpec(tuple(gens))
    params = {"g": args.g, "generators": gens}
    body = {
        "g": args.g,
        "generators": list(spec.generators),
        "index": spec.index,
        "stable_bound": curvedeg.stable_bound(spec),
        "closed_point_threshold":
            curvedeg.closed_point_degree_threshold(args.g, spec),
        "rr_degree_bound_weierstrass":
            curvedeg.rr_degree_bound(args.g, weierstrass=True),
        "rr_degree_bound_general":
            curvedeg.rr_degree_bound(args.g, weierstrass=False),
    }
    return params, body, "report-only"


def _cmd_semigroup(args):
    gens = _parse_int_list(args.generators, "--generators")
    if args.target_max < 0:
        raise UsageError("--target-max must be nonnegative")
    spec = curvedeg.SemigroupSpec(tuple(gens))
    params = {"generators": gens, "target_max": args.target_max}
    rows = [{"target": t, "representable": curvedeg.representable(t, spec)}
            for t in range(args.target_max + 1)]
    body = {"generators": list(spec.generators), "index": spec.index,
            "stable_bound": curvedeg.stable_bound(spec),
            "target_max": args.target_max, "rows": rows}
    return params, body, "report-only"


def _cmd_density(args):
    if args.x < 1:
        raise UsageError("--x must be a positive integer")
    spec = _spec_from_file(args.spec_file)
    params = {"spec_file": args.spec_file, "x": args.x}
    report = families.density_upto(spec, args.x)
    body = {"x": args.x, "count": report.count,
            "density": _frac(report.density),
            "clauses": spec.describe()}
    return params, body, "report-only"


def _cmd_ew(args):
    if args.x < 1:
        raise UsageError("--x must be a positive integer")
    params = {"c": args.c, "cutoff": args.cutoff, "x": args.x}
    spec, report = families.erdos_wagstaff_set(args.c, args.cutoff, args.x)
    body = {"c": args.c, "cutoff": args.cutoff, "x": args.x,
            "count": report.count, "density": _frac(report.density),
            "clauses": spec.describe()}
    return params, body, "report-only"


def _profile_for_args(args):
    if (args.profile is None) == (args.cm_g is None):
        raise UsageError("give exactly one of --profile or --cm-g")
    if args.profile is not None:
        data = _load_json(args.profile)
        try:
            profile = families.profile_from_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise UsageError(f"{args.profile}: {exc}") from None
        return profile, {"file": args.profile, **data}
    g = args.cm_g
    if g < 1:
        raise UsageError("--cm-g must be a positive integer")
    profile = cmbounds.cm_profile(g)
    echo = {"family": "cm", "g": g, "p2_c": _big_int(profile.p2_c),
            "dim_g": profile.dim_g}
    return profile, echo


def _cmd_bepsilon(args):
    try:
        eps = Fraction(args.epsilon)
    except (ValueError, ZeroDivisionError):
        raise UsageError(
            f"--epsilon expects a rational like 1/2 or 0.05, "
            f"got {args.epsilon!r}") from None
    if args.x < 1:
        raise UsageError("--x must be a positive integer")
    profile, echo = _profile_for_args(args)
    params = {"profile": args.profile, "cm_g": args.cm_g,
              "epsilon": args.epsilon, "x": args.x}
    result = families.b_epsilon_procedure(profile, eps, args.x)
    preview = list(itertools.islice(result.n_map.items(), N_MAP_PREVIEW))
    if result.B_eps is not None:
        b_payload = _big_int(result.B_eps)
        b_payload["note"] = None
    else:
        b_payload = {"decimal": None, "note": result.B_eps_note}
    body = {
        "profile": echo,
        "epsilon": _frac(eps),
        "x": args.x,
        "C": result.C,
        "L": result.L,
        "N": result.N,
        "n_map_prime_count": len(result.n_map),
        "n_map": [[l, n] for l, n in preview],
        "n_map_truncated": len(result.n_map) > N_MAP_PREVIEW,
        "B_eps": b_payload,
        "excluded_clauses": result.excluded.describe(),
        "excluded_count": result.report.count,
        "excluded_density": _frac(result.report.density),
    }
    return params, body, "pass"


def _cmd_cm(args):
    if args.g < 1:
        raise UsageError("--g must be a positive integer")
    bounds = cmbounds.c_of_g(args.g)
    params = {"g": args.g, "d": args.d}
    table_primes = sorted(set(arith.primes_upto(30))
                          | {p for p, _ in arith.factorize(bounds.c)})
    body = {
        "g": args.g,
        "H": _big_int(bounds.H),
        "M": _big_int(bounds.M),
        "c": _big_int(bounds.c),
        "p1_exponents_N1": [[p, cmbounds.cm_p1_exponent(args.g, p, 1)]
                            for p in table_primes],
    }
    if args.d is not None:
        if args.d < 1:
            raise UsageError("--d must be a positive integer")
        body["d"] = args.d
        body["allowed_exponents"] = cmbounds.allowed_exponents(args.g, args.d)
    return params, body, "report-only"


# ---------------------------------------------------------------------------
# CSV projections (lossy, tabular commands only)
# ---------------------------------------------------------------------------

def _csv_verify_cases(body):
    rows = [["p", "subgroup_id", "class", "det_index", "verdict",
             "orbit_sizes"]]
    for sweep in body["sweeps"]:
        for r in sweep["subgroups"]:
            rows.append([r["p"], r["subgroup_id"], r["class"],
                         r["det_index"], r["verdict"],
                         "|".join(map(str, r["orbit_sizes"]))])
    return rows


def _csv_verify_lemmas(body):
    rows = [["p", "check", "detail", "verdict"]]
    for entry in body["rows"]:
        for r in entry["split_lines"]:
            rows.append([entry["p"], "split-line", r["line_index"],
                         r["verdict"]])
        rows.append([entry["p"], "nonsplit-bound",
                     entry["nonsplit"]["max_order"],
                     entry["nonsplit"]["verdict"]])
    return rows


def _csv_classify(body):
    keys = ["p", "order", "dickson_class", "projective_type",
            "projective_order", "det_index", "det_image_order",
            "contains_sl2"]
    return [keys, [body[k] for k in keys]]


def _csv_enumerate(body):
    rows = [["order", "dickson_class", "det_image_order", "materialized",
             "generators"]]
    for r in body["classes"]:
        rows.append([r["order"], r["dickson_class"], r["det_image_order"],
                     r["materialized"], "|".join(map(str, r["generators"]))])
    return rows


def _csv_genus(body):
    return ([["N", "genus", "min_degree"]]
            + [[r["N"], r["genus"], r["min_degree"]] for r in body["rows"]])


def _csv_degrees(body):
    keys = ["g", "index", "stable_bound", "closed_point_threshold",
            "rr_degree_bound_weierstrass", "rr_degree_bound_general"]
    return [keys, [body[k] for k in keys]]


def _csv_semigroup(body):
    return ([["target", "representable"]]
            + [[r["target"], r["representable"]] for r in body["rows"]])


def _csv_density(body):
    return [["x", "count", "density"],
            [body["x"], body["count"], body["density"]]]


def _csv_ew(body):
    return [["c", "cutoff", "x", "count", "density"],
            [body[k] for k in ("c", "cutoff", "x", "count", "density")]]


_CSV_PROJECTIONS = {
    "verify-cases": _csv_verify_cases,
    "verify-lemmas": _csv_verify_lemmas,
    "classify": _csv_classify,
    "enumerate": _csv_enumerate,
    "genus": _csv_genus,
    "degrees": _csv_degrees,
    "semigroup": _csv_semigroup,
    "density": _csv_density,
    "ew": _csv_ew,
}


# ---------------------------------------------------------------------------
# wiring
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torsiondeg",
        description="verification sweeps and degree-bound reports")
    parser.add_argument("--version", action="version", version=VERSION)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None,
                        help="write the report to this path, not stdout")
    common.add_argument("--jobs", type=int, default=None,
                        help="worker processes (default: all cores)")
    common.add_argument("--seed", type=int, default=None,
                        help="seed for sampled modes")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-cases", parents=[common],
                       help="orbit-divisibility sweep over subgroup classes")
    p.add_argument("--primes", required=True,
                   help="comma-separated primes to sweep")
    p.add_argument("--mode", choices=("exhaustive", "sampled"),
                   default="exhaustive")
    p.add_argument("--count", type=int, default=None,
                   help="random subgroups per prime (sampled mode)")
    p.add_argument("--ceiling", type=int, default=11,
                   help="largest prime accepted in exhaustive mode")
    p.add_argument("--cache-dir", default=None,
                   help="directory for enumeration caches")
    p.set_defaults(handler=_cmd_verify_cases)

    p = sub.add_parser("verify-lemmas", parents=[common],
                       help="pointwise line-stabilizer checks")
    p.add_argument("--p-min", type=int, default=3)
    p.add_argument("--p-max", type=int, required=True)
    p.set_defaults(handler=_cmd_verify_lemmas)

    p = sub.add_parser("classify", parents=[common],
                       help="classify one subgroup")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--subgroup", default=None,
                   help="a standard subgroup name (e.g. borel)")
    p.add_argument("--generators", default=None,
                   help="comma-separated packed matrix keys")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("enumerate", parents=[common],
                       help="list subgroup classes up to conjugacy")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "sampled"),
                   default="exhaustive")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--ceiling", type=int, default=11)
    p.add_argument("--cache-dir", default=None)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("genus", parents=[common],
                       help="genus and guaranteed-degree table")
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(handler=_cmd_genus)

    p = sub.add_parser("degrees", parents=[common],
                       help="closed-point degree thresholds for one curve")
    p.add_argument("--g", type=int, required=True, help="genus")
    p.add_argument("--generators", required=True,
                   help="comma-separated point degrees")
    p.set_defaults(handler=_cmd_degrees)

    p = sub.add_parser("semigroup", parents=[common],
                       help="representability table of a numerical semigroup")
    p.add_argument("--generators", required=True)
    p.add_argument("--target-max", type=int, default=50)
    p.set_defaults(handler=_cmd_semigroup)

    p = sub.add_parser("density", parents=[common],
                       help="exact density of a clause-union degree set")
    p.add_argument("--spec-file", required=True,
                   help="JSON file with a 'clauses' list")
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_cmd_density)

    p = sub.add_parser("ew", parents=[common],
                       help="shifted-prime degree set density")
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--cutoff", type=int, required=True,
                   help="shift cutoff C")
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(handler=_cmd_ew)

    p = sub.add_parser("bepsilon", parents=[common],
                       help="torsion budget off a small-density excluded set")
    p.add_argument("--profile", default=None,
                   help="JSON family profile file")
    p.add_argument("--cm-g", type=int, default=None,
                   help="use the built-in CM profile for this dimension")
    p.add_argument("--epsilon", required=True,
                   help="density budget, a rational like 1/2 or 0.05")
    p.add_argument("--x", type=int, default=10 ** 6)
    p.set_defaults(handler=_cmd_bepsilon)

    p = sub.add_parser("cm", parents=[common],
                       help="CM divisibility constants for a dimension")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=int, default=None,
                   help="also list allowed exponents at this degree")
    p.set_defaults(handler=_cmd_cm)

    return parser


def _render(args, params, body, verdict, started, finished) -> str:
    manifest = {
        "command": args.command,
        "parameters": params,
        "code_version": VERSION,
        "seed": args.seed,
        "verdict": verdict,
        "started": started,
        "finished": finished,
    }
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "manifest": manifest,
               "report": body}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    projection = _CSV_PROJECTIONS.get(args.command)
    if projection is None:
        raise UsageError(
            f"{args.command} reports have no CSV projection; use json")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(projection(body))
    return buf.getvalue()


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    started = _utc_now()
    try:
        params, body, verdict = args.handler(args)
        text = _render(args, params, body, verdict, started, _utc_now())
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 1 if verdict == "fail" else 0


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
