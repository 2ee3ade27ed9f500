"""Command-line front end: read a JSON surface file, run one analysis, write a JSON report.

Exit codes: 0 success, 1 validation failure, 2 falsified invariant,
3 resource limit.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from itertools import combinations

from .counting import SymmetryError, count_nb, count_nb_bruteforce, local_density, sum_r_a
from .forms import SurfaceSpec, resultant_splitting, validate_surface
from .intarith import FactorLimitError
from .picard import (
    alpha_from_lattice,
    beta_report,
    build_lattice,
    cone_generators,
    fixed_rank,
    tate_h1,
)
from .points import default_jobs
from .quadfield import field_info, negative_pell_solvable
from .torsors import TorsorLabel, m_set, partition_check, sigma_set, torsor_classes

EXIT_OK, EXIT_INVALID, EXIT_FALSIFIED, EXIT_RESOURCE = 0, 1, 2, 3


class Falsified(Exception):
    pass


def to_json(obj):
    """Exact rationals become "num/den" strings; tuples become lists."""
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    return obj


def load_spec(path: str) -> tuple[SurfaceSpec, dict]:
    with open(path) as fh:
        data = json.load(fh)
    if "a" not in data or "factors" not in data:
        raise ValueError("spec file needs keys 'a' and 'factors'")
    return SurfaceSpec.from_coefficients(int(data["a"]), data["factors"]), data


def spec_dict(spec: SurfaceSpec) -> dict:
    return {"a": spec.a, "factors": [list(f.coeffs) for f in spec.factors], "n": spec.n}


def cmd_validate(spec, args, data):
    return validate_surface(spec).to_dict()


def cmd_invariants(spec, args, data):
    lat = build_lattice(spec)
    beta = beta_report(spec.degrees)
    if not beta.agree:
        raise Falsified(f"beta computations disagree: {beta}")
    ee, dd = cone_generators(lat)
    ranks = [fixed_rank(lat, False, False), fixed_rank(lat, False, True), fixed_rank(lat)]
    return {
        "alpha": alpha_from_lattice(lat),
        "beta": beta.closed_form,
        "beta_checks": {"closed_form": beta.closed_form, "mod2": beta.mod2, "h1_order": beta.h1_order},
        "picard_ranks": ranks,
        "tate_h1": list(tate_h1(lat).divisors),
        "basis": list(lat.labels),
        "anticanonical": list(lat.anticanonical),
        "cone_generators": {"E+ + E-": ee, "D1+ + D1-": dd},
        "sha1": "0",
    }


def cmd_field_info(spec, args, data):
    info = field_info(spec.a)
    out = {
        "a": info.a,
        "fundamental_discriminant": info.fundamental_discriminant,
        "h": info.h,
        "h_plus": info.h_plus,
        "omega_a": info.omega_a,
    }
    if info.real:
        x, y, half = info.unit
        out["unit"] = {"x": x, "y": y, "half": half}
        out["unit_norm"] = info.unit_norm
        solvable, witness = negative_pell_solvable(spec.a)
        out["negative_pell"] = {"solvable": solvable, "witness": list(witness) if witness else None}
    return out


def cmd_torsor_classes(spec, args, data):
    splits = []
    for i, j in combinations(range(spec.r), 2):
        r, plus, minus = resultant_splitting(spec, i, j)
        splits.append({"i": i + 1, "j": j + 1, "r": r, "r_plus": plus, "r_minus": minus})
    classes = torsor_classes(spec)
    return {
        "sigma": [list(e) for e in sigma_set(spec)],
        "m": [list(m) for m in m_set(spec)],
        "classes": [c.to_dict() for c in classes],
        "resultants": splits,
    }


def _bound(args, data):
    B = args.bound if args.bound is not None else data.get("bound")
    if B is None:
        raise ValueError("--bound is required")
    return int(B)


def cmd_partition_check(spec, args, data):
    rep = partition_check(spec, _bound(args, data), jobs=args.jobs)
    out = rep.to_dict()
    if not rep.ok:
        raise Falsified(json.dumps(out))
    return out


def cmd_count(spec, args, data):
    B = _bound(args, data)
    rep = count_nb(spec, B, jobs=args.jobs)
    out = rep.to_dict()
    if args.verify:
        oracle = count_nb_bruteforce(spec, B)
        out["oracle_total"] = oracle
        if oracle != rep.total:
            raise Falsified(f"count {rep.total} differs from oracle {oracle}")
    if not rep.consistent:
        raise Falsified("per-label counts do not add up to the total")
    return out


def cmd_sum_ra(spec, args, data):
    X = args.x if args.x is not None else data.get("x")
    if X is None:
        raise ValueError("--x is required")
    value = sum_r_a(spec, int(X), box=args.box)
    out = {"x": int(X), "value": value}
    if spec.a < 0 and field_info(spec.a).h == 1:
        formula = sum_r_a(spec, int(X), use_formula=True)
        out["divisor_formula"] = formula
        out["agree"] = formula == value
    return out


def cmd_density(spec, args, data):
    dens = data.get("density", {})
    primes = [args.p] if args.p is not None else dens.get("primes", [])
    levels = args.levels if args.levels is not None else dens.get("levels")
    if not primes or levels is None:
        raise ValueError("--p and --levels are required")
    labels = torsor_classes(spec)
    if args.label:
        eps, m = json.loads(args.label)
        labels = [TorsorLabel(tuple(eps), tuple(m))]
    out = []
    for p in primes:
        for lab in labels:
            vals = local_density(
                spec, lab, int(p), int(levels), budget=args.budget, samples=args.samples, seed=args.seed
            )
            out.append({"p": int(p), "label": lab.to_dict(), "levels": [v.to_dict() for v in vals]})
    return {"seed": args.seed, "densities": out}


COMMANDS = {
    "validate": cmd_validate,
    "invariants": cmd_invariants,
    "field-info": cmd_field_info,
    "torsor-classes": cmd_torsor_classes,
    "partition-check": cmd_partition_check,
    "count": cmd_count,
    "sum-ra": cmd_sum_ra,
    "density": cmd_density,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chatelet", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("spec", help="JSON surface file")
    ap.add_argument("--bound", type=int, help="height bound B")
    ap.add_argument("--x", type=int, help="box size X for sum-ra")
    ap.add_argument("--box", type=int, help="(y, z) box for sum-ra when a > 0")
    ap.add_argument("--p", type=int, help="prime for density")
    ap.add_argument("--levels", type=int, help="truncation levels for density")
    ap.add_argument("--label", help='one class as JSON, e.g. "[[1,1],[1,1]]"')
    ap.add_argument("--budget", type=int, default=2 * 10**7, help="exhaustive density budget")
    ap.add_argument("--samples", type=int, default=200_000, help="samples per level beyond budget")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=None, help="worker processes (default $TORSOR_JOBS or 1)")
    ap.add_argument("--verify", action="store_true", help="count: also run the brute-force oracle")
    ap.add_argument("--out", help="write the report here instead of stdout")
    return ap


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(to_json(report), indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs is None:
        args.jobs = default_jobs()
    report = {"command": args.command}
    try:
        spec, data = load_spec(args.spec)
        report["spec"] = spec_dict(spec)
        validation = validate_surface(spec)
        if args.command == "validate":
            report["status"] = "ok" if validation.ok else "invalid"
            report["result"] = validation.to_dict()
            _emit(report, args.out)
            return EXIT_OK if validation.ok else EXIT_INVALID
        if not validation.ok:
            report["status"] = "invalid"
            report["result"] = validation.to_dict()
            _emit(report, args.out)
            return EXIT_INVALID
        report["result"] = COMMANDS[args.command](spec, args, data)
        report["status"] = "ok"
        code = EXIT_OK
    except (Falsified, SymmetryError) as exc:
        report["status"] = "falsified"
        report["error"] = str(exc)
        code = EXIT_FALSIFIED
    except (FactorLimitError, MemoryError) as exc:
        report["status"] = "resource-limit"
        report["error"] = str(exc)
        code = EXIT_RESOURCE
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        report["status"] = "invalid"
        report["error"] = str(exc)
        code = EXIT_INVALID
    _emit(report, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
