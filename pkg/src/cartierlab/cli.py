"""Command-line interface: JSON I/O, budgets, result caching, verification.

Exit codes: 0 success, 1 failed verification checks, 2 validation error,
3 resource budget exhausted, 4 internal invariant violation (including
verdict disagreements and cache self-test mismatches).

Every rational crosses the boundary as an exact string "a/b" on input and
as {"num": a, "den": b} on output; nothing is ever a float.  Output JSON is
canonically ordered, so identical requests produce identical bytes, which
is what makes the content-addressed cache sound.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .budgets import Budgets, DEFAULT_BUDGETS
from .cartmod import CartierModuleDescriptor
from .errors import (
    CartierLabError,
    InternalInvariantError,
    ResourceBudgetError,
    ValidationError,
)
from .filtration import TestModuleFiltration
from .frobenius import pe_root
from .bernstein import bs_polynomial, check_bs_roots_sigma
from .ideals import Ideal
from .ring import parse_rational
from .sigma import (
    gr_sigma,
    sigma,
    sigma_nilpotence,
    sigma_tau_comparison,
    sigma_variants_check,
)
from .verify import run_suite, suite_names

SCHEMA = "cartier-lab/1"

# flag/config name -> Budgets field
_BUDGET_KEYS = {
    "max_pairs": "groebner_max_pairs",
    "max_degree": "groebner_max_degree",
    "term_budget": "term_budget",
    "level_cap": "level_cap",
    "probe_budget": "probe_budget",
    "candidate_budget": "candidate_budget",
    "chain_steps": "chain_max_steps",
}


def _rat_json(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


def _ideal_json(ideal: Ideal) -> List[str]:
    return list(ideal.basis_strings())


def _parse_pair(text: str, what: str) -> Tuple[Fraction, Fraction]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValidationError(f"{what} must be 'a,b', got {text!r}")
    return parse_rational(parts[0]), parse_rational(parts[1])


def _parse_int_pair(text: str, what: str) -> Tuple[int, int]:
    parts = text.split(",")
    try:
        a, b = (int(x) for x in parts)
    except ValueError:
        raise ValidationError(f"{what} must be 'i,j' with integers, got {text!r}") from None
    return a, b


def _load_budgets(args) -> Budgets:
    """Defaults, then config file, then environment, then explicit flags."""
    overrides = {}
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path, "rb") as handle:
            doc = tomllib.load(handle)
        for key, value in doc.get("budgets", {}).items():
            if key not in _BUDGET_KEYS:
                raise ValidationError(f"unknown budget key {key!r} in {config_path}")
            overrides[_BUDGET_KEYS[key]] = int(value)
    for key, field in _BUDGET_KEYS.items():
        env = os.environ.get(f"CARTIERLAB_{key.upper()}")
        if env is not None:
            overrides[field] = int(env)
    for key, field in _BUDGET_KEYS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            overrides[field] = flag
    return DEFAULT_BUDGETS.with_overrides(**overrides) if overrides else DEFAULT_BUDGETS


def _descriptor(args) -> CartierModuleDescriptor:
    variables = [v.strip() for v in args.vars.split(",") if v.strip()]
    return CartierModuleDescriptor.from_strings(
        p=args.p,
        variables=variables,
        twist=args.twist,
        test_element=args.test_element,
        assert_f_regular=args.assert_f_regular,
    )


def _add_descriptor_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, required=True, help="prime characteristic")
    parser.add_argument("--vars", required=True, help="comma-separated variable names")
    parser.add_argument("--twist", default="1", help="twist polynomial g (default 1)")
    parser.add_argument("--test-element", default=None, help="test element c")
    parser.add_argument(
        "--assert-f-regular", action="store_true",
        help="assert the module is F-regular (recorded, never checked)",
    )


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", default=None, help="write the JSON document here")
    parser.add_argument("--config", default=None, help="TOML config with a [budgets] table")
    parser.add_argument("--cache", default=None, help="cache directory for results")
    parser.add_argument(
        "--cache-selftest", action="store_true",
        help="on cache hits, recompute and require byte-identical output",
    )
    for key in _BUDGET_KEYS:
        parser.add_argument(f"--{key.replace('_', '-')}", type=int, default=None,
                            dest=key, help=argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cartierlab",
        description="Frobenius/Cartier invariants of hypersurfaces over F_p[x_1..x_n]",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_text, descriptor=True):
        p = sub.add_parser(name, help=help_text)
        if descriptor:
            _add_descriptor_flags(p)
        _add_common_flags(p)
        return p

    p_root = command("root", "Frobenius root of an ideal")
    p_root.add_argument("--gens", required=True, help="semicolon-separated generators")
    p_root.add_argument("--e", type=int, default=1)

    p_tau = command("tau", "test module at a rational exponent")
    p_tau.add_argument("--f", required=True)
    p_tau.add_argument("--lambda", dest="lam", required=True)
    p_tau.add_argument("--e-start", type=int, default=1)
    p_tau.add_argument("--e-cap", type=int, default=None)
    p_tau.add_argument("--consecutive", type=int, default=2)

    p_fpt = command("fpt", "F-pure threshold")
    p_fpt.add_argument("--f", required=True)
    p_fpt.add_argument("--bounds", default="2,2", help="denominator bounds 'A,B'")

    p_jumps = command("jumps", "F-jumping numbers in a window")
    p_jumps.add_argument("--f", required=True)
    p_jumps.add_argument("--window", default="0,1", help="'lo,hi' rationals")
    p_jumps.add_argument("--bounds", default="2,2")
    p_jumps.add_argument("--use-periodicity", action="store_true")

    p_gr = command("gr", "graded piece of the test module filtration")
    p_gr.add_argument("--f", required=True)
    p_gr.add_argument("--lambda", dest="lam", required=True)

    p_nil = command("nilpotence", "nilpotence verdict on a graded piece")
    p_nil.add_argument("--f", required=True)
    p_nil.add_argument("--lambda", dest="lam", required=True)
    p_nil.add_argument("--e", type=int, required=True)
    p_nil.add_argument("--a-e", type=int, default=None,
                       help="exponent (default: smallest admissible)")
    p_nil.add_argument("--k-max", type=int, default=None)

    p_sigma = command("sigma", "non-F-pure submodule")
    p_sigma.add_argument("--f", required=True)
    p_sigma.add_argument("--lambda", dest="lam", required=True)
    p_sigma.add_argument("--variants", type=int, default=None,
                         help="also run the variant comparison with this truncation degree")
    p_sigma.add_argument("--compare-tau", action="store_true")

    p_grs = command("grsigma", "graded piece of the non-F-pure filtration")
    p_grs.add_argument("--f", required=True)
    p_grs.add_argument("--lambda", dest="lam", required=True)
    p_grs.add_argument("--nilpotence-a", type=int, default=None,
                       help="also decide nilpotence at this level")

    p_bs = command("bspoly", "Bernstein-Sato polynomial at a level")
    p_bs.add_argument("--f", required=True)
    p_bs.add_argument("--e", type=int, default=1)
    p_bs.add_argument("--check-theorem", action="store_true",
                      help="verify each root exhibits a nontrivial sigma graded piece")

    p_verify = command("verify", "run a named verification suite", descriptor=False)
    p_verify.add_argument("suite", choices=suite_names())
    p_verify.add_argument("--json", action="store_true", dest="as_json")

    return parser


# -- command bodies -----------------------------------------------------------


def _nilpotence_json(verdict) -> dict:
    return {
        "lambda": _rat_json(verdict.lam),
        "e": verdict.e,
        "a_e": verdict.a_e,
        "verdict": "nilpotent" if verdict.nilpotent else "non-nilpotent",
        "index": verdict.index,
        "predicted": "nilpotent" if verdict.predicted_nilpotent else "non-nilpotent",
        "agree": verdict.agree,
        "trivial_piece": verdict.trivial_piece,
    }


def _sigma_json(result) -> dict:
    return {
        "lambda": _rat_json(result.lam),
        "ideal": _ideal_json(result.ideal),
        "route": result.route,
        "level": result.level,
    }


def _run_command(args, budgets: Budgets) -> Tuple[dict, dict, List[str], int]:
    """Returns (inputs, result, warnings, exit_code)."""
    warnings: List[str] = []
    exit_code = 0

    if args.command == "root":
        module = _descriptor(args)
        gens = [g for g in (s.strip() for s in args.gens.split(";")) if g]
        ideal = Ideal.from_strings(module.ring, gens)
        value = pe_root(ideal, args.e, budgets)
        inputs = {"module": module.to_json(), "gens": gens, "e": args.e}
        return inputs, {"ideal": _ideal_json(value)}, warnings, exit_code

    if args.command == "tau":
        module = _descriptor(args)
        f = module.ring.parse(args.f)
        lam = parse_rational(args.lam)
        engine = TestModuleFiltration(module, f, budgets, consecutive_stable=args.consecutive)
        computed = engine.tau_full(lam, e_start=args.e_start, e_cap=args.e_cap)
        inputs = {"module": module.to_json(), "f": args.f, "lambda": _rat_json(lam),
                  "e_start": args.e_start, "e_cap": args.e_cap,
                  "consecutive_stable": args.consecutive}
        result = {"ideal": _ideal_json(computed.ideal),
                  "stabilization_level": computed.level}
        return inputs, result, warnings, exit_code

    if args.command == "fpt":
        module = _descriptor(args)
        f = module.ring.parse(args.f)
        bounds = _parse_int_pair(args.bounds, "bounds")
        engine = TestModuleFiltration(module, f, budgets)
        value = engine.fpt(bounds)
        inputs = {"module": module.to_json(), "f": args.f, "bounds": list(bounds)}
        return inputs, _rat_json(value), warnings, exit_code

    if args.command == "jumps":
        module = _descriptor(args)
        f = module.ring.parse(args.f)
        window = _parse_pair(args.window, "window")
        bounds = _parse_int_pair(args.bounds, "bounds")
        engine = TestModuleFiltration(module, f, budgets)
        report = engine.jumping_numbers(window, bounds, args.use_periodicity)
        warnings.extend(report.warnings)
        inputs = {"module": module.to_json(), "f": args.f,
                  "window": [_rat_json(window[0]), _rat_json(window[1])],
                  "bounds": list(bounds), "use_periodicity": args.use_periodicity}
        result = {
            "jumps": [
                {"lambda": _rat_json(lam), "ideal": _ideal_json(ideal)}
                for lam, ideal in report.jumps
            ],
        }
        return inputs, result, warnings, exit_code

    if args.command == "gr":
        module = _descriptor(args)
        f = module.ring.parse(args.f)
        lam = parse_rational(args.lam)
        engine = TestModuleFiltration(module, f, budgets)
        piece = engine.graded_piece(lam)
        inputs = {"module": module.to_json(), "f": args.f, "lambda": _rat_json(lam)}
        result = {"tau_left": _ideal_json(piece.tau_left),
                  "tau_at": _ideal_json(piece.tau_at),
                  "is_jump": piece.is_jump}
        return inputs, result, warnings, exit_code

    if args.command == "nilpotence":
        module = _descriptor(args)
        f = module.ring.parse(args.f)
        lam = parse_rational(args.lam)
        engine = TestModuleFiltration(module, f, budgets)
        from .ring import rational_ceil_mul

        a_e = args.a_e
        if a_e is None:
            a_e = rational_ceil_mul(lam, module.ring.p**args.e - 1)
        verdict = engine.nilpotence_verdict(lam, args.e, a_e, args.k_max)
        if not verdict.agree:
            exit_code = 4
        inputs = {"module": module.to_json(), "f": args.f, "lambda": _rat_json(lam),
                  "e": args.e, "a_e": a_e}
        return inputs, _nilpotence_json(verdict), warnings, exit_code

    if args.command == "sigma":
        module = _descriptor(args)
        f = module.ring.parse(args.f)
        lam = parse_rational(args.lam)
        value = sigma(module, f, lam, budgets)
        result = _sigma_json(value)
        if args.variants is not None:
            report = sigma_variants_check(module, f, lam, n=args.variants, budgets=budgets)
            result["variants"] = {
                "sigma_n": _ideal_json(report.sigma_n),
                "sigma_prime": None if report.sigma_prime is None
                else _ideal_json(report.sigma_prime),
                "all_equal": report.all_equal,
            }
        if args.compare_tau:
            comparison = sigma_tau_comparison(module, f, lam, budgets)
            result["tau_comparison"] = {
                "tau_at": _ideal_json(comparison.tau_at),
                "sigma_right": _ideal_json(comparison.sigma_right),
                "right_matches_tau": comparison.right_matches_tau,
                "breakdown": comparison.breakdown,
                "left_matches_tau": comparison.left_matches_tau,
            }
        inputs = {"module": module.to_json(), "f": args.f, "lambda": _rat_json(lam),
                  "variants": args.variants, "compare_tau": args.compare_tau}
        return inputs, result, warnings, exit_code

    if args.command == "grsigma":
        module = _descriptor(args)
        f = module.ring.parse(args.f)
        lam = parse_rational(args.lam)
        piece = gr_sigma(module, f, lam, budgets)
        result = {
            "sigma": _sigma_json(piece.at),
            "sigma_right": _sigma_json(piece.right),
            "nontrivial": piece.nontrivial,
        }
        if args.nilpotence_a is not None:
            verdict = sigma_nilpotence(module, f, lam, args.nilpotence_a, budgets=budgets)
            result["nilpotence"] = _nilpotence_json(verdict)
            if not verdict.agree:
                exit_code = 4
        inputs = {"module": module.to_json(), "f": args.f, "lambda": _rat_json(lam),
                  "nilpotence_a": args.nilpotence_a}
        return inputs, result, warnings, exit_code

    if args.command == "bspoly":
        module = _descriptor(args)
        f = module.ring.parse(args.f)
        report = bs_polynomial(module, f, args.e, budgets)
        result = {
            "e": report.e,
            "gamma": list(report.gamma),
            "digits": [list(d) for d in report.digits],
            "roots": [_rat_json(r) for r in report.roots],
            "fpure_model": _ideal_json(report.fpure_model),
        }
        if args.check_theorem:
            check = check_bs_roots_sigma(module, f, args.e, budgets)
            result["theorem_check"] = {
                "entries": [
                    {"m": entry.m, "lambda": _rat_json(entry.lam),
                     "nontrivial": entry.nontrivial}
                    for entry in check.entries
                ],
                "violations": [entry.m for entry in check.violations],
            }
            if check.violations:
                warnings.append(
                    "some roots at this level do not witness a sigma jump; "
                    "roots at small levels can be pre-asymptotic artifacts"
                )
        inputs = {"module": module.to_json(), "f": args.f, "e": args.e,
                  "check_theorem": args.check_theorem}
        return inputs, result, warnings, exit_code

    raise ValidationError(f"unknown command {args.command!r}")


def _render(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _cached_run(args, budgets: Budgets) -> int:
    inputs, result, warnings, exit_code = None, None, None, 0
    cache_dir = getattr(args, "cache", None)
    key_doc = None
    cache_file = None
    if cache_dir:
        flat = {
            k: v for k, v in vars(args).items()
            if k not in ("output", "cache", "cache_selftest", "config") and v is not None
        }
        key_doc = json.dumps(
            {"schema": SCHEMA, "args": {k: str(v) for k, v in sorted(flat.items())},
             "budgets": asdict(budgets)},
            sort_keys=True,
        )
        digest = hashlib.sha256(key_doc.encode()).hexdigest()
        cache_file = Path(cache_dir) / f"{digest}.json"
        if cache_file.exists():
            cached_text = cache_file.read_text().rstrip("\n")
            if args.cache_selftest:
                inputs, result, warnings, exit_code = _run_command(args, budgets)
                doc = {
                    "schema": SCHEMA, "command": args.command,
                    "inputs": inputs, "result": result, "warnings": warnings,
                }
                if _render(doc) != cached_text:
                    sys.stderr.write("cache self-test mismatch\n")
                    return 4
                sys.stderr.write("cache self-test ok\n")
            _emit(args, cached_text)
            return 0

    inputs, result, warnings, exit_code = _run_command(args, budgets)
    doc = {
        "schema": SCHEMA, "command": args.command,
        "inputs": inputs, "result": result, "warnings": warnings,
    }
    text = _render(doc)
    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        cache_file.write_text(text + "\n")
    _emit(args, text)
    return exit_code


def _run_verify(args) -> int:
    results = run_suite(args.suite)
    failed = [r for r in results if not r.ok]
    if args.as_json:
        doc = {
            "schema": SCHEMA,
            "command": "verify",
            "inputs": {"suite": args.suite},
            "result": {
                "checks": [
                    {"name": r.name, "ok": r.ok, "ms": round(r.seconds * 1000, 3),
                     "detail": r.detail}
                    for r in results
                ],
                "passed": len(results) - len(failed),
                "failed": len(failed),
            },
            "warnings": [],
        }
        _emit(args, _render(doc))
    else:
        for r in results:
            mark = "PASS" if r.ok else "FAIL"
            line = f"[{mark}] {r.name} ({r.seconds * 1000:.0f} ms)"
            if r.detail:
                line += f" {r.detail}"
            print(line)
        print(f"{len(results) - len(failed)} passed, {len(failed)} failed")
    return 1 if failed else 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            return _run_verify(args)
        budgets = _load_budgets(args)
        return _cached_run(args, budgets)
    except ValidationError as exc:
        sys.stderr.write(f"validation error: {exc}\n")
        return 2
    except ResourceBudgetError as exc:
        sys.stderr.write(f"resource budget exceeded: {exc}\n")
        return 3
    except InternalInvariantError as exc:
        sys.stderr.write(f"internal invariant violation: {exc}\n")
        return 4
    except CartierLabError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
