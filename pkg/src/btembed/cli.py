"""``btembed <command> --scenario <path> ...``: batch checks with JSON reports.

Exit codes: 0 all checks pass, 1 a check failed, 2 input error,
3 precision exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .embeddings import (
    Translation,
    apply_translation,
    classify_compatible_map,
    is_E_fixed,
    j_beta,
    uniqueness_search,
)
from .errors import BtembedError, PrecisionExhausted
from .filtrations import is_extension
from .rigidity import rigidity_report
from .scenario import Scenario, load_scenario, parse_h_point

COMMANDS = ("check-compat", "embed", "search-unique", "classify-map", "rigidity", "demo-so2")


def _fr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _h_json(x: dict) -> dict:
    return {str(i): fn.to_json() for i, fn in sorted(x.items())}


def _read_json_arg(value: str):
    p = Path(value)
    text = p.read_text() if p.exists() else value
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise BtembedError(f"--point is neither a file nor JSON: {exc.msg}") from exc


def _points(sc: Scenario, args, default_count: int) -> list[dict]:
    if args.point:
        return [parse_h_point(sc, _read_json_arg(args.point))]
    if default_count == 1:
        return [sc.default_x()]
    return sc.random_points(default_count, args.seed)


def cmd_check_compat(sc: Scenario, args) -> tuple[bool, dict]:
    rows = []
    for x in _points(sc, args, args.count):
        y = j_beta(sc.datum, x)
        chk = is_extension(sc.datum, y, x)
        rows.append({"x": _h_json(x), "extends": chk.holds,
                     "witness": None if chk.witness is None else _fr(chk.witness)})
    return all(r["extends"] for r in rows), {"points": rows}


def cmd_embed(sc: Scenario, args) -> tuple[bool, dict]:
    x = _points(sc, args, 1)[0]
    y = j_beta(sc.datum, x)
    fixed = is_E_fixed(sc.datum, y)
    return fixed, {"x": _h_json(x), "j_beta": y.to_json(), "is_E_fixed": fixed}


def cmd_search_unique(sc: Scenario, args) -> tuple[bool, dict]:
    x = _points(sc, args, 1)[0]
    r = uniqueness_search(sc.datum, x, sc.grid_n, sc.grid_k, args.conjugates, args.seed)
    res = {
        "x": _h_json(x),
        "compatible_points": [y.to_json() for y in r.compatible],
        "expected": r.j_beta.to_json(),
        "expected_family": [y.to_json() for y in r.expected],
        "family_dimension": r.family_dimension,
        "unique": r.is_unique,
        "matches_translation_family": r.matches_expected,
        "candidates": r.candidates,
    }
    return r.matches_expected, res


def _classify(sc: Scenario, shift: dict, count: int, seed: int) -> tuple[bool, dict]:
    t = Translation.of(shift)
    xs = sc.random_points(count, seed)
    samples = [(x, j_beta(sc.datum, apply_translation(sc.datum, t, x))) for x in xs]
    got = classify_compatible_map(sc.datum, samples)
    return got == t, {"planted": t.to_json(), "recovered": got.to_json(), "samples": len(samples)}


def cmd_classify_map(sc: Scenario, args) -> tuple[bool, dict]:
    shift = {}
    if args.shift:
        shift = {int(k): Fraction(v) for k, v in _read_json_arg(args.shift).items()}
    return _classify(sc, shift, args.count, args.seed)


def cmd_rigidity(sc: Scenario | None, args) -> tuple[bool, dict]:
    dims = rigidity_report()
    thick = {k: v for k, v in dims.items() if k != "thin"}
    ok = all(v == 1 for v in thick.values()) and dims["thin"] > 1
    return ok, {"solution_dimensions": dims}


def cmd_demo_so2(sc: Scenario | None, args) -> tuple[bool, dict]:
    sc = sc or load_scenario("so2_gl1")
    x = sc.default_x()
    r = uniqueness_search(sc.datum, x, sc.grid_n, sc.grid_k, 0, args.seed)
    recovered = {}
    ok = r.matches_expected and r.family_dimension == 1
    for s in (Fraction(0), Fraction(1, 4), Fraction(1, 2)):
        good, res = _classify(sc, {sc.datum.i0: s}, args.count, args.seed)
        recovered[_fr(s)] = res["recovered"]
        ok = ok and good
    return ok, {"family_dimension": r.family_dimension,
                "compatible_points": [y.to_json() for y in r.compatible],
                "recovered_shifts": recovered}


HANDLERS = {
    "check-compat": cmd_check_compat,
    "embed": cmd_embed,
    "search-unique": cmd_search_unique,
    "classify-map": cmd_classify_map,
    "rigidity": cmd_rigidity,
    "demo-so2": cmd_demo_so2,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="btembed", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--scenario", help="scenario JSON path or bundled name")
    p.add_argument("--point", help="H-point as JSON text or file: {component: {alpha, transform}}")
    p.add_argument("--grid-n", type=int, dest="grid_n")
    p.add_argument("--grid-k", type=int, dest="grid_k")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20, help="random points for batch commands")
    p.add_argument("--conjugates", type=int, default=0, help="random conjugate apartment points to add")
    p.add_argument("--shift", help="planted translation for classify-map, e.g. '{\"0\": \"1/4\"}'")
    p.add_argument("--out", help="write the report here instead of stdout")
    return p


def run_command(sc: Scenario | None, command: str, args) -> tuple[int, dict]:
    if sc is not None:
        if args.grid_n:
            sc.grid_n = args.grid_n
        if args.grid_k is not None:
            sc.grid_k = args.grid_k
    ok, results = HANDLERS[command](sc, args)
    report = {"command": command, "scenario": None if sc is None else sc.id,
              "seed": args.seed, "pass": ok, "results": results}
    return (0 if ok else 1), report


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sc = None
        if args.scenario:
            sc = load_scenario(args.scenario)
        elif args.command not in ("rigidity", "demo-so2"):
            raise BtembedError(f"{args.command} needs --scenario")
        code, report = run_command(sc, args.command, args)
    except PrecisionExhausted as exc:
        print(f"btembed: precision exhausted: {exc}", file=sys.stderr)
        return 3
    except (BtembedError, ValueError, OSError) as exc:
        print(f"btembed: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
