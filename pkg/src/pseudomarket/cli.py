"""Command-line front end.

Exit codes: 0 success, 2 malformed input or I/O failure, 3 a rule or checker
precondition failed, 4 a certificate verdict was false, 5 a golden fixture
failed.  Errors are written to stderr as JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pseudomarket import errors, rules
from pseudomarket.analysis.birkhoff import birkhoff_decompose
from pseudomarket.analysis.manipulation import GROUP, INDIVIDUAL, fuzz
from pseudomarket.analysis.properties import check_envy_free, check_pareto_balanced
from pseudomarket.goldens import run_fixtures
from pseudomarket.hz import verify_hz
from pseudomarket.io import (
    assignment_from_json,
    dumps,
    load_assignment,
    load_instance,
    parse_rational,
    read_json,
    vector_to_json,
)
from pseudomarket.nb import nb_leximin_certificate
from pseudomarket.welfare import ceei_prices_from_mnw, mnw_kkt_check

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_VERDICT = 4
EXIT_FIXTURES = 5

CERTIFICATES = ("hz", "kkt", "nb", "envy", "pareto")


def _emit(payload: dict, output):
    text = dumps(payload)
    if output:
        try:
            Path(output).write_text(text)
        except OSError as exc:
            raise errors.ValidationError(f"cannot write {output}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text)


def _load_prices(args, assignment_path):
    if args.prices:
        raw = read_json(args.prices)
    else:
        raw = read_json(assignment_path)
        if not isinstance(raw, dict) or "prices" not in raw:
            raise errors.ValidationError("hz certificate needs --prices or an assignment file with prices")
    if isinstance(raw, dict):
        raw = raw.get("prices")
    if not isinstance(raw, list):
        raise errors.ValidationError("prices must be a list of rationals")
    return tuple(parse_rational(p) for p in raw)


def cmd_solve(args) -> int:
    inst = load_instance(args.input)
    _emit(rules.solve_report(args.rule, inst), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = load_instance(args.instance)
    x = load_assignment(args.assignment)
    kind = args.certificate
    if kind == "hz":
        cert = verify_hz(inst, x, _load_prices(args, args.assignment))
        payload, verdict = cert.to_json(), cert.overall
    elif kind == "kkt":
        report = mnw_kkt_check(inst, x)
        payload, verdict = report.to_json(), report.verdict
        if verdict:
            payload["ceei_prices"] = vector_to_json(ceei_prices_from_mnw(inst, x, report))
    elif kind == "nb":
        cert = nb_leximin_certificate(inst, x)
        payload, verdict = cert.to_json(), cert.verdict
    elif kind == "envy":
        report = check_envy_free(inst, x)
        payload, verdict = report.to_json(), report.verdict
    else:
        report = check_pareto_balanced(inst, x)
        payload, verdict = report.to_json(), report.verdict
    _emit(payload, args.output)
    return EXIT_OK if verdict else EXIT_VERDICT


def cmd_fuzz(args) -> int:
    report = fuzz(
        args.rule,
        args.n,
        mode=args.mode,
        group_size=args.group_size,
        exhaustive=args.exhaustive,
        seed=args.seed,
        profiles=args.profiles,
        samples=args.samples,
        workers=args.workers,
    )
    _emit(report.to_json(), args.output)
    return EXIT_OK


def cmd_decompose(args) -> int:
    x = assignment_from_json(read_json(args.input))
    lottery = birkhoff_decompose(x)
    _emit(lottery.to_json(), args.output)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    results = run_fixtures(args.fixtures_dir)
    failing = [r.id for r in results if not r.ok]
    _emit(
        {"fixtures": [r.to_json() for r in results], "failing": failing},
        args.output,
    )
    return EXIT_FIXTURES if failing else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pseudomarket", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--output", "-o", help="write JSON here instead of stdout")
        return p

    p = add("solve", cmd_solve, "run an assignment rule on an instance file")
    p.add_argument("--rule", required=True, choices=sorted(rules.RULES))
    p.add_argument("--input", "-i", required=True)

    p = add("verify", cmd_verify, "check a certificate for an assignment")
    p.add_argument("--certificate", required=True, choices=CERTIFICATES)
    p.add_argument("--instance", required=True)
    p.add_argument("--assignment", required=True)
    p.add_argument("--prices", help="JSON file with a price list (hz only)")

    p = add("fuzz", cmd_fuzz, "search truth profiles for profitable misreports")
    p.add_argument("--rule", required=True, choices=sorted(rules.RULES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=(INDIVIDUAL, GROUP), default=INDIVIDUAL)
    p.add_argument("--group-size", type=int, default=2)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--profiles", type=int, default=100, help="random truth profiles")
    p.add_argument("--samples", type=int, default=200, help="random misreports per profile")
    p.add_argument("--workers", type=int, default=None)

    p = add("decompose", cmd_decompose, "Birkhoff-decompose a doubly stochastic assignment")
    p.add_argument("--input", "-i", required=True)

    p = add("fixtures", cmd_fixtures, "run the bundled golden fixtures")
    p.add_argument("--fixtures-dir", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except errors.ValidationError as exc:
        code = EXIT_INPUT
        err = exc
    except errors.PreconditionError as exc:
        code = EXIT_PRECONDITION
        err = exc
    except ValueError as exc:
        code = EXIT_INPUT
        err = errors.ValidationError(str(exc))
    sys.stderr.write(json.dumps(err.to_dict()) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
