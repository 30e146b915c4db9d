"""Command-line interface: construct graphs, search/verify certificates,
run inequality testers and combinatorial checkers.

Exit codes: 0 ok, 1 usage or input error, 2 certificate not found,
3 inequality or check violated, 4 checker precondition failed. All
randomness flows from --seed; identical inputs and seed give
byte-identical output files. SIDLAB_BUDGET overrides the default search
budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .bigraph import Bigraph, ColoredBigraph, book, cycle4, from_json_dict, star, to_json_dict
from .checkers import (
    DegreeProfile,
    PreconditionError,
    ReflectiveTreeDecomposition,
    check_conlonlee_divisibility,
    check_conlonlee_profile,
    check_largeright,
    check_largeright_profile,
    check_orbit_hypotheses,
    verify_rtd,
)
from .percolation import (
    DEFAULT_BUDGET,
    NotFound,
    certificate_to_json,
    find_cut_percolating,
    find_left_cut_percolating,
    verify_certificate,
)
from .reflection import IncidenceBigraph, build_incidence, reflection_fold_pool
from . import testers
from .fractional import from_right_uniform

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NOT_FOUND = 2
EXIT_VIOLATED = 3
EXIT_PRECONDITION = 4

TEST_PROPERTIES = ("sidorenko", "strong-sidorenko", "induced-sidorenko",
                   "weak-norming", "left-weak-holder", "color-sidorenko",
                   "cs-tree", "jensen", "color-restriction")
CHECKERS = ("largeright", "conlonlee", "orbits", "rtd")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Validated knobs shared by the randomized commands."""

    trials: int = 200
    grid: int = 4
    seed: int = 0
    tol: float = 1e-9
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.trials < 1 or self.grid < 1:
            raise UsageError("trials and grid must be positive")
        if not 0.0 < self.tol < 1.0:
            raise UsageError("tol must lie in (0, 1)")
        if self.budget < 1:
            raise UsageError("budget must be positive")

    def tester_kwargs(self) -> dict:
        return dict(trials=self.trials, grid=self.grid, seed=self.seed,
                    tol=self.tol)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise UsageError(message)


def _write_json(payload: dict, path: Optional[str]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_graph(path: str):
    with open(path, encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))


def _plain_graph(obj) -> Bigraph:
    return obj.graph if isinstance(obj, ColoredBigraph) else obj


def _colored_graph(obj, what: str) -> ColoredBigraph:
    if not isinstance(obj, ColoredBigraph):
        raise UsageError(f"{what} requires a graph file with edge_colors")
    return obj


def _parse_uniformities(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"bad uniformities {text!r}") from exc


def _parse_profile(text: str) -> dict[int, int]:
    counts = {}
    try:
        for part in text.split(","):
            if not part:
                continue
            k, d = part.split(":")
            counts[int(k)] = int(d)
    except ValueError as exc:
        raise UsageError(f"bad profile {text!r} (expected 'k:d_k,...')") from exc
    return counts


def build_parser() -> _Parser:
    parser = _Parser(prog="sidlab")
    sub = parser.add_subparsers(dest="command", required=True)

    con = sub.add_parser("construct", help="emit a bigraph JSON file")
    con.add_argument("kind", choices=("incidence", "book", "star", "cycle4"))
    con.add_argument("--n", type=int, help="ground-set size for incidence")
    con.add_argument("--uniformities", help="comma-separated, e.g. 2,3")
    con.add_argument("--k", type=int, help="page count for book")
    con.add_argument("--d", type=int, help="leaf count for star")
    con.add_argument("-o", "--output", default=None)

    cert = sub.add_parser("certify", help="search for a percolation certificate")
    cert.add_argument("graph")
    cert.add_argument("--mode", choices=("left", "edge"), required=True)
    cert.add_argument("--pool", choices=("all", "reflection"), default="all")
    cert.add_argument("--budget", type=int,
                      default=int(os.environ.get("SIDLAB_BUDGET", DEFAULT_BUDGET)))
    cert.add_argument("-o", "--output", default=None)

    tst = sub.add_parser("test", help="run a randomized inequality tester")
    tst.add_argument("property", choices=TEST_PROPERTIES)
    tst.add_argument("graph", nargs="?")
    tst.add_argument("--trials", type=int, default=200)
    tst.add_argument("--grid", type=int, default=4)
    tst.add_argument("--seed", type=int, default=0)
    tst.add_argument("--tol", type=float, default=1e-9)
    tst.add_argument("--preset", choices=("uniform", "adversarial"),
                     default="uniform")
    tst.add_argument("--n", type=int, default=3, help="term count for jensen")
    tst.add_argument("--colors", help="kept colors for color-restriction")
    tst.add_argument("-o", "--output", default=None)

    chk = sub.add_parser("check", help="run an exact combinatorial checker")
    chk.add_argument("checker", choices=CHECKERS)
    chk.add_argument("graph", nargs="?")
    chk.add_argument("--v1", type=int)
    chk.add_argument("--profile", help="degree profile 'k:d_k,...'")
    chk.add_argument("--template", help="colored template graph for orbits")
    chk.add_argument("--decomposition", help="bags/edges JSON file for rtd")
    chk.add_argument("--trials", type=int, default=50)
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--tol", type=float, default=1e-9)
    chk.add_argument("-o", "--output", default=None)
    return parser


def _cmd_construct(args) -> int:
    if args.kind == "incidence":
        if args.n is None or args.uniformities is None:
            raise UsageError("incidence needs --n and --uniformities")
        g = build_incidence(args.n, _parse_uniformities(args.uniformities))
    elif args.kind == "book":
        if args.k is None:
            raise UsageError("book needs --k")
        g = book(args.k)
    elif args.kind == "star":
        if args.d is None:
            raise UsageError("star needs --d")
        g = star(args.d)
    else:
        g = cycle4()
    _write_json(to_json_dict(g), args.output)
    return EXIT_OK


def _cmd_certify(args) -> int:
    cfg = RunConfig(budget=args.budget)
    obj = _load_graph(args.graph)
    g = _plain_graph(obj)
    pool = None
    if args.pool == "reflection":
        pool = reflection_fold_pool(IncidenceBigraph.from_bigraph(g))
    search = find_left_cut_percolating if args.mode == "left" else find_cut_percolating
    result = search(g, pool, budget=cfg.budget)
    if isinstance(result, NotFound):
        print(f"no certificate: {result.reason} "
              f"({result.states_explored} states explored)", file=sys.stderr)
        return EXIT_NOT_FOUND
    res = verify_certificate(g, result)
    if not res:
        print(f"internal error: certificate failed verification: {res.reason}",
              file=sys.stderr)
        return EXIT_USAGE
    _write_json(certificate_to_json(result), args.output)
    return EXIT_OK


def _cmd_test(args) -> int:
    prop = args.property
    cfg = RunConfig(trials=args.trials, grid=args.grid, seed=args.seed,
                    tol=args.tol).tester_kwargs()
    if prop == "jensen":
        report = testers.test_inductive_jensen(args.n, trials=args.trials,
                                               seed=args.seed, tol=args.tol)
    else:
        if args.graph is None:
            raise UsageError(f"{prop} requires a graph file")
        obj = _load_graph(args.graph)
        if prop == "sidorenko":
            report = testers.test_sidorenko(_plain_graph(obj), preset=args.preset, **cfg)
        elif prop == "strong-sidorenko":
            report = testers.test_strong_sidorenko(_plain_graph(obj),
                                                   preset=args.preset, **cfg)
        elif prop == "induced-sidorenko":
            report = testers.test_induced_sidorenko(_plain_graph(obj),
                                                    preset=args.preset, **cfg)
        elif prop == "weak-norming":
            report = testers.test_weakly_norming(_plain_graph(obj),
                                                 preset=args.preset, **cfg)
        elif prop == "left-weak-holder":
            report = testers.test_left_weak_holder(
                _colored_graph(obj, prop), preset=args.preset, **cfg)
        elif prop == "color-sidorenko":
            h = from_right_uniform(_colored_graph(obj, prop))
            report = testers.test_color_sidorenko(h, preset=args.preset, **cfg)
        elif prop == "cs-tree":
            report = testers.test_cs_tree(_plain_graph(obj), preset=args.preset, **cfg)
        elif prop == "color-restriction":
            if args.colors is None:
                raise UsageError("color-restriction needs --colors")
            keep = [int(c) for c in args.colors.split(",") if c]
            report = testers.test_color_restriction_trials(
                _colored_graph(obj, prop), keep, **cfg)
        else:  # pragma: no cover
            raise UsageError(f"unknown property {prop}")
    _write_json(testers.report_to_json(report), args.output)
    return EXIT_OK if report.holds else EXIT_VIOLATED


def _profile_from_args(args) -> DegreeProfile:
    if args.profile is None or args.v1 is None:
        raise UsageError("profile checks need --v1 and --profile (or a graph file)")
    return DegreeProfile(args.v1, _parse_profile(args.profile))


def _cmd_check(args) -> int:
    if args.checker in ("largeright", "conlonlee"):
        if args.graph is not None:
            g = _plain_graph(_load_graph(args.graph))
            report = (check_largeright(g) if args.checker == "largeright"
                      else check_conlonlee_divisibility(g))
        else:
            prof = _profile_from_args(args)
            report = (check_largeright_profile(prof) if args.checker == "largeright"
                      else check_conlonlee_profile(prof))
        _write_json({"checker": args.checker, "passed": report.passed,
                     "per_degree": list(report.per_degree)}, args.output)
        return EXIT_OK if report.passed else EXIT_VIOLATED

    if args.checker == "orbits":
        if args.graph is None or args.template is None:
            raise UsageError("orbits needs a graph file and --template")
        cfg = RunConfig(trials=args.trials, seed=args.seed, tol=args.tol)
        g = _plain_graph(_load_graph(args.graph))
        h = _colored_graph(_load_graph(args.template), "orbits --template")
        report = check_orbit_hypotheses(g, h, lwh_trials=cfg.trials,
                                        seed=cfg.seed, tol=cfg.tol)
        _write_json({"checker": "orbits", "passed": report.passed,
                     "orbits": list(report.orbits),
                     "evidence_note": report.evidence_note,
                     "lwh_worst_margin": report.lwh_margin}, args.output)
        return EXIT_OK if report.passed else EXIT_VIOLATED

    # rtd
    if args.graph is None or args.decomposition is None:
        raise UsageError("rtd needs a graph file and --decomposition")
    g = _plain_graph(_load_graph(args.graph))
    with open(args.decomposition, encoding="utf-8") as fh:
        d = json.load(fh)
    t = ReflectiveTreeDecomposition(d["bags"], [tuple(e) for e in d.get("edges", [])])
    report = verify_rtd(g, t)
    payload = {"checker": "rtd", "passed": report.passed, "reason": report.reason,
               "core": to_json_dict(report.core) if report.core is not None else None}
    _write_json(payload, args.output)
    return EXIT_OK if report.passed else EXIT_VIOLATED


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "construct":
            return _cmd_construct(args)
        if args.command == "certify":
            return _cmd_certify(args)
        if args.command == "test":
            return _cmd_test(args)
        return _cmd_check(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print("precondition failed:", file=sys.stderr)
        for item in exc.items:
            print(f"  - {item}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
