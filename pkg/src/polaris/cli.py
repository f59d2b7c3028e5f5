"""Command line front end.

Subcommands:

* ``catalog``    -- list the admissible diagrams of a family and rank
* ``oppdiagram`` -- compute the opposition diagram of a matrix on a space,
                    both read from JSON files
* ``construct``  -- build one of the explicit automorphisms and save it
* ``sweep``      -- census a whole matrix group (exhaustive or sampled)
* ``verify``     -- run the named verification suites

Reports are JSON (authoritative) with an optional CSV summary.  Exit codes:
0 on success, 1 when a checked invariant fails (or a search comes back
empty), 2 on input errors.  Sweep and verify results are cached under
``./polaris-cache`` keyed by a content hash of the request; ``--no-cache``
bypasses the cache entirely.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from . import cache, serial
from . import sweep as sweep_mod
from . import verify as verify_mod
from .collineation import similitude_factor
from .constructors import (
    SearchExhausted,
    baer_involution,
    central_elation,
    hermitian_ffi,
    homology_B,
    homology_C,
    hyperbolic_ffi,
    symplectic_ffi,
    torus_element,
)
from .diagrams import catalog
from .engine import opposition_diagram
from .gf import GF
from .roots import RootSystem

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2


class CliInputError(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise CliInputError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise CliInputError(f"{path} is not valid JSON: {e}") from e


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=1, sort_keys=False) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_csv(path: str, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _field(q: int) -> GF:
    try:
        return GF(q)
    except (ValueError, AssertionError) as e:
        raise CliInputError(f"bad field order {q}: {e}") from e


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------


def cmd_catalog(args) -> int:
    fam = args.family.upper()
    if fam not in RootSystem.MIN_RANK:
        raise CliInputError(f"unknown family {args.family!r} (one of A, B, C, D)")
    if args.n < RootSystem.MIN_RANK[fam]:
        raise CliInputError(f"family {fam} needs rank >= {RootSystem.MIN_RANK[fam]}")
    diagrams = catalog(fam, args.n)
    if args.closed_only:
        diagrams = [d for d in diagrams if d.is_polar_closed()]
    if args.json:
        _write_json(
            args.out,
            {
                "family": fam,
                "n": args.n,
                "diagrams": [
                    {
                        "symbol": d.symbol,
                        "encircled": sorted(d.nodes),
                        "polar_closed": d.is_polar_closed(),
                        "type_preserving": d.is_type_preserving,
                        "out_of_engine": d.out_of_engine,
                    }
                    for d in diagrams
                ],
            },
        )
        return EXIT_PASS
    print(f"{'symbol':<12} {'encircled':<18} {'closed':<7} notes")
    for d in diagrams:
        nodes = " ".join(str(k) for k in sorted(d.nodes)) or "-"
        closed = "yes" if d.is_polar_closed() else "no"
        notes = []
        if not d.is_type_preserving:
            notes.append("type-rotating")
        if d.out_of_engine:
            notes.append("out-of-engine")
        print(f"{d.symbol:<12} {nodes:<18} {closed:<7} {' '.join(notes)}".rstrip())
    return EXIT_PASS


# --------------------------------------------------------------------------
# oppdiagram
# --------------------------------------------------------------------------


def cmd_oppdiagram(args) -> int:
    try:
        space = serial.space_from_dict(_read_json(args.space_file))
    except (ValueError, KeyError, TypeError) as e:
        raise CliInputError(f"bad space file {args.space_file}: {e}") from e
    try:
        F, theta = serial.matrix_from_dict(_read_json(args.matrix_file))
    except (ValueError, KeyError, TypeError) as e:
        raise CliInputError(f"bad matrix file {args.matrix_file}: {e}") from e
    if F.descriptor() != space.F.descriptor():
        raise CliInputError("matrix and space are over different fields")
    if theta.matrix.shape[0] != space.gram.shape[0]:
        raise CliInputError(
            f"matrix size {theta.matrix.shape[0]} does not match the "
            f"{space.gram.shape[0]}-dimensional ambient space"
        )
    if similitude_factor(space, theta) is None:
        raise CliInputError("matrix does not preserve the defining form of the space")
    res = opposition_diagram(
        space, theta, seed=args.seed, probes=args.probes, with_corank=args.corank
    )
    doc = {
        "space": space.descriptor(),
        "symbol": res.symbol,
        "alias_symbol": res.alias_symbol,
        "classification": res.classification,
        "encircled": sorted(res.encircled),
        "capped": res.capped,
        "point_domestic": res.is_point_domestic,
        "fixed_points": res.fixed_point_count,
        "eigenvalue_dimensions": (
            None
            if res.eigenvalue_dimensions is None
            else {str(k): v for k, v in sorted(res.eigenvalue_dimensions.items())}
        ),
        "corank": res.corank,
        "witnesses": {str(k): list(v) for k, v in sorted(res.witnesses.items())},
        "probe_seed": res.probe_seed,
        "probe_count": res.probe_count,
    }
    _write_json(args.out, doc)
    return EXIT_PASS


# --------------------------------------------------------------------------
# construct
# --------------------------------------------------------------------------

_SPACE_KINDS = {
    "sp": ("symplectic", "C"),
    "parabolic": ("parabolic", "B"),
    "hyperbolic": ("hyperbolic", "D"),
    "elliptic": ("elliptic", "B"),
    "hermitian": ("hermitian", "B"),
}


def _space_for(kind_key: str, n: int, F: GF):
    if kind_key not in _SPACE_KINDS:
        raise CliInputError(f"unknown space kind {kind_key!r} (one of {', '.join(_SPACE_KINDS)})")
    name = _SPACE_KINDS[kind_key][0]
    try:
        return serial._FACTORIES[name](n, F)
    except (ValueError, AssertionError) as e:
        raise CliInputError(f"cannot build {name} space of rank {n} over GF({F.q}): {e}") from e


def cmd_construct(args) -> int:
    F = _field(args.q)
    name = args.name
    kind = args.kind
    try:
        if name == "central-elation":
            space = _space_for(kind, args.rank, F)
            theta = central_elation(space, args.a)
        elif name == "homology-B":
            if args.i is None:
                raise CliInputError("homology-B needs --i")
            kind = "parabolic"
            theta = homology_B(args.rank, args.i, F)
        elif name == "homology-C":
            if args.i is None:
                raise CliInputError("homology-C needs --i")
            kind = "sp"
            theta = homology_C(args.rank, args.i, F)
        elif name == "torus":
            if args.t is None:
                raise CliInputError("torus needs --t")
            space = _space_for(kind, args.rank, F)
            theta = torus_element(space, args.t)
        elif name == "symplectic-ffi":
            kind = "sp"
            theta = symplectic_ffi(args.rank, F)
        elif name == "hyperbolic-ffi":
            kind = "hyperbolic"
            theta = hyperbolic_ffi(args.rank, F)
        elif name == "hermitian-ffi":
            kind = "hermitian"
            theta = hermitian_ffi(args.rank, F)
        elif name == "baer":
            kind = "hermitian"
            theta = baer_involution(args.rank, F)
        else:  # pragma: no cover - argparse restricts the choices
            raise CliInputError(f"unknown construction {name!r}")
    except SearchExhausted as e:
        print(f"search exhausted: {e}", file=sys.stderr)
        _write_json(args.out, {"search_exhausted": str(e), "report": e.report})
        return EXIT_VIOLATION
    except (ValueError, AssertionError) as e:
        raise CliInputError(f"cannot construct {name} (rank {args.rank}, q={args.q}): {e}") from e
    doc = serial.matrix_to_dict(F, theta, kind=_SPACE_KINDS[kind][0])
    _write_json(args.out, doc)
    if args.out:
        print(f"wrote {name} (rank {args.rank}, GF({F.q})) to {args.out}")
    return EXIT_PASS


# --------------------------------------------------------------------------
# sweep
# --------------------------------------------------------------------------


def _sweep_csv_rows(result: dict, wall: float) -> list[tuple]:
    rows = [("meta", "group_order", result["group_order"]),
            ("meta", "evaluated", result["evaluated"]),
            ("meta", "mode", result["mode"]),
            ("meta", "seed", result["seed"]),
            ("meta", "wall_seconds", wall)]
    for sym, count in sorted(result["census"].items()):
        rows.append(("census", sym, count))
    for cls, count in sorted(result["class_census"].items()):
        rows.append(("class", cls, count))
    for nodes, count in sorted(result["uncapped"].items()):
        rows.append(("uncapped", nodes, count))
    for name, ok in sorted(result["checks"].items()):
        rows.append(("check", name, "pass" if ok else "FAIL"))
    return rows


def cmd_sweep(args) -> int:
    if not args.sp:
        raise CliInputError("select a space: --sp (symplectic) is the supported sweep target")
    if args.random is not None and args.random <= 0:
        raise CliInputError("--random needs a positive sample size")
    F = _field(args.q)
    if F.k != 1:
        raise CliInputError(f"sweeps enumerate over prime fields; q={args.q} is not prime")
    space = _space_for("sp", args.rank, F)

    request = {
        "command": "sweep",
        "space": {"kind": "symplectic", "rank": args.rank, "q": args.q},
        "mode": "exhaustive" if args.exhaustive else "random",
        "sample": args.random,
        "seed": args.seed,
        "budget": args.budget,
    }
    stored = None if args.no_cache else cache.load("sweep", request)
    cached = stored is not None
    if stored is None:
        try:
            rep = sweep_mod.run_sweep(
                space,
                exhaustive=args.exhaustive,
                sample=args.random,
                seed=args.seed,
                budget=args.budget,
                threads=args.threads,
                backend=args.backend,
            )
        except ValueError as e:
            raise CliInputError(str(e)) from e
        stored = rep.to_dict()
        if not args.no_cache:
            cache.store("sweep", request, stored)
    # the wall clock is reporting-only: everything under "result" is
    # canonical and repeats byte-for-byte for equal requests
    stored = dict(stored)
    wall = stored.pop("elapsed_seconds", None)
    payload = {"request": request, "result": stored, "wall_seconds": wall}

    _write_json(args.out, payload)
    if args.csv:
        _write_csv(args.csv, ["section", "key", "value"],
                   _sweep_csv_rows(payload["result"], wall))
    checks = payload["result"]["checks"]
    ok = all(checks.values())
    tag = " (cached)" if cached else ""
    print(
        f"sweep{tag}: {payload['result']['evaluated']} elements, "
        f"checks {'pass' if ok else 'FAIL'}",
        file=sys.stderr,
    )
    return EXIT_PASS if ok else EXIT_VIOLATION


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------


def cmd_verify(args) -> int:
    names = list(args.suites)
    if "all" in names:
        names = list(verify_mod.SUITES)
    for name in names:
        if name not in verify_mod.SUITES:
            raise CliInputError(
                f"unknown suite {name!r} (one of: all, {', '.join(verify_mod.SUITES)})"
            )
    results = []
    for name in names:
        request = {"command": "verify", "suite": name}
        res = None if args.no_cache else cache.load("verify", request)
        cached = res is not None
        if res is None:
            res = verify_mod.run_suite(name, threads=args.threads, backend=args.backend)
            if not args.no_cache and res["ok"]:
                cache.store("verify", request, res)
        res = dict(res, cached=cached)
        results.append(res)
        mark = "PASS" if res["ok"] else "FAIL"
        tag = " (cached)" if cached else ""
        print(f"{name}: {mark}{tag} ({res['elapsed_seconds']}s) -- {res['detail']}")
    npass = sum(r["ok"] for r in results)
    print(f"{npass}/{len(results)} suites passed")
    if args.out:
        _write_json(args.out, {"request": {"command": "verify", "suites": names},
                               "results": results})
    if args.csv:
        _write_csv(
            args.csv,
            ["suite", "ok", "elapsed_seconds"],
            [(r["suite"], "pass" if r["ok"] else "FAIL", r["elapsed_seconds"]) for r in results],
        )
    return EXIT_PASS if npass == len(results) else EXIT_VIOLATION


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def _add_common_report(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", help="also write a CSV summary here")
    p.add_argument("--no-cache", action="store_true", help="bypass the results cache")
    p.add_argument("--config", help="JSON file with default values; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polaris",
        description="finite classical polar spaces and opposition diagrams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list admissible diagrams for a family and rank")
    p.add_argument("family", help="A, B, C or D")
    p.add_argument("n", type=int, help="rank")
    p.add_argument("--closed-only", action="store_true", help="only polar-closed entries")
    p.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    p.add_argument("--out", help="write JSON output here (with --json)")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("oppdiagram", help="opposition diagram of a matrix on a space")
    p.add_argument("space_file", help="JSON space description")
    p.add_argument("matrix_file", help="JSON matrix description")
    p.add_argument("--seed", type=int, default=0, help="probe seed (default 0)")
    p.add_argument("--probes", type=int, default=512,
                   help="random probes per node before the exhaustive pass")
    p.add_argument("--corank", action="store_true", help="also compute the fixed-set corank")
    p.add_argument("--out", help="write the JSON result here instead of stdout")
    p.set_defaults(func=cmd_oppdiagram)

    p = sub.add_parser("construct", help="build an explicit automorphism, save as JSON")
    p.add_argument("name", choices=["central-elation", "homology-B", "homology-C",
                                    "torus", "symplectic-ffi", "hyperbolic-ffi",
                                    "hermitian-ffi", "baer"])
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--kind", default="sp",
                   help="space kind for kind-generic constructions (default sp)")
    p.add_argument("--i", type=int, help="index for the homology constructions")
    p.add_argument("--t", type=int, help="multiplier for the torus construction")
    p.add_argument("--a", type=int, default=1, help="root-group coefficient (default 1)")
    p.add_argument("--out", help="write the matrix file here instead of stdout")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("sweep", help="census a whole matrix group")
    p.add_argument("--sp", action="store_true", help="symplectic group Sp(2n, q)")
    p.add_argument("--q", type=int, required=True, help="field order (prime)")
    p.add_argument("--rank", type=int, required=True, help="polar rank n")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true", help="enumerate the whole group")
    mode.add_argument("--random", type=int, metavar="K", help="evaluate K seeded random elements")
    p.add_argument("--seed", type=int, default=0, help="seed for --random (default 0)")
    p.add_argument("--budget", type=int, default=sweep_mod._DEFAULT_BUDGET,
                   help="refuse exhaustive enumeration beyond this many elements")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker processes (default: available parallelism)")
    p.add_argument("--backend", choices=["python", "compiled"],
                   help="force a kernel backend (default: best available)")
    _add_common_report(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suites", nargs="+",
                   help="suite names, or 'all' (see --list in the README)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--backend", choices=["python", "compiled"])
    _add_common_report(p)
    p.set_defaults(func=cmd_verify)

    return parser


# keys that argparse treats as mutually exclusive: if the user picked any
# member on the command line, the whole group is dropped from the config
_EXCLUSIVE_GROUPS = [{"exhaustive", "random"}]


def _config_flags(cfg: dict, user_argv: list[str]) -> list[str]:
    """Turn a config dict into argv flags, skipping keys the user already set."""

    def user_set(key: str) -> bool:
        flag = "--" + key.replace("_", "-")
        return any(a == flag or a.startswith(flag + "=") for a in user_argv)

    out: list[str] = []
    for key in sorted(cfg):
        key = str(key)
        skip = (
            key == "config"
            or user_set(key)
            or any(
                key in group and any(user_set(k) for k in group)
                for group in _EXCLUSIVE_GROUPS
            )
        )
        if skip:
            continue
        val = cfg[key]
        if isinstance(val, bool):
            if val:
                out.append("--" + key.replace("_", "-"))
        else:
            out.extend(["--" + key.replace("_", "-"), str(val)])
    return out


def _config_path(argv: list[str]) -> str | None:
    for i, a in enumerate(argv):
        if a == "--config":
            if i + 1 >= len(argv):
                raise CliInputError("--config needs a file argument")
            return argv[i + 1]
        if a.startswith("--config="):
            return a.split("=", 1)[1]
    return None


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        # the config file must be folded in before argparse checks required
        # flags; config values sit before the user's flags, so the flags win
        cfg_path = _config_path(argv)
        if cfg_path is not None and argv and not argv[0].startswith("-"):
            cfg = _read_json(cfg_path)
            if not isinstance(cfg, dict):
                raise CliInputError(f"{cfg_path}: config must be a JSON object")
            argv = [argv[0]] + _config_flags(cfg, argv[1:]) + argv[1:]
        args = parser.parse_args(argv)
        return args.func(args)
    except CliInputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
