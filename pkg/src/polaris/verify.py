"""Verification suites: the library's headline invariants, run end to end.

Each suite checks one family of results at desk scale and returns a plain
dict (name, ok, elapsed, detail, data).  The suites are what the ``verify``
CLI subcommand and the acceptance tests run; they only use public library
entry points.
"""

from __future__ import annotations

import time
import traceback

import numpy as np

from . import sweep as sweep_mod
from .constructors import (
    SearchExhausted,
    baer_involution,
    generic_unipotent,
    hermitian_ffi,
    homology_B,
    homology_C,
    hyperbolic_ffi,
    is_central_elation,
    root_elation,
    symplectic_ffi,
    torus_element,
)
from .diagrams import catalog
from .engine import (
    chamber_distance_matrix,
    chambers_opposite,
    fixed_line_geometry,
    opposition_diagram,
    subfield_fixed_report,
)
from .gf import GF
from .roots import RootSystem
from .spaces import (
    hermitian_space,
    hyperbolic_space,
    parabolic_space,
    symplectic_space,
)


def closed_form_polar_closed(d) -> bool:
    """The closed-form description of the polar-closed catalog entries.

    A family: exactly the paired-orbit series (plus the degenerate rank-1
    building, whose lone node is its own polar node).  C family: the
    superscript-1 series.  B family: superscript-1 entries with odd index
    below the rank are the only exclusions.  D family: superscript-1
    entries with odd index are excluded (at index n this is the variant
    with singleton orbits, which needs the fork-swapping type map).
    Entries no collineation induces are never polar closed.
    """
    if d.is_empty:
        return True
    if d.out_of_engine:
        return False
    if d.family == "A":
        return d.t == 2 or d.n == 1
    if d.family == "C":
        return d.j == 1
    if d.family == "B":
        return not (d.j == 1 and d.i % 2 == 1 and d.i < d.n)
    return not (d.j == 1 and d.i % 2 == 1)


def suite_closed_form_list(threads=1, backend=None):
    total = 0
    for fam, lo in RootSystem.MIN_RANK.items():
        for n in range(lo, 9):
            for d in catalog(fam, n):
                total += 1
                if d.is_polar_closed() != closed_form_polar_closed(d):
                    return False, f"{d.symbol}: extraction disagrees with the closed form", None
    return True, f"{total} catalog diagrams, families A/B/C/D, ranks up to 8", {"diagrams": total}


_UNIPOTENT_SPACES = [
    ("C", symplectic_space, (2, 3, 4)),
    ("B", parabolic_space, (2, 3, 4)),
    ("D", hyperbolic_space, (4,)),
]


def suite_polarclosed_unipotents(threads=1, backend=None):
    runs = 0
    failures = []
    for q in (2, 3):
        F = GF(q)
        for fam, factory, ranks in _UNIPOTENT_SPACES:
            for n in ranks:
                space = factory(n, F)
                for d in catalog(fam, n):
                    if not (d.is_polar_closed() and d.is_type_preserving):
                        continue
                    runs += 1
                    theta = generic_unipotent(space, d)
                    res = opposition_diagram(space, theta)
                    if res.symbol != d.symbol:
                        failures.append(f"{fam}{n} q={q}: {d.symbol} -> {res.symbol}")
    if failures:
        return False, "; ".join(failures[:4]), {"failures": failures}
    return True, f"{runs} generic-unipotent round trips, ranks 2-4, q in {{2,3}}", {"runs": runs}


def suite_central_elations(threads=1, backend=None):
    checked = []
    for n in (3, 4):
        for q in (2, 3):
            space = symplectic_space(n, GF(q))
            phi = RootSystem("C", n).highest_root.vector
            theta = root_elation(space, phi, 1)
            res = opposition_diagram(space, theta)
            flag, center = is_central_elation(space, theta)
            want = f"C{n};1^1"
            if res.symbol != want or not flag or center is None:
                return False, f"C{n} q={q}: got {res.symbol}, central={flag}", None
            checked.append(f"C{n}(q={q})")
    return True, "x_phi(1) gives " + ", ".join(f"C{n};1^1" for n in (3, 4)) + " at q=2,3 with a certified center", {"cases": checked}


def suite_attained_classical(threads=1, backend=None):
    F3, F5 = GF(3), GF(5)
    for n in (3, 4):
        for i in range(1, n):
            space = parabolic_space(n, F3)
            res = opposition_diagram(space, homology_B(n, i, F3))
            if res.symbol != f"B{n};{i}^1":
                return False, f"homology_B({n},{i}) -> {res.symbol}", None
    for n in (3, 4):
        for i in range(1, n // 2 + 1):
            space = symplectic_space(n, F3)
            res = opposition_diagram(space, homology_C(n, i, F3))
            if res.symbol != f"C{n};{i}^2":
                return False, f"homology_C({n},{i}) -> {res.symbol}", None
    space = symplectic_space(3, F5)
    res = opposition_diagram(space, torus_element(space, 2))
    if res.symbol != "C3;2^1":
        return False, f"torus element over GF(5) -> {res.symbol}", None
    return True, "homology_B -> B_(n;i)^1, homology_C -> C_(n;i)^2 over GF(3); rank-one torus over GF(5) -> C3;2^1", None


def suite_sweep_sp4q3(threads=1, backend=None):
    rep = sweep_mod.run_sweep(
        symplectic_space(2, GF(3)), exhaustive=True, threads=threads, backend=backend
    )
    ok = rep.group_order == 51840 and rep.all_checks_pass
    detail = f"51,840 elements; census {rep.census}; checks {rep.checks}"
    return ok, detail, rep.to_dict()


def suite_sweep_sp6q2(threads=1, backend=None):
    rep = sweep_mod.run_sweep(
        symplectic_space(3, GF(2)), exhaustive=True, threads=threads, backend=backend
    )
    # the required invariant is nonemptiness; the census (and any uncapped
    # raw node sets) is emitted as data either way
    ok = (
        rep.group_order == 1451520
        and rep.checks["nonempty"]
        and rep.checks["trivial_center"]
    )
    detail = f"1,451,520 elements; census {rep.census}; uncapped {rep.uncapped or 'none'}"
    return ok, detail, rep.to_dict()


def suite_class3_constructions(threads=1, backend=None):
    data = {}
    sp = symplectic_space(4, GF(3))
    th = symplectic_ffi(4, GF(3))
    res = opposition_diagram(sp, th)
    geo = fixed_line_geometry(sp, th)
    data["symplectic"] = {"symbol": res.symbol, "class": res.classification,
                          "fixed": res.fixed_point_count, **geo}
    ok = (
        res.symbol == "C4;2^2"
        and res.classification == "III"
        and res.fixed_point_count == 0
        and geo["derived_points"] == 820
        and geo["pairwise_disjoint"]
        and geo["one_or_all"]
    )

    spD = hyperbolic_space(4, GF(2))
    thD = hyperbolic_ffi(4, GF(2))
    resD = opposition_diagram(spD, thD)
    geoD = fixed_line_geometry(spD, thD)
    data["hyperbolic"] = {"symbol": resD.symbol, "class": resD.classification,
                          "fixed": resD.fixed_point_count, **geoD}
    ok = ok and (
        resD.symbol == "D4;2^2"
        and resD.classification == "III"
        and geoD["derived_points"] == 45
        and geoD["one_or_all"]
    )

    try:
        thH = hermitian_ffi(4, GF(4))
        spH = hermitian_space(4, GF(4))
        resH = opposition_diagram(spH, thH)
        data["hermitian"] = {"symbol": resH.symbol, "class": resH.classification}
        ok = ok and resH.symbol == "B4;2^2" and resH.classification == "III"
        herm = f"found: {resH.symbol}"
    except SearchExhausted as e:
        data["hermitian"] = {"search_exhausted": str(e), "report": e.report}
        herm = f"search exhausted over {len(e.report)} multipliers (documented)"

    detail = (
        f"W(7,3): {res.symbol}/{res.classification}, derived geometry "
        f"{geo['derived_points']} pts x {geo['derived_lines']} lines, one-or-all "
        f"{geo['one_or_all']}; O+(8,2): {resD.symbol}, {geoD['derived_points']} derived pts; "
        f"H(7,4): {herm}"
    )
    return ok, detail, data


def suite_corank_roundtrip(threads=1, backend=None):
    F3 = GF(3)
    cases = []
    for n in (3, 4):
        for i in range(1, n):
            space = parabolic_space(n, F3)
            res = opposition_diagram(space, homology_B(n, i, F3), with_corank=True)
            cases.append((n, i, res.corank))
            if res.corank != i:
                return False, f"homology_B({n},{i}): corank {res.corank}", None
    return True, f"corank of the fixed structure equals the diagram index on {len(cases)} class-I homologies", {"cases": cases}


def suite_chamber_oracle(threads=1, backend=None):
    space = symplectic_space(2, GF(2))
    chambers, dist = chamber_distance_matrix(space)
    diam = int(dist.max())
    agree = 0
    for a in range(len(chambers)):
        for b in range(len(chambers)):
            far = dist[a, b] == diam
            comp = chambers_opposite(space, chambers[a], chambers[b])
            if far != comp:
                return False, f"chambers {chambers[a]} / {chambers[b]} disagree", None
            agree += 1
    return True, f"{len(chambers)} chambers, {agree} ordered pairs, graph diameter {diam}", {"chambers": len(chambers), "diameter": diam}


def suite_baer_involution(threads=1, backend=None):
    space = hermitian_space(3, GF(4))
    theta = baer_involution(3, GF(4))
    res = opposition_diagram(space, theta)
    rep = subfield_fixed_report(space, theta)
    ok = (
        res.is_point_domestic
        and res.fixed_point_count == 63
        and rep["fixed_points"] == 63
        and rep["one_or_all"]
        and rep["max_fixed_singular_dim"] == 2
        and rep["restricted_line_sizes"] == [3]
    )
    detail = (
        f"diagram {res.symbol}, point-domestic, 63 fixed points; restricted geometry: "
        f"{rep['restricted_line_count']} lines of size 3, singular rank 3, one-or-all passes"
    )
    return ok, detail, {"diagram": res.symbol, **rep}


SUITES = {
    "closed-form-list": suite_closed_form_list,
    "polarclosed-unipotents": suite_polarclosed_unipotents,
    "central-elations": suite_central_elations,
    "attained-classical": suite_attained_classical,
    "sweep-sp4q3": suite_sweep_sp4q3,
    "sweep-sp6q2": suite_sweep_sp6q2,
    "class3-constructions": suite_class3_constructions,
    "corank-roundtrip": suite_corank_roundtrip,
    "chamber-oracle": suite_chamber_oracle,
    "baer-involution": suite_baer_involution,
}


def run_suite(name: str, *, threads: int = 1, backend: str | None = None) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r} (one of {', '.join(SUITES)})")
    t0 = time.monotonic()
    try:
        ok, detail, data = SUITES[name](threads=threads, backend=backend)
    except Exception:
        ok, detail, data = False, traceback.format_exc(limit=3), None
    return {
        "suite": name,
        "ok": bool(ok),
        "elapsed_seconds": round(time.monotonic() - t0, 3),
        "detail": detail,
        "data": data,
    }


def run_all(names=None, *, threads: int = 1, backend: str | None = None) -> list[dict]:
    return [
        run_suite(n, threads=threads, backend=backend)
        for n in (names or list(SUITES))
    ]
