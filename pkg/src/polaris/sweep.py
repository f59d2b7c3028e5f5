"""Exhaustive and sampled sweeps of symplectic groups over prime fields.

The sweep enumerates Sp(2n, p) by breadth-first closure of the simple root
elations, then evaluates every element's opposition data with the kernel
backend (compiled or numpy): a bitmask of encircled nodes and the fixed
point count.  Rank 2 and 3 are supported, which keeps every table —
pairwise opposition of points/lines/planes, joining-line and spanning-
plane lookups — small enough to precompute once.

The report aggregates a census of diagram symbols, a census of the coarse
classes (identity / I / II / III / not domestic), any raw encircled sets
matching no catalog row, witnesses, and these structural invariants,
checked on every element:

  nonempty      every nontrivial element has a nonempty diagram
  capped        every diagram matches a catalog symbol
  unipotent     p-power-order elements have polar-closed diagrams
  homology      rank 2, odd p: an element with diagram C2;1^2 and a fixed
                point is an (I2,-I2)-homology
  joins_fixed   point-domestic elements fix the join of every moved point
                and its image
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from multiprocessing import get_context

import numpy as np

from . import backend as backend_mod
from .collineation import is_homology_pattern
from .constructors import root_elation
from .diagrams import identity_perm, match_catalog
from .roots import RootSystem
from .spaces import PolarSpace

_DEFAULT_BUDGET = 2_000_000
_CHUNK = 4096

KNOWN_GROUP_ORDERS = {("C", 2, 3): 51840, ("C", 3, 2): 1451520, ("C", 2, 2): 720}


# --------------------------------------------------------------------------
# group enumeration
# --------------------------------------------------------------------------


def chevalley_generators(space: PolarSpace) -> list[np.ndarray]:
    """x_{±α}(1) for the simple roots α — a generating set of the group."""
    rs = RootSystem(space.family, space.n)
    gens = []
    for s in rs.simple:
        for sign in (1, -1):
            vec = tuple(sign * int(x) for x in s)
            gens.append(root_elation(space, vec, 1))
    return gens


def _pack_weights(q: int, N: int) -> np.ndarray:
    w = q ** np.arange(N * N, dtype=np.int64)
    assert float(q) ** (N * N) < 2**62, "matrix key would overflow int64"
    return w


def enumerate_group(
    space: PolarSpace, budget: int = _DEFAULT_BUDGET, generators=None
) -> np.ndarray:
    """All elements of the group generated by the simple root elations,
    (B, N, N) uint8, in deterministic breadth-first order (identity first)."""
    F = space.F
    if F.k != 1:
        raise ValueError("group sweeps run over prime fields")
    N = space.ambient_dim
    gens = chevalley_generators(space) if generators is None else list(generators)
    G = np.stack(gens).astype(np.int16)
    weights = _pack_weights(F.q, N)

    def pack(batch: np.ndarray) -> np.ndarray:
        return batch.reshape(len(batch), -1).astype(np.int64) @ weights

    eye = np.eye(N, dtype=np.uint8)
    elements: list[np.ndarray] = [eye]
    seen = {int(pack(eye[None])[0])}
    frontier = eye[None]
    while len(frontier):
        fresh: list[np.ndarray] = []
        for lo in range(0, len(frontier), 1 << 14):
            block = frontier[lo : lo + (1 << 14)].astype(np.int16)
            prods = np.einsum("bij,gjk->bgik", block, G) % F.p
            prods = prods.reshape(-1, N, N).astype(np.uint8)
            for m, key in zip(prods, pack(prods)):
                key = int(key)
                if key not in seen:
                    if len(seen) >= budget:
                        raise ValueError(
                            f"group closure exceeded the budget of {budget} elements"
                        )
                    seen.add(key)
                    fresh.append(m)
        elements.extend(fresh)
        frontier = np.stack(fresh) if fresh else np.zeros((0, N, N), np.uint8)
    out = np.stack(elements)
    known = KNOWN_GROUP_ORDERS.get((space.family, space.n, F.q))
    assert known is None or len(out) == known, (len(out), known)
    return out


def sample_elements(
    space: PolarSpace, k: int, seed: int = 0, length: int = 32, generators=None
) -> np.ndarray:
    """k pseudorandom group elements: seeded random generator words."""
    F = space.F
    N = space.ambient_dim
    gens = chevalley_generators(space) if generators is None else list(generators)
    G = np.stack(gens).astype(np.int16)
    rng = np.random.default_rng(seed)
    cur = np.broadcast_to(np.eye(N, dtype=np.uint8), (k, N, N)).copy()
    for _ in range(length):
        pick = rng.integers(0, len(G), size=k)
        for g in range(len(G)):
            rows = pick == g
            if rows.any():
                prod = cur[rows].astype(np.int16) @ G[g]
                cur[rows] = (prod % F.p).astype(np.uint8)
    return cur


# --------------------------------------------------------------------------
# kernel tables
# --------------------------------------------------------------------------


def _det2(M: np.ndarray, p: int) -> np.ndarray:
    return (M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]) % p


def _det3(M: np.ndarray, p: int) -> np.ndarray:
    a, b, c = M[..., 0, 0], M[..., 0, 1], M[..., 0, 2]
    d, e, f = M[..., 1, 0], M[..., 1, 1], M[..., 1, 2]
    g, h, i = M[..., 2, 0], M[..., 2, 1], M[..., 2, 2]
    return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % p


def space_tables(space: PolarSpace) -> dict:
    """Everything census_chunk needs, precomputed once per space."""
    F = space.F
    if F.k != 1:
        raise ValueError("sweep tables assume a prime field")
    if space.n not in (2, 3):
        raise ValueError("sweeps are implemented for rank 2 and 3")
    p = F.p
    N = space.ambient_dim
    P = space.points
    npts = len(P)
    powq = p ** np.arange(N - 1, -1, -1, dtype=np.int64)

    vec_lut = np.full(p**N, -1, dtype=np.int32)
    for c in range(1, p):
        scaled = F.mul_table[c, P]
        vec_lut[scaled.astype(np.int64) @ powq] = np.arange(npts)

    G = space.gram.astype(np.int64)
    prods = P.astype(np.int64) @ G @ P.astype(np.int64).T % p
    opp_pt = (prods != 0).astype(np.uint8)

    lidx, lbases = space.subspace_arrays(1)
    LB = lbases.astype(np.int64)
    LG = LB @ G % p
    pair = np.einsum("ikn,jmn->ijkm", LG, LB) % p
    opp_line = (_det2(pair, p) != 0).astype(np.uint8)
    line_through = space.line_through_table().astype(np.int32).reshape(-1)

    if space.n == 3:
        tidx, tbases = space.subspace_arrays(2)
        TB = tbases.astype(np.int64)
        TG = TB @ G % p
        tpair = np.einsum("ikn,jmn->ijkm", TG, TB) % p
        opp_plane = (_det3(tpair, p) != 0).astype(np.uint8)
        LP = space.line_point_table()
        line_sets = [set(map(int, row)) for row in LP]
        lt2 = space.line_through_table()
        plane_through = np.full(npts**3, -1, dtype=np.int32)
        spans = space.point_indices_of_spans(tbases)
        for pl in range(len(tbases)):
            pts = list(map(int, spans[pl]))
            for a in pts:
                for b in pts:
                    if b == a:
                        continue
                    lab = lt2[a, b]
                    for c in pts:
                        if c == a or c == b or c in line_sets[lab]:
                            continue
                        plane_through[(a * npts + b) * npts + c] = pl
        tri = tidx.astype(np.int32)
    else:
        tri = np.zeros((0, 3), dtype=np.int32)
        plane_through = np.zeros(0, dtype=np.int32)
        opp_plane = np.zeros((0, 0), dtype=np.uint8)

    return {
        "p": p,
        "P": np.ascontiguousarray(P),
        "powq": powq,
        "vec_lut": vec_lut,
        "line_a": lidx[:, 0].astype(np.int32).copy(),
        "line_b": lidx[:, 1].astype(np.int32).copy(),
        "line_through": line_through,
        "opp_pt": np.ascontiguousarray(opp_pt),
        "opp_line": np.ascontiguousarray(opp_line),
        "tri": np.ascontiguousarray(tri),
        "plane_through": plane_through,
        "opp_plane": np.ascontiguousarray(opp_plane),
    }


def _kernel_args(tables: dict) -> tuple:
    return (
        tables["p"],
        tables["P"],
        tables["powq"],
        tables["vec_lut"],
        tables["line_a"],
        tables["line_b"],
        tables["line_through"],
        tables["opp_pt"],
        tables["opp_line"],
        tables["tri"],
        tables["plane_through"],
        tables["opp_plane"],
    )


# --------------------------------------------------------------------------
# evaluation
# --------------------------------------------------------------------------

_FORK_CTX: dict = {}


def _eval_range(args):
    lo, hi = args
    kern = _FORK_CTX["kernel"]
    elements = _FORK_CTX["elements"]
    kargs = _FORK_CTX["kargs"]
    encs, fixes = [], []
    for start in range(lo, hi, _CHUNK):
        A = np.ascontiguousarray(elements[start : min(start + _CHUNK, hi)])
        e, f = kern.census_chunk(A, *kargs)
        encs.append(e)
        fixes.append(f)
    return np.concatenate(encs), np.concatenate(fixes)


def evaluate_elements(
    space: PolarSpace,
    elements: np.ndarray,
    *,
    threads: int = 1,
    backend: str | None = None,
    tables: dict | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(encircled bitmask, fixed point count) per element."""
    tables = space_tables(space) if tables is None else tables
    kern = backend_mod.get_backend(backend)
    kargs = _kernel_args(tables)
    B = len(elements)
    if threads <= 1 or B < 4 * _CHUNK:
        _FORK_CTX.update(kernel=kern, elements=elements, kargs=kargs)
        return _eval_range((0, B))
    _FORK_CTX.update(kernel=kern, elements=elements, kargs=kargs)
    step = -(-B // threads)
    ranges = [(lo, min(lo + step, B)) for lo in range(0, B, step)]
    with get_context("fork").Pool(processes=threads) as pool:
        parts = pool.map(_eval_range, ranges)
    enc = np.concatenate([p[0] for p in parts])
    fixed = np.concatenate([p[1] for p in parts])
    return enc, fixed


def p_power_order_mask(space: PolarSpace, elements: np.ndarray) -> np.ndarray:
    """Which elements have order a power of the characteristic.  Over a
    prime field these are exactly the unipotent elements, detected by
    A^(p^e) = 1 for the least p^e >= N (a Jordan block of size <= N dies
    by then)."""
    F = space.F
    N = space.ambient_dim
    e = 1
    while F.p**e < N:
        e += 1
    out = np.empty(len(elements), dtype=bool)
    eye = np.eye(N, dtype=np.int64)
    for lo in range(0, len(elements), 1 << 16):
        M = elements[lo : lo + (1 << 16)].astype(np.int64)
        for _ in range(e):
            acc = M
            for _ in range(F.p - 1):
                acc = np.einsum("bij,bjk->bik", acc, M) % F.p
            M = acc
        out[lo : lo + (1 << 16)] = (M == eye[None]).all(axis=(1, 2))
    return out


# --------------------------------------------------------------------------
# census assembly
# --------------------------------------------------------------------------


def pattern_table(space: PolarSpace) -> dict[int, dict]:
    """Encircled-bitmask -> diagram data for every possible mask."""
    n = space.n
    sigma = identity_perm(n)
    out = {}
    for bits in range(1 << n):
        nodes = [d + 1 for d in range(n) if bits >> d & 1]
        orbits = frozenset(frozenset({k}) for k in nodes)
        diag = match_catalog(space.family, n, orbits, sigma)
        alias = None
        alias_closed = False
        if space.F.q % 2 == 0:
            sibling = "C" if space.family == "B" else "B"
            adiag = match_catalog(sibling, n, orbits, sigma)
            if adiag:
                alias = adiag.symbol
                alias_closed = adiag.is_polar_closed()
        out[bits] = {
            "nodes": nodes,
            "symbol": diag.symbol if diag else None,
            "alias": alias,
            "polar_closed": diag.is_polar_closed() if diag else False,
            "alias_polar_closed": alias_closed,
        }
    return out


@dataclass
class SweepReport:
    space: dict
    mode: str
    group_order: int
    evaluated: int
    seed: int | None
    backend: str
    threads: int
    census: dict[str, int]
    class_census: dict[str, int]
    uncapped: dict[str, int]
    witnesses: dict[str, int]
    checks: dict[str, bool]
    elapsed: float
    alias_symbols: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "mode": self.mode,
            "group_order": self.group_order,
            "evaluated": self.evaluated,
            "seed": self.seed,
            "backend": self.backend,
            "threads": self.threads,
            "census": self.census,
            "class_census": self.class_census,
            "uncapped": self.uncapped,
            "witnesses": self.witnesses,
            "checks": self.checks,
            "alias_symbols": self.alias_symbols,
            "elapsed_seconds": round(self.elapsed, 3),
        }

    @property
    def all_checks_pass(self) -> bool:
        return all(self.checks.values())


def _class_of(bits: int, nfix: int, npts: int, full: int) -> str:
    if bits == 0 and nfix == npts:
        return "identity"
    if bits == full:
        return "not domestic"
    if bits & 1:
        return "I"
    return "II" if nfix > 0 else "III"


def run_sweep(
    space: PolarSpace,
    *,
    exhaustive: bool = True,
    sample: int | None = None,
    seed: int | None = None,
    budget: int = _DEFAULT_BUDGET,
    threads: int = 1,
    backend: str | None = None,
    elements: np.ndarray | None = None,
) -> SweepReport:
    """Sweep the symplectic group of the space and aggregate the census.

    `exhaustive` enumerates the whole group (within `budget`); otherwise
    `sample` seeded pseudorandom elements are evaluated.
    """
    t0 = time.monotonic()
    F = space.F
    if elements is None:
        if exhaustive:
            elements = enumerate_group(space, budget=budget)
            mode = "exhaustive"
        else:
            if not sample:
                raise ValueError("need a sample size for a non-exhaustive sweep")
            elements = sample_elements(space, sample, seed=seed or 0)
            mode = "random"
    else:
        mode = "given"
    tables = space_tables(space)
    enc, fixed = evaluate_elements(
        space, elements, threads=threads, backend=backend, tables=tables
    )
    kern = backend_mod.get_backend(backend)
    backend_name = "compiled" if kern is not backend_mod.get_backend("python") else "python"

    npts = space.num_points
    n = space.n
    full = (1 << n) - 1
    patterns = pattern_table(space)

    census: dict[str, int] = {}
    uncapped: dict[str, int] = {}
    witnesses: dict[str, int] = {}
    alias_symbols: dict[str, str] = {}
    class_census: dict[str, int] = {}
    counts = np.bincount(enc, minlength=1 << n)
    ident_mask = (enc == 0) & (fixed == npts)
    for bits in range(1 << n):
        c = int(counts[bits])
        if c == 0:
            continue
        info = patterns[bits]
        sym = info["symbol"]
        if bits == 0:
            # split the empty pattern into the identity and any violators
            n_id = int(ident_mask.sum())
            if n_id:
                census[sym] = n_id
            if c - n_id:
                uncapped["nodes:"] = c - n_id
        elif sym is None:
            uncapped["nodes:" + ",".join(map(str, info["nodes"]))] = c
        else:
            census[sym] = c
            if info["alias"]:
                alias_symbols[sym] = info["alias"]
        first = int(np.nonzero(enc == bits)[0][0])
        witnesses[sym or ("nodes:" + ",".join(map(str, info["nodes"])))] = first

    for bits, nfix in zip(enc, fixed):
        tag = _class_of(int(bits), int(nfix), npts, full)
        class_census[tag] = class_census.get(tag, 0) + 1

    checks: dict[str, bool] = {}
    # an element acting trivially on every point is scalar (the center);
    # "nontrivial" below always means nontrivial as a collineation
    eyeN = np.eye(space.ambient_dim, dtype=np.uint8)
    scalar_ok = True
    for i in np.nonzero(ident_mask)[0]:
        A = elements[i]
        scalar_ok = scalar_ok and bool(
            (A == F.mul_table[A[0, 0], eyeN]).all() and A[0, 0] != 0
        )
    checks["trivial_center"] = scalar_ok
    checks["nonempty"] = bool(((enc != 0) | ident_mask).all())
    checks["capped"] = not uncapped

    # in even characteristic the two coincident buildings (B_n and C_n)
    # both interpret the element; closure in either one counts
    unip = p_power_order_mask(space, elements) & ~ident_mask
    checks["unipotent_polar_closed"] = bool(
        all(
            patterns[int(b)]["polar_closed"] or patterns[int(b)]["alias_polar_closed"]
            for b in np.unique(enc[unip])
        )
    )

    if n == 2 and F.p % 2 == 1:
        mask = (enc == 0b10) & (fixed > 0)
        ok = True
        for i in np.nonzero(mask)[0]:
            ok = ok and is_homology_pattern(F, elements[i], 2, 2)
        checks["homology"] = ok

    checks["joins_fixed"] = _check_joins_fixed(
        space, elements, enc, tables, backend=backend
    )

    return SweepReport(
        space=space.descriptor(),
        mode=mode,
        group_order=len(elements) if mode == "exhaustive" else 0,
        evaluated=len(elements),
        seed=seed,
        backend=backend_name,
        threads=threads,
        census=census,
        class_census=class_census,
        uncapped=uncapped,
        witnesses=witnesses,
        checks=checks,
        alias_symbols=alias_symbols,
        elapsed=time.monotonic() - t0,
    )


def _check_joins_fixed(space, elements, enc, tables, backend=None) -> bool:
    """Point-domestic elements fix the join of each moved point with its
    image (the fixed-join invariant)."""
    kern = backend_mod.get_backend(backend)
    sub = np.nonzero((enc & 1) == 0)[0]
    if len(sub) == 0:
        return True
    npts = space.num_points
    lt = tables["line_through"].reshape(npts, npts)
    la, lb = tables["line_a"], tables["line_b"]
    ar = np.arange(npts)
    ok = True
    for lo in range(0, len(sub), _CHUNK):
        rows = sub[lo : lo + _CHUNK]
        A = np.ascontiguousarray(elements[rows])
        perms = kern.point_perm_chunk(
            A, tables["p"], tables["P"], tables["powq"], tables["vec_lut"]
        )
        moved = perms != ar[None, :]
        joins = lt[ar[None, :], perms]
        if not (joins[moved] >= 0).all():
            return False  # a moved point opposite its image: not point-domestic
        limg = lt[perms[:, la], perms[:, lb]]
        line_fixed = limg == np.arange(len(la))[None, :]
        safe = np.where(moved, joins, 0)
        ok = ok and bool(
            (line_fixed[np.arange(len(rows))[:, None], safe] | ~moved).all()
        )
    return ok
