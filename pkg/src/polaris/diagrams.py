"""Opposition diagrams for collineations of thick classical buildings.

A diagram is recorded on the Dynkin diagram of the ambient type: a node
permutation ``pi`` (the type map the collineation induces) together with the
set of encircled orbits of ``sigma = pi_0 . pi``, where ``pi_0`` is the
opposition involution of the ambient diagram.  An encircled orbit marks the
types some simplex of which is mapped to an opposite simplex.  The symbol

    t X_{n;i}^j

abbreviates this: X_n the ambient type, i the number of encircled orbits,
t the order of sigma, and j a superscript separating the two shapes that can
occur for the same (X, n, i, t).  The twist prefix is printed only when
t >= 2, e.g. ``B5;4^1`` and ``2A4;2^1``.

``catalog(family, n)`` enumerates every diagram admissible for a large
building of the given type, including the rank-2 and triality shapes that no
matrix collineation of a classical polar space induces (flagged
``out_of_engine``).  The empty diagram appears exactly once per type.

``extraction(diagram)`` runs the reduction that decides polar closedness: as
long as some connected component of the not-yet-removed diagram has its
polar type fully encircled and forming a single sigma-orbit, that polar type
is removed and the component's highest root recorded.  The diagram is polar
closed iff the process ends with no circle left.  The recorded roots are the
ones whose root elations multiply to a collineation realizing the diagram.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .roots import Root, RootSystem

Perm = tuple[int, ...]  # p[i-1] = image of node i


def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def compose(p: Perm, q: Perm) -> Perm:
    """(p . q)(i) = p(q(i))"""
    return tuple(p[q[i] - 1] for i in range(len(p)))


def perm_orbits(p: Perm) -> frozenset[frozenset[int]]:
    n = len(p)
    seen: set[int] = set()
    orbits = []
    for start in range(1, n + 1):
        if start in seen:
            continue
        orb = {start}
        cur = p[start - 1]
        while cur != start:
            orb.add(cur)
            cur = p[cur - 1]
        seen |= orb
        orbits.append(frozenset(orb))
    return frozenset(orbits)


def pi0(family: str, n: int) -> Perm:
    """Opposition involution on the nodes of the ambient diagram."""
    if family == "A":
        return tuple(n + 1 - i for i in range(1, n + 1))
    if family == "D" and n % 2 == 1:
        out = list(range(1, n + 1))
        out[n - 2], out[n - 1] = n, n - 1
        return tuple(out)
    return identity_perm(n)


def _fork_swap(n: int) -> Perm:
    out = list(range(1, n + 1))
    out[n - 2], out[n - 1] = n, n - 1
    return tuple(out)


@dataclass(frozen=True)
class OppDiagram:
    """One admissible opposition diagram."""

    family: str
    n: int
    i: int
    j: int
    t: int
    orbits: frozenset[frozenset[int]]
    pi: Perm
    out_of_engine: bool = False

    def __post_init__(self):
        assert self.i == len(self.orbits)

    @property
    def sigma(self) -> Perm:
        return compose(pi0(self.family, self.n), self.pi)

    @property
    def nodes(self) -> frozenset[int]:
        """All encircled nodes."""
        out: set[int] = set()
        for orb in self.orbits:
            out |= orb
        return frozenset(out)

    @property
    def symbol(self) -> str:
        prefix = str(self.t) if self.t > 1 else ""
        return f"{prefix}{self.family}{self.n};{self.i}^{self.j}"

    @property
    def is_empty(self) -> bool:
        return self.i == 0

    @property
    def is_type_preserving(self) -> bool:
        return self.pi == identity_perm(self.n)

    def is_polar_closed(self) -> bool:
        return extraction(self).closed

    def __str__(self) -> str:
        return self.symbol

    def __repr__(self) -> str:
        return f"<OppDiagram {self.symbol} nodes={sorted(self.nodes)}>"


# --------------------------------------------------------------------------
# catalog
# --------------------------------------------------------------------------


def _entry(family, n, i, j, t, nodes, sigma, out_of_engine=False) -> OppDiagram:
    nodes = frozenset(nodes)
    all_orbits = perm_orbits(sigma)
    orbits = frozenset(o for o in all_orbits if o <= nodes)
    covered = set()
    for o in orbits:
        covered |= o
    assert covered == set(nodes), (
        f"encircled set {sorted(nodes)} is not sigma-stable for {family}{n};{i}^{j}"
    )
    pi = compose(pi0(family, n), sigma)  # pi0 is an involution: pi0 . sigma = pi
    return OppDiagram(family, n, i, j, t, orbits, pi, out_of_engine)


def catalog(family: str, n: int) -> list[OppDiagram]:
    """All admissible opposition diagrams for a large building of this type.

    Exactly one empty diagram per type.  Entries no collineation of a
    classical polar space induces (dualities of rank-2 symplectic spaces,
    trialities of D_4) carry ``out_of_engine=True``.
    """
    if family not in RootSystem.MIN_RANK:
        raise ValueError(f"unknown family {family!r}")
    if n < RootSystem.MIN_RANK[family]:
        raise ValueError(f"{family}_{n}: rank too small")
    ident = identity_perm(n)
    out: list[OppDiagram] = []

    if family == "A":
        flip = pi0("A", n)
        for i in range(0, n // 2 + 1):
            nodes = set()
            for k in range(1, i + 1):
                nodes |= {k, n + 1 - k}
            out.append(_entry("A", n, i, 1, 2 if n > 1 else 1, nodes, flip))
        if n % 2 == 1 and n >= 3:
            nodes = set(range(2, n, 2))
            out.append(_entry("A", n, (n - 1) // 2, 2, 1, nodes, ident))
        out.append(_entry("A", n, n, 1, 1, set(range(1, n + 1)), ident))

    elif family in ("B", "C"):
        for i in range(0, n + 1):
            out.append(_entry(family, n, i, 1, 1, set(range(1, i + 1)), ident))
        for i in range(1, n // 2 + 1):
            out.append(_entry(family, n, i, 2, 1, set(range(2, 2 * i + 1, 2)), ident))
        if n == 2:
            out.append(
                _entry(family, 2, 1, 1, 2, {1, 2}, (2, 1), out_of_engine=True)
            )

    else:  # D
        swap = _fork_swap(n)
        for i in range(0, n - 1):
            if i % 2 == n % 2:
                out.append(_entry("D", n, i, 1, 1, set(range(1, i + 1)), ident))
            elif i < n - 1:
                out.append(_entry("D", n, i, 1, 2, set(range(1, i + 1)), swap))
        out.append(_entry("D", n, n, 1, 1, set(range(1, n + 1)), ident))
        out.append(_entry("D", n, n - 1, 1, 2, set(range(1, n + 1)), swap))
        half = n // 2 if n % 2 == 0 else (n - 1) // 2
        sig = ident if n % 2 == 0 else swap
        t2 = 1 if n % 2 == 0 else 2
        for i in range(1, half):
            out.append(_entry("D", n, i, 2, t2, set(range(2, 2 * i + 1, 2)), sig))
        if n % 2 == 0:
            out.append(
                _entry("D", n, half, 2, 1, set(range(2, n - 1, 2)) | {n}, ident)
            )
        else:
            out.append(
                _entry("D", n, half, 2, 2, set(range(2, n - 2, 2)) | {n - 1, n}, swap)
            )
        if n == 4:
            tri = (3, 2, 4, 1)  # a triality: 1 -> 3 -> 4 -> 1
            out.append(_entry("D", 4, 1, 2, 3, {1, 3, 4}, tri, out_of_engine=True))
            out.append(
                _entry("D", 4, 2, 1, 3, {1, 2, 3, 4}, tri, out_of_engine=True)
            )
    return out


def empty_diagram(family: str, n: int) -> OppDiagram:
    (d,) = [d for d in catalog(family, n) if d.is_empty]
    return d


def match_catalog(
    family: str, n: int, orbits: frozenset[frozenset[int]], sigma: Perm
) -> OppDiagram | None:
    """The catalog entry with exactly these encircled orbits and this sigma."""
    hits = [d for d in catalog(family, n) if d.orbits == orbits and d.sigma == sigma]
    assert len(hits) <= 1
    return hits[0] if hits else None


_SYMBOL_RE = re.compile(r"^([123])?([ABCD])(\d+);(\d+)\^([12])$")


def parse_symbol(s: str) -> OppDiagram:
    """Parse a symbol like ``B5;4^1`` / ``2A4;2^1`` against the catalog.

    Without the twist prefix the least admissible twist is taken, so the
    rank-2 duality and triality shapes need their explicit prefix.
    """
    m = _SYMBOL_RE.match(s.strip())
    if not m:
        raise ValueError(f"malformed diagram symbol {s!r}")
    t_str, family, n_str, i_str, j_str = m.groups()
    n, i, j = int(n_str), int(i_str), int(j_str)
    cands = [d for d in catalog(family, n) if d.i == i and d.j == j]
    if t_str is not None:
        cands = [d for d in cands if d.t == int(t_str)]
    if not cands:
        raise ValueError(f"{s!r} is not an admissible opposition diagram")
    return min(cands, key=lambda d: d.t)


# --------------------------------------------------------------------------
# polar closedness via extraction
# --------------------------------------------------------------------------


@dataclass
class ExtractionResult:
    closed: bool
    roots: list[Root]
    steps: list[tuple[frozenset[int], frozenset[int]]] = field(default_factory=list)
    leftover: frozenset[int] = frozenset()


def _components(nodes: set[int], adj: dict[int, set[int]]) -> list[frozenset[int]]:
    comps = []
    todo = set(nodes)
    while todo:
        start = min(todo)
        comp = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for w in adj[v]:
                if w in todo and w not in comp:
                    comp.add(w)
                    frontier.append(w)
        todo -= comp
        comps.append(frozenset(comp))
    return comps


def _polar_type(family: str, n: int, comp: frozenset[int], adj) -> frozenset[int]:
    """The polar type of a connected component of the surviving diagram.

    For a path the polar type sits at the extremities (single-node for the
    B/C end components, where the polar space is the one of the smaller
    building of the same kind).  For a fork component it is the second node
    along the long path.
    """
    if family in ("B", "C") and n in comp:
        if len(comp) == 1:
            return frozenset({n})
        a = min(comp)
        return frozenset({a + 1}) if family == "B" else frozenset({a})
    if family == "D" and {n - 2, n - 1, n} <= comp and min(comp) <= n - 3:
        return frozenset({min(comp) + 1})
    if len(comp) == 1:
        return frozenset(comp)
    ends = {v for v in comp if len(adj[v] & comp) == 1}
    assert len(ends) == 2, f"component {sorted(comp)} is not a path"
    return frozenset(ends)


def _sigma_orbit(sigma: Perm, x: int) -> frozenset[int]:
    orb = {x}
    cur = sigma[x - 1]
    while cur != x:
        orb.add(cur)
        cur = sigma[cur - 1]
    return frozenset(orb)


def extraction(diagram: OppDiagram, order: list[int] | None = None) -> ExtractionResult:
    """Run the polar-type extraction on a diagram.

    At each step a connected component of the surviving diagram may shed its
    polar type provided the polar type is entirely encircled and is exactly
    one sigma-orbit; the component's highest root is recorded.  The diagram
    is polar closed iff some (equivalently: every -- the steps touch
    disjoint components, so applicability is monotone) run removes all
    circles.  ``order`` optionally forces which applicable component (keyed
    by its minimum node) to reduce first, for order-independence testing.
    """
    family, n = diagram.family, diagram.n
    rs = RootSystem(family, n)
    adj = rs.adjacency()
    sigma = diagram.sigma
    remaining = set(range(1, n + 1))
    circles = set(diagram.nodes)
    roots: list[Root] = []
    steps: list[tuple[frozenset[int], frozenset[int]]] = []
    forced = list(order) if order else None

    while True:
        applicable = []
        for comp in _components(remaining, adj):
            polar = _polar_type(family, n, comp, adj)
            if not polar <= circles:
                continue
            if _sigma_orbit(sigma, min(polar)) != polar:
                continue
            applicable.append((comp, polar))
        if not applicable:
            break
        applicable.sort(key=lambda cp: min(cp[0]))
        chosen = applicable[0]
        if forced:
            want = forced[0]
            for comp, polar in applicable:
                if min(comp) == want:
                    chosen = (comp, polar)
                    forced.pop(0)
                    break
        comp, polar = chosen
        roots.append(rs.highest_root_of_support(comp))
        steps.append((comp, polar))
        remaining -= polar
        circles -= polar
    return ExtractionResult(
        closed=not circles, roots=roots, steps=steps, leftover=frozenset(circles)
    )
