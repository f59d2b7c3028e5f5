"""Crystallographic root systems of types A, B, C, D in their standard
coordinates.

Simple roots follow the usual Bourbaki numbering:

* A_n  (in Z^(n+1)):  alpha_i = e_i - e_(i+1)
* B_n  (in Z^n):      alpha_i = e_i - e_(i+1)  (i < n),  alpha_n = e_n
* C_n  (in Z^n):      alpha_i = e_i - e_(i+1)  (i < n),  alpha_n = 2 e_n
* D_n  (in Z^n):      alpha_i = e_i - e_(i+1)  (i < n),  alpha_n = e_(n-1) + e_n

All roots are generated by closing the simple roots under the simple
reflections; each root carries both its ambient integer vector and its
(integer) coordinate vector over the simple roots, so heights and supports
are exact.  D_3 is rejected rather than silently treated as A_3.

>>> R = RootSystem("C", 3)
>>> len(R.positive_roots)
9
>>> R.highest_root.vector
(2, 0, 0)
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Root:
    vector: tuple[int, ...]        # coordinates in the ambient e-basis
    coords: tuple[int, ...]        # coordinates over the simple roots

    @property
    def height(self) -> int:
        return sum(self.coords)

    @property
    def support(self) -> frozenset[int]:
        """1-indexed simple-root indices appearing in this root."""
        return frozenset(i + 1 for i, c in enumerate(self.coords) if c)


def _dot(u: tuple[int, ...], v: tuple[int, ...]) -> int:
    return sum(a * b for a, b in zip(u, v))


class RootSystem:
    MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}

    def __init__(self, family: str, n: int):
        if family not in self.MIN_RANK:
            raise ValueError(f"unknown family {family!r}")
        if n < self.MIN_RANK[family]:
            raise ValueError(f"{family}_{n} not supported (rank too small)")
        self.family = family
        self.n = n
        self.simple = self._simple_roots()
        self.roots = self._close()
        self.positive_roots = [r for r in self.roots if r.height > 0]
        self.highest_root = max(self.positive_roots, key=lambda r: r.height)

    def _simple_roots(self) -> list[tuple[int, ...]]:
        n = self.n
        dim = n + 1 if self.family == "A" else n
        simple = []
        for i in range(n - 1):
            v = [0] * dim
            v[i], v[i + 1] = 1, -1
            simple.append(tuple(v))
        last = [0] * dim
        if self.family == "A":
            last[n - 1], last[n] = 1, -1
        elif self.family == "B":
            last[n - 1] = 1
        elif self.family == "C":
            last[n - 1] = 2
        else:
            last[n - 2], last[n - 1] = 1, 1
        simple.append(tuple(last))
        return simple

    def _close(self) -> list[Root]:
        simple = self.simple
        n = self.n
        norms = [_dot(a, a) for a in simple]
        seen: dict[tuple[int, ...], Root] = {}
        frontier: list[Root] = []
        for i, a in enumerate(simple):
            coords = tuple(1 if j == i else 0 for j in range(n))
            r = Root(a, coords)
            seen[a] = r
            frontier.append(r)
        while frontier:
            nxt: list[Root] = []
            for r in frontier:
                for j, a in enumerate(simple):
                    c = 2 * _dot(r.vector, a) // norms[j]
                    vec = tuple(x - c * y for x, y in zip(r.vector, a))
                    if vec in seen:
                        continue
                    coords = tuple(
                        x - (c if idx == j else 0) for idx, x in enumerate(r.coords)
                    )
                    img = Root(vec, coords)
                    seen[vec] = img
                    nxt.append(img)
            frontier = nxt
        return sorted(seen.values(), key=lambda r: (-r.height, r.vector))

    # ---- diagram combinatorics --------------------------------------------

    def adjacency(self) -> dict[int, set[int]]:
        """Dynkin-graph neighbours of each node (1-indexed)."""
        n = self.n
        adj: dict[int, set[int]] = {i: set() for i in range(1, n + 1)}
        path_end = n - 1 if self.family == "D" else n
        for i in range(1, path_end):
            adj[i].add(i + 1)
            adj[i + 1].add(i)
        if self.family == "D":
            adj[n - 2].add(n)
            adj[n].add(n - 2)
        return adj

    def opposition_involution(self) -> tuple[int, ...]:
        """The permutation pi_0 induced by -w_0 on the nodes, 1-indexed.

        Returned as a tuple t with t[i-1] = pi_0(i).
        """
        n = self.n
        if self.family == "A":
            return tuple(n + 1 - i for i in range(1, n + 1))
        if self.family == "D" and n % 2 == 1:
            out = list(range(1, n + 1))
            out[n - 2], out[n - 1] = n, n - 1
            return tuple(out)
        return tuple(range(1, n + 1))

    def highest_root_of_support(self, nodes: frozenset[int]) -> Root:
        """Highest root of the subsystem spanned by the given simple roots.

        The node set must induce a connected subdiagram; the result is the
        unique maximal-height positive root supported inside it.
        """
        best = None
        for r in self.positive_roots:
            if r.support <= nodes:
                if best is None or r.height > best.height:
                    best = r
        assert best is not None
        return best

    def __repr__(self) -> str:
        return f"RootSystem({self.family!r}, {self.n})"
