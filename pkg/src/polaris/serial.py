"""JSON round trips for matrices, collineations, and space descriptions.

Matrix files carry the field, the ambient dimension, an optional space
kind, the Frobenius exponent, and the entries row-major.  Each entry is
the little-endian coefficient vector of the field element (length k);
readers also accept plain integers (the packed base-p encoding), so
hand-written files over prime fields can use bare ints.
"""

from __future__ import annotations

import json

import numpy as np

from .collineation import Collineation
from .gf import GF
from .spaces import (
    PolarSpace,
    elliptic_space,
    hermitian_space,
    hyperbolic_space,
    parabolic_space,
    symplectic_space,
)

_FACTORIES = {
    "symplectic": symplectic_space,
    "parabolic": parabolic_space,
    "hyperbolic": hyperbolic_space,
    "elliptic": elliptic_space,
    "hermitian": hermitian_space,
}


def field_to_dict(F: GF) -> dict:
    return {"p": F.p, "k": F.k, "modulus": list(F.modulus) if F.modulus else None}


def field_from_dict(d: dict) -> GF:
    F = GF(int(d["p"]) ** int(d.get("k", 1)))
    mod = d.get("modulus")
    if mod is not None and F.modulus is not None and tuple(mod) != F.modulus:
        raise ValueError(
            f"field modulus {mod} differs from the canonical {list(F.modulus)}"
        )
    return F


def matrix_to_dict(F: GF, theta, kind: str | None = None) -> dict:
    th = theta if isinstance(theta, Collineation) else Collineation(F, np.asarray(theta, dtype=np.uint8))
    M = th.matrix
    entries = [list(F.coeffs_of(int(a))) for a in M.reshape(-1)]
    out = {
        "field": field_to_dict(F),
        "n": int(M.shape[0]),
        "frobenius_exp": int(th.frob_exp),
        "entries": entries,
    }
    if kind is not None:
        out["kind"] = kind
    return out


def matrix_from_dict(d: dict) -> tuple[GF, Collineation]:
    F = field_from_dict(d["field"])
    n = int(d["n"])
    entries = d["entries"]
    if len(entries) != n * n:
        raise ValueError(f"expected {n * n} entries, got {len(entries)}")
    vals = []
    for e in entries:
        if isinstance(e, (int, np.integer)):
            v = int(e)
            if not 0 <= v < F.q:
                raise ValueError(f"entry {v} out of range for GF({F.q})")
            vals.append(v)
        else:
            vals.append(F.element_from_coeffs(list(e)))
    M = np.array(vals, dtype=np.uint8).reshape(n, n)
    return F, Collineation(F, M, int(d.get("frobenius_exp", 0)))


def space_to_dict(space: PolarSpace) -> dict:
    return {"kind": space.kind, "rank": space.n, "field": field_to_dict(space.F)}


def space_from_dict(d: dict) -> PolarSpace:
    if "kind" not in d:
        raise ValueError("space description needs a 'kind'")
    kind = d["kind"]
    if kind not in _FACTORIES:
        raise ValueError(f"unknown space kind {kind!r} (one of {sorted(_FACTORIES)})")
    if "field" in d:
        F = field_from_dict(d["field"])
    else:
        F = GF(int(d["p"]) ** int(d.get("k", 1)))
    rank = int(d.get("rank", d.get("n", 0)))
    if rank <= 0:
        raise ValueError("space description needs a positive 'rank'")
    return _FACTORIES[kind](rank, F)


def save_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def save_matrix(path: str, F: GF, theta, kind: str | None = None) -> None:
    save_json(path, matrix_to_dict(F, theta, kind=kind))


def load_matrix(path: str) -> tuple[GF, Collineation]:
    return matrix_from_dict(load_json(path))


def save_space(path: str, space: PolarSpace) -> None:
    save_json(path, space_to_dict(space))


def load_space(path: str) -> PolarSpace:
    return space_from_dict(load_json(path))
