"""A small content-addressed result cache for expensive sweeps.

Keys are SHA-256 digests of the canonical JSON encoding of the request
(sorted keys, no whitespace), so any change to the space, mode, seed, or
sample size misses the cache.  Entries live under ``polaris-cache/`` in
the working directory (or a caller-chosen root) as plain JSON.
"""

from __future__ import annotations

import hashlib
import json
import os

DEFAULT_ROOT = "polaris-cache"


def canonical_key(request: dict) -> str:
    blob = json.dumps(request, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def cache_path(name: str, key: str, root: str = DEFAULT_ROOT) -> str:
    return os.path.join(root, f"{name}-{key[:16]}.json")


def load(name: str, request: dict, root: str = DEFAULT_ROOT) -> dict | None:
    path = cache_path(name, canonical_key(request), root)
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("request") != request:
        return None  # digest-prefix collision; treat as a miss
    return payload.get("result")


def store(name: str, request: dict, result: dict, root: str = DEFAULT_ROOT) -> str:
    os.makedirs(root, exist_ok=True)
    path = cache_path(name, canonical_key(request), root)
    with open(path, "w") as fh:
        json.dump({"request": request, "result": result}, fh, indent=1)
        fh.write("\n")
    return path
