"""Arithmetic in small finite fields GF(q), q = p^k <= 81.

Elements are plain Python ints in ``range(q)``.  A nonprime field element
encodes the coefficient vector of a residue polynomial little-endian in base
p: the int ``c0 + c1*p + ... + c_{k-1}*p^(k-1)`` stands for the residue
``c0 + c1*x + ... + c_{k-1}*x^(k-1)`` modulo a fixed monic irreducible
polynomial m(x) of degree k.  The modulus is chosen canonically as the monic
irreducible whose non-leading coefficient vector has the smallest such packed
value, so every run of the library (and every file it writes) agrees on the
encoding:

>>> GF(4).modulus        # x^2 + x + 1
(1, 1, 1)
>>> GF(9).modulus        # x^2 + 1
(1, 0, 1)

All binary operations are backed by dense numpy tables (q*q is at most 6561),
which is what makes the vectorized geometry kernels cheap: a whole matrix of
field elements can be multiplied through ``mul_table[a, b]`` fancy indexing.
Prime fields get the obvious mod-p tables.

The class is memoized on q; everything downstream relies on ``GF(q) is
GF(q)`` so tables are shared.
"""

from __future__ import annotations

import numpy as np

_FIELD_CACHE: dict[int, "GF"] = {}


def _factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p^k, p prime; raise if q is not a prime power."""
    if q < 2:
        raise ValueError(f"field order must be >= 2, got {q}")
    p = None
    for cand in range(2, q + 1):
        if q % cand == 0:
            p = cand
            break
    assert p is not None
    k = 0
    rest = q
    while rest % p == 0:
        rest //= p
        k += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    # p was found as the least divisor, hence prime.
    return p, k


def _poly_mulmod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    """Multiply coefficient vectors a*b mod (modulus, p).  Little-endian."""
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: x^k = -(modulus without leading term)
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            prod[deg] = 0
            for j in range(k):
                prod[deg - k + j] = (prod[deg - k + j] - c * modulus[j]) % p
    out = prod[:k]
    out += [0] * (k - len(out))
    return out


def _poly_eval(coeffs: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def _is_irreducible(coeffs: list[int], p: int) -> bool:
    """Irreducibility of a monic polynomial of degree <= 4 over GF(p).

    Degrees 2 and 3 are irreducible iff rootless; degree 4 additionally needs
    no monic irreducible quadratic divisor.
    """
    k = len(coeffs) - 1
    assert coeffs[-1] == 1 and 2 <= k <= 4
    for x in range(p):
        if _poly_eval(coeffs, x, p) == 0:
            return False
    if k < 4:
        return True
    for c0 in range(p):
        for c1 in range(p):
            quad = [c0, c1, 1]
            if any(_poly_eval(quad, x, p) == 0 for x in range(p)):
                continue
            # long division of coeffs by quad; irreducible iff never exact
            rem = list(coeffs)
            for deg in range(k, 1, -1):
                lead = rem[deg]
                if lead:
                    rem[deg] = 0
                    rem[deg - 1] = (rem[deg - 1] - lead * c1) % p
                    rem[deg - 2] = (rem[deg - 2] - lead * c0) % p
            if not any(rem):
                return False
    return True


def _canonical_modulus(p: int, k: int) -> tuple[int, ...]:
    """The canonical degree-k modulus: least packed coefficient vector."""
    for packed in range(p**k):
        coeffs, rest = [], packed
        for _ in range(k):
            rest, c = divmod(rest, p)
            coeffs.append(c)
        coeffs.append(1)
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


class GF:
    """The finite field of order q, with dense operation tables.

    >>> F = GF(9)
    >>> F.mul(3, 3)           # x * x = x^2 = -1 = 2
    2
    >>> F.inv(F.mul(5, F.inv(5)))
    1
    >>> GF(3).nonsquare
    2
    """

    def __new__(cls, q: int) -> "GF":
        try:
            return _FIELD_CACHE[q]
        except KeyError:
            pass
        self = super().__new__(cls)
        self._build(q)
        _FIELD_CACHE[q] = self
        return self

    def _build(self, q: int) -> None:
        if q > 81:
            raise ValueError(f"field order {q} > 81 not supported")
        p, k = _factor_prime_power(q)
        self.q = q
        self.p = p
        self.k = k
        if k == 1:
            self.modulus = None
            r = np.arange(q, dtype=np.int64)
            self.add_table = ((r[:, None] + r[None, :]) % q).astype(np.uint8)
            self.mul_table = ((r[:, None] * r[None, :]) % q).astype(np.uint8)
            self.neg_table = ((-r) % q).astype(np.uint8)
            inv = np.zeros(q, dtype=np.uint8)
            for a in range(1, q):
                inv[a] = pow(a, q - 2, q)
            self.inv_table = inv
            self.frob_table = r.astype(np.uint8)  # x^p = x
        else:
            self.modulus = _canonical_modulus(p, k)
            coeffs = [self._coeffs(a) for a in range(q)]
            add = np.zeros((q, q), dtype=np.uint8)
            mul = np.zeros((q, q), dtype=np.uint8)
            for a in range(q):
                for b in range(q):
                    add[a, b] = self._pack(
                        [(x + y) % p for x, y in zip(coeffs[a], coeffs[b])]
                    )
                    mul[a, b] = self._pack(
                        _poly_mulmod(coeffs[a], coeffs[b], list(self.modulus), p)
                    )
            self.add_table = add
            self.mul_table = mul
            self.neg_table = np.array(
                [self._pack([(-c) % p for c in coeffs[a]]) for a in range(q)],
                dtype=np.uint8,
            )
            inv = np.zeros(q, dtype=np.uint8)
            for a in range(1, q):
                hits = np.nonzero(mul[a] == 1)[0]
                assert len(hits) == 1, f"element {a} of GF({q}) has {len(hits)} inverses"
                inv[a] = hits[0]
            self.inv_table = inv
            frob = np.zeros(q, dtype=np.uint8)
            for a in range(q):
                acc = a
                for _ in range(p - 1):
                    acc = int(mul[acc, a])
                frob[a] = acc
            self.frob_table = frob

        # conjugation for a quadratic-over-subfield structure: x -> x^(p^(k/2))
        if k % 2 == 0:
            conj = np.arange(q, dtype=np.uint8)
            for _ in range(k // 2):
                conj = self.frob_table[conj]
            self.conj_table = conj
        else:
            self.conj_table = None

        squares = {self.mul(a, a) for a in range(q)}
        self.squares = frozenset(squares)
        if len(squares) < q:
            self.nonsquare = min(a for a in range(q) if a not in squares)
        else:
            self.nonsquare = None  # even characteristic: squaring is bijective

    # ---- scalar operations -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self.inv_table[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def frob(self, a: int) -> int:
        """The absolute Frobenius a -> a^p."""
        return int(self.frob_table[a])

    def conj(self, a: int) -> int:
        """a -> a^(p^(k/2)), the involution fixing the index-2 subfield."""
        if self.conj_table is None:
            raise ValueError(f"GF({self.q}) has no quadratic subfield structure")
        return int(self.conj_table[a])

    def is_square(self, a: int) -> bool:
        return a in self.squares

    # ---- encoding ----------------------------------------------------------

    def _coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def _pack(self, coeffs: list[int]) -> int:
        acc = 0
        for c in reversed(coeffs):
            acc = acc * self.p + c
        return acc

    def coeffs_of(self, a: int) -> tuple[int, ...]:
        """Little-endian base-p coefficient vector of an element, length k."""
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element of GF({self.q})")
        return tuple(self._coeffs(a))

    def element_from_coeffs(self, coeffs) -> int:
        cs = [c % self.p for c in coeffs]
        if len(cs) > self.k:
            if any(cs[self.k :]):
                raise ValueError("coefficient vector too long")
            cs = cs[: self.k]
        cs += [0] * (self.k - len(cs))
        return self._pack(cs)

    def descriptor(self) -> dict:
        """JSON-ready description: order, characteristic, degree, modulus."""
        d = {"q": self.q, "p": self.p, "k": self.k}
        d["modulus"] = list(self.modulus) if self.modulus else None
        return d

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        # keep memoization through pickling (multiprocessing workers)
        return (GF, (self.q,))


def irreducible_quadratic(F: GF) -> tuple[int, int]:
    """Least (t, d) such that x^2 - t*x + d has no root in F.

    The pair is minimal in lexicographic order with t major.  Such a
    polynomial is the minimal polynomial of a generator of the quadratic
    extension, with trace t and norm d; the anisotropic binary quadratic form
    u^2 - t*u*v + d*v^2 used for elliptic spaces is built from it.

    >>> irreducible_quadratic(GF(2))
    (1, 1)
    >>> irreducible_quadratic(GF(3))
    (0, 1)
    """
    for t in range(F.q):
        for d in range(F.q):
            if all(
                F.add(F.sub(F.mul(x, x), F.mul(t, x)), d) != 0 for x in range(F.q)
            ):
                return (t, d)
    raise AssertionError("every quadratic splits -- impossible over a finite field")
