"""GF(q) arithmetic backed by log/antilog tables, q = p^k <= 256."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_Q = 256


class AlphabetError(ValueError):
    """Raised when q is not a supported prime power."""


def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise AlphabetError(f"q={q} must be >= 2")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1  # q itself prime
    k, n = 0, q
    while n % p == 0:
        n //= p
        k += 1
    if n != 1:
        raise AlphabetError(f"q={q} is not a prime power")
    return p, k


def _poly_mul_mod(a: tuple, b: tuple, p: int, modulus: tuple) -> tuple:
    # coefficient tuples, lowest degree first; modulus monic of degree k
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c == 0:
            continue
        prod[d] = 0
        for j in range(k + 1):
            prod[d - k + j] = (prod[d - k + j] - c * modulus[j]) % p
    out = prod[:k] + [0] * max(0, k - len(prod))
    return tuple(out[:k])


def _find_irreducible(p: int, k: int) -> tuple:
    """Monic irreducible polynomial of degree k over Z_p, found by sieve."""
    if k == 1:
        return (0, 1)
    # a poly of degree k is irreducible iff it has no irreducible factor of
    # degree <= k//2; for the small k here, test by exhaustive root/factor scan
    def poly_eval_set(poly):
        # reducible iff divisible by some monic poly of degree 1..k//2
        for d in range(1, k // 2 + 1):
            for coeffs in itertools.product(range(p), repeat=d):
                cand = coeffs + (1,)
                if _poly_divides(cand, poly, p):
                    return False
        return True

    for coeffs in itertools.product(range(p), repeat=k):
        poly = coeffs + (1,)
        if poly[0] == 0:
            continue
        if poly_eval_set(poly):
            return poly
    raise AlphabetError(f"no irreducible polynomial found for p={p}, k={k}")


def _poly_divides(d: tuple, a: tuple, p: int) -> bool:
    rem = list(a)
    dd = len(d) - 1
    inv_lead = pow(d[-1], p - 2, p) if p > 2 else d[-1]
    while len(rem) - 1 >= dd:
        if rem[-1] != 0:
            f = (rem[-1] * inv_lead) % p
            off = len(rem) - 1 - dd
            for j in range(dd + 1):
                rem[off + j] = (rem[off + j] - f * d[j]) % p
        rem.pop()
        while len(rem) > 1 and rem[-1] == 0 and len(rem) - 1 >= dd:
            rem.pop()
    return all(c == 0 for c in rem)


@dataclass(eq=False)
class Alphabet:
    """Finite field on symbols 0..q-1.

    Symbols encode coefficient vectors base p (lowest digit = constant term).
    Multiplication and division run through exp/log tables of a primitive
    element; addition is digitwise mod p.
    """

    q: int
    p: int = field(init=False)
    k: int = field(init=False)
    exp_table: np.ndarray = field(init=False, repr=False)
    log_table: np.ndarray = field(init=False, repr=False)
    add_table: np.ndarray = field(init=False, repr=False)
    neg_table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.q > MAX_Q:
            raise AlphabetError(f"q={self.q} exceeds table limit {MAX_Q}")
        self.p, self.k = _prime_power(self.q)
        p, k, q = self.p, self.k, self.q
        modulus = _find_irreducible(p, k)

        def to_sym(coeffs):
            s = 0
            for c in reversed(coeffs):
                s = s * p + c
            return s

        def to_coeffs(s):
            out = []
            for _ in range(k):
                out.append(s % p)
                s //= p
            return tuple(out)

        # addition: digitwise mod p
        add = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            ca = to_coeffs(a)
            for b in range(q):
                cb = to_coeffs(b)
                add[a, b] = to_sym(tuple((x + y) % p for x, y in zip(ca, cb)))
        self.add_table = add
        self.neg_table = np.array(
            [to_sym(tuple((-c) % p for c in to_coeffs(a))) for a in range(q)],
            dtype=np.int64,
        )

        # find a primitive element, build exp/log
        def mul_raw(a, b):
            return to_sym(_poly_mul_mod(to_coeffs(a), to_coeffs(b), p, modulus))

        prim = None
        for g in range(2, q) if q > 2 else range(1, 2):
            seen = set()
            x = 1
            for _ in range(q - 1):
                seen.add(x)
                x = mul_raw(x, g)
            if len(seen) == q - 1:
                prim = g
                break
        if prim is None:
            if q == 2:
                prim = 1
            else:
                raise AlphabetError(f"no primitive element found for q={q}")

        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            exp[i + q - 1] = x
            log[x] = i
            x = mul_raw(x, prim)
        self.exp_table = exp
        self.log_table = log

    # scalar ops -----------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[self.log_table[a] + self.log_table[b]])

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero symbol")
        if a == 0:
            return 0
        return int(self.exp_table[self.log_table[a] - self.log_table[b] + self.q - 1])

    def inv(self, a: int) -> int:
        return self.div(1, a)

    # vector ops -----------------------------------------------------------
    def add_vec(self, a, b):
        return self.add_table[np.asarray(a), np.asarray(b)]

    def mul_vec(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        out = self.exp_table[(self.log_table[a] + self.log_table[b]) % (self.q - 1)] if self.q > 2 else (a & b)
        out = np.where((a == 0) | (b == 0), 0, out)
        return out

    def scalar_row_mul(self, s: int, row):
        """s * row elementwise (used by coset/partial-encoding updates)."""
        row = np.asarray(row)
        if s == 0:
            return np.zeros_like(row)
        return self.mul_vec(np.full_like(row, s), row)

    def matvec(self, u, mat):
        """u . mat over the field, u length n, mat (n, m)."""
        u = np.asarray(u)
        mat = np.asarray(mat)
        acc = np.zeros(mat.shape[1], dtype=np.int64)
        for i, ui in enumerate(u):
            if ui:
                acc = self.add_vec(acc, self.scalar_row_mul(int(ui), mat[i]))
        return acc

    def check_symbols(self, arr) -> None:
        arr = np.asarray(arr)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError(f"symbols out of range for q={self.q}")


@lru_cache(maxsize=None)
def alphabet(q: int) -> Alphabet:
    return Alphabet(q)
