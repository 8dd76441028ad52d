"""Brute-force elliptic-curve class counts over tiny fields.

Independent of the order/class-group machinery: curves are enumerated
coefficient by coefficient, points are counted exhaustively, and
isomorphism classes are collapsed by taking each orbit's minimal
coefficient encoding.  Fields of size p^k are realized as integer-encoded
digit vectors with dense multiplication tables.  Everything here exists to
check the counting pipeline from the outside, so it shares no code with it.
"""

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import numpy as np
from sympy import factorint

from .isocount import count_report
from .poly import validate_weil


@dataclass(frozen=True)
class CurveClassCount:
    q: int
    t: int
    count: int


@dataclass(frozen=True)
class CrosscheckRecord:
    q: int
    t: int
    oracle_count: int
    report_N: int
    equal: bool


class _GF:
    """F_{p^k} on the integers 0..q-1 via base-p digit vectors.

    mul/add are dense q x q numpy tables (q <= 49 keeps them tiny); deg-2/3
    extensions are built from a root-free monic polynomial found by scan.
    """

    def __init__(self, p: int, k: int):
        self.p, self.k, self.q = p, k, p**k
        q = self.q
        dig = np.array([[(e // p**i) % p for i in range(k)] for e in range(q)],
                       dtype=np.int64)
        pw = p ** np.arange(k, dtype=np.int64)
        self.add = ((dig[:, None, :] + dig[None, :, :]) % p @ pw).astype(np.int64)
        if k == 1:
            self.mul = (np.arange(q)[:, None] * np.arange(q)[None, :]) % p
        else:
            mod = self._find_irreducible(p, k)
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                for b in range(a, q):
                    prod = [0] * (2 * k - 1)
                    for i in range(k):
                        for j in range(k):
                            prod[i + j] += int(dig[a, i]) * int(dig[b, j])
                    for d in range(2 * k - 2, k - 1, -1):
                        c = prod[d] % p
                        if c:
                            for i in range(k):
                                prod[d - k + i] -= c * mod[i]
                        prod[d] = 0
                    enc = sum((prod[i] % p) * p**i for i in range(k))
                    mul[a, b] = mul[b, a] = enc
            self.mul = mul
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.where(self.mul[a] == 1)[0][0])
        self.inv = inv
        sq = np.zeros(q, dtype=np.int64)
        sq[self.mul[np.arange(q), np.arange(q)]] = 1
        self.is_square = sq
        self.units = np.arange(1, q, dtype=np.int64)

    @staticmethod
    def _find_irreducible(p: int, k: int):
        # monic of degree 2 or 3 is irreducible iff it has no root
        assert k in (2, 3)
        for tail in range(p**k):
            coeffs = [(tail // p**i) % p for i in range(k)]
            if all((x**k + sum(c * x**i for i, c in enumerate(coeffs))) % p
                   for x in range(p)):
                return coeffs
        raise AssertionError("no irreducible polynomial found")

    def scalar(self, c: int) -> int:
        """Encode a prime-field scalar."""
        return c % self.p


@lru_cache(maxsize=None)
def _field(q: int) -> _GF:
    fq = factorint(q)
    if len(fq) != 1:
        raise ValueError("q must be a prime power")
    (p, k), = fq.items()
    if p == 2:
        raise ValueError("even q is not supported")
    if q > 49:
        raise ValueError("q must be at most 49")
    return _GF(p, k)


def _point_counts_short(F: _GF):
    """(codes, points) for y^2 = x^3 + a*x + b, p >= 5: one canonical code
    per isomorphism class orbit {(u^4 a, u^6 b)}."""
    q = F.q
    xs = np.arange(q)
    x3 = F.mul[xs, F.mul[xs, xs]]
    a = np.repeat(np.arange(q), q)
    b = np.tile(np.arange(q), q)
    # 4a^3 + 27b^2 != 0
    a3 = F.mul[F.mul[a, a], a]
    disc = F.add[F.mul[F.scalar(4), a3], F.mul[F.scalar(27), F.mul[b, b]]]
    keep = disc != 0
    a, b = a[keep], b[keep]
    pts = np.ones(a.size, dtype=np.int64)
    for x in range(q):
        f = F.add[F.add[x3[x], F.mul[a, x]], b]
        pts += np.where(f == 0, 1, 2 * F.is_square[f])
    code = np.full(a.size, q * q, dtype=np.int64)
    for u in F.units:
        u2 = F.mul[u, u]
        u4 = F.mul[u2, u2]
        u6 = F.mul[u4, u2]
        cand = F.mul[u4, a] * q + F.mul[u6, b]
        np.minimum(code, cand, out=code)
    return code, pts


def _point_counts_char3(F: _GF):
    """Same for p = 3 with the model y^2 = x^3 + a*x^2 + b*x + c and the
    substitutions x -> u^2 x + r, y -> u^3 y."""
    q = F.q
    n = q * q * q
    idx = np.arange(n)
    a = idx // (q * q)
    b = (idx // q) % q
    c = idx % q
    xs = np.arange(q)
    x3 = F.mul[xs, F.mul[xs, xs]]
    # singular iff some x has f(x) = 0 and f'(x) = 2a*x + b = 0
    singular = np.zeros(n, dtype=bool)
    pts = np.ones(n, dtype=np.int64)
    two = F.scalar(2)
    for x in range(q):
        f = F.add[F.add[F.add[x3[x], F.mul[a, F.mul[x, x]]], F.mul[b, x]], c]
        fp = F.add[F.mul[two, F.mul[a, x]], b]
        singular |= (f == 0) & (fp == 0)
        pts += np.where(f == 0, 1, 2 * F.is_square[f])
    keep = ~singular
    a, b, c, pts = a[keep], b[keep], c[keep], pts[keep]
    code = np.full(a.size, q**3, dtype=np.int64)
    for u in F.units:
        u2 = F.mul[u, u]
        i2 = F.inv[u2]
        i4 = F.mul[i2, i2]
        i6 = F.mul[i4, i2]
        for r in range(q):
            r2 = F.mul[r, r]
            r3 = F.mul[r2, r]
            na = F.mul[a, i2]
            nb = F.mul[F.add[F.mul[two, F.mul[a, r]], b], i4]
            nc = F.mul[F.add[F.add[F.add[r3, F.mul[a, r2]], F.mul[b, r]], c], i6]
            cand = (na * q + nb) * q + nc
            np.minimum(code, cand, out=code)
    return code, pts


@lru_cache(maxsize=None)
def _class_counts(q: int):
    """{trace t: number of isomorphism classes with q + 1 - t points}."""
    F = _field(q)
    code, pts = _point_counts_char3(F) if F.p == 3 else _point_counts_short(F)
    seen = {}
    for cd, n in zip(code.tolist(), pts.tolist()):
        if cd in seen:
            assert seen[cd] == n, "points must be constant on an orbit"
        else:
            seen[cd] = n
    counts = {}
    for n in seen.values():
        t = q + 1 - n
        counts[t] = counts.get(t, 0) + 1
    return counts


def enumerate_ec_classes(q: int, t: int) -> CurveClassCount:
    """Isomorphism classes over F_q with exactly q + 1 - t points."""
    counts = _class_counts(q)
    if t * t > 4 * q:
        raise ValueError("trace out of the Weil range")
    return CurveClassCount(q=q, t=t, count=counts.get(t, 0))


def total_classes(q: int) -> int:
    return sum(_class_counts(q).values())


def crosscheck_ordinary(q: int, t: int) -> CrosscheckRecord:
    """Compare the brute-force class count against the class-number sum of
    the counting pipeline for x^2 - t*x + q at level 1."""
    (p, m), = factorint(q).items()
    if t % p == 0:
        raise ValueError("ordinary comparison needs p not dividing t")
    w = validate_weil([q, -t, 1], p, m)
    rep = count_report(w, 1)
    cc = enumerate_ec_classes(q, t)
    return CrosscheckRecord(q=q, t=t, oracle_count=cc.count, report_N=rep.N,
                            equal=cc.count == rep.N)


def crosscheck_sweep(q: int):
    """crosscheck_ordinary across every trace with 0 < t^2 <= 4q, p not
    dividing t."""
    (p, _), = factorint(q).items()
    bound = isqrt(4 * q)
    return [crosscheck_ordinary(q, t)
            for t in range(-bound, bound + 1) if t != 0 and t % p != 0]
