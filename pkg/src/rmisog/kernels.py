"""Hot counting loops: reduced-form counts and elliptic point counts.

Both kernels have a numba-compiled scalar version and a numpy fallback;
set RMISOG_NO_NUMBA=1 to force the fallback.
"""

import os
from math import isqrt

import numpy as np

try:
    if os.environ.get("RMISOG_NO_NUMBA"):
        raise ImportError("numba disabled via RMISOG_NO_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    njit = None
    HAVE_NUMBA = False


def _bqf_count_np(D: int) -> int:
    """Number of primitive reduced forms (a, b, c) of discriminant D < 0.

    Reduced: |b| <= a <= c with b >= 0 when |b| = a or a = c; forms with
    0 < b < a < c are counted twice (once per sign of b).
    """
    total = 0
    bmax = isqrt(-D // 3)
    for b in range(-D & 1, bmax + 1, 2):
        m = (b * b - D) // 4
        lo = max(b, 1)
        hi = isqrt(m)
        if hi < lo:
            continue
        a = np.arange(lo, hi + 1, dtype=np.int64)
        a = a[m % a == 0]
        if a.size == 0:
            continue
        c = m // a
        prim = np.gcd(np.gcd(a, b), c) == 1
        a, c = a[prim], c[prim]
        if b == 0:
            total += int(a.size)
        else:
            total += int(np.where((a == b) | (a == c), 1, 2).sum())
    return total


def _bqf_count_scalar(D):
    total = 0
    n = -D // 3
    bmax = int(np.sqrt(np.float64(n)))
    while bmax * bmax > n:
        bmax -= 1
    while (bmax + 1) * (bmax + 1) <= n:
        bmax += 1
    b = -D & 1  # parity of b matches parity of D
    while b <= bmax:
        m = (b * b - D) // 4
        a = b if b > 1 else 1
        while a * a <= m:
            if m % a == 0:
                c = m // a
                g = a
                x = b
                while x:
                    g, x = x, g % x
                x = c
                while x:
                    g, x = x, g % x
                if g == 1:
                    if b == 0 or b == a or a == c:
                        total += 1
                    else:
                        total += 2
            a += 1
        b += 2
    return total


def _ec_count_np(p: int, a: int, b: int) -> int:
    """#E(F_p) for y^2 = x^3 + a*x + b, p an odd prime not dividing 4a^3+27b^2."""
    x = np.arange(p, dtype=np.int64)
    f = (x * x % p * x + a * x + b) % p
    sq = np.zeros(p, dtype=np.int64)
    sq[(x * x) % p] = 1
    vals = np.where(f == 0, 1, 2 * sq[f])
    return int(vals.sum()) + 1


def _ec3_count_np(a: int, b: int, c: int, q: int = 3) -> int:
    """#E(F_3) for y^2 = x^3 + a*x^2 + b*x + c."""
    x = np.arange(3, dtype=np.int64)
    f = (x**3 + a * x * x + b * x + c) % 3
    sq = np.zeros(3, dtype=np.int64)
    sq[(x * x) % 3] = 1
    vals = np.where(f == 0, 1, 2 * sq[f])
    return int(vals.sum()) + 1


if HAVE_NUMBA:
    _bqf_count_jit = njit(_bqf_count_scalar)

    @njit
    def _ec_count_jit(p, a, b):
        sq = np.zeros(p, dtype=np.int64)
        for y in range(p):
            sq[y * y % p] = 1
        total = 1
        for x in range(p):
            f = (x * x % p * x + a * x + b) % p
            if f == 0:
                total += 1
            else:
                total += 2 * sq[f]
        return total


def bqf_count(D: int) -> int:
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("need a negative discriminant")
    if HAVE_NUMBA:
        return int(_bqf_count_jit(D))
    return _bqf_count_np(D)


def ec_count(p: int, a: int, b: int) -> int:
    if HAVE_NUMBA:
        return int(_ec_count_jit(p, a % p, b % p))
    return _ec_count_np(p, a % p, b % p)
