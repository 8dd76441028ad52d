"""Small number-theory helpers: factorization, divisors, symbols, square
detection, quadratic-field discriminant bookkeeping.

Factorization and primality delegate to sympy; everything else is exact
integer arithmetic.
"""
from __future__ import annotations

from math import gcd, isqrt

import sympy


def is_prime(n: int) -> bool:
    return sympy.isprime(n)


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; 0 and +/-1 give {}."""
    if n == 0:
        return {}
    return {int(p): int(e) for p, e in sympy.factorint(abs(n)).items() if p != 1}


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of |n| (n != 0)."""
    if n == 0:
        raise ValueError("divisors of 0")
    divs = [1]
    for p, e in factorint(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def valuation(n: int, p: int) -> int:
    """v_p(n) for n != 0."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n), n odd positive."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("n must be odd positive")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def least_nonresidue(p: int) -> int:
    """Smallest quadratic nonresidue mod an odd prime p."""
    for c in range(2, p):
        if jacobi(c, p) == -1:
            return c
    raise ValueError(f"no nonresidue mod {p}")


def squarefree_part(n: int) -> int:
    """Largest squarefree s with n = s * (square), sign preserved."""
    if n == 0:
        return 0
    s = -1 if n < 0 else 1
    for p, e in factorint(n).items():
        if e % 2:
            s *= p
    return s


def fundamental_discriminant(d: int) -> tuple[int, int]:
    """Write a quadratic discriminant d = f^2 * d0 with d0 fundamental.

    Returns (d0, f).  d must be a nonsquare discriminant (d = 0,1 mod 4).
    """
    if d % 4 not in (0, 1):
        raise ValueError(f"{d} is not a discriminant")
    if d == 0 or is_square(d):
        raise ValueError(f"{d} is a square")
    s = squarefree_part(d)
    d0 = s if s % 4 == 1 else 4 * s
    # d / d0 is a perfect square by construction
    f2 = d // d0
    f = isqrt(f2)
    assert f * f == f2 and d == f * f * d0
    return d0, f


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """x = r1 mod m1, x = r2 mod m2 for coprime moduli."""
    g, u, _ = xgcd(m1, m2)
    if g != 1:
        raise ValueError("moduli not coprime")
    return (r1 + (r2 - r1) * u % m2 * m1) % (m1 * m2)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def inv_mod(a: int, m: int) -> int:
    g, x, _ = xgcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} not invertible mod {m}")
    return x % m


def content(vals) -> int:
    g = 0
    for v in vals:
        g = gcd(g, v)
    return g


def abelian_invariants(elements, mul, identity):
    """Invariant factors (ascending divisibility chain) of a finite abelian
    group given as an element list with a multiplication callback.

    Works by counting solutions of x^(l^j) = identity for each prime l
    dividing the order; the counts are exact powers of l whose exponents
    recover the l-partition of the group.
    """
    h = len(elements)
    if h == 1:
        return ()

    def power(x, e):
        acc = identity
        base = x
        while e:
            if e & 1:
                acc = mul(acc, base)
            e >>= 1
            if e:
                base = mul(base, base)
        return acc

    parts = {}
    for ell, e in factorint(h).items():
        # cur[i] = x_i^(ell^j), raised one level per pass
        cur = list(elements)
        counts = []
        for j in range(1, e + 1):
            cur = [power(x, ell) for x in cur]
            counts.append(sum(1 for x in cur if x == identity))
        # counts[j-1] = ell^(sum_i min(lambda_i, j)); recover the partition
        exps = []
        prev = 0
        for cj in counts:
            k = 0
            while ell**k < cj:
                k += 1
            assert ell**k == cj, "solution count is not a power of ell"
            exps.append(k - prev)
            prev = k
        # exps[j-1] = #{i : lambda_i >= j}
        lam = []
        for cnt in exps:
            while len(lam) < cnt:
                lam.append(0)
            for i in range(cnt):
                lam[i] += 1
        parts[ell] = sorted(lam, reverse=True)
    width = max(len(v) for v in parts.values())
    invs = []
    for i in range(width):
        d = 1
        for ell, lam in parts.items():
            if i < len(lam):
                d *= ell ** lam[i]
        invs.append(d)
    invs.sort()
    assert invs and all(invs[i] % invs[i - 1] == 0 for i in range(1, len(invs)))
    prod = 1
    for d in invs:
        prod *= d
    assert prod == h
    return tuple(invs)
