"""Class groups of imaginary quadratic orders via binary quadratic forms.

Forms (a, b, c) with b^2 - 4ac = D < 0, a > 0, kept primitive and reduced.
The group law is Gauss composition; generators are all primitive forms with
prime-power leading coefficient up to the Minkowski bound (prime powers are
needed at primes dividing the conductor, where prime forms alone can miss
invertible classes).
"""

from math import gcd, isqrt

from sympy import primerange

from .errors import BudgetError
from .kernels import bqf_count
from .nt import abelian_invariants, fundamental_discriminant, xgcd


def reduce_form(a, b, c):
    """Canonical reduced representative of the class of (a, b, c)."""
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise ValueError("form must be positive definite")
    while True:
        if b > a or b <= -a:
            # translate b into (-a, a]
            t = (a - b) // (2 * a)
            b2 = b + 2 * t * a
            c = (b2 * b2 - (b * b - 4 * a * c)) // (4 * a)
            b = b2
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if b < 0 and (a == c or b == -a):
        b = -b
    return (a, b, c)


def principal_form(D: int):
    b = D & 1
    return (1, b, (b * b - D) // 4)


def compose_raw(f1, f2):
    """Gauss composition of primitive forms of the same discriminant,
    without reduction (valid for definite and indefinite forms alike)."""
    D = f1[1] ** 2 - 4 * f1[0] * f1[2]
    if f1[0] > f2[0]:
        f1, f2 = f2, f1
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, u2, v2 = xgcd(s, d)
        x2, y2 = u2, -v2
    v1 = a1 // d1
    v2_ = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2_ * r
    a3 = v1 * v2_
    c3 = (c2 * d1 + r * (b2 + v2_ * r)) // v1
    assert b3 * b3 - 4 * a3 * c3 == D
    return a3, b3, c3


def compose(f1, f2):
    """Gauss composition of primitive definite forms, reduced."""
    return reduce_form(*compose_raw(f1, f2))


def form_pow(f, e: int, D: int):
    acc = reduce_form(*principal_form(D))
    base = f
    while e:
        if e & 1:
            acc = compose(acc, base)
        e >>= 1
        if e:
            base = compose(base, base)
    return acc


def minkowski_bound(D: int) -> int:
    # (2/pi) * sqrt(|D|) rounded up: 4168/10240 = 0.40703... >= 4/pi^2
    return isqrt((abs(D) * 4168) // 10240) + 1


def _leading_coeff_forms(D: int, amax: int):
    """All reduced primitive forms with given leading coefficient a <= amax,
    for a ranging over prime powers."""
    out = []
    for p in primerange(2, amax + 1):
        a = p
        while a <= amax:
            for b in range(a + 1):
                for bb in {b, -b}:
                    if (bb * bb - D) % (4 * a) == 0:
                        c = (bb * bb - D) // (4 * a)
                        if gcd(gcd(a, bb), c) == 1:
                            out.append(reduce_form(a, bb, c))
            a *= p
    return sorted(set(out))


def class_group_forms(D: int, budget: int = 10**6):
    """(h, invariants, reduced reps) for the form class group of disc D.

    Invariant factors ascending (d_1 | d_2 | ...), empty for trivial group.
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError("need a negative discriminant")
    fundamental_discriminant(D)  # validates shape
    ident = reduce_form(*principal_form(D))
    gens = _leading_coeff_forms(D, minkowski_bound(D))
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                fg = compose(f, g)
                if fg not in elements:
                    elements.add(fg)
                    nxt.append(fg)
                    if len(elements) > budget:
                        raise BudgetError("class group closure exceeded budget")
        frontier = nxt
    h = len(elements)
    invariants = abelian_invariants(elements, compose, ident)
    reps = sorted(elements)
    return h, invariants, reps


def bqf_class_number(D: int) -> int:
    """Independent count of primitive reduced forms of discriminant D."""
    return bqf_count(D)
