"""Real quadratic orders: fundamental units, indefinite forms, narrow classes.

Everything works on a positive nonsquare discriminant D (0 or 1 mod 4).
Indefinite forms are compared exactly (squared inequalities against D), and
narrow equivalence is decided by rho-cycles of reduced forms.
"""

from math import gcd, isqrt

from .nt import (abelian_invariants, divisors, factorint,
                 fundamental_discriminant, is_square)


def _check_disc(D: int):
    if D <= 0 or D % 4 not in (0, 1) or is_square(D):
        raise ValueError("need a positive nonsquare discriminant")


def _icbrt(n: int) -> int:
    x = int(round(n ** (1 / 3))) if n < 2**52 else int(round(float(n) ** (1 / 3)))
    while x**3 > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def _pell(N: int):
    """Minimal (x, y) with x^2 - N y^2 = +-1, via the continued fraction of
    sqrt(N); the sign is -1 exactly when the period is odd."""
    a0 = isqrt(N)
    m, d, a = 0, 1, a0
    p0, p1 = 1, a0
    q0, q1 = 0, 1
    while a != 2 * a0:
        m = d * a - m
        d = (N - m * m) // d
        a = (a0 + m) // d
        p0, p1 = p1, a * p1 + p0
        q0, q1 = q1, a * q1 + q0
    return p0, q0


def fundamental_unit(D: int):
    """(T, U, norm) with eps = (T + U*sqrt(D))/2 the fundamental unit > 1
    of the order of discriminant D, and norm = N(eps) in {1, -1}."""
    _check_disc(D)
    if D % 4 == 0:
        x, y = _pell(D // 4)
        return (2 * x, y, x * x - (D // 4) * y * y)
    x, y = _pell(D)
    n = x * x - D * y * y
    # x + y*sqrt(D) generates the Z[sqrt(D)] units; the fundamental unit of
    # the full order is its cube root when t = (t^3 - 3nt = 2x) has an odd
    # integer solution, else the element itself
    tc = _icbrt(2 * x)
    for t in range(max(1, tc - 2), tc + 3):
        if t**3 - 3 * n * t == 2 * x and t * t != n:
            num = 2 * y
            den = t * t - n
            if num % den == 0:
                u = num // den
                if t * t - D * u * u == 4 * n:
                    return (t, u, n)
    return (2 * x, 2 * y, n)


# ---------------------------------------------------------------------------
# indefinite forms


def is_reduced_indef(f, D: int) -> bool:
    # reduced <=> |sqrt(D) - 2|a|| < b < sqrt(D), all comparisons squared
    a, b, c = f
    if b <= 0 or b * b >= D:
        return False
    t = 2 * abs(a) - b
    if t > 0 and t * t >= D:
        return False
    return D < (2 * abs(a) + b) ** 2


def rho(f, D: int, s: int = None):
    """Right-neighbor step; iterating from any form eventually reduces it."""
    if s is None:
        s = isqrt(D)
    a, b, c = f
    m = abs(c)
    bb = (-b) % (2 * m)
    upper = m if m > s else s
    lower = upper - 2 * m
    while bb > upper:
        bb -= 2 * m
    while bb <= lower:
        bb += 2 * m
    return (c, bb, (bb * bb - D) // (4 * c))


def reduce_indef(f, D: int):
    s = isqrt(D)
    for _ in range(10000):
        if is_reduced_indef(f, D):
            return f
        f = rho(f, D, s)
    raise RuntimeError("indefinite reduction did not terminate")


def cycle_of(f, D: int):
    """The rho-cycle through the reduction of f, as a list of reduced forms."""
    f = reduce_indef(f, D)
    s = isqrt(D)
    out = [f]
    g = rho(f, D, s)
    while g != f:
        out.append(g)
        g = rho(g, D, s)
    return out


def cycle_key(f, D: int):
    return min(cycle_of(f, D))


def all_reduced_forms(D: int, primitive_only: bool = True):
    _check_disc(D)
    s = isqrt(D)
    out = []
    for b in range(2 - (D & 1), s + 1, 2):
        n = (D - b * b) // 4
        if n <= 0:
            continue
        for d in divisors(n):
            for a, c in ((d, -(n // d)), (-d, n // d)):
                f = (a, b, c)
                if is_reduced_indef(f, D):
                    if not primitive_only or gcd(gcd(a, b), c) == 1:
                        out.append(f)
    return out


def principal_cycle_key(D: int):
    b = D & 1
    return cycle_key((1, b, (b * b - D) // 4), D)


def narrow_class_number(D: int) -> int:
    """h+ = number of rho-cycles of primitive reduced forms."""
    forms = set(all_reduced_forms(D))
    n_cycles = 0
    while forms:
        f = forms.pop()
        cyc = cycle_of(f, D)
        forms.difference_update(cyc)
        n_cycles += 1
    # genus theory: 2^(mu - 1) divides h+ for fundamental D
    D0, fcond = fundamental_discriminant(D)
    if fcond == 1:
        mu = len(factorint(abs(D0)))
        assert n_cycles % 2 ** max(mu - 1, 0) == 0
    return n_cycles


def narrow_class_group(D: int):
    """(h+, invariants, cycle-key representatives) of the narrow class group.

    Group law is Gauss composition on primitive forms; narrow classes are
    identified with rho-cycles of reduced indefinite forms.
    """
    from .imquad import compose_raw

    forms = set(all_reduced_forms(D))
    keys = []
    while forms:
        cyc = cycle_of(forms.pop(), D)
        forms.difference_update(cyc)
        keys.append(min(cyc))
    keys.sort()
    ident = principal_cycle_key(D)

    def mul(k1, k2):
        return cycle_key(compose_raw(k1, k2), D)

    invs = abelian_invariants(keys, mul, ident)
    return len(keys), invs, keys


def class_number_real(D: int) -> int:
    """Wide class number: h+ when the fundamental unit has norm -1, else h+/2."""
    hp = narrow_class_number(D)
    _, _, norm = fundamental_unit(D)
    if norm == -1:
        return hp
    assert hp % 2 == 0
    return hp // 2


def is_narrowly_principal_form(f, D: int) -> bool:
    return cycle_key(f, D) == principal_cycle_key(D)
