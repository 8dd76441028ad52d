"""Integer polynomials and Weil polynomial validation.

Coefficient lists are constant-term-first tuples of ints.  All root-location
decisions (real roots inside [-2*sqrt(q), 2*sqrt(q)]) are made with exact
Sturm chains evaluated at quadratic surds; no floating point is consulted.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import sympy

from .errors import ParseError, WeilValidationError
from .nt import factorint, is_prime


# ---------------------------------------------------------------------------
# coefficient-list arithmetic


def poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def poly_deg(c) -> int:
    c = poly_trim(c)
    return len(c) - 1 if c else -1


def poly_add(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return poly_trim([x + y for x, y in zip(a, b)])


def poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return poly_trim([x - y for x, y in zip(a, b)])


def poly_mul(a, b):
    a, b = poly_trim(a), poly_trim(b)
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_pow(a, n: int):
    out = [1]
    base = list(a)
    while n:
        if n & 1:
            out = poly_mul(out, base)
        n >>= 1
        if n:
            base = poly_mul(base, base)
    return out


def poly_scale(a, c):
    return poly_trim([c * x for x in a])


def poly_eval(c, x):
    acc = 0
    for coeff in reversed(list(c)):
        acc = acc * x + coeff
    return acc


def poly_derivative(c):
    return poly_trim([i * c[i] for i in range(1, len(c))])


def poly_divmod(a, b):
    """Quotient/remainder over Q (Fraction coefficients)."""
    a = [Fraction(x) for x in poly_trim(a)]
    b = [Fraction(x) for x in poly_trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        f = a[-1] / b[-1]
        k = len(a) - len(b)
        q[k] = f
        for i in range(len(b)):
            a[k + i] -= f * b[i]
        a = poly_trim(a)
        if not a:
            break
    return poly_trim(q), a


def poly_content(c) -> int:
    g = 0
    for x in c:
        g = gcd(g, abs(x))
    return g


def poly_primitive(c):
    c = poly_trim(c)
    if not c:
        return []
    g = poly_content(c)
    out = [x // g for x in c]
    if out[-1] < 0:
        out = [-x for x in out]
    return out


def poly_gcd(a, b):
    """Primitive gcd over Z with positive leading coefficient."""
    a = [Fraction(x) for x in poly_trim(a)]
    b = [Fraction(x) for x in poly_trim(b)]
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    den = 1
    for x in a:
        den = lcm(den, x.denominator)
    return poly_primitive([int(x * den) for x in a])


def squarefree_part(c):
    """c / gcd(c, c'), primitive, positive leading coefficient."""
    g = poly_gcd(c, poly_derivative(c))
    q, r = poly_divmod(c, g)
    assert not r
    den = 1
    for x in q:
        den = lcm(den, Fraction(x).denominator)
    return poly_primitive([int(Fraction(x) * den) for x in q])


def is_squarefree(c) -> bool:
    return poly_deg(poly_gcd(c, poly_derivative(c))) == 0


def resultant(a, b) -> Fraction:
    """Sylvester determinant; exact."""
    from .linalg import mat_det

    a, b = poly_trim(a), poly_trim(b)
    m, n = len(a) - 1, len(b) - 1
    if m < 0 or n < 0:
        return Fraction(0)
    if m == 0:
        return Fraction(a[0]) ** n
    if n == 0:
        return Fraction(b[0]) ** m
    size = m + n
    S = [[0] * size for _ in range(size)]
    for i in range(n):
        for j, coeff in enumerate(reversed(a)):
            S[i][i + j] = coeff
    for i in range(m):
        for j, coeff in enumerate(reversed(b)):
            S[n + i][i + j] = coeff
    return mat_det(S)


def discriminant(c) -> Fraction:
    c = poly_trim(c)
    d = len(c) - 1
    r = resultant(c, poly_derivative(c))
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * r / c[-1]


# ---------------------------------------------------------------------------
# parsing / printing


_TERM_RE = re.compile(
    r"^(?P<coeff>\d+)?\s*\*?\s*(?P<var>[a-zA-Z])?"
    r"(?:\s*(?:\^|\*\*)\s*(?P<exp>\d+))?$"
)


def parse_poly(text: str):
    """Parse 'x^4 - x^3 + 11*x^2 - 11*x + 121' or a coefficient list
    '121,-11,11,-1,1' (constant term first) into a coefficient tuple."""
    s = text.strip().replace("−", "-")
    if not s:
        raise ParseError("empty polynomial")
    if not re.search(r"[a-zA-Z]", s):
        parts = [p for p in re.split(r"[,\s]+", s) if p]
        try:
            coeffs = [int(p) for p in parts]
        except ValueError as exc:
            raise ParseError(f"bad coefficient list: {text!r}") from exc
        return tuple(poly_trim(coeffs))
    s = s.replace("-", "+-").replace(" ", "")
    if s.startswith("+"):
        s = s[1:]
    var = None
    acc: dict[int, int] = {}
    for raw in s.split("+"):
        if not raw:
            raise ParseError(f"malformed term in {text!r}")
        sign = 1
        if raw.startswith("-"):
            sign, raw = -1, raw[1:]
        m = _TERM_RE.match(raw)
        if not m or (m.group("coeff") is None and m.group("var") is None):
            raise ParseError(f"malformed term {raw!r} in {text!r}")
        if m.group("exp") is not None and m.group("var") is None:
            raise ParseError(f"exponent without variable in term {raw!r}")
        v = m.group("var")
        if v is not None:
            if var is None:
                var = v
            elif var != v:
                raise ParseError(f"mixed variables {var!r}/{v!r} in {text!r}")
        coeff = int(m.group("coeff")) if m.group("coeff") else 1
        exp = int(m.group("exp")) if m.group("exp") else (1 if v else 0)
        acc[exp] = acc.get(exp, 0) + sign * coeff
    deg = max(acc)
    return tuple(poly_trim([acc.get(i, 0) for i in range(deg + 1)]))


def format_poly(c, var: str = "x") -> str:
    c = poly_trim(c)
    if not c:
        return "0"
    parts = []
    for i in range(len(c) - 1, -1, -1):
        x = c[i]
        if x == 0:
            continue
        if i == 0:
            body = str(abs(x))
        else:
            xs = var if i == 1 else f"{var}^{i}"
            body = xs if abs(x) == 1 else f"{abs(x)}*{xs}"
        if not parts:
            parts.append(("-" if x < 0 else "") + body)
        else:
            parts.append(("- " if x < 0 else "+ ") + body)
    return " ".join(parts)


# ---------------------------------------------------------------------------
# exact sign evaluation at a + b*sqrt(D)


def surd_sign(a, b, D) -> int:
    """Sign of a + b*sqrt(D) for rational a, b and D > 0, exactly."""

    def sg(x):
        return (x > 0) - (x < 0)

    if b == 0:
        return sg(a)
    if a == 0:
        return sg(b)
    if (a > 0) == (b > 0):
        return sg(a)
    lhs, rhs = a * a, b * b * D
    if lhs == rhs:
        return 0
    return sg(a) if lhs > rhs else sg(b)


def eval_at_surd(c, a, b, D):
    """p(a + b*sqrt(D)) as a pair (A, B) meaning A + B*sqrt(D)."""
    A, B = Fraction(0), Fraction(0)
    for coeff in reversed(list(c)):
        A, B = A * a + B * b * D + coeff, A * b + B * a
    return A, B


def sturm_chain(c):
    chain = [[Fraction(x) for x in poly_trim(c)]]
    d = poly_derivative(chain[0])
    if d:
        chain.append(d)
    while poly_deg(chain[-1]) > 0:
        _, r = poly_divmod(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-x for x in r])
    return chain


def _sign_changes(signs) -> int:
    signs = [s for s in signs if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots_closed_surd_interval(c, D) -> int:
    """Number of distinct real roots of squarefree c in [-2*sqrt(D), 2*sqrt(D)]."""
    chain = sturm_chain(c)
    lo = [surd_sign(*eval_at_surd(p, Fraction(0), Fraction(-2), D), D) for p in chain]
    hi = [surd_sign(*eval_at_surd(p, Fraction(0), Fraction(2), D), D) for p in chain]
    count = _sign_changes(lo) - _sign_changes(hi)
    if lo[0] == 0:  # closed interval: Sturm counts (lo, hi]
        count += 1
    return count


# ---------------------------------------------------------------------------
# Weil polynomials


@dataclass(frozen=True)
class WeilPolynomial:
    """Validated q-Weil polynomial h = r^e with its real counterpart.

    h      monic, degree 2g, constant-first coefficients
    r      the unique irreducible factor of h over Q
    h_r    real counterpart: h(x) = x^g * h_r(x + q/x)
    s      squarefree part of h_r; generates the totally real field L
    """

    h: tuple
    q: int
    p: int
    m: int
    g: int
    e: int
    r: tuple
    h_r: tuple
    s: tuple

    @property
    def g0(self) -> int:
        return len(self.s) - 1

    def __str__(self):
        return f"WeilPolynomial({format_poly(self.h)}, q={self.q})"


def real_counterpart(h, q: int):
    """h_r with h(x) = x^g h_r(x + q/x); raises if h is not q-symmetric."""
    h = poly_trim(h)
    d = len(h) - 1
    if d < 2 or d % 2:
        raise WeilValidationError(f"degree must be even and >= 2, got {d}")
    g = d // 2
    rem = list(h)
    b = [0] * (g + 1)
    xq = [q, 0, 1]  # x^2 + q
    for i in range(g, -1, -1):
        idx = g + i
        b[i] = rem[idx] if idx < len(rem) else 0
        if b[i]:
            term = poly_mul([0] * (g - i) + [1], poly_pow(xq, i))
            rem = poly_sub(rem, poly_scale(term, b[i]))
    if any(rem):
        raise WeilValidationError("functional equation fails: not a q-symmetric polynomial")
    return tuple(b)


def from_real_counterpart(h_r, q: int):
    """Inverse of real_counterpart: build h from h_r."""
    h_r = poly_trim(h_r)
    g = len(h_r) - 1
    xq = [q, 0, 1]
    h = []
    for i, bi in enumerate(h_r):
        if bi:
            term = poly_mul([0] * (g - i) + [1], poly_pow(xq, i))
            h = poly_add(h, poly_scale(term, bi))
    return tuple(h)


def _factor_over_q(c):
    """[(factor_coeffs, multiplicity)] for a primitive integer polynomial."""
    x = sympy.Symbol("x")
    expr = sum(int(coeff) * x**i for i, coeff in enumerate(c))
    lc, factors = sympy.factor_list(sympy.Poly(expr, x))
    out = []
    for f, mult in factors:
        fp = sympy.Poly(f, x)
        coeffs = [int(v) for v in reversed(fp.all_coeffs())]
        out.append((tuple(coeffs), int(mult)))
    return out


def validate_weil(h, p: int, m: int = 1) -> WeilPolynomial:
    """Full validation; raises WeilValidationError with a reason on failure."""
    if m < 1:
        raise WeilValidationError(f"m = {m} must be positive")
    if not is_prime(p):
        raise WeilValidationError(f"p = {p} is not prime")
    return validate_weil_q(h, p**m)


def validate_weil_q(h, q: int) -> WeilPolynomial:
    h = poly_trim(h)
    if not h or h[-1] != 1:
        raise WeilValidationError("polynomial must be monic")
    if any(not isinstance(x, int) for x in h):
        raise WeilValidationError("coefficients must be integers")
    d = len(h) - 1
    if d < 2 or d % 2:
        raise WeilValidationError(f"degree must be even and >= 2, got {d}")
    g = d // 2
    fq = factorint(q)
    if q < 2 or len(fq) != 1:
        raise WeilValidationError(f"q = {q} is not a prime power")
    p, m = next(iter(fq.items()))

    for j in range(g + 1):
        if h[j] != h[2 * g - j] * q ** (g - j):
            raise WeilValidationError(
                f"functional equation fails at coefficient {j}: "
                f"{h[j]} != {h[2 * g - j]} * {q}^{g - j}"
            )

    h_r = real_counterpart(h, q)

    factors = _factor_over_q(list(h))
    if len(factors) != 1:
        names = ", ".join(format_poly(f) for f, _ in factors)
        raise WeilValidationError(f"not a power of a single irreducible factor: {names}")
    r, e = factors[0]

    s = squarefree_part(list(h_r))
    # h_r must be an exact power of s (isotypic real part)
    g0 = len(s) - 1
    if g % g0:
        raise WeilValidationError("real counterpart is not a power of one irreducible")
    if poly_trim(poly_sub(poly_pow(s, g // g0), h_r)):
        raise WeilValidationError("real counterpart is not a power of one irreducible")

    n_in = count_roots_closed_surd_interval(s, q)
    if n_in != g0:
        raise WeilValidationError(
            f"root bound fails: only {n_in} of {g0} roots of the real counterpart "
            f"lie in [-2*sqrt({q}), 2*sqrt({q})]"
        )

    return WeilPolynomial(
        h=tuple(h), q=q, p=p, m=m, g=g, e=e, r=tuple(r), h_r=tuple(h_r), s=tuple(s)
    )


def parse_weil(text: str, p: int, m: int = 1) -> WeilPolynomial:
    return validate_weil(list(parse_poly(text)), p, m)


def search_weil(g: int, p: int, m: int, coeff_bound: int, constraints=None):
    """All valid Weil polynomials of degree 2g over F_{p^m} whose free real
    coefficients are bounded by coeff_bound; optional constraints is a slope
    multiset (sorted tuple of Fractions) the Newton polygon must match."""
    if g not in (1, 2):
        raise ValueError("only g = 1 and g = 2 are supported")
    q = p**m
    out = []
    if g == 1:
        cands = [[q, -t, 1] for t in range(-coeff_bound, coeff_bound + 1)]
    else:
        cands = [
            from_real_counterpart([c, b, 1], q)
            for b in range(-coeff_bound, coeff_bound + 1)
            for c in range(-coeff_bound, coeff_bound + 1)
        ]
    for h in cands:
        try:
            w = validate_weil_q(h, q)
        except WeilValidationError:
            continue
        if constraints is not None:
            from .localdata import newton_polygon

            try:
                prof = newton_polygon(w)
            except Exception:
                continue
            if tuple(sorted(prof.slopes)) != tuple(sorted(constraints)):
                continue
        out.append(w)
    return out


# ---------------------------------------------------------------------------
# powers of Frobenius


def power_sums(c, upto: int):
    """p_k = sum of k-th powers of the roots of monic c, for k = 0..upto."""
    c = poly_trim(c)
    d = len(c) - 1
    assert c[-1] == 1
    ps = [d]
    for k in range(1, upto + 1):
        if k <= d:
            acc = -k * c[d - k]
            for i in range(1, k):
                acc -= c[d - i] * ps[k - i]
            ps.append(acc)
        else:
            acc = 0
            for i in range(d):
                acc -= c[i] * ps[k - d + i]
            ps.append(acc)
    return ps


def companion_matrix(c):
    c = poly_trim(c)
    d = len(c) - 1
    assert c[-1] == 1
    C = [[0] * d for _ in range(d)]
    for i in range(1, d):
        C[i][i - 1] = 1
    for i in range(d):
        C[i][d - 1] = -c[i]
    return C


def char_poly_of_power(h, q: int, n: int):
    """Characteristic polynomial of alpha^n, alpha running over roots of h.

    Computed as charpoly(C^n) for the companion matrix C; exact integers.
    """
    from .linalg import charpoly, mat_identity, mat_mul

    C = companion_matrix(h)
    B = mat_identity(len(C))
    P = C
    k = n
    while k:
        if k & 1:
            B = mat_mul(B, P)
        k >>= 1
        if k:
            P = mat_mul(P, P)
    coeffs = charpoly(B)
    out = []
    for x in coeffs:
        assert x.denominator == 1
        out.append(int(x))
    return tuple(out)


def degeneracy_reason(h, q: int, n: int):
    """None if alpha^n has 2g distinct values, none equal to +-q^(n/2);
    otherwise a short reason string."""
    hn = char_poly_of_power(h, q, n)
    if not is_squarefree(list(hn)):
        return f"repeated eigenvalues of Frobenius^{n}"
    fq = factorint(q)
    p, m = next(iter(fq.items()))
    if (n * m) % 2 == 0:
        mid = p ** (n * m // 2)
        if poly_eval(hn, mid) == 0 or poly_eval(hn, -mid) == 0:
            return f"middle root +-{q}^({n}/2)"
    else:
        quo, rem = poly_divmod(list(hn), [-(q**n), 0, 1])
        if not rem:
            return f"middle root +-{q}^({n}/2)"
    return None
