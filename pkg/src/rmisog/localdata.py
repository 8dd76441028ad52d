"""Local (p-adic) structure of a Weil polynomial.

Everything here is exact: valuations come from integer arithmetic, and
p-adic root lifting is plain Newton iteration on residues mod p^M with M
chosen large enough that every valuation we read off is provably correct
(a conjugate of an algebraic integer has valuation at most v_p of the
norm, so any image that vanishes mod p^M with M past that bound would
force the element to be zero).

Places of the real field L are ordered by their p-adic root residue; the
archimedean ordering used elsewhere (CM types) is unrelated.
"""

from dataclasses import dataclass
from fractions import Fraction

from sympy.ntheory.residue_ntheory import sqrt_mod

from .errors import DegenerateError, UnsupportedStratumError, WeilValidationError
from .field import CMField, cm_field
from .nt import inv_mod, jacobi, valuation
from .poly import WeilPolynomial, degeneracy_reason, discriminant, validate_weil_q

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# Newton polygon


@dataclass(frozen=True)
class NewtonProfile:
    slopes: tuple      # 2g normalized slopes, ascending, each in {0, 1/2, 1}
    a: int             # number of slope-1/2 pairs
    p_rank: int        # = g - a


def newton_polygon(w: WeilPolynomial) -> NewtonProfile:
    """Normalized Newton slopes of w, checked against the ordinary/one-half
    pattern (slopes 0, 1/2, 1 with multiplicities g-a, 2a, g-a)."""
    if w.p == 2:
        raise UnsupportedStratumError("p = 2 is not supported")
    pts = [(i, valuation(c, w.p)) for i, c in enumerate(w.h) if c != 0]
    # lower convex hull, left to right
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] while it sits on or above the chord hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        lam = Fraction(y1 - y2, x2 - x1)  # root valuation = -(hull slope)
        slopes.extend([lam / w.m] * (x2 - x1))
    slopes.sort()
    g = w.g
    n_half = slopes.count(HALF)
    if n_half % 2 != 0:
        raise UnsupportedStratumError("odd number of slope-1/2 roots")
    a = n_half // 2
    if slopes.count(0) != g - a or slopes.count(1) != g - a or len(slopes) != 2 * g:
        bad = sorted(set(s for s in slopes if s not in (0, HALF, 1)))
        if bad:
            raise UnsupportedStratumError(f"Newton slope {bad[0]} outside {{0, 1/2, 1}}")
        raise UnsupportedStratumError("Newton slopes do not match the (g-a, 2a, g-a) pattern")
    return NewtonProfile(slopes=tuple(slopes), a=a, p_rank=g - a)


# ---------------------------------------------------------------------------
# polynomial arithmetic mod p (dense int lists, constant first)


def _pmul(f, g, mod):
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] = (out[i + j] + fi * gj) % mod
    return out


def _prem(f, g, mod):
    # g monic
    f = [c % mod for c in f]
    dg = len(g) - 1
    while len(f) > dg:
        lead = f[-1]
        if lead:
            for k in range(dg + 1):
                f[len(f) - 1 - dg + k] = (f[len(f) - 1 - dg + k] - lead * g[k]) % mod
        f.pop()
    return f


def check_totally_split(minpoly, p: int) -> bool:
    """True iff minpoly has deg(minpoly) distinct roots mod p, i.e. iff it
    divides x^p - x mod p.  Intended for generators of maximal orders, where
    this is the same as p splitting completely in the field."""
    f = [c % p for c in minpoly]
    if f[-1] != 1:
        raise ValueError("minpoly must be monic")
    if len(f) == 2:
        return True
    # x^p mod (f, p) by square and multiply
    acc = [1]
    base = _prem([0, 1], f, p)
    e = p
    while e:
        if e & 1:
            acc = _prem(_pmul(acc, base, p), f, p)
        e >>= 1
        if e:
            base = _prem(_pmul(base, base, p), f, p)
    acc = acc + [0] * (len(f) - 1 - len(acc))
    xpoly = [0, 1] + [0] * (len(f) - 3)
    return acc == xpoly


# ---------------------------------------------------------------------------
# supersingular factor tags


def classify_ss_factor(factor, p: int, m: int) -> str:
    """Tag a supersingular quadratic x^2 + c1*x + c0 (both roots of
    valuation m/2) as 'Ramified' or 'Unramified'.

    Coefficients may be residues mod p^M for any M exceeding
    v_p(c1^2 - 4*c0); the parity and the unit part mod p are then exact.
    """
    if len(factor) != 3 or factor[2] != 1:
        raise ValueError("factor must be monic quadratic")
    c0, c1 = factor[0], factor[1]
    if valuation(c0, p) != m:
        raise ValueError("constant term does not have valuation m")
    if c1 != 0 and 2 * valuation(c1, p) < m:
        raise ValueError("middle coefficient too small: factor is not supersingular")
    d = c1 * c1 - 4 * c0
    if d == 0:
        raise ValueError("degenerate factor: zero discriminant")
    v = valuation(d, p)
    if v % 2 == 1:
        return "Ramified"
    u = (d // p**v) % p
    if jacobi(u, p) == -1:
        return "Unramified"
    raise UnsupportedStratumError("supersingular factor splits over the p-adics")


@dataclass(frozen=True)
class LiftProfile:
    a: int
    k_ramified: int
    k_inert: int
    lifts: int           # 2^k_ramified
    subcategories: int   # 2^k_inert


def lift_profile(a: int, k: int) -> LiftProfile:
    """Lift counts from a supersingular places, k of them ramified."""
    if not 0 <= k <= a:
        raise ValueError("need 0 <= k <= a")
    return LiftProfile(a=a, k_ramified=k, k_inert=a - k,
                       lifts=2**k, subcategories=2 ** (a - k))


# ---------------------------------------------------------------------------
# exact arithmetic in O_L = Z[omega] (pairs x + y*omega); gL = 1 uses y = 0


def _ol_mul(u, v, D0, c0):
    x1, y1 = u
    x2, y2 = v
    return (x1 * x2 - c0 * y1 * y2, x1 * y2 + x2 * y1 + D0 * y1 * y2)


def _ol_norm(u, D0, c0):
    x, y = u
    return x * x + D0 * x * y + c0 * y * y


def _beta_power_sum(field: CMField, n: int):
    """V_n = alpha^n + (q/alpha)^n as an exact element of O_L, via the
    recurrence V_{k+1} = beta*V_k - q*V_{k-1}."""
    if field.gL == 1:
        beta, D0, c0 = (-field.s[0], 0), 0, 0
    else:
        beta, D0, c0 = (field.u0, field.f0), field.D0, field.g0_poly[0]
    v_prev, v_cur = (2, 0), beta
    if n == 0:
        return v_prev
    for _ in range(n - 1):
        bv = _ol_mul(beta, v_cur, D0, c0)
        v_prev, v_cur = v_cur, (bv[0] - field.q * v_prev[0], bv[1] - field.q * v_prev[1])
    return v_cur


def _lift_root(f, c: int, p: int, M: int) -> int:
    """Newton-lift a simple root c of f mod p to a root mod p^M."""
    der = [i * f[i] for i in range(1, len(f))]
    k = 1
    while k < M:
        k = min(2 * k, M)
        mod = p**k
        fc = sum(ci * pow(c, i, mod) for i, ci in enumerate(f)) % mod
        dc = sum(ci * pow(c, i, mod) for i, ci in enumerate(der)) % mod
        c = (c - fc * inv_mod(dc, mod)) % mod
    return c


def _g0_roots_mod(field: CMField, p: int, M: int):
    """Residues of the real-field places: roots of g0_poly mod p^M,
    ascending by value mod p.  gL = 1 contributes the single 'root' None."""
    if field.gL == 1:
        return [None]
    r = sqrt_mod(field.D0, p)
    if r is None or r == 0:
        raise UnsupportedStratumError("p does not split in the real multiplication field")
    inv2 = inv_mod(2, p)
    roots = sorted(((field.D0 + r) * inv2 % p, (field.D0 - r) * inv2 % p))
    return [_lift_root(field.g0_poly, c, p, M) for c in roots]


# ---------------------------------------------------------------------------
# places at level n


@dataclass(frozen=True)
class PlaceData:
    root: object        # root residue mod p^M (None when L = Q)
    kind: str           # "ordinary" | "supersingular"
    tag: object         # "Ramified" | "Unramified" | None
    v_b: object         # v_p of beta_n at this place; None means beta_n = 0
    v_d: int            # v_p of beta_n^2 - 4q^n at this place
    s: int              # saturation exponent floor(v_d / 2) (0 at ordinary places)


@dataclass(frozen=True)
class LevelAnalysis:
    w: WeilPolynomial
    n: int
    M: int
    places: tuple
    a: int
    k_ramified: int
    k_inert: int
    profile: LiftProfile
    bn: tuple           # beta_n as (x, y) with beta_n = x + y*omega
    dn: tuple           # beta_n^2 - 4q^n, same encoding


def analyze_level(w: WeilPolynomial, n: int = 1, min_precision: int = 0) -> LevelAnalysis:
    """Classify the places of L over p on the level-n polynomial.

    Requires w irreducible (e = 1); powers are reduced by the caller.
    Raises DegenerateError when the level-n polynomial is degenerate.
    """
    if w.e != 1:
        raise UnsupportedStratumError("level analysis needs an irreducible polynomial; "
                                      "reduce e-th powers first")
    field = cm_field(w.h, w.q)
    field.require_small_real_field()
    if w.p == 2:
        raise UnsupportedStratumError("p = 2 is not supported")
    reason = degeneracy_reason(w.h, w.q, n)
    if reason is not None:
        raise DegenerateError(reason)
    if field.gL == 2 and not check_totally_split(field.g0_poly, w.p):
        raise UnsupportedStratumError("p does not split in the real multiplication field")

    p, m = w.p, w.m
    c0 = field.g0_poly[0] if field.gL == 2 else 0
    D0 = field.D0 if field.gL == 2 else 0
    bn = _beta_power_sum(field, n)
    qn = w.q**n
    dn_sq = _ol_mul(bn, bn, D0, c0)
    dn = (dn_sq[0] - 4 * qn, dn_sq[1])

    nb = abs(_ol_norm(bn, D0, c0))
    nd = abs(_ol_norm(dn, D0, c0))
    assert nd != 0, "nondegenerate level must have nonzero place discriminants"
    M = max(valuation(discriminant(w.h), p) + 2 * w.g + 4,
            m * n + 2,
            (valuation(nb, p) + 2) if nb else 0,
            valuation(nd, p) + 2,
            min_precision)
    pM = p**M

    places = []
    for c in _g0_roots_mod(field, p, M):
        cval = c if c is not None else 0
        b_img = (bn[0] + bn[1] * cval) % pM
        d_img = (dn[0] + dn[1] * cval) % pM
        assert d_img != 0
        v_d = valuation(d_img, p)
        if bn == (0, 0):
            v_b = None
        else:
            # M exceeds v_p(N(bn)), so a vanishing image would force bn = 0
            assert b_img != 0, "beta image vanished below the norm bound"
            v_b = valuation(b_img, p)
        if v_b == 0:
            places.append(PlaceData(root=c, kind="ordinary", tag=None, v_b=0, v_d=v_d, s=0))
        elif v_b is None or 2 * v_b >= m * n:
            tag = classify_ss_factor((qn % pM, (-b_img) % pM, 1), p, m * n)
            places.append(PlaceData(root=c, kind="supersingular", tag=tag,
                                    v_b=v_b, v_d=v_d, s=v_d // 2))
        else:
            raise UnsupportedStratumError("place has Newton slope strictly between 0 and 1/2")

    a = sum(1 for pl in places if pl.kind == "supersingular")
    if n == 1 and a != newton_polygon(w).a:
        raise AssertionError("place classification disagrees with the Newton polygon")
    k_ram = sum(1 for pl in places if pl.tag == "Ramified")
    k_in = sum(1 for pl in places if pl.tag == "Unramified")
    return LevelAnalysis(w=w, n=n, M=M, places=tuple(places), a=a,
                         k_ramified=k_ram, k_inert=k_in,
                         profile=lift_profile(a, k_ram), bn=bn, dn=dn)


# ---------------------------------------------------------------------------
# Hensel factorization at level 1


@dataclass(frozen=True)
class LocalFactorization:
    p: int
    M: int
    e: int
    unit_factors: tuple    # monic linear (c0, 1), root a p-adic unit
    val1_factors: tuple    # monic linear, root of valuation m
    ss_factors: tuple      # ((c0, c1, 1), tag) pairs

    @property
    def a(self) -> int:
        return self.e * len(self.ss_factors)

    def product_mod(self):
        """Product of all factors (each repeated e times) mod p^M."""
        mod = self.p**self.M
        out = [1]
        for f in list(self.unit_factors) + list(self.val1_factors) + \
                [fac for fac, _ in self.ss_factors]:
            for _ in range(self.e):
                out = _pmul(out, list(f), mod)
        return out


def hensel_factor(w: WeilPolynomial, precision: int = 0) -> LocalFactorization:
    """Factor w over Z_p into unit-root linears, valuation-m linears and
    supersingular quadratics, to precision max(precision, default).

    The distinct factors belong to the irreducible part r; each is implicitly
    repeated e times, so that the product recovers w mod p^M.
    """
    wr = w if w.e == 1 else validate_weil_q(w.r, w.q)
    lev = analyze_level(wr, 1, min_precision=precision)
    p, m, q, M = w.p, w.m, w.q, lev.M
    pM = p**M

    unit, val1, ss = [], [], []
    for pl in lev.places:
        cval = pl.root if pl.root is not None else 0
        b_img = (lev.bn[0] + lev.bn[1] * cval) % pM
        if pl.kind == "ordinary":
            # unit root of x^2 - b*x + q: congruent to b mod p
            u = _lift_root([q % pM, -b_img % pM, 1], b_img % p, p, M)
            wv = (b_img - u) % pM
            assert wv % p**min(m, M) == 0
            unit.append(((-u) % pM, 1))
            val1.append(((-wv) % pM, 1))
        else:
            ss.append(((q % pM, (-b_img) % pM, 1), pl.tag))

    fac = LocalFactorization(p=p, M=M, e=w.e, unit_factors=tuple(unit),
                             val1_factors=tuple(val1), ss_factors=tuple(ss))
    prod = fac.product_mod()
    target = [c % pM for c in w.h]
    assert prod == target, "local factor product does not match the polynomial"
    return fac


# ---------------------------------------------------------------------------
# full level-1 report


@dataclass(frozen=True)
class AnalyzeReport:
    w: WeilPolynomial
    newton: NewtonProfile
    real_degree: int
    real_disc: int
    split: bool
    factorization: LocalFactorization
    profile: LiftProfile
    notes: tuple


def analyze(w: WeilPolynomial, precision: int = 0) -> AnalyzeReport:
    """Everything the `analyze` command reports for a validated polynomial."""
    np_ = newton_polygon(w)
    wr = w if w.e == 1 else validate_weil_q(w.r, w.q)
    field = cm_field(wr.h, w.q)
    field.require_small_real_field()
    if field.gL == 2:
        split = check_totally_split(field.g0_poly, w.p)
        disc = field.D0
    else:
        split, disc = True, 1
    if not split:
        raise UnsupportedStratumError("p does not split in the real multiplication field")
    fac = hensel_factor(w, precision)
    k_ram = w.e * sum(1 for _, tag in fac.ss_factors if tag == "Ramified")
    profile = lift_profile(np_.a, k_ram)

    notes = []
    if w.e > 1:
        notes.append(f"input is the {w.e}-th power of an irreducible polynomial; "
                     "local factors are listed once and counted with multiplicity")
    if np_.a > 0:
        notes.append("slope multiplicities (g-a, 2a, g-a) at slopes (0, 1/2, 1) are "
                     "the only pattern compatible with the functional equation")
        if w.m % 2 == 1:
            notes.append("q is an odd power of p, so every supersingular factor is ramified")
        notes.append("canonical lifts are counted by 2^k_ramified and "
                     "subcategories by 2^k_inert")
    return AnalyzeReport(w=w, newton=np_, real_degree=field.gL, real_disc=disc,
                         split=split, factorization=fac, profile=profile,
                         notes=tuple(notes))
