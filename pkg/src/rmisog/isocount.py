"""Isogeny-class sizes along field extensions, exactly.

The headline count is N = sum of class numbers of all over-orders of the
level-n endomorphism order; h(R_n) is reported separately as N_min, and the
norm-map kernel (the polarized refinement) as its own column.  Lift
multiplicities 2^k stay metadata and are never folded into N.  Degenerate
levels are flagged and skipped, not patched.  Floating-point columns
(exponents, root angles) are advisory; every count is exact.
"""

import math
from dataclasses import dataclass

from .errors import UnsupportedStratumError
from .field import cm_field
from .ideals import class_group, norm_map_kernel
from .localdata import LiftProfile, analyze_level
from .orders import construct_Rn, level_order, maximal_order, over_orders
from .poly import WeilPolynomial, char_poly_of_power, degeneracy_reason


@dataclass(frozen=True)
class IsogenyCountReport:
    n: int
    h_n: tuple
    degenerate: bool
    reason: str = None        # degeneracy reason when flagged
    i_n: int = None           # [O_K : R_n]
    divisor_table: tuple = None   # rows (d, disc(O_d), h(O_d)), d = [O_d : R_n]
    N: int = None             # sum of the table's class numbers
    N_min: int = None         # h(R_n)
    kernel_size: int = None   # norm-map kernel order inside Cl(R_n)
    kernel_invariants: tuple = None
    lift_profile: LiftProfile = None
    exponent: float = None    # 2 * log_q(N) / n

    def __repr__(self):
        if self.degenerate:
            return f"IsogenyCountReport(n={self.n}, degenerate: {self.reason})"
        return (f"IsogenyCountReport(n={self.n}, i_n={self.i_n}, N={self.N}, "
                f"N_min={self.N_min}, kernel={self.kernel_size})")


def count_report(w: WeilPolynomial, n: int) -> IsogenyCountReport:
    """Exact class count at level n: one class-group summand per over-order
    of R_n.  Degenerate levels return a flagged report with counts omitted.
    """
    hn = tuple(char_poly_of_power(w.h, w.q, n))
    reason = degeneracy_reason(w.h, w.q, n)
    if reason is not None:
        return IsogenyCountReport(n=n, h_n=hn, degenerate=True, reason=reason)
    level = analyze_level(w, n)
    Rn = construct_Rn(w, n, local=level)
    field = cm_field(w.h, w.q)
    OK = maximal_order(field)
    i_n = Rn.index_in(OK)
    orders = over_orders(Rn, OK)
    # the sum-over-divisors formula needs one over-order per divisor
    divs = _divisors(i_n)
    if len(orders) != len(divs):
        raise UnsupportedStratumError(
            "level order has a non-cyclic maximal-order quotient; "
            "the divisor sum does not apply")
    total = 0
    table = []
    n_min = kernel = None
    for O in orders:
        cl = class_group(O)
        d = i_n // O.index_in(OK)
        table.append((d, O.disc, cl.h))
        total += cl.h
        if d == 1:
            n_min = cl.h
            kernel = norm_map_kernel(cl)
    assert [row[0] for row in table] == divs, "one over-order per divisor"
    return IsogenyCountReport(
        n=n, h_n=hn, degenerate=False, i_n=i_n, divisor_table=tuple(table),
        N=total, N_min=n_min, kernel_size=kernel[0],
        kernel_invariants=tuple(kernel[1]), lift_profile=level.profile,
        exponent=2 * math.log(total, w.q) / n if total > 1 else 0.0)


def asymptotic_table(w: WeilPolynomial, n_max: int):
    """count_report for n = 1..n_max; degenerate rows flagged in place."""
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    return tuple(count_report(w, n) for n in range(1, n_max + 1))


# ---------------------------------------------------------------------------
# discriminant growth and density-one filtering


@dataclass(frozen=True)
class DiscGrowthRow:
    n: int
    disc: int          # disc(O_L[alpha^n]), exact
    ratio: float       # log_q |disc| / n
    sine_dev: float    # relative deviation from disc(O_L)^2 * prod 4q^n sin^2(n theta_j)


def _angles(w: WeilPolynomial):
    """theta_j = arg of the root over the j-th real place (double precision;
    used only for advisory columns and flags)."""
    rq = 2 * math.sqrt(w.q)
    if w.g == 1:
        roots = [float(-w.h_r[0])]
    elif w.g == 2:
        c, b = float(w.h_r[0]), float(w.h_r[1])
        s = math.sqrt(b * b - 4 * c)
        roots = [(-b - s) / 2, (-b + s) / 2]
    else:
        raise UnsupportedStratumError("angles implemented for g <= 2 only")
    return tuple(math.acos(r / rq) for r in roots)


def disc_growth_table(w: WeilPolynomial, n_max: int):
    """Exact disc(O_L[alpha^n]) per n with the floating sine-product check
    |disc| ~ disc(O_L)^2 * prod_j 4 q^n sin(n theta_j)^2."""
    field = cm_field(w.h, w.q)
    field.require_small_real_field()
    dL = 1 if field.gL == 1 else field.D0
    thetas = _angles(w)
    rows = []
    for n in range(1, n_max + 1):
        disc = level_order(field, n).disc
        qn = float(w.q) ** n
        pred = float(dL * dL)
        for th in thetas:
            pred *= 4.0 * qn * math.sin(n * th) ** 2
        dev = abs(abs(float(disc)) - pred) / pred
        rows.append(DiscGrowthRow(n=n, disc=disc,
                                  ratio=math.log(abs(disc), w.q) / n,
                                  sine_dev=dev))
    return tuple(rows)


def density_filter(w: WeilPolynomial, n_range):
    """Levels n with min_j |sin(n theta_j)| < 1/n, plus the exactly
    degenerate ones (which take precedence and are always flagged)."""
    if isinstance(n_range, int):
        n_range = range(1, n_range + 1)
    thetas = _angles(w)
    flagged = []
    for n in n_range:
        if degeneracy_reason(w.h, w.q, n) is not None:
            flagged.append(n)
        elif min(abs(math.sin(n * th)) for th in thetas) < 1.0 / n:
            flagged.append(n)
    return flagged


def _divisors(n: int):
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]
