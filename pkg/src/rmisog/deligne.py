"""Lattice modules carrying Frobenius and real multiplication.

A module is a full lattice T in the CM field together with the integer
matrix F of multiplication by alpha^n on a basis of T.  The companion
datum V = q^n * F^{-1} must be integral, and the ring of integers of the
real subfield must stabilize T; together these say exactly that the
multiplicator ring of T contains the level order O_L[alpha^n, q^n/alpha^n].

Isomorphism of modules is multiplication by a field element, so it reduces
to the canonical ideal-class labels of `ideals`.  Enumeration up to
isomorphism runs over class groups of the over-orders of the level order
when that order is Bass, with an exhaustive conductor-to-maximal-order
lattice sweep as fallback.  Polarizations are located by exact search in
the conjugation-anti-fixed part of a trace dual.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product

from .errors import BudgetError, DegenerateError, UnsupportedStratumError
from .field import CMField, cm_field
from .ideals import FracIdeal, _hnf_contains, _hnf_sublattices, canonical_key, is_principal
from .ideals import class_group
from .linalg import (QLattice, charpoly, hnf, left_kernel, mat_det, mat_inv,
                     mat_mul, transpose, vec_mat)
from .localdata import newton_polygon
from .nt import valuation
from .orders import (Order, colon_lattice, construct_Rn, is_bass, maximal_order,
                     multiplicator_ring, over_orders, product_lattice, trace_dual)
from .poly import WeilPolynomial, char_poly_of_power, degeneracy_reason, is_squarefree


# ---------------------------------------------------------------------------
# CM types


@dataclass(frozen=True)
class CMType:
    """One embedding choice per real place.

    signs[j] is the sign of Im(phi(alpha)) of the embedding selected over
    the j-th real place, places ordered as in CMField.real_place_signs.
    """

    signs: tuple

    def __post_init__(self):
        if not self.signs or any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be a nonempty tuple of +-1")


def default_cm_type(g: int) -> CMType:
    """Upper half-plane choice at every place."""
    return CMType(signs=(1,) * g)


def cm_type_choices(g: int):
    """All 2^g embedding choices, default (all +1) first."""
    out = []
    for mask in range(2**g):
        out.append(CMType(signs=tuple(-1 if (mask >> j) & 1 else 1
                                      for j in range(g))))
    return out


# ---------------------------------------------------------------------------
# the module type


@dataclass(frozen=True)
class DeligneModule:
    w: WeilPolynomial
    n: int
    lattice: QLattice
    basis: tuple       # basis elements as power-basis coordinate tuples
    F: tuple           # F[i][j] = coefficient of basis[i] in alpha^n * basis[j]
    V: tuple           # q^n * F^{-1}, integral
    rm_action: tuple   # matrices of the O_L basis on `basis`, identity first
    polarization: tuple = None

    @property
    def field(self) -> CMField:
        return cm_field(self.w.h, self.w.q)

    def __repr__(self):
        pol = ", polarized" if self.polarization is not None else ""
        return f"DeligneModule(n={self.n}, rank={len(self.F)}{pol})"


def _action_matrix(field, rows, binv, x, what):
    """Integer matrix of multiplication by x on the basis `rows` (columns
    hold the images); None entries are impossible -- a fractional
    coordinate means the lattice is not stable under x."""
    d = len(rows)
    M = [[0] * d for _ in range(d)]
    for j in range(d):
        c = vec_mat(field.mul(x, rows[j]), binv)
        for i in range(d):
            if c[i].denominator != 1:
                raise ValueError(f"lattice is not stable under {what}")
            M[i][j] = int(c[i])
    return tuple(tuple(r) for r in M)


def module_from_ideal(I, h: WeilPolynomial, n: int, basis=None) -> DeligneModule:
    """Module on the lattice of I with F = multiplication by alpha^n.

    The basis defaults to the HNF basis of the lattice; an explicit basis
    spanning the same lattice yields the same module in other coordinates.
    Raises ValueError when the lattice is not stable under alpha^n,
    q^n/alpha^n, or the real multiplication order.
    """
    if isinstance(I, Order):
        I = FracIdeal(I.field, I.lattice, I)
    field = I.field
    if h.e != 1:
        raise UnsupportedStratumError(
            "modules need an irreducible polynomial; reduce e-th powers first")
    if tuple(field.r) != tuple(h.h) or field.q != h.q:
        raise ValueError("ideal and polynomial live in different fields")
    field.require_small_real_field()
    lat = I.lattice
    if basis is None:
        rows = [tuple(x) for x in lat.frac_rows()]
    else:
        rows = [tuple(Fraction(c) for c in b) for b in basis]
        if QLattice.from_rows(rows) != lat:
            raise ValueError("basis does not span the ideal lattice")
    binv = mat_inv([list(r) for r in rows])
    F = _action_matrix(field, rows, binv, field.alpha_pow(n), f"alpha^{n}")
    qn = field.q**n
    Finv = mat_inv([[Fraction(x) for x in row] for row in F])
    V = []
    for i in range(len(F)):
        vr = []
        for j in range(len(F)):
            c = qn * Finv[i][j]
            if c.denominator != 1:
                raise ValueError(f"lattice is not stable under q^{n}/alpha^{n}")
            vr.append(int(c))
        V.append(tuple(vr))
    rm = tuple(_action_matrix(field, rows, binv, tuple(Fraction(c) for c in b),
                              "the real multiplication order")
               for b in field.OL_basis)
    return DeligneModule(w=h, n=n, lattice=lat, basis=tuple(rows),
                         F=F, V=tuple(V), rm_action=rm)


def with_polarization(M: DeligneModule, lam) -> DeligneModule:
    return replace(M, polarization=tuple(M.field.elem(lam)))


# ---------------------------------------------------------------------------
# axiom checking


@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    failures: tuple   # subset of the check tags, in check order
    h_n: tuple
    slopes: tuple     # slope multiset of h_n, or None when not computable

    def __repr__(self):
        return f"AxiomReport(ok={self.ok}, failures={list(self.failures)})"


def _slope_multiset(coeffs, p, norm):
    """Newton slopes of an integer polynomial, normalized by `norm`,
    ascending with multiplicity.  Lower convex hull of the valuations."""
    pts = [(i, valuation(c, p)) for i, c in enumerate(coeffs) if c != 0]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.extend([Fraction(y1 - y2, (x2 - x1) * norm)] * (x2 - x1))
    return tuple(sorted(slopes))


def check_deligne_axioms(M: DeligneModule) -> AxiomReport:
    """Report on the module axioms; never raises, failures are listed.

    Tags: "v-integral", "fv-identity", "charpoly", "squarefree",
    "rm-commute", "newton-slopes".
    """
    w, n = M.w, M.n
    qn = w.q**n
    d = len(M.F)
    failures = []

    if any(not isinstance(x, int) and Fraction(x).denominator != 1
           for row in M.V for x in row):
        failures.append("v-integral")
    else:
        FV = mat_mul([list(r) for r in M.F], [list(r) for r in M.V])
        VF = mat_mul([list(r) for r in M.V], [list(r) for r in M.F])
        idq = [[qn if i == j else 0 for j in range(d)] for i in range(d)]
        if FV != idq or VF != idq:
            failures.append("fv-identity")

    hn = char_poly_of_power(w.h, w.q, n)
    cp = charpoly([list(r) for r in M.F])
    if [Fraction(c) for c in hn] != cp:
        failures.append("charpoly")
    if not is_squarefree(list(hn)):
        failures.append("squarefree")

    for A in M.rm_action:
        if mat_mul([list(r) for r in A], [list(r) for r in M.F]) != \
           mat_mul([list(r) for r in M.F], [list(r) for r in A]):
            failures.append("rm-commute")
            break

    slopes = None
    try:
        slopes = _slope_multiset(list(hn), w.p, w.m * n)
        if slopes != newton_polygon(w).slopes:
            failures.append("newton-slopes")
    except UnsupportedStratumError:
        failures.append("newton-slopes")

    return AxiomReport(ok=not failures, failures=tuple(failures),
                       h_n=tuple(hn), slopes=slopes)


# ---------------------------------------------------------------------------
# isomorphism


def are_isomorphic(M1: DeligneModule, M2: DeligneModule) -> bool:
    """Whether some field element carries one lattice onto the other.

    Equivalent to: equal multiplicator rings and equal canonical ideal-class
    labels.  Any module morphism commuting with F and the RM action is
    multiplication by an element of the (commutative) field, so this is the
    full isomorphism test.
    """
    if M1.w != M2.w or M1.n != M2.n:
        raise ValueError("modules belong to different isogeny data")
    field = M1.field
    O1 = multiplicator_ring(field, M1.lattice)
    O2 = multiplicator_ring(field, M2.lattice)
    if O1 != O2:
        return False
    return canonical_key(FracIdeal(field, M1.lattice, O1)) == \
        canonical_key(FracIdeal(field, M2.lattice, O2))


def _generator_between(field, T1: QLattice, T2: QLattice, O: Order):
    """x with x*T2 = T1, assuming the lattices are isomorphic O-modules.
    The colon lattice (T1 : T2) is then x*O, so a principality test on it
    recovers x (up to a unit, which is harmless)."""
    C = colon_lattice(field, T1, T2)
    x = is_principal(FracIdeal(field, C, O))
    if x is None:
        return None
    lat = QLattice.from_rows([field.mul(x, b) for b in T2.frac_rows()])
    return x if lat == T1 else None


def isomorphism_transform(M1: DeligneModule, M2: DeligneModule):
    """Unimodular integer U with U @ F2 = F1 @ U, or None when the modules
    are not isomorphic.  Column j of U holds the basis-1 coordinates of
    x * basis2[j] for the connecting element x."""
    if not are_isomorphic(M1, M2):
        return None
    field = M1.field
    O = multiplicator_ring(field, M1.lattice)
    x = _generator_between(field, M1.lattice, M2.lattice, O)
    assert x is not None, "isomorphic modules must be joined by an element"
    b1inv = mat_inv([list(r) for r in M1.basis])
    rows = []
    for b in M2.basis:
        c = vec_mat(field.mul(x, b), b1inv)
        assert all(v.denominator == 1 for v in c)
        rows.append([int(v) for v in c])
    U = transpose(rows)
    assert abs(mat_det(U)) == 1, "basis change between equal-covolume lattices"
    return tuple(tuple(r) for r in U)


# ---------------------------------------------------------------------------
# enumeration up to isomorphism


def enumerate_icm(h: WeilPolynomial, n: int, budget: int = 200000,
                  exhaustive: bool = False):
    """All level-n modules up to isomorphism, deterministically ordered.

    When the level order is Bass this is one module per ideal class of each
    over-order (level order first, maximal order last).  Otherwise -- or on
    request -- every stable lattice between the conductor and the maximal
    order is swept and deduplicated by class label.
    """
    field = cm_field(h.h, h.q)
    reason = degeneracy_reason(h.h, h.q, n)
    if reason is not None:
        raise DegenerateError(reason)
    Rn = construct_Rn(h, n)
    OK = maximal_order(field)
    if not exhaustive and is_bass(Rn, OK):
        orders = sorted(over_orders(Rn, OK),
                        key=lambda O: (-O.index_in(OK), O.lattice.rows))
        out = []
        for O in orders:
            for rep in class_group(O).reps:
                out.append(module_from_ideal(rep, h, n))
        return out
    return _icm_exhaustive(field, Rn, OK, h, n, budget)


def _icm_exhaustive(field, Rn, OK, h, n, budget):
    # every ideal class has a representative J with conductor <= J <= O_K
    cond = colon_lattice(field, Rn.lattice, OK.lattice)
    ok_rows = OK.lattice.frac_rows()
    Hf = hnf([list(OK.lattice.coords_of(r)) for r in cond.frac_rows()])
    total = cond.index_in(OK.lattice)
    rn_rows = Rn.lattice.frac_rows()
    d = field.d

    found = {}
    count = 0
    for k in _divisors(total):
        for H in _hnf_sublattices(d, k):
            count += 1
            if count > budget:
                raise BudgetError("module enumeration exceeded budget")
            if not all(_hnf_contains(H, v) for v in Hf):
                continue
            rows = [field.elem([sum(Fraction(H[r][c]) * ok_rows[c][i]
                                    for c in range(d)) for i in range(d)])
                    for r in range(d)]
            lat = QLattice.from_rows(rows)
            if not all(lat.contains(field.mul(g, b))
                       for g in rn_rows for b in rows):
                continue
            ring = multiplicator_ring(field, lat)
            key = (ring.lattice, canonical_key(FracIdeal(field, lat, ring)))
            if key not in found:
                found[key] = (ring, lat)
    items = sorted(found.values(),
                   key=lambda t: (-t[0].index_in(OK), t[0].lattice.rows,
                                  t[1].rows))
    return [module_from_ideal(FracIdeal(field, lat, ring), h, n)
            for ring, lat in items]


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


# ---------------------------------------------------------------------------
# polarizations


def _anti_fixed_dual_basis(field, T: QLattice):
    """Basis of {x : Tr(x * T * conj(T)) in Z, conj(x) = -x}, a rank-g
    lattice (conjugation acts integrally on the conjugation-stable trace
    dual, so the anti-fixed part is a saturated kernel)."""
    Tbar = QLattice.from_rows([field.conj(r) for r in T.frac_rows()])
    W = trace_dual(field, product_lattice(field, T, Tbar))
    wr = W.frac_rows()
    d = field.d
    C = []
    for r in wr:
        c = W.coords_of(field.conj(r))
        assert c is not None, "trace dual must be conjugation-stable"
        C.append(list(c))
    A = [[C[i][k] + (1 if i == k else 0) for k in range(d)] for i in range(d)]
    basis = []
    for cvec in left_kernel(A):
        x = field.elem([0] * d)
        for ci, row in zip(cvec, wr):
            x = field.add(x, field.scale(row, ci))
        basis.append(x)
    assert len(basis) == field.g, "anti-fixed part has rank g"
    return basis


def verify_polarization(M: DeligneModule, lam, Phi: CMType = None) -> bool:
    """Whether Tr(lam * x * conj(y)) is an integral unimodular antisymmetric
    pairing on the lattice, positive at the embeddings selected by Phi.

    Positivity is exact: lam = (2*alpha - beta) * mu with mu in the real
    subfield, and Im(phi_j(lam)) has the sign of sigma_j(mu) * Im(phi_j(alpha)),
    so the demanded signs of Im(phi_j(alpha)) must equal the place signs of mu.
    """
    field = M.field
    if Phi is None:
        Phi = default_cm_type(field.g)
    if len(Phi.signs) != field.g:
        raise ValueError("CM type has the wrong number of places")
    lam = field.elem(lam)
    if all(c == 0 for c in lam):
        return False
    if field.conj(lam) != field.scale(lam, -1):
        return False
    rows = M.basis
    G = [[field.trace(field.mul(lam, field.mul(rows[i], field.conj(rows[j]))))
          for j in range(len(rows))] for i in range(len(rows))]
    if any(x.denominator != 1 for row in G for x in row):
        return False
    if any(G[i][j] != -G[j][i] for i in range(len(G)) for j in range(len(G))):
        return False
    if abs(mat_det(G)) != 1:
        return False
    delta = field.sub(field.scale(field.alpha, 2), field.beta)
    mu = field.mul(lam, field.inv(delta))
    if not field.is_real(mu):
        return False
    return field.real_place_signs(mu) == Phi.signs


def find_principal_polarization(M: DeligneModule, Phi: CMType = None,
                                denom_bound: int = 20, budget: int = 200000):
    """First lam (in a deterministic coefficient sweep over the anti-fixed
    trace-dual lattice) passing verify_polarization, or None when the sweep
    up to coefficient size denom_bound finds nothing."""
    field = M.field
    if Phi is None:
        Phi = default_cm_type(field.g)
    basis = _anti_fixed_dual_basis(field, M.lattice)
    g = len(basis)
    count = 0
    for radius in range(1, denom_bound + 1):
        for coeffs in product(range(-radius, radius + 1), repeat=g):
            if max(abs(c) for c in coeffs) != radius:
                continue
            count += 1
            if count > budget:
                raise BudgetError("polarization search exceeded budget")
            lam = field.elem([0] * field.d)
            for ci, b in zip(coeffs, basis):
                lam = field.add(lam, field.scale(b, ci))
            if verify_polarization(M, lam, Phi):
                return lam
    return None


def polarization_equivalent(M: DeligneModule, lam1, lam2) -> bool:
    """Polarizations agreeing up to a totally positive element of the real
    subfield count as the same."""
    field = M.field
    r = field.mul(field.elem(lam1), field.inv(field.elem(lam2)))
    return field.is_real(r) and field.is_totally_positive(r)


# ---------------------------------------------------------------------------
# serialization


def module_dict(M: DeligneModule) -> dict:
    """JSON-ready exact form: {F, V, rm_action, lattice, lambda?}."""
    out = {
        "n": M.n,
        "F": [list(r) for r in M.F],
        "V": [list(r) for r in M.V],
        "rm_action": [[list(r) for r in A] for A in M.rm_action],
        "lattice": {"den": M.lattice.den,
                    "rows": [list(r) for r in M.lattice.rows]},
    }
    if M.polarization is not None:
        out["lambda"] = [str(c) for c in M.polarization]
    return out
