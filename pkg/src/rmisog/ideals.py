"""Fractional ideals, class groups, and the norm-map kernel.

Principality is decided exactly.  T2(x) = Tr(x * conj(x)) is a positive
definite rational quadratic form on any full lattice in the CM field, and a
generator of I satisfies |N(x)| = N(I).  For g = 1 every such element has
T2(x) = 2 N(I) on the nose; for g = 2 scaling by the fundamental real unit
moves some generator into T2(x) <= 2 sqrt(N(I)) * (e + 1/e) with e the unit's
larger embedding, a bound we evaluate in integers.  Complete lattice-point
enumeration under the bound is therefore a decision procedure, not a
heuristic.

Class groups are generated by the invertible integral ideals of prime-power
norm up to the Minkowski bound.  Classes are labelled by canonical keys: the
lex-least integral primitive model of (1/x)*J over the minimal-norm elements
x of J, a label that is provably generator-independent.  All key arithmetic
runs on integer matrices in order coordinates, so class-group assembly never
touches rational arithmetic on the hot path.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor, gcd, isqrt

from sympy import primerange

from .errors import BudgetError
from .field import CMField
from .imquad import reduce_form
from .linalg import QLattice, hnf, mat_inv, vec_mat
from .nt import abelian_invariants
from .orders import (Order, colon_lattice, is_gorenstein, multiplicator_ring,
                     product_lattice)
from .realquad import fundamental_unit, is_narrowly_principal_form, narrow_class_number


# ---------------------------------------------------------------------------
# the T2 form and exact lattice-point enumeration


def t2_gram(field: CMField, lat: QLattice):
    """Gram matrix of T2 on the lattice basis: G[i][j] = Tr(b_i * conj(b_j))."""
    B = lat.frac_rows()
    Bc = [field.conj(b) for b in B]
    n = len(B)
    G = [[field.trace(field.mul(B[i], Bc[j])) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            assert G[i][j] == G[j][i]
    return G


def _cholesky(G):
    """G = sum_k d_k (x_k + sum_{j>k} r[k][j] x_j)^2 with exact Fractions."""
    n = len(G)
    A = [[Fraction(G[i][j]) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    r = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n):
        d[k] = A[k][k]
        assert d[k] > 0, "form is not positive definite"
        for j in range(k + 1, n):
            r[k][j] = A[k][j] / d[k]
        for i in range(k + 1, n):
            for j in range(i, n):
                A[i][j] -= d[k] * r[k][i] * r[k][j]
    return d, r


def enumerate_short_vectors(G, bound):
    """All integer vectors v != 0 with v G v^T <= bound, up to sign."""
    n = len(G)
    d, r = _cholesky(G)
    bound = Fraction(bound)
    out = []
    x = [0] * n

    def rec(i, rem):
        c = sum((r[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        t = rem / d[i]
        spread = isqrt(t.numerator // t.denominator) + 2
        for xi in range(floor(-c) - spread, ceil(-c) + spread + 1):
            q = d[i] * (xi + c) ** 2
            if q > rem:
                continue
            x[i] = xi
            if i == 0:
                v = tuple(x)
                if any(v):
                    out.append(v)
            else:
                rec(i - 1, rem - q)
        x[i] = 0

    if bound > 0:
        rec(n - 1, bound)
    # keep one of each +-v
    return [v for v in out if next(c for c in v if c) > 0]


def _short_elements(field: CMField, lat: QLattice, bound):
    B = lat.frac_rows()
    out = []
    for v in enumerate_short_vectors(t2_gram(field, lat), bound):
        e = field.elem([0] * field.d)
        for c, b in zip(v, B):
            if c:
                e = field.add(e, field.scale(b, c))
        out.append(e)
    return out


# ---------------------------------------------------------------------------
# unit-reduction window


def _unit_window_sq(O: "Order") -> int:
    """W^2 such that every x with |N(x)| = v has a unit multiple with
    T2 <= 2*sqrt(v*W^2); W = e + 1/e for the smallest power of the
    fundamental real unit lying in O (g = 2 only)."""
    field = O.field
    field.require_small_real_field()
    assert field.gL == 2
    D0 = field.D0
    T, U, nrm = fundamental_unit(D0)
    # (t + u*sqrt(D0))/2 in (1, omega) coordinates: ((t - u*D0)/2, u)
    t, u, n = T, U, nrm
    for _ in range(256):
        assert (t - u * D0) % 2 == 0
        elem = field.add(
            field.scale(field.one, Fraction(t - u * D0, 2)),
            field.scale(field.omega, u),
        )
        if O.contains(elem):
            return t * t if n == 1 else u * u * D0
        t, u, n = (t * T + u * U * D0) // 2, (t * U + u * T) // 2, n * nrm
    raise BudgetError("no power of the fundamental unit lies in the order")


def _minkowski_cap(disc: int, gL: int) -> int:
    # (4/pi)^s * (2g)!/(2g)^(2g) * sqrt|disc|, rounded up generously:
    # 2/pi < 0.6367 (g=1), 3/(2 pi^2) < 0.15199 (g=2)
    root = isqrt(abs(disc)) + 1
    if gL == 1:
        return (6367 * root) // 10000 + 1
    return (15199 * root) // 100000 + 1


def _int_det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    return sum((-1) ** j * M[0][j] *
               _int_det([row[:j] + row[j + 1:] for row in M[1:]])
               for j in range(n) if M[0][j])


def _int_adjugate(M):
    """adj(M) with M @ adj(M) = det(M) * Id, integer cofactor expansion."""
    n = len(M)
    if n == 2:
        return [[M[1][1], -M[0][1]], [-M[1][0], M[0][0]]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != j]
                     for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * _int_det(minor)
    return adj


# ---------------------------------------------------------------------------
# per-order integer context: structure constants, norm form, conjugation


_CTX_CACHE: dict = {}


class _OrderCtx:
    """Integer-arithmetic view of an order: multiplication and conjugation
    as integer matrices in the order basis, the T2 Gram, and (g = 1) the
    binary norm form.  Everything downstream of class-group assembly works
    in these coordinates."""

    def __init__(self, O: Order):
        field = O.field
        self.O = O
        self.field = field
        self.d = field.d
        B = O.lattice.frac_rows()
        self.basis = B
        self.binv = mat_inv(B)
        mats = []
        for bj in B:
            rows = []
            for bi in B:
                co = O.lattice.coords_of(field.mul(bi, bj))
                assert co is not None, "order basis is not multiplicatively closed"
                rows.append(list(co))
            mats.append(rows)
        self.mats = mats
        G = t2_gram(field, O.lattice)
        self.gram = [[int(x) for x in row] for row in G]
        self.cap = _minkowski_cap(O.disc, field.gL)
        if field.gL == 1:
            assert self.gram[0][0] % 2 == 0 and self.gram[1][1] % 2 == 0
            self.nform = (self.gram[0][0] // 2, self.gram[0][1],
                          self.gram[1][1] // 2)
        else:
            self.nform = None
        self._w2 = None

    # -- element arithmetic in order coordinates ---------------------------

    def prod(self, u, v):
        d = self.d
        out = [0] * d
        for j in range(d):
            vj = v[j]
            if not vj:
                continue
            Mj = self.mats[j]
            for i in range(d):
                ui = u[i]
                if not ui:
                    continue
                c = ui * vj
                row = Mj[i]
                for k in range(d):
                    out[k] += c * row[k]
        return out

    def mult_matrix_of(self, u):
        """M_x with coords(y*x) = coords(y) @ M_x, integer entries."""
        d = self.d
        return [[sum(u[j] * self.mats[j][i][k] for j in range(d))
                 for k in range(d)] for i in range(d)]

    def norm_of(self, u) -> int:
        if self.nform is not None:
            A, Bc, C = self.nform
            return A * u[0] * u[0] + Bc * u[0] * u[1] + C * u[1] * u[1]
        return _int_det(self.mult_matrix_of(u))

    def elem_of(self, u):
        e = self.field.elem([0] * self.d)
        for c, b in zip(u, self.basis):
            if c:
                e = self.field.add(e, self.field.scale(b, c))
        return e

    def window_sq(self) -> int:
        if self._w2 is None:
            self._w2 = _unit_window_sq(self.O)
        return self._w2

    # -- integral primitive models ------------------------------------------

    def intprim_coords(self, lat: QLattice):
        """(M, scale): M integer HNF rows with content 1 spanning scale*lat
        in order coordinates."""
        coords = [vec_mat(b, self.binv) for b in lat.frac_rows()]
        den = 1
        for c in coords:
            for x in c:
                den = den * x.denominator // gcd(den, x.denominator)
        rows = [[int(x * den) for x in c] for c in coords]
        rows = hnf(rows)
        assert len(rows) == self.d, "ideal lattice must have full rank"
        cont = 0
        for r in rows:
            for v in r:
                cont = gcd(cont, v)
        M = tuple(tuple(v // cont for v in r) for r in rows)
        return M, Fraction(den, cont)

    def _reduce_int_rows(self, rows):
        rows = hnf(rows)
        assert len(rows) == self.d
        cont = 0
        for r in rows:
            for v in r:
                cont = gcd(cont, v)
        return tuple(tuple(v // cont for v in r) for r in rows)

    # -- minimal-norm elements ----------------------------------------------

    def _binary_reps(self, A, Bf, C, n):
        """All (x, y) with A x^2 + Bf xy + C y^2 = n, y >= 0, sign-deduped."""
        dd = 4 * A * C - Bf * Bf
        assert dd > 0 and A > 0
        out = []
        ymax = isqrt(4 * A * n // dd)
        for y in range(ymax + 1):
            s2 = Bf * Bf * y * y - 4 * A * (C * y * y - n)
            s = isqrt(s2)
            if s * s != s2:
                continue
            for sg in ((s,) if s == 0 else (s, -s)):
                num = -Bf * y + sg
                if num % (2 * A):
                    continue
                x = num // (2 * A)
                if y > 0 or x > 0:
                    out.append((x, y))
        return out

    def min_norm(self, M):
        """(nu, coord vectors) of minimal |N| over the integral primitive
        ideal lattice with basis rows M."""
        NI = 1
        for i in range(self.d):
            NI *= M[i][i]
        if self.nform is not None:
            A, Bc, C = self.nform
            q = lambda u: A * u[0] * u[0] + Bc * u[0] * u[1] + C * u[1] * u[1]
            AJ = q(M[0])
            CJ = q(M[1])
            BJ = q([M[0][0] + M[1][0], M[0][1] + M[1][1]]) - AJ - CJ
            for k in range(1, self.cap + 1):
                reps = self._binary_reps(AJ, BJ, CJ, k * NI)
                if reps:
                    return k * NI, [
                        [x * M[0][0] + y * M[1][0], x * M[0][1] + y * M[1][1]]
                        for x, y in reps
                    ]
            raise BudgetError("minimal-norm search exceeded the Minkowski cap")
        d = self.d
        GM = [[sum(M[i][a] * self.gram[a][b] * M[j][b]
                   for a in range(d) for b in range(d))
               for j in range(d)] for i in range(d)]
        w2 = self.window_sq()
        for k in range(1, self.cap + 1):
            nu = k * NI
            bound = 2 * (isqrt(nu * w2) + 1)
            found = []
            for v in enumerate_short_vectors(GM, bound):
                u = [sum(v[i] * M[i][j] for i in range(d)) for j in range(d)]
                if abs(self.norm_of(u)) == nu:
                    found.append(u)
            if found:
                return nu, found
        raise BudgetError("minimal-norm search exceeded the Minkowski cap")

    # -- canonical class keys -----------------------------------------------

    def key_of(self, M):
        """Canonical ideal-class label of the integral primitive model M;
        equal keys <=> equal ideal classes.

        Rank 2: the Gauss-reduced primitive norm form of the lattice.  HNF
        rows have positive determinant, so the orientation (hence the sign
        of the middle coefficient) is consistent across models, and reduced
        forms classify lattices up to scaling by a field element exactly.

        Higher rank: lex-least integral primitive model of (1/x)*J over the
        minimal-norm elements x of J; the lattice N(x)*(1/x)*J = J @ adj(M_x)
        is computed in integers."""
        if self.nform is not None:
            A, Bc, C = self.nform
            q = lambda u: A * u[0] * u[0] + Bc * u[0] * u[1] + C * u[1] * u[1]
            AJ = q(M[0])
            CJ = q(M[1])
            BJ = q((M[0][0] + M[1][0], M[0][1] + M[1][1])) - AJ - CJ
            g = gcd(gcd(AJ, BJ), CJ)
            return reduce_form(AJ // g, BJ // g, CJ // g)
        _, xs = self.min_norm(M)
        best = None
        for u in xs:
            adj = _int_adjugate(self.mult_matrix_of(u))
            rows = [[sum(row[i] * adj[i][k] for i in range(self.d))
                     for k in range(self.d)] for row in M]
            K = self._reduce_int_rows(rows)
            if best is None or K < best:
                best = K
        return best

    def mul_models(self, M1, M2):
        """Integral primitive model of the product of two model lattices."""
        rows = [list(self.prod(r1, r2)) for r1 in M1 for r2 in M2]
        return self._reduce_int_rows(rows)

    def key_mul(self, k1, k2):
        # keys double as models only in the higher-rank regime
        assert self.nform is None
        return self.key_of(self.mul_models(k1, k2))

    def identity_key(self):
        return self.key_of(tuple(
            tuple(1 if i == j else 0 for j in range(self.d))
            for i in range(self.d)))

    def lattice_of_key(self, M) -> QLattice:
        return QLattice.from_rows([self.elem_of(row) for row in M])


def _ctx(O: Order) -> _OrderCtx:
    key = (O.field.r, O.field.q, O.lattice)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = _OrderCtx(O)
        _CTX_CACHE[key] = ctx
    return ctx


# ---------------------------------------------------------------------------
# fractional ideals


class FracIdeal:
    """Full-rank O-stable lattice in the field; `order` is always the true
    multiplicator ring (computed when not supplied by the caller)."""

    def __init__(self, field: CMField, lattice: QLattice, order: Order = None):
        if lattice.rank != lattice.dim():
            raise ValueError("ideal lattice must have full rank")
        self.field = field
        self.lattice = lattice
        self.order = order if order is not None else multiplicator_ring(field, lattice)
        self._norm = None

    @property
    def norm(self) -> Fraction:
        if self._norm is None:
            self._norm = self.lattice.covolume() / self.order.lattice.covolume()
        return self._norm

    def __eq__(self, other):
        return isinstance(other, FracIdeal) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"FracIdeal(norm={self.norm}, den={self.lattice.den})"


def make_ideal(O: Order, gens) -> FracIdeal:
    """O-module generated by the given field elements (ints allowed)."""
    field = O.field
    rows = []
    for g in gens:
        if isinstance(g, int):
            g = field.scale(field.one, g)
        g = tuple(Fraction(c) for c in g)
        for b in O.lattice.frac_rows():
            rows.append(field.mul(g, b))
    lat = QLattice.from_rows(rows)
    return FracIdeal(field, lat)


def ideal_product(I: FracIdeal, J: FracIdeal) -> FracIdeal:
    if I.field is not J.field:
        raise ValueError("ideals live in different fields")
    return FracIdeal(I.field, product_lattice(I.field, I.lattice, J.lattice))


def ideal_norm(I: FracIdeal) -> Fraction:
    return I.norm


def ideal_inverse(I: FracIdeal) -> FracIdeal:
    """(R : I) over the multiplicator ring R; requires I invertible."""
    R = I.order
    inv = colon_lattice(I.field, R.lattice, I.lattice)
    if product_lattice(I.field, I.lattice, inv) != R.lattice:
        raise ValueError("ideal is not invertible over its multiplicator ring")
    return FracIdeal(I.field, inv, R)


def conjugate_ideal(I: FracIdeal) -> FracIdeal:
    field = I.field
    lat = QLattice.from_rows([field.conj(b) for b in I.lattice.frac_rows()])
    ring = Order(field, QLattice.from_rows(
        [field.conj(b) for b in I.order.lattice.frac_rows()]))
    return FracIdeal(field, lat, ring)


def is_principal(I: FracIdeal):
    """A generator of I, or None.  Complete by the T2-window argument:
    a generator exists iff some x in I has |N(x)| = N(I)."""
    ctx = _ctx(I.order)
    M, scale = ctx.intprim_coords(I.lattice)
    NI = 1
    for i in range(ctx.d):
        NI *= M[i][i]
    if ctx.nform is not None:
        A, Bc, C = ctx.nform
        q = lambda u: A * u[0] * u[0] + Bc * u[0] * u[1] + C * u[1] * u[1]
        AJ = q(M[0])
        CJ = q(M[1])
        BJ = q([M[0][0] + M[1][0], M[0][1] + M[1][1]]) - AJ - CJ
        reps = ctx._binary_reps(AJ, BJ, CJ, NI)
        if not reps:
            return None
        x, y = reps[0]
        u = [x * M[0][0] + y * M[1][0], x * M[0][1] + y * M[1][1]]
        return I.field.scale(ctx.elem_of(u), 1 / scale)
    d = ctx.d
    GM = [[sum(M[i][a] * ctx.gram[a][b] * M[j][b]
               for a in range(d) for b in range(d))
           for j in range(d)] for i in range(d)]
    bound = 2 * (isqrt(NI * ctx.window_sq()) + 1)
    for v in enumerate_short_vectors(GM, bound):
        u = [sum(v[i] * M[i][j] for i in range(d)) for j in range(d)]
        if abs(ctx.norm_of(u)) == NI:
            return I.field.scale(ctx.elem_of(u), 1 / scale)
    return None


def canonical_key(I: FracIdeal):
    """Exact label of the ideal class of I over its multiplicator ring."""
    ctx = _ctx(I.order)
    M, _ = ctx.intprim_coords(I.lattice)
    return ctx.key_of(M)


# ---------------------------------------------------------------------------
# class groups


@dataclass(frozen=True)
class ClassGroup:
    order: Order
    h: int
    invariants: tuple
    reps: tuple  # FracIdeal, identity class first

    def __repr__(self):
        return f"ClassGroup(h={self.h}, invariants={list(self.invariants)})"


def _hnf_sublattices(d: int, index: int):
    """Upper-triangular integer HNF bases of the sublattices of Z^d of the
    given index: diagonal product = index, entries right of the pivot
    reduced modulo the pivot below them."""

    def diagonals(k, rem):
        if k == d - 1:
            yield [rem]
            return
        for h in _divisors_of(rem):
            for rest in diagonals(k + 1, rem // h):
                yield [h] + rest

    for diag in diagonals(0, index):
        H = [[diag[i] if i == j else 0 for j in range(d)] for i in range(d)]
        free = [(i, j) for i in range(d) for j in range(i + 1, d) if diag[j] > 1]

        def fill(idx):
            if idx == len(free):
                yield [row[:] for row in H]
                return
            i, j = free[idx]
            for v in range(diag[j]):
                H[i][j] = v
                yield from fill(idx + 1)
            H[i][j] = 0

        yield from fill(0)


def _divisors_of(n: int):
    out = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(out + [n // d for d in out]))


def _hnf_contains(H, v) -> bool:
    """Membership of integer vector v in the row span of upper-triangular H."""
    w = list(v)
    for i in range(len(H)):
        if w[i] % H[i][i]:
            return False
        c = w[i] // H[i][i]
        if c:
            for j in range(i, len(w)):
                w[j] -= c * H[i][j]
    return not any(w)


def _ideal_generators(ctx: _OrderCtx, budget: int):
    """HNF bases (order coordinates) of the invertible integral ideals of
    prime-power norm up to the Minkowski bound; their classes generate the
    class group."""
    O = ctx.O
    field = ctx.field
    d = ctx.d
    out, seen = [], 0
    for p in primerange(2, ctx.cap + 1):
        pk = p
        while pk <= ctx.cap:
            for H in _hnf_sublattices(d, pk):
                seen += 1
                if seen > budget:
                    raise BudgetError("ideal enumeration budget exceeded")
                stable = True
                for row in H:
                    for M in ctx.mats:
                        prod = [sum(row[i] * M[i][j] for i in range(d))
                                for j in range(d)]
                        if not _hnf_contains(H, prod):
                            stable = False
                            break
                    if not stable:
                        break
                if not stable:
                    continue
                lat = ctx.lattice_of_key(tuple(tuple(r) for r in H))
                ring = multiplicator_ring(field, lat)
                if ring.lattice != O.lattice:
                    continue
                inv = colon_lattice(field, O.lattice, lat)
                if product_lattice(field, lat, inv) != O.lattice:
                    continue
                out.append(tuple(tuple(r) for r in H))
            pk *= p
    return out


def class_group(O: Order, budget: int = 10**6) -> ClassGroup:
    """Class group of invertible ideals, by exhaustive generator enumeration
    up to the Minkowski bound and canonical-key closure."""
    if not is_gorenstein(O):
        raise ValueError("class_group requires a Gorenstein order")
    ctx = _ctx(O)
    ident_model = tuple(tuple(1 if i == j else 0 for j in range(ctx.d))
                        for i in range(ctx.d))
    ident = ctx.key_of(ident_model)
    # one concrete model lattice per class key; products are formed on the
    # models, keys only label the classes
    models = {ident: ident_model}
    keys = {ident}
    ordered = [ident]

    def mul(k1, k2):
        M = ctx.mul_models(models[k1], models[k2])
        k = ctx.key_of(M)
        models.setdefault(k, M)
        return k

    for H in _ideal_generators(ctx, budget):
        gk = ctx.key_of(H)
        models.setdefault(gk, H)
        if gk in keys:
            continue
        base = list(ordered)
        x = gk
        while x not in keys:
            for s in base:
                nk = mul(s, x)
                if nk not in keys:
                    keys.add(nk)
                    ordered.append(nk)
            x = mul(x, gk)
    h = len(keys)
    invs = abelian_invariants(sorted(keys), mul, ident)
    rep_keys = [ident] + sorted(k for k in keys if k != ident)
    reps = tuple(FracIdeal(O.field, ctx.lattice_of_key(models[k]), O)
                 for k in rep_keys)
    return ClassGroup(order=O, h=h, invariants=invs, reps=reps)


# ---------------------------------------------------------------------------
# the norm map Cl(R) -> Cl+(O_L) and its kernel


def norm_ideal_form(I: FracIdeal):
    """The norm N_{K/L}(I) as a primitive integral O_L-ideal, returned as an
    integral binary quadratic form of discriminant D0.  The O_L-module is
    spanned by the norms of a basis and of its pairwise sums."""
    field = I.field
    field.require_small_real_field()
    assert field.gL == 2
    D0 = field.D0
    c0 = field.g0_poly[0]
    B = I.lattice.frac_rows()
    gens = [field.mul(b, field.conj(b)) for b in B]
    for i in range(len(B)):
        for j in range(i + 1, len(B)):
            s = field.add(B[i], B[j])
            gens.append(field.mul(s, field.conj(s)))
    rows = []
    for gelem in gens:
        x, y = field.real_coords(gelem)
        rows.append((x, y))
        rows.append((-c0 * y, x + D0 * y))  # omega * (x + y*omega)
    J = QLattice.from_rows(rows)
    if J.rank != 2:
        raise ValueError("norm ideal not full rank")
    cont = 0
    for r in J.rows:
        for v in r:
            cont = gcd(cont, v)
    # positive rational scaling preserves the narrow class
    prim = [[v // cont for v in r] for r in J.rows]
    (a, b01), (z, h11) = prim
    assert z == 0
    nj = a * h11

    def _norm_l(x, y):
        return x * x + D0 * x * y + c0 * y * y

    A = _norm_l(a, b01)
    Bc = D0 * a * h11 + 2 * c0 * b01 * h11  # Tr(g1 * conj(g2))
    C = _norm_l(0, h11)
    assert A % nj == 0 and Bc % nj == 0 and C % nj == 0
    f = (A // nj, Bc // nj, C // nj)
    assert f[1] ** 2 - 4 * f[0] * f[2] == D0
    assert gcd(gcd(f[0], f[1]), f[2]) == 1
    return f


def norm_map_kernel(cl: ClassGroup):
    """(size, invariants) of the kernel of the norm map from the class group
    to the narrow class group of the real-multiplication order."""
    field = cl.order.field
    if field.gL == 1 or narrow_class_number(field.D0) == 1:
        return cl.h, cl.invariants
    ctx = _ctx(cl.order)
    ident = ctx.identity_key()
    member = []
    for rep in cl.reps:
        f = norm_ideal_form(rep)
        if is_narrowly_principal_form(f, field.D0):
            member.append(canonical_key(rep))
    assert ident in member
    invs = abelian_invariants(sorted(member), ctx.key_mul, ident)
    return len(member), invs
