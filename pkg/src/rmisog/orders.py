"""Orders in the CM field of a Weil polynomial.

An order is a full-rank lattice (on the power basis of alpha) that is
closed under multiplication and contains 1.  All computations are exact:
lattices are HNF-reduced rational lattices, duals come from inverting
basis matrices over Q, and the maximal order is found with the standard
radical/idealizer (round-two) iteration.
"""

from fractions import Fraction

from .errors import BudgetError, PrecisionError
from .field import CMField, cm_field
from .linalg import (QLattice, mat_det, mat_inv, mat_mul, nullspace_mod_p,
                     smith_invariants, snf_with_transforms, transpose)
from .localdata import analyze_level
from .nt import divisors, factorint, inv_mod, valuation
from .poly import WeilPolynomial


class Order:
    """Ring of rank [K:Q]; `lattice` holds its basis in power-basis coordinates."""

    def __init__(self, field: CMField, lattice: QLattice, check: bool = False):
        if lattice.rank != lattice.dim():
            raise ValueError("order lattice must have full rank")
        self.field = field
        self.lattice = lattice
        self._disc = None
        if check and not is_ring(field, lattice):
            raise ValueError("lattice is not closed under multiplication")

    def basis(self):
        return self.lattice.frac_rows()

    @property
    def disc(self) -> int:
        if self._disc is None:
            B = self.basis()
            T = self.field.trace_mat
            gram = mat_mul(mat_mul(B, T), transpose(B))
            d = mat_det(gram)
            assert d.denominator == 1 and d != 0
            self._disc = int(d)
        return self._disc

    def contains(self, vec) -> bool:
        return self.lattice.contains(vec)

    def index_in(self, other: "Order") -> int:
        return self.lattice.index_in(other.lattice)

    def __eq__(self, other):
        return isinstance(other, Order) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"Order(disc={self.disc}, den={self.lattice.den})"


def product_lattice(field: CMField, A: QLattice, B: QLattice) -> QLattice:
    """Lattice generated by all products a*b over the two bases."""
    rows = [field.mul(a, b) for a in A.frac_rows() for b in B.frac_rows()]
    return QLattice.from_rows(rows)


def is_ring(field: CMField, lat: QLattice) -> bool:
    if not lat.contains(field.one):
        return False
    B = lat.frac_rows()
    return all(lat.contains(field.mul(B[i], B[j]))
               for i in range(len(B)) for j in range(i, len(B)))


def order_from_generators(field: CMField, gens) -> Order:
    """Smallest order containing the given integral generators.

    Raises ValueError if a generator is not integral or the resulting ring
    does not have full rank in the field.
    """
    for g in gens:
        if not field.is_integral(g):
            raise ValueError("generator is not integral")
    lat = QLattice.from_rows([field.one] + [tuple(Fraction(c) for c in g) for g in gens])
    for _ in range(64):
        B = lat.frac_rows()
        prods = [field.mul(B[i], B[j]) for i in range(len(B)) for j in range(i, len(B))]
        new = QLattice.from_rows(list(B) + prods)
        if new == lat:
            break
        lat = new
    else:
        raise RuntimeError("order closure did not stabilize")
    if lat.rank != lat.dim():
        raise ValueError("generators do not span the field")
    return Order(field, lat)


def monogenic_lattice(field: CMField, x) -> QLattice:
    """Lattice Z[x] = span of 1, x, ..., x^(d-1); must have full rank."""
    d = field.d
    rows, cur = [], field.one
    for _ in range(d):
        rows.append(cur)
        cur = field.mul(cur, x)
    lat = QLattice.from_rows(rows)
    if lat.rank != d:
        raise ValueError("element does not generate the field")
    return lat


def level_order(field: CMField, n: int) -> Order:
    """The order O_L[alpha^n, q^n/alpha^n] = O_L + O_L*alpha^n."""
    field.require_small_real_field()
    an = tuple(Fraction(c) for c in field.alpha_pow(n))
    rows = list(field.OL_basis) + [field.mul(b, an) for b in field.OL_basis]
    return Order(field, QLattice.from_rows(rows))


# ---------------------------------------------------------------------------
# duals, colons, multiplicator rings


def trace_dual(field: CMField, lat: QLattice) -> QLattice:
    """{x : Tr(x*y) in Z for all y in lat}."""
    R = mat_mul(lat.frac_rows(), field.trace_mat)
    return QLattice.from_rows(transpose(mat_inv(R)))


def colon_lattice(field: CMField, J: QLattice, I: QLattice) -> QLattice:
    """(J : I) = {x in K : x*I <= J}, for full-rank lattices."""
    CJ = mat_inv(transpose(J.frac_rows()))
    rows = []
    for b in I.frac_rows():
        rows.extend(mat_mul(CJ, field.mult_matrix(b)))
    lam = QLattice.from_rows(rows)
    assert lam.rank == lam.dim()
    return QLattice.from_rows(transpose(mat_inv(lam.frac_rows())))


def multiplicator_ring(field: CMField, lat: QLattice) -> Order:
    return Order(field, colon_lattice(field, lat, lat))


# ---------------------------------------------------------------------------
# maximal order (round two)


def _radical_lattice(O: Order, ell: int) -> QLattice:
    """Radical of ell*O in O: kernel of the iterated Frobenius on O/ell*O."""
    field, B = O.field, O.basis()
    d = len(B)
    # multiplication tensor of O mod ell:  b_i * b_j = sum_k c[i][j][k] b_k
    tensor = []
    for i in range(d):
        row = []
        for j in range(d):
            co = O.lattice.coords_of(field.mul(B[i], B[j]))
            assert co is not None and all(c.denominator == 1 for c in co)
            row.append([int(c) % ell for c in co])
        tensor.append(row)

    def mul_mod(x, y):
        out = [0] * d
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        cij = tensor[i][j]
                        f = xi * yj
                        for k in range(d):
                            out[k] = (out[k] + f * cij[k]) % ell
        return out

    def pow_mod(x, e):
        one = O.lattice.coords_of(field.one)
        acc = [int(c) % ell for c in one]
        base = list(x)
        while e:
            if e & 1:
                acc = mul_mod(acc, base)
            e >>= 1
            if e:
                base = mul_mod(base, base)
        return acc

    frob_cols = [pow_mod([1 if k == i else 0 for k in range(d)], ell) for i in range(d)]
    F = [[frob_cols[j][i] for j in range(d)] for i in range(d)]
    t = 1
    while ell**t < d:
        t += 1
    A = F
    for _ in range(t - 1):
        A = [[sum(A[i][k] * F[k][j] for k in range(d)) % ell for j in range(d)]
             for i in range(d)]
    kern = nullspace_mod_p(A, ell)
    rows = []
    for v in kern:
        acc = field.elem([0] * d)
        for k, vk in enumerate(v):
            if vk:
                acc = field.add(acc, field.scale(B[k], vk))
        rows.append(acc)
    rows.extend(field.scale(b, ell) for b in B)
    return QLattice.from_rows(rows)


def maximal_order(field: CMField) -> Order:
    """Ring of integers O_K, cached on the field object."""
    cached = getattr(field, "_max_order", None)
    if cached is not None:
        return cached
    d = field.d
    O = Order(field, QLattice.from_rows(
        [[Fraction(1) if j == i else Fraction(0) for j in range(d)] for i in range(d)]))
    for ell, e in sorted(factorint(abs(O.disc)).items()):
        if e < 2:
            continue
        while True:
            rad = _radical_lattice(O, ell)
            O2 = multiplicator_ring(field, rad)
            if O2.lattice == O.lattice:
                break
            O = O2
    field._max_order = O
    return O


# ---------------------------------------------------------------------------
# Gorenstein / Bass / over-orders


def is_gorenstein(O: Order) -> bool:
    """True iff the trace dual of O is an invertible O-ideal."""
    T = trace_dual(O.field, O.lattice)
    C = colon_lattice(O.field, O.lattice, T)
    return product_lattice(O.field, T, C) == O.lattice


def is_bass(O: Order, OK: Order = None) -> bool:
    """True iff O_K/O is cyclic (at most one nontrivial Smith invariant)."""
    if OK is None:
        OK = maximal_order(O.field)
    A = []
    for b in O.basis():
        co = OK.lattice.coords_of(b)
        assert co is not None
        A.append([int(c) for c in co])
    inv = smith_invariants(A)
    return sum(1 for x in inv if abs(x) != 1) <= 1


def over_orders(R: Order, OK: Order = None, budget: int = 200000) -> list:
    """All orders between R and O_K, ascending by the index divisor [O : R].

    Uses the cyclic-quotient shortcut when O_K/R is cyclic; otherwise falls
    back to exhaustive HNF enumeration (BudgetError beyond `budget`).
    """
    field = R.field
    if OK is None:
        OK = maximal_order(field)
    i_n = R.index_in(OK)
    if i_n == 1:
        return [R]
    A = []
    for b in R.basis():
        co = OK.lattice.coords_of(b)
        assert co is not None
        A.append([int(c) for c in co])
    D, _, V = snf_with_transforms(A)
    diag = [abs(D[i][i]) for i in range(len(D))]
    nontriv = [i for i, x in enumerate(diag) if x != 1]
    if len(nontriv) > 1:
        return _over_orders_exhaustive(R, OK, A, i_n, budget)

    j = nontriv[0]
    Vinv = mat_inv(V)
    assert all(c.denominator == 1 for c in Vinv[j])
    gen_ok = [int(c) for c in Vinv[j]]
    ok_basis = OK.basis()
    gen = field.elem([0] * field.d)
    for k, c in enumerate(gen_ok):
        if c:
            gen = field.add(gen, field.scale(ok_basis[k], c))
    out = []
    for dd in divisors(i_n):
        scaled = field.scale(gen, i_n // dd)
        lat = QLattice.from_rows(list(R.basis()) + [scaled])
        O = Order(field, lat, check=True)
        assert O.index_in(OK) == i_n // dd
        out.append(O)
    assert out[0].lattice == R.lattice and out[-1].lattice == OK.lattice
    return out


def _over_orders_exhaustive(R: Order, OK: Order, A, i_n: int, budget: int) -> list:
    field = R.field
    d = field.d
    ok_basis = OK.basis()

    def diagonals(k, rem):
        # all (h_k..h_d) with product dividing rem
        if k == d:
            yield ()
            return
        for h in divisors(rem):
            for rest in diagonals(k + 1, rem // h):
                yield (h,) + rest

    found = []
    count = 0
    for diag in diagonals(0, i_n):
        # upper-triangular HNF rows in OK coordinates; free entries above pivots
        free_ranges = []
        for c in range(d):
            for r in range(c):
                free_ranges.append((r, c, diag[c]))

        def fill(idx, H):
            nonlocal count
            if idx == len(free_ranges):
                count += 1
                if count > budget:
                    raise BudgetError("over-order enumeration exceeded budget")
                rows = []
                for r in range(d):
                    acc = field.elem([0] * d)
                    for c in range(d):
                        if H[r][c]:
                            acc = field.add(acc, field.scale(ok_basis[c], H[r][c]))
                    rows.append(acc)
                lat = QLattice.from_rows(rows)
                if lat.contains_lattice(R.lattice) and is_ring(field, lat):
                    found.append(Order(field, lat))
                return
            r, c, bound = free_ranges[idx]
            for v in range(bound):
                H[r][c] = v
                fill(idx + 1, H)
            H[r][c] = 0

        H0 = [[diag[r] if r == c else 0 for c in range(d)] for r in range(d)]
        fill(0, H0)
    found.sort(key=lambda O: i_n // O.index_in(OK))
    return found


# ---------------------------------------------------------------------------
# the level-n endomorphism order R_n


def construct_Rn(w: WeilPolynomial, n: int, local=None) -> Order:
    """O_L[alpha^n, q^n/alpha^n] saturated at the supersingular places.

    The saturating elements are e_j * (2*alpha^n - beta_n) / p^{s_j} with
    e_j the idempotent of the place, computed to a p-adic precision large
    enough that the generated order is exact (and re-derived at doubled
    precision if an integrality or index check fails).
    """
    field = cm_field(w.h, w.q)
    field.require_small_real_field()
    S = level_order(field, n)
    if local is None:
        local = analyze_level(w, n)
    p = w.p
    OK = maximal_order(field)
    sat = [pl for pl in local.places if pl.kind == "supersingular" and pl.s > 0]
    if not sat:
        Rn = S
    else:
        s_max = max(pl.s for pl in sat)
        iS = S.index_in(OK)
        need = (valuation(iS, p) if iS % p == 0 else 0) + s_max + 4
        if local.M < need:
            local = analyze_level(w, n, min_precision=need)
        Rn = None
        for _ in range(3):
            pM = p**local.M
            roots = [pl.root for pl in local.places]
            gens = list(S.basis())[1:]
            ok = True
            for pl in local.places:
                if pl.kind != "supersingular" or pl.s == 0:
                    continue
                bn_elt = _ol_element(field, local.bn)
                delta = field.sub(field.scale(field.elem(list(field.alpha_pow(n))), 2),
                                  bn_elt)
                if field.gL == 1:
                    e_vec = field.one
                else:
                    other = next(r for r in roots if r != pl.root)
                    t = inv_mod((pl.root - other) % pM, pM)
                    e_vec = _ol_element(field, ((-t * other) % pM, t % pM))
                cand = field.scale(field.mul(e_vec, delta), Fraction(1, p**pl.s))
                if not field.is_integral(cand):
                    ok = False
                    break
                gens.append(cand)
            if ok:
                Rn = order_from_generators(field, gens)
                if Rn.index_in(OK) % p != 0:
                    break
            local = analyze_level(w, n, min_precision=2 * local.M)
            Rn = None
        if Rn is None:
            raise PrecisionError("saturation did not converge")
    assert Rn.index_in(OK) % p != 0, "R_n must be maximal at p"
    return Rn


def _ol_element(field: CMField, pair):
    x, y = pair
    if field.gL == 1:
        assert y == 0
        return field.scale(field.one, x)
    return field.add(field.scale(field.one, x), field.scale(field.omega, y))


def index(sub: Order, sup: Order) -> int:
    """[sup : sub] for nested orders."""
    return sub.index_in(sup)
