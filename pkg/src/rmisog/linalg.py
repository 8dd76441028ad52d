"""Exact linear algebra over Z and Q.

Everything here is denominator-exact: integer HNF/SNF for lattices, Fraction
Gaussian elimination for inverses and determinants, Faddeev-LeVerrier for
characteristic polynomials.  No floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .nt import xgcd


def mat_identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    assert len(A[0]) == k
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_vec(A, v):
    return [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A))]


def vec_mat(v, A):
    return [sum(v[i] * A[i][j] for i in range(len(v))) for j in range(len(A[0]))]


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_inv(A):
    """Inverse of a square matrix with Fraction arithmetic; raises on singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for i in range(n):
            if i != col and M[i][col] != 0:
                f = M[i][col]
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return [row[n:] for row in M]


def mat_det(A) -> Fraction:
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        for i in range(col + 1, n):
            if M[i][col] != 0:
                f = M[i][col] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[col])]
    return det


def charpoly(A) -> list[Fraction]:
    """char(A) coefficients, constant term first, leading coefficient 1.

    Faddeev-LeVerrier; exact over Q.
    """
    n = len(A)
    A = [[Fraction(x) for x in row] for row in A]
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    M = mat_identity(n)
    for k in range(1, n + 1):
        M = mat_mul(A, M)
        tr = sum(M[i][i] for i in range(n))
        c[n - k] = -tr / k
        for i in range(n):
            M[i][i] += c[n - k]
    return c


def hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the row lattice.

    Output rows form a staircase with positive pivots; entries above each
    pivot are reduced into [0, pivot).  Zero rows are dropped.
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    m, n = len(A), len(A[0])
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, m):
            if A[i][col] == 0:
                continue
            a, b = A[r][col], A[i][col]
            g, x, y = xgcd(a, b)
            u, v = -(b // g), a // g
            A[r], A[i] = (
                [x * A[r][j] + y * A[i][j] for j in range(n)],
                [u * A[r][j] + v * A[i][j] for j in range(n)],
            )
        if A[r][col] < 0:
            A[r] = [-x for x in A[r]]
        for i in range(r):
            q = A[i][col] // A[r][col]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return [row for row in A[:r] if any(row)]


def hnf_with_transform(rows: list[list[int]]):
    """(H, U) with U unimodular, U * rows = H-padded-with-zero-rows.

    H is the HNF (nonzero rows only); rows of U beyond len(H) span the left
    kernel of the input.
    """
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = mat_identity(m)
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        U[r], U[piv] = U[piv], U[r]
        for i in range(r + 1, m):
            if A[i][col] == 0:
                continue
            a, b = A[r][col], A[i][col]
            g, x, y = xgcd(a, b)
            u, v = -(b // g), a // g
            A[r], A[i] = (
                [x * A[r][j] + y * A[i][j] for j in range(n)],
                [u * A[r][j] + v * A[i][j] for j in range(n)],
            )
            U[r], U[i] = (
                [x * U[r][j] + y * U[i][j] for j in range(m)],
                [u * U[r][j] + v * U[i][j] for j in range(m)],
            )
        if A[r][col] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = A[i][col] // A[r][col]
            if q:
                A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
        if r == m:
            break
    return [row for row in A[:r] if any(row)], U


def left_kernel(rows: list[list[int]]) -> list[list[int]]:
    """Z-basis of {x : x * rows = 0}."""
    H, U = hnf_with_transform(rows)
    return U[len(H):]


def snf_with_transforms(A: list[list[int]]):
    """(D, U, V) with U*A*V = D diagonal, d_i | d_{i+1}, U and V unimodular."""
    M = [list(r) for r in A]
    m = len(M)
    n = len(M[0]) if m else 0
    U = mat_identity(m)
    V = mat_identity(n)

    def row_op(i, k, x, y, u, v):
        M[i], M[k] = (
            [x * M[i][j] + y * M[k][j] for j in range(n)],
            [u * M[i][j] + v * M[k][j] for j in range(n)],
        )
        U[i], U[k] = (
            [x * U[i][j] + y * U[k][j] for j in range(m)],
            [u * U[i][j] + v * U[k][j] for j in range(m)],
        )

    def col_op(j, k, x, y, u, v):
        for row in M:
            row[j], row[k] = x * row[j] + y * row[k], u * row[j] + v * row[k]
        for row in V:
            row[j], row[k] = x * row[j] + y * row[k], u * row[j] + v * row[k]

    t = 0
    while t < min(m, n):
        # find a nonzero pivot
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if M[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i0, j0 = piv
        if i0 != t:
            row_op(t, i0, 0, 1, 1, 0)
        if j0 != t:
            col_op(t, j0, 0, 1, 1, 0)
        while True:
            # clear column t; plain subtraction when the pivot divides the
            # entry keeps row t untouched (a Bezout step would re-pollute
            # the row we just cleared and the passes can cycle forever)
            for i in range(t + 1, m):
                if M[i][t] != 0:
                    a, b = M[t][t], M[i][t]
                    if b % a == 0:
                        row_op(t, i, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = xgcd(a, b)
                        row_op(t, i, x, y, -(b // g), a // g)
            # clear row t
            for j in range(t + 1, n):
                if M[t][j] != 0:
                    a, b = M[t][t], M[t][j]
                    if b % a == 0:
                        col_op(t, j, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = xgcd(a, b)
                        col_op(t, j, x, y, -(b // g), a // g)
            if all(M[i][t] == 0 for i in range(t + 1, m)) and all(
                M[t][j] == 0 for j in range(t + 1, n)
            ):
                break
        # enforce divisibility of later entries by M[t][t]
        fixed = True
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if M[i][j] % M[t][t] != 0:
                    row_op(t, i, 1, 1, 0, 1)  # add row i to row t
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            if M[t][t] < 0:
                M[t] = [-x for x in M[t]]
                U[t] = [-x for x in U[t]]
            t += 1
    D = [[M[i][j] if i < m and j < n else 0 for j in range(n)] for i in range(m)]
    return D, U, V


def smith_invariants(A: list[list[int]]) -> list[int]:
    """Diagonal of the Smith form, nontrivial (> 1) entries only come last;
    returns all diagonal entries including 1s, zero-padded to min(m,n)."""
    D, _, _ = snf_with_transforms(A)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


@dataclass(frozen=True)
class QLattice:
    """Full or partial rank lattice in Q^n: integer HNF rows over a common
    positive denominator.  Canonical: gcd(den, content(rows)) = 1."""

    den: int
    rows: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(frac_rows) -> "QLattice":
        rows = [[Fraction(x) for x in r] for r in frac_rows]
        if not rows:
            return QLattice(1, ())
        den = 1
        for r in rows:
            for x in r:
                den = lcm(den, x.denominator)
        int_rows = [[int(x * den) for x in r] for r in rows]
        H = hnf(int_rows)
        g = 0
        for r in H:
            for x in r:
                g = gcd(g, x)
        g = gcd(g, den)
        if g > 1:
            den //= g
            H = [[x // g for x in r] for r in H]
        return QLattice(den, tuple(tuple(r) for r in H))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def dim(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def frac_rows(self):
        d = self.den
        return [[Fraction(x, d) for x in r] for r in self.rows]

    def _pivots(self):
        pivs = []
        for r in self.rows:
            pivs.append(next(j for j, x in enumerate(r) if x != 0))
        return pivs

    def coords_of(self, vec):
        """Integer coordinates of vec in this basis, or None."""
        w = [Fraction(x) * self.den for x in vec]
        if any(x.denominator != 1 for x in w):
            return None
        w = [int(x) for x in w]
        coords = []
        pivs = self._pivots()
        for r, j in zip(self.rows, pivs):
            if w[j] % r[j] != 0:
                return None
            c = w[j] // r[j]
            coords.append(c)
            if c:
                w = [a - c * b for a, b in zip(w, r)]
        if any(w):
            return None
        return coords

    def contains(self, vec) -> bool:
        return self.coords_of(vec) is not None

    def contains_lattice(self, other: "QLattice") -> bool:
        return all(self.contains(r) for r in other.frac_rows())

    def add(self, other: "QLattice") -> "QLattice":
        return QLattice.from_rows(self.frac_rows() + other.frac_rows())

    def scale(self, c) -> "QLattice":
        c = Fraction(c)
        return QLattice.from_rows([[x * c for x in r] for r in self.frac_rows()])

    def covolume(self) -> Fraction:
        """|det| of the basis (full-rank square lattices only)."""
        assert self.rank == self.dim()
        d = Fraction(1)
        pivs = self._pivots()
        for r, j in zip(self.rows, pivs):
            d *= r[j]
        return d / Fraction(self.den) ** self.rank

    def index_in(self, ambient: "QLattice") -> int:
        """[ambient : self] for full-rank sublattices."""
        if not ambient.contains_lattice(self):
            raise ValueError("not a sublattice")
        ratio = self.covolume() / ambient.covolume()
        assert ratio.denominator == 1
        return int(ratio)


def nullspace_mod_p(A: list[list[int]], p: int) -> list[list[int]]:
    """Basis of the right kernel of A over F_p, as vectors of ints in [0, p)."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[x % p for x in row] for row in A]
    pivot_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if M[i][c] % p), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[r])]
        pivot_cols.append(c)
        r += 1
    basis = []
    free = [c for c in range(n) if c not in pivot_cols]
    for c in free:
        v = [0] * n
        v[c] = 1
        for i, pc in enumerate(pivot_cols):
            v[pc] = (-M[i][c]) % p
        basis.append(v)
    return basis
