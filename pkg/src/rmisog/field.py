"""Arithmetic in the CM algebra K = Q[x]/(r) for a validated Weil polynomial r.

Elements are coordinate tuples of Fractions in the power basis 1, alpha, ...,
alpha^(d-1).  The real subfield L = Q(beta), beta = alpha + q/alpha, is set up
with an explicit maximal-order generator omega when L is quadratic; all sign
and valuation questions about L-elements reduce to exact integer arithmetic.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import UnsupportedStratumError
from .linalg import charpoly, mat_det, mat_inv, mat_vec
from .nt import factorint, fundamental_discriminant
from .poly import (
    poly_trim,
    power_sums,
    real_counterpart,
    squarefree_part,
    surd_sign,
)


class CMField:
    """K = Q[x]/(r) together with its real subfield data.

    Only real subfields of degree <= 2 get the full O_L treatment; higher
    degree raises UnsupportedStratumError where that data is required.
    """

    def __init__(self, r, q: int):
        r = tuple(poly_trim(list(r)))
        self.r = r
        self.q = q
        fq = factorint(q)
        (self.p, self.m), = fq.items()
        self.d = len(r) - 1
        if self.d % 2:
            raise UnsupportedStratumError(
                "rational Frobenius (odd-degree factor) is not supported"
            )
        self.g = self.d // 2
        self.tp = power_sums(list(r), 2 * self.d)
        self.trace_mat = [
            [self.tp[i + j] for j in range(self.d)] for i in range(self.d)
        ]
        self.one = self.elem([1])
        self.alpha = self.elem([0, 1])
        # q/alpha = -(r_1 + r_2 a + ... + a^(d-1)) * q / r_0, r_0 = q^g
        r0 = r[0]
        scale = Fraction(-q, r0)
        self.qinv_alpha = tuple(
            Fraction(r[i + 1]) * scale for i in range(self.d)
        )
        pows = [self.one]
        for _ in range(self.d - 1):
            pows.append(self.mul(pows[-1], self.qinv_alpha))
        self.conj_mat = [[pows[j][i] for j in range(self.d)] for i in range(self.d)]
        self.beta = self.add(self.alpha, self.qinv_alpha)
        self._setup_real_subfield()

    # -- element arithmetic ------------------------------------------------

    def elem(self, coeffs):
        c = [Fraction(x) for x in coeffs]
        assert len(c) <= self.d
        return tuple(c + [Fraction(0)] * (self.d - len(c)))

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def scale(self, x, c):
        c = Fraction(c)
        return tuple(a * c for a in x)

    def mul(self, x, y):
        d = self.d
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        prod[i + j] += a * b
        # reduce mod r (monic)
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                prod[k] = Fraction(0)
                for i in range(self.d):
                    prod[k - d + i] -= c * self.r[i]
        return tuple(prod[:d])

    def mult_matrix(self, x):
        """Column j holds the coordinates of x * alpha^j."""
        cols = [x]
        for _ in range(self.d - 1):
            cols.append(self.mul(cols[-1], self.alpha))
        return [[cols[j][i] for j in range(self.d)] for i in range(self.d)]

    def conj(self, x):
        return tuple(mat_vec(self.conj_mat, list(x)))

    def trace(self, x) -> Fraction:
        return sum(a * t for a, t in zip(x, self.tp))

    def norm(self, x) -> Fraction:
        return mat_det(self.mult_matrix(x))

    def inv(self, x):
        M = self.mult_matrix(x)
        Minv = mat_inv(M)
        return tuple(row[0] for row in Minv)

    def pow(self, x, n: int):
        out = self.one
        base = x
        while n:
            if n & 1:
                out = self.mul(out, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return out

    def alpha_pow(self, n: int):
        """alpha^n as exact (integer) coordinates: x^n mod r over Z."""
        out = [1]
        base = [0, 1]
        k = n
        while k:
            if k & 1:
                out = self._int_polymulmod(out, base)
            k >>= 1
            if k:
                base = self._int_polymulmod(base, base)
        return self.elem(out)

    def _int_polymulmod(self, a, b):
        d = self.d
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for i in range(d):
                    prod[k - d + i] -= c * self.r[i]
        return prod[:d]

    def charpoly_of(self, x):
        return charpoly(self.mult_matrix(x))

    def is_integral(self, x) -> bool:
        return all(c.denominator == 1 for c in self.charpoly_of(x))

    def is_real(self, x) -> bool:
        return self.conj(x) == x

    # -- real subfield -----------------------------------------------------

    def _setup_real_subfield(self):
        s = squarefree_part(real_counterpart(list(self.r), self.q))
        self.s = tuple(s)
        self.gL = len(s) - 1
        if self.gL == 1:
            self.OL_basis = [self.one]
            self.D0 = 1
            self.f0 = 1
            self.omega = None
            self.g0_poly = None
            return
        if self.gL == 2:
            s0, s1 = s[0], s[1]
            disc_s = s1 * s1 - 4 * s0
            D0, f0 = fundamental_discriminant(disc_s)
            self.D0, self.f0 = D0, f0
            u0 = (-s1 - f0 * D0) // 2
            assert (-s1 - f0 * D0) % 2 == 0
            self.u0 = u0
            # omega = (beta - u0)/f0 has minimal polynomial x^2 - D0 x + (D0^2-D0)/4
            self.omega = self.scale(
                self.sub(self.beta, self.scale(self.one, u0)), Fraction(1, f0)
            )
            c0 = (D0 * D0 - D0) // 4
            self.g0_poly = (c0, -D0, 1)
            lhs = self.mul(self.omega, self.omega)
            rhs = self.sub(
                self.scale(self.omega, D0), self.scale(self.one, c0)
            )
            assert lhs == rhs, "omega does not satisfy its minimal polynomial"
            self.OL_basis = [self.one, self.omega]
            return
        self.OL_basis = None  # degree > 2: handled lazily with typed errors

    def require_small_real_field(self):
        if self.gL > 2:
            raise UnsupportedStratumError(
                f"real multiplication field of degree {self.gL} > 2 is not supported"
            )

    def real_coords(self, x):
        """Coordinates of a real element in the O_L basis (1) or (1, omega)."""
        self.require_small_real_field()
        assert self.is_real(x), "element is not fixed by conjugation"
        if self.gL == 1:
            assert all(c == 0 for c in x[1:])
            return (x[0],)
        B = [[self.one[i], self.omega[i]] for i in range(self.d)]
        G = [
            [sum(B[i][a] * B[i][b] for i in range(self.d)) for b in range(2)]
            for a in range(2)
        ]
        rhs = [sum(B[i][a] * x[i] for i in range(self.d)) for a in range(2)]
        Ginv = mat_inv(G)
        c = mat_vec(Ginv, rhs)
        assert all(
            sum(B[i][a] * c[a] for a in range(2)) == x[i] for i in range(self.d)
        ), "element is not in Q + Q*omega"
        return tuple(c)

    def real_place_signs(self, x):
        """Exact signs of sigma_j(x) for real x, places ordered by sigma(beta)
        ascending (for gL=2: sqrt taken negative first)."""
        self.require_small_real_field()
        c = self.real_coords(x)
        if self.gL == 1:
            v = c[0]
            return ((v > 0) - (v < 0),)
        a0, a1 = c
        # sigma_pm(omega) = (D0 +- sqrt(D0))/2; beta = u0 + f0*omega increases
        # with sqrt(D0), so the minus-embedding is the first place.
        lo = surd_sign(a0 + a1 * Fraction(self.D0, 2), -a1 * Fraction(1, 2), self.D0)
        hi = surd_sign(a0 + a1 * Fraction(self.D0, 2), a1 * Fraction(1, 2), self.D0)
        return (lo, hi)

    def is_totally_positive(self, x) -> bool:
        return all(sg > 0 for sg in self.real_place_signs(x))


@lru_cache(maxsize=None)
def cm_field(r: tuple, q: int) -> CMField:
    return CMField(r, q)
