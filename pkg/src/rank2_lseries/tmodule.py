"""The (2n+1)-dimensional t-module ``G_n`` built from a rank-2 Drinfeld module
and the n-th tensor power of the Carlitz module.

``phi_n(theta) = theta Id + N + E tau`` where ``N`` has ones at ``(j, j+2)``
and ``E`` carries ``1, a, b`` in its bottom-left corner.  The twisted module
replaces ``E`` by ``c E`` with ``c = -1/b``.

Logarithm coefficients ``P_i`` satisfy the Sylvester equation

    -[i] P_i + ad(N) P_i = P_(i-1) E^((i-1))

and are computed three ways: by the nilpotent ad-series, from closed forms
for the bottom two rows, and from hyperderivatives of deformations in an
auxiliary variable ``t``.  All three live in the bracket ring, so equality is
exact.  Matrices are 0-indexed lists of rows.
"""

from __future__ import annotations

from typing import Any, Callable, List, Optional, Sequence

from .brackets import BracketAlgebra, BracketLaurent
from .carlitz import inv_L_bracket
from .drinfeld import DrinfeldRank2, f_formal_table, ft_gamma_formal, gamma_formal_table, twist_scalar
from .fields import lucas_binomial
from .laurent import LaurentSeries
from .poly import Frac, PolyA
from .taylor import ThetaTaylor

Matrix = List[List[Any]]


# generic matrix helpers over any exact ring

def mat_zero(dim: int, zero) -> Matrix:
    return [[zero for _ in range(dim)] for _ in range(dim)]


def mat_identity(dim: int, zero, one) -> Matrix:
    M = mat_zero(dim, zero)
    for r in range(dim):
        M[r][r] = one
    return M


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A: Matrix, c) -> Matrix:
    return [[x * c for x in row] for row in A]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    rows, inner, cols = len(A), len(B), len(B[0])
    out = []
    for r in range(rows):
        row = []
        for c in range(cols):
            acc = None
            for k in range(inner):
                x, y = A[r][k], B[k][c]
                if x.is_zero() or y.is_zero():
                    continue
                term = x * y
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else A[r][0] * 0)
        out.append(row)
    return out


def mat_map(A: Matrix, fn: Callable) -> Matrix:
    return [[fn(x) for x in row] for row in A]


def mat_is_zero(A: Matrix) -> bool:
    return all(x.is_zero() for row in A for x in row)


def ad_nilpotent(X: Matrix) -> Matrix:
    """``N X - X N`` for the shift ``N`` with ones at ``(j, j+2)``."""
    dim = len(X)
    zero = X[0][0].zero()
    out = mat_zero(dim, zero)
    for r in range(dim):
        for c in range(dim):
            left = X[r + 2][c] if r + 2 < dim else zero
            right = X[r][c - 2] if c >= 2 else zero
            out[r][c] = left - right
    return out


class TensorModule:
    """``G_n`` (or its twist) attached to ``phi``."""

    def __init__(self, phi: DrinfeldRank2, n: int, twisted: bool = False):
        if n < 1:
            raise ValueError("level must be positive")
        if twisted and not phi.is_constant():
            raise ValueError("the twisted module needs constant coefficients")
        self.phi = phi
        self.n = n
        self.twisted = twisted
        self.q = phi.q
        self.dim = 2 * n + 1
        self.algebra: BracketAlgebra = phi.algebra
        self.scalar = twist_scalar(phi) if twisted else 1
        self._log_cache: List[Matrix] = []

    def __repr__(self) -> str:
        tag = "twisted " if self.twisted else ""
        return f"TensorModule({tag}n={self.n}, {self.phi})"

    # structure matrices
    def nilpotent(self) -> List[List[int]]:
        d = self.dim
        return [[1 if c == r + 2 else 0 for c in range(d)] for r in range(d)]

    def e_entries(self, k: int = 0) -> dict:
        """Nonzero entries of ``E^((k))`` (Frobenius twist ``k``) as ring elements."""
        alg, n = self.algebra, self.n
        c = self.scalar
        return {
            (2 * n - 1, 0): alg.const(c),
            (2 * n, 0): alg.a_pow(k) * c,
            (2 * n, 1): alg.b_pow(k) * c,
        }

    def e_constant(self) -> List[List[int]]:
        """``E`` over ``F_q`` (constant coefficients only)."""
        if not self.phi.is_constant():
            raise ValueError("E is not constant")
        q = self.q
        d = self.dim
        E = [[0] * d for _ in range(d)]
        a, b = self.phi.a.constant_value(), self.phi.b.constant_value()
        c = self.scalar
        E[2 * self.n - 1][0] = c % q
        E[2 * self.n][0] = a * c % q
        E[2 * self.n][1] = b * c % q
        return E

    def right_mul_e(self, X: Matrix, k: int) -> Matrix:
        """``X E^((k))``: only the first two columns are nonzero."""
        dim = self.dim
        zero = self.algebra.const(0)
        out = mat_zero(dim, zero)
        for (r, c), e in self.e_entries(k).items():
            if e.is_zero():
                continue
            for row in range(dim):
                x = X[row][r]
                if not x.is_zero():
                    out[row][c] = out[row][c] + x * e
        return out

    def identity(self) -> Matrix:
        alg = self.algebra
        return mat_identity(self.dim, alg.const(0), alg.const(1))

    # logarithm coefficients
    def log_coeff_next(self, P_prev: Matrix, i: int) -> Matrix:
        """``P_i = -sum_j ad(N)^j(P_(i-1) E^((i-1))) / [i]^(j+1)``."""
        alg = self.algebra
        C = self.right_mul_e(P_prev, i - 1)
        out = mat_zero(self.dim, alg.const(0))
        inv = alg.bracket(i, -1)
        scale = inv * -1
        term = C
        for _ in range(2 * self.n + 1):
            if mat_is_zero(term):
                break
            out = mat_add(out, mat_scale(term, scale))
            term = ad_nilpotent(term)
            scale = scale * inv
        return out

    def log_coeffs(self, upto: int) -> List[Matrix]:
        """``P_0 .. P_upto`` (memoized)."""
        if not self._log_cache:
            self._log_cache.append(self.identity())
        while len(self._log_cache) <= upto:
            i = len(self._log_cache)
            self._log_cache.append(self.log_coeff_next(self._log_cache[-1], i))
        return self._log_cache[: upto + 1]

    def functional_residual(self, P: Matrix, P_prev: Matrix, i: int) -> Matrix:
        """``(theta + N) P_i - P_i (theta^(q^i) + N) - P_(i-1) E^((i-1))``."""
        lhs = mat_add(mat_scale(P, self.algebra.bracket(i) * -1), ad_nilpotent(P))
        return mat_sub(lhs, self.right_mul_e(P_prev, i - 1))

    # closed forms for the bottom rows
    def log_rows_closed(self, i: int) -> tuple:
        """Rows ``2n-1`` and ``2n`` (0-indexed) of ``P_i`` from closed forms."""
        if i < 1 or self.n < 1:
            raise ValueError("closed rows need i >= 1 and n >= 1")
        phi, alg, n = self.phi, self.algebra, self.n
        gammas = gamma_formal_table(phi, i)
        fs = f_formal_table(phi, i)
        invL = inv_L_bracket(i, self.q, n)
        bk = alg.b_pow(i - 1)
        twist = alg.const(self.scalar) ** i

        def row(vals):
            cur, prev = vals[i], vals[i - 1]
            out = []
            for k in range(1, n + 2):
                e = n + 1 - k
                out.append(cur * alg.bracket(i, e) * ((-1) ** e) * invL * twist)
                if k <= n:
                    e = n - k
                    out.append(prev * bk * alg.bracket(i, e) * ((-1) ** e) * invL * twist)
            return out

        return row(fs), row(gammas)

    # deformation route
    def deformation_matrix(self, i: int) -> Matrix:
        """``P_i`` read off from Taylor coefficients in ``s = t - theta`` of
        deformed coefficients, brackets ``[k]`` becoming ``[k] - s``."""
        if i < 1:
            raise ValueError("deformation needs i >= 1")
        phi, alg, n = self.phi, self.algebra, self.n
        order = n
        zero = alg.const(0)
        dim = self.dim
        upsilon = [deform(x, order) for x in gamma_formal_table(phi, i)]
        f_def = [deform(x, order) for x in _f_components(phi, i)]
        # L_(i-1)(t)^(-n) = (-1)^(n(i-1)) prod_k ([k] - s)^(-n)
        base = ThetaTaylor.constant(alg.const((-1) ** (n * (i - 1))), order)
        for k in range(1, i):
            base = base * _linear_power(k, -n, order, alg)
        base = base * (alg.const(self.scalar) ** i)
        # (t - theta^(q^i))^(-m) = (-1)^m ([i] - s)^(-m)
        pole = [ThetaTaylor.constant(alg.const((-1) ** m), order) * _linear_power(i, -m, order, alg)
                for m in range(n + 2)]
        bk = alg.b_pow(i - 1)
        M = mat_zero(dim, zero)
        for m in range(n + 1):
            odd = upsilon[i] * base * pole[m]
            odd_f = f_def[i] * base * pole[m]
            col = 2 * m
            for l in range(n + 1):
                M[2 * n - 2 * l][col] = odd[l]
            for l in range(n):
                M[2 * n - 1 - 2 * l][col] = odd_f[l]
        for j in range(1, n + 1):
            even = (upsilon[i - 1] * base * pole[j]).scale(bk)
            even_f = (f_def[i - 1] * base * pole[j]).scale(bk)
            col = 2 * j - 1
            for l in range(n + 1):
                M[2 * n - 2 * l][col] = even[l]
            for l in range(n):
                M[2 * n - 1 - 2 * l][col] = even_f[l]
        return M

    # exponential coefficients (exact in K)
    def exp_coeffs(self, upto: int) -> List[Matrix]:
        """``Q_0 .. Q_upto`` from ``-[i] Q_i + ad(N) Q_i = -E Q_(i-1)^((1))``."""
        q = self.q
        zero, one = Frac.from_int(0, q), Frac.from_int(1, q)
        dim = self.dim
        E = self._e_frac()
        Q = [mat_identity(dim, zero, one)]
        for i in range(1, upto + 1):
            prev = mat_map(Q[-1], lambda x: x.frobenius(1))
            C = mat_scale(mat_mul(E, prev), Frac.from_int(-1, q))
            inv = Frac(PolyA.monomial(q**i, q) - PolyA.theta(q)).inverse()
            out = mat_zero(dim, zero)
            scale = -inv
            term = C
            for _ in range(2 * self.n + 1):
                out = mat_add(out, mat_scale(term, scale))
                term = ad_nilpotent(term)
                scale = scale * inv
            Q.append(out)
        return Q

    def _e_frac(self) -> Matrix:
        q, n = self.q, self.n
        zero = Frac.from_int(0, q)
        E = mat_zero(self.dim, zero)
        c = Frac.from_int(self.scalar, q)
        E[2 * n - 1][0] = c
        E[2 * n][0] = Frac(self.phi.a) * c
        E[2 * n][1] = Frac(self.phi.b) * c
        return E

    def formal_inverse_residual(self, i: int) -> Matrix:
        """``sum_{j+k=i} P_j Q_k^((q^j))`` in ``K``; zero for ``i >= 1``."""
        P = [mat_map(X, self.algebra.to_frac) for X in self.log_coeffs(i)]
        Q = self.exp_coeffs(i)
        acc = mat_zero(self.dim, Frac.from_int(0, self.q))
        for j in range(i + 1):
            acc = mat_add(acc, mat_mul(P[j], mat_map(Q[i - j], lambda x, j=j: x.frobenius(j))))
        return acc

    # evaluation
    def valuation_bound(self, i: int) -> float:
        """Proven lower bound ``n (q^i - q)/(q - 1)`` for entries of ``P_i``."""
        q = self.q
        return self.n * (q**i - q) / (q - 1)

    def stopping_index(self, prec: int, x_valuation: int = 0, cap: int = 30) -> int:
        """Smallest ``I`` with every term ``i >= I`` vanishing modulo ``u^prec``."""
        q = self.q
        for i in range(1, cap + 1):
            if self.valuation_bound(i) + q**i * x_valuation >= prec:
                return i
        raise ValueError(f"precision {prec} needs more than {cap} logarithm terms")

    def log_matrices_series(self, prec: int) -> List[List[List[LaurentSeries]]]:
        """``P_0 .. P_(I-1)`` as u-series, ``I`` the stopping index."""
        if not self.phi.is_constant():
            raise ValueError("logarithm evaluation needs constant coefficients")
        stop = self.stopping_index(prec)
        Ps = self.log_coeffs(stop - 1)
        return [mat_map(P, lambda x: self.algebra.to_laurent(x, prec)) for P in Ps]

    def log_eval(self, x: Sequence[LaurentSeries], prec: int) -> List[LaurentSeries]:
        """``sum_i P_i x^((q^i))`` for a column with all valuations ``>= 0``."""
        if not self.phi.is_constant():
            raise ValueError("logarithm evaluation needs constant coefficients")
        vals = [v.valuation() for v in x]
        if any(v < 0 for v in vals):
            raise ValueError("log_eval needs every entry to have valuation >= 0")
        q = self.q
        stop = self.stopping_index(prec)
        out = [LaurentSeries.zero(q, prec) for _ in range(self.dim)]
        for i, P in enumerate(self.log_coeffs(stop - 1)):
            xi = [v.frobenius(i) for v in x]
            for r in range(self.dim):
                for c in range(self.dim):
                    if P[r][c].is_zero() or xi[c].is_zero():
                        continue
                    entry = self.algebra.to_laurent(P[r][c], prec)
                    out[r] = out[r] + (entry * xi[c]).with_prec(prec)
        return out

    def log_matrix(self, prec: int) -> List[List[LaurentSeries]]:
        """``M`` with columns ``log(e_j)``, i.e. ``sum_i P_i`` truncated."""
        mats = self.log_matrices_series(prec)
        M = mats[0]
        for P in mats[1:]:
            M = [[(x + y).with_prec(prec) for x, y in zip(ra, rb)] for ra, rb in zip(M, P)]
        return [[x.with_prec(prec) for x in row] for row in M]

    def derivative_coordinates(self, x: Sequence[LaurentSeries]) -> List[LaurentSeries]:
        """``c`` with ``x = sum_r d_n[c_r] e_r``.

        Row ``r`` reads ``x_r = sum_k d^k(c_(r+2k))``, so the system is
        triangular and is solved from the bottom up.
        """
        dim = self.dim
        c: List[Optional[LaurentSeries]] = [None] * dim
        for r in range(dim - 1, -1, -1):
            acc = x[r]
            for k in range(1, (dim - 1 - r) // 2 + 1):
                acc = acc - c[r + 2 * k].hyperderiv(k)
            c[r] = acc
        return c

    def coordinate_matrix(self, prec: int) -> List[List[LaurentSeries]]:
        """Columns: derivative coordinates of ``log(e_j)``."""
        M = self.log_matrix(prec)
        cols = [self.derivative_coordinates([M[r][j] for r in range(self.dim)]) for j in range(self.dim)]
        return [[cols[j][r].with_prec(prec) for j in range(self.dim)] for r in range(self.dim)]

    def log_matrix_det(self, prec: int) -> LaurentSeries:
        """``det M`` for the plain matrix of logarithms."""
        return series_det(self.log_matrix(prec))

    def regulator(self, prec: int) -> LaurentSeries:
        """Index of the unit lattice in ``Lie(A)``: the determinant of the
        logarithms written in the basis ``d_n[.] e_r``."""
        return series_det(self.coordinate_matrix(prec))

    def minor2x2(self, prec: int) -> LaurentSeries:
        """Determinant of the bottom-right 2x2 block of ``M``."""
        M = self.log_matrix(prec)
        r = self.dim - 2
        return (M[r][r] * M[r + 1][r + 1] - M[r][r + 1] * M[r + 1][r]).with_prec(prec)


def _f_components(phi: DrinfeldRank2, i: int) -> List[BracketLaurent]:
    """``F_0 .. F_i`` as component sums (the deformation acts on these)."""
    out = []
    for k in range(i + 1):
        out.append(ft_gamma_formal(phi, k)[0])
    return out


def _linear_power(k: int, e: int, order: int, alg: BracketAlgebra) -> ThetaTaylor:
    """``([k] - s)^e`` to ``s^order``: coefficients ``binom(e, j) (-1)^j [k]^(e-j)``."""
    q = alg.p
    coeffs = [alg.bracket(k, e - j) * (lucas_binomial(e, j, q) * (-1) ** j) for j in range(order + 1)]
    return ThetaTaylor(coeffs, order)


def deform(x: BracketLaurent, order: int) -> ThetaTaylor:
    """Image of ``x`` under ``[k] -> [k] - s``, as a Taylor series in ``s``."""
    p = x.p
    alg = BracketAlgebra(p, None, None)
    total = ThetaTaylor.constant(alg.const(0), order)
    for m, c in x.terms.items():
        term = ThetaTaylor.constant(alg.const(c), order)
        for var, e in m:
            k, kind = divmod(var, 3)
            if kind == 0:
                term = term * _linear_power(k, e, order, alg)
            else:
                term = term.scale(BracketLaurent({((var, e),): 1}, p))
        total = total + term
    return total


# determinants over K_inf

def series_det(M: List[List[LaurentSeries]]) -> LaurentSeries:
    """Gaussian elimination choosing the pivot of least valuation."""
    dim = len(M)
    A = [list(row) for row in M]
    p = A[0][0].p
    det = LaurentSeries(0, [1], None, p)
    sign = 1
    for k in range(dim):
        piv = min(range(k, dim), key=lambda r: (A[r][k].valuation(), r))
        if A[piv][k].is_zero():
            precs = [x.prec for row in A for x in row if x.prec is not None]
            return LaurentSeries.zero(p, min(precs) if precs else None)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        pivot = A[k][k]
        inv = pivot.inverse()
        det = det * pivot
        for r in range(k + 1, dim):
            if A[r][k].is_zero():
                continue
            f = A[r][k] * inv
            A[r] = [A[r][c] - f * A[k][c] if c > k else A[r][c] for c in range(dim)]
    return det.scale(sign)


def d_matrix(f, n: int) -> Matrix:
    """Banded matrix with ``f`` on the diagonal and ``d^k f`` at offset ``2k``."""
    dim = 2 * n + 1
    derivs = [f.hyperderiv(k) for k in range(n + 1)]
    zero = f * 0 if not isinstance(f, PolyA) else PolyA.zero(f.p)
    M = [[zero for _ in range(dim)] for _ in range(dim)]
    for r in range(dim):
        for k in range(n + 1):
            c = r + 2 * k
            if c < dim:
                M[r][c] = derivs[k]
    return M


def partial_action(a: PolyA, module: TensorModule) -> Matrix:
    """The derivative of the t-action of ``a``."""
    return d_matrix(a, module.n)
