"""Orthonormal polynomial system of a measure given by finitely many moments.

The coefficient table of the orthonormal polynomials is the inverse of the
Cholesky factor of the moment matrix; everything else -- recurrence
coefficients, evaluation, associated polynomials, the reproducing kernel and
the finite-order spectral identities -- is derived from that pair of tables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cholesky import (
    TriangularTable,
    cholesky_decompose,
    invert_lower_triangular,
)
from .moments import HankelMoments, MomentSequence, hankel_matrix
from .recurrence import RecurrenceCoefficients, eta_table, tau_table
from .scalars import RATIONAL, one, zero


@dataclass
class PolynomialSystem:
    """Moment matrix, its Cholesky factor L, the coefficient table Pi = L^-1,
    and the extracted recurrence, all to a fixed order."""

    moments: MomentSequence
    hankel: HankelMoments
    L: TriangularTable
    Pi: TriangularTable
    rec: RecurrenceCoefficients

    @property
    def mode(self) -> str:
        return self.moments.mode

    @property
    def order(self) -> int:
        return self.L.order

    @property
    def Lambda(self) -> TriangularTable:
        """Expansion of monomials in the orthonormal polynomials (equals L)."""
        return self.L

    @property
    def deltas(self) -> list:
        return self.hankel.deltas

    @property
    def label(self) -> str:
        return self.moments.label


def build_system(m: MomentSequence, n: int) -> PolynomialSystem:
    """Assemble the order-n system from m_0..m_{2n}."""
    hank = hankel_matrix(m, n)
    L = cholesky_decompose(hank)
    Pi = invert_lower_triangular(L, role="Pi")
    sys_ = PolynomialSystem(moments=m, hankel=hank, L=L, Pi=Pi, rec=None)  # type: ignore[arg-type]
    sys_.rec = recurrence_from_tables(sys_)
    return sys_


def recurrence_from_tables(sys_: PolynomialSystem) -> RecurrenceCoefficients:
    """Recurrence coefficients from ratios of leading Pi entries.

    a_n = pi[n-1][n-1] / pi[n][n] and
    b_n = pi[n][n-1]/pi[n][n] - pi[n+1][n]/pi[n+1][n+1]; both ratios are
    rational in exact mode because each Pi row carries a single radical.
    """
    pi = sys_.Pi.rows
    n = sys_.Pi.order
    mode = sys_.mode
    a2 = [zero(mode)]
    for k in range(1, n + 1):
        ratio = pi[k - 1][k - 1] / pi[k][k]
        a2.append(ratio * ratio)
    b = []
    for k in range(n):
        lead = pi[k][k - 1] / pi[k][k] if k >= 1 else zero(mode)
        b.append(lead - pi[k + 1][k] / pi[k + 1][k + 1])
    return RecurrenceCoefficients(tuple(a2), tuple(b), mode, label=sys_.label)


def recurrence_delta_form(sys_: PolynomialSystem):
    """Same coefficients from determinant ratios and L entries (cross-check)."""
    deltas = sys_.deltas
    L = sys_.L.rows
    n = sys_.order
    mode = sys_.mode

    def delta(k):
        return deltas[k] if k >= 0 else one(mode)

    a2 = [zero(mode)]
    for k in range(1, n + 1):
        a2.append(delta(k) * delta(k - 2) / (delta(k - 1) * delta(k - 1)))
    b = []
    for k in range(n):
        first = (delta(k - 1) / delta(k)) * L[k + 1][k] * L[k][k]
        if k >= 1:
            second = (delta(k - 2) / delta(k - 1)) * L[k][k - 1] * L[k - 1][k - 1]
        else:
            second = zero(mode)
        b.append(first - second)
    return tuple(a2), tuple(b)


def recurrence_from_moments(m: MomentSequence) -> RecurrenceCoefficients:
    """Extract all recurrence coefficients a moment sequence determines.

    A sequence m_0..m_{2n} pins a_1..a_n and b_0..b_{n-1}; one further odd
    moment m_{2n+1} additionally pins b_n, recovered here from the monic inner
    product <x ptilde_n, ptilde_n> / ||ptilde_n||^2.
    """
    n = m.max_matrix_order()
    sys_ = build_system(m, n)
    rec = sys_.rec
    if m.top_order == 2 * n + 1 and n >= 0:
        eta = eta_table(_extended(rec), n)
        num = zero(m.mode)
        den = zero(m.mode)
        row = eta.rows[n]
        for i in range(n + 1):
            if not row[i]:
                continue
            for j in range(n + 1):
                if not row[j]:
                    continue
                num = num + row[i] * row[j] * m.m(i + j + 1)
                den = den + row[i] * row[j] * m.m(i + j)
        rec = RecurrenceCoefficients(
            rec.a2, rec.b + (num / den,), rec.mode, rec.label
        )
    return rec


def _extended(rec: RecurrenceCoefficients) -> RecurrenceCoefficients:
    # eta rows to order n need b_0..b_{n-1}; the extracted rec already has them,
    # but guard the degenerate order-0 case
    if rec.b:
        return rec
    return RecurrenceCoefficients(rec.a2, (zero(rec.mode),), rec.mode, rec.label)


def monic_tables(sys_: PolynomialSystem, n: int | None = None):
    """(eta, tau) monic tables built by recursion from the extracted coefficients."""
    order = sys_.order if n is None else n
    return eta_table(sys_.rec, order), tau_table(sys_.rec, order)


# -- evaluation --------------------------------------------------------------


def eval_poly(sys_: PolynomialSystem, k: int, x):
    """p_k(x) by the forward three-term recurrence (orthonormal normalization)."""
    if k > sys_.order:
        raise ValueError(f"k = {k} exceeds system order {sys_.order}")
    prev = zero(sys_.mode)  # p_{-1}
    cur = one(sys_.mode)
    for j in range(k):
        a_next = sys_.rec.a(j + 1)
        nxt = ((x - sys_.rec.b[j]) * cur - sys_.rec.a(j) * prev) / a_next
        prev, cur = cur, nxt
    return cur


def eval_monic(sys_: PolynomialSystem, k: int, x):
    """Monic ptilde_k(x) by the monic three-term recurrence."""
    if k > sys_.order:
        raise ValueError(f"k = {k} exceeds system order {sys_.order}")
    prev = zero(sys_.mode)
    cur = one(sys_.mode)
    for j in range(k):
        nxt = (x - sys_.rec.b[j]) * cur - sys_.rec.a2[j] * prev
        prev, cur = cur, nxt
    return cur


def eval_row(row, x, mode: str):
    """Evaluate a coefficient row sum_i row[i] * x^i (Horner)."""
    acc = zero(mode)
    for c in reversed(row):
        acc = acc * x + c
    return acc


def moment_inner_product(m: MomentSequence, coeffs1, coeffs2):
    """Apply the moment functional to a product of two coefficient rows."""
    total = zero(m.mode)
    for i, c1 in enumerate(coeffs1):
        if not c1:
            continue
        for j, c2 in enumerate(coeffs2):
            if not c2:
                continue
            total = total + c1 * c2 * m.m(i + j)
    return total


# -- associated polynomials ---------------------------------------------------


def associated_polys(sys_: PolynomialSystem) -> list:
    """Coefficient rows of the associated polynomials q_n.

    Row n (length n) holds the coefficients of the degree-(n-1) polynomial
    q_n(x) = sum_k x^k sum_{j>k} pi[n][j] * m_{j-1-k}; row 0 is empty since
    q_0 = 0.  The same sequence satisfies the three-term recurrence with
    starting values q_0 = 0 and q_1 = 1/a_1.
    """
    pi = sys_.Pi.rows
    m = sys_.moments
    rows = [[]]
    for n in range(1, sys_.order + 1):
        row = []
        for k in range(n):
            s = zero(sys_.mode)
            for j in range(k + 1, n + 1):
                s = s + pi[n][j] * m.m(j - 1 - k)
            row.append(s)
        rows.append(row)
    return rows


# -- reproducing kernel -------------------------------------------------------


def kernel(sys_: PolynomialSystem, x, y):
    """Reproducing kernel sum_i p_i(x) p_i(y); rational for exact inputs."""
    total = zero(sys_.mode)
    for i in range(sys_.order + 1):
        px = eval_row(sys_.Pi.rows[i], x, sys_.mode)
        py = px if y == x else eval_row(sys_.Pi.rows[i], y, sys_.mode)
        total = total + px * py
    return total


def christoffel(sys_: PolynomialSystem, x):
    return one(sys_.mode) / kernel(sys_, x, x)


def inverse_moment_matrix(sys_: PolynomialSystem) -> list:
    """Dense inverse of the moment matrix via Pi^T * Pi (exact in rational mode)."""
    n = sys_.order
    pi = sys_.Pi.rows
    out = []
    for i in range(n + 1):
        row = []
        for j in range(n + 1):
            s = zero(sys_.mode)
            for k in range(max(i, j), n + 1):
                s = s + pi[k][i] * pi[k][j]
            row.append(s)
        out.append(row)
    return out


def kernel_inverse_form(sys_: PolynomialSystem, x, y):
    """X^T M^{-1} Y evaluated against the monomial vectors (kernel cross-check)."""
    mu = inverse_moment_matrix(sys_)
    n = sys_.order
    xs = _powers(x, n, sys_.mode)
    ys = xs if y == x else _powers(y, n, sys_.mode)
    total = zero(sys_.mode)
    for i in range(n + 1):
        for j in range(n + 1):
            total = total + xs[i] * mu[i][j] * ys[j]
    return total


def _powers(x, n, mode):
    out = [one(mode)]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


# -- finite-order spectral identities -----------------------------------------


@dataclass
class SpectralDiagnostics:
    """Finite-order identities linking moments, the inverse moment matrix and
    (in float mode) the moment-matrix eigenvalues."""

    order: int
    mode: str
    mu: list
    eigenvalues: list | None
    moment_trace: object          # sum of even moments m_0 + m_2 + ... + m_2n
    inverse_trace: object         # tr(Pi Pi^T) = tr(M^{-1})
    p_zero_sum: object            # sum_j p_j(0)^2
    q_zero_sum: object            # sum_j q_j(0)^2
    q_moment_quadratic: object    # sum_{i,j>=1} mu[i][j] m_{i-1} m_{j-1}
    qp_zero_sum: object           # sum_j q_j(0) p_j(0)
    qp_moment_sum: object         # sum_j m_{j-1} mu[0][j]
    checks: dict
    q_sandwich_bounds: tuple | None = None  # informative only; float mode

    def all_passed(self) -> bool:
        return all(self.checks.values())


def diagnostics(sys_: PolynomialSystem, points=None, eig_tol: float = 1e-8) -> SpectralDiagnostics:
    """Assert the finite-order identities of the system.

    Exact-mode checks compare rationals with ``==``; float mode additionally
    computes the moment-matrix eigenvalues (symmetric eigensolver with an
    explicit residual check) and verifies the trace identities and the
    kernel / Christoffel eigenvalue sandwiches at the given points.
    """
    n = sys_.order
    mode = sys_.mode
    m = sys_.moments
    mu = inverse_moment_matrix(sys_)
    checks: dict = {}

    moment_trace = zero(mode)
    for i in range(n + 1):
        moment_trace = moment_trace + m.m(2 * i)

    inverse_trace = zero(mode)
    for i in range(n + 1):
        inverse_trace = inverse_trace + mu[i][i]

    p0 = [sys_.Pi.rows[j][0] for j in range(n + 1)]
    p_zero_sum = zero(mode)
    for v in p0:
        p_zero_sum = p_zero_sum + v * v

    qrows = associated_polys(sys_)
    q0 = [zero(mode)] + [qrows[j][0] for j in range(1, n + 1)]
    q_zero_sum = zero(mode)
    qp_zero_sum = zero(mode)
    for j in range(1, n + 1):
        q_zero_sum = q_zero_sum + q0[j] * q0[j]
        qp_zero_sum = qp_zero_sum + q0[j] * p0[j]

    q_moment_quadratic = zero(mode)
    qp_moment_sum = zero(mode)
    for i in range(1, n + 1):
        qp_moment_sum = qp_moment_sum + m.m(i - 1) * mu[0][i]
        for j in range(1, n + 1):
            q_moment_quadratic = q_moment_quadratic + mu[i][j] * m.m(i - 1) * m.m(j - 1)

    q_sandwich = None
    if mode == RATIONAL:
        checks["p_zero_identity"] = p_zero_sum == mu[0][0]
        checks["q_zero_identity"] = q_zero_sum == q_moment_quadratic
        checks["qp_identity"] = qp_zero_sum == qp_moment_sum
        eigenvalues = None
    else:
        rel = lambda a, b: abs(a - b) <= 1e-8 * max(1.0, abs(a), abs(b))
        checks["p_zero_identity"] = rel(p_zero_sum, mu[0][0])
        checks["q_zero_identity"] = rel(q_zero_sum, q_moment_quadratic)
        checks["qp_identity"] = rel(qp_zero_sum, qp_moment_sum)

        import numpy as np

        dense = np.array(sys_.hankel.dense(), dtype=float)
        vals, vecs = np.linalg.eigh(dense)
        resid = np.linalg.norm(dense @ vecs - vecs * vals, ord=2)
        checks["eigen_residual"] = bool(resid <= eig_tol * np.linalg.norm(dense, 2))
        eigenvalues = [float(v) for v in vals]
        checks["eigenvalues_positive"] = bool(vals[0] > 0)

        checks["trace_identity"] = rel(float(moment_trace), float(sum(vals)))
        # both routes to tr(M^{-1}) lose relative accuracy like eps * cond(M)
        cond = float(vals[-1] / vals[0])
        inv_tol = max(1e-8, 100.0 * 2.3e-16 * cond)
        ta, tb = float(inverse_trace), float(sum(1.0 / v for v in vals))
        checks["inverse_trace_identity"] = abs(ta - tb) <= inv_tol * max(1.0, ta, tb)
        lo, hi = float(vals[0]), float(vals[-1])
        checks["p_zero_sandwich"] = (
            1.0 / hi <= float(p_zero_sum) * (1 + 1e-12) + 1e-15
            and float(p_zero_sum) <= (1.0 / lo) * (1 + 1e-12)
        )
        if points is None:
            points = [(0.3, -0.7), (1.0, 0.5), (-1.0, -0.25), (0.9, 0.9)]
        ok_bound, ok_sandwich = True, True
        for x, y in points:
            kxy = float(kernel(sys_, float(x), float(y)))
            sx = sum(float(x) ** (2 * i) for i in range(n + 1))
            sy = sum(float(y) ** (2 * i) for i in range(n + 1))
            ok_bound &= abs(kxy) <= (1.0 / lo) * (sx * sy) ** 0.5 * (1 + 1e-10)
            kxx = float(kernel(sys_, float(x), float(x)))
            chris = 1.0 / kxx
            ok_sandwich &= lo / sx * (1 - 1e-10) <= chris <= hi / sx * (1 + 1e-10)
        checks["kernel_upper_bound"] = bool(ok_bound)
        checks["christoffel_sandwich"] = bool(ok_sandwich)
        # upper-limit ambiguity in the printed bound makes this informative only
        msq = sum(float(m.m(j)) ** 2 for j in range(1, n))
        q_sandwich = (msq / hi, float(q_zero_sum), msq / lo)

    return SpectralDiagnostics(
        order=n,
        mode=mode,
        mu=mu,
        eigenvalues=eigenvalues,
        moment_trace=moment_trace,
        inverse_trace=inverse_trace,
        p_zero_sum=p_zero_sum,
        q_zero_sum=q_zero_sum,
        q_moment_quadratic=q_moment_quadratic,
        qp_zero_sum=qp_zero_sum,
        qp_moment_sum=qp_moment_sum,
        checks=checks,
        q_sandwich_bounds=q_sandwich,
    )
