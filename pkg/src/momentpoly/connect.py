"""Connection coefficients between two polynomial systems, the ribbon test for
polynomial density ratios, and Radon-Nikodym Fourier expansions.

If {p_n(x, target)} and {p_n(x, source)} are the orthonormal systems of two
measures, then p_n(x, target) = sum_k gamma[n][k] p_k(x, source) with the
lower-triangular table gamma = Pi(target) * Lambda(source); the monic variant
uses the eta / tau tables instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cholesky import TriangularTable, tri_multiply
from .moments import MomentSequence, hankel_matrix
from .polysys import PolynomialSystem, monic_tables
from .recurrence import RecurrenceCoefficients
from .scalars import RATIONAL, one, to_float, zero

BASES = ("orthonormal", "monic")


@dataclass
class ConnectionTable:
    """gamma[n][k]: row n expands the n-th target polynomial in the source basis."""

    table: TriangularTable
    basis: str
    target_label: str
    source_label: str

    @property
    def order(self) -> int:
        return self.table.order

    @property
    def mode(self) -> str:
        return self.table.mode

    def entry(self, n: int, k: int):
        return self.table.entry(n, k)

    @property
    def rows(self) -> list:
        return self.table.rows


def connection_table(
    target: PolynomialSystem,
    source: PolynomialSystem,
    n: int,
    basis: str = "orthonormal",
) -> ConnectionTable:
    """Expansion coefficients of the target system in the source basis."""
    if basis not in BASES:
        raise ValueError(f"basis must be one of {BASES}")
    if target.order < n or source.order < n:
        raise ValueError(
            f"both systems must reach order {n} "
            f"(have {target.order} and {source.order})"
        )
    if target.mode != source.mode:
        raise ValueError("systems must share a numeric mode")
    if basis == "orthonormal":
        left = _truncate(target.Pi, n)
        right = _truncate(source.Lambda, n)
    else:
        eta_t, _ = monic_tables(target, n)
        _, tau_s = monic_tables(source, n)
        left, right = eta_t, tau_s
    prod = tri_multiply(left, right, role=left.role)
    return ConnectionTable(
        table=prod,
        basis=basis,
        target_label=target.label,
        source_label=source.label,
    )


def _truncate(table: TriangularTable, n: int) -> TriangularTable:
    if table.order == n:
        return table
    return TriangularTable(role=table.role, mode=table.mode, rows=table.rows[: n + 1])


def closed_form_gamma(
    rec_target: RecurrenceCoefficients,
    rec_source: RecurrenceCoefficients,
    n: int,
    k: int,
):
    """Printed closed forms for the monic connection coefficients near the
    diagonal: k = n (unit), k = n-1 (difference of b sums) and k = n-2
    (a^2 differences plus quadratic b corrections)."""
    mode = rec_target.mode
    if k == n:
        return one(mode)
    if k == n - 1:
        total = zero(mode)
        for j in range(n):
            total = total + (rec_source.b[j] - rec_target.b[j])
        return total
    if k == n - 2:
        total = zero(mode)
        for j in range(1, n):
            total = total + (rec_source.a2[j] - rec_target.a2[j])
        diff = zero(mode)
        sqdiff = zero(mode)
        for j in range(n - 1):
            diff = diff + (rec_source.b[j] - rec_target.b[j])
            sqdiff = sqdiff + (
                rec_source.b[j] * rec_source.b[j] - rec_target.b[j] * rec_target.b[j]
            )
        half = Fraction(1, 2) if mode == RATIONAL else 0.5
        return total + half * diff * diff + half * sqdiff - rec_target.b[n - 1] * diff
    raise ValueError(f"no closed form for (n, k) = ({n}, {k}); supported k: n, n-1, n-2")


# -- ribbon structure of polynomial density ratios ----------------------------


@dataclass
class RibbonReport:
    is_ribbon: bool
    ribbon_width: int
    order: int
    max_off_ribbon: float
    witness: tuple | None = None  # (i, j, value) of the largest off-ribbon entry


def ribbon_check(
    alpha_sys: PolynomialSystem,
    delta_moments: MomentSequence,
    r: int,
    n: int,
    tol: float = 1e-10,
) -> RibbonReport:
    """Test whether Pi(alpha) * M_n(delta) * Pi(alpha)^T vanishes off band r.

    When the density ratio d(alpha)/d(delta) is the reciprocal of a degree-r
    polynomial this matrix is an r-ribbon; the converse is not checkable from
    finitely many moments and is the caller's responsibility.
    """
    if alpha_sys.order < n:
        raise ValueError(f"alpha system order {alpha_sys.order} below requested {n}")
    hank = hankel_matrix(delta_moments, n)
    pi = alpha_sys.Pi.rows
    mode = alpha_sys.mode
    worst = 0.0
    witness = None
    exact_ok = True
    for i in range(n + 1):
        for j in range(i + 1):
            if i - j <= r:
                continue
            v = zero(mode)
            for kk in range(i + 1):
                if not pi[i][kk]:
                    continue
                for ll in range(j + 1):
                    if not pi[j][ll]:
                        continue
                    v = v + pi[i][kk] * hank.entry(kk, ll) * pi[j][ll]
            mag = abs(to_float(v))
            if mode == RATIONAL:
                if v != 0:
                    exact_ok = False
            elif mag > tol:
                exact_ok = False
            if mag > worst:
                worst = mag
                witness = (i, j, v)
    return RibbonReport(
        is_ribbon=exact_ok,
        ribbon_width=r,
        order=n,
        max_off_ribbon=worst,
        witness=witness,
    )


def builtin_ribbon_pair(count: int, mode: str = RATIONAL):
    """The shipped demonstration pair: alpha uniform on [-1, 1] and delta with
    density proportional to 1 + x^2 there, whose ratio is 1 over a quadratic."""
    from .moments import FamilySpec, make_moments

    alpha = make_moments(FamilySpec("uniform", count, label="uniform"), mode)
    vals = []
    for k in range(count):
        if k % 2 == 1:
            vals.append(Fraction(0))
        else:
            t = k // 2
            vals.append(Fraction(3, 4) * (Fraction(1, 2 * t + 1) + Fraction(1, 2 * t + 3)))
    if mode == RATIONAL:
        delta = MomentSequence(tuple(vals), mode, "quadratic-weight")
    else:
        delta = MomentSequence(tuple(to_float(v) for v in vals), mode, "quadratic-weight")
    return alpha, delta


# -- Radon-Nikodym expansion ---------------------------------------------------


@dataclass
class RNExpansion:
    """Fourier coefficients omega_j of d(alpha)/d(delta) in the delta system."""

    omegas: list
    parseval_partial_sums: list
    mode: str
    target_integral: float | None = None
    bessel_residual: float | None = None

    @property
    def order(self) -> int:
        return len(self.omegas) - 1


def rn_expansion(
    alpha_moments: MomentSequence,
    delta_sys: PolynomialSystem,
    n: int,
    square_integral: float | None = None,
) -> RNExpansion:
    """omega_j = sum_k Pi(delta)[j][k] * m_k(alpha), j = 0..n.

    omega_j is the alpha-expectation of the j-th delta-orthonormal polynomial,
    i.e. the degree-(j, 0) connection coefficient; densities never enter.  The
    Parseval partial sums of omega_j^2 increase toward the integral of the
    squared density ratio when the caller can supply it independently.
    """
    if delta_sys.order < n:
        raise ValueError(f"delta system order {delta_sys.order} below requested {n}")
    alpha_moments.require(n)
    pi = delta_sys.Pi.rows
    omegas = []
    partial = []
    acc = 0.0
    for j in range(n + 1):
        w = zero(delta_sys.mode)
        for k in range(j + 1):
            if pi[j][k]:
                w = w + pi[j][k] * alpha_moments.m(k)
        omegas.append(w)
        acc += to_float(w) ** 2
        partial.append(acc)
    residual = None
    if square_integral is not None:
        residual = square_integral - partial[-1]
    return RNExpansion(
        omegas=omegas,
        parseval_partial_sums=partial,
        mode=delta_sys.mode,
        target_integral=square_integral,
        bessel_residual=residual,
    )
