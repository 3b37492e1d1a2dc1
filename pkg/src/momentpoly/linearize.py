"""Linearization coefficients of products of orthogonal polynomials.

p_n * p_m = sum_s c[n][m][s] * p_s with

    c_{n,m,s} = sum_{j<=n, k<=m, j+k>=s} pi[n][j] * pi[m][k] * lambda[j+k][s]

in the orthonormal basis; the monic variant replaces (pi, lambda) by
(eta, tau).  Tables need the system built to order n + m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polysys import PolynomialSystem, monic_tables
from .recurrence import RecurrenceCoefficients
from .scalars import RATIONAL, zero

BASES = ("orthonormal", "monic")


@dataclass
class LinearizationTable:
    """Coefficients c[s] of p_n * p_m expanded back into the system, s = 0..n+m."""

    n: int
    m: int
    coefficients: list
    basis: str
    mode: str

    def entry(self, s: int):
        return self.coefficients[s]


def linearization_table(
    sys_: PolynomialSystem, n: int, m: int, basis: str = "orthonormal"
) -> LinearizationTable:
    if basis not in BASES:
        raise ValueError(f"basis must be one of {BASES}")
    if sys_.order < n + m:
        raise ValueError(
            f"product of degrees {n} and {m} needs system order {n + m}, "
            f"have {sys_.order}"
        )
    if basis == "orthonormal":
        upper = sys_.Pi.rows
        lower = sys_.Lambda.rows
    else:
        eta, tau = monic_tables(sys_)
        upper, lower = eta.rows, tau.rows
    mode = sys_.mode
    coeffs = []
    for s in range(n + m + 1):
        total = zero(mode)
        for j in range(n + 1):
            cj = upper[n][j]
            if not cj:
                continue
            for k in range(m + 1):
                if j + k < s:
                    continue
                ck = upper[m][k]
                if not ck:
                    continue
                total = total + cj * ck * lower[j + k][s]
        coeffs.append(total)
    return LinearizationTable(n=n, m=m, coefficients=coeffs, basis=basis, mode=mode)


def closed_form_linearization(
    rec: RecurrenceCoefficients, n: int, m: int, s: int
) -> dict:
    """Printed closed forms for the two monic coefficients below the top degree.

    For s = n + m - 1 the single printed formula is returned under
    ``"statement"``.  For s = n + m - 2 the statement and the expansion used in
    its printed derivation disagree with each other; both are evaluated and
    returned (keys ``"statement"`` and ``"proof_expansion"``) so callers can
    report each against the table value without adjudicating.
    """
    mode = rec.mode
    big, small = max(n, m), min(n, m)
    if s == n + m - 1:
        total = zero(mode)
        for j in range(big, n + m):
            total = total + (rec.b[j] - rec.b[j - big])
        return {"statement": total}
    if s == n + m - 2:
        a_part = zero(mode)
        for j in range(big, n + m):
            a_part = a_part + rec.a2[j]
        for j in range(1, small):
            a_part = a_part - rec.a2[j]
        half = Fraction(1, 2) if mode == RATIONAL else 0.5
        d1 = zero(mode)
        d2 = zero(mode)
        for j in range(big, n + m - 1):
            d1 = d1 + rec.b[j]
            d2 = d2 + rec.b[j] * rec.b[j]
        for j in range(small):
            d1 = d1 - rec.b[j]
            d2 = d2 - rec.b[j] * rec.b[j]
        statement = a_part - half * d1 * d1 - half * d2

        bn = zero(mode)
        bm = zero(mode)
        bnm = zero(mode)
        for j in range(n):
            bn = bn + rec.b[j]
        for j in range(m):
            bm = bm + rec.b[j]
        for j in range(n + m - 1):
            bnm = bnm + rec.b[j]
        proof = a_part - (bn + bm) * bnm + bn * bm

        return {"statement": statement, "proof_expansion": proof}
    raise ValueError(f"no closed form for s = {s}; supported: n+m-1 and n+m-2")


@dataclass
class LinearizationCheck:
    name: str
    passed: bool
    table_value: object
    closed_value: object


def verify_linearization_closed_forms(
    sys_: PolynomialSystem, n: int, m: int
) -> list:
    """Compare every printed closed form against the monic table."""
    table = linearization_table(sys_, n, m, basis="monic")
    out = []
    top = closed_form_linearization(sys_.rec, n, m, n + m - 1)
    out.append(
        LinearizationCheck(
            "top_minus_one_statement",
            table.entry(n + m - 1) == top["statement"],
            table.entry(n + m - 1),
            top["statement"],
        )
    )
    if n + m >= 2:
        nxt = closed_form_linearization(sys_.rec, n, m, n + m - 2)
        for key, val in nxt.items():
            out.append(
                LinearizationCheck(
                    f"top_minus_two_{key}",
                    table.entry(n + m - 2) == val,
                    table.entry(n + m - 2),
                    val,
                )
            )
    return out
