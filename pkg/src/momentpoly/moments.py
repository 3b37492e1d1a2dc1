"""Moment sequences, the built-in measure catalog, and Hankel moment matrices."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import (
    FLOAT,
    RATIONAL,
    as_scalar,
    check_mode,
    format_scalar,
    to_float,
)

FAMILIES = (
    "explicit",
    "gaussian",
    "uniform",
    "semicircle",
    "chebyshev1",
    "from-recurrence",
    "q-hermite",
)

#: families with all odd moments zero and simple exact closed forms
SYMMETRIC_CATALOG = ("gaussian", "uniform", "semicircle", "chebyshev1")


class InsufficientMoments(ValueError):
    """Requested order needs more moments than the sequence provides."""


@dataclass(frozen=True)
class MomentSequence:
    """Finite normalized moment sequence m_0..m_N with m_0 = 1."""

    moments: tuple
    mode: str
    label: str = ""

    def __post_init__(self):
        check_mode(self.mode)
        if len(self.moments) < 1:
            raise ValueError("a moment sequence needs at least m_0")
        if self.moments[0] != 1:
            raise ValueError("moments not normalized: m_0 must equal 1")

    def __len__(self):
        return len(self.moments)

    def m(self, k: int):
        return self.moments[k]

    @property
    def top_order(self) -> int:
        return len(self.moments) - 1

    def require(self, k: int) -> None:
        if k > self.top_order:
            raise InsufficientMoments(
                f"need moments up to m_{k} but sequence {self.label!r} "
                f"stops at m_{self.top_order}"
            )

    def max_matrix_order(self) -> int:
        return self.top_order // 2

    def to_floats(self) -> "MomentSequence":
        if self.mode == FLOAT:
            return self
        return MomentSequence(
            tuple(to_float(v) for v in self.moments), FLOAT, self.label
        )


@dataclass(frozen=True)
class FamilySpec:
    """Request for a catalog moment sequence."""

    family: str
    count: int
    params: dict = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.count < 1:
            raise ValueError("count must be at least 1")


def _double_factorial_odd(k: int) -> int:
    # (2k-1)!! with the empty-product convention for k = 0
    out = 1
    for j in range(1, k + 1):
        out *= 2 * j - 1
    return out


def _catalog_even_moment(family: str, k: int) -> Fraction:
    if family == "gaussian":
        return Fraction(_double_factorial_odd(k))
    if family == "uniform":
        return Fraction(1, 2 * k + 1)
    if family == "semicircle":
        return Fraction(math.comb(2 * k, k), (k + 1) * 4**k)
    if family == "chebyshev1":
        return Fraction(math.comb(2 * k, k), 4**k)
    raise ValueError(family)


def make_moments(spec: FamilySpec, mode: str = RATIONAL) -> MomentSequence:
    """Generate m_0..m_{count-1} for a catalog family.

    Closed forms are used for the symmetric classical families; q-hermite and
    from-recurrence sequences are produced through the recurrence-to-moments
    map so that any count is available.
    """
    check_mode(mode)
    label = spec.label or spec.family
    if spec.family == "explicit":
        values = spec.params.get("moments")
        if values is None:
            raise ValueError("explicit family needs params['moments']")
        vals = tuple(as_scalar(v, mode) for v in values[: spec.count])
        if len(vals) < spec.count:
            raise ValueError("explicit moment list shorter than count")
        return MomentSequence(vals, mode, label)

    if spec.family in SYMMETRIC_CATALOG:
        exact = [
            _catalog_even_moment(spec.family, k // 2) if k % 2 == 0 else Fraction(0)
            for k in range(spec.count)
        ]
        if mode == FLOAT:
            return MomentSequence(tuple(to_float(v) for v in exact), mode, label)
        return MomentSequence(tuple(exact), mode, label)

    # recurrence-driven families; imported here to keep the module graph acyclic
    from .recurrence import RecurrenceCoefficients, moments_from_recurrence

    if spec.family == "q-hermite":
        from .qkernel import q_hermite_recurrence

        rec = q_hermite_recurrence(spec.params["q"], spec.count)
        seq = moments_from_recurrence(rec, spec.count, label=label)
        return seq if mode == seq.mode else seq.to_floats()

    if spec.family == "from-recurrence":
        a2 = tuple(as_scalar(v, RATIONAL) for v in spec.params["a2"])
        b = tuple(as_scalar(v, RATIONAL) for v in spec.params["b"])
        rec = RecurrenceCoefficients(a2, b, RATIONAL, label=label)
        seq = moments_from_recurrence(rec, spec.count, label=label)
        return seq if mode == RATIONAL else seq.to_floats()

    raise ValueError(f"unknown family {spec.family!r}")


@dataclass
class HankelMoments:
    """(n+1) x (n+1) moment matrix with entry (i, j) = m_{i+j}."""

    order: int
    source: MomentSequence
    _deltas: list | None = field(default=None, repr=False)

    @property
    def mode(self) -> str:
        return self.source.mode

    def moment(self, k: int):
        return self.source.m(k)

    def entry(self, i: int, j: int):
        return self.source.m(i + j)

    def dense(self) -> list:
        n = self.order
        return [[self.entry(i, j) for j in range(n + 1)] for i in range(n + 1)]

    @property
    def deltas(self) -> list:
        """Leading principal minors Delta_0..Delta_n.

        Rational mode uses fraction-free (Bareiss) elimination; float mode uses
        the Cholesky pivot product Delta_n = prod l[i][i]^2.  The two agree
        exactly in rational mode (asserted in the test suite).
        """
        if self._deltas is None:
            if self.mode == RATIONAL:
                self._deltas = principal_minors(self.dense())
            else:
                from .cholesky import cholesky_decompose

                diag = cholesky_decompose(self).diagonal()
                out, acc = [], 1.0
                for d in diag:
                    acc *= d * d
                    out.append(acc)
                self._deltas = out
        return self._deltas


def hankel_matrix(m: MomentSequence, n: int) -> HankelMoments:
    """Moment matrix of order n (requires m_0..m_{2n})."""
    if n < 0:
        raise ValueError("order must be nonnegative")
    m.require(2 * n)
    return HankelMoments(order=n, source=m)


def _det_pivoted(mat: list) -> Fraction:
    """Exact determinant by Gaussian elimination with partial pivoting."""
    a = [row[:] for row in mat]
    n = len(a)
    sign = 1
    det = Fraction(1)
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        det *= a[k][k]
        for i in range(k + 1, n):
            factor = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= factor * a[k][j]
    return sign * det


def principal_minors(mat: list) -> list:
    """Leading principal minors of an exact square matrix.

    Single-pass Bareiss elimination: after step k the (k, k) entry equals the
    (k+1) x (k+1) leading minor.  A zero pivot (possible only for degenerate
    moment inputs) triggers a per-minor pivoted fallback.
    """
    n = len(mat)
    a = [[Fraction(v) for v in row] for row in mat]
    minors = [a[0][0]]
    prev = Fraction(1)
    for k in range(n - 1):
        pivot = a[k][k]
        if pivot == 0:
            return minors + [
                _det_pivoted([row[: t + 1] for row in mat[: t + 1]])
                for t in range(k + 1, n)
            ]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - a[i][k] * a[k][j]) / prev
        prev = pivot
        minors.append(a[k + 1][k + 1])
    return minors


@dataclass
class CarlemanReport:
    """Partial sums of m_{2n}^(-1/(2n)); finiteness of a truncation proves nothing."""

    orders: list
    terms: list
    partial_sums: list
    note: str = (
        "Partial sums of the standard determinacy series m_{2n}^(-1/(2n)). "
        "Divergence of the full series is sufficient for a determinate moment "
        "problem; any finite truncation is inconclusive."
    )


def carleman_diagnostic(m: MomentSequence) -> CarlemanReport:
    """Determinacy diagnostic from the even moments available."""
    orders, terms, sums = [], [], []
    total = 0.0
    for n in range(1, m.top_order // 2 + 1):
        v = to_float(m.m(2 * n))
        if v <= 0:
            raise ValueError(f"even moment m_{2 * n} = {v} is not positive")
        term = v ** (-1.0 / (2 * n))
        total += term
        orders.append(n)
        terms.append(term)
        sums.append(total)
    return CarlemanReport(orders=orders, terms=terms, partial_sums=sums)


# -- moment file format ----------------------------------------------------


def moment_sequence_to_dict(m: MomentSequence) -> dict:
    return {
        "label": m.label,
        "mode": m.mode,
        "moments": [format_scalar(v) for v in m.moments],
    }


def moment_sequence_from_dict(data: dict, mode: str | None = None) -> MomentSequence:
    if not isinstance(data, dict) or "moments" not in data:
        raise ValueError("moment file must be an object with a 'moments' list")
    file_mode = data.get("mode", RATIONAL)
    use = mode or file_mode
    check_mode(use)
    values = tuple(as_scalar(v, use) for v in data["moments"])
    return MomentSequence(values, use, str(data.get("label", "")))


def save_moment_file(m: MomentSequence, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(moment_sequence_to_dict(m), fh, indent=2)
        fh.write("\n")


def load_moment_file(path, mode: str | None = None) -> MomentSequence:
    with open(path, "r", encoding="utf-8") as fh:
        return moment_sequence_from_dict(json.load(fh), mode=mode)
