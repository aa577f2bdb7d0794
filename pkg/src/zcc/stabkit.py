"""Stabilization analysis of exact census families.

Weighted counts at several primes are interpolated into exact polynomials in
q, normalized by the top dimension, and compared across the degree sweep.
For the hyperplane case (n = 1, m = 2) the report also assembles the two
sides of the trace-formula identity: the left side is the normalized census
value; the right side is the truncated series sum c_i q^(-i) built from the
stable normalized coefficients (Frobenius acts on H^i by q^(-i) there).
Residuals are exact rationals and are never rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .census import (CensusSpec, WeightedCensus, coprime_pair_census,
                     enumerate_unordered)
from .charpoly import CharPolynomial
from .errors import InconsistencyError, ValidationError
from .ffield import FieldSpec, make_field

TAIL_NOTE = ("series tail beyond the computed truncation is controlled by the "
             "subexponential growth of the stable multiplicities together with "
             "the q^(-i/2) decay of Frobenius traces; it is a documented "
             "convergence guarantee, not a computed bound")


# ---------------------------------------------------------------------------
# Exact interpolation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InterpolatedPolynomial:
    coefficients: tuple  # Fractions, low-to-high, trimmed
    samples: tuple       # ((q, value), ...) as supplied (sorted by q)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, q) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * q + c
        return acc


def _lagrange(points) -> list:
    """Exact Lagrange interpolation; returns low-to-high coefficients."""
    coeffs = [Fraction(0)] * len(points)
    for i, (qi, vi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (qj, _vj) in enumerate(points):
            if j == i:
                continue
            # basis *= (x - qj)
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= qj * basis[k + 1]
            denom *= qi - qj
        scale = Fraction(vi) / denom
        for k, b in enumerate(basis):
            coeffs[k] += scale * b
    return coeffs


def _trim(coeffs) -> tuple:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def interpolate_in_q(samples, expected_degree: int | None = None) -> InterpolatedPolynomial:
    """Interpolate exact census samples into a polynomial in q.

    With N >= expected_degree + 2 samples: plain Lagrange on the first
    D+1 (by increasing q), with every remaining sample checked exactly.
    With exactly N = D+1 samples the interpolant is assumed to have unit
    leading coefficient (true of every point-count polynomial here: the top
    cell contributes q^topdim), leaving one slack sample as the consistency
    check.  Any violated check raises "not polynomial of expected degree".
    """
    pts = [(int(q), Fraction(v)) for q, v in samples]
    if len({q for q, _v in pts}) != len(pts):
        raise ValidationError("duplicate q sample")
    if len(pts) < 2:
        raise ValidationError("need at least 2 samples")
    pts.sort()
    if expected_degree is None:
        coeffs = _trim(_lagrange(pts))
        return InterpolatedPolynomial(coeffs, tuple(pts))
    D = int(expected_degree)
    if D < 0:
        raise ValidationError("expected degree must be >= 0")
    if len(pts) >= D + 2:
        fit_pts, check_pts = pts[:D + 1], pts[D + 1:]
        coeffs = _trim(_lagrange(fit_pts))
    elif len(pts) == D + 1:
        if D == 0:
            coeffs = (Fraction(1),)
            check_pts = pts
        else:
            fit_pts = [(q, v - Fraction(q) ** D) for q, v in pts[:D]]
            low = _lagrange(fit_pts)
            coeffs = _trim(list(low) + [Fraction(0)] * (D - len(low)) + [Fraction(1)])
            check_pts = pts[D:]
    else:
        raise ValidationError(
            f"need at least {D + 1} samples for expected degree {D}")
    poly = InterpolatedPolynomial(coeffs, tuple(pts))
    if poly.degree > D:
        raise InconsistencyError("not polynomial of expected degree",
                                 trace={"degree": poly.degree, "expected": D})
    bad = [(q, v, poly(q)) for q, v in check_pts if poly(q) != v]
    if bad:
        raise InconsistencyError("not polynomial of expected degree",
                                 trace={"mismatches": bad})
    return poly


def normalized_coefficients(f: InterpolatedPolynomial, topdim: int) -> tuple:
    """(c_0, c_1, ...) with f(q) / q^topdim = sum c_i q^(-i), zero-padded."""
    if f.degree > topdim:
        raise ValidationError("count exceeds dimension bound")
    out = []
    for i in range(topdim + 1):
        k = topdim - i
        out.append(f.coefficients[k] if k < len(f.coefficients) else Fraction(0))
    return tuple(out)


# ---------------------------------------------------------------------------
# Stabilization detection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilizationResult:
    stable_from: tuple        # per position: start index of the final constant run
    stable_values: tuple      # per position: the final value
    unstable_positions: tuple  # positions whose final run has length 1
    onset: int | None          # first index where all requested positions are settled
    depth: int

    def stable_value(self, i: int):
        if i in self.unstable_positions or i >= len(self.stable_values):
            return None
        return self.stable_values[i]


def detect_stabilization(vectors, depth: int | None = None) -> StabilizationResult:
    """Per-coefficient stability of a sequence of normalized vectors.

    For each position the largest suffix on which the value is constant is
    found; a position whose constant suffix has length 1 never stabilized
    within the sweep and is flagged.  The onset is the first index from
    which every position up to `depth` is constant.
    """
    vecs = [tuple(v) for v in vectors]
    if len(vecs) < 2:
        raise ValidationError("need at least 2 vectors")
    width = max(len(v) for v in vecs)
    vecs = [v + (Fraction(0),) * (width - len(v)) for v in vecs]
    last = len(vecs) - 1
    stable_from = []
    stable_values = []
    unstable = []
    for i in range(width):
        final = vecs[last][i]
        start = last
        while start > 0 and vecs[start - 1][i] == final:
            start -= 1
        stable_from.append(start)
        stable_values.append(final)
        if start == last:
            unstable.append(i)
    if depth is None:
        depth = width - 1
    depth = min(depth, width - 1)
    requested = range(depth + 1)
    if any(i in unstable for i in requested):
        onset = None
    else:
        onset = max(stable_from[i] for i in requested) if depth >= 0 else 0
    return StabilizationResult(tuple(stable_from), tuple(stable_values),
                               tuple(unstable), onset, depth)


# ---------------------------------------------------------------------------
# The Lefschetz-side report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepPoint:
    d: tuple
    topdim: int
    samples: tuple        # ((q, total), ...)
    coefficients: tuple   # interpolant, low-to-high
    normalized: tuple     # c_0 .. c_topdim


@dataclass(frozen=True)
class SeriesSide:
    truncation: int
    coefficients: tuple     # ((i, c_i stable), ...) for stabilized i <= T
    skipped: tuple          # positions <= T that never stabilized
    partial_sums: tuple     # ((q, value), ...)


@dataclass(frozen=True)
class StabilityReport:
    m: int
    n: int
    poly: CharPolynomial
    d_values: tuple
    q_list: tuple
    points: tuple            # SweepPoint per d
    stabilization: StabilizationResult
    onset_d: int | None
    lhs: tuple               # per d: ((q, lhs value), ...)
    series: SeriesSide | None
    series_note: str
    residuals: tuple | None  # per d: ((q, lhs - partial sum), ...)
    tail_note: str

    def to_json_dict(self) -> dict:
        out = {
            "m": self.m,
            "n": self.n,
            "poly": str(self.poly),
            "d_values": list(self.d_values),
            "q_list": list(self.q_list),
            "points": [
                {
                    "d": list(pt.d),
                    "topdim": pt.topdim,
                    "samples": [[q, str(v)] for q, v in pt.samples],
                    "coefficients": [str(c) for c in pt.coefficients],
                    "normalized": [str(c) for c in pt.normalized],
                }
                for pt in self.points
            ],
            "stabilization": {
                "stable_from_d": [self.d_values[i] for i in self.stabilization.stable_from],
                "stable_values": [str(v) for v in self.stabilization.stable_values],
                "unstable_positions": list(self.stabilization.unstable_positions),
                "onset_d": self.onset_d,
            },
            "lhs": [[list(pt.d), [[q, str(v)] for q, v in row]]
                    for pt, row in zip(self.points, self.lhs)],
            "series_note": self.series_note,
            "tail_note": self.tail_note,
        }
        if self.series is not None:
            out["series"] = {
                "truncation": self.series.truncation,
                "coefficients": [[i, str(c)] for i, c in self.series.coefficients],
                "skipped_positions": list(self.series.skipped),
                "partial_sums": [[q, str(v)] for q, v in self.series.partial_sums],
            }
            out["residuals"] = [[list(pt.d), [[q, str(v)] for q, v in row]]
                                for pt, row in zip(self.points, self.residuals)]
        return out


def _census_total(d, n, field: FieldSpec, poly: CharPolynomial,
                  guard, threads) -> WeightedCensus:
    single_column = len(poly.columns_used()) <= 1
    if n == 1 and len(d) == 2 and single_column:
        return coprime_pair_census(d, n, field, poly)
    spec = CensusSpec(d=tuple(d), n=n, field=field, poly=poly, mode="unordered")
    return enumerate_unordered(spec, guard=guard, threads=threads)


def lefschetz_report(d_values, n: int, m: int, poly: CharPolynomial, q_list,
                     truncation: int | None = None, dim_x: int = 1,
                     guard: int = 10 ** 8, threads: int = 1) -> StabilityReport:
    """Assemble the degree sweep d = (t,...,t) for t in d_values.

    Per degree: exact unordered totals at each q, an interpolated polynomial
    (expected degree m*t*dim_x), and normalized coefficients.  Stabilization
    is detected coefficient-wise across the sweep.  For n = 1, m = 2 the
    truncated series with the stable coefficients is evaluated and exact
    residuals against each left side are reported; otherwise the series side
    is marked not computed.
    """
    d_values = [int(t) for t in d_values]
    q_list = sorted({int(q) for q in q_list})
    if len(d_values) < 2:
        raise ValidationError("sweep needs at least 2 degree values")
    if m < 1:
        raise ValidationError("m must be >= 1")
    used = poly.columns_used()
    if used and max(used) > m:
        raise ValidationError(f"statistic uses column {max(used)} > m = {m}")

    fields = {}
    for q in q_list:
        fields[q] = _field_for(q)

    points = []
    lhs_rows = []
    for t in d_values:
        d = (t,) * m
        topdim = m * t * dim_x
        needed = topdim + 1
        if len(q_list) < needed:
            raise ValidationError(
                f"degree {t} needs at least {needed} primes in q_list")
        samples = []
        for q in q_list:
            cen = _census_total(d, n, fields[q], poly, guard, threads)
            samples.append((q, cen.total))
        poly_q = interpolate_in_q(samples, expected_degree=topdim)
        normalized = normalized_coefficients(poly_q, topdim)
        points.append(SweepPoint(d=d, topdim=topdim, samples=tuple(samples),
                                 coefficients=poly_q.coefficients,
                                 normalized=normalized))
        lhs_rows.append(tuple((q, total / Fraction(q) ** topdim)
                              for q, total in samples))

    stab = detect_stabilization([pt.normalized for pt in points])
    onset_d = d_values[stab.onset] if stab.onset is not None else None

    series = None
    residuals = None
    if n == 1 and m == 2:
        top = max(pt.topdim for pt in points)
        T = top if truncation is None else min(int(truncation), top)
        coeff_pairs = []
        skipped = []
        for i in range(T + 1):
            v = stab.stable_value(i)
            if v is None:
                skipped.append(i)
            else:
                coeff_pairs.append((i, v))
        partial = tuple(
            (q, sum((c / Fraction(q) ** i for i, c in coeff_pairs), Fraction(0)))
            for q in q_list)
        series = SeriesSide(truncation=T, coefficients=tuple(coeff_pairs),
                            skipped=tuple(skipped), partial_sums=partial)
        psum = dict(partial)
        residuals = tuple(
            tuple((q, lhs - psum[q]) for q, lhs in row) for row in lhs_rows)
        note = "computed (hyperplane case n=1, m=2)"
    else:
        note = "not computed (n≠1)" if n != 1 else "not computed (m≠2)"

    return StabilityReport(
        m=m, n=n, poly=poly, d_values=tuple(d_values), q_list=tuple(q_list),
        points=tuple(points), stabilization=stab, onset_d=onset_d,
        lhs=tuple(lhs_rows), series=series, series_note=note,
        residuals=residuals, tail_note=TAIL_NOTE)


def _field_for(q: int) -> FieldSpec:
    """F_q for a prime power q, factoring q = p^e."""
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            qq = q
            while qq % p == 0:
                qq //= p
                e += 1
            if qq != 1:
                raise ValidationError(f"{q} is not a prime power")
            return make_field(p, e)
    raise ValidationError(f"{q} is not a prime power")
