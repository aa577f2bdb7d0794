"""Exact weighted point counts of 0-cycle spaces over F_q.

Three independent routes are provided and must agree:

* enumerate_unordered walks all m-tuples of monic polynomials of the given
  degrees, keeps the members (no geometric point of multiplicity >= n in
  every coordinate), and weights each member by the class-function value of
  its Frobenius coset.
* enumerate_ordered walks raw coordinate tuples of the ordered space (always
  unweighted) and cross-checks the lattice point-count polynomial.
* burnside_count averages Frobenius-twisted fixed-point counts over the
  conjugacy classes of S_d, evaluating the statistic at the class itself.

Weighting note: a point whose divisor has a repeated irreducible factor has a
nontrivial stabilizer H, and the statistic's value there is the average of P
over the coset sigma_y H.  Concretely, each factor of degree j appearing e
times contributes parts j*lambda where lambda runs over partitions of e with
the 1/z_lambda class measure, independently across factors and columns; for
squarefree coordinates this collapses to evaluating P at the plain cycle
type.  burnside_count never uses this reduction, so the agreement of the two
routes is a genuine cross-check.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .charpoly import CharPolynomial, evaluate, partitions_of
from .errors import GuardError, ValidationError
from .ffield import FieldSpec, make_field
from .polyarith import (MonicPoly, factorize, gcd, radical_n, _mul, _trim)

DEFAULT_POINT_GUARD = 10 ** 8
BURNSIDE_DEGREE_GUARD = 8


@dataclass(frozen=True)
class CensusSpec:
    d: tuple
    n: int
    field: FieldSpec
    poly: CharPolynomial
    mode: str  # ordered | unordered | burnside

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("threshold n must be >= 1")
        if not self.d or any(x < 0 for x in self.d):
            raise ValidationError(f"bad degree vector {self.d}")
        if self.mode not in ("ordered", "unordered", "burnside"):
            raise ValidationError(f"unknown census mode {self.mode!r}")
        used = self.poly.columns_used()
        if used and max(used) > len(self.d):
            raise ValidationError(
                f"statistic uses column {max(used)} but d has {len(self.d)} columns")


@dataclass(frozen=True)
class WeightedCensus:
    spec: CensusSpec
    total: Fraction
    point_count: int
    method: str
    elapsed: float

    def to_json_dict(self) -> dict:
        # elapsed is deliberately omitted: persisted output is byte-deterministic
        return {
            "d": list(self.spec.d),
            "n": self.spec.n,
            "q": self.spec.field.q,
            "p": self.spec.field.p,
            "e": self.spec.field.e,
            "poly": str(self.spec.poly),
            "mode": self.spec.mode,
            "method": self.method,
            "point_count": self.point_count,
            "total": str(self.total),
        }


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


def is_member(polys, n: int) -> bool:
    """True iff no geometric point has multiplicity >= n in every coordinate.

    Equivalently the gcd over coordinates of the n-fold radicals is 1; gcds
    of radicals see every geometric common factor, so the decision is made
    over the algebraic closure without root-finding.
    """
    if n < 1:
        raise ValidationError("threshold n must be >= 1")
    acc = None
    for f in polys:
        rad = radical_n(f, n)
        acc = rad if acc is None else gcd(acc, rad)
        if acc.degree == 0:
            return True
    if acc is None:
        raise ValidationError("empty coordinate tuple")
    return acc.degree == 0


# ---------------------------------------------------------------------------
# Precomputed per-degree polynomial records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyRecord:
    coeffs: tuple                  # non-leading coefficients
    factors: tuple                 # ((degree, coeffs), multiplicity) sorted
    signature: tuple               # sorted (degree, multiplicity) per factor

    def radical_keys(self, n: int) -> frozenset:
        return frozenset(key for key, m in self.factors if m >= n)


@lru_cache(maxsize=None)
def poly_records(field: FieldSpec, degree: int, seed: int = 0) -> tuple:
    """Factorization records for every monic polynomial of the given degree.

    `seed` mixes into the derandomized equal-degree splitting; it never
    changes the records (the factor multiset is unique), only the internal
    splitting order, and exists for reproducibility experiments.
    """
    out = []
    for coeffs in product(range(field.q), repeat=degree):
        fact = factorize(MonicPoly(field, coeffs), seed=seed)
        keys = tuple(sorted(((g.degree, g.coeffs), m) for g, m in fact.factors))
        sig = tuple(sorted((g.degree, m) for g, m in fact.factors))
        out.append(PolyRecord(coeffs, keys, sig))
    return tuple(out)


# ---------------------------------------------------------------------------
# Coset-averaged statistic values
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def averaged_class_value(P: CharPolynomial, signatures: tuple) -> Fraction:
    """Average of P over the Frobenius coset of a point with these per-column
    factor signatures (each signature is a tuple of (degree, multiplicity))."""
    slots = []  # (column, degree, list of (parts, weight))
    fixed = [[] for _ in signatures]
    for k, sig in enumerate(signatures):
        for j, e in sig:
            if e == 1:
                fixed[k].append(j)
            else:
                opts = [(tuple(j * part for part in lam), Fraction(1, z))
                        for lam, z in partitions_of(e)]
                slots.append((k, opts))
    if not slots:
        ctype = tuple(tuple(sorted(col, reverse=True)) for col in fixed)
        return evaluate(P, ctype)
    total = Fraction(0)
    for combo in product(*(opts for _k, opts in slots)):
        cols = [list(parts) for parts in fixed]
        w = Fraction(1)
        for (k, _opts), (parts, weight) in zip(slots, combo):
            cols[k].extend(parts)
            w *= weight
        ctype = tuple(tuple(sorted(col, reverse=True)) for col in cols)
        total += w * evaluate(P, ctype)
    return total


# ---------------------------------------------------------------------------
# Unordered census (monic polynomial tuples)
# ---------------------------------------------------------------------------


def _unordered_scan(field, d, n, P, start, stop, seed=0):
    """Scan a contiguous shard of first-coordinate indices; exact partial sums."""
    records = [poly_records(field, dk, seed) for dk in d]
    radsets = [[rec.radical_keys(n) for rec in col] for col in records]
    weigh = not P.is_one()
    count = 0
    total = Fraction(0)
    if len(d) == 1:
        col, rads = records[0], radsets[0]
        for i in range(start, stop):
            if not rads[i]:
                count += 1
                if weigh:
                    total += averaged_class_value(P, (col[i].signature,))
    elif len(d) == 2:
        col0, col1 = records
        rad0, rad1 = radsets
        for i in range(start, stop):
            r0 = rad0[i]
            sig0 = col0[i].signature
            for jdx, r1 in enumerate(rad1):
                if r0.isdisjoint(r1):
                    count += 1
                    if weigh:
                        total += averaged_class_value(P, (sig0, col1[jdx].signature))
    else:
        ranges = [range(len(col)) for col in records[1:]]
        for i in range(start, stop):
            for rest in product(*ranges):
                idxs = (i,) + rest
                sets = [radsets[k][idx] for k, idx in enumerate(idxs)]
                common = sets[0]
                for s in sets[1:]:
                    common = common & s
                    if not common:
                        break
                if not common:
                    count += 1
                    if weigh:
                        total += averaged_class_value(
                            P, tuple(records[k][idx].signature
                                     for k, idx in enumerate(idxs)))
    if not weigh:
        total = Fraction(count)
    return count, total


def enumerate_unordered(spec: CensusSpec, guard: int = DEFAULT_POINT_GUARD,
                        threads: int = 1, factor_seed: int = 0) -> WeightedCensus:
    """Iterate all m-tuples of monic polynomials of degrees d over F_q."""
    if spec.mode != "unordered":
        raise ValidationError("spec mode must be 'unordered'")
    q = spec.field.q
    if q ** sum(spec.d) > guard:
        raise GuardError(
            f"q^|d| = {q ** sum(spec.d)} exceeds guard {guard}; try burnside mode")
    t0 = time.perf_counter()
    first = q ** spec.d[0]
    if threads > 1 and first >= 2 * threads:
        for dk in spec.d:
            poly_records(spec.field, dk, factor_seed)  # warm caches before forking
        bounds = [(first * w) // threads for w in range(threads + 1)]
        args = [(spec.field, spec.d, spec.n, spec.poly, bounds[w], bounds[w + 1],
                 factor_seed)
                for w in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_unordered_scan_star, args))
        count = sum(c for c, _t in parts)
        total = sum((t for _c, t in parts), Fraction(0))
    else:
        count, total = _unordered_scan(spec.field, spec.d, spec.n, spec.poly,
                                       0, first, factor_seed)
    return WeightedCensus(spec, total, count, "unordered-enumeration",
                          time.perf_counter() - t0)


def _unordered_scan_star(args):
    return _unordered_scan(*args)


# ---------------------------------------------------------------------------
# Ordered census (raw coordinate tuples)
# ---------------------------------------------------------------------------


def enumerate_ordered(spec: CensusSpec, guard: int = DEFAULT_POINT_GUARD) -> WeightedCensus:
    """Count F_q-points of the ordered space; the statistic must be 1."""
    if spec.mode != "ordered":
        raise ValidationError("spec mode must be 'ordered'")
    if not spec.poly.is_one():
        raise ValidationError("ordered census is unweighted")
    q = spec.field.q
    total_deg = sum(spec.d)
    if q ** total_deg > guard:
        raise GuardError(f"q^|d| = {q ** total_deg} exceeds guard {guard}")
    t0 = time.perf_counter()
    n = spec.n
    count = 0
    m = len(spec.d)
    for tup in product(range(q), repeat=total_deg):
        cols = []
        pos = 0
        for dk in spec.d:
            cols.append(tup[pos:pos + dk])
            pos += dk
        first_counts: dict = {}
        for v in cols[0]:
            first_counts[v] = first_counts.get(v, 0) + 1
        bad = False
        for v, c in first_counts.items():
            if c >= n and all(cols[k].count(v) >= n for k in range(1, m)):
                bad = True
                break
        if not bad:
            count += 1
    return WeightedCensus(spec, Fraction(count), count, "ordered-enumeration",
                          time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Burnside-Frobenius census
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _subfield_embedding(base: FieldSpec, ext: FieldSpec):
    """The canonical embedding F_q -> F_{q^j}: the power-basis generator of
    `base` maps to the lexicographically least root of base's modulus."""
    modulus = MonicPoly(ext, tuple(int(c) for c in base.modulus))
    roots = []
    for g, _m in factorize(modulus).factors:
        if g.degree != 1:
            raise ValidationError("modulus does not split in the extension")
        roots.append(ext.neg_raw(g.coeffs[0]))
    root = min(roots, key=ext.decode)
    powers = [1]
    for _ in range(base.e - 1):
        powers.append(ext.mul_raw(powers[-1], root))
    columns = [ext.decode(w) for w in powers]  # F_p vectors, length ext.e
    return tuple(powers), tuple(columns)


def _solve_mod_p(columns, target, p):
    """Solve sum_i v_i * columns[i] = target over F_p (unique solution)."""
    rows = len(columns[0])
    ncols = len(columns)
    mat = [[columns[c][r] % p for c in range(ncols)] + [target[r] % p]
           for r in range(rows)]
    piv_rows = []
    col = 0
    for col in range(ncols):
        sel = None
        for r in range(len(piv_rows), rows):
            if mat[r][col]:
                sel = r
                break
        if sel is None:
            raise ValidationError("embedding matrix is singular")
        r0 = len(piv_rows)
        mat[r0], mat[sel] = mat[sel], mat[r0]
        inv = pow(mat[r0][col], p - 2, p)
        mat[r0] = [(x * inv) % p for x in mat[r0]]
        for r in range(rows):
            if r != r0 and mat[r][col]:
                f = mat[r][col]
                mat[r] = [(a - f * b) % p for a, b in zip(mat[r], mat[r0])]
        piv_rows.append(r0)
    for r in range(ncols, rows):
        if mat[r][ncols]:
            raise ValidationError("coefficient is not in the subfield")
    return tuple(mat[i][ncols] for i in range(ncols))


@lru_cache(maxsize=None)
def _twisted_choice_table(base: FieldSpec, j: int) -> tuple:
    """For each x in F_{q^j}: the key of its minimal polynomial over F_q and
    the multiplicity j/deg(x) its Frobenius orbit contributes to the divisor.

    Keys are (degree, non-leading coefficients) in the standalone F_q model,
    so they are comparable across different cycle lengths j.
    """
    if j == 1:
        # minimal polynomial of x is T - x
        return tuple(((1, (base.neg_raw(x),)), 1) for x in range(base.q))
    ext = make_field(base.p, base.e * j)
    if base.e == 1:
        def back(raw):
            if raw >= base.p:
                raise ValidationError("coefficient is not in the prime field")
            return raw
    else:
        _powers, columns = _subfield_embedding(base, ext)

        def back(raw):
            sol = _solve_mod_p(columns, ext.decode(raw), base.p)
            return base.encode(sol)

    q = base.q
    out = []
    for x in range(ext.q):
        orbit = [x]
        y = ext.pow_raw(x, q)
        while y != x:
            orbit.append(y)
            y = ext.pow_raw(y, q)
        e = len(orbit)
        # minimal polynomial = prod (T - y) over the orbit, in ext[T]
        vec = [1]
        for y in orbit:
            vec = _mul(ext, vec, [ext.neg_raw(y), 1])
        key = tuple(back(c) for c in _trim(list(vec))[:-1])
        out.append(((e, key), j // e))
    return tuple(out)


def burnside_count(spec: CensusSpec, guard: int = DEFAULT_POINT_GUARD) -> WeightedCensus:
    """Weighted count via Frobenius-twisted fixed points, class by class.

    For a class sigma, the fixed tuples of sigma o Frob_q are parameterized
    by one free element of F_{q^j} per j-cycle; the cycle's coordinates carry
    the element's Frobenius iterates, so its orbit contributes multiplicity
    j/deg(x) at each root of its minimal polynomial.  Membership is tested
    on that divisor data; the statistic is evaluated at sigma's cycle type.
    """
    if spec.mode != "burnside":
        raise ValidationError("spec mode must be 'burnside'")
    total_deg = sum(spec.d)
    if total_deg > BURNSIDE_DEGREE_GUARD:
        raise GuardError(
            f"|d| = {total_deg} exceeds burnside guard {BURNSIDE_DEGREE_GUARD}")
    q = spec.field.q
    if q ** total_deg > guard:
        raise GuardError(f"q^cycles = {q ** total_deg} exceeds guard {guard}")
    t0 = time.perf_counter()
    F = spec.field
    n = spec.n
    m = len(spec.d)

    def table(j: int):
        return _twisted_choice_table(F, j)

    total = Fraction(0)
    count = Fraction(0)
    columns = [partitions_of(dk) for dk in spec.d]
    for combo in product(*columns):
        class_weight = Fraction(1)
        for _lam, z in combo:
            class_weight /= z
        ctype = tuple(lam for lam, _z in combo)
        value = evaluate(spec.poly, ctype) if not spec.poly.is_one() else Fraction(1)
        cycles = [(k, j) for k, (lam, _z) in enumerate(combo) for j in lam]
        fixed = 0
        for choice in product(*(table(j) for _k, j in cycles)):
            mults = [dict() for _ in range(m)]
            for (k, _j), (key, mult) in zip(cycles, choice):
                col = mults[k]
                col[key] = col.get(key, 0) + mult
            smallest = min(mults, key=len) if m > 1 else mults[0]
            bad = False
            for key, c in smallest.items():
                if c >= n and all(col.get(key, 0) >= n for col in mults):
                    bad = True
                    break
            if not bad:
                fixed += 1
        total += class_weight * value * fixed
        count += class_weight * fixed
    if count.denominator != 1:
        raise ValidationError("burnside point count is not an integer")
    return WeightedCensus(spec, total, int(count), "burnside-frobenius",
                          time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# Fast exact path for the rational-maps sweep (n = 1, m = 2)
# ---------------------------------------------------------------------------


def coprime_pair_census(d: tuple, n: int, field: FieldSpec,
                        P: CharPolynomial, factor_seed: int = 0) -> WeightedCensus:
    """Exact unordered census for m = 2, n = 1 with a single-column statistic.

    Counts pairs of monic polynomials with no common irreducible factor by
    inclusion-exclusion over the distinct factors of the statistic-bearing
    coordinate, avoiding the q^(d1+d2) pair walk.  Validated against
    enumerate_unordered at small q.
    """
    if len(d) != 2 or n != 1:
        raise ValidationError("fast path requires m = 2 and n = 1")
    used = P.columns_used()
    if len(used) > 1:
        raise ValidationError("fast path requires a single-column statistic")
    col = (used.pop() - 1) if used else 0
    other = 1 - col
    t0 = time.perf_counter()
    q = field.q
    d_other = d[other]
    weigh = not P.is_one()
    # remap a column-`col` statistic to column 1 for single-column evaluation
    if weigh and col == 1:
        remapped = CharPolynomial(
            1, tuple((tuple(((1, j), e) for (_k, j), e in mono), c)
                     for mono, c in P.terms))
    else:
        remapped = P
    count = 0
    total = Fraction(0)
    for rec in poly_records(field, d[col], factor_seed):
        degs = [deg for (deg, _c), _m in rec.factors]
        coprime = 0
        for bits in range(1 << len(degs)):
            s = 0
            sign = 1
            for i, deg in enumerate(degs):
                if bits >> i & 1:
                    s += deg
                    sign = -sign
            if s <= d_other:
                coprime += sign * q ** (d_other - s)
        count += coprime
        if weigh:
            total += coprime * averaged_class_value(remapped, (rec.signature,))
    if not weigh:
        total = Fraction(count)
    spec = CensusSpec(d=tuple(d), n=n, field=field, poly=P, mode="unordered")
    return WeightedCensus(spec, total, count, "coprime-inclusion-exclusion",
                          time.perf_counter() - t0)


def run_census(spec: CensusSpec, guard: int = DEFAULT_POINT_GUARD,
               threads: int = 1, factor_seed: int = 0) -> WeightedCensus:
    if spec.mode == "ordered":
        return enumerate_ordered(spec, guard)
    if spec.mode == "unordered":
        return enumerate_unordered(spec, guard, threads, factor_seed)
    return burnside_count(spec, guard)
