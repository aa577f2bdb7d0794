"""Exact arithmetic in finite fields F_q for prime powers q = p^e.

Elements are represented by their coordinate vector in the power basis of a
canonical modulus: the lexicographically least monic irreducible of degree e
over F_p, coefficients compared low-to-high degree.  Internally an element is
packed into a single int (base-p digits, constant term least significant),
which keeps prime-field arithmetic at native speed; the public FieldElement
carries the unpacked coordinate tuple.

Deterministic by construction: the same (p, e) always yields the same
modulus, so serialized data round-trips across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import ValidationError

DEFAULT_SIZE_GUARD = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# Prime-field polynomial helpers for the modulus search.  Vectors are lists of
# ints (low-to-high degree), trimmed, [] = zero.
# ---------------------------------------------------------------------------

def _pf_trim(v):
    while v and v[-1] == 0:
        v.pop()
    return v


def _pf_rem(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _pf_trim(a)
    return a


def _pf_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pf_rem(_pf_trim(out), mod, p)


def _pf_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pf_rem(a, b, p)
    return a


def _pf_frobenius_power(v, k, mod, p):
    """v^(p^k) mod the given modulus, by k rounds of p-th powering."""
    for _ in range(k):
        acc = [1]
        base = v
        exp = p
        while exp:
            if exp & 1:
                acc = _pf_mulmod(acc, base, mod, p)
            base = _pf_mulmod(base, base, mod, p)
            exp >>= 1
        v = acc
    return v


def _pf_sub_x(v, p):
    """v - x, trimmed."""
    out = list(v)
    while len(out) < 2:
        out.append(0)
    out[1] = (out[1] - 1) % p
    return _pf_trim(out)


def _prime_divisors(n):
    out = []
    r = 2
    while r * r <= n:
        if n % r == 0:
            out.append(r)
            while n % r == 0:
                n //= r
        r += 1
    if n > 1:
        out.append(n)
    return out


def _pf_is_irreducible(f, p):
    """Rabin test: x^(p^e) = x mod f and gcd(x^(p^(e/r)) - x, f) = 1 for r | e."""
    e = len(f) - 1
    x = [0, 1]
    if _pf_sub_x(_pf_frobenius_power(x, e, f, p), p):
        return False
    for r in _prime_divisors(e):
        diff = _pf_sub_x(_pf_frobenius_power(x, e // r, f, p), p)
        if len(_pf_gcd(f, diff, p)) - 1 > 0:
            return False
    return True


@lru_cache(maxsize=None)
def _canonical_modulus(p: int, e: int) -> tuple[int, ...]:
    """Non-leading coefficients of the least monic irreducible of degree e."""
    if e == 1:
        return (0,)
    for low in product(range(p), repeat=e):
        f = list(low) + [1]
        if f[0] == 0:
            continue  # divisible by x
        if _pf_is_irreducible(f, p):
            return low
    raise RuntimeError("no irreducible found (unreachable)")


# ---------------------------------------------------------------------------
# Field specification and packed-int arithmetic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """The field F_q, q = p^e, with its canonical modulus.

    `modulus` holds the e non-leading coefficients (low-to-high); the leading
    coefficient 1 is implicit.  Raw elements are ints in [0, q) whose base-p
    digits are the power-basis coordinates.
    """

    p: int
    e: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.e

    # -- packing ------------------------------------------------------------

    def decode(self, raw: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.e):
            raw, r = divmod(raw, p)
            out.append(r)
        return tuple(out)

    def encode(self, coeffs) -> int:
        raw = 0
        for c in reversed(coeffs):
            raw = raw * self.p + c
        return raw

    # -- arithmetic on raw ints ----------------------------------------------

    def add_raw(self, a: int, b: int) -> int:
        p = self.p
        if self.e == 1:
            return (a + b) % p
        out = 0
        mult = 1
        for _ in range(self.e):
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * mult
            mult *= p
        return out

    def neg_raw(self, a: int) -> int:
        p = self.p
        if self.e == 1:
            return (-a) % p
        out = 0
        mult = 1
        for _ in range(self.e):
            a, ra = divmod(a, p)
            out += ((-ra) % p) * mult
            mult *= p
        return out

    def sub_raw(self, a: int, b: int) -> int:
        return self.add_raw(a, self.neg_raw(b))

    def mul_raw(self, a: int, b: int) -> int:
        p = self.p
        if self.e == 1:
            return (a * b) % p
        if a == 0 or b == 0:
            return 0
        va = self.decode(a)
        vb = self.decode(b)
        e = self.e
        conv = [0] * (2 * e - 1)
        for i, ai in enumerate(va):
            if ai:
                for j, bj in enumerate(vb):
                    conv[i + j] = (conv[i + j] + ai * bj) % p
        mod = self.modulus
        for k in range(2 * e - 2, e - 1, -1):
            c = conv[k]
            if c:
                conv[k] = 0
                for i, mi in enumerate(mod):
                    conv[k - e + i] = (conv[k - e + i] - c * mi) % p
        return self.encode(conv[:e])

    def pow_raw(self, a: int, k: int) -> int:
        if k < 0:
            a = self.inv_raw(a)
            k = -k
        acc = 1  # the raw encoding of one is 1 in every field
        base = a
        while k:
            if k & 1:
                acc = self.mul_raw(acc, base)
            base = self.mul_raw(base, base)
            k >>= 1
        return acc

    def inv_raw(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self.pow_raw(a, self.q - 2)

    def frobenius_raw(self, a: int) -> int:
        return self.pow_raw(a, self.p)

    # -- element construction -------------------------------------------------

    def element(self, coeffs) -> "FieldElement":
        coeffs = tuple(int(c) % self.p for c in coeffs)
        if len(coeffs) != self.e:
            raise ValidationError(
                f"expected {self.e} coordinates, got {len(coeffs)}")
        return FieldElement(self, coeffs)

    def from_raw(self, raw: int) -> "FieldElement":
        return FieldElement(self, self.decode(raw))

    def zero(self) -> "FieldElement":
        return self.from_raw(0)

    def one(self) -> "FieldElement":
        return self.from_raw(1)


@dataclass(frozen=True)
class FieldElement:
    """An element of F_q as its power-basis coordinate vector."""

    field: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def raw(self) -> int:
        return self.field.encode(self.coeffs)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement) or self.field != other.field:
            raise ValidationError("mixed fields")

    def __add__(self, other):
        self._check(other)
        f = self.field
        return f.from_raw(f.add_raw(self.raw, other.raw))

    def __sub__(self, other):
        self._check(other)
        f = self.field
        return f.from_raw(f.sub_raw(self.raw, other.raw))

    def __neg__(self):
        return self.field.from_raw(self.field.neg_raw(self.raw))

    def __mul__(self, other):
        self._check(other)
        f = self.field
        return f.from_raw(f.mul_raw(self.raw, other.raw))

    def __pow__(self, k: int):
        return self.field.from_raw(self.field.pow_raw(self.raw, k))

    def inv(self) -> "FieldElement":
        return self.field.from_raw(self.field.inv_raw(self.raw))

    def __str__(self) -> str:
        return format_element(self)


def make_field(p: int, e: int = 1, size_guard: int = DEFAULT_SIZE_GUARD) -> FieldSpec:
    """Build F_{p^e} with the canonical modulus.

    Repeated calls with equal inputs give identical specs.  The size guard
    keeps exhaustive self-tests fast; override deliberately for larger runs.
    """
    if not is_prime(p):
        raise ValidationError("not prime")
    if e < 1:
        raise ValidationError(f"extension degree must be >= 1, got {e}")
    if p ** e > size_guard:
        raise ValidationError("field too large")
    return FieldSpec(p=p, e=e, modulus=_canonical_modulus(p, e))


def arith(a: FieldElement, b: FieldElement | None, op: str, k: int | None = None) -> FieldElement:
    """Dispatch form of the field operations: op in {add, mul, inv, pow}."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "pow":
        if k is None:
            raise ValidationError("pow requires an exponent")
        return a ** k
    raise ValidationError(f"unknown field operation {op!r}")


def enumerate_elements(field: FieldSpec) -> list[FieldElement]:
    """All q elements, ordered lexicographically on coordinate vectors."""
    return [FieldElement(field, c) for c in product(range(field.p), repeat=field.e)]


def enumerate_raw(field: FieldSpec) -> list[int]:
    """Raw encodings in the same deterministic order as enumerate_elements."""
    return [field.encode(c) for c in product(range(field.p), repeat=field.e)]


def parse_element(field: FieldSpec, text: str) -> FieldElement:
    """Parse the comma-joined residue form, e.g. "2,1" for 2+t in F_9."""
    parts = text.strip().split(",")
    try:
        coeffs = [int(s) for s in parts]
    except ValueError as exc:
        raise ValidationError(f"bad field element {text!r}") from exc
    if len(coeffs) == 1 and field.e > 1:
        coeffs = coeffs + [0] * (field.e - 1)
    if len(coeffs) != field.e:
        raise ValidationError(
            f"element of F_{field.p}^{field.e} needs {field.e} residues")
    if any(c < 0 or c >= field.p for c in coeffs):
        raise ValidationError(f"residues must lie in [0, {field.p})")
    return FieldElement(field, tuple(coeffs))


def format_element(elem: FieldElement) -> str:
    return ",".join(str(c) for c in elem.coeffs)
