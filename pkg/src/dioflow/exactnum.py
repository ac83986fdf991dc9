"""Exact real arithmetic: rationals, real algebraic numbers, number field elements.

Rationals are plain :class:`fractions.Fraction`.  A real algebraic number is an
integer polynomial together with an isolating interval; arithmetic happens in
a :class:`NumberField` generated by one such number, where elements are
polynomials in the generator reduced modulo its minimal polynomial.  Order
decisions refine interval enclosures of the generator until the sign of the
element is certain.  Zero is decided algebraically (the zero polynomial),
never numerically.
"""

from __future__ import annotations

import math
import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

__all__ = [
    "PrecisionExhausted",
    "IncompatibleFields",
    "DivideByZero",
    "Interval",
    "AlgebraicReal",
    "NumberField",
    "FieldElement",
    "ExactReal",
    "DEFAULT_PRECISION_CAP",
    "to_exact",
    "compare",
    "sign",
    "field_arith",
    "refine",
    "enclosure",
    "parse_real",
    "format_real",
    "fixed_point",
    "format_sig",
    "nth_root_interval",
]

DEFAULT_PRECISION_CAP = 4096


class PrecisionExhausted(ArithmeticError):
    """Interval refinement hit the precision cap without separating values."""


class IncompatibleFields(ValueError):
    pass


class DivideByZero(ZeroDivisionError):
    pass


# ---------------------------------------------------------------------------
# intervals with rational endpoints


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, other):
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_as_interval(other))

    def __rsub__(self, other):
        return _as_interval(other) - self

    def __mul__(self, other):
        other = _as_interval(other)
        c = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(c), max(c))

    __rmul__ = __mul__

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def sign(self) -> int | None:
        """Certified sign, or None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    def __float__(self):
        return float(self.mid)


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficients ascending: c0 + c1 x + ...)


def _neg_log2(x: Fraction) -> int:
    """Roughly -log2(x) for positive rationals of any size."""
    return x.denominator.bit_length() - x.numerator.bit_length()


def _trim(c: list) -> list:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _primitive_int_poly(coeffs: Sequence) -> tuple[int, ...]:
    fr = [Fraction(c) for c in coeffs]
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = _trim([int(c * den) for c in fr])
    if not ints:
        raise ValueError("zero polynomial")
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def _eval_sign_at(coeffs: Sequence[int], x: Fraction) -> int:
    """Exact sign of an integer polynomial at a rational point."""
    a, b = x.numerator, x.denominator
    # b^n * P(a/b) = sum c_i a^i b^(n-i), by Horner
    acc = 0
    bp = 1
    for c in reversed(coeffs):
        acc = acc * a + c * bp
        bp *= b
    return (acc > 0) - (acc < 0)


def _poly_derivative(c: Sequence) -> list:
    return [i * c[i] for i in range(1, len(c))]


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    num = [Fraction(x) for x in num]
    den = _trim([Fraction(x) for x in den])
    if not den:
        raise DivideByZero("polynomial division by zero")
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    r = list(num)
    while True:
        r = _trim(r)
        if len(r) < len(den):
            break
        shift = len(r) - len(den)
        f = r[-1] / den[-1]
        q[shift] = f
        for i, c in enumerate(den):
            r[i + shift] -= f * c
    return _trim(q), r


def sturm_sequence(coeffs: Sequence[int]) -> list[list[Fraction]]:
    p0 = _trim([Fraction(c) for c in coeffs])
    p1 = _trim(_poly_derivative(p0))
    seq = [p0, p1]
    while seq[-1] and len(seq[-1]) > 1:
        _, r = _poly_divmod(seq[-2], seq[-1])
        r = [-x for x in _trim(r)]
        if not r:
            break
        seq.append(r)
    return [s for s in seq if s]


def _sign_changes(seq, x) -> int:
    signs = []
    for p in seq:
        v = sum(c * x**i for i, c in enumerate(p)) if x is not None else None
        s = (v > 0) - (v < 0)
        if s:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(coeffs: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    seq = sturm_sequence(coeffs)
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def root_bound(coeffs: Sequence[int]) -> Fraction:
    """Cauchy bound: every complex root has modulus below this value."""
    lead = abs(coeffs[-1])
    return 1 + Fraction(max(abs(c) for c in coeffs[:-1]), lead) if len(coeffs) > 1 else Fraction(1)


def isolate_real_roots(coeffs: Sequence[int]) -> list[Interval]:
    """Isolating intervals (lo, hi] for the real roots of a squarefree polynomial.

    Endpoints are dyadic and never roots themselves unless the root is rational
    and the interval has collapsed onto it.
    """
    coeffs = _primitive_int_poly(coeffs)
    seq = sturm_sequence(coeffs)
    B = root_bound(coeffs)
    B = Fraction(2 ** math.ceil(math.log2(B)) if B > 1 else 1)
    out: list[Interval] = []
    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = _sign_changes(seq, lo) - _sign_changes(seq, hi)
        if n == 0:
            continue
        if n == 1:
            out.append(Interval(lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort(key=lambda iv: iv.lo)
    # shrink away from endpoints that are exact roots
    fixed = []
    for iv in out:
        if _eval_sign_at(coeffs, iv.hi) == 0:
            fixed.append(Interval(iv.hi, iv.hi))
        else:
            fixed.append(iv)
    return fixed


# ---------------------------------------------------------------------------
# real algebraic numbers


class AlgebraicReal:
    """A real root of an irreducible integer polynomial, located by an interval.

    ``coeffs`` are ascending (constant term first).  ``lo`` and ``hi`` must
    enclose exactly one real root.
    """

    def __init__(self, coeffs: Sequence, lo, hi, *, check_irreducible: bool = True):
        self.minpoly = _primitive_int_poly(coeffs)
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("isolating interval is empty")
        if self.degree < 1:
            raise ValueError("constant polynomial has no roots")
        if check_irreducible and self.degree > 1 and not is_irreducible(self.minpoly):
            raise ValueError(f"polynomial {self.minpoly} is reducible over Q")
        if self.degree == 1:
            r = Fraction(-self.minpoly[0], self.minpoly[1])
            if not lo <= r <= hi:
                raise ValueError("interval does not contain the root")
            lo = hi = r
        else:
            # count roots in the closed interval
            n = count_roots(self.minpoly, lo, hi) + (1 if _eval_sign_at(self.minpoly, lo) == 0 else 0)
            if n != 1:
                raise ValueError(f"interval [{lo}, {hi}] contains {n} roots, expected 1")
            if _eval_sign_at(self.minpoly, lo) == 0 or _eval_sign_at(self.minpoly, hi) == 0:
                raise ValueError("irrational root cannot sit on a rational endpoint")
        self.isolating_interval = Interval(lo, hi)
        self._cached = Interval(lo, hi)
        self._lock = threading.Lock()

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def cached_interval(self) -> Interval:
        return self._cached

    def is_rational(self) -> bool:
        return self.degree == 1

    def refine(self, width) -> Interval:
        """Shrink the cached enclosure to width at most ``width`` and return it."""
        width = Fraction(width)
        if width <= 0:
            raise ValueError("width must be positive")
        with self._lock:
            iv = self._cached
            if iv.width <= width:
                return iv
            lo, hi = iv.lo, iv.hi
            s_lo = _eval_sign_at(self.minpoly, lo)
            target = _neg_log2(width) + 2
            # bisect until Newton's quadratic convergence is safe
            lo, hi = self._bisect(lo, hi, s_lo, Fraction(1, 2 ** min(target, 64)))
            if hi - lo > width:
                lo, hi = self._newton(lo, hi, s_lo, target)
            if hi - lo > width:
                lo, hi = self._bisect(lo, hi, s_lo, width)
            self._cached = Interval(lo, hi)
            return self._cached

    def _bisect(self, lo, hi, s_lo, width):
        k = max(1, _neg_log2(width) + 2)
        while hi - lo > width:
            mid = (lo + hi) / 2
            if mid.denominator > 2**k:
                m = Fraction(math.floor(mid * 2**k), 2**k)
                mid = m if lo < m < hi else mid
            s = _eval_sign_at(self.minpoly, mid)
            if s == 0:
                return mid, mid
            if s == s_lo:
                lo = mid
            else:
                hi = mid
        return lo, hi

    def _newton(self, lo, hi, s_lo, target_bits):
        poly = self.minpoly
        dpoly = _poly_derivative(poly)
        x = (lo + hi) / 2
        bits = max(1, _neg_log2(hi - lo))
        while bits < target_bits:
            bits = min(2 * bits, target_bits + 4)
            px = sum(c * x**i for i, c in enumerate(poly))
            dx = sum(c * x**i for i, c in enumerate(dpoly))
            if dx == 0:
                break
            x = x - px / dx
            scale = 1 << bits
            x = Fraction(math.floor(x * scale), scale)
            h = Fraction(4, scale)
            a, b = x - h, x + h
            if a < lo or b > hi:
                break
            sa = _eval_sign_at(poly, a)
            sb = _eval_sign_at(poly, b)
            if sa == 0:
                return a, a
            if sb == 0:
                return b, b
            if sa != s_lo or sb == s_lo:
                break
            lo, hi = a, b
        return lo, hi

    def __float__(self):
        return float(self.refine(Fraction(1, 2**60)).mid)

    def __repr__(self):
        iv = self.isolating_interval
        return f"alg(coeffs={list(self.minpoly)}, lo={iv.lo}, hi={iv.hi})"

    def same_root(self, other: "AlgebraicReal") -> bool:
        if self.minpoly != other.minpoly:
            return False
        a, b = self.isolating_interval, other.isolating_interval
        if a.hi < b.lo or b.hi < a.lo:
            return False
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        n = count_roots(self.minpoly, lo, hi) + (1 if _eval_sign_at(self.minpoly, lo) == 0 else 0)
        return n == 1


def is_irreducible(coeffs: Sequence[int]) -> bool:
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed([int(c) for c in coeffs])), x, domain="QQ")
    return bool(poly.is_irreducible)


# ---------------------------------------------------------------------------
# number fields


class NumberField:
    """Q(beta) for a real algebraic beta; elements are polynomials in beta."""

    def __init__(self, generator: AlgebraicReal, precision_cap: int = DEFAULT_PRECISION_CAP):
        self.generator = generator
        self.precision_cap = precision_cap
        mp = [Fraction(c) for c in generator.minpoly]
        lead = mp[-1]
        self._monic = [c / lead for c in mp]

    @property
    def degree(self) -> int:
        return self.generator.degree

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, NumberField) and self.generator.same_root(other.generator)

    def __hash__(self):
        return hash(self.generator.minpoly)

    def __repr__(self):
        return f"NumberField({self.generator!r})"

    def element(self, coeffs: Sequence) -> "FieldElement":
        return FieldElement(self, self.reduce(coeffs))

    @property
    def gen(self) -> "FieldElement":
        return self.element([0, 1])

    def one(self) -> "FieldElement":
        return self.element([1])

    def reduce(self, coeffs: Sequence) -> tuple[Fraction, ...]:
        c = [Fraction(x) for x in coeffs]
        n = self.degree
        mono = self._monic
        for k in range(len(c) - 1, n - 1, -1):
            f = c[k]
            if f:
                for i in range(n + 1):
                    c[k - n + i] -= f * mono[i]
        c = c[:n] + [Fraction(0)] * max(0, n - len(c))
        return tuple(c)

    def enclose(self, coeffs: Sequence[Fraction], width: Fraction) -> Interval:
        """Interval containing the element, driven by refining the generator."""
        if all(c == 0 for c in coeffs):
            return Interval.point(0)
        nonzero = [i for i, c in enumerate(coeffs) if c]
        if nonzero == [0]:
            return Interval.point(coeffs[0])
        bits = max(8, _neg_log2(width) + 4)
        while True:
            if bits > self.precision_cap:
                raise PrecisionExhausted(f"could not reach width {float(width):.3g} within {self.precision_cap} bits")
            g = self.generator.refine(Fraction(1, 2**bits))
            acc = Interval.point(0)
            for c in reversed(coeffs):
                acc = acc * g + c
            if acc.width <= width:
                return acc
            bits += 16 + bits // 2


@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    coeffs: tuple

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise IncompatibleFields("operands live in different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        if isinstance(other, AlgebraicReal):
            if other.is_rational():
                return self.field.element([other.isolating_interval.lo])
            if NumberField(other) == self.field:
                return self.field.gen
            raise IncompatibleFields("algebraic number is not the field generator")
        return NotImplemented

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        prod = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return self.field.element(prod)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivideByZero("division by the zero field element")
        # extended Euclid in Q[x]: s*a + t*m = 1
        m = [Fraction(c) for c in self.field.generator.minpoly]
        a = _trim(list(self.coeffs))
        r0, r1 = m, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, _trim(r)
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
            if not r1:
                raise DivideByZero("element is a zero divisor (reducible minpoly?)")
        c = _trim(r1)[0]
        return self.field.element([x / c for x in s1])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def enclosure(self, width) -> Interval:
        return self.field.enclose(self.coeffs, Fraction(width))

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            c = self.coeffs[0]
            return (c > 0) - (c < 0)
        width = Fraction(1, 2**8)
        while True:
            iv = self.enclosure(width)
            s = iv.sign()
            if s is not None and s != 0:
                return s
            width /= 2**32

    def __float__(self):
        return float(self.enclosure(Fraction(1, 2**60)).mid)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" + ("" if i == 0 else f"*b^{i}"))
        return "FieldElement(" + (" + ".join(terms) or "0") + ")"


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


ExactReal = Union[Fraction, FieldElement]


def to_exact(x) -> ExactReal:
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, AlgebraicReal):
        if x.is_rational():
            return x.isolating_interval.lo
        return NumberField(x).gen
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a decimal string")
    if isinstance(x, str):
        return to_exact(parse_real(x))
    return Fraction(x)


def sign(x: ExactReal) -> int:
    if isinstance(x, FieldElement):
        return x.sign()
    x = Fraction(x)
    return (x > 0) - (x < 0)


def compare(x, y) -> int:
    """-1, 0, 1 for x < y, x == y, x > y; equality is certified algebraically."""
    x, y = to_exact(x), to_exact(y)
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return (x > y) - (x < y)
    if isinstance(x, FieldElement):
        return sign(x - y)
    return -sign(y - x)


def field_arith(a, b, op: str) -> ExactReal:
    a, b = to_exact(a), to_exact(b)
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        if sign(b) == 0:
            raise DivideByZero("division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def refine(x, width) -> Interval:
    """Enclosure of ``x`` of width at most ``width``."""
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    if isinstance(x, AlgebraicReal):
        return x.refine(width)
    x = to_exact(x)
    if isinstance(x, FieldElement):
        return x.enclosure(width)
    return Interval.point(x)


enclosure = refine


# ---------------------------------------------------------------------------
# fixed-point views, roots and formatting


def fixed_point(x: ExactReal, bits: int) -> tuple[int, int]:
    """(N, err) with |x - N/2^bits| <= err/2^bits; err is 0 for dyadic rationals."""
    x = to_exact(x)
    scale = 1 << bits
    if isinstance(x, Fraction):
        num = x.numerator * scale
        n, r = divmod(num, x.denominator)
        if 2 * r >= x.denominator:
            n += 1
        return n, (0 if r == 0 else 1)
    iv = x.enclosure(Fraction(1, 1 << (bits + 2)))
    n = math.floor(iv.mid * scale)
    return n, 1


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def nth_root_interval(q, k: int, bits: int = 96) -> Interval:
    """Enclosure of q**(1/k) for rational q >= 0 with width <= 2**-bits."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    scale = 1 << bits
    # floor((q * scale^k)^(1/k)) using integer arithmetic
    num = q.numerator * scale**k // q.denominator
    r = iroot(num, k)
    lo = Fraction(r, scale)
    hi = Fraction(r + 1, scale)
    return Interval(lo, hi)


def format_sig(iv: Interval | Fraction, digits: int = 18) -> str:
    """Decimal string with ``digits`` significant digits taken from an enclosure."""
    from decimal import Decimal, localcontext

    x = iv.mid if isinstance(iv, Interval) else Fraction(iv)
    if x == 0:
        return "0"
    with localcontext() as ctx:
        ctx.prec = digits
        d = Decimal(x.numerator) / Decimal(x.denominator)
    mant, exp = format(d, f".{digits - 1}e").split("e")
    return f"{mant}e{int(exp):+03d}"


_ALG_RE = re.compile(
    r"^alg\(\s*coeffs\s*=\s*\[([^\]]*)\]\s*,\s*lo\s*=\s*([^,]+?)\s*,\s*hi\s*=\s*([^)]+?)\s*\)$"
)


def parse_real(text: str):
    """Parse ``0.25``, ``-3/7``, ``5`` or ``alg(coeffs=[c0,...], lo=a, hi=b)``."""
    text = text.strip()
    m = _ALG_RE.match(text)
    if m:
        coeffs = [int(c) for c in m.group(1).split(",") if c.strip()]
        lo = Fraction(m.group(2).strip())
        hi = Fraction(m.group(3).strip())
        return AlgebraicReal(coeffs, lo, hi)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse real number {text!r}") from exc


def format_real(x) -> str:
    """Inverse of :func:`parse_real` (up to normalisation)."""
    if isinstance(x, AlgebraicReal):
        iv = x.isolating_interval
        return f"alg(coeffs=[{','.join(str(c) for c in x.minpoly)}], lo={iv.lo}, hi={iv.hi})"
    if isinstance(x, FieldElement):
        if x.is_rational():
            return format_real(x.coeffs[0])
        if list(x.coeffs[:2]) == [0, 1] and all(c == 0 for c in x.coeffs[2:]):
            return format_real(x.field.generator)
        raise ValueError("only rationals and field generators have a textual form")
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    # terminating decimals print as decimals
    d = x.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    if d == 1 and x.denominator <= 10**30:
        k = 0
        while (x * 10**k).denominator != 1:
            k += 1
        n = x * 10**k
        s = str(abs(n.numerator)).rjust(k + 1, "0")
        out = s[:-k] + "." + s[-k:]
        return ("-" if x < 0 else "") + out
    return f"{x.numerator}/{x.denominator}"
