"""Exact univariate arithmetic in q.

QPoly is a dense integer-coefficient Laurent polynomial in q: a tuple of
coefficients plus the exponent of the lowest stored power (``low``), so
negative powers of q are first-class.  QRat is a fully reduced ratio of
two QPolys in a canonical form, which makes equality a structural
comparison and ``is_polynomial`` a denominator check.

Canonical QRat form: the denominator is a genuine polynomial (low = 0,
nonzero constant term) with positive leading coefficient; numerator and
denominator share no polynomial factor and no integer content.

Also here: the q-Pochhammer and q-binomial builders.  ``(q)_k`` for
negative k is deliberately not a value (it would contain the factor
1 - q^0 = 0); use ``qpoch_ratio`` for the telescoped quotients that do
make sense.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd, lcm as _int_lcm

from .errors import InternalError, UsageError


class QPoly:
    """Integer-coefficient Laurent polynomial in q."""

    __slots__ = ("low", "coeffs")

    def __init__(self, coeffs=(), low: int = 0):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        if start == len(coeffs):
            self.low = 0
            self.coeffs = ()
        else:
            self.low = low + start
            self.coeffs = tuple(coeffs[start:])

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "QPoly":
        return cls()

    @classmethod
    def one(cls) -> "QPoly":
        return cls((1,))

    @classmethod
    def const(cls, c: int) -> "QPoly":
        return cls((c,))

    @classmethod
    def term(cls, c: int, e: int) -> "QPoly":
        return cls((c,), e)

    @classmethod
    def q_pow(cls, e: int) -> "QPoly":
        return cls((1,), e)

    @classmethod
    def from_pairs(cls, pairs) -> "QPoly":
        d: dict[int, int] = {}
        for e, c in dict(pairs).items():
            if c:
                d[e] = d.get(e, 0) + c
        if not d:
            return cls.zero()
        lo, hi = min(d), max(d)
        return cls([d.get(e, 0) for e in range(lo, hi + 1)], lo)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.low == 0 and self.coeffs == (1,)

    def degree(self) -> int:
        if self.is_zero():
            raise UsageError("zero polynomial has no degree")
        return self.low + len(self.coeffs) - 1

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = _int_gcd(g, abs(c))
        return g

    def coeff_of(self, e: int) -> int:
        i = e - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __eq__(self, other) -> bool:
        return (isinstance(other, QPoly)
                and self.low == other.low and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.low, self.coeffs))

    def __repr__(self) -> str:
        return f"QPoly({self.render()!r})"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "QPoly") -> "QPoly":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        lo = min(self.low, other.low)
        hi = max(self.low + len(self.coeffs), other.low + len(other.coeffs))
        out = [0] * (hi - lo)
        for i, c in enumerate(self.coeffs):
            out[self.low - lo + i] += c
        for i, c in enumerate(other.coeffs):
            out[other.low - lo + i] += c
        return QPoly(out, lo)

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __neg__(self) -> "QPoly":
        return QPoly(tuple(-c for c in self.coeffs), self.low)

    def __mul__(self, other: "QPoly") -> "QPoly":
        if self.is_zero() or other.is_zero():
            return QPoly.zero()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(out, self.low + other.low)

    def scale(self, c: int) -> "QPoly":
        if c == 0:
            return QPoly.zero()
        return QPoly(tuple(c * v for v in self.coeffs), self.low)

    def shifted(self, e: int) -> "QPoly":
        """Multiply by q^e."""
        if self.is_zero():
            return self
        return QPoly(self.coeffs, self.low + e)

    def eval_at_one(self) -> int:
        return sum(self.coeffs)

    # -- rendering / serialization --------------------------------------------

    def render(self) -> str:
        """Canonical ascending-power text form, e.g. ``1 + 2*q + q^3``."""
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.low + i
            if e == 0:
                body = str(abs(c))
            else:
                qs = "q" if e == 1 else f"q^{e}"
                body = qs if abs(c) == 1 else f"{abs(c)}*{qs}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def to_json(self) -> dict:
        return {"q_low": self.low, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj: dict) -> "QPoly":
        return cls(obj["coeffs"], obj["q_low"])


# -- exact division and gcd on coefficient lists ------------------------------


def _frac_divmod(num: list[Fraction], den: list[Fraction]):
    """Long division of coefficient lists (index = power, no low offsets)."""
    num = num[:]
    dd = len(den) - 1
    lead = den[-1]
    quot = [Fraction(0)] * max(0, len(num) - dd)
    while len(num) - 1 >= dd:
        if num[-1] == 0:
            num.pop()
            continue
        f = num[-1] / lead
        shift = len(num) - 1 - dd
        quot[shift] = f
        for i, c in enumerate(den):
            num[shift + i] -= f * c
        num.pop()
    while num and num[-1] == 0:
        num.pop()
    return quot, num


def div_exact(a: QPoly, b: QPoly) -> QPoly:
    """Exact quotient a / b; raises InternalError if the division is inexact."""
    if b.is_zero():
        raise UsageError("division by the zero polynomial")
    if a.is_zero():
        return QPoly.zero()
    quot, rem = _frac_divmod([Fraction(c) for c in a.coeffs],
                             [Fraction(c) for c in b.coeffs])
    if rem or any(f.denominator != 1 for f in quot):
        raise InternalError("inexact polynomial division")
    return QPoly([int(f) for f in quot], a.low - b.low)


def _poly_gcd(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    """GCD of two coefficient tuples, returned primitive with positive lead."""
    a = [Fraction(c) for c in u]
    b = [Fraction(c) for c in v]
    while b and any(b):
        _, r = _frac_divmod(a, b)
        a, b = b, r
    if not a:
        return ()
    # scale to a primitive integer polynomial with positive leading coefficient
    denoms = _int_lcm(*(f.denominator for f in a))
    ints = [int(f * denoms) for f in a]
    g = 0
    for c in ints:
        g = _int_gcd(g, abs(c))
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(ints)


class QRat:
    """Reduced ratio of two QPolys; see the module docstring for the form."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if isinstance(num, int):
            num = QPoly.const(num)
        if den is None:
            den = QPoly.one()
        elif isinstance(den, int):
            den = QPoly.const(den)
        if den.is_zero():
            raise UsageError("zero denominator")
        if num.is_zero():
            self.num = QPoly.zero()
            self.den = QPoly.one()
            return
        # move the denominator's q-power into the numerator
        num = num.shifted(-den.low)
        den = QPoly(den.coeffs, 0)
        g = _poly_gcd(num.coeffs, den.coeffs)
        if len(g) > 1:
            gp = QPoly(g)
            num = div_exact(num, gp)
            den = div_exact(den, gp)
        c = _int_gcd(num.content(), den.content())
        sign = -1 if den.coeffs[-1] < 0 else 1
        if c * sign != 1:
            num = QPoly([v // (c * sign) for v in num.coeffs], num.low)
            den = QPoly([v // (c * sign) for v in den.coeffs], den.low)
        self.num = num
        self.den = den

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls) -> "QRat":
        return cls(QPoly.zero())

    @classmethod
    def one(cls) -> "QRat":
        return cls(QPoly.one())

    @classmethod
    def from_poly(cls, p: QPoly) -> "QRat":
        return cls(p)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        """True when the reduced denominator is 1 (numerator may be Laurent)."""
        return self.den.is_one()

    def as_poly(self) -> QPoly:
        if not self.is_polynomial():
            raise UsageError("not a polynomial: " + self.render())
        return self.num

    def __eq__(self, other) -> bool:
        if isinstance(other, QPoly):
            other = QRat(other)
        return (isinstance(other, QRat)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"QRat({self.render()!r})"

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "QRat":
        if isinstance(x, QRat):
            return x
        if isinstance(x, QPoly):
            return QRat(x)
        if isinstance(x, int):
            return QRat(QPoly.const(x))
        raise TypeError(f"cannot coerce {type(x)!r} to QRat")

    def __add__(self, other) -> "QRat":
        o = self._coerce(other)
        return QRat(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "QRat":
        o = self._coerce(other)
        return QRat(self.num * o.den - o.num * self.den, self.den * o.den)

    def __neg__(self) -> "QRat":
        return QRat(-self.num, self.den)

    def __mul__(self, other) -> "QRat":
        o = self._coerce(other)
        return QRat(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "QRat":
        o = self._coerce(other)
        if o.is_zero():
            raise UsageError("division by zero")
        return QRat(self.num * o.den, self.den * o.num)

    def inverse(self) -> "QRat":
        if self.is_zero():
            raise UsageError("division by zero")
        return QRat(self.den, self.num)

    # -- evaluation / rendering -----------------------------------------------

    def eval_at_one(self) -> Fraction:
        dv = self.den.eval_at_one()
        if dv == 0:
            raise UsageError("pole at q=1; reduce or use the q=1 formulas")
        return Fraction(self.num.eval_at_one(), dv)

    def render(self) -> str:
        if self.is_polynomial():
            return self.num.render()
        return f"({self.num.render()}) / ({self.den.render()})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}


def eval_at_one(r) -> Fraction:
    """Exact value at q = 1 of a QPoly or a reduced QRat (error on a pole)."""
    if isinstance(r, QPoly):
        return Fraction(r.eval_at_one())
    return QRat._coerce(r).eval_at_one()


# -- q-Pochhammer and q-binomial builders -------------------------------------


def qpoch_at(e: int, m: int) -> QPoly:
    """The product (1 - q^e)(1 - q^(e+1)) ... (1 - q^(e+m-1)); exact Laurent."""
    if m < 0:
        raise UsageError("qpoch_at needs m >= 0")
    out = QPoly.one()
    for l in range(m):
        out = out * (QPoly.one() - QPoly.q_pow(e + l))
    return out


def qpoch(k: int) -> QPoly:
    """(q)_k = (1-q)(1-q^2)...(1-q^k) for k >= 0.

    Negative k is rejected: the naive extension contains the factor
    1 - q^0 = 0, so only ratios are meaningful -- see qpoch_ratio.
    """
    if k < 0:
        raise UsageError("(q)_k undefined for k < 0; use qpoch_ratio")
    return qpoch_at(1, k)


def qpoch_ratio(j: int, k: int) -> QRat:
    """(q)_j / (q)_k as the telescoped product over exponents k+1 .. j.

    Valid whenever the telescoped product avoids the exponent 0 (which
    would be a zero factor or a pole); otherwise raises UsageError.
    """
    if j == k:
        return QRat.one()
    lo, hi = (k, j) if j > k else (j, k)
    if lo < 0 <= hi:
        raise UsageError(f"(q)_{j}/(q)_{k} hits the zero factor 1 - q^0")
    prod = QPoly.one()
    for i in range(lo + 1, hi + 1):
        prod = prod * (QPoly.one() - QPoly.q_pow(i))
    if j > k:
        return QRat(prod)
    return QRat(QPoly.one(), prod)


def qbinom(m: int, k: int) -> QPoly:
    """Gaussian binomial coefficient (q)_m / ((q)_k (q)_(m-k)); 0 out of range."""
    if m < 0:
        raise UsageError("qbinom needs m >= 0")
    if k < 0 or k > m:
        return QPoly.zero()
    num = QPoly.one()
    den = QPoly.one()
    for i in range(1, m + 1):
        num = num * (QPoly.one() - QPoly.q_pow(i))
    for i in range(1, k + 1):
        den = den * (QPoly.one() - QPoly.q_pow(i))
    for i in range(1, m - k + 1):
        den = den * (QPoly.one() - QPoly.q_pow(i))
    return div_exact(num, den)
