"""Exact sparse Laurent-polynomial arithmetic in q and x_0..x_n.

A polynomial is stored as a dict mapping exponent tuples to nonzero
arbitrary-precision integer coefficients.  The key layout is

    (e_q, e_x0, e_x1, ..., e_xn)  ->  coefficient,

so a polynomial in nx = n+1 x-variables uses keys of length nx+1.
Exponents may be negative; the zero polynomial has an empty term dict.

The number of x-variables is fixed per polynomial.  Operations on
mismatched arities raise UsageError instead of silently embedding one
ring into the other; this catches index bugs early.

All operations are pure: arguments are never mutated and results are
normalized (no stored zero coefficients), so ``==`` is plain structural
equality and values can be shared freely between threads.
"""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple

from .errors import UsageError


class Monomial(NamedTuple):
    """A single term ``coeff * q**q_exp * prod_i x_i**xs[i]``."""

    coeff: int
    q_exp: int
    xs: tuple[int, ...]

    @property
    def nx(self) -> int:
        return len(self.xs)

    def key(self) -> tuple[int, ...]:
        return (self.q_exp, *self.xs)


def mono(nx: int, coeff: int = 1, q: int = 0,
         xpows: Mapping[int, int] | None = None) -> Monomial:
    """Build a Monomial from sparse x-powers ``{index: exponent}``."""
    xs = [0] * nx
    for i, e in (xpows or {}).items():
        if not 0 <= i < nx:
            raise UsageError(f"variable index {i} out of range for nx={nx}")
        xs[i] += e
    return Monomial(coeff, q, tuple(xs))


def ratio_mono(nx: int, top: int, bot: int, q: int = 0, coeff: int = 1) -> Monomial:
    """``coeff * q**q * x_top / x_bot``."""
    if top == bot:
        raise UsageError("ratio monomial needs distinct variables")
    return mono(nx, coeff, q, {top: 1, bot: -1})


class LaurentPoly:
    """Sparse multivariate Laurent polynomial; see the module docstring."""

    __slots__ = ("nx", "terms")

    def __init__(self, nx: int, terms: Mapping[tuple[int, ...], int] | None = None,
                 _normalized: bool = False):
        self.nx = nx
        if terms is None:
            self.terms = {}
        elif _normalized:
            self.terms = dict(terms)
        else:
            clean = {}
            for k, c in terms.items():
                if len(k) != nx + 1:
                    raise UsageError(f"exponent key {k} does not match nx={nx}")
                if c != 0:
                    clean[tuple(k)] = c
            self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nx: int) -> "LaurentPoly":
        return cls(nx, None)

    @classmethod
    def const(cls, nx: int, c: int) -> "LaurentPoly":
        if c == 0:
            return cls.zero(nx)
        return cls(nx, {(0,) * (nx + 1): c}, _normalized=True)

    @classmethod
    def one(cls, nx: int) -> "LaurentPoly":
        return cls.const(nx, 1)

    @classmethod
    def from_monomial(cls, m: Monomial) -> "LaurentPoly":
        if m.coeff == 0:
            return cls.zero(m.nx)
        return cls(m.nx, {m.key(): m.coeff}, _normalized=True)

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def num_terms(self) -> int:
        return len(self.terms)

    def coeff_of(self, key: tuple[int, ...]) -> int:
        return self.terms.get(tuple(key), 0)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LaurentPoly)
                and self.nx == other.nx and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nx, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"LaurentPoly(nx={self.nx}, {render(self)!r})"

    # -- operator sugar ----------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return lp_add(self, other)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return lp_add(self, lp_neg(other))

    def __neg__(self) -> "LaurentPoly":
        return lp_neg(self)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return lp_mul(self, other)


def _check_arity(p: LaurentPoly, r: LaurentPoly) -> None:
    if p.nx != r.nx:
        raise UsageError(f"arity mismatch: {p.nx} vs {r.nx}")


def lp_add(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    """Term-wise sum; zero coefficients are dropped."""
    _check_arity(p, r)
    out = dict(p.terms)
    for k, c in r.terms.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return LaurentPoly(p.nx, out, _normalized=True)


def lp_neg(p: LaurentPoly) -> LaurentPoly:
    return LaurentPoly(p.nx, {k: -c for k, c in p.terms.items()}, _normalized=True)


def lp_scale(p: LaurentPoly, c: int) -> LaurentPoly:
    if c == 0:
        return LaurentPoly.zero(p.nx)
    return LaurentPoly(p.nx, {k: c * v for k, v in p.terms.items()}, _normalized=True)


def lp_mul(p: LaurentPoly, r: LaurentPoly) -> LaurentPoly:
    """Distributive product; exponent vectors add."""
    _check_arity(p, r)
    big, small = (p.terms, r.terms) if len(p.terms) >= len(r.terms) else (r.terms, p.terms)
    out: dict[tuple[int, ...], int] = {}
    for ks, cs in small.items():
        for kb, cb in big.items():
            key = tuple(a + b for a, b in zip(ks, kb))
            s = out.get(key, 0) + cs * cb
            if s:
                out[key] = s
            else:
                del out[key]
    return LaurentPoly(p.nx, out, _normalized=True)


def lp_mul_monomial(p: LaurentPoly, m: Monomial) -> LaurentPoly:
    """Multiply by a single term (an exponent shift plus a scale)."""
    if m.nx != p.nx:
        raise UsageError(f"arity mismatch: {p.nx} vs {m.nx}")
    if m.coeff == 0:
        return LaurentPoly.zero(p.nx)
    delta = m.key()
    out = {tuple(a + b for a, b in zip(k, delta)): m.coeff * c
           for k, c in p.terms.items()}
    return LaurentPoly(p.nx, out, _normalized=True)


def _ipow(base: int, k: int) -> int:
    # exact integer power; negative k only for units
    if k >= 0:
        return base ** k
    if base == 1:
        return 1
    if base == -1:
        return -1 if k % 2 else 1
    raise UsageError(f"cannot raise non-unit coefficient {base} to power {k}")


def lp_subst_monomial(p: LaurentPoly, var: int, m: Monomial) -> LaurentPoly:
    """Replace x_var by the monomial m everywhere in p (exact, no truncation)."""
    if not 0 <= var < p.nx:
        raise UsageError(f"variable index {var} out of range for nx={p.nx}")
    if m.nx != p.nx:
        raise UsageError(f"arity mismatch: {p.nx} vs {m.nx}")
    out: dict[tuple[int, ...], int] = {}
    pos = 1 + var
    mk = m.key()
    for k, c in p.terms.items():
        t = k[pos]
        if t == 0:
            key = k
            cc = c
        else:
            base = list(k)
            base[pos] = 0
            key = tuple(b + t * d for b, d in zip(base, mk))
            cc = c * _ipow(m.coeff, t)
        s = out.get(key, 0) + cc
        if s:
            out[key] = s
        else:
            del out[key]
    return LaurentPoly(p.nx, out, _normalized=True)


def lp_subst_many(p: LaurentPoly, repl: Mapping[int, Monomial]) -> LaurentPoly:
    """Simultaneously replace several variables by monomials."""
    for var, m in repl.items():
        if not 0 <= var < p.nx:
            raise UsageError(f"variable index {var} out of range for nx={p.nx}")
        if m.nx != p.nx:
            raise UsageError(f"arity mismatch: {p.nx} vs {m.nx}")
    out: dict[tuple[int, ...], int] = {}
    items = tuple((1 + var, m.key(), m.coeff) for var, m in repl.items())
    for k, c in p.terms.items():
        key = list(k)
        cc = c
        for pos, mk, mc in items:
            t = k[pos]
            if t == 0:
                continue
            key[pos] -= t
            for i, d in enumerate(mk):
                key[i] += t * d
            cc *= _ipow(mc, t)
        key_t = tuple(key)
        s = out.get(key_t, 0) + cc
        if s:
            out[key_t] = s
        else:
            del out[key_t]
    return LaurentPoly(p.nx, out, _normalized=True)


def ct_in_vars(p: LaurentPoly, vars: Iterable[int]) -> LaurentPoly:
    """Keep the terms whose exponent is zero in every listed x-variable."""
    pos = []
    for v in vars:
        if not 0 <= v < p.nx:
            raise UsageError(f"variable index {v} out of range for nx={p.nx}")
        pos.append(1 + v)
    out = {k: c for k, c in p.terms.items() if all(k[i] == 0 for i in pos)}
    return LaurentPoly(p.nx, out, _normalized=True)


def pochhammer_monomial(z: Monomial, k: int) -> LaurentPoly:
    """The product (1 - z)(1 - z q) ... (1 - z q^(k-1)); k = 0 gives 1."""
    if k < 0:
        raise UsageError("pochhammer_monomial needs k >= 0")
    nx = z.nx
    out = LaurentPoly.one(nx)
    for i in range(k):
        factor = lp_add(LaurentPoly.one(nx),
                        LaurentPoly.from_monomial(Monomial(-z.coeff, z.q_exp + i, z.xs)))
        out = lp_mul(out, factor)
    return out


def max_exp(p: LaurentPoly, var: int) -> int:
    """Largest exponent of x_var appearing in p (error on the zero polynomial)."""
    if p.is_zero():
        raise UsageError("zero polynomial has no degree")
    pos = 1 + var
    return max(k[pos] for k in p.terms)


def min_exp(p: LaurentPoly, var: int) -> int:
    if p.is_zero():
        raise UsageError("zero polynomial has no degree")
    pos = 1 + var
    return min(k[pos] for k in p.terms)


def leading_part(p: LaurentPoly, var: int) -> LaurentPoly:
    """Coefficient of the highest power of x_var, as a polynomial with that
    variable's exponent zeroed out."""
    top = max_exp(p, var)
    pos = 1 + var
    out = {}
    for k, c in p.terms.items():
        if k[pos] == top:
            kk = list(k)
            kk[pos] = 0
            out[tuple(kk)] = c
    return LaurentPoly(p.nx, out, _normalized=True)


def q_coeffs(p: LaurentPoly) -> dict[int, int]:
    """Exponent->coefficient map in q for an x-free polynomial."""
    out = {}
    for k, c in p.terms.items():
        if any(e != 0 for e in k[1:]):
            raise UsageError("polynomial still involves x-variables")
        out[k[0]] = c
    return out


def render(p: LaurentPoly) -> str:
    """Canonical human-readable form with terms in sorted key order."""
    if p.is_zero():
        return "0"
    parts = []
    for k in sorted(p.terms):
        c = p.terms[k]
        factors = []
        if k[0]:
            factors.append("q" if k[0] == 1 else f"q^{k[0]}")
        for i, e in enumerate(k[1:]):
            if e:
                factors.append(f"x{i}" if e == 1 else f"x{i}^{e}")
        body = "*".join(factors)
        if not body:
            term = str(abs(c))
        elif abs(c) == 1:
            term = body
        else:
            term = f"{abs(c)}*{body}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f"+ {term}" if c > 0 else f"- {term}")
    return " ".join(parts)
