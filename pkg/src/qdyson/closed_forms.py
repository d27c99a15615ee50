"""Exact evaluators for the closed-form constant-term identities.

Every function here returns a canonical QRat (or an exact Fraction for the
q=1 specializations) and is checked elsewhere against the brute-force
expansion, so these implementations are deliberately independent of each
other: the one-denominator corollary formulas do not call the general sum,
and the special-point sum does not call the general sum either.

Convention used throughout for the exponent bookkeeping L(T): the weight
of index 0 is a_0 when 0 is outside T and 0 when 0 belongs to T; weights
of indices 1..n are the usual a_i outside T and 0 inside.  This is the
unique convention under which L(T) = L(T + {0}) + a_0 holds identically,
and it reproduces the per-subset values used by the corollary reductions.

For negative a_0 the general sum is evaluated per subset as a rational
function of y = q^{a_0}: a vanishing denominator 1 - q^{1+a_0+a-sigma}
is cancelled structurally against the matching factor of the prefactor
prod_{i=1..a} (1 - q^{a_0+i}) before substituting the integer a_0.  A
vanishing that cannot be cancelled is reported as an error pointing at
the special-point evaluator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .dyson import DysonParams, MonomialSpec
from .errors import InternalError, UsageError
from .qseries import QPoly, QRat, qpoch, qpoch_at


@dataclass(frozen=True)
class SubsetContext:
    """A subset T with its derived weights.

    w_vec has length n+1; w_vec[0] carries the index-0 convention above
    and w is the sum of w_vec[1:].
    """

    T: tuple[int, ...]
    d: int
    sigma: int
    w_vec: tuple[int, ...]
    w: int

    @classmethod
    def make(cls, params: DysonParams, T) -> "SubsetContext":
        T = tuple(sorted(T))
        if any(t < 0 or t > params.n for t in T):
            raise UsageError("subset indices out of range")
        sigma = sum(params.a[t] for t in T)
        w_vec = tuple(0 if i in T else params.a[i] for i in range(params.n + 1))
        return cls(T, len(T), sigma, w_vec, sum(w_vec[1:]))


def _suffix(w_vec, l: int) -> int:
    return sum(w_vec[l:])


def L_of_T(spec: MonomialSpec, params: DysonParams, ctx: SubsetContext) -> int:
    """Exponent L(T) for nonempty T inside the denominator index set."""
    if not ctx.T or not set(ctx.T) <= set(spec.i_set):
        raise UsageError("T must be a nonempty subset of the denominator indices")
    w = ctx.w_vec
    out = sum(_suffix(w, l) for l in spec.i_set)
    out -= sum(pl * _suffix(w, jl) for jl, pl in zip(spec.j_list, spec.p))
    return out


def Lstar_of_T(spec: MonomialSpec, params: DysonParams, ctx: SubsetContext) -> int:
    """Exponent L*(T) for T inside the denominator index set minus {0}."""
    I = spec.i_set[1:]
    if not set(ctx.T) <= set(I):
        raise UsageError("T must be a subset of the positive denominator indices")
    w_vec = ctx.w_vec
    out = sum(_suffix(w_vec, l) for l in I)
    out -= sum(pl * _suffix(w_vec, jl) for jl, pl in zip(spec.j_list, spec.p))
    return out - comb(ctx.w + 1, 2) - 1


def _qfac_den(params: DysonParams) -> QPoly:
    out = QPoly.one()
    for ai in params.a[1:]:
        out = out * qpoch(ai)
    return out


def zb_rhs(params: DysonParams) -> QRat:
    """(q)_{a+a_0} / ((q)_{a_0} (q)_{a_1} ... (q)_{a_n}); a polynomial."""
    if params.a0 < 0:
        raise UsageError("all parameters must be nonnegative here")
    out = QRat(qpoch(params.a_sum + params.a0), qpoch(params.a0) * _qfac_den(params))
    if not out.is_polynomial():
        raise InternalError("quotient failed to reduce to a polynomial")
    return out


def _zb_product(params: DysonParams) -> QRat:
    """Product form prod_{i=1..a} (1 - q^{a_0+i}) / ((q)_{a_1}...(q)_{a_n});
    agrees with zb_rhs for a_0 >= 0 and extends it to any integer a_0."""
    num = QPoly.one()
    for i in range(1, params.a_sum + 1):
        num = num * (QPoly.one() - QPoly.q_pow(params.a0 + i))
    return QRat(num, _qfac_den(params))


def _nonempty_subsets(indices):
    idx = tuple(indices)
    for r in range(1, len(idx) + 1):
        yield from itertools.combinations(idx, r)


def _main_summand(params: DysonParams, spec: MonomialSpec, T) -> QRat:
    """One subset's contribution to the general sum, prefactor folded in."""
    a0, a = params.a0, params.a_sum
    ctx = SubsetContext.make(params, T)
    if ctx.sigma == 0:
        return QRat.zero()
    sign = -1 if ctx.d % 2 else 1
    base = (QPoly.one() - QPoly.q_pow(ctx.sigma)).shifted(L_of_T(spec, params, ctx)).scale(sign)
    e_den = 1 + a0 + a - ctx.sigma
    den = _qfac_den(params)
    if e_den == 0:
        i_cancel = -a0
        if not 1 <= i_cancel <= a:
            raise UsageError(
                "vanishing denominator does not cancel; "
                "evaluate this point with mainlemma2_rhs")
        num = base
        for i in range(1, a + 1):
            if i != i_cancel:
                num = num * (QPoly.one() - QPoly.q_pow(a0 + i))
        return QRat(num, den)
    num = base
    for i in range(1, a + 1):
        num = num * (QPoly.one() - QPoly.q_pow(a0 + i))
    return QRat(num, den * (QPoly.one() - QPoly.q_pow(e_den)))


def main_rhs(params: DysonParams, spec: MonomialSpec) -> QRat:
    """The general closed form: prefactor times the signed subset sum.

    For a_0 >= 0 the result is a genuine polynomial in q; for negative a_0
    it is the rational-function value at y = q^{a_0} described in the
    module docstring (zero off the special points, the special-point value
    otherwise).
    """
    spec.validate_for(params.n)
    if spec.m == 0:
        return _zb_product(params)
    total = QRat.zero()
    for T in _nonempty_subsets(spec.i_set):
        total = total + _main_summand(params, spec, T)
    if params.a0 >= 0 and not total.is_polynomial():
        raise InternalError("closed form failed to reduce to a polynomial")
    return total


def cor14_rhs(params: DysonParams, r: int) -> QRat:
    """Closed form for the coefficient monomial x_r / x_0."""
    n, a0, a = params.n, params.a0, params.a_sum
    if not 0 < r <= n:
        raise UsageError("need 0 < r <= n")
    if a0 < 0:
        raise UsageError("a_0 must be nonnegative here")
    lt = sum(params.a[1:r])
    head = QRat((QPoly.one() - QPoly.q_pow(a0)).shifted(lt).scale(-1),
                QPoly.one() - QPoly.q_pow(a + 1))
    return head * QRat(qpoch(a + a0), qpoch(a0) * _qfac_den(params))


def cor15_rhs(params: DysonParams, r: int, t: int) -> QRat:
    """Closed form for the coefficient monomial x_r^2 / (x_0 x_t), t < r."""
    n, a0, a = params.n, params.a0, params.a_sum
    if not (1 <= t < r <= n):
        raise UsageError("need 1 <= t < r <= n")
    if a0 < 0:
        raise UsageError("a_0 must be nonnegative here")
    at = params.a[t]
    lt = 2 * sum(params.a[t + 1:r]) + sum(params.a[1:t])
    bracket = ((QPoly.one() - QPoly.q_pow(a0 + a + 1))
               + (QPoly.one() - QPoly.q_pow(a + 1 - at)).shifted(at))
    num = ((QPoly.one() - QPoly.q_pow(a0))
           * (QPoly.one() - QPoly.q_pow(at)) * bracket).shifted(lt)
    den = ((QPoly.one() - QPoly.q_pow(a + 1 - at))
           * (QPoly.one() - QPoly.q_pow(a + 1))
           * (QPoly.one() - QPoly.q_pow(a0 + a + 1 - at)))
    return QRat(num, den) * QRat(qpoch(a + a0), qpoch(a0) * _qfac_den(params))


def cor16_rhs(params: DysonParams, r: int, s: int, t: int) -> QRat:
    """Closed form for the coefficient monomial x_r x_s / (x_0 x_t)."""
    n, a0, a = params.n, params.a0, params.a_sum
    if not (1 <= r < s <= n):
        raise UsageError("need 1 <= r < s <= n")
    if not (1 <= t < s) or t == r:
        raise UsageError("need 1 <= t < s with t distinct from r")
    if a0 < 0:
        raise UsageError("a_0 must be nonnegative here")
    at = params.a[t]
    if r < t:
        lt = sum(params.a[1:r]) + sum(params.a[t + 1:s])
        mexp = 1 + a + a0
    else:
        lt = sum(params.a[r:s]) + sum(params.a[1:t]) + 2 * sum(params.a[t + 1:r])
        mexp = at
    bracket = ((QPoly.one() - QPoly.q_pow(a0 + a + 1))
               + (QPoly.one() - QPoly.q_pow(a + 1 - at)).shifted(mexp))
    num = ((QPoly.one() - QPoly.q_pow(a0))
           * (QPoly.one() - QPoly.q_pow(at)) * bracket).shifted(lt)
    den = ((QPoly.one() - QPoly.q_pow(a + 1 - at))
           * (QPoly.one() - QPoly.q_pow(a + 1))
           * (QPoly.one() - QPoly.q_pow(a0 + a + 1 - at)))
    return QRat(num, den) * QRat(qpoch(a + a0), qpoch(a0) * _qfac_den(params))


def special_a0_values(params: DysonParams, spec: MonomialSpec) -> dict[int, list[tuple]]:
    """Map a_0 -> qualifying subsets T of I for the special points
    a_0 = -(a - sigma(T) + 1)."""
    I = spec.i_set[1:]
    a = params.a_sum
    out: dict[int, list[tuple]] = {}
    for r in range(len(I) + 1):
        for T in itertools.combinations(I, r):
            sigma = sum(params.a[t] for t in T)
            out.setdefault(-(a - sigma + 1), []).append(T)
    return out


def mainlemma2_rhs(params: DysonParams, spec: MonomialSpec) -> QRat:
    """Special-point value: the signed sum of q^{L*(T)} (q)_w (q)_{a-w}
    over the qualifying subsets, divided by (q)_{a_1}...(q)_{a_n}."""
    spec.validate_for(params.n)
    if spec.m == 0:
        raise UsageError("special-point sum needs a nonempty denominator set")
    a0, a = params.a0, params.a_sum
    qualifying = special_a0_values(params, spec).get(a0)
    if not qualifying:
        raise UsageError(f"a_0={a0} is not a special point (constant term is 0)")
    den = _qfac_den(params)
    total = QRat.zero()
    for T in qualifying:
        ctx = SubsetContext.make(params, T)
        sign = -1 if (ctx.w + ctx.d) % 2 else 1
        num = (qpoch(ctx.w) * qpoch(a - ctx.w)).shifted(
            Lstar_of_T(spec, params, ctx)).scale(sign)
        total = total + QRat(num, den)
    return total


def check_lemma26(params: DysonParams, spec: MonomialSpec, a0: int) -> bool:
    """Confirm that at a_0 in {0, -1, ..., -(a+1)} the general sum agrees
    with the special-point sum (or vanishes off the special points)."""
    a = params.a_sum
    if not -(a + 1) <= a0 <= 0:
        raise UsageError("a_0 must lie in {0, -1, ..., -(a+1)}")
    at_point = params.with_a0(a0)
    lhs = main_rhs(at_point, spec)
    if special_a0_values(params, spec).get(a0):
        return lhs == mainlemma2_rhs(at_point, spec)
    return lhs.is_zero()


def dyson_rhs_q1(params: DysonParams) -> Fraction:
    """Multinomial coefficient (a_0 + ... + a_n)! / (a_0! ... a_n!)."""
    if params.a0 < 0:
        raise UsageError("all parameters must be nonnegative here")
    out = factorial(sum(params.a))
    for ai in params.a:
        out //= factorial(ai)
    return Fraction(out)


def main_rhs_q1(params: DysonParams, spec: MonomialSpec) -> Fraction:
    """The q -> 1 limit: multinomial times the signed subset sum
    sum_T (-1)^d sigma(T) / (1 + a + a_0 - sigma(T))."""
    spec.validate_for(params.n)
    if params.a0 < 0:
        raise UsageError("a_0 must be nonnegative here")
    if spec.m == 0:
        return dyson_rhs_q1(params)
    a0, a = params.a0, params.a_sum
    total = Fraction(0)
    for T in _nonempty_subsets(spec.i_set):
        sigma = sum(params.a[t] for t in T)
        den = 1 + a + a0 - sigma
        if den == 0:
            raise InternalError("unexpected vanishing denominator at q=1")
        total += Fraction((-1) ** len(T) * sigma, den)
    return dyson_rhs_q1(params) * total


def lemma51_check(w_vec) -> bool:
    """Exact identity behind the special-point evaluation's scalar factor.

    The left side is a product of shifted q-Pochhammers over the weight
    vector; the right side is (-1)^w q^{-binom(w+1,2)} (q)_w / prod (q)_{w_l}.
    """
    w_vec = tuple(w_vec)
    if any(wl < 0 for wl in w_vec):
        raise UsageError("weights must be nonnegative")
    n = len(w_vec)
    w = sum(w_vec)
    suffix = lambda l: sum(w_vec[l - 1:])  # w_l + ... + w_n with 1-based l
    prefix = lambda l: sum(w_vec[:l])      # w_1 + ... + w_l

    lhs = QRat.one()
    for l in range(1, n + 1):
        num = qpoch_at(-suffix(l), w_vec[l - 1])
        den = qpoch(suffix(l)) * qpoch_at(-prefix(l - 1), prefix(l - 1))
        lhs = lhs * QRat(num, den)
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            mid = sum(w_vec[i - 1:j - 1])
            lhs = lhs * QRat(qpoch_at(-mid, w_vec[i - 1]) * qpoch_at(mid + 1, w_vec[j - 1]))

    sign = -1 if w % 2 else 1
    den = QPoly.one()
    for wl in w_vec:
        den = den * qpoch(wl)
    rhs = QRat(qpoch(w).shifted(-comb(w + 1, 2)).scale(sign), den)
    return lhs == rhs
