"""Constant-term extraction in the iterated Laurent field, and the
branch-and-prune engine for the deformed product Q(h).

Rational functions are kept structured: a Laurent-polynomial numerator
over a multiset of binomial pole factors (1 - q^e x_top/x_bot) plus
x-free scalar factors (1 - q^e).  The iterated field orders variables so
that 1/(1 - q^e x_i/x_j) expands with nonnegative powers of the
lower-indexed variable; a factor is "small" with respect to a variable
when that variable sits over a higher-indexed one, and only small poles
contribute residues to a constant term.

The engine computes CT_x Q(h), where Q(h) is M(x) times the q-Dyson
product with its first parameter replaced by -h, so the denominators are
the h*n factors (1 - q^{-i} x_0/x_j).  Extraction runs variable by
variable: residues at small poles spawn child branches (r, k); a branch
whose numerator collapses to the zero polynomial is pruned (the numerator
is a product of binomials, so this is an exact per-factor test); a branch
of degree zero terminates through the leading-coefficient form of the
partial-fraction decomposition.  Degree-positive branches fall back to
exact long division (the divisor's extreme coefficient is a unit
monomial), though none arise for first-layer monomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .dyson import DysonParams, MonomialSpec
from .errors import InternalError, UsageError
from .laurent import (
    LaurentPoly,
    Monomial,
    ct_in_vars,
    leading_part,
    lp_mul,
    lp_mul_monomial,
    lp_subst_many,
    lp_subst_monomial,
    max_exp,
    q_coeffs,
)
from .qseries import QPoly, QRat


@dataclass(frozen=True, order=True)
class BinomFactor:
    """The denominator factor (1 - q^e * x_top / x_bot)."""

    top: int
    bot: int
    e: int

    def __post_init__(self):
        if self.top == self.bot:
            raise UsageError("binomial factor needs distinct variables")

    def involves(self, var: int) -> bool:
        return var in (self.top, self.bot)


class RatLaurent:
    """num / (prod of binomial factors * prod of (1 - q^e) scalars)."""

    __slots__ = ("num", "den", "den_q")

    def __init__(self, num: LaurentPoly, den: Sequence[BinomFactor] = (),
                 den_q: Sequence[int] = ()):
        self.num = num
        self.den = tuple(sorted(den))
        if any(e == 0 for e in den_q):
            raise UsageError("scalar factor 1 - q^0 is zero")
        self.den_q = tuple(sorted(den_q))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        return (isinstance(other, RatLaurent) and self.num == other.num
                and self.den == other.den and self.den_q == other.den_q)

    def __hash__(self):
        return hash((self.num, self.den, self.den_q))

    def __repr__(self) -> str:
        return f"RatLaurent(num={self.num!r}, den={self.den}, den_q={self.den_q})"

    def scalar_den(self) -> QPoly:
        out = QPoly.one()
        for e in self.den_q:
            out = out * (QPoly.one() - QPoly.q_pow(e))
        return out


def classify(f: BinomFactor, var: int) -> str:
    """Orient the factor's monomial so var appears on top: 'small' when var
    then sits over a higher index, 'large' over a lower one, 'free' if
    absent."""
    if var == f.top:
        return "small" if f.top < f.bot else "large"
    if var == f.bot:
        return "small" if f.bot < f.top else "large"
    return "free"


def degree_in(F: RatLaurent, var: int) -> int:
    """Degree of F in var: the numerator's top exponent minus one per pole
    factor with var on top.  (A factor with var on the bottom contributes
    zero, matching (1 - x_t/x_var) = (x_var - x_t)/x_var.)"""
    if F.num.is_zero():
        raise UsageError("zero rational function has no degree")
    return max_exp(F.num, var) - sum(1 for f in F.den if f.top == var)


def _orient(F: RatLaurent, var: int):
    """Rewrite every denominator factor containing var with var on top.

    Returns (num, poles, rest): poles are (e, bot) pairs for factors
    (1 - q^e x_var/x_bot); flipping a factor multiplies the numerator by
    -q^{-e} x_var/x_top."""
    num = F.num
    poles: list[tuple[int, int]] = []
    rest: list[BinomFactor] = []
    for f in F.den:
        if f.top == var:
            poles.append((f.e, f.bot))
        elif f.bot == var:
            num = lp_mul_monomial(
                num, Monomial(-1, -f.e, tuple(
                    1 if i == var else (-1 if i == f.top else 0)
                    for i in range(num.nx))))
            poles.append((-f.e, f.top))
        else:
            rest.append(f)
    if len(set(poles)) != len(poles):
        raise InternalError("coincident poles in one denominator")
    return num, poles, rest


def _alpha_monomial(poles, nx: int) -> Monomial:
    """(-1)^m times the product of the pole monomials x_bot q^{-e}."""
    xs = [0] * nx
    qe = 0
    for e, b in poles:
        xs[b] += 1
        qe -= e
    return Monomial(-1 if len(poles) % 2 else 1, qe, tuple(xs))


def _almost_proper_const(num: LaurentPoly, poles, var: int) -> LaurentPoly:
    """Constant part for degree zero: (-1)^m (prod alpha_j) LC_var(num)."""
    return lp_mul_monomial(leading_part(num, var), _alpha_monomial(poles, num.nx))


def _poly_part_const(num: LaurentPoly, poles, var: int) -> LaurentPoly:
    """var-free coefficient of the polynomial part of num / prod(1 - x_var/alpha_j),
    by long division in var.  The divisor's leading coefficient is the unit
    monomial prod(-q^e/x_bot), so the division is exact over the Laurent ring."""
    nx = num.nx
    m = len(poles)
    D = LaurentPoly.one(nx)
    for e, b in poles:
        D = lp_mul(D, LaurentPoly(nx, {
            (0,) * (nx + 1): 1,
            tuple(e if i == 0 else (1 if i == 1 + var else (-1 if i == 1 + b else 0))
                  for i in range(nx + 1)): -1}))
    lead_key = tuple((sum(e for e, _ in poles)) if i == 0
                     else (m if i == 1 + var
                           else -sum(1 for _, b in poles if b == i - 1))
                     for i in range(nx + 1))
    lead_coeff = -1 if m % 2 else 1
    out: dict[tuple[int, ...], int] = {}
    cur = num
    pos = 1 + var
    while not cur.is_zero() and max_exp(cur, var) >= m:
        top = max_exp(cur, var)
        piece = {}
        for k, c in cur.terms.items():
            if k[pos] == top:
                piece[tuple(a - b for a, b in zip(k, lead_key))] = c * lead_coeff
        piece_poly = LaurentPoly(nx, piece, _normalized=True)
        if top == m:
            for k, c in piece.items():
                s = out.get(k, 0) + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        cur = cur - lp_mul(piece_poly, D)
    return LaurentPoly(nx, out, _normalized=True)


def ct_extract(F: RatLaurent, var: int) -> list[RatLaurent]:
    """Constant term of F in one variable, as a sum of structured terms.

    The result is the polynomial-part constant plus one residue per small
    pole; the terms are returned separately because recombining them over
    a common denominator can create coincident pole factors, which the
    representation forbids.  Poles in var must be distinct monomials.
    """
    num, poles, rest = _orient(F, var)
    if num.is_zero():
        return []
    out: list[RatLaurent] = []
    m = len(poles)
    deg = max_exp(num, var) - m
    if deg == 0:
        p0 = _almost_proper_const(num, poles, var)
    elif deg > 0:
        p0 = _poly_part_const(num, poles, var)
    else:
        p0 = LaurentPoly.zero(num.nx)
    if not p0.is_zero():
        out.append(RatLaurent(p0, rest, F.den_q))
    for e, b in sorted(poles):
        if var > b:
            continue  # large pole: no residue
        sub = lp_subst_monomial(num, var, Monomial(
            1, -e, tuple(1 if i == b else 0 for i in range(num.nx))))
        if sub.is_zero():
            continue
        new_den = list(rest)
        new_q = list(F.den_q)
        for e2, b2 in poles:
            if (e2, b2) == (e, b):
                continue
            if b2 == b:
                new_q.append(e2 - e)
            else:
                new_den.append(BinomFactor(b, b2, e2 - e))
        out.append(RatLaurent(sub, new_den, new_q))
    return out


# -- the deformed product Q(h) -------------------------------------------------


def _numerator_factors(params: DysonParams) -> list[LaurentPoly]:
    """Binomial factors of the Q(h) numerator (everything except M(x))."""
    n, nx = params.n, params.nx

    def binom(qe: int, top: int, bot: int) -> LaurentPoly:
        return LaurentPoly(nx, {
            (0,) * (nx + 1): 1,
            tuple(qe if i == 0 else (1 if i == 1 + top else (-1 if i == 1 + bot else 0))
                  for i in range(nx + 1)): -1}, _normalized=True)

    factors = []
    for j in range(1, n + 1):
        for i in range(params.a[j]):
            factors.append(binom(1 + i, j, 0))
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            for l in range(params.a[i]):
                factors.append(binom(l, i, j))
            for l in range(params.a[j]):
                factors.append(binom(1 + l, j, i))
    return factors


def q_denominator(params: DysonParams, h: int) -> list[BinomFactor]:
    """The h*n pole factors (1 - q^{-i} x_0/x_j), 1 <= i <= h, 1 <= j <= n."""
    return [BinomFactor(0, j, -i)
            for j in range(1, params.n + 1) for i in range(1, h + 1)]


def _resolve_monomial(m_or_spec, params: DysonParams) -> Monomial:
    if isinstance(m_or_spec, MonomialSpec):
        m_or_spec.validate_for(params.n)
        return m_or_spec.monomial(params.n)
    b = tuple(m_or_spec)
    if len(b) != params.nx or sum(b) != 0:
        raise UsageError("monomial exponents must have length n+1 and sum 0")
    return Monomial(1, 0, b)


def build_Q(m_or_spec, params: DysonParams, h: int) -> RatLaurent:
    """Q(h): M(x) times the q-Dyson product at first parameter -h, with the
    denominator kept structured."""
    if h < 0:
        raise UsageError("need h >= 0")
    m = _resolve_monomial(m_or_spec, params)
    num = LaurentPoly.from_monomial(m)
    for f in _numerator_factors(params):
        num = lp_mul(num, f)
    return RatLaurent(num, q_denominator(params, h), ())


def E_subst(F: RatLaurent, r: Sequence[int], k: Sequence[int]) -> RatLaurent:
    """Collapse the variables x_0, x_{r_1}, ..., x_{r_{s-1}} into x_{r_s}.

    First removes the pole factors (1 - q^{-k_i} x_0 / x_{r_i}) that the
    substitution x_0 -> x_{r_s} q^{k_s}, x_{r_i} -> x_{r_s} q^{k_s - k_i}
    would take to zero, then substitutes in the numerator and the remaining
    denominator.  Factors that become x-free move to the scalar list.
    """
    r, k = tuple(r), tuple(k)
    if len(r) != len(k) or not r:
        raise UsageError("need matching nonempty index and shift lists")
    if list(r) != sorted(set(r)) or r[0] < 1:
        raise UsageError("variable chain must be strictly increasing and positive")
    if any(ki < 1 for ki in k):
        raise UsageError("shifts must be positive")
    rs, ks = r[-1], k[-1]

    den = list(F.den)
    for ri, ki in zip(r, k):
        cancel = BinomFactor(0, ri, -ki)
        try:
            den.remove(cancel)
        except ValueError:
            raise InternalError(f"factor {cancel} not present to cancel")

    sub = {0: Monomial(1, ks, tuple(1 if i == rs else 0 for i in range(F.num.nx)))}
    for ri, ki in zip(r[:-1], k[:-1]):
        sub[ri] = Monomial(1, ks - ki,
                           tuple(1 if i == rs else 0 for i in range(F.num.nx)))

    shift = {v: m.q_exp for v, m in sub.items()}
    target = {v: rs for v in sub}
    new_den: list[BinomFactor] = []
    new_q = list(F.den_q)
    for f in den:
        top = target.get(f.top, f.top)
        bot = target.get(f.bot, f.bot)
        e = f.e + shift.get(f.top, 0) - shift.get(f.bot, 0)
        if top == bot:
            if e == 0:
                raise InternalError("substitution zeroed a denominator factor")
            new_q.append(e)
        else:
            new_den.append(BinomFactor(top, bot, e))
    return RatLaurent(lp_subst_many(F.num, sub), new_den, new_q)


def branch_value(m_or_spec, params: DysonParams, h: int,
                 r: Sequence[int], k: Sequence[int]) -> RatLaurent:
    """The branch Q(h | r; k) built directly from Q(h)."""
    return E_subst(build_Q(m_or_spec, params, h), r, k)


# -- the branch-and-prune engine ------------------------------------------------


VANISHED = "vanished"
RECURSED = "recursed"
TERMINAL = "almost-proper-terminal"


@dataclass
class BranchTrace:
    """One line per visited branch of the Q(h) recursion."""

    r: tuple[int, ...]
    k: tuple[int, ...]
    status: str
    degree: int | None
    expected_degree: int | None

    def line(self) -> str:
        deg = "" if self.degree is None else f" deg={self.degree}"
        return f"r={list(self.r)} k={list(self.k)} {self.status}{deg}"


@dataclass
class _Branch:
    r: tuple[int, ...]
    k: tuple[int, ...]
    mono: Monomial
    factors: list[LaurentPoly]
    den: list[BinomFactor]
    den_q: list[int]


def _finalize(br: _Branch, nx: int) -> QRat:
    """Value of a branch with no binomial denominators left: expand the
    x-dependent part, filter the constant term, divide by the scalars."""
    scalar = QPoly.one()
    xpart = LaurentPoly.from_monomial(br.mono)
    for f in br.factors:
        if all(all(e == 0 for e in key[1:]) for key in f.terms):
            scalar = scalar * QPoly.from_pairs(q_coeffs(f))
        else:
            xpart = lp_mul(xpart, f)
    ct = ct_in_vars(xpart, range(nx))
    num = QPoly.from_pairs(q_coeffs(ct)) * scalar
    den = QPoly.one()
    for e in br.den_q:
        den = den * (QPoly.one() - QPoly.q_pow(e))
    return QRat(num, den)


def _branch_max_exp(br: _Branch, var: int) -> int:
    out = br.mono.xs[var]
    for f in br.factors:
        out += max_exp(f, var)
    return out


def _expected_degree(br: _Branch, params: DysonParams, h: int, b: tuple[int, ...]) -> int:
    s = len(br.r)
    return ((params.n - s) * (sum(params.a[i] for i in br.r) - h)
            + b[0] + sum(b[i] for i in br.r))


def gx_ct(spec: MonomialSpec, params: DysonParams, h: int,
          trace: list[BranchTrace] | None = None) -> QRat:
    """Full constant term of Q(h) by branch-and-prune partial fractions.

    Intended for 0 <= h <= a+1 (h = -a_0); the result is reported as a
    canonical QRat and is summed over branches in sorted (r, k) order, so
    it is deterministic.
    """
    spec.validate_for(params.n)
    if not 0 <= h <= params.a_sum + 1:
        raise UsageError("need 0 <= h <= a+1")
    n, nx = params.n, params.nx
    bvec = spec.bvector(n)
    root = _Branch((), (), spec.monomial(n), _numerator_factors(params),
                   q_denominator(params, h), [])

    def process(br: _Branch, is_chain: bool) -> QRat:
        if br.mono.coeff == 0 or any(f.is_zero() for f in br.factors):
            if is_chain and trace is not None:
                trace.append(BranchTrace(br.r, br.k, VANISHED, None, None))
            return QRat.zero()
        var = (br.r[-1] if br.r else 0) if is_chain else None
        if not br.den:
            # no poles left: the constant term is plain term filtering
            if is_chain and br.r and trace is not None:
                deg = _branch_max_exp(br, var)
                trace.append(BranchTrace(
                    br.r, br.k, TERMINAL if deg == 0 else RECURSED,
                    deg, _expected_degree(br, params, h, bvec)))
            return _finalize(br, nx)
        if var is None:
            var = min(min(f.top, f.bot) for f in br.den)

        # orient denominator factors so var is on top
        mono = br.mono
        poles: list[tuple[int, int]] = []
        rest: list[BinomFactor] = []
        for f in br.den:
            if f.top == var:
                poles.append((f.e, f.bot))
            elif f.bot == var:
                xs = list(mono.xs)
                xs[var] += 1
                xs[f.top] -= 1
                mono = Monomial(-mono.coeff, mono.q_exp - f.e, tuple(xs))
                poles.append((-f.e, f.top))
            else:
                rest.append(f)
        if len(set(poles)) != len(poles):
            raise InternalError("coincident poles in one denominator")
        m = len(poles)
        deg = mono.xs[var] + sum(max_exp(f, var) for f in br.factors) - m
        small = [(e, b) for e, b in sorted(poles) if b > var]

        total = QRat.zero()
        if deg == 0:
            alpha = _alpha_monomial(poles, nx)
            xs = list(mono.xs)
            xs[var] = 0
            lead_mono = Monomial(mono.coeff * alpha.coeff,
                                 mono.q_exp + alpha.q_exp,
                                 tuple(a + b for a, b in zip(xs, alpha.xs)))
            p0 = _Branch(br.r, br.k, lead_mono,
                         [leading_part(f, var) for f in br.factors], rest, br.den_q)
            total = total + process(p0, False)
        elif deg > 0:
            num = LaurentPoly.from_monomial(mono)
            for f in br.factors:
                num = lp_mul(num, f)
            p0_num = _poly_part_const(num, poles, var)
            if not p0_num.is_zero():
                p0 = _Branch(br.r, br.k, Monomial(1, 0, (0,) * nx),
                             [p0_num], rest, br.den_q)
                total = total + process(p0, False)

        if is_chain and trace is not None:
            status = TERMINAL if (deg == 0 and not small) else RECURSED
            trace.append(BranchTrace(br.r, br.k, status, deg,
                                     _expected_degree(br, params, h, bvec)))

        klast = br.k[-1] if br.k else 0
        for e, b in small:
            sub = Monomial(1, -e, tuple(1 if i == b else 0 for i in range(nx)))
            t = mono.xs[var]
            xs = list(mono.xs)
            xs[var] = 0
            xs[b] += t
            child_mono = Monomial(mono.coeff, mono.q_exp - e * t, tuple(xs))
            child_factors = [lp_subst_monomial(f, var, sub) for f in br.factors]
            child_den = list(rest)
            child_q = list(br.den_q)
            for e2, b2 in poles:
                if (e2, b2) == (e, b):
                    continue
                if b2 == b:
                    child_q.append(e2 - e)
                else:
                    child_den.append(BinomFactor(b, b2, e2 - e))
            child = _Branch(br.r + (b,), br.k + (klast - e,), child_mono,
                            child_factors, child_den, child_q)
            total = total + process(child, is_chain)
        return total

    return process(root, True)


def gx_trace_lines(spec: MonomialSpec, params: DysonParams, h: int) -> list[str]:
    """One formatted line per visited branch."""
    tr: list[BranchTrace] = []
    gx_ct(spec, params, h, trace=tr)
    return [t.line() for t in tr]


# -- the predicted surviving branch --------------------------------------------


def r_star(T, n: int) -> tuple[int, ...]:
    """Variable chain that survives at the special point: 1..n minus T."""
    T = set(T)
    return tuple(i for i in range(1, n + 1) if i not in T)


def k_star(T, params: DysonParams) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The unique surviving (r, k) at h = a - sigma(T) + 1.

    k_l is one more than the tail weight sum from r_l on, with the weights
    of T zeroed out.
    """
    T = set(T)
    if any(t < 1 or t > params.n for t in T):
        raise UsageError("subset indices must lie in 1..n")
    w = [0 if i in T else params.a[i] for i in range(params.n + 1)]
    r = r_star(T, params.n)
    k = tuple(sum(w[rl:]) + 1 for rl in r)
    return r, k


def special_h(T, params: DysonParams) -> int:
    """h at which the subset T survives: a - sigma(T) + 1."""
    return params.a_sum - sum(params.a[t] for t in set(T)) + 1


# -- exhaustive shift-vector trichotomy -----------------------------------------


def lemma34_check(a_vec: Sequence[int]) -> bool:
    """Exhaustively confirm the shift-vector trichotomy for the given
    nonnegative parameters: every k with 1 <= k_i <= a_1+...+a_s+1 either
    has some k_i <= a_i, or some pair with -a_j <= k_i - k_j <= a_i - 1,
    except exactly the vector k_i = a_i + ... + a_s + 1, which has neither.
    """
    import itertools

    a = tuple(a_vec)
    if any(ai < 0 for ai in a):
        raise UsageError("parameters must be nonnegative")
    s = len(a)
    bound = sum(a) + 1
    exceptional = tuple(sum(a[i:]) + 1 for i in range(s))
    for kvec in itertools.product(range(1, bound + 1), repeat=s):
        case1 = any(kvec[i] <= a[i] for i in range(s))
        case2 = any(-a[j] <= kvec[i] - kvec[j] <= a[i] - 1
                    for i in range(s) for j in range(i + 1, s))
        if kvec == exceptional:
            if case1 or case2:
                return False
        elif not (case1 or case2):
            return False
    return True


# -- exponent bookkeeping of the terminal evaluation ----------------------------


def l2_direct(params: DysonParams, T) -> int:
    """Triple-sum form of the q-power collected at the terminal branch."""
    T = set(T)
    n = params.n
    w = [0 if i in T else params.a[i] for i in range(n + 1)]
    wsum = sum(w[1:])
    wn = w[n]
    suf = lambda l: sum(w[l:n + 1])
    out = 0
    for _ in T:
        out += comb(wsum + 1, 2) - (wsum + 1) * wn
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            if i in T and j not in T:
                out += comb(w[j] + 1, 2) + (wn - suf(j)) * w[j]
            elif i not in T and j in T:
                out += comb(w[i] + 1, 2) + (wn - suf(i)) * w[i] - w[i]
    return out


def l2_closed(params: DysonParams, T) -> int:
    """Telescoped form: -d w_n + d w - sum_{l in T} sum_{k < l} w_k."""
    T = set(T)
    n = params.n
    w = [0 if i in T else params.a[i] for i in range(n + 1)]
    wsum = sum(w[1:])
    d = len(T)
    return -d * w[n] + d * wsum - sum(sum(w[1:l]) for l in T)
