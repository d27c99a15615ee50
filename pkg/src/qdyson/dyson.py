"""Problem instances: the q-Dyson product, brute-force constant terms, and
the cyclic rotation that canonicalizes general first-layer monomials.

The central object is

    D_n(x, a, q) = prod_{0 <= i < j <= n} (x_i/x_j; q)_{a_i} (q x_j/x_i; q)_{a_j},

a Laurent polynomial once all parameters a_i are nonnegative.  brute_ct
expands it fully (exact integer arithmetic) and filters the constant term,
which serves as the ground-truth oracle for every closed form in the
package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import UsageError
from .laurent import (
    LaurentPoly,
    Monomial,
    ct_in_vars,
    lp_mul,
    lp_mul_monomial,
    mono,
    pochhammer_monomial,
    q_coeffs,
    ratio_mono,
)
from .qseries import QPoly


@dataclass(frozen=True)
class DysonParams:
    """An instance (n, a_0, a_1..a_n).  a_0 may be any integer; the brute
    force additionally requires a_0 >= 0."""

    n: int
    a: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if self.n < 1:
            raise UsageError("need n >= 1")
        if len(self.a) != self.n + 1:
            raise UsageError(f"need n+1 = {self.n + 1} parameters, got {len(self.a)}")
        if any(ai < 0 for ai in self.a[1:]):
            raise UsageError("a_1..a_n must be nonnegative")

    @property
    def a0(self) -> int:
        return self.a[0]

    @property
    def a_sum(self) -> int:
        return sum(self.a[1:])

    @property
    def nx(self) -> int:
        return self.n + 1

    def with_a0(self, a0: int) -> "DysonParams":
        return DysonParams(self.n, (a0,) + self.a[1:])

    def rotated(self, steps: int = 1) -> "DysonParams":
        """Parameter vector after `steps` applications of the cyclic action:
        one step maps (a_0, ..., a_n) to (a_n, a_0, ..., a_{n-1})."""
        k = steps % (self.n + 1)
        return DysonParams(self.n, self.a[-k:] + self.a[:-k] if k else self.a)


@dataclass(frozen=True)
class MonomialSpec:
    """First-layer monomial x_{j_1}^{p_1} .. x_{j_nu}^{p_nu} / (x_{i_1} .. x_{i_m}).

    i_set is the ordered denominator index set (i_1 = 0 when nonempty),
    j_list the ordered numerator indices with positive powers p summing
    to m.  The empty spec is the plain q-Dyson constant term.
    """

    i_set: tuple[int, ...] = ()
    j_list: tuple[int, ...] = ()
    p: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "i_set", tuple(self.i_set))
        object.__setattr__(self, "j_list", tuple(self.j_list))
        object.__setattr__(self, "p", tuple(self.p))
        i, j, p = self.i_set, self.j_list, self.p
        if list(i) != sorted(set(i)) or list(j) != sorted(set(j)):
            raise UsageError("index lists must be strictly increasing")
        if len(j) != len(p):
            raise UsageError("one power per numerator index")
        if any(pl <= 0 for pl in p):
            raise UsageError("numerator powers must be positive")
        if sum(p) != len(i):
            raise UsageError("numerator powers must sum to the denominator size")
        if i and i[0] != 0:
            raise UsageError("denominator must contain x_0 (rotate first)")
        if j and j[0] < 1:
            raise UsageError("numerator indices must be >= 1")
        if set(i) & set(j):
            raise UsageError("numerator and denominator indices must be disjoint")

    @property
    def m(self) -> int:
        return len(self.i_set)

    @property
    def nu(self) -> int:
        return len(self.j_list)

    def validate_for(self, n: int) -> None:
        if self.m and self.i_set[-1] >= n:
            raise UsageError("largest denominator index must be < n (rotate first)")
        if self.j_list and self.j_list[-1] > n:
            raise UsageError("numerator indices must be <= n")

    def bvector(self, n: int) -> tuple[int, ...]:
        b = [0] * (n + 1)
        for i in self.i_set:
            b[i] = -1
        for j, pl in zip(self.j_list, self.p):
            b[j] = pl
        return tuple(b)

    def monomial(self, n: int) -> Monomial:
        return Monomial(1, 0, self.bvector(n))


EMPTY_SPEC = MonomialSpec()


def spec_from_bvector(b: Sequence[int]) -> MonomialSpec:
    """Interpret an exponent vector as a canonical first-layer monomial."""
    if sum(b) != 0:
        raise UsageError("monomial must have total degree 0")
    i_set = tuple(i for i, e in enumerate(b) if e < 0)
    if any(b[i] != -1 for i in i_set):
        raise UsageError("not a first-layer monomial: denominator exponents must be 1")
    j_list = tuple(j for j, e in enumerate(b) if e > 0)
    return MonomialSpec(i_set, j_list, tuple(b[j] for j in j_list))


def build_dyson(params: DysonParams) -> LaurentPoly:
    """Fully expanded D_n(x, a, q); requires a_0 >= 0."""
    if params.a0 < 0:
        raise UsageError("a_0 must be >= 0 for the expanded product")
    nx = params.nx
    out = LaurentPoly.one(nx)
    for i in range(nx):
        for j in range(i + 1, nx):
            out = lp_mul(out, pochhammer_monomial(ratio_mono(nx, i, j), params.a[i]))
            out = lp_mul(out, pochhammer_monomial(ratio_mono(nx, j, i, q=1), params.a[j]))
    return out


def brute_ct(params: DysonParams, spec: MonomialSpec = EMPTY_SPEC,
             dyson: LaurentPoly | None = None) -> QPoly:
    """Constant term of M(x) * D_n in all the x's, by full expansion.

    `dyson` may carry a precomputed build_dyson(params) so that sweeps can
    share one expansion across many monomials.
    """
    spec.validate_for(params.n)
    if dyson is None:
        dyson = build_dyson(params)
    shifted = lp_mul_monomial(dyson, spec.monomial(params.n))
    ct = ct_in_vars(shifted, range(params.nx))
    return QPoly.from_pairs(q_coeffs(ct))


def pi_action(p: LaurentPoly) -> LaurentPoly:
    """The substitution x_i -> x_{i+1} for i < n and x_n -> x_0 / q."""
    out = {}
    for k, c in p.terms.items():
        en = k[-1]
        out[(k[0] - en, en) + k[1:-1]] = c
    return LaurentPoly(p.nx, out, _normalized=True)


def rotate_reduce(b: Sequence[int], params: DysonParams):
    """Rotate a general first-layer monomial into canonical position.

    Returns (qshift, spec, params') with the smallest number of rotation
    steps such that the denominator contains x_0 but not x_n, and

        CT_x( x^b * D_n(x, a, q) ) = q^qshift * CT_x( M'(x) * D_n(x, a', q) ).

    Raises UsageError when b is not a first-layer monomial up to rotation.
    """
    b = tuple(b)
    n = params.n
    if len(b) != n + 1:
        raise UsageError(f"monomial has {len(b)} exponents, expected {n + 1}")
    if sum(b) != 0:
        raise UsageError("monomial must have total degree 0")
    if any(e < -1 for e in b):
        raise UsageError("not a first-layer monomial: denominator exponents must be 1")
    if all(e == 0 for e in b):
        return 0, EMPTY_SPEC, params

    cur = list(b)
    qshift = 0
    for step in range(n + 1):
        den = {i for i, e in enumerate(cur) if e < 0}
        if 0 in den and n not in den:
            spec = spec_from_bvector(cur)
            spec.validate_for(n)
            return qshift, spec, params.rotated(step)
        qshift -= cur[-1]
        cur = [cur[-1]] + cur[:-1]
    raise UsageError("no rotation brings the monomial into first-layer position")


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All orderings of `parts` positive integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def iter_canonical_specs(n: int, max_m: int = 2,
                         include_empty: bool = True) -> Iterator[MonomialSpec]:
    """Every canonical monomial spec with at most max_m denominator indices."""
    if include_empty:
        yield EMPTY_SPEC
    for m in range(1, max_m + 1):
        for rest in itertools.combinations(range(1, n), m - 1):
            i_set = (0,) + rest
            avail = [j for j in range(1, n + 1) if j not in i_set]
            for nu in range(1, min(m, len(avail)) + 1):
                for j_list in itertools.combinations(avail, nu):
                    for p in compositions(m, nu):
                        yield MonomialSpec(i_set, j_list, p)
