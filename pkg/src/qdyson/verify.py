"""Verification sweeps: every identity in the package checked exhaustively
at desk scale, with one report per suite.

Each suite enumerates instances, runs a pure per-instance check (optionally
in parallel worker processes), and aggregates failures sorted by instance
key, so reports are byte-identical regardless of scheduling.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .closed_forms import (
    check_lemma26,
    cor14_rhs,
    cor15_rhs,
    cor16_rhs,
    lemma51_check,
    main_rhs,
    mainlemma2_rhs,
    special_a0_values,
    zb_rhs,
)
from .dyson import (
    DysonParams,
    MonomialSpec,
    brute_ct,
    build_dyson,
    iter_canonical_specs,
    pi_action,
)
from .errors import UsageError
from .gx import TERMINAL, BranchTrace, gx_ct, k_star, special_h
from .laurent import Monomial, ct_in_vars, lp_mul_monomial, q_coeffs
from .qseries import QPoly, QRat


@dataclass
class SuiteReport:
    suite: str
    instances: int
    failures: list[str] = field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "instances": self.instances,
            "failures": len(self.failures),
            "first_failure": self.failures[0] if self.failures else None,
            "elapsed_ms": self.elapsed_ms,
        }

    def summary(self) -> str:
        state = "pass" if self.passed else f"FAIL ({len(self.failures)} failures)"
        out = f"suite {self.suite}: {self.instances} instances, {state}, {self.elapsed_ms} ms"
        if self.failures:
            out += "\n  first failure: " + self.failures[0]
        return out


def _a_vectors(n: int, max_a: int, with_a0: bool = True):
    length = n + 1 if with_a0 else n
    return itertools.product(range(max_a + 1), repeat=length)


def _run(name, check, instances, jobs: int) -> SuiteReport:
    t0 = time.perf_counter()
    failures: list[str] = []
    count = 0
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for fails in pool.map(check, instances, chunksize=4):
                count += 1
                failures.extend(fails)
    else:
        for inst in instances:
            count += 1
            failures.extend(check(inst))
    failures.sort()
    return SuiteReport(name, count, failures, int((time.perf_counter() - t0) * 1000))


# -- per-instance checks (top level so worker processes can import them) --------


def _check_zb(args) -> list[str]:
    n, a = args
    params = DysonParams(n, a)
    got = QRat(brute_ct(params))
    want = zb_rhs(params)
    if got != want:
        return [f"zb n={n} a={a}: {got.render()} != {want.render()}"]
    return []


def _check_main(args) -> list[str]:
    n, a = args
    params = DysonParams(n, a)
    dyson = build_dyson(params)
    out = []
    for spec in iter_canonical_specs(n, 2):
        got = QRat(brute_ct(params, spec, dyson=dyson))
        want = main_rhs(params, spec)
        if got != want:
            out.append(f"main n={n} a={a} spec={spec}: {got.render()} != {want.render()}")
    return out


def _check_corollaries(args) -> list[str]:
    n, a = args
    params = DysonParams(n, a)
    out = []
    for r in range(1, n + 1):
        spec = MonomialSpec((0,), (r,), (1,))
        if cor14_rhs(params, r) != main_rhs(params, spec):
            out.append(f"cor14 n={n} a={a} r={r}")
    for t in range(1, n):
        for r in range(t + 1, n + 1):
            spec = MonomialSpec((0, t), (r,), (2,))
            if cor15_rhs(params, r, t) != main_rhs(params, spec):
                out.append(f"cor15 n={n} a={a} r={r} t={t}")
    for r in range(1, n + 1):
        for s in range(r + 1, n + 1):
            for t in range(1, s):
                if t == r or t == s:
                    continue
                spec = MonomialSpec(tuple(sorted((0, t))), (r, s), (1, 1))
                if cor16_rhs(params, r, s, t) != main_rhs(params, spec):
                    out.append(f"cor16 n={n} a={a} r={r} s={s} t={t}")
    return out


def _check_lemma26(args) -> list[str]:
    n, a_rest = args
    params = DysonParams(n, (0,) + a_rest)
    out = []
    for spec in iter_canonical_specs(n, 2, include_empty=False):
        for a0 in range(0, -(params.a_sum + 2), -1):
            if not check_lemma26(params, spec, a0):
                out.append(f"lemma26 n={n} a={a_rest} spec={spec} a0={a0}")
    return out


def _check_lemma34(a_vec) -> list[str]:
    from .gx import lemma34_check

    if not lemma34_check(a_vec):
        return [f"lemma34 a={a_vec}"]
    return []


def _check_lemma51(w_vec) -> list[str]:
    if not lemma51_check(w_vec):
        return [f"lemma51 w={w_vec}"]
    return []


def _check_gx(args) -> list[str]:
    n, a_rest = args
    params = DysonParams(n, (0,) + a_rest)
    a = params.a_sum
    out = []
    for spec in iter_canonical_specs(n, 2, include_empty=False):
        specials = special_a0_values(params, spec)
        for h in range(1, a + 2):
            trace: list[BranchTrace] = []
            got = gx_ct(spec, params, h, trace=trace)
            at_point = params.with_a0(-h)
            want = main_rhs(at_point, spec)
            if got != want:
                out.append(f"gx n={n} a={a_rest} spec={spec} h={h}: "
                           f"{got.render()} != {want.render()}")
                continue
            qualifying = specials.get(-h, [])
            if not qualifying and not got.is_zero():
                out.append(f"gx nonzero off special point n={n} a={a_rest} "
                           f"spec={spec} h={h}")
            if qualifying:
                if got != mainlemma2_rhs(at_point, spec):
                    out.append(f"gx vs special-point sum n={n} a={a_rest} "
                               f"spec={spec} h={h}")
                survivors = {(t.r, t.k) for t in trace if t.status == TERMINAL}
                predicted = {k_star(T, params) for T in qualifying}
                if survivors != predicted:
                    out.append(f"gx survivors {sorted(survivors)} != predicted "
                               f"{sorted(predicted)} n={n} a={a_rest} spec={spec} h={h}")
            for t in trace:
                if t.degree is not None and t.degree != t.expected_degree:
                    out.append(f"gx degree {t.degree} != {t.expected_degree} at "
                               f"r={t.r} k={t.k} n={n} a={a_rest} spec={spec} h={h}")
    return out


def _random_zero_monomial(rng: random.Random, nx: int) -> Monomial:
    xs = [rng.randint(-2, 2) for _ in range(nx - 1)]
    xs.append(-sum(xs))
    return Monomial(1, 0, tuple(xs))


def _check_pi(args) -> list[str]:
    n, a = args
    params = DysonParams(n, a)
    dyson = build_dyson(params)
    rotated = build_dyson(params.rotated())
    out = []
    if pi_action(dyson) != rotated:
        out.append(f"pi operator identity n={n} a={a}")
    rng = random.Random(hash((n, a)) & 0xFFFFFFFF)
    for _ in range(50):
        L = _random_zero_monomial(rng, params.nx)
        lhs = ct_in_vars(lp_mul_monomial(dyson, L), range(params.nx))
        piL = Monomial(L.coeff, L.q_exp - L.xs[-1], (L.xs[-1],) + L.xs[:-1])
        rhs = ct_in_vars(lp_mul_monomial(rotated, piL), range(params.nx))
        if QPoly.from_pairs(q_coeffs(lhs)) != QPoly.from_pairs(q_coeffs(rhs)):
            out.append(f"pi CT invariance n={n} a={a} L={L}")
            break
    return out


# -- suite drivers -----------------------------------------------------------


def suite_zb(max_n=3, max_a=2, jobs=1) -> SuiteReport:
    inst = [(n, a) for n in range(1, max_n + 1) for a in _a_vectors(n, max_a)]
    return _run("zb", _check_zb, inst, jobs)


def suite_main(max_n=3, max_a=2, jobs=1) -> SuiteReport:
    inst = [(n, a) for n in range(1, max_n + 1) for a in _a_vectors(n, max_a)]
    return _run("main", _check_main, inst, jobs)


def suite_corollaries(max_n=3, max_a=2, jobs=1) -> SuiteReport:
    inst = [(n, a) for n in range(1, max_n + 1) for a in _a_vectors(n, max_a)]
    return _run("corollaries", _check_corollaries, inst, jobs)


def suite_lemma26(max_n=3, max_a=2, jobs=1) -> SuiteReport:
    inst = [(n, a) for n in range(1, max_n + 1)
            for a in _a_vectors(n, max_a, with_a0=False)]
    return _run("lemma26", _check_lemma26, inst, jobs)


def suite_lemma34(max_n=4, max_a=3, jobs=1) -> SuiteReport:
    inst = [a for s in range(1, max_n + 1)
            for a in itertools.product(range(max_a + 1), repeat=s)]
    return _run("lemma34", _check_lemma34, inst, jobs)


def suite_lemma51(max_n=3, max_a=2, jobs=1) -> SuiteReport:
    inst = [w for n in range(1, max_n + 1)
            for w in itertools.product(range(max_a + 1), repeat=n)]
    return _run("lemma51", _check_lemma51, inst, jobs)


def suite_gx(max_n=3, max_a=2, jobs=1) -> SuiteReport:
    inst = [(n, a) for n in range(1, max_n + 1)
            for a in _a_vectors(n, max_a, with_a0=False)]
    return _run("gx", _check_gx, inst, jobs)


def suite_pi(max_n=3, max_a=2, jobs=1) -> SuiteReport:
    inst = [(n, a) for n in range(1, max_n + 1) for a in _a_vectors(n, max_a)]
    return _run("pi", _check_pi, inst, jobs)


SUITES = {
    "zb": suite_zb,
    "main": suite_main,
    "corollaries": suite_corollaries,
    "lemma26": suite_lemma26,
    "lemma34": suite_lemma34,
    "lemma51": suite_lemma51,
    "gx": suite_gx,
    "pi": suite_pi,
}


def run_suite(name: str, max_n=None, max_a=None, jobs=1) -> SuiteReport:
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    kwargs = {"jobs": jobs}
    if max_n is not None:
        kwargs["max_n"] = max_n
    if max_a is not None:
        kwargs["max_a"] = max_a
    return SUITES[name](**kwargs)
