"""Exact constant terms of the q-Dyson product.

Three independent evaluation routes over exact integer arithmetic:

* brute force -- expand the product and filter the constant term;
* closed forms -- the explicit coefficient formulas;
* partial fractions -- branch-and-prune extraction in the iterated
  Laurent field for the deformed product Q(h) at negative first parameter.

The routes cross-check each other; the ``qdyson`` CLI exposes single
computations (``ct``) and verification sweeps (``verify``).
"""

from .dyson import (
    EMPTY_SPEC,
    DysonParams,
    MonomialSpec,
    brute_ct,
    build_dyson,
    iter_canonical_specs,
    pi_action,
    rotate_reduce,
    spec_from_bvector,
)
from .closed_forms import (
    SubsetContext,
    L_of_T,
    Lstar_of_T,
    check_lemma26,
    cor14_rhs,
    cor15_rhs,
    cor16_rhs,
    dyson_rhs_q1,
    lemma51_check,
    main_rhs,
    main_rhs_q1,
    mainlemma2_rhs,
    special_a0_values,
    zb_rhs,
)
from .errors import InternalError, UsageError
from .gx import (
    BinomFactor,
    BranchTrace,
    RatLaurent,
    branch_value,
    build_Q,
    classify,
    ct_extract,
    degree_in,
    E_subst,
    gx_ct,
    k_star,
    lemma34_check,
    r_star,
    special_h,
)
from .laurent import (
    LaurentPoly,
    Monomial,
    ct_in_vars,
    lp_add,
    lp_mul,
    lp_subst_monomial,
    mono,
    pochhammer_monomial,
    ratio_mono,
)
from .qseries import (
    QPoly,
    QRat,
    eval_at_one,
    qbinom,
    qpoch,
    qpoch_at,
    qpoch_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "BinomFactor", "BranchTrace", "DysonParams", "EMPTY_SPEC", "InternalError",
    "LaurentPoly", "L_of_T", "Lstar_of_T", "Monomial", "MonomialSpec", "QPoly",
    "QRat", "RatLaurent", "SubsetContext", "UsageError", "branch_value",
    "brute_ct", "build_Q", "build_dyson", "check_lemma26", "classify",
    "cor14_rhs", "cor15_rhs", "cor16_rhs", "ct_extract", "ct_in_vars",
    "degree_in", "dyson_rhs_q1", "E_subst", "eval_at_one", "gx_ct",
    "iter_canonical_specs", "k_star", "lemma34_check", "lemma51_check",
    "lp_add", "lp_mul", "lp_subst_monomial", "main_rhs", "main_rhs_q1",
    "mainlemma2_rhs", "mono", "pi_action", "pochhammer_monomial", "qbinom",
    "qpoch", "qpoch_at", "qpoch_ratio", "r_star", "ratio_mono",
    "rotate_reduce", "spec_from_bvector", "special_a0_values", "special_h",
    "zb_rhs",
]
