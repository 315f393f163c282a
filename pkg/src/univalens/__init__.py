"""Numerical univalence criteria, the Loewner chains behind them, and
quasiconformal extensions of the integral operator F_beta."""

__version__ = "0.1.0"

from .criteria import (  # noqa: E402
    CriterionSpec,
    FirstCenter,
    GridSpec,
    Variant,
    check_criterion,
    schwarzian,
    sup_search,
)
from .expr import eval_jet, parse  # noqa: E402
from .loewner import ChainParams, chain_value, transfer_G, transfer_w_p, verify_chain  # noqa: E402
from .qcext import ExtensionMap, check_qc_criterion, estimate_k, univalence_evidence  # noqa: E402
from .quad import integral_operator  # noqa: E402

__all__ = [
    "ChainParams",
    "CriterionSpec",
    "ExtensionMap",
    "FirstCenter",
    "GridSpec",
    "Variant",
    "chain_value",
    "check_criterion",
    "check_qc_criterion",
    "estimate_k",
    "eval_jet",
    "integral_operator",
    "parse",
    "schwarzian",
    "sup_search",
    "transfer_G",
    "transfer_w_p",
    "univalence_evidence",
    "verify_chain",
]
