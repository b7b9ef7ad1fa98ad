"""Exact arithmetic for special L-values of rank-2 Drinfeld modules over F_q[T].

The main entry points are :func:`verify_theorem` (Euler product of the
twisted tensor module against the closed form), :class:`DrinfeldRank2`,
:class:`TensorModule` and :func:`taelman_l_value`.
"""

from .carlitz import carlitz_D, carlitz_L, carlitz_gamma, polylog_eval, zeta_truncated
from .drinfeld import (DrinfeldRank2, ShadowedPartition, drinfeld_log_eval, ft_gamma, gamma_recursive,
                       shadowed_partitions, twist)
from .euler import (EulerReport, goss_factor_motive, goss_l_value, taelman_factor, taelman_l_value,
                    trivial_l_value)
from .laurent import LaurentSeries, agreement_order
from .motive import DualMotive, MotiveElement, delta0_iota, inverse_frob_poly, phi1_vectors, w_basis_check
from .poly import Frac, PolyA
from .theorem import (PreconditionError, VerificationReport, log_eval_drinfeld_check, rhs_theorem,
                      verify_theorem)
from .tmodule import TensorModule

__version__ = "0.1.0"

__all__ = [
    "DrinfeldRank2", "DualMotive", "EulerReport", "Frac", "LaurentSeries", "MotiveElement", "PolyA",
    "PreconditionError", "ShadowedPartition", "TensorModule", "VerificationReport", "agreement_order",
    "carlitz_D", "carlitz_L", "carlitz_gamma", "delta0_iota", "drinfeld_log_eval", "ft_gamma",
    "gamma_recursive", "goss_factor_motive", "goss_l_value", "inverse_frob_poly", "log_eval_drinfeld_check",
    "phi1_vectors", "polylog_eval", "rhs_theorem", "shadowed_partitions", "taelman_factor", "taelman_l_value",
    "trivial_l_value", "twist", "verify_theorem", "w_basis_check", "zeta_truncated",
]
