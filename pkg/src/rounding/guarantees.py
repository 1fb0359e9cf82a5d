"""
Recovery Guarantees
Closed-form eta / eta' and the resulting alpha and bound for each model kind
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional

from generation.model_params import ModelKind, ModelParams
from utils.errors import ParameterError


@dataclass(frozen=True)
class GuaranteeParams:
    """eta (eta' for regular kinds), threshold multiplier alpha and the recovery bound.

    ``bound`` is nu/tau for Exp/Gamma kinds and nu'/tau' for regular kinds;
    the guarantee is usable only when ``valid`` (bound strictly inside (0, 1)).
    """

    kind: ModelKind
    eta: float
    alpha: float
    bound: float
    valid: bool
    bracket: Optional[float] = None
    eta_statement_variant: Optional[float] = None
    bound_statement_variant: Optional[float] = None
    overridden: bool = False

    @property
    def threshold_level(self) -> float:
        """1 - alpha*eta, the squared-norm cut used to build T"""
        if self.eta == 0:
            return 1.0
        return 1.0 - self.alpha * self.eta

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'eta': self.eta,
            'alpha': self.alpha,
            'bound': self.bound,
            'valid': self.valid,
            'bracket': self.bracket,
            'eta_statement_variant': self.eta_statement_variant,
            'bound_statement_variant': self.bound_statement_variant,
            'overridden': self.overridden,
        }


def _spectral_term(params: ModelParams) -> float:
    return params.xi * math.sqrt(params.delta * params.n / (params.d * params.k))


def compute_eta(params: ModelParams) -> float:
    if params.kind == ModelKind.EXP:
        outer = params.lam / params.d + params.d_prime * params.k / ((params.n - params.k) * params.d)
    elif params.kind == ModelKind.GAMMA:
        outer = 2.0 * params.gamma
    else:
        raise ParameterError(f"compute_eta applies to Exp and Gamma, not {params.kind.value}")
    return 6.0 * params.delta + _spectral_term(params) + outer


def eta_prime_bracket(params: ModelParams) -> float:
    if params.kind == ModelKind.EXP_REG:
        outer = params.lam / params.d + params.d_prime * params.k / ((params.n - params.k) * params.d)
    elif params.kind == ModelKind.GAMMA_REG:
        outer = 2.0 * params.gamma
    else:
        raise ParameterError(f"eta' applies to ExpReg and GammaReg, not {params.kind.value}")
    return 1.0 - outer - 6.0 * params.delta


def compute_eta_prime(params: ModelParams, statement_variant: bool = False) -> float:
    """1 / (1 + (dk / (4 xi^2 delta n)) * bracket^2).

    ``statement_variant`` drops the n from the denominator, the form quoted
    in the regular-model recovery statements.
    """
    bracket = eta_prime_bracket(params)
    scale = params.d * params.k / (4.0 * params.xi ** 2 * params.delta)
    if not statement_variant:
        scale /= params.n
    return 1.0 / (1.0 + scale * bracket ** 2)


def _bound_and_alpha(kind: ModelKind, eta: float):
    if eta < 0:
        raise ParameterError(f"eta must be non-negative, got {eta}")
    if kind.is_regular:
        bound = 5.0 * math.sqrt(eta)
        alpha = 2.0 / math.sqrt(eta) if eta > 0 else math.inf
    else:
        bound = 2.0 * math.sqrt(3.0 * eta)
        alpha = 1.0 / math.sqrt(3.0 * eta) if eta > 0 else math.inf
    return bound, alpha


def guarantee_bounds(params: ModelParams, eta_override: Optional[float] = None) -> GuaranteeParams:
    kind = params.kind
    bracket = statement_eta = statement_bound = None

    if kind.is_regular:
        bracket = eta_prime_bracket(params)
        eta = compute_eta_prime(params) if eta_override is None else float(eta_override)
        statement_eta = compute_eta_prime(params, statement_variant=True)
        statement_bound = 5.0 * math.sqrt(statement_eta)
    else:
        eta = compute_eta(params) if eta_override is None else float(eta_override)

    bound, alpha = _bound_and_alpha(kind, eta)
    valid = 0.0 < bound < 1.0
    if kind.is_regular and eta_override is None and bracket <= 0:
        valid = False

    return GuaranteeParams(
        kind=kind,
        eta=eta,
        alpha=alpha,
        bound=bound,
        valid=valid,
        bracket=bracket,
        eta_statement_variant=statement_eta,
        bound_statement_variant=statement_bound,
        overridden=eta_override is not None,
    )
