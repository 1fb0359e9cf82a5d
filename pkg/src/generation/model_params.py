"""
Model Parameters
Scalars of the four semi-random planted models and the adversary menu
"""

import math
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional

from utils.errors import ParameterError


class ModelKind(str, Enum):
    EXP = 'Exp'
    EXP_REG = 'ExpReg'
    GAMMA = 'Gamma'
    GAMMA_REG = 'GammaReg'

    @property
    def is_regular(self) -> bool:
        return self in (ModelKind.EXP_REG, ModelKind.GAMMA_REG)

    @property
    def is_expander(self) -> bool:
        return self in (ModelKind.EXP, ModelKind.EXP_REG)

    @property
    def is_gamma(self) -> bool:
        return not self.is_expander


CORE_STYLES = ('regular', 'weighted_random')
OUTER_STYLES = ('expander', 'random', 'matching', 'empty')


@dataclass(frozen=True)
class ModelParams:
    """All scalars of one planted model.

    ``d`` is the planted average weighted degree (exact degree for regular
    kinds). ``d_prime`` and ``lam`` describe the outer expander of Exp kinds,
    ``gamma`` the outer density bound of Gamma kinds. ``xi`` and ``kappa`` are
    the spectral and probability-floor constants; ``p = delta * d / k``.
    """

    kind: ModelKind
    n: int
    k: int
    d: float
    delta: float
    d_prime: int = 0
    lam: float = 0.0
    gamma: float = 0.0
    xi: float = 2.0
    kappa: float = 1.0
    core_style: Optional[str] = None
    outer_style: Optional[str] = None

    def __post_init__(self):
        kind = self.kind if isinstance(self.kind, ModelKind) else _parse_kind(self.kind)
        object.__setattr__(self, 'kind', kind)
        if self.core_style is None:
            object.__setattr__(self, 'core_style', 'regular' if kind.is_regular else 'weighted_random')
        if self.outer_style is None:
            object.__setattr__(self, 'outer_style', 'expander' if kind.is_expander else 'random')

    @property
    def p(self) -> float:
        return self.delta * self.d / self.k

    @property
    def m(self) -> int:
        """Size of the outer part V \\ S"""
        return self.n - self.k

    @property
    def below_probability_floor(self) -> bool:
        """Advisory: p below kappa*log(n)/n, where high-probability claims are unproven"""
        return self.p < self.kappa * math.log(self.n) / self.n

    def validate(self) -> 'ModelParams':
        n, k, d = self.n, self.k, self.d
        if int(n) != n or int(k) != k:
            raise ParameterError(f"n and k must be integers, got n={n}, k={k}")
        if not 0 < k < n:
            raise ParameterError(f"Need 0 < k < n, got k={k}, n={n}")
        if not d > 0:
            raise ParameterError(f"d must be positive, got {d}")
        if not 0 < self.delta <= 1:
            raise ParameterError(f"delta must lie in (0, 1], got {self.delta}")
        if not 0 < self.p <= 1:
            raise ParameterError(f"p = delta*d/k = {self.p:.6g} must lie in (0, 1]")
        if self.xi <= 0 or self.kappa <= 0:
            raise ParameterError("xi and kappa must be positive")

        if self.core_style not in CORE_STYLES:
            raise ParameterError(f"Unknown core_style '{self.core_style}'")
        if self.kind.is_regular and self.core_style != 'regular':
            raise ParameterError(f"{self.kind.value} needs a regular core")
        if self.core_style == 'regular':
            if int(d) != d or d >= k or (k * int(d)) % 2:
                raise ParameterError(f"Regular core needs integer d < k with k*d even, got k={k}, d={d}")

        if self.kind.is_expander:
            if self.outer_style != 'expander':
                raise ParameterError(f"{self.kind.value} needs outer_style 'expander'")
            if int(self.d_prime) != self.d_prime:
                raise ParameterError(f"d_prime must be an integer, got {self.d_prime}")
            if not 0 <= self.lam < self.d_prime < self.m:
                raise ParameterError(
                    f"Need 0 <= lam < d_prime < n-k, got lam={self.lam}, d_prime={self.d_prime}, n-k={self.m}")
            if (self.m * int(self.d_prime)) % 2:
                raise ParameterError(f"(n-k)*d_prime must be even, got {self.m}*{self.d_prime}")
        else:
            if self.outer_style not in ('random', 'matching', 'empty'):
                raise ParameterError(f"{self.kind.value} outer_style must be random, matching or empty")
            if not self.gamma > 0:
                raise ParameterError(f"gamma must be positive, got {self.gamma}")
            if self.outer_style == 'matching' and self.gamma * d < 0.5:
                raise ParameterError(f"A matching has density 1/2 > gamma*d = {self.gamma * d:.6g}")
        return self

    def with_updates(self, **changes: Any) -> 'ModelParams':
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['kind'] = self.kind.value
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ModelParams':
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known - {'p'}
        if unknown:
            raise ParameterError(f"Unknown model parameters: {sorted(unknown)}")
        if 'kind' not in data:
            raise ParameterError("Model parameters need a 'kind'")
        return cls(**{key: value for key, value in data.items() if key in known})


def _parse_kind(value: Any) -> ModelKind:
    try:
        return ModelKind(value)
    except ValueError:
        raise ParameterError(f"Unknown model kind {value!r}; expected one of "
                             f"{[k.value for k in ModelKind]}") from None


ADVERSARY_STRATEGIES = ('none', 'random_fraction', 'target_high_degree')


@dataclass(frozen=True)
class AdversarySpec:
    """Monotone adversary choice: deletions only among logged cross and outer edges"""

    strategy: str = 'none'
    q_cross: float = 0.0
    q_outer: float = 0.0
    count: int = 0
    seed: int = 0

    def validate(self) -> 'AdversarySpec':
        if self.strategy not in ADVERSARY_STRATEGIES:
            raise ParameterError(f"Unknown adversary strategy '{self.strategy}'")
        for name in ('q_cross', 'q_outer'):
            q = getattr(self, name)
            if not 0 <= q <= 1:
                raise ParameterError(f"{name} must lie in [0, 1], got {q}")
        if self.count < 0:
            raise ParameterError(f"count must be non-negative, got {self.count}")
        return self

    @classmethod
    def none(cls) -> 'AdversarySpec':
        return cls()

    @classmethod
    def delete_all_cross(cls, seed: int = 0) -> 'AdversarySpec':
        return cls('random_fraction', q_cross=1.0, q_outer=0.0, seed=seed)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> 'AdversarySpec':
        data = dict(data or {})
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ParameterError(f"Unknown adversary fields: {sorted(unknown)}")
        return cls(**data).validate()
