"""
Contexte partagé des estimations métriques : champ, seuil δ0, table f(δ)
et mémoïsation des bornes inférieures de Λ.
"""

import logging
import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from ..core.exceptions import InvalidArgument
from ..potentials.base import PotentialField
from ..stockyard.bounds import DEFAULT_MC_SAMPLES, lambda_lower
from ..stockyard.optimizer import STRATEGIES
from ..ugs.report import FRow, UgsReport

logger = logging.getLogger("ccball.metric")

DEFAULT_DELTA_CAP = 1e4
DEFAULT_CACHE_SIZE = 4096


@dataclass(frozen=True, eq=False)
class MetricContext:
    """
    Contexte immuable ; seul le cache LRU des bornes de Λ évolue, sous verrou.

    Quand f_table est fournie, Λ_lower(z0, δ) est interpolée en log-log
    sur la table pour δ dans son intervalle (structure uniforme en z0) ;
    ailleurs elle est calculée par l'optimiseur de stockyards.
    """

    field: PotentialField
    delta0: float = 1.0
    f_table: Tuple[FRow, ...] = ()
    m: int = 2
    budget: int = 1_000_000
    seed: int = 0
    mc_samples: int = DEFAULT_MC_SAMPLES
    strategy: str = "best"
    delta_cap: float = DEFAULT_DELTA_CAP
    cache_size: int = DEFAULT_CACHE_SIZE
    _cache: "OrderedDict[Tuple[complex, float], float]" = field(
        default_factory=OrderedDict, init=False, repr=False
    )
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def __post_init__(self):
        if not (self.delta0 > 0 and math.isfinite(self.delta0)):
            raise InvalidArgument(f"delta0 must be positive, got {self.delta0}")
        if not self.delta_cap > 0:
            raise InvalidArgument(f"delta_cap must be positive, got {self.delta_cap}")
        if self.cache_size < 1:
            raise InvalidArgument(f"cache_size must be at least 1, got {self.cache_size}")
        if self.m < 2:
            raise InvalidArgument(f"type order m must be >= 2, got {self.m}")
        if self.strategy not in STRATEGIES:
            raise InvalidArgument(f"unknown strategy '{self.strategy}'")
        rows = tuple(self.f_table)
        deltas = [r.delta for r in rows]
        if any(b <= a for a, b in zip(deltas, deltas[1:])):
            raise InvalidArgument("f_table deltas must be strictly increasing")
        for r in rows:
            if r.delta >= self.delta0 and not r.lower > 0:
                raise InvalidArgument(f"f_table lower bound at delta={r.delta} must be positive")
        object.__setattr__(self, "f_table", rows)

    @classmethod
    def from_report(cls, field: PotentialField, report: UgsReport, **kwargs) -> "MetricContext":
        """Contexte utilisant la table f(δ) et le δ0 d'un rapport fit_ugs."""
        kwargs.setdefault("delta0", report.delta0 or 1.0)
        return cls(field=field, f_table=tuple(report.f_table), **kwargs)

    def _from_table(self, delta: float) -> Optional[float]:
        rows = [r for r in self.f_table if r.lower > 0]
        if len(rows) < 2 or not rows[0].delta <= delta <= rows[-1].delta:
            return None
        x = np.log([r.delta for r in rows])
        y = np.log([r.lower for r in rows])
        return float(np.exp(np.interp(math.log(delta), x, y)))

    def lambda_lower(self, z0: complex, delta: float) -> float:
        """Borne inférieure de Λ(z0, δ), mémoïsée ; Λ(z0, 0) = 0."""
        if delta < 0:
            raise InvalidArgument(f"delta must be nonnegative, got {delta}")
        if delta == 0:
            return 0.0
        key = (complex(z0), float(delta))
        with self._lock:
            if key in self._cache:
                self._cache.move_to_end(key)
                return self._cache[key]

        value = self._from_table(delta)
        if value is None:
            value = lambda_lower(self.field, key[0], key[1], self.budget, self.seed,
                                 self.strategy, self.mc_samples)

        with self._lock:
            value = self._cache.setdefault(key, value)
            self._cache.move_to_end(key)
            while len(self._cache) > self.cache_size:
                self._cache.popitem(last=False)
            return value

    def cached(self) -> int:
        with self._lock:
            return len(self._cache)
