# SPDX-License-Identifier: Apache-2.0

"""
Deterministic randomness, estimators and hypothesis tests shared by all
experiments.

Stream derivation algorithm (stable across versions):
    key = first 16 bytes, big endian, of
          SHA-256("sha256-philox4x64|<master_seed>|<label>|<index>")
    stream = numpy.random.Generator(numpy.random.Philox(key=key))

Philox is a counter-based generator, the key alone fixes the whole stream,
so distinct (label, index) pairs give independent streams no matter which
thread consumes them or in which order.
"""

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.stats import norm

from errors import InvalidStreamSpecError, ValidationError, ZeroTrialsError
from logger import configure_logger
from spin_core import JointDistribution

LOGGER = configure_logger(__name__)

STREAM_ALGORITHM = "sha256-philox4x64"
MAX_SEED = 2 ** 64
# Below this sample size the normal approximation used by z_test is not
# trusted by the experiments.
NORMAL_APPROXIMATION_FLOOR = 10_000


@dataclass(frozen=True)
class StreamSpec:
    master_seed: int
    label: str
    index: int = 0

    def __post_init__(self):
        if not isinstance(self.master_seed, (int, np.integer)) or not (
            0 <= self.master_seed < MAX_SEED
        ):
            raise InvalidStreamSpecError(
                f"Master seed {self.master_seed!r} must be an integer in "
                "[0, 2**64)"
            )
        if not isinstance(self.index, (int, np.integer)) or self.index < 0:
            raise InvalidStreamSpecError(
                f"Stream index {self.index!r} must be a non-negative integer"
            )

    @property
    def stream_id(self) -> Tuple[str, int]:
        return (self.label, int(self.index))

    def key(self) -> int:
        material = (
            f"{STREAM_ALGORITHM}|{int(self.master_seed)}|"
            f"{self.label}|{int(self.index)}"
        )
        digest = hashlib.sha256(material.encode("utf-8")).digest()
        return int.from_bytes(digest[:16], "big")


def derive_stream(spec: StreamSpec) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=spec.key()))


@dataclass(frozen=True)
class CorrelationEstimate:
    """
    Mean of +/-1 products with its standard error
    sqrt((1 - estimate^2) / trials), and the exact value when one is known.
    """
    estimate: float
    trials: int
    exact: Optional[float] = None
    stderr: float = field(init=False)

    def __post_init__(self):
        if self.trials <= 0:
            raise ZeroTrialsError("A correlation estimate needs trials > 0")
        object.__setattr__(
            self,
            "stderr",
            math.sqrt(max(0.0, 1.0 - self.estimate ** 2) / self.trials),
        )

    def z_score(self, expected: float) -> float:
        if self.stderr == 0.0:
            return 0.0 if math.isclose(
                self.estimate, expected, abs_tol=1e-12,
            ) else math.copysign(math.inf, self.estimate - expected)
        return (self.estimate - expected) / self.stderr

    def deviation(self) -> Optional[float]:
        if self.exact is None:
            return None
        return abs(self.estimate - self.exact)

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "trials": self.trials,
            "exact": self.exact,
        }


def correlation_from_counts(
    n_pp: int,
    n_pm: int,
    n_mp: int,
    n_mm: int,
    exact: Optional[float] = None,
) -> CorrelationEstimate:
    counts = (n_pp, n_pm, n_mp, n_mm)
    if any(count < 0 for count in counts):
        raise ValidationError(f"Outcome counts {counts} must be non-negative")
    total = sum(counts)
    if total <= 0:
        raise ZeroTrialsError("Cannot estimate a correlation from 0 trials")
    return CorrelationEstimate(
        estimate=(n_pp - n_pm - n_mp + n_mm) / total,
        trials=total,
        exact=exact,
    )


def z_test(estimate: CorrelationEstimate, expected: float) -> float:
    """
    Two-sided normal p-value of the estimate against the expected value.
    A zero standard error turns this into an exact comparison: 1.0 when the
    values agree, 0.0 otherwise.
    """
    if estimate.stderr == 0.0:
        return 1.0 if math.isclose(
            estimate.estimate, expected, abs_tol=1e-12,
        ) else 0.0
    z_value = (estimate.estimate - expected) / estimate.stderr
    return float(min(1.0, 2.0 * norm.sf(abs(z_value))))


def wilson_interval(
    successes: int,
    trials: int,
    confidence: float = 0.95,
) -> Tuple[float, float]:
    if trials <= 0:
        raise ZeroTrialsError("A Wilson interval needs trials > 0")
    if not 0 <= successes <= trials:
        raise ValidationError(
            f"Successes {successes} must lie in [0, {trials}]"
        )
    if not 0.0 < confidence < 1.0:
        raise ValidationError(f"Confidence {confidence} must lie in (0, 1)")

    z_value = float(norm.ppf(0.5 + confidence / 2.0))
    proportion = successes / trials
    z_squared = z_value * z_value
    denominator = 1.0 + z_squared / trials
    center = (proportion + z_squared / (2.0 * trials)) / denominator
    half_width = z_value * math.sqrt(
        proportion * (1.0 - proportion) / trials
        + z_squared / (4.0 * trials * trials)
    ) / denominator
    lower = 0.0 if successes == 0 else max(0.0, center - half_width)
    upper = 1.0 if successes == trials else min(1.0, center + half_width)
    return lower, upper


def binomial_tolerance(
    probability: float,
    trials: int,
    sigmas: float = 5.0,
) -> float:
    """sigmas * sqrt(p (1 - p) / N), the per-cell Monte-Carlo tolerance."""
    if trials <= 0:
        raise ZeroTrialsError("A binomial tolerance needs trials > 0")
    return sigmas * math.sqrt(
        max(0.0, probability * (1.0 - probability)) / trials
    )


@dataclass(frozen=True)
class JointCounts:
    """Counts of the four outcome pairs, first sign is Alice's."""
    n_pp: int = 0
    n_pm: int = 0
    n_mp: int = 0
    n_mm: int = 0

    @classmethod
    def from_outcomes(cls, alice: np.ndarray, bob: np.ndarray) -> "JointCounts":
        alice_plus = alice > 0
        bob_plus = bob > 0
        return cls(
            n_pp=int(np.count_nonzero(alice_plus & bob_plus)),
            n_pm=int(np.count_nonzero(alice_plus & ~bob_plus)),
            n_mp=int(np.count_nonzero(~alice_plus & bob_plus)),
            n_mm=int(np.count_nonzero(~alice_plus & ~bob_plus)),
        )

    def __add__(self, other: "JointCounts") -> "JointCounts":
        return JointCounts(
            self.n_pp + other.n_pp,
            self.n_pm + other.n_pm,
            self.n_mp + other.n_mp,
            self.n_mm + other.n_mm,
        )

    @property
    def total(self) -> int:
        return self.n_pp + self.n_pm + self.n_mp + self.n_mm

    @property
    def alice_plus(self) -> int:
        return self.n_pp + self.n_pm

    @property
    def alice_minus(self) -> int:
        return self.n_mp + self.n_mm

    @property
    def bob_plus(self) -> int:
        return self.n_pp + self.n_mp

    @property
    def opposite(self) -> int:
        return self.n_pm + self.n_mp

    @property
    def sum_of_products(self) -> int:
        return self.n_pp - self.n_pm - self.n_mp + self.n_mm

    def correlation(self, exact: Optional[float] = None) -> CorrelationEstimate:
        return correlation_from_counts(
            self.n_pp, self.n_pm, self.n_mp, self.n_mm, exact=exact,
        )

    def frequencies(self) -> JointDistribution:
        total = self.total
        if total <= 0:
            raise ZeroTrialsError("No trials were counted")
        return JointDistribution(
            self.n_pp / total,
            self.n_pm / total,
            self.n_mp / total,
            self.n_mm / total,
        )

    def to_dict(self) -> dict:
        return {
            "n_pp": self.n_pp,
            "n_pm": self.n_pm,
            "n_mp": self.n_mp,
            "n_mm": self.n_mm,
        }
