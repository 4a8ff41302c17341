# SPDX-License-Identifier: Apache-2.0

"""
Report structures produced by the experiments.

Every report offers to_dict() for JSON, and summary() with the human
readable lines the table format prints under the data. The sweep report
also offers columns() and table() for its CSV/table layout; the other
reports are flattened into field,value rows by the output module.
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

from spin_core import Direction, JointDistribution
from stats import CorrelationEstimate, JointCounts

SCHEMA_VERSION = 1


def _direction(direction: Direction) -> List[float]:
    return [direction.x, direction.y, direction.z]


@dataclass(frozen=True)
class InequalityReport:
    trials: int
    assignment: str
    a: Direction
    b: Direction
    counts: JointCounts
    correlation_estimate: CorrelationEstimate
    quantum_estimate: CorrelationEstimate
    quantum_expected: float
    local_model_exact: float
    z_score: float
    p_value: float
    required_q_fraction: float
    paper_bound: float
    alice_agreement: float
    alice_agreement_interval: Tuple[float, float]
    bob_agreement: float
    bob_agreement_interval: Tuple[float, float]
    expected_alice_agreement: float
    expected_bob_agreement: float
    exclusion_threshold: float

    @property
    def count_alice_plus(self) -> int:
        return self.counts.alice_plus

    @property
    def count_alice_minus(self) -> int:
        return self.counts.alice_minus

    @property
    def count_q(self) -> int:
        """Alice +1, Bob -1."""
        return self.counts.n_pm

    @property
    def count_q_mirror(self) -> int:
        """Alice -1, Bob +1, the count the symmetric reading equates with Q."""
        return self.counts.n_mp

    @property
    def q_fraction(self) -> float:
        return self.count_q / self.trials

    @property
    def symmetric_q(self) -> float:
        return (self.count_q + self.count_q_mirror) / 2.0

    @property
    def identity_value(self) -> float:
        """P + N - 4 Q under the symmetric reading of Q."""
        return (
            self.count_alice_plus + self.count_alice_minus
            - 4.0 * self.symmetric_q
        )

    @property
    def identity_holds(self) -> bool:
        return self.counts.sum_of_products == self.identity_value

    @property
    def local_model_excluded(self) -> bool:
        return self.p_value < self.exclusion_threshold

    def verdict(self) -> str:
        if self.local_model_excluded:
            return (
                "PASS: local definite-aligned model excluded "
                f"(p={self.p_value:.3g} < {self.exclusion_threshold:g} "
                f"against correlation {round(self.quantum_expected, 6) + 0.0:g})"
            )
        return (
            "FAIL: local definite-aligned model not excluded "
            f"(p={self.p_value:.3g} >= {self.exclusion_threshold:g} "
            f"against correlation {round(self.quantum_expected, 6) + 0.0:g})"
        )

    def summary(self) -> List[str]:
        return [
            (
                "Zero correlation requires the Q outcome in "
                f"{self.required_q_fraction:.6f} of trials, while the "
                "consecutive law lets each station flip its predetermined "
                f"value in only sin^2(pi/8) = {self.paper_bound:.6f} of "
                "trials."
            ),
            (
                f"Station agreement with the predetermined values: Alice "
                f"{self.alice_agreement:.6f}, Bob {self.bob_agreement:.6f} "
                f"(expected {self.expected_alice_agreement:.6f} and "
                f"{self.expected_bob_agreement:.6f})."
            ),
            (
                f"Sum of products {self.counts.sum_of_products} "
                f"{'equals' if self.identity_holds else 'differs from'} "
                f"P + N - 4Q = {self.identity_value:g} with Q read "
                "symmetrically."
            ),
            self.verdict(),
        ]

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "assignment": self.assignment,
            "a": _direction(self.a),
            "b": _direction(self.b),
            "counts": self.counts.to_dict(),
            "count_alice_plus": self.count_alice_plus,
            "count_alice_minus": self.count_alice_minus,
            "count_q": self.count_q,
            "count_q_mirror": self.count_q_mirror,
            "count_bob_plus": self.counts.bob_plus,
            "correlation_estimate": self.correlation_estimate.to_dict(),
            "quantum_estimate": self.quantum_estimate.to_dict(),
            "quantum_expected": self.quantum_expected,
            "local_model_exact": self.local_model_exact,
            "z_score": self.z_score,
            "p_value": self.p_value,
            "q_fraction": self.q_fraction,
            "symmetric_q": self.symmetric_q,
            "required_q_fraction": self.required_q_fraction,
            "paper_bound": self.paper_bound,
            "sum_of_products": self.counts.sum_of_products,
            "identity_value": self.identity_value,
            "identity_holds": self.identity_holds,
            "alice_agreement": self.alice_agreement,
            "alice_agreement_interval": list(self.alice_agreement_interval),
            "bob_agreement": self.bob_agreement,
            "bob_agreement_interval": list(self.bob_agreement_interval),
            "expected_alice_agreement": self.expected_alice_agreement,
            "expected_bob_agreement": self.expected_bob_agreement,
            "exclusion_threshold": self.exclusion_threshold,
            "local_model_excluded": self.local_model_excluded,
            "test": "two-sided z-test, stderr sqrt((1 - E^2) / N)",
            "verdict": self.verdict(),
        }


@dataclass(frozen=True)
class SweepRow:
    angle: float
    estimate: CorrelationEstimate
    exact: float
    quantum_exact: float

    @property
    def angle_deg(self) -> float:
        return math.degrees(self.angle)


@dataclass(frozen=True)
class SweepReport:
    model: dict
    trials: int
    rows: Tuple[SweepRow, ...]

    def max_sigma_deviation(self) -> float:
        worst = 0.0
        for row in self.rows:
            deviation = abs(row.estimate.estimate - row.exact)
            stderr = max(
                row.estimate.stderr, 1.0 / math.sqrt(row.estimate.trials),
            )
            worst = max(worst, deviation / stderr)
        return worst

    @staticmethod
    def columns() -> List[str]:
        return ["angle_deg", "estimate", "stderr", "exact", "quantum_exact"]

    def table(self) -> List[List[float]]:
        return [
            [
                row.angle_deg,
                row.estimate.estimate,
                row.estimate.stderr,
                row.exact,
                row.quantum_exact,
            ]
            for row in self.rows
        ]

    def summary(self) -> List[str]:
        return [
            f"{len(self.rows)} angles, {self.trials} trials per angle, "
            f"largest deviation from exact {self.max_sigma_deviation():.2f} "
            "standard errors.",
        ]

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "trials": self.trials,
            "rows": [
                dict(zip(self.columns(), values)) for values in self.table()
            ],
        }


@dataclass(frozen=True)
class FrameReport:
    a: Direction
    b: Direction
    trials: int
    alice_first_counts: JointCounts
    bob_first_counts: JointCounts
    alice_first_estimate: CorrelationEstimate
    bob_first_estimate: CorrelationEstimate
    max_cell_deviation: float
    cell_tolerances: Tuple[float, float, float, float]
    history_divergence: float
    bob_history_divergence: float

    @property
    def alice_first(self) -> JointDistribution:
        return self.alice_first_counts.frequencies()

    @property
    def bob_first(self) -> JointDistribution:
        return self.bob_first_counts.frequencies()

    @property
    def observables_agree(self) -> bool:
        deviations = [
            abs(first - second)
            for first, second in zip(
                self.alice_first.cells(), self.bob_first.cells(),
            )
        ]
        return all(
            deviation < tolerance or deviation == 0.0
            for deviation, tolerance in zip(deviations, self.cell_tolerances)
        )

    def verdict(self) -> str:
        observable = "PASS" if self.observables_agree else "FAIL"
        return (
            f"{observable}: observable joint distributions agree across "
            f"orderings (max cell deviation {self.max_cell_deviation:.6f}); "
            "Alice's pre-measurement spin differs between orderings by "
            f"{self.history_divergence:.6f} rad on average."
        )

    def summary(self) -> List[str]:
        return [
            (
                "Opposite outcomes: "
                f"{self.alice_first_counts.opposite / self.trials:.6f} "
                "with Alice first, "
                f"{self.bob_first_counts.opposite / self.trials:.6f} "
                "with Bob first."
            ),
            self.verdict(),
        ]

    def to_dict(self) -> dict:
        return {
            "a": _direction(self.a),
            "b": _direction(self.b),
            "trials": self.trials,
            "alice_first": self.alice_first.to_dict(),
            "bob_first": self.bob_first.to_dict(),
            "alice_first_counts": self.alice_first_counts.to_dict(),
            "bob_first_counts": self.bob_first_counts.to_dict(),
            "alice_first_estimate": self.alice_first_estimate.to_dict(),
            "bob_first_estimate": self.bob_first_estimate.to_dict(),
            "max_cell_deviation": self.max_cell_deviation,
            "cell_tolerances": list(self.cell_tolerances),
            "observables_agree": self.observables_agree,
            "history_divergence": self.history_divergence,
            "bob_history_divergence": self.bob_history_divergence,
            "verdict": self.verdict(),
        }


@dataclass(frozen=True)
class NonSignalingReport:
    model: dict
    ordering: str
    a: Direction
    b1: Direction
    b2: Direction
    trials: int
    alice_plus_b1: int
    alice_plus_b2: int
    differing_trials: int
    tolerance: float

    @property
    def marginal_b1(self) -> float:
        return self.alice_plus_b1 / self.trials

    @property
    def marginal_b2(self) -> float:
        return self.alice_plus_b2 / self.trials

    @property
    def difference(self) -> float:
        return abs(self.marginal_b1 - self.marginal_b2)

    @property
    def bitwise_identical(self) -> bool:
        return self.differing_trials == 0

    @property
    def statistically_zero(self) -> bool:
        return self.difference < self.tolerance or self.difference == 0.0

    def verdict(self) -> str:
        status = "PASS" if self.statistically_zero else "FAIL"
        identical = (
            "bitwise identical" if self.bitwise_identical
            else f"differing in {self.differing_trials} trials"
        )
        return (
            f"{status}: Alice's marginal moves by {self.difference:.6f} "
            f"(tolerance {self.tolerance:.6f}); outcomes {identical}."
        )

    def summary(self) -> List[str]:
        return [self.verdict()]

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "ordering": self.ordering,
            "a": _direction(self.a),
            "b1": _direction(self.b1),
            "b2": _direction(self.b2),
            "trials": self.trials,
            "marginal_b1": self.marginal_b1,
            "marginal_b2": self.marginal_b2,
            "difference": self.difference,
            "tolerance": self.tolerance,
            "differing_trials": self.differing_trials,
            "bitwise_identical": self.bitwise_identical,
            "statistically_zero": self.statistically_zero,
            "verdict": self.verdict(),
        }


@dataclass(frozen=True)
class ContrastReport:
    a: Direction
    b: Direction
    trials: int
    mixture: CorrelationEstimate
    singlet: CorrelationEstimate
    aligned_mixture: CorrelationEstimate

    def summary(self) -> List[str]:
        return [
            (
                f"Classical mixture {self.mixture.estimate:.6f} "
                f"+/- {self.mixture.stderr:.6f} (exact {self.mixture.exact:.6f}), "
                f"singlet {self.singlet.estimate:.6f} "
                f"+/- {self.singlet.stderr:.6f} (exact {self.singlet.exact:.6f})."
            ),
        ]

    def to_dict(self) -> dict:
        return {
            "a": _direction(self.a),
            "b": _direction(self.b),
            "trials": self.trials,
            "mixture": self.mixture.to_dict(),
            "singlet": self.singlet.to_dict(),
            "aligned_mixture": self.aligned_mixture.to_dict(),
        }


@dataclass(frozen=True)
class KinkReport:
    model: dict
    epsilon: float
    slope: float
    quantum_slope: float

    def summary(self) -> List[str]:
        return [
            f"Slope at aligned settings {self.slope:.6f} "
            f"(quantum {self.quantum_slope:.6f}) for epsilon {self.epsilon:g}.",
        ]

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "epsilon": self.epsilon,
            "slope": self.slope,
            "quantum_slope": self.quantum_slope,
        }


@dataclass(frozen=True)
class ConsecutiveReport:
    angle: float
    trials: int
    same_outcomes: int
    repeated_same: int
    expected: float
    interval: Tuple[float, float]
    z_score: float

    @property
    def same_fraction(self) -> float:
        return self.same_outcomes / self.trials

    @property
    def repeat_agreement(self) -> float:
        return self.repeated_same / self.trials

    def summary(self) -> List[str]:
        return [
            f"Same outcome in {self.same_fraction:.6f} of trials, "
            f"cos^2(alpha/2) = {self.expected:.6f}; repeated measurement "
            f"agreed in {self.repeat_agreement:.6f} of trials.",
        ]

    def to_dict(self) -> dict:
        return {
            "angle_deg": math.degrees(self.angle),
            "trials": self.trials,
            "same_fraction": self.same_fraction,
            "expected": self.expected,
            "interval": list(self.interval),
            "z_score": self.z_score,
            "repeat_agreement": self.repeat_agreement,
        }
