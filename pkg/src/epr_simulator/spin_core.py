# SPDX-License-Identifier: Apache-2.0

"""
Exact spin-1/2 measurement laws.

Holds the direction geometry, the consecutive measurement law
cos^2(alpha_mn / 2) and the singlet joint distribution, each with a closed
form and a sampling entry point. Sampling functions come in two shapes: a
per-trial form taking Directions and a numpy Generator, and a batch form
working on (n, 3) arrays of spins and pre-drawn uniforms. The per-trial form
is the batch form with n = 1.
"""

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Tuple

import numpy as np

from errors import InvalidDirectionError, InvalidDistributionError
from logger import configure_logger

LOGGER = configure_logger(__name__)

UNIT_NORM_TOLERANCE = 1e-9
PROBABILITY_TOLERANCE = 1e-12


class Outcome(IntEnum):
    """
    Binary measurement result, +1 is a deflection along the measurement
    direction.
    """
    PLUS = 1
    MINUS = -1

    @classmethod
    def from_sign(cls, sign) -> "Outcome":
        return cls.PLUS if sign > 0 else cls.MINUS


@dataclass(frozen=True)
class Direction:
    """
    Unit vector on the sphere, used both as a measurement axis and as an
    intrinsic spin orientation. Raw construction rejects vectors that are
    not unit length, use Direction.normalized to rescale.
    """
    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)
        if not math.isfinite(norm) or abs(norm - 1.0) > UNIT_NORM_TOLERANCE:
            raise InvalidDirectionError(
                f"Direction ({self.x}, {self.y}, {self.z}) has norm {norm}, "
                "expected a unit vector. Use Direction.normalized to rescale."
            )

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "Direction":
        norm = math.sqrt(x * x + y * y + z * z)
        if not math.isfinite(norm) or norm == 0.0:
            raise InvalidDirectionError(
                f"Cannot normalize the vector ({x}, {y}, {z})"
            )
        return cls(x / norm, y / norm, z / norm)

    @classmethod
    def from_angles(cls, polar: float, azimuth: float) -> "Direction":
        """Polar angle from +z and azimuth from +x, both in radians."""
        return cls(
            math.sin(polar) * math.cos(azimuth),
            math.sin(polar) * math.sin(azimuth),
            math.cos(polar),
        )

    @classmethod
    def planar(cls, angle: float) -> "Direction":
        """Direction in the x-z plane at angle (radians) from the +z axis."""
        return cls(math.sin(angle), 0.0, math.cos(angle))

    @classmethod
    def from_array(cls, values) -> "Direction":
        x, y, z = (float(value) for value in values)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def dot(self, other: "Direction") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def __neg__(self) -> "Direction":
        return Direction(-self.x, -self.y, -self.z)


Z_AXIS = Direction(0.0, 0.0, 1.0)
X_AXIS = Direction(1.0, 0.0, 0.0)


@dataclass(frozen=True)
class SpinAssignment:
    """Definite pre-measurement spin orientations of a particle pair."""
    alice_spin: Direction
    bob_spin: Direction


@dataclass(frozen=True)
class JointDistribution:
    """
    Probabilities of the four outcome pairs, first sign is Alice's.
    """
    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float

    def __post_init__(self):
        cells = self.cells()
        if any(
            not -PROBABILITY_TOLERANCE <= cell <= 1.0 + PROBABILITY_TOLERANCE
            for cell in cells
        ):
            raise InvalidDistributionError(
                f"Joint probabilities {cells} must each lie in [0, 1]"
            )
        if abs(math.fsum(cells) - 1.0) > PROBABILITY_TOLERANCE:
            raise InvalidDistributionError(
                f"Joint probabilities {cells} sum to {math.fsum(cells)}"
            )

    def cells(self) -> Tuple[float, float, float, float]:
        return (self.p_pp, self.p_pm, self.p_mp, self.p_mm)

    @property
    def correlation(self) -> float:
        return self.p_pp - self.p_pm - self.p_mp + self.p_mm

    @property
    def alice_plus(self) -> float:
        return self.p_pp + self.p_pm

    @property
    def bob_plus(self) -> float:
        return self.p_pp + self.p_mp

    def to_dict(self) -> dict:
        return {
            "p_pp": self.p_pp,
            "p_pm": self.p_pm,
            "p_mp": self.p_mp,
            "p_mm": self.p_mm,
        }


def _require_directions(*directions):
    for direction in directions:
        if not isinstance(direction, Direction):
            raise InvalidDirectionError(
                f"Expected a unit Direction, got {direction!r}"
            )


def _clipped_dot(m: Direction, n: Direction) -> float:
    return min(1.0, max(-1.0, m.dot(n)))


def angle_between(m: Direction, n: Direction) -> float:
    """
    Angle between two directions in [0, pi]. Computed from the cross and
    dot products, which stays accurate near 0 and pi where acos does not.
    """
    _require_directions(m, n)
    cross = np.cross(m.as_array(), n.as_array())
    return math.atan2(float(np.linalg.norm(cross)), m.dot(n))


def consecutive_same_probability(m: Direction, n: Direction) -> float:
    """
    Probability that a measurement along n repeats the outcome of a
    measurement along m: cos^2(alpha_mn / 2) = (1 + m.n) / 2.
    """
    _require_directions(m, n)
    return (1.0 + _clipped_dot(m, n)) / 2.0


def sequential_outcomes(
    spins: np.ndarray,
    measure: Direction,
    uniforms: np.ndarray,
) -> np.ndarray:
    """
    Batch form of sequential_sample.

    Args:
        spins (np.ndarray): (n, 3) array of unit spin orientations.

        measure (Direction): The measurement direction.

        uniforms (np.ndarray): n uniforms in [0, 1), one per trial.

    Returns:
        np.ndarray: int8 array of +1/-1 outcomes. The outcome is +1 when
            the uniform falls below (1 + spin.measure) / 2.
    """
    plus_probability = np.clip(
        (1.0 + spins @ measure.as_array()) / 2.0, 0.0, 1.0,
    )
    return np.where(uniforms < plus_probability, 1, -1).astype(np.int8)


def collapsed_directions(
    outcomes: np.ndarray,
    measure: Direction,
) -> np.ndarray:
    """Post-measurement spins: +measure for +1 outcomes, -measure for -1."""
    return outcomes.astype(float)[:, None] * measure.as_array()[None, :]


def sequential_sample(
    spin: Direction,
    measure: Direction,
    rand: np.random.Generator,
) -> Tuple[Outcome, Direction]:
    """
    Measure a spin along a direction following the consecutive law.

    Returns the outcome and the collapsed spin, which is measure for a +1
    outcome and -measure for -1.
    """
    _require_directions(spin, measure)
    outcome = sequential_outcomes(
        spin.as_array()[None, :],
        measure,
        np.array([rand.random()]),
    )[0]
    if outcome > 0:
        return Outcome.PLUS, measure
    return Outcome.MINUS, -measure


def singlet_joint_distribution(a: Direction, b: Direction) -> JointDistribution:
    """
    Singlet statistics: equal outcomes with sin^2(alpha_ab / 2) / 2 each,
    opposite outcomes with cos^2(alpha_ab / 2) / 2 each. Both marginals are
    unbiased.
    """
    _require_directions(a, b)
    cosine = _clipped_dot(a, b)
    same = (1.0 - cosine) / 4.0
    opposite = (1.0 + cosine) / 4.0
    return JointDistribution(same, opposite, opposite, same)


def singlet_correlation_exact(a: Direction, b: Direction) -> float:
    _require_directions(a, b)
    return -_clipped_dot(a, b)


def singlet_outcomes(
    a: Direction,
    b: Direction,
    alice_uniforms: np.ndarray,
    bob_uniforms: np.ndarray,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Batch singlet sampler. Alice's outcome is a fair coin from her uniforms
    alone, Bob's outcome is opposite to Alice's with probability
    cos^2(alpha_ab / 2). This draws exactly from singlet_joint_distribution.
    """
    alice = np.where(alice_uniforms < 0.5, 1, -1).astype(np.int8)
    opposite_probability = (1.0 + _clipped_dot(a, b)) / 2.0
    bob = np.where(bob_uniforms < opposite_probability, -alice, alice)
    return alice, bob.astype(np.int8)


def sample_singlet(
    a: Direction,
    b: Direction,
    rand: np.random.Generator,
) -> Tuple[Outcome, Outcome]:
    _require_directions(a, b)
    alice_uniform = rand.random()
    bob_uniform = rand.random()
    alice, bob = singlet_outcomes(
        a, b, np.array([alice_uniform]), np.array([bob_uniform]),
    )
    return Outcome.from_sign(alice[0]), Outcome.from_sign(bob[0])


def sample_uniform_directions(
    rand: np.random.Generator,
    size: int,
) -> np.ndarray:
    """
    Draw size directions uniformly on the sphere by inverse CDF: z uniform
    in [-1, 1], azimuth uniform in [0, 2 pi).
    """
    z = rand.uniform(-1.0, 1.0, size)
    azimuth = rand.uniform(0.0, 2.0 * math.pi, size)
    radius = np.sqrt(np.clip(1.0 - z * z, 0.0, 1.0))
    return np.column_stack(
        (radius * np.cos(azimuth), radius * np.sin(azimuth), z),
    )


def angles_between_arrays(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Row-wise angles in [0, pi] between two (n, 3) arrays of unit vectors."""
    cross = np.linalg.norm(np.cross(first, second), axis=1)
    dot = np.einsum("ij,ij->i", first, second)
    return np.arctan2(cross, dot)
