# SPDX-License-Identifier: Apache-2.0

"""
Executable experiments on the pair-measurement models.

Each experiment splits its trials into chunks (see thread.map_chunks) and
gives every chunk the stream derive_stream(StreamSpec(seed, label, chunk)).
Reports are built from integer counts, or from float sums folded in chunk
order, so identical parameters and seed give identical reports for any
worker count.
"""

import math
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from errors import (
    InsufficientTrialsError,
    InvalidEpsilonError,
    InvalidGridError,
    InvalidModelSpecError,
    InvalidSettingError,
)
from hv_models import (
    Assignment,
    ModelKind,
    ModelSpec,
    Ordering,
    Station,
    exact_correlation,
    measure_pair,
    prepare,
)
from logger import configure_logger
from reports import (
    ConsecutiveReport,
    ContrastReport,
    FrameReport,
    InequalityReport,
    KinkReport,
    NonSignalingReport,
    SweepReport,
    SweepRow,
)
from spin_core import (
    Direction,
    Z_AXIS,
    angles_between_arrays,
    collapsed_directions,
    consecutive_same_probability,
    sample_uniform_directions,
    sequential_outcomes,
    singlet_correlation_exact,
)
from stats import (
    NORMAL_APPROXIMATION_FLOOR,
    CorrelationEstimate,
    JointCounts,
    StreamSpec,
    binomial_tolerance,
    derive_stream,
    wilson_interval,
    z_test,
)
from thread import map_chunks

LOGGER = configure_logger(__name__)

MIN_TRIALS = NORMAL_APPROXIMATION_FLOOR
EXCLUSION_P_VALUE = 1e-6
REQUIRED_Q_FRACTION = 0.25
LOCAL_FLIP_BOUND = math.sin(math.pi / 8) ** 2
INEQUALITY_A = Direction.planar(math.pi / 4)
INEQUALITY_B = Direction.planar(-math.pi / 4)
MAX_KINK_EPSILON = 0.1
QUANTUM = ModelSpec(ModelKind.QUANTUM)
NONLOCAL = ModelSpec(ModelKind.NONLOCAL_ALIGNING)


def _check_trials(trials: int, allow_small: bool = False):
    if not isinstance(trials, (int, np.integer)) or trials <= 0:
        raise InsufficientTrialsError(
            f"Trials must be a positive integer, got {trials!r}"
        )
    if trials < MIN_TRIALS and not allow_small:
        raise InsufficientTrialsError(
            f"{trials} trials requested, at least {MIN_TRIALS} are needed "
            "for the normal approximation of the tests"
        )


def simulate_counts(
    spec: ModelSpec,
    a: Direction,
    b: Direction,
    trials: int,
    seed: int,
    label: str,
    ordering: Ordering = Ordering.ALICE_FIRST,
    workers: int = 1,
) -> JointCounts:
    """
    Prepare and measure trials pairs of the model at settings (a, b) and
    count the four outcome pairs.
    """
    def _chunk(index: int, size: int) -> JointCounts:
        rand = derive_stream(StreamSpec(seed, label, index))
        state = prepare(spec, rand, size)
        alice, bob, _ = measure_pair(spec, state, a, b, ordering, rand)
        return JointCounts.from_outcomes(alice, bob)

    return sum(map_chunks(_chunk, trials, workers), JointCounts())


def estimate_correlation(
    spec: ModelSpec,
    a: Direction,
    b: Direction,
    trials: int,
    seed: int,
    label: str,
    ordering: Ordering = Ordering.ALICE_FIRST,
    workers: int = 1,
) -> CorrelationEstimate:
    counts = simulate_counts(spec, a, b, trials, seed, label, ordering, workers)
    return counts.correlation(exact=exact_correlation(spec, a, b))


def run_inequality(
    trials: int,
    seed: int,
    assignment: Assignment = Assignment.PLUS_MINUS,
    a: Optional[Direction] = None,
    b: Optional[Direction] = None,
    workers: int = 1,
    allow_small: bool = False,
) -> InequalityReport:
    """
    Measure definite +-/-+ spins on the vertical axis at two orthogonal
    settings 45 degrees either side of it, next to the singlet at the same
    settings.

    The local model's correlation is tested against the singlet's value
    (0 at the default settings) with a two-sided z-test. The report carries
    every joint count so the P + N - 4Q bookkeeping can be audited.
    """
    _check_trials(trials, allow_small)
    try:
        assignment = Assignment(assignment)
    except ValueError:
        raise InvalidSettingError(
            f"Unknown assignment {assignment!r}, use '+-' or '-+'"
        ) from None
    if assignment is Assignment.MIXED:
        raise InvalidSettingError(
            "The inequality experiment needs a definite '+-' or '-+' "
            "assignment"
        )
    a = a or INEQUALITY_A
    b = b or INEQUALITY_B
    LOGGER.info(
        "Running the inequality experiment: %d trials, assignment %s",
        trials,
        assignment.value,
    )

    local_spec = ModelSpec.definite_aligned(Z_AXIS, assignment)
    counts = simulate_counts(
        local_spec, a, b, trials, seed, "inequality/local", workers=workers,
    )
    quantum_counts = simulate_counts(
        QUANTUM, a, b, trials, seed, "inequality/quantum", workers=workers,
    )
    quantum_expected = singlet_correlation_exact(a, b)
    local_estimate = counts.correlation(
        exact=exact_correlation(local_spec, a, b),
    )
    quantum_estimate = quantum_counts.correlation(exact=quantum_expected)

    alice_sign = assignment.alice_sign
    alice_agreeing = (
        counts.alice_plus if alice_sign > 0 else counts.alice_minus
    )
    bob_agreeing = (
        trials - counts.bob_plus if alice_sign > 0 else counts.bob_plus
    )

    report = InequalityReport(
        trials=trials,
        assignment=assignment.value,
        a=a,
        b=b,
        counts=counts,
        correlation_estimate=local_estimate,
        quantum_estimate=quantum_estimate,
        quantum_expected=quantum_expected,
        local_model_exact=local_estimate.exact,
        z_score=local_estimate.z_score(quantum_expected),
        p_value=z_test(local_estimate, quantum_expected),
        required_q_fraction=REQUIRED_Q_FRACTION,
        paper_bound=LOCAL_FLIP_BOUND,
        alice_agreement=alice_agreeing / trials,
        alice_agreement_interval=wilson_interval(alice_agreeing, trials),
        bob_agreement=bob_agreeing / trials,
        bob_agreement_interval=wilson_interval(bob_agreeing, trials),
        expected_alice_agreement=consecutive_same_probability(Z_AXIS, a),
        expected_bob_agreement=consecutive_same_probability(Z_AXIS, b),
        exclusion_threshold=EXCLUSION_P_VALUE,
    )
    LOGGER.info(report.verdict())
    return report


def _validate_grid(angles: Iterable[float]) -> Tuple[float, ...]:
    grid = tuple(float(angle) for angle in angles)
    if not grid:
        raise InvalidGridError("The angle grid is empty")
    for angle in grid:
        if not math.isfinite(angle) or not 0.0 <= angle <= math.pi + 1e-12:
            raise InvalidGridError(
                f"Angle {angle} rad is outside [0, pi]"
            )
    if any(second <= first for first, second in zip(grid, grid[1:])):
        raise InvalidGridError("The angle grid must be strictly increasing")
    return grid


def run_correlation_sweep(
    spec: ModelSpec,
    angles: Sequence[float],
    trials: int,
    seed: int,
    workers: int = 1,
) -> SweepReport:
    """
    Correlation of the model against the angle between the settings,
    a = vertical, b = planar(angle). Angles are in radians.
    """
    grid = _validate_grid(angles)
    _check_trials(trials, allow_small=True)
    LOGGER.info(
        "Sweeping the %s model over %d angles, %d trials each",
        spec.kind.value,
        len(grid),
        trials,
    )
    rows = []
    for index, angle in enumerate(grid):
        b = Direction.planar(angle)
        estimate = estimate_correlation(
            spec,
            Z_AXIS,
            b,
            trials,
            seed,
            f"sweep/{spec.kind.value}/{index}",
            workers=workers,
        )
        rows.append(SweepRow(
            angle=angle,
            estimate=estimate,
            exact=estimate.exact,
            quantum_exact=singlet_correlation_exact(Z_AXIS, b),
        ))
    return SweepReport(model=spec.to_dict(), trials=trials, rows=tuple(rows))


def kink_slope(spec: ModelSpec, epsilon: float) -> float:
    """
    Forward finite difference (E(epsilon) - E(0)) / epsilon of the exact
    correlation at aligned settings. Linear (kinked) models keep a
    constant slope, the singlet's slope vanishes with epsilon.
    """
    if (
        not isinstance(epsilon, (int, float))
        or not 0.0 < epsilon <= MAX_KINK_EPSILON
    ):
        raise InvalidEpsilonError(
            f"Epsilon {epsilon!r} must lie in (0, {MAX_KINK_EPSILON}]"
        )
    aligned = exact_correlation(spec, Z_AXIS, Z_AXIS)
    shifted = exact_correlation(spec, Z_AXIS, Direction.planar(epsilon))
    return (shifted - aligned) / epsilon


def run_kink(spec: ModelSpec, epsilon: float) -> KinkReport:
    return KinkReport(
        model=spec.to_dict(),
        epsilon=epsilon,
        slope=kink_slope(spec, epsilon),
        quantum_slope=kink_slope(QUANTUM, epsilon),
    )


def run_frame_ordering(
    a: Direction,
    b: Direction,
    trials: int,
    seed: int,
    workers: int = 1,
    spec: ModelSpec = NONLOCAL,
) -> FrameReport:
    """
    Run every trial of the non-local model twice from the same hidden state
    and the same stream, once with Alice measuring first and once with Bob
    first. The observable statistics must agree while the hidden history of
    each spin does not.
    """
    if spec.kind is not ModelKind.NONLOCAL_ALIGNING:
        raise InvalidModelSpecError(
            "Frame ordering only applies to the nonlocal model, "
            f"got {spec.kind.value}"
        )
    _check_trials(trials, allow_small=True)
    LOGGER.info("Comparing measurement orderings over %d trials", trials)

    def _chunk(index: int, size: int):
        state = prepare(
            spec, derive_stream(StreamSpec(seed, "frame/prepare", index)), size,
        )
        counts = {}
        measured = {}
        for ordering in Ordering:
            rand = derive_stream(StreamSpec(seed, "frame/measure", index))
            alice, bob, measured[ordering] = measure_pair(
                spec, state, a, b, ordering, rand,
            )
            counts[ordering] = JointCounts.from_outcomes(alice, bob)
        divergence = {
            station: float(angles_between_arrays(
                measured[Ordering.ALICE_FIRST].pre_measurement_spin(station),
                measured[Ordering.BOB_FIRST].pre_measurement_spin(station),
            ).sum())
            for station in Station
        }
        return (
            counts[Ordering.ALICE_FIRST],
            counts[Ordering.BOB_FIRST],
            divergence[Station.ALICE],
            divergence[Station.BOB],
        )

    chunks = map_chunks(_chunk, trials, workers)
    alice_first = sum((chunk[0] for chunk in chunks), JointCounts())
    bob_first = sum((chunk[1] for chunk in chunks), JointCounts())
    alice_divergence = math.fsum(chunk[2] for chunk in chunks) / trials
    bob_divergence = math.fsum(chunk[3] for chunk in chunks) / trials

    first_cells = alice_first.frequencies().cells()
    second_cells = bob_first.frequencies().cells()
    tolerances = tuple(
        binomial_tolerance((first + second) / 2.0, trials)
        for first, second in zip(first_cells, second_cells)
    )
    exact = exact_correlation(spec, a, b)
    return FrameReport(
        a=a,
        b=b,
        trials=trials,
        alice_first_counts=alice_first,
        bob_first_counts=bob_first,
        alice_first_estimate=alice_first.correlation(exact=exact),
        bob_first_estimate=bob_first.correlation(exact=exact),
        max_cell_deviation=max(
            abs(first - second)
            for first, second in zip(first_cells, second_cells)
        ),
        cell_tolerances=tolerances,
        history_divergence=alice_divergence,
        bob_history_divergence=bob_divergence,
    )


def run_nonsignaling_check(
    spec: ModelSpec,
    a: Direction,
    b1: Direction,
    b2: Direction,
    trials: int,
    seed: int,
    ordering: Ordering = Ordering.ALICE_FIRST,
    workers: int = 1,
) -> NonSignalingReport:
    """
    Replay the same streams with Bob's setting b1 and then b2 and compare
    Alice's outcomes trial by trial.
    """
    _check_trials(trials, allow_small=True)
    ordering = Ordering(ordering)

    def _chunk(index: int, size: int) -> Tuple[int, int, int]:
        alice_outcomes = []
        for b in (b1, b2):
            rand = derive_stream(StreamSpec(seed, "nonsignal", index))
            state = prepare(spec, rand, size)
            alice, _, _ = measure_pair(spec, state, a, b, ordering, rand)
            alice_outcomes.append(alice)
        first, second = alice_outcomes
        return (
            int(np.count_nonzero(first > 0)),
            int(np.count_nonzero(second > 0)),
            int(np.count_nonzero(first != second)),
        )

    chunks = map_chunks(_chunk, trials, workers)
    return NonSignalingReport(
        model=spec.to_dict(),
        ordering=ordering.value,
        a=a,
        b1=b1,
        b2=b2,
        trials=trials,
        alice_plus_b1=sum(chunk[0] for chunk in chunks),
        alice_plus_b2=sum(chunk[1] for chunk in chunks),
        differing_trials=sum(chunk[2] for chunk in chunks),
        tolerance=binomial_tolerance(0.5, trials),
    )


def run_superposition_contrast(
    trials: int,
    seed: int,
    a: Optional[Direction] = None,
    b: Optional[Direction] = None,
    workers: int = 1,
    allow_small: bool = False,
) -> ContrastReport:
    """
    The singlet against the classical 50/50 mixture of +- and -+ spins on
    the vertical axis, at the orthogonal 45 degree settings and at equal
    vertical settings.
    """
    _check_trials(trials, allow_small)
    a = a or INEQUALITY_A
    b = b or INEQUALITY_B
    mixture = ModelSpec.definite_aligned(Z_AXIS, Assignment.MIXED)
    return ContrastReport(
        a=a,
        b=b,
        trials=trials,
        mixture=estimate_correlation(
            mixture, a, b, trials, seed, "contrast/mixture", workers=workers,
        ),
        singlet=estimate_correlation(
            QUANTUM, a, b, trials, seed, "contrast/singlet", workers=workers,
        ),
        aligned_mixture=estimate_correlation(
            mixture,
            Z_AXIS,
            Z_AXIS,
            trials,
            seed,
            "contrast/aligned",
            workers=workers,
        ),
    )


def run_consecutive(
    angle: float,
    trials: int,
    seed: int,
    workers: int = 1,
    allow_small: bool = False,
) -> ConsecutiveReport:
    """
    Unpolarised spins measured along the vertical axis, then along a
    direction at angle (radians) from it, then along that direction again.
    """
    _check_trials(trials, allow_small)
    if not math.isfinite(angle):
        raise InvalidSettingError(f"Angle {angle!r} is not finite")
    first_axis = Z_AXIS
    second_axis = Direction.planar(angle)

    def _chunk(index: int, size: int) -> Tuple[int, int]:
        rand = derive_stream(StreamSpec(seed, "consecutive", index))
        spins = sample_uniform_directions(rand, size)
        first = sequential_outcomes(spins, first_axis, rand.random(size))
        second = sequential_outcomes(
            collapsed_directions(first, first_axis),
            second_axis,
            rand.random(size),
        )
        repeated = sequential_outcomes(
            collapsed_directions(second, second_axis),
            second_axis,
            rand.random(size),
        )
        return (
            int(np.count_nonzero(first == second)),
            int(np.count_nonzero(second == repeated)),
        )

    chunks = map_chunks(_chunk, trials, workers)
    same = sum(chunk[0] for chunk in chunks)
    expected = consecutive_same_probability(first_axis, second_axis)
    spread = math.sqrt(expected * (1.0 - expected) / trials)
    deviation = same / trials - expected
    return ConsecutiveReport(
        angle=angle,
        trials=trials,
        same_outcomes=same,
        repeated_same=sum(chunk[1] for chunk in chunks),
        expected=expected,
        interval=wilson_interval(same, trials),
        z_score=deviation / spread if spread > 0.0 else 0.0,
    )
