# SPDX-License-Identifier: Apache-2.0

"""
Pair-measurement theories behind a uniform model interface.

Five models are provided:

- quantum: the singlet reference, sampled from its joint distribution.
- definite: both spins fixed on an axis, +- or -+ (or a 50/50 mixture).
- isotropic: opposite spins with a direction uniform on the sphere.
- nonlocal: opposite spins, the first measurement re-aligns the remote spin.
- sign: deterministic sign(a.lambda) outcomes, the textbook kinked model.

Local models only ever see their own station's setting: they receive a
MeasurementContext without the remote setting, so Bell locality holds by
construction. Every model draws one uniform per station and trial after
preparation, in the order Alice then Bob, whether it uses them or not. With
a fixed stream Alice's uniforms therefore never depend on Bob's setting.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple, Type

import numpy as np

from errors import InvalidModelSpecError, StateMismatchError
from logger import configure_logger
from spin_core import (
    Direction,
    Outcome,
    Z_AXIS,
    angle_between,
    collapsed_directions,
    sequential_outcomes,
    sample_uniform_directions,
    singlet_correlation_exact,
    singlet_outcomes,
)

LOGGER = configure_logger(__name__)


class ModelKind(str, Enum):
    QUANTUM = "quantum"
    DEFINITE_ALIGNED = "definite"
    ISOTROPIC_OPPOSITE = "isotropic"
    NONLOCAL_ALIGNING = "nonlocal"
    DETERMINISTIC_SIGN = "sign"


class Assignment(str, Enum):
    PLUS_MINUS = "+-"
    MINUS_PLUS = "-+"
    MIXED = "mixed"

    @property
    def alice_sign(self) -> Optional[int]:
        return {
            Assignment.PLUS_MINUS: 1,
            Assignment.MINUS_PLUS: -1,
        }.get(self)


class Station(str, Enum):
    ALICE = "alice"
    BOB = "bob"

    @property
    def remote(self) -> "Station":
        return Station.BOB if self is Station.ALICE else Station.ALICE


class Ordering(str, Enum):
    ALICE_FIRST = "alice-first"
    BOB_FIRST = "bob-first"

    @property
    def stations(self) -> Tuple[Station, Station]:
        if self is Ordering.ALICE_FIRST:
            return (Station.ALICE, Station.BOB)
        return (Station.BOB, Station.ALICE)


@dataclass(frozen=True)
class ModelSpec:
    """
    Immutable model description. Only the definite model takes parameters:
    the axis its spins sit on and which particle points along it.
    """
    kind: ModelKind
    axis: Optional[Direction] = None
    assignment: Optional[Assignment] = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", ModelKind(self.kind))
            if self.assignment is not None:
                object.__setattr__(
                    self, "assignment", Assignment(self.assignment),
                )
        except ValueError as error:
            raise InvalidModelSpecError(str(error)) from None

        if self.kind is ModelKind.DEFINITE_ALIGNED:
            if not isinstance(self.axis, Direction) or self.assignment is None:
                raise InvalidModelSpecError(
                    "The definite model needs an axis Direction and an "
                    "assignment ('+-', '-+' or 'mixed')"
                )
        elif self.axis is not None or self.assignment is not None:
            raise InvalidModelSpecError(
                f"The {self.kind.value} model takes no axis or assignment"
            )

    @classmethod
    def definite_aligned(
        cls,
        axis: Direction = Z_AXIS,
        assignment: Assignment = Assignment.PLUS_MINUS,
    ) -> "ModelSpec":
        return cls(ModelKind.DEFINITE_ALIGNED, axis, Assignment(assignment))

    def to_dict(self) -> dict:
        result = {"kind": self.kind.value}
        if self.axis is not None:
            result["axis"] = [self.axis.x, self.axis.y, self.axis.z]
        if self.assignment is not None:
            result["assignment"] = self.assignment.value
        return result


@dataclass(frozen=True)
class HistoryEvent:
    label: str
    station: Station
    directions: np.ndarray


@dataclass(frozen=True)
class HiddenState:
    """
    Hidden variables of n trials. Spins are (n, 3) arrays, None for the
    quantum sentinel. The history only ever grows: record returns a new
    state whose history extends this one.
    """
    model_tag: ModelKind
    trials: int
    alice_spin: Optional[np.ndarray]
    bob_spin: Optional[np.ndarray]
    history: Tuple[HistoryEvent, ...] = ()

    @classmethod
    def prepared(
        cls,
        model_tag: ModelKind,
        alice_spin: np.ndarray,
        bob_spin: np.ndarray,
    ) -> "HiddenState":
        state = cls(model_tag, len(alice_spin), None, None)
        state = state.record("prepare", Station.ALICE, alice_spin)
        return state.record("prepare", Station.BOB, bob_spin)

    def spin(self, station: Station) -> np.ndarray:
        if station is Station.ALICE:
            return self.alice_spin
        return self.bob_spin

    def record(
        self,
        label: str,
        station: Station,
        directions: np.ndarray,
    ) -> "HiddenState":
        snapshot = np.array(directions, dtype=float, copy=True)
        snapshot.setflags(write=False)
        spins = {Station.ALICE: self.alice_spin, Station.BOB: self.bob_spin}
        spins[station] = snapshot
        return HiddenState(
            model_tag=self.model_tag,
            trials=self.trials,
            alice_spin=spins[Station.ALICE],
            bob_spin=spins[Station.BOB],
            history=self.history + (HistoryEvent(label, station, snapshot),),
        )

    def pre_measurement_spin(self, station: Station) -> np.ndarray:
        """The station's last snapshot before its first measure event."""
        latest = None
        for event in self.history:
            if event.station is not station:
                continue
            if event.label == "measure":
                break
            latest = event.directions
        if latest is None:
            raise StateMismatchError(
                f"No {station.value} snapshot precedes a measurement"
            )
        return latest


@dataclass(frozen=True)
class MeasurementContext:
    """
    What a station is shown when it measures. The remote setting is only
    present for models whose outcomes may depend on it.
    """
    station: Station
    ordering: Ordering
    remote_setting_visible: bool
    setting: Direction
    remote_setting: Optional[Direction] = None

    def __post_init__(self):
        if (self.remote_setting is not None) != self.remote_setting_visible:
            raise InvalidModelSpecError(
                "The remote setting must be present exactly when it is "
                "visible to the model"
            )


@dataclass(frozen=True)
class TrialRecord:
    """One pair measurement with its settings and hidden history."""
    model: ModelSpec
    a: Direction
    b: Direction
    ordering: Ordering
    alice: Outcome
    bob: Outcome
    history: Tuple[Tuple[str, str, Direction], ...]


def _station_uniforms(
    rand: np.random.Generator,
    trials: int,
) -> Dict[Station, np.ndarray]:
    alice = rand.random(trials)
    bob = rand.random(trials)
    return {Station.ALICE: alice, Station.BOB: bob}


class PairModel(ABC):
    """
    Strategy interface for a pair-measurement theory.
    """
    kind: ModelKind
    parameter_dependent = False

    def __init__(self, spec: ModelSpec):
        self.spec = spec

    def context(
        self,
        station: Station,
        ordering: Ordering,
        settings: Dict[Station, Direction],
    ) -> MeasurementContext:
        return MeasurementContext(
            station=station,
            ordering=ordering,
            remote_setting_visible=self.parameter_dependent,
            setting=settings[station],
            remote_setting=(
                settings[station.remote] if self.parameter_dependent else None
            ),
        )

    @abstractmethod
    def prepare(self, rand: np.random.Generator, trials: int) -> HiddenState:
        pass

    @abstractmethod
    def measure(
        self,
        state: HiddenState,
        settings: Dict[Station, Direction],
        ordering: Ordering,
        rand: np.random.Generator,
    ) -> Tuple[np.ndarray, np.ndarray, HiddenState]:
        pass

    @abstractmethod
    def exact_correlation(self, a: Direction, b: Direction) -> float:
        pass


class QuantumModel(PairModel):
    kind = ModelKind.QUANTUM
    parameter_dependent = True

    def prepare(self, rand, trials):
        return HiddenState(self.kind, trials, None, None)

    def measure(self, state, settings, ordering, rand):
        uniforms = _station_uniforms(rand, state.trials)
        alice, bob = singlet_outcomes(
            settings[Station.ALICE],
            settings[Station.BOB],
            uniforms[Station.ALICE],
            uniforms[Station.BOB],
        )
        return alice, bob, state

    def exact_correlation(self, a, b):
        return singlet_correlation_exact(a, b)


class LocalModel(PairModel):
    """
    Each station answers from its own hidden spin, its own setting and its
    own uniforms. The remote setting is never handed over.
    """

    def respond(
        self,
        context: MeasurementContext,
        spins: np.ndarray,
        uniforms: np.ndarray,
    ) -> np.ndarray:
        return sequential_outcomes(spins, context.setting, uniforms)

    def measure(self, state, settings, ordering, rand):
        uniforms = _station_uniforms(rand, state.trials)
        outcomes = {}
        for station in ordering.stations:
            context = self.context(station, ordering, settings)
            outcomes[station] = self.respond(
                context, state.spin(station), uniforms[station],
            )
            state = state.record(
                "measure",
                station,
                collapsed_directions(outcomes[station], context.setting),
            )
        return outcomes[Station.ALICE], outcomes[Station.BOB], state


class DefiniteAlignedModel(LocalModel):
    kind = ModelKind.DEFINITE_ALIGNED

    def prepare(self, rand, trials):
        alice_sign = self.spec.assignment.alice_sign
        if alice_sign is None:
            signs = np.where(rand.random(trials) < 0.5, 1.0, -1.0)
        else:
            signs = np.full(trials, float(alice_sign))
        alice_spin = signs[:, None] * self.spec.axis.as_array()[None, :]
        return HiddenState.prepared(self.kind, alice_spin, -alice_spin)

    def exact_correlation(self, a, b):
        # Product of the two independent station expectations, the same
        # for both assignments
        axis = self.spec.axis
        return -a.dot(axis) * b.dot(axis)


class IsotropicOppositeModel(LocalModel):
    kind = ModelKind.ISOTROPIC_OPPOSITE

    def prepare(self, rand, trials):
        hidden = sample_uniform_directions(rand, trials)
        return HiddenState.prepared(self.kind, hidden, -hidden)

    def exact_correlation(self, a, b):
        return -a.dot(b) / 3.0


class DeterministicSignModel(LocalModel):
    """
    Alice answers sign(a.lambda) and Bob answers -sign(b.lambda), with
    sign(0) taken as +1. Equal settings always give opposite outcomes.
    Bob holds -lambda as his hidden spin.
    """
    kind = ModelKind.DETERMINISTIC_SIGN

    def prepare(self, rand, trials):
        hidden = sample_uniform_directions(rand, trials)
        return HiddenState.prepared(self.kind, hidden, -hidden)

    def respond(self, context, spins, uniforms):
        projection = spins @ context.setting.as_array()
        if context.station is Station.BOB:
            # Bob holds -lambda
            return (-np.where(-projection >= 0.0, 1, -1)).astype(np.int8)
        return np.where(projection >= 0.0, 1, -1).astype(np.int8)

    def exact_correlation(self, a, b):
        return -1.0 + 2.0 * angle_between(a, b) / np.pi


class NonlocalAligningModel(PairModel):
    """
    The first station measures its own hidden spin. That measurement
    instantly turns the remote hidden spin anti-parallel to the first
    collapsed direction, then the second station measures.
    """
    kind = ModelKind.NONLOCAL_ALIGNING
    parameter_dependent = True

    def prepare(self, rand, trials):
        hidden = sample_uniform_directions(rand, trials)
        return HiddenState.prepared(self.kind, hidden, -hidden)

    def measure(self, state, settings, ordering, rand):
        uniforms = _station_uniforms(rand, state.trials)
        first, second = ordering.stations
        outcomes = {}

        context = self.context(first, ordering, settings)
        outcomes[first] = sequential_outcomes(
            state.spin(first), context.setting, uniforms[first],
        )
        collapsed = collapsed_directions(outcomes[first], context.setting)
        state = state.record("measure", first, collapsed)
        state = state.record("align", second, -collapsed)

        context = self.context(second, ordering, settings)
        outcomes[second] = sequential_outcomes(
            state.spin(second), context.setting, uniforms[second],
        )
        state = state.record(
            "measure",
            second,
            collapsed_directions(outcomes[second], context.setting),
        )
        return outcomes[Station.ALICE], outcomes[Station.BOB], state

    def exact_correlation(self, a, b):
        return singlet_correlation_exact(a, b)


MODEL_REGISTRY: Dict[ModelKind, Type[PairModel]] = {
    ModelKind.QUANTUM: QuantumModel,
    ModelKind.DEFINITE_ALIGNED: DefiniteAlignedModel,
    ModelKind.ISOTROPIC_OPPOSITE: IsotropicOppositeModel,
    ModelKind.NONLOCAL_ALIGNING: NonlocalAligningModel,
    ModelKind.DETERMINISTIC_SIGN: DeterministicSignModel,
}


def build_model(spec: ModelSpec) -> PairModel:
    if not isinstance(spec, ModelSpec):
        raise InvalidModelSpecError(f"Expected a ModelSpec, got {spec!r}")
    return MODEL_REGISTRY[spec.kind](spec)


def prepare(
    spec: ModelSpec,
    rand: np.random.Generator,
    trials: int = 1,
) -> HiddenState:
    if trials <= 0:
        raise InvalidModelSpecError("Cannot prepare fewer than 1 trial")
    return build_model(spec).prepare(rand, trials)


def measure_pair(
    spec: ModelSpec,
    state: HiddenState,
    a: Direction,
    b: Direction,
    ordering: Ordering,
    rand: np.random.Generator,
) -> Tuple[np.ndarray, np.ndarray, HiddenState]:
    """
    Measure every trial of a prepared state at Alice's setting a and Bob's
    setting b.

    Returns:
        Tuple[np.ndarray, np.ndarray, HiddenState]: Alice's and Bob's +/-1
            outcomes (int8 arrays of length state.trials) and the state
            after measurement with the new history events appended.
    """
    model = build_model(spec)
    if not isinstance(state, HiddenState):
        raise StateMismatchError("measure_pair needs a prepared HiddenState")
    if state.model_tag is not spec.kind:
        raise StateMismatchError(
            f"State prepared by the {state.model_tag.value} model cannot be "
            f"measured by the {spec.kind.value} model"
        )
    if not isinstance(a, Direction) or not isinstance(b, Direction):
        raise StateMismatchError("Settings must be Directions")
    return model.measure(
        state,
        {Station.ALICE: a, Station.BOB: b},
        Ordering(ordering),
        rand,
    )


def exact_correlation(spec: ModelSpec, a: Direction, b: Direction) -> float:
    return build_model(spec).exact_correlation(a, b)


def run_trial(
    spec: ModelSpec,
    a: Direction,
    b: Direction,
    ordering: Ordering,
    rand: np.random.Generator,
) -> TrialRecord:
    state = prepare(spec, rand, 1)
    alice, bob, state = measure_pair(spec, state, a, b, ordering, rand)
    return TrialRecord(
        model=spec,
        a=a,
        b=b,
        ordering=Ordering(ordering),
        alice=Outcome.from_sign(alice[0]),
        bob=Outcome.from_sign(bob[0]),
        history=tuple(
            (
                event.label,
                event.station.value,
                Direction.from_array(event.directions[0]),
            )
            for event in state.history
        ),
    )
