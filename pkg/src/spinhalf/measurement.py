"""Projective spin measurement and sequential Stern-Gerlach chains.

A measurement along any axis yields +1/2 or -1/2 (hbar = 1), never zero,
with Born probabilities given by the squared overlap with the axis
eigenstates; the state collapses onto the matching eigenstate. Chains of
analyzers are simulated shot by shot with a seeded PCG64 generator while
the exact survival probability is tracked analytically alongside.

Probabilities within the global tolerance of 0 or 1 are snapped to those
exact endpoints, which makes repeated measurement along the same axis
reproduce its outcome with probability exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_tolerance
from .core import Axis, SpinState, bloch_vector, equatorial_state, inner_product
from .deduction import canonical_states
from .errors import EmptyChainError, UsageError
from .phase import parse_phase

__all__ = [
    "ChainSpec",
    "ChainStatistics",
    "MeasurementOutcome",
    "Stage",
    "StageStatistics",
    "measure_once",
    "probabilities",
    "resolve_state",
    "run_chain",
]

_MAX_SEED = 2**64 - 1


def resolve_state(value) -> SpinState:
    """Turn a state token into a SpinState.

    Accepted forms: a SpinState; one of the named tokens z+, z-, x+, x-,
    y+, y- (resolved against the deduction's canonical states); an
    ``equatorial:<angle>`` token with a phase literal; or a raw
    ``re,im;re,im`` coefficient pair.
    """
    if isinstance(value, SpinState):
        return value
    if not isinstance(value, str):
        raise UsageError(f"cannot interpret {value!r} as a state")
    token = value.strip()
    named = canonical_states()
    if token in named:
        return named[token]
    if token.startswith("equatorial:"):
        return equatorial_state(parse_phase(token[len("equatorial:"):]))
    if ";" in token:
        return _parse_raw_state(token)
    raise UsageError(f"unrecognized state token {value!r}")


def _parse_raw_state(token: str) -> SpinState:
    parts = token.split(";")
    if len(parts) != 2:
        raise UsageError(f"malformed state string {token!r}")
    amplitudes = []
    for part in parts:
        pieces = part.split(",")
        if len(pieces) != 2:
            raise UsageError(f"malformed state string {token!r}")
        try:
            amplitudes.append(complex(float(pieces[0]), float(pieces[1])))
        except ValueError:
            raise UsageError(f"malformed state string {token!r}") from None
    try:
        return SpinState(amplitudes[0], amplitudes[1])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _as_axis(axis) -> Axis:
    if isinstance(axis, Axis):
        return axis
    return Axis.parse(axis)


def _born(eigenstate: SpinState, psi: SpinState) -> float:
    amplitude = inner_product(eigenstate, psi)
    p = (amplitude.conjugate() * amplitude).real
    tol = get_tolerance()
    if p < tol:
        return 0.0
    if p > 1.0 - tol:
        return 1.0
    return p


def probabilities(psi: SpinState, axis) -> tuple[float, float]:
    """Born probabilities (p_up, p_down) for measuring ``psi`` along
    ``axis``. The state must be normalized; the two values sum to 1
    within tolerance."""
    psi.require_normalized()
    axis = _as_axis(axis)
    return _born(axis.up_state(), psi), _born(axis.down_state(), psi)


@dataclass(frozen=True)
class MeasurementOutcome:
    """A single measurement result: the value observed, its Born
    probability, and the collapsed post-measurement state."""

    value: float  # +0.5 or -0.5
    probability: float
    post_state: SpinState


def measure_once(psi: SpinState, axis, rng) -> MeasurementOutcome:
    """Sample one projective measurement and collapse the state.

    ``rng`` is a numpy Generator (or an integer seed, from which a PCG64
    generator is built). Measuring the returned post_state along the same
    axis repeats the value with probability exactly 1.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.Generator(np.random.PCG64(int(rng)))
    axis = _as_axis(axis)
    p_up, p_down = probabilities(psi, axis)
    if float(rng.random()) < p_up:
        return MeasurementOutcome(0.5, p_up, axis.up_state())
    return MeasurementOutcome(-0.5, p_down, axis.down_state())


@dataclass(frozen=True)
class Stage:
    """One analyzer: measure along ``axis``, keep the ``selected_port``
    beam, block the other."""

    axis: Axis
    selected_port: str

    def __post_init__(self):
        object.__setattr__(self, "axis", _as_axis(self.axis))
        if self.selected_port not in ("up", "down"):
            raise UsageError(
                f"selected_port must be 'up' or 'down', got {self.selected_port!r}"
            )


@dataclass(frozen=True)
class ChainSpec:
    """A sequential analyzer chain: oven preparation, ordered stages,
    shot count and RNG seed."""

    preparation: SpinState | str
    stages: tuple[Stage, ...]
    shots: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if not self.stages:
            raise EmptyChainError("an analyzer chain needs at least one stage")
        if not isinstance(self.shots, int) or self.shots < 1:
            raise UsageError(f"shots must be a positive integer, got {self.shots!r}")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= _MAX_SEED:
            raise UsageError(
                f"seed must be an unsigned 64-bit integer, got {self.seed!r}"
            )


@dataclass(frozen=True)
class StageStatistics:
    """Counts and exact probabilities for one stage.

    ``entry_state`` is the (pure) state of every particle reaching the
    stage; counts refer to those particles only."""

    axis: Axis
    selected_port: str
    up_count: int
    down_count: int
    transmitted_count: int
    p_up: float
    p_down: float
    entry_state: SpinState
    entry_bloch: tuple[float, float, float]


@dataclass(frozen=True)
class ChainStatistics:
    """Aggregate result of a chain run; ``final_probability_exact`` is the
    product of per-stage Born factors, computed from amplitudes and
    independent of the sampling."""

    preparation: SpinState
    shots: int
    seed_used: int
    per_stage: tuple[StageStatistics, ...]
    final_probability_exact: float
    final_frequency: float
    survivors: int


def run_chain(spec: ChainSpec) -> ChainStatistics:
    """Send ``spec.shots`` particles through the analyzer chain.

    Each particle is measured at each stage; those exiting the unselected
    port are discarded (their counts are recorded). All particles entering
    a stage share the same collapsed state, so the per-stage sampling is a
    single vectorized binomial draw. Identical specs (including the seed)
    produce bit-identical statistics.
    """
    if not spec.stages:
        raise EmptyChainError("an analyzer chain needs at least one stage")
    prepared = resolve_state(spec.preparation)
    prepared.require_normalized("preparation")
    rng = np.random.Generator(np.random.PCG64(spec.seed))

    current = prepared
    survivors = spec.shots
    exact = 1.0
    per_stage = []
    for stage in spec.stages:
        p_up, p_down = probabilities(current, stage.axis)
        draws = rng.random(survivors)
        up_count = int(np.count_nonzero(draws < p_up))
        down_count = survivors - up_count
        if stage.selected_port == "up":
            transmitted, p_selected = up_count, p_up
            next_state = stage.axis.up_state()
        else:
            transmitted, p_selected = down_count, p_down
            next_state = stage.axis.down_state()
        per_stage.append(
            StageStatistics(
                axis=stage.axis,
                selected_port=stage.selected_port,
                up_count=up_count,
                down_count=down_count,
                transmitted_count=transmitted,
                p_up=p_up,
                p_down=p_down,
                entry_state=current,
                entry_bloch=bloch_vector(current),
            )
        )
        survivors = transmitted
        exact *= p_selected
        current = next_state

    return ChainStatistics(
        preparation=prepared,
        shots=spec.shots,
        seed_used=spec.seed,
        per_stage=tuple(per_stage),
        final_probability_exact=exact,
        final_frequency=survivors / spec.shots,
        survivors=survivors,
    )
