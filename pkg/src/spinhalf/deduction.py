"""Step-by-step deduction of the x and y bases from the z-basis axioms.

Starting from an unconstrained two-coefficient ansatz, the pipeline
enforces, in order:

1. geometric orthogonality to z (zero expectation of S_z), which pins the
   magnitudes to 1/sqrt2 and leaves two free phases;
2. a phase convention (the eliminable phases default to zero);
3. Hilbert-space orthogonality inside each basis, which locks the partner
   state's relative phase to "other phase + pi";
4. geometric orthogonality of the y family to the deduced x axis, which
   leaves exactly two candidate sign choices;
5. handedness selection: the candidate whose spin operators satisfy
   [S_x, S_y] = +i S_z is tagged right-handed and kept.

Closed forms do all the solving; the test suite backs each closed form
with a brute-force phase-grid search. Every constraint application is
logged into a DeductionReport that serializes deterministically.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Union

from .config import get_tolerance
from .core import (
    RSQRT2,
    SpinOperator,
    SpinState,
    canonical_state,
    commutator,
    expectation,
    identity,
    inner_product,
    projector,
    spin_operator,
)
from .errors import (
    ConstraintInfeasibleError,
    NoRightHandedCandidateError,
    UnresolvedSlotError,
    UsageError,
)
from .phase import PhaseAngle, parse_phase

__all__ = [
    "Ansatz",
    "DeductionReport",
    "DeductionStep",
    "FixedSlot",
    "FreeSlot",
    "HandednessSelection",
    "PhaseFamily",
    "RelativeSlot",
    "YCandidatePair",
    "candidate_y_pairs",
    "canonical_states",
    "deduce_all",
    "enforce_hilbert_orthogonal",
    "enforce_unbiased",
    "fix_convention",
    "select_handedness",
]

RIGHT_HANDED = "right-handed"
LEFT_HANDED = "left-handed"


# --------------------------------------------------------------------------
# Phase slots and families


@dataclass(frozen=True)
class FreeSlot:
    """A phase that is still an arbitrary real constant."""

    symbol: str

    def to_json(self):
        return {"kind": "free", "symbol": self.symbol}


@dataclass(frozen=True)
class FixedSlot:
    """A phase pinned to a definite angle."""

    angle: PhaseAngle

    def to_json(self):
        return {"kind": "fixed", "angle": self.angle.to_json()}


@dataclass(frozen=True)
class RelativeSlot:
    """A phase constrained to "the other slot's phase + offset"."""

    offset: PhaseAngle

    def to_json(self):
        return {"kind": "relative", "offset": self.offset.to_json()}


PhaseSlot = Union[FreeSlot, FixedSlot, RelativeSlot]


@dataclass(frozen=True)
class PhaseFamily:
    """The family (1/sqrt2)(e**(i phi_up) |up> + e**(i phi_down) |down>)
    over the eigenstates of ``basis``, with each phase in a slot that is
    free, fixed, or constrained relative to the other slot.

    Instantiating all slots always yields a normalized state; the 1/sqrt2
    magnitude is what the unbiasedness constraint forces.
    """

    slot_up: PhaseSlot
    slot_down: PhaseSlot
    basis: str = "z"
    magnitude: float = RSQRT2

    def free_symbols(self) -> list[str]:
        return [
            slot.symbol
            for slot in (self.slot_up, self.slot_down)
            if isinstance(slot, FreeSlot)
        ]

    def _resolve(self, assignments: Mapping[str, PhaseAngle]) -> tuple[PhaseAngle, PhaseAngle]:
        def fixed_or_free(slot: PhaseSlot) -> PhaseAngle | None:
            if isinstance(slot, FixedSlot):
                return slot.angle
            if isinstance(slot, FreeSlot):
                if slot.symbol not in assignments:
                    raise UnresolvedSlotError(
                        f"free phase slot {slot.symbol!r} has no assignment"
                    )
                return _as_phase(assignments[slot.symbol])
            return None

        up = fixed_or_free(self.slot_up)
        down = fixed_or_free(self.slot_down)
        if up is None and down is None:
            raise UnresolvedSlotError(
                "both slots are relative; the family is under-determined"
            )
        if up is None:
            up = down + self.slot_up.offset
        if down is None:
            down = up + self.slot_down.offset
        return up, down

    def instantiate(self, assignments: Mapping[str, PhaseAngle] | None = None) -> SpinState:
        """Fill every slot and return the resulting normalized state."""
        up, down = self._resolve(assignments or {})
        amp_up = self.magnitude * up.unit()
        amp_down = self.magnitude * down.unit()
        if self.basis == "z":
            return SpinState(amp_up, amp_down)
        up_basis = canonical_state(self.basis + "+")
        down_basis = canonical_state(self.basis + "-")
        return SpinState(
            amp_up * up_basis.a + amp_down * down_basis.a,
            amp_up * up_basis.b + amp_down * down_basis.b,
        )

    def to_json(self):
        return {
            "basis": self.basis,
            "magnitude": self.magnitude,
            "slot_up": self.slot_up.to_json(),
            "slot_down": self.slot_down.to_json(),
        }


@dataclass(frozen=True)
class Ansatz:
    """The raw guess A|up> + B|down> before any constraint is applied.

    ``None`` coefficients mean "still completely arbitrary"; the generic
    ansatz is the usual starting point of the deduction.
    """

    coeff_up: complex | None = None
    coeff_down: complex | None = None

    @staticmethod
    def generic() -> "Ansatz":
        return Ansatz(None, None)

    @property
    def is_generic(self) -> bool:
        return self.coeff_up is None and self.coeff_down is None


def _as_phase(value) -> PhaseAngle:
    if isinstance(value, PhaseAngle):
        return value
    if isinstance(value, (int, float)):
        return PhaseAngle.from_radians(float(value))
    if isinstance(value, str):
        return parse_phase(value)
    raise UsageError(f"cannot interpret {value!r} as a phase angle")


def _phases_close(a: PhaseAngle, b: PhaseAngle) -> bool:
    return abs((a - b).value) <= get_tolerance()


# --------------------------------------------------------------------------
# Constraint steps


def enforce_unbiased(
    ansatz: Ansatz,
    measured_axis: str = "z",
    *,
    symbols: tuple[str, str] = ("phi1", "phi2"),
) -> PhaseFamily:
    """Force zero expectation of the spin component along ``measured_axis``.

    For a normalized state the only solution is equal magnitudes 1/sqrt2
    for both eigenstate coefficients; the phases stay arbitrary. A generic
    ansatz yields a family with two free slots named after ``symbols``; a
    concrete ansatz must already satisfy the constraint, and its phases
    are recovered by argument extraction (snapped to exact form when they
    sit on a small rational multiple of pi).
    """
    if measured_axis not in ("x", "y", "z"):
        raise UsageError(f"unknown axis label {measured_axis!r}")
    if ansatz.is_generic:
        return PhaseFamily(
            FreeSlot(symbols[0]), FreeSlot(symbols[1]), basis=measured_axis
        )
    state = SpinState(ansatz.coeff_up or 0.0, ansatz.coeff_down or 0.0)
    state.require_normalized("ansatz")
    up_basis = canonical_state(measured_axis + "+")
    down_basis = canonical_state(measured_axis + "-")
    amp_up = inner_product(up_basis, state)
    amp_down = inner_product(down_basis, state)
    bias = abs(amp_up) ** 2 - abs(amp_down) ** 2
    # <S_axis> = bias / 2; zero expectation forces |A| = |B| = 1/sqrt2
    if abs(bias) > 2.0 * get_tolerance():
        raise ConstraintInfeasibleError(
            f"<S_{measured_axis}> = {bias / 2.0!r} for the supplied ansatz; "
            "an unbiased state needs equal magnitudes"
        )
    return PhaseFamily(
        FixedSlot(PhaseAngle.snap(cmath.phase(amp_up))),
        FixedSlot(PhaseAngle.snap(cmath.phase(amp_down))),
        basis=measured_axis,
    )


def fix_convention(
    family: PhaseFamily, assignments: Mapping[str, PhaseAngle] | None = None
) -> SpinState:
    """Assign every remaining free phase and instantiate the family.

    ``assignments`` must cover exactly the free symbols; a missing symbol
    raises UnresolvedSlotError, an unknown one UsageError.
    """
    assignments = {k: _as_phase(v) for k, v in (assignments or {}).items()}
    unknown = set(assignments) - set(family.free_symbols())
    if unknown:
        raise UsageError(
            f"assignments name phases not free in this family: {sorted(unknown)}"
        )
    return family.instantiate(assignments)


def _equal_magnitude_args(reference: SpinState, basis: str) -> tuple[float, float]:
    """Project ``reference`` on the family's basis; require the equal
    magnitudes that make phase-only orthogonalization possible."""
    up_basis = canonical_state(basis + "+")
    down_basis = canonical_state(basis + "-")
    ra = inner_product(up_basis, reference)
    rb = inner_product(down_basis, reference)
    if abs(abs(ra) - abs(rb)) > get_tolerance() or abs(rb) == 0.0:
        raise ConstraintInfeasibleError(
            "no phase assignment is Hilbert-orthogonal to the reference: "
            "its components in the family's basis have unequal magnitudes"
        )
    return cmath.phase(ra), cmath.phase(rb)


def enforce_hilbert_orthogonal(
    family: PhaseFamily, reference: SpinState
) -> PhaseFamily:
    """Constrain the family so every instantiation has zero inner product
    with ``reference``.

    The inner product (1/2)(e**(i(phi_up-ra)) + e**(i(phi_down-rb))) of two
    equal-magnitude states vanishes exactly when the two phases differ by
    pi; the surviving freedom is re-expressed as a relative slot.
    """
    reference.require_normalized("reference state")
    arg_up, arg_down = _equal_magnitude_args(reference, family.basis)
    # phi_down = phi_up + offset with offset = pi - arg_up + arg_down
    offset = (
        PhaseAngle.exact(1)
        + PhaseAngle.snap(arg_down)
        - PhaseAngle.snap(arg_up)
    )
    if isinstance(family.slot_down, RelativeSlot):
        if _phases_close(family.slot_down.offset, offset):
            return family
        raise ConstraintInfeasibleError(
            "family's relative phase is already pinned to an incompatible offset"
        )
    if isinstance(family.slot_up, RelativeSlot):
        if _phases_close(family.slot_up.offset, -offset):
            return family
        raise ConstraintInfeasibleError(
            "family's relative phase is already pinned to an incompatible offset"
        )
    if isinstance(family.slot_down, FreeSlot):
        return PhaseFamily(
            family.slot_up, RelativeSlot(offset), family.basis, family.magnitude
        )
    if isinstance(family.slot_up, FreeSlot):
        return PhaseFamily(
            RelativeSlot(-offset), family.slot_down, family.basis, family.magnitude
        )
    state = family.instantiate({})
    if abs(inner_product(reference, state)) <= get_tolerance():
        return family
    raise ConstraintInfeasibleError(
        "family is fully fixed and not orthogonal to the reference"
    )


@dataclass(frozen=True)
class YCandidatePair:
    """The two sign choices left for the y basis after geometric
    orthogonality to both z and x: relative phase +pi/2 (upper) or -pi/2
    (lower), each paired with its Hilbert-orthogonal partner."""

    upper: tuple[SpinState, SpinState]
    lower: tuple[SpinState, SpinState]
    upper_phases: tuple[PhaseAngle, PhaseAngle]
    lower_phases: tuple[PhaseAngle, PhaseAngle]

    def swapped(self) -> "YCandidatePair":
        return YCandidatePair(
            self.lower, self.upper, self.lower_phases, self.upper_phases
        )


def _relative_phase(state: SpinState) -> PhaseAngle:
    """arg(b) - arg(a) of a state with both components nonzero, snapped."""
    return PhaseAngle.snap(cmath.phase(state.b) - cmath.phase(state.a))


def candidate_y_pairs(
    x_up: SpinState | None = None,
    x_down: SpinState | None = None,
    *,
    phi_up: PhaseAngle | float | None = None,
    phi_down: PhaseAngle | float | None = None,
) -> YCandidatePair:
    """Solve the y-family constraint <S_x> = 0 over the deduced x basis.

    For the family (1/sqrt2)(e**(i phi_up), e**(i phi6)) the expectation of
    the x spin component is (1/2) cos(phi6 - phi_up - theta_x), where
    theta_x is the relative phase of the deduced x_up state. Forcing it to
    zero leaves exactly two choices, phi6 = phi_up + theta_x +/- pi/2; each
    is paired with the partner fixed by Hilbert orthogonality. ``phi_up``
    and ``phi_down`` are the overall-phase conventions of the two states.
    """
    if x_up is None:
        x_up = canonical_state("x+")
    if x_down is None:
        x_down = canonical_state("x-")
    x_up.require_normalized("x up state")
    x_down.require_normalized("x down state")
    phi_up = PhaseAngle.zero() if phi_up is None else _as_phase(phi_up)
    phi_down = PhaseAngle.zero() if phi_down is None else _as_phase(phi_down)
    theta_x = _relative_phase(x_up)
    half_pi = PhaseAngle.exact(1, 2)

    candidates = []
    for sign_angle in (half_pi, -half_pi):
        phi6 = phi_up + theta_x + sign_angle
        up_state = PhaseFamily(FixedSlot(phi_up), FixedSlot(phi6)).instantiate()
        down_family = enforce_hilbert_orthogonal(
            PhaseFamily(FixedSlot(phi_down), FreeSlot("phi8")), up_state
        )
        down_state = down_family.instantiate()
        phi8 = _relative_phase(down_state) + phi_down
        candidates.append(((up_state, down_state), (phi6, phi8)))
    (upper, upper_phases), (lower, lower_phases) = candidates
    return YCandidatePair(upper, lower, upper_phases, lower_phases)


@dataclass(frozen=True)
class HandednessSelection:
    """Outcome of the commutator test between the two y candidates."""

    chirality: str
    y_up: SpinState
    y_down: SpinState
    chosen: str  # "upper" | "lower"
    chosen_residual: float
    rejected_sign: int
    rejected_residual: float


def operator_from_pair(up: SpinState, down: SpinState) -> SpinOperator:
    """(1/2)(|up><up| - |down><down|): the spin component whose
    eigenstates are the given orthogonal pair."""
    return SpinOperator(
        0.5 * (projector(up).matrix - projector(down).matrix), hermitian=True
    )


def select_handedness(
    pair: YCandidatePair,
    s_x: SpinOperator | None = None,
    s_z: SpinOperator | None = None,
) -> HandednessSelection:
    """Pick the y candidate whose operators close right-handedly.

    Right-handed is *defined* as [S_x, S_y] = +i S_z, in analogy with the
    cross product n_x cross n_y = +n_z of a right-handed frame. The test
    builds S_y from each candidate pair and keeps the one matching the
    plus sign; the other candidate's sign is reported alongside.
    """
    if s_x is None:
        s_x = spin_operator("x")
    if s_z is None:
        s_z = spin_operator("z")
    tol = get_tolerance()
    i_s_z = SpinOperator(1j * s_z.matrix)

    verdicts = {}
    for name, (up, down) in (("upper", pair.upper), ("lower", pair.lower)):
        comm = commutator(s_x, operator_from_pair(up, down))
        dev_plus = comm.max_abs_diff(i_s_z)
        dev_minus = comm.max_abs_diff(-i_s_z)
        sign = +1 if dev_plus <= tol else (-1 if dev_minus <= tol else 0)
        verdicts[name] = (sign, min(dev_plus, dev_minus))

    chosen = next((n for n, (s, _) in verdicts.items() if s == +1), None)
    if chosen is None:
        raise NoRightHandedCandidateError(
            "neither y candidate satisfies [S_x, S_y] = +i S_z; "
            "the upstream deduction is inconsistent"
        )
    rejected = "lower" if chosen == "upper" else "upper"
    up, down = getattr(pair, chosen)
    return HandednessSelection(
        chirality=RIGHT_HANDED,
        y_up=up,
        y_down=down,
        chosen=chosen,
        chosen_residual=verdicts[chosen][1],
        rejected_sign=verdicts[rejected][0],
        rejected_residual=verdicts[rejected][1],
    )


# --------------------------------------------------------------------------
# Full pipeline and report


@dataclass(frozen=True)
class DeductionStep:
    """One logged constraint application."""

    name: str
    section: str
    family_before: PhaseFamily | None
    family_after: PhaseFamily | None
    conventions: dict
    details: dict

    def to_json(self):
        return {
            "name": self.name,
            "section": self.section,
            "family_before": self.family_before.to_json() if self.family_before else None,
            "family_after": self.family_after.to_json() if self.family_after else None,
            "conventions": dict(self.conventions),
            "details": dict(self.details),
        }


@dataclass(frozen=True)
class DeductionReport:
    """Ordered log of the whole deduction: constraints applied, conventions
    chosen, resulting states, chirality verdict, and verification checks."""

    steps: tuple[DeductionStep, ...]
    final_states: dict[str, SpinState]
    chirality: str
    verification: tuple[dict, ...]
    conventions: dict[str, PhaseAngle]

    def to_json(self):
        return {
            "steps": [s.to_json() for s in self.steps],
            "final_states": {
                name: _state_json(state) for name, state in self.final_states.items()
            },
            "chirality": self.chirality,
            "verification": [dict(v) for v in self.verification],
            "conventions": {k: v.to_json() for k, v in self.conventions.items()},
        }


def _state_json(state: SpinState) -> dict:
    return {
        "a": {"re": state.a.real + 0.0, "im": state.a.imag + 0.0},
        "b": {"re": state.b.real + 0.0, "im": state.b.imag + 0.0},
        "token": state.to_token(),
    }


_DEFAULT_CONVENTIONS = ("phi1", "phi2", "phi3", "phi5", "phi7")


def deduce_all(conventions: Mapping[str, object] | None = None) -> DeductionReport:
    """Run the full five-stage deduction pipeline.

    ``conventions`` may override any of the eliminable phases phi1, phi2
    (x up), phi3 (x down), phi5 (y up), phi7 (y down); all default to the
    conventional zero. With the defaults the final states are exactly
    x+ = (1,1)/sqrt2, x- = (1,-1)/sqrt2, y+ = (1,i)/sqrt2, y- = (1,-i)/sqrt2
    and the chirality verdict is right-handed.
    """
    chosen = {name: PhaseAngle.zero() for name in _DEFAULT_CONVENTIONS}
    for name, value in (conventions or {}).items():
        if name not in chosen:
            raise UsageError(
                f"unknown convention phase {name!r}; "
                f"expected one of {sorted(chosen)}"
            )
        chosen[name] = _as_phase(value)

    steps = []

    # Stage 1: magnitudes from geometric orthogonality to z.
    family_x = enforce_unbiased(Ansatz.generic(), "z", symbols=("phi1", "phi2"))
    steps.append(
        DeductionStep(
            name="x-unbiased",
            section="geometric-orthogonality",
            family_before=None,
            family_after=family_x,
            conventions={},
            details={
                "constraint": "<S_z> = 0",
                "magnitude": RSQRT2,
            },
        )
    )

    # Stage 2: phase convention for the x up state.
    x_up = fix_convention(
        family_x, {"phi1": chosen["phi1"], "phi2": chosen["phi2"]}
    )
    family_x_fixed = PhaseFamily(FixedSlot(chosen["phi1"]), FixedSlot(chosen["phi2"]))
    steps.append(
        DeductionStep(
            name="x-convention",
            section="phase-convention",
            family_before=family_x,
            family_after=family_x_fixed,
            conventions={
                "phi1": chosen["phi1"].to_json(),
                "phi2": chosen["phi2"].to_json(),
            },
            details={"state": _state_json(x_up)},
        )
    )

    # Stage 3: x down from Hilbert orthogonality to x up.
    family_xd = enforce_unbiased(Ansatz.generic(), "z", symbols=("phi3", "phi4"))
    family_xd_orth = enforce_hilbert_orthogonal(family_xd, x_up)
    x_down = fix_convention(family_xd_orth, {"phi3": chosen["phi3"]})
    steps.append(
        DeductionStep(
            name="x-down-orthogonality",
            section="linear-independence",
            family_before=family_xd,
            family_after=family_xd_orth,
            conventions={"phi3": chosen["phi3"].to_json()},
            details={
                "constraint": "<x_up | x_down> = 0",
                "offset": family_xd_orth.slot_down.offset.to_json(),
                "state": _state_json(x_down),
            },
        )
    )

    # Stage 4: the two y candidates from geometric orthogonality to x.
    pair = candidate_y_pairs(
        x_up, x_down, phi_up=chosen["phi5"], phi_down=chosen["phi7"]
    )
    family_y = PhaseFamily(FixedSlot(chosen["phi5"]), FreeSlot("phi6"))
    steps.append(
        DeductionStep(
            name="y-candidates",
            section="geometric-orthogonality",
            family_before=family_y,
            family_after=None,
            conventions={
                "phi5": chosen["phi5"].to_json(),
                "phi7": chosen["phi7"].to_json(),
            },
            details={
                "constraint": "<S_x> = 0",
                "phi6_solutions": [
                    pair.upper_phases[0].to_json(),
                    pair.lower_phases[0].to_json(),
                ],
                "upper": {
                    "y_up": _state_json(pair.upper[0]),
                    "y_down": _state_json(pair.upper[1]),
                },
                "lower": {
                    "y_up": _state_json(pair.lower[0]),
                    "y_down": _state_json(pair.lower[1]),
                },
            },
        )
    )

    # Stage 5: handedness by commutator sign.
    s_x = operator_from_pair(x_up, x_down)
    selection = select_handedness(pair, s_x=s_x)
    steps.append(
        DeductionStep(
            name="handedness",
            section="handedness",
            family_before=None,
            family_after=None,
            conventions={},
            details={
                "criterion": "[S_x, S_y] = +i S_z",
                "chosen": selection.chosen,
                "chosen_residual": selection.chosen_residual,
                "rejected_sign": selection.rejected_sign,
                "rejected_residual": selection.rejected_residual,
            },
        )
    )

    final_states = {
        "x_up": x_up,
        "x_down": x_down,
        "y_up": selection.y_up,
        "y_down": selection.y_down,
    }
    verification = _verify(final_states, s_x)
    return DeductionReport(
        steps=tuple(steps),
        final_states=final_states,
        chirality=selection.chirality,
        verification=tuple(verification),
        conventions=chosen,
    )


def _verify(final_states: dict[str, SpinState], s_x: SpinOperator) -> list[dict]:
    """Re-check every property the deduction promised, with residuals."""
    tol = get_tolerance()
    s_z = spin_operator("z")
    checks = []

    def record(name: str, residual: float):
        checks.append(
            {"check": name, "passed": bool(residual <= tol), "residual": float(residual)}
        )

    for name, state in final_states.items():
        record(f"normalized:{name}", abs(state.norm_sq - 1.0))
        record(f"sz-zero:{name}", abs(expectation(s_z, state)))
    for name in ("y_up", "y_down"):
        record(f"sx-zero:{name}", abs(expectation(s_x, final_states[name])))
    record(
        "hilbert-orthogonal:x",
        abs(inner_product(final_states["x_up"], final_states["x_down"])),
    )
    record(
        "hilbert-orthogonal:y",
        abs(inner_product(final_states["y_up"], final_states["y_down"])),
    )
    for axis, (up, down) in (
        ("x", (final_states["x_up"], final_states["x_down"])),
        ("y", (final_states["y_up"], final_states["y_down"])),
    ):
        completeness = (projector(up) + projector(down)).max_abs_diff(identity())
        record(f"completeness:{axis}", completeness)
    s_y = operator_from_pair(final_states["y_up"], final_states["y_down"])
    i_s_z = SpinOperator(1j * s_z.matrix)
    record("commutator-right-handed", commutator(s_x, s_y).max_abs_diff(i_s_z))
    return checks


@lru_cache(maxsize=1)
def _default_report() -> DeductionReport:
    return deduce_all()


def canonical_states() -> dict[str, SpinState]:
    """The six named states with x/y taken from the default deduction."""
    report = _default_report()
    return {
        "z+": canonical_state("z+"),
        "z-": canonical_state("z-"),
        "x+": report.final_states["x_up"],
        "x-": report.final_states["x_down"],
        "y+": report.final_states["y_up"],
        "y-": report.final_states["y_down"],
    }
