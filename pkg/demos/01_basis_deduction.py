"""Walk the x/y basis deduction stage by stage.

Everything below starts from the z-basis axioms alone. We write the
candidate states as magnitude-and-phase ansatzes, then let constraints
eliminate the freedom one property at a time:

  1. zero <S_z> pins both magnitudes to 1/sqrt2 (two free phases remain),
  2. a phase convention fixes the x_up phases to zero,
  3. Hilbert orthogonality to x_up forces the partner phase to differ by pi,
  4. zero <S_x> leaves exactly two sign choices for the y family,
  5. the commutator test [S_x, S_y] = +i S_z picks the right-handed one.
"""

import json

from spinhalf import deduce_all
from spinhalf.api import serialize_state


def show_state(name, state):
    print(f"    {name:7s} a = {state.a:+.6f}   b = {state.b:+.6f}")


report = deduce_all()

print("Five constraint stages:")
for step in report.steps:
    print(f"  [{step.section}] {step.name}")
    if step.conventions:
        chosen = ", ".join(f"{k} = {v}" for k, v in step.conventions.items())
        print(f"    conventions: {chosen}")
    if "constraint" in step.details:
        print(f"    constraint:  {step.details['constraint']}")
    if "offset" in step.details:
        print(f"    solved offset: {step.details['offset']}")
    if "phi6_solutions" in step.details:
        print(f"    phi6 candidates: {step.details['phi6_solutions']}")
    if "chosen" in step.details:
        print(
            f"    chose the {step.details['chosen']} sign; the rejected "
            f"candidate closes with sign {step.details['rejected_sign']:+d}"
        )

print("\nDeduced basis states (coefficients over |up_z>, |down_z>):")
for name, state in report.final_states.items():
    show_state(name, state)
print(f"\nchirality verdict: {report.chirality}")

print("\nVerification residuals:")
for entry in report.verification:
    flag = "ok " if entry["passed"] else "BAD"
    print(f"  {flag} {entry['check']:32s} {entry['residual']:.3e}")

# The eliminable phases are genuinely free: overriding them only shifts
# global phases. Compare the default x_up with a pi/4-rotated convention.
rotated = deduce_all({"phi1": "pi/4", "phi2": "pi/4"})
state = rotated.final_states["x_up"]
print("\nWith phi1 = phi2 = pi/4 the x_up state is the same ray:")
show_state("x_up'", state)
print("  serialized:", json.dumps(serialize_state(state)))
