"""Exact Weyl-algebra rewriting and the handedness of [L_x, L_y].

The commutator sign of angular momentum components is a Hilbert-space
fingerprint of coordinate handedness, the same information a cross
product of unit vectors carries in geometric space. The rewriter below
works with exact Gaussian-rational coefficients, so the identities hold
*exactly*, not within a tolerance.
"""

from spinhalf.weyl import (
    Handedness,
    angular_momentum,
    commute,
    normal_order,
    parse,
    verify_orbital_commutator,
)

print("Normal ordering inserts commutator corrections:")
for text in ("pz*z", "py*x", "pz*z*pz*z"):
    print(f"  {text:10s} -> {parse(text)}")

print("\nSingle canonical pairs:")
print("  [z, pz] =", commute(parse("z"), parse("pz")))
print("  [x, py] =", commute(parse("x"), parse("py")))

for handedness in (Handedness.RIGHT, Handedness.LEFT):
    l_x, l_y, l_z = angular_momentum(handedness)
    label = handedness.name.lower()
    print(f"\n{label}-handed frame:")
    print(f"  L_x = {l_x}")
    print(f"  L_y = {l_y}")
    print(f"  L_z = {l_z}")
    print(f"  [L_x, L_y] = {commute(l_x, l_y)}")
    check = verify_orbital_commutator(handedness)
    print(
        f"  closes as ({check.sign:+d}) * i*hbar*L_z with residual "
        f"{check.residual} (exact)"
    )

print("\nCyclic closure in the right-handed frame:")
l_x, l_y, l_z = angular_momentum(Handedness.RIGHT)
i_hbar = parse("i*hbar")
for name, lhs, rhs in (
    ("[L_x, L_y] - i*hbar*L_z", commute(l_x, l_y), i_hbar * l_z),
    ("[L_y, L_z] - i*hbar*L_x", commute(l_y, l_z), i_hbar * l_x),
    ("[L_z, L_x] - i*hbar*L_y", commute(l_z, l_x), i_hbar * l_y),
):
    print(f"  {name} = {lhs - rhs}")

print("\nRewriting is confluent; both scan orders agree:")
word = ("pz", "z", "px", "x", "py", "y")
print("  word:", "*".join(word))
print("  leftmost :", normal_order(word, "leftmost"))
print("  rightmost:", normal_order(word, "rightmost"))
print("  equal:", normal_order(word, "leftmost") == normal_order(word, "rightmost"))
