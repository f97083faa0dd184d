"""Bloch-sphere kinematics: where "geometric orthogonality" lives.

Two different notions of orthogonality coexist for spin-1/2 states:

- *geometric*: the Bloch vectors point in perpendicular spatial
  directions (zero expectation of the perpendicular spin component);
- *Hilbert*: the inner product of the state vectors vanishes.

The x+ and z+ states are geometrically orthogonal yet far from Hilbert
orthogonal; z+ and z- are Hilbert orthogonal yet point in *opposite*
(not perpendicular) spatial directions. The equatorial family makes the
first notion tangible: sweeping its phase walks the Bloch vector around
the equator.
"""

import math

import numpy as np

from spinhalf import bloch_vector, canonical_state, equatorial_state, inner_product

print("Canonical states, Bloch vectors, and overlaps with z+:")
z_up = canonical_state("z+")
for name in ("z+", "z-", "x+", "x-", "y+", "y-"):
    state = canonical_state(name)
    bx, by, bz = bloch_vector(state)
    overlap = abs(inner_product(z_up, state))
    print(
        f"  {name}: bloch = ({bx:+.3f}, {by:+.3f}, {bz:+.3f})"
        f"   |<z+|state>| = {overlap:.4f}"
    )

print("\nEquatorial sweep: theta -> Bloch vector (cos theta, sin theta, 0)")
for theta in np.linspace(0.0, 2.0 * math.pi, 9, endpoint=True):
    state = equatorial_state(float(theta))
    bx, by, bz = bloch_vector(state)
    bar = int(round((bx + 1) * 20))
    print(f"  theta = {theta:5.2f}   ({bx:+.3f}, {by:+.3f}, {bz:+.3f})   " + "·" * bar)

# Optional figure: the equatorial circle in the xy plane of the sphere.
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\n(matplotlib not installed; skipping the figure)")
else:
    thetas = np.linspace(0, 2 * math.pi, 200)
    vectors = np.array([bloch_vector(equatorial_state(float(t))) for t in thetas])
    fig, (left, right) = plt.subplots(1, 2, figsize=(8, 4))
    left.plot(vectors[:, 0], vectors[:, 1])
    left.set_title("equatorial family, xy disc")
    left.set_aspect("equal")
    for name in ("z+", "x+", "y+"):
        bx, by, bz = bloch_vector(canonical_state(name))
        left.annotate(name, (bx, by))
        right.annotate(name, (bx, bz))
    right.scatter(*zip(*[(bloch_vector(canonical_state(n))[0],
                          bloch_vector(canonical_state(n))[2])
                         for n in ("z+", "z-", "x+", "x-")]))
    right.set_title("cardinal states, xz disc")
    right.set_aspect("equal")
    fig.tight_layout()
    fig.savefig("bloch_geometry.png", dpi=120)
    print("\nwrote bloch_geometry.png")
