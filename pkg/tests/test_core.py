import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinhalf.core import (
    RSQRT2,
    Axis,
    SpinOperator,
    SpinState,
    axis_operator,
    bloch_vector,
    canonical_state,
    commutator,
    equatorial_state,
    expectation,
    identity,
    inner_product,
    normalize,
    projector,
    same_ray,
    spin_operator,
)
from spinhalf.errors import (
    NonHermitianObservableError,
    NotNormalizedError,
    UsageError,
    ZeroVectorError,
)
from spinhalf.phase import PhaseAngle

from conftest import random_axis, random_state

TOL = 1e-12


# Independent oracle matrices for expectation checks (hbar = 1).
SX = np.array([[0, 0.5], [0.5, 0]], dtype=complex)
SY = np.array([[0, -0.5j], [0.5j, 0]], dtype=complex)
SZ = np.array([[0.5, 0], [0, -0.5]], dtype=complex)


def oracle_expectation(matrix, state: SpinState) -> float:
    v = state.vector()
    return float(np.vdot(v, matrix @ v).real)


normalized_states = st.builds(
    lambda re_a, im_a, re_b, im_b: (re_a, im_a, re_b, im_b),
    *[st.floats(-1.0, 1.0) for _ in range(4)],
).filter(lambda t: sum(c * c for c in t) > 1e-6).map(
    lambda t: normalize(SpinState(complex(t[0], t[1]), complex(t[2], t[3])))
)


# -- inner product -----------------------------------------------------------


def test_inner_product_orthonormal_axioms():
    up = SpinState(1, 0)
    down = SpinState(0, 1)
    assert inner_product(up, up) == 1
    assert inner_product(down, down) == 1
    assert inner_product(up, down) == 0
    assert inner_product(down, up) == 0


def test_inner_product_x_basis_states_are_orthogonal():
    # phases 0 and pi: the two x states
    assert inner_product(canonical_state("x+"), canonical_state("x-")) == 0


def test_inner_product_conjugate_symmetry(rng):
    for _ in range(25):
        a, b = random_state(rng), random_state(rng)
        assert inner_product(a, b) == pytest.approx(
            inner_product(b, a).conjugate(), abs=TOL
        )


@given(normalized_states)
def test_inner_product_self_is_norm_sq_exactly(psi):
    value = inner_product(psi, psi)
    assert value.imag == 0.0
    assert value.real == psi.norm_sq


# -- expectation -------------------------------------------------------------


def test_expectation_equatorial_states_are_unbiased_in_z(rng):
    sz = spin_operator("z")
    for _ in range(50):
        phi1, phi2 = rng.uniform(-math.pi, math.pi, size=2)
        psi = SpinState(
            RSQRT2 * complex(math.cos(phi1), math.sin(phi1)),
            RSQRT2 * complex(math.cos(phi2), math.sin(phi2)),
        )
        assert abs(expectation(sz, psi)) <= TOL


def test_expectation_z_eigenstate():
    assert expectation(spin_operator("z"), SpinState(1, 0)) == 0.5


def test_expectation_sx_on_y_up_is_zero():
    assert abs(expectation(spin_operator("x"), canonical_state("y+"))) <= TOL


def test_expectation_requires_hermitian_flag():
    raising = SpinOperator(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NonHermitianObservableError):
        expectation(raising, SpinState(1, 0))


def test_expectation_requires_normalized_state():
    with pytest.raises(NotNormalizedError):
        expectation(spin_operator("z"), SpinState(1, 1))


def test_hermitian_flag_is_validated_at_construction():
    with pytest.raises(NonHermitianObservableError):
        SpinOperator(np.array([[0, 1], [0, 0]]), hermitian=True)


@given(normalized_states)
@settings(max_examples=60)
def test_expectation_bounded_by_half(psi):
    for label in "xyz":
        value = expectation(spin_operator(label), psi)
        assert -0.5 - TOL <= value <= 0.5 + TOL


def test_expectation_bounded_for_random_directions(rng):
    for _ in range(40):
        axis = random_axis(rng)
        value = expectation(axis.operator(), random_state(rng))
        assert -0.5 - TOL <= value <= 0.5 + TOL


# -- commutator and operator algebra ----------------------------------------


def test_commutator_cyclic_table():
    sx, sy, sz = (spin_operator(l) for l in "xyz")
    assert commutator(sx, sy).max_abs_diff(SpinOperator(1j * sz.matrix)) <= TOL
    assert commutator(sy, sz).max_abs_diff(SpinOperator(1j * sx.matrix)) <= TOL
    assert commutator(sz, sx).max_abs_diff(SpinOperator(1j * sy.matrix)) <= TOL


def test_commutator_of_operator_with_itself_vanishes():
    sz = spin_operator("z")
    assert commutator(sz, sz).max_abs_diff(SpinOperator(np.zeros((2, 2)))) == 0


def test_commutator_antisymmetry():
    sx, sy, sz = (spin_operator(l) for l in "xyz")
    assert commutator(sy, sx).max_abs_diff(SpinOperator(-1j * sz.matrix)) <= TOL


def test_commutator_result_not_hermitian_flagged():
    assert not commutator(spin_operator("x"), spin_operator("y")).hermitian


# -- projector ---------------------------------------------------------------


def test_projector_z_up():
    p = projector(SpinState(1, 0))
    assert np.array_equal(p.matrix, np.array([[1, 0], [0, 0]], dtype=complex))
    assert p.hermitian


def test_projector_x_up():
    p = projector(canonical_state("x+"))
    assert np.max(np.abs(p.matrix - 0.5 * np.ones((2, 2)))) <= TOL


def test_projector_y_up_frozen_value():
    # outer product computed independently: [[1/2, -i/2], [i/2, 1/2]]
    expected = np.array([[0.5, -0.5j], [0.5j, 0.5]])
    p = projector(canonical_state("y+"))
    assert np.max(np.abs(p.matrix - expected)) <= TOL


def test_projector_matches_outer_product_oracle(rng):
    for _ in range(20):
        psi = random_state(rng)
        v = psi.vector()
        assert np.max(np.abs(projector(psi).matrix - np.outer(v, v.conj()))) <= TOL


def test_projector_is_idempotent(rng):
    for _ in range(20):
        p = projector(random_state(rng))
        assert np.max(np.abs(p.matrix @ p.matrix - p.matrix)) <= TOL


def test_projector_requires_normalized():
    with pytest.raises(NotNormalizedError):
        projector(SpinState(2, 0))


def test_completeness_for_labels_and_random_axes(rng):
    for label in "xyz":
        total = projector(canonical_state(label + "+")) + projector(
            canonical_state(label + "-")
        )
        assert total.max_abs_diff(identity()) <= TOL
    for _ in range(30):
        axis = random_axis(rng)
        total = projector(axis.up_state()) + projector(axis.down_state())
        assert total.max_abs_diff(identity()) <= TOL


# -- spin_operator / axis_operator -------------------------------------------


def test_spin_operator_matrices():
    assert np.array_equal(
        spin_operator("z").matrix, np.array([[0.5, 0], [0, -0.5]], dtype=complex)
    )
    assert np.array_equal(
        spin_operator("x").matrix, np.array([[0, 0.5], [0.5, 0]], dtype=complex)
    )
    assert np.array_equal(
        spin_operator("y").matrix, np.array([[0, -0.5j], [0.5j, 0]], dtype=complex)
    )


def test_spin_operator_y_closes_the_algebra():
    # the cached S_y must reproduce [S_x, S_y] = i S_z
    sx, sy, sz = (spin_operator(l) for l in "xyz")
    assert commutator(sx, sy).max_abs_diff(SpinOperator(1j * sz.matrix)) <= TOL


def test_spin_operator_rejects_unknown_label():
    with pytest.raises(UsageError):
        spin_operator("w")


def test_axis_operator_poles_and_equator():
    assert axis_operator(0.0, 0.0).max_abs_diff(spin_operator("z")) == 0
    assert axis_operator(math.pi / 2, 0.0).max_abs_diff(spin_operator("x")) <= TOL
    assert (
        axis_operator(math.pi / 2, math.pi / 2).max_abs_diff(spin_operator("y")) <= TOL
    )


def test_axis_operator_diagonal_direction():
    op = axis_operator(math.pi / 2, math.pi / 4)
    expected = (SX + SY) / math.sqrt(2)
    assert np.max(np.abs(op.matrix - expected)) <= TOL
    eigenvalues = np.linalg.eigvalsh(op.matrix)
    assert np.max(np.abs(np.sort(eigenvalues) - np.array([-0.5, 0.5]))) <= TOL


def test_axis_operator_eigenvalues_random(rng):
    for _ in range(25):
        axis = random_axis(rng)
        eigenvalues = np.sort(np.linalg.eigvalsh(axis.operator().matrix))
        assert np.max(np.abs(eigenvalues - np.array([-0.5, 0.5]))) <= TOL


def test_axis_operator_validates_angles():
    with pytest.raises(UsageError):
        axis_operator(-0.1, 0.0)
    with pytest.raises(UsageError):
        axis_operator(math.pi + 0.1, 0.0)


# -- bloch vector -------------------------------------------------------------


def test_bloch_vector_cardinal_states():
    assert bloch_vector(SpinState(1, 0)) == (0.0, 0.0, 1.0)
    x = bloch_vector(canonical_state("x+"))
    assert abs(x[0] - 1) <= TOL and abs(x[1]) <= TOL and abs(x[2]) <= TOL
    y = bloch_vector(canonical_state("y+"))
    assert abs(y[0]) <= TOL and abs(y[1] - 1) <= TOL and abs(y[2]) <= TOL


def test_bloch_vector_matches_expectation_oracle(rng):
    for _ in range(30):
        psi = random_state(rng)
        expected = tuple(2 * oracle_expectation(m, psi) for m in (SX, SY, SZ))
        assert bloch_vector(psi) == pytest.approx(expected, abs=TOL)


def test_bloch_vector_unit_norm(rng):
    for _ in range(30):
        vec = bloch_vector(random_state(rng))
        assert abs(math.sqrt(sum(c * c for c in vec)) - 1.0) <= 1e-10


def test_bloch_round_trip_through_axis_eigenstates(rng):
    for _ in range(30):
        theta = float(rng.uniform(0, math.pi))
        phi = float(rng.uniform(0, 2 * math.pi))
        vec = bloch_vector(Axis.from_direction(theta, phi).up_state())
        expected = (
            math.sin(theta) * math.cos(phi),
            math.sin(theta) * math.sin(phi),
            math.cos(theta),
        )
        assert vec == pytest.approx(expected, abs=TOL)


def test_bloch_requires_normalized():
    with pytest.raises(NotNormalizedError):
        bloch_vector(SpinState(1, 1))


# -- equatorial states ---------------------------------------------------------


def test_equatorial_hits_the_four_cardinal_points():
    assert equatorial_state(PhaseAngle.exact(0)) == canonical_state("x+")
    assert equatorial_state(PhaseAngle.exact(1)) == canonical_state("x-")
    assert equatorial_state(PhaseAngle.exact(1, 2)) == canonical_state("y+")
    assert equatorial_state(PhaseAngle.exact(-1, 2)) == canonical_state("y-")


def test_equatorial_bloch_parametrization(rng):
    for _ in range(30):
        theta = float(rng.uniform(-math.pi, math.pi))
        vec = bloch_vector(equatorial_state(theta))
        assert vec == pytest.approx(
            (math.cos(theta), math.sin(theta), 0.0), abs=TOL
        )


# -- same_ray and normalize ----------------------------------------------------


def test_same_ray_global_phase():
    assert same_ray(SpinState(1, 0), SpinState(1j, 0))
    assert not same_ray(SpinState(1, 0), SpinState(0, 1))


def test_same_ray_common_phase_factor():
    phase = complex(math.cos(math.pi / 3), math.sin(math.pi / 3))
    a = canonical_state("x+")
    b = SpinState(phase * RSQRT2, phase * RSQRT2)
    assert same_ray(a, b)


def test_same_ray_is_an_equivalence(rng):
    for _ in range(20):
        base = random_state(rng)
        phases = [
            complex(math.cos(t), math.sin(t))
            for t in rng.uniform(-math.pi, math.pi, size=3)
        ]
        family = [SpinState(p * base.a, p * base.b) for p in phases]
        for s in family:
            assert same_ray(s, s)
        for s in family:
            for t in family:
                assert same_ray(s, t) == same_ray(t, s)
                assert same_ray(s, t)  # shared ray: transitivity holds


def test_same_ray_requires_normalized():
    with pytest.raises(NotNormalizedError):
        same_ray(SpinState(2, 0), SpinState(1, 0))


def test_normalize_examples():
    assert normalize(SpinState(2, 0)) == SpinState(1, 0)
    n = normalize(SpinState(1, 1))
    assert n.a == pytest.approx(RSQRT2, abs=TOL)
    assert n.b == pytest.approx(RSQRT2, abs=TOL)
    with pytest.raises(ZeroVectorError):
        normalize(SpinState(0, 0))


def test_states_must_be_finite():
    with pytest.raises(ValueError):
        SpinState(float("nan"), 0)
    with pytest.raises(ValueError):
        SpinState(0, complex(0, float("inf")))


# -- Axis ----------------------------------------------------------------------


def test_axis_labels_map_to_canonical_directions():
    assert Axis.from_label("x").theta == math.pi / 2
    assert Axis.from_label("x").phi == 0.0
    assert Axis.from_label("y").phi == math.pi / 2
    assert Axis.from_label("z").theta == 0.0


def test_axis_label_eigenstates_are_canonical():
    for label in "xyz":
        assert Axis.from_label(label).up_state() == canonical_state(label + "+")
        assert Axis.from_label(label).down_state() == canonical_state(label + "-")


def test_axis_direction_eigenstates_are_orthonormal(rng):
    for _ in range(20):
        axis = random_axis(rng)
        up, down = axis.up_state(), axis.down_state()
        assert abs(up.norm_sq - 1) <= TOL
        assert abs(down.norm_sq - 1) <= TOL
        assert abs(inner_product(up, down)) <= TOL
        assert expectation(axis.operator(), up) == pytest.approx(0.5, abs=TOL)
        assert expectation(axis.operator(), down) == pytest.approx(-0.5, abs=TOL)


def test_axis_parse():
    assert Axis.parse("y").label == "y"
    direction = Axis.parse("1.2/0.7")
    assert direction.label is None
    assert direction.theta == 1.2
    assert direction.phi == 0.7
    with pytest.raises(UsageError):
        Axis.parse("w")
    with pytest.raises(UsageError):
        Axis.parse("1.2/0.7/3")
