"""Complex linear algebra on the two-dimensional spin-1/2 Hilbert space.

States are coefficient pairs over the ordered basis {|up_z>, |down_z>};
operators are 2x2 complex matrices over the same basis, stored row-major.
Everything is immutable and every operation is a pure function, so values
can be shared freely across threads.

Units: hbar = 1 throughout. Spin component values are +/-1/2 and the
commutator algebra closes as [S_x, S_y] = i S_z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import get_tolerance
from .errors import (
    NonHermitianObservableError,
    NotNormalizedError,
    UsageError,
    ZeroVectorError,
)
from .phase import PhaseAngle

RSQRT2 = math.sqrt(0.5)

__all__ = [
    "RSQRT2",
    "Axis",
    "SpinOperator",
    "SpinState",
    "axis_operator",
    "bloch_vector",
    "canonical_state",
    "commutator",
    "equatorial_state",
    "expectation",
    "identity",
    "inner_product",
    "normalize",
    "projector",
    "same_ray",
    "spin_operator",
]


def _finite_complex(z, what: str) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{what} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class SpinState:
    """A spinor a|up_z> + b|down_z>, not necessarily normalized."""

    a: complex
    b: complex

    def __post_init__(self):
        object.__setattr__(self, "a", _finite_complex(self.a, "amplitude a"))
        object.__setattr__(self, "b", _finite_complex(self.b, "amplitude b"))

    @property
    def norm_sq(self) -> float:
        return (self.a.conjugate() * self.a).real + (self.b.conjugate() * self.b).real

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_sq - 1.0) <= get_tolerance()

    def require_normalized(self, what: str = "state") -> "SpinState":
        if not self.is_normalized:
            raise NotNormalizedError(
                f"{what} has squared norm {self.norm_sq!r}, expected 1"
            )
        return self

    def vector(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=np.complex128)

    def to_token(self) -> str:
        """Raw state-string form ``re,im;re,im`` (round-trips exactly)."""
        return (
            f"{self.a.real!r},{self.a.imag!r};{self.b.real!r},{self.b.imag!r}"
        )


def inner_product(bra: SpinState, ket: SpinState) -> complex:
    """Hilbert-space inner product <bra|ket> over the z basis.

    The z basis states are axioms: orthonormal and complete, so the inner
    product is conj(bra.a)*ket.a + conj(bra.b)*ket.b.
    """
    return bra.a.conjugate() * ket.a + bra.b.conjugate() * ket.b


def normalize(psi: SpinState) -> SpinState:
    """Scale ``psi`` to unit norm. Raises ZeroVectorError on (0, 0)."""
    norm = math.sqrt(psi.norm_sq)
    if norm < 1e-300:
        raise ZeroVectorError("cannot normalize a zero state vector")
    return SpinState(psi.a / norm, psi.b / norm)


def same_ray(a: SpinState, b: SpinState) -> bool:
    """True when the two normalized states differ only by a global phase."""
    a.require_normalized("first state")
    b.require_normalized("second state")
    return abs(abs(inner_product(a, b)) - 1.0) <= get_tolerance()


@dataclass(frozen=True, eq=False)
class SpinOperator:
    """A 2x2 complex operator over the ordered z basis.

    The hermitian flag marks observables; setting it on a matrix that is
    not equal to its conjugate transpose (within tolerance) is an error.
    """

    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"operator matrix must be 2x2, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(np.float64))):
            raise ValueError("operator entries must be finite")
        if self.hermitian and np.max(np.abs(m - m.conj().T)) > get_tolerance():
            raise NonHermitianObservableError(
                "hermitian flag set on a non-hermitian matrix"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, psi: SpinState) -> SpinState:
        out = self.matrix @ psi.vector()
        return SpinState(complex(out[0]), complex(out[1]))

    def dagger(self) -> "SpinOperator":
        return SpinOperator(self.matrix.conj().T, hermitian=self.hermitian)

    def max_abs_diff(self, other: "SpinOperator") -> float:
        return float(np.max(np.abs(self.matrix - other.matrix)))

    def isclose(self, other: "SpinOperator", tol: float | None = None) -> bool:
        if tol is None:
            tol = get_tolerance()
        return self.max_abs_diff(other) <= tol

    def __add__(self, other: "SpinOperator") -> "SpinOperator":
        return SpinOperator(
            self.matrix + other.matrix,
            hermitian=self.hermitian and other.hermitian,
        )

    def __sub__(self, other: "SpinOperator") -> "SpinOperator":
        return SpinOperator(
            self.matrix - other.matrix,
            hermitian=self.hermitian and other.hermitian,
        )

    def __neg__(self) -> "SpinOperator":
        return SpinOperator(-self.matrix, hermitian=self.hermitian)

    def __mul__(self, scalar) -> "SpinOperator":
        scalar = complex(scalar)
        keeps_hermitian = self.hermitian and scalar.imag == 0.0
        return SpinOperator(self.matrix * scalar, hermitian=keeps_hermitian)

    __rmul__ = __mul__

    def __matmul__(self, other: "SpinOperator") -> "SpinOperator":
        return SpinOperator(self.matrix @ other.matrix)


def identity() -> SpinOperator:
    return SpinOperator(np.eye(2, dtype=np.complex128), hermitian=True)


def expectation(op: SpinOperator, psi: SpinState) -> float:
    """<psi|op|psi> for a hermitian operator and a normalized state.

    The result is real by construction; any imaginary residue beyond the
    tolerance indicates a broken hermitian flag and raises.
    """
    if not op.hermitian:
        raise NonHermitianObservableError(
            "expectation value requires an operator with the hermitian flag"
        )
    psi.require_normalized()
    v = psi.vector()
    value = complex(np.vdot(v, op.matrix @ v))
    if abs(value.imag) > get_tolerance():
        raise NonHermitianObservableError(
            f"expectation produced imaginary residue {value.imag!r}"
        )
    return value.real


def commutator(a: SpinOperator, b: SpinOperator) -> SpinOperator:
    """[a, b] = a b - b a. Never hermitian-flagged (it is anti-hermitian
    for hermitian inputs)."""
    return SpinOperator(a.matrix @ b.matrix - b.matrix @ a.matrix)


def projector(psi: SpinState) -> SpinOperator:
    """|psi><psi| for a normalized state; hermitian and idempotent."""
    psi.require_normalized()
    v = psi.vector()
    return SpinOperator(np.outer(v, v.conj()), hermitian=True)


_CANONICAL = {
    "z+": SpinState(1.0, 0.0),
    "z-": SpinState(0.0, 1.0),
    "x+": SpinState(RSQRT2, RSQRT2),
    "x-": SpinState(RSQRT2, -RSQRT2),
    "y+": SpinState(RSQRT2, RSQRT2 * 1j),
    "y-": SpinState(RSQRT2, -RSQRT2 * 1j),
}


def canonical_state(name: str) -> SpinState:
    """One of the six conventional basis states: z+, z-, x+, x-, y+, y-.

    The z pair is axiomatic; the x and y pairs are the conventional results
    of the basis deduction (see :mod:`spinhalf.deduction`, which re-derives
    them and checks agreement with these constants).
    """
    try:
        return _CANONICAL[name]
    except KeyError:
        raise UsageError(f"unknown basis state name {name!r}") from None


# S_y is not an axiom here: it is the operator built from the deduced
# right-handed y states. The matrix below is that cached consequence; the
# deduction module's verification recomputes it from first principles.
_SPIN_MATRICES = {
    "z": np.array([[0.5, 0.0], [0.0, -0.5]], dtype=np.complex128),
    "x": np.array([[0.0, 0.5], [0.5, 0.0]], dtype=np.complex128),
    "y": np.array([[0.0, -0.5j], [0.5j, 0.0]], dtype=np.complex128),
}


def spin_operator(axis: str) -> SpinOperator:
    """The spin component operator S_x, S_y or S_z in hbar = 1 units."""
    if axis not in _SPIN_MATRICES:
        raise UsageError(f"unknown spin axis label {axis!r}")
    return SpinOperator(_SPIN_MATRICES[axis], hermitian=True)


def axis_operator(theta: float, phi: float) -> SpinOperator:
    """Spin component along the unit direction (theta, phi).

    Returns sin(theta)cos(phi) S_x + sin(theta)sin(phi) S_y + cos(theta) S_z,
    hermitian with eigenvalues +/-1/2.
    """
    theta, phi = _check_direction(theta, phi)
    st, ct = math.sin(theta), math.cos(theta)
    m = (
        st * math.cos(phi) * _SPIN_MATRICES["x"]
        + st * math.sin(phi) * _SPIN_MATRICES["y"]
        + ct * _SPIN_MATRICES["z"]
    )
    return SpinOperator(m, hermitian=True)


def _check_direction(theta: float, phi: float) -> tuple[float, float]:
    theta = float(theta)
    phi = float(phi)
    if not (math.isfinite(theta) and math.isfinite(phi)):
        raise UsageError("direction angles must be finite")
    if not 0.0 <= theta <= math.pi:
        raise UsageError(f"polar angle must lie in [0, pi], got {theta!r}")
    phi = math.fmod(phi, math.tau)
    if phi < 0.0:
        phi += math.tau
    return theta, phi


@dataclass(frozen=True)
class Axis:
    """A measurement axis: a named label (x, y, z) or a free direction.

    Labeled axes correspond to the directions (pi/2, 0), (pi/2, pi/2) and
    (0, 0); their eigenstates are the canonical six, bit-identical to
    :func:`canonical_state`.
    """

    label: str | None
    theta: float
    phi: float

    _LABEL_DIRECTIONS = {
        "x": (math.pi / 2, 0.0),
        "y": (math.pi / 2, math.pi / 2),
        "z": (0.0, 0.0),
    }

    @staticmethod
    def from_label(label: str) -> "Axis":
        if label not in Axis._LABEL_DIRECTIONS:
            raise UsageError(f"unknown axis label {label!r}")
        theta, phi = Axis._LABEL_DIRECTIONS[label]
        return Axis(label, theta, phi)

    @staticmethod
    def from_direction(theta: float, phi: float) -> "Axis":
        theta, phi = _check_direction(theta, phi)
        return Axis(None, theta, phi)

    @staticmethod
    def parse(text) -> "Axis":
        """Accept an Axis, a label, or a ``theta/phi`` radians pair."""
        if isinstance(text, Axis):
            return text
        if not isinstance(text, str):
            raise UsageError(f"cannot interpret {text!r} as an axis")
        cleaned = text.strip()
        if cleaned in Axis._LABEL_DIRECTIONS:
            return Axis.from_label(cleaned)
        if "/" in cleaned:
            parts = cleaned.split("/")
            if len(parts) == 2:
                try:
                    return Axis.from_direction(float(parts[0]), float(parts[1]))
                except ValueError:
                    pass
        raise UsageError(f"malformed axis {text!r} (use x, y, z or theta/phi)")

    def up_state(self) -> SpinState:
        """The +1/2 eigenstate of this axis' spin component."""
        if self.label is not None:
            return canonical_state(self.label + "+")
        half = self.theta / 2.0
        return SpinState(
            math.cos(half),
            math.sin(half) * complex(math.cos(self.phi), math.sin(self.phi)),
        )

    def down_state(self) -> SpinState:
        """The -1/2 eigenstate, Hilbert-orthogonal to :meth:`up_state`."""
        if self.label is not None:
            return canonical_state(self.label + "-")
        half = self.theta / 2.0
        return SpinState(
            math.sin(half),
            -math.cos(half) * complex(math.cos(self.phi), math.sin(self.phi)),
        )

    def operator(self) -> SpinOperator:
        if self.label is not None:
            return spin_operator(self.label)
        return axis_operator(self.theta, self.phi)

    def to_json(self):
        if self.label is not None:
            return self.label
        return {"theta": self.theta, "phi": self.phi}

    def describe(self) -> str:
        if self.label is not None:
            return self.label
        return f"{self.theta:.6g}/{self.phi:.6g}"


def bloch_vector(psi: SpinState) -> tuple[float, float, float]:
    """The Bloch vector (2<S_x>, 2<S_y>, 2<S_z>) of a normalized state.

    Unit-length for pure states; the components are the closed forms
    2 Re(a* b), 2 Im(a* b), |a|^2 - |b|^2.
    """
    psi.require_normalized()
    cross = psi.a.conjugate() * psi.b
    z = (psi.a.conjugate() * psi.a).real - (psi.b.conjugate() * psi.b).real
    # "+ 0.0" normalizes IEEE negative zeros for stable serialization
    return (2.0 * cross.real + 0.0, 2.0 * cross.imag + 0.0, z + 0.0)


def equatorial_state(theta) -> SpinState:
    """(1/sqrt2)(|up_z> + e**(i theta) |down_z>).

    These are exactly the normalized states with <S_z> = 0; theta picks the
    direction of the Bloch vector (cos theta, sin theta, 0) in the
    equatorial plane. Accepts a PhaseAngle or plain radians.
    """
    if not isinstance(theta, PhaseAngle):
        theta = PhaseAngle.from_radians(float(theta))
    return SpinState(RSQRT2, RSQRT2 * theta.unit())
