"""Command dispatch shared by the CLI and the HTTP service.

Both surfaces are thin wrappers over :func:`execute_command`: they build a
CommandRequest, receive an ApiEnvelope, and emit its canonical JSON bytes.
Because the bytes are rendered in one place, the HTTP payload for a
command is byte-identical to the CLI ``--json`` output for equivalent
inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import jsonschema
import numpy as np

from . import __version__
from .core import Axis, SpinState, bloch_vector, commutator, spin_operator
from .deduction import canonical_states, deduce_all, operator_from_pair
from .errors import SpinHalfError, UsageError
from .measurement import (
    ChainSpec,
    ChainStatistics,
    Stage,
    measure_once,
    probabilities,
    resolve_state,
    run_chain,
)
from .weyl import Handedness, angular_momentum, verify_orbital_commutator

__all__ = [
    "ApiEnvelope",
    "CommandRequest",
    "execute_command",
    "load_schema",
    "parse_stage_list",
    "render_envelope",
]


@dataclass(frozen=True)
class CommandRequest:
    """A command name plus its per-command options map."""

    command: str
    options: dict


@dataclass(frozen=True)
class ApiEnvelope:
    """Uniform response wrapper: exactly one of result/error is set."""

    ok: bool
    version: str
    result: dict | None = None
    error: dict | None = None

    def to_json(self) -> dict:
        body = {"ok": self.ok, "version": self.version}
        if self.ok:
            body["result"] = self.result
        else:
            body["error"] = self.error
        return body

    @property
    def exit_code(self) -> int:
        if self.ok:
            return 0
        return 2 if self.error["code"] in ("UsageError", "NotFound") else 1

    @property
    def http_status(self) -> int:
        if self.ok:
            return 200
        code = self.error["code"]
        if code == "NotFound":
            return 404
        return 400 if code == "UsageError" else 422


def render_envelope(envelope: ApiEnvelope) -> bytes:
    """Canonical JSON bytes: sorted keys, compact separators, newline
    terminated. Both output surfaces emit exactly these bytes."""
    text = json.dumps(
        envelope.to_json(), sort_keys=True, separators=(",", ":"), allow_nan=False
    )
    return (text + "\n").encode("ascii")


def success(result: dict) -> ApiEnvelope:
    return ApiEnvelope(ok=True, version=__version__, result=result)


def failure(exc: SpinHalfError) -> ApiEnvelope:
    error = {"code": exc.code, "message": exc.message}
    if exc.position is not None:
        error["position"] = exc.position
    return ApiEnvelope(ok=False, version=__version__, error=error)


def not_found(path: str) -> ApiEnvelope:
    return ApiEnvelope(
        ok=False,
        version=__version__,
        error={"code": "NotFound", "message": f"no such endpoint {path!r}"},
    )


# --------------------------------------------------------------------------
# Serialization helpers (all floats are emitted via repr: 17 significant
# digits, shortest round-trip)


def _f(value: float) -> float:
    return float(value) + 0.0  # normalizes -0.0


def serialize_state(state: SpinState) -> dict:
    return {
        "a": {"re": _f(state.a.real), "im": _f(state.a.imag)},
        "b": {"re": _f(state.b.real), "im": _f(state.b.imag)},
        "token": state.to_token(),
    }


def serialize_matrix(matrix) -> list:
    return [
        [{"re": _f(cell.real), "im": _f(cell.imag)} for cell in row]
        for row in matrix.tolist()
    ]


def serialize_chain_statistics(stats: ChainStatistics) -> dict:
    return {
        "preparation": serialize_state(stats.preparation),
        "shots": stats.shots,
        "seed_used": stats.seed_used,
        "per_stage": [
            {
                "axis": s.axis.to_json(),
                "selected_port": s.selected_port,
                "up_count": s.up_count,
                "down_count": s.down_count,
                "transmitted_count": s.transmitted_count,
                "p_up": _f(s.p_up),
                "p_down": _f(s.p_down),
                "entry_state": serialize_state(s.entry_state),
                "entry_bloch": [_f(c) for c in s.entry_bloch],
            }
            for s in stats.per_stage
        ],
        "final_probability_exact": _f(stats.final_probability_exact),
        "final_frequency": _f(stats.final_frequency),
        "survivors": stats.survivors,
    }


# --------------------------------------------------------------------------
# Request parsing helpers


def parse_state_option(value) -> SpinState:
    """A state option is a token string or an {a: {re, im}, b: {re, im}}
    object (the ``token`` field of emitted states round-trips here)."""
    if isinstance(value, dict):
        try:
            a = complex(float(value["a"]["re"]), float(value["a"]["im"]))
            b = complex(float(value["b"]["re"]), float(value["b"]["im"]))
        except (KeyError, TypeError, ValueError):
            raise UsageError(f"malformed state object {value!r}") from None
        try:
            return SpinState(a, b)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return resolve_state(value)


def parse_axis_option(value) -> Axis:
    """An axis option is a label, a ``theta/phi`` string, or an object
    {theta, phi} with radians."""
    if isinstance(value, dict):
        try:
            return Axis.from_direction(float(value["theta"]), float(value["phi"]))
        except (KeyError, TypeError, ValueError):
            raise UsageError(f"malformed axis object {value!r}") from None
    return Axis.parse(value)


def parse_stage_list(text: str) -> list[dict]:
    """CLI stage syntax: comma-separated ``axis:port`` items, where axis is
    a label or ``theta/phi`` radians, e.g. ``x:up,1.5708/0:down``."""
    stages = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        axis, sep, port = item.rpartition(":")
        if not sep or not axis:
            raise UsageError(f"malformed stage {item!r} (expected axis:port)")
        stages.append({"axis": axis, "selected_port": port})
    if not stages:
        raise UsageError("no stages given")
    return stages


def _seed_option(options: dict, default: int | None = None) -> int:
    seed = options.get("seed", default)
    if seed is None:
        raise UsageError("a seed is required")
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise UsageError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


_SCHEMA_CACHE: dict[str, dict] = {}


def load_schema(name: str) -> dict:
    """Load one of the shipped JSON schemas by stem name."""
    if name not in _SCHEMA_CACHE:
        text = (
            resources.files("spinhalf.schemas")
            .joinpath(f"{name}.schema.json")
            .read_text()
        )
        _SCHEMA_CACHE[name] = json.loads(text)
    return _SCHEMA_CACHE[name]


def _validate(instance, schema) -> None:
    if isinstance(schema, str):
        schema = load_schema(schema)
    try:
        jsonschema.validate(instance, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        where = f" at {path}" if path else ""
        raise UsageError(f"invalid request{where}: {exc.message}") from None


_STATE_OPTION = {
    "oneOf": [
        {"type": "string"},
        {
            "type": "object",
            "required": ["a", "b"],
            "properties": {
                "a": {"type": "object"},
                "b": {"type": "object"},
                "token": {"type": "string"},
            },
            "additionalProperties": False,
        },
    ]
}
_AXIS_OPTION = {
    "oneOf": [
        {"type": "string"},
        {
            "type": "object",
            "required": ["theta", "phi"],
            "properties": {"theta": {"type": "number"}, "phi": {"type": "number"}},
            "additionalProperties": False,
        },
    ]
}
_SEED_OPTION = {"type": "integer", "minimum": 0, "maximum": 2**64 - 1}

# Per-command option schemas; the chain command uses the shipped
# chain_spec schema file instead.
_OPTION_SCHEMAS = {
    "version": {"type": "object", "additionalProperties": False},
    "basis": {"type": "object", "additionalProperties": False},
    "deduce": {
        "type": "object",
        "properties": {
            "conventions": {
                "type": "object",
                "additionalProperties": {
                    "oneOf": [{"type": "string"}, {"type": "number"}]
                },
            }
        },
        "additionalProperties": False,
    },
    "bloch": {
        "type": "object",
        "required": ["state"],
        "properties": {"state": _STATE_OPTION},
        "additionalProperties": False,
    },
    "probabilities": {
        "type": "object",
        "required": ["state", "axis"],
        "properties": {"state": _STATE_OPTION, "axis": _AXIS_OPTION},
        "additionalProperties": False,
    },
    "measure": {
        "type": "object",
        "required": ["state", "axis", "seed"],
        "properties": {
            "state": _STATE_OPTION,
            "axis": _AXIS_OPTION,
            "seed": _SEED_OPTION,
        },
        "additionalProperties": False,
    },
    "commutator": {
        "type": "object",
        "required": ["algebra"],
        "properties": {
            "algebra": {"enum": ["spin", "orbital"]},
            "handedness": {"enum": ["right", "left"]},
        },
        "additionalProperties": False,
    },
    "chain": "chain_spec",
}


# --------------------------------------------------------------------------
# Command handlers


def _cmd_version(options: dict) -> dict:
    return {"name": "spinhalf", "version": __version__}


def _cmd_basis(options: dict) -> dict:
    states = canonical_states()
    return {
        "states": [
            {
                "name": name,
                "state": serialize_state(state),
                "bloch": [_f(c) for c in bloch_vector(state)],
            }
            for name, state in states.items()
        ]
    }


def _cmd_deduce(options: dict) -> dict:
    conventions = options.get("conventions") or {}
    if not isinstance(conventions, dict):
        raise UsageError("conventions must be an object of phase literals")
    report = deduce_all(conventions)
    return report.to_json()


def _cmd_bloch(options: dict) -> dict:
    state = parse_state_option(_require(options, "state"))
    state.require_normalized()
    return {
        "state": serialize_state(state),
        "bloch": [_f(c) for c in bloch_vector(state)],
    }


def _cmd_probabilities(options: dict) -> dict:
    state = parse_state_option(_require(options, "state"))
    axis = parse_axis_option(_require(options, "axis"))
    p_up, p_down = probabilities(state, axis)
    return {
        "state": serialize_state(state),
        "axis": axis.to_json(),
        "p_up": _f(p_up),
        "p_down": _f(p_down),
    }


def _cmd_measure(options: dict) -> dict:
    state = parse_state_option(_require(options, "state"))
    axis = parse_axis_option(_require(options, "axis"))
    seed = _seed_option(options)
    outcome = measure_once(state, axis, seed)
    return {
        "axis": axis.to_json(),
        "seed": seed,
        "value": _f(outcome.value),
        "probability": _f(outcome.probability),
        "post_state": serialize_state(outcome.post_state),
    }


def _cmd_chain(options: dict) -> dict:
    stages = tuple(
        Stage(parse_axis_option(item["axis"]), item["selected_port"])
        for item in options["stages"]
    )
    spec = ChainSpec(
        preparation=parse_state_option(options["preparation"]),
        stages=stages,
        shots=options["shots"],
        seed=_seed_option(options),
    )
    return serialize_chain_statistics(run_chain(spec))


def _cmd_commutator(options: dict) -> dict:
    algebra = _require(options, "algebra")
    handedness = Handedness.parse(options.get("handedness", "right"))
    label = "right" if handedness is Handedness.RIGHT else "left"
    if algebra == "orbital":
        check = verify_orbital_commutator(handedness)
        l_x, l_y, l_z = angular_momentum(handedness)
        return {
            "algebra": "orbital",
            "handedness": label,
            "sign": check.sign,
            "residual": str(check.residual),
            "components": {"l_x": str(l_x), "l_y": str(l_y), "l_z": str(l_z)},
        }
    if algebra == "spin":
        states = canonical_states()
        s_y = operator_from_pair(states["y+"], states["y-"])
        if handedness is Handedness.LEFT:
            # the rejected lower-sign candidate: y states swapped
            s_y = operator_from_pair(states["y-"], states["y+"])
        comm = commutator(spin_operator("x"), s_y)
        expected = handedness.sign * 1j * spin_operator("z").matrix
        residual = float(np.max(np.abs(comm.matrix - expected)))
        return {
            "algebra": "spin",
            "handedness": label,
            "sign": handedness.sign,
            "residual": _f(residual),
            "commutator_matrix": serialize_matrix(comm.matrix),
        }
    raise UsageError(f"unknown algebra {algebra!r} (use spin or orbital)")


def _require(options: dict, key: str):
    if key not in options or options[key] is None:
        raise UsageError(f"missing required option {key!r}")
    return options[key]


_HANDLERS = {
    "version": _cmd_version,
    "basis": _cmd_basis,
    "deduce": _cmd_deduce,
    "bloch": _cmd_bloch,
    "probabilities": _cmd_probabilities,
    "measure": _cmd_measure,
    "chain": _cmd_chain,
    "commutator": _cmd_commutator,
}


def execute_command(request: CommandRequest) -> ApiEnvelope:
    """Dispatch a request and wrap the outcome in an envelope.

    Domain errors never escape: they are folded into error envelopes with
    their stable codes, so callers only branch on the envelope."""
    handler = _HANDLERS.get(request.command)
    if handler is None:
        return failure(UsageError(f"unknown command {request.command!r}"))
    if not isinstance(request.options, dict):
        return failure(UsageError("options must be a JSON object"))
    try:
        _validate(request.options, _OPTION_SCHEMAS[request.command])
        return success(handler(request.options))
    except SpinHalfError as exc:
        return failure(exc)
