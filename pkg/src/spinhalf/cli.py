"""Command line interface.

Exit codes: 0 on success, 1 on domain errors, 2 on usage errors. With
``--json`` every command prints the same envelope bytes the HTTP service
returns for the equivalent request.
"""

from __future__ import annotations

import argparse
import sys

from .api import (
    CommandRequest,
    execute_command,
    failure,
    parse_stage_list,
    render_envelope,
)
from .errors import SpinHalfError
from .server import default_port, serve


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinhalf",
        description=(
            "Spin-1/2 toolkit: deduce the x/y bases from the z-basis axioms, "
            "simulate Stern-Gerlach analyzer chains, and check angular "
            "momentum commutators exactly."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    deduce = sub.add_parser(
        "deduce", help="run the basis deduction and print the report"
    )
    deduce.add_argument(
        "--set",
        dest="conventions",
        action="append",
        default=[],
        metavar="PHASE=VALUE",
        help="override a convention phase, e.g. --set phi1=pi/4 (repeatable)",
    )
    deduce.add_argument("--json", action="store_true")

    measure = sub.add_parser("measure", help="sample one projective measurement")
    measure.add_argument("--state", required=True, help="state token, e.g. z+ or equatorial:pi/3")
    measure.add_argument("--axis", required=True, help="x, y, z or theta/phi radians")
    measure.add_argument("--seed", type=int, default=0)
    measure.add_argument("--json", action="store_true")

    chain = sub.add_parser("chain", help="run a Stern-Gerlach analyzer chain")
    chain.add_argument("--prepare", required=True, help="oven state token")
    chain.add_argument(
        "--stages", required=True, help="comma-separated axis:port list, e.g. x:up,z:up"
    )
    chain.add_argument("--shots", type=int, default=10000)
    chain.add_argument("--seed", type=int, default=0)
    chain.add_argument("--json", action="store_true")

    comm = sub.add_parser("commutator", help="check a commutator identity")
    comm.add_argument("--algebra", required=True, choices=["spin", "orbital"])
    comm.add_argument("--handedness", default="right", choices=["right", "left"])
    comm.add_argument("--json", action="store_true")

    bloch = sub.add_parser("bloch", help="print the Bloch vector of a state")
    bloch.add_argument("--state", required=True)
    bloch.add_argument("--json", action="store_true")

    server = sub.add_parser("serve", help="start the JSON-over-HTTP service")
    server.add_argument(
        "--port", type=int, default=None, help=f"default: $SPINHALF_PORT or {default_port()}"
    )
    server.add_argument("--bind", default="127.0.0.1")

    return parser


def _options_from_args(args: argparse.Namespace) -> dict:
    if args.command == "deduce":
        conventions = {}
        for item in args.conventions:
            name, sep, value = item.partition("=")
            if not sep:
                from .errors import UsageError

                raise UsageError(f"malformed --set {item!r} (expected NAME=VALUE)")
            conventions[name.strip()] = value.strip()
        return {"conventions": conventions}
    if args.command == "measure":
        return {"state": args.state, "axis": args.axis, "seed": args.seed}
    if args.command == "chain":
        return {
            "preparation": args.prepare,
            "stages": parse_stage_list(args.stages),
            "shots": args.shots,
            "seed": args.seed,
        }
    if args.command == "commutator":
        return {"algebra": args.algebra, "handedness": args.handedness}
    if args.command == "bloch":
        return {"state": args.state}
    raise AssertionError(args.command)


def _human_lines(command: str, result: dict) -> list[str]:
    if command == "deduce":
        lines = [f"chirality: {result['chirality']}"]
        for name in ("x_up", "x_down", "y_up", "y_down"):
            state = result["final_states"][name]
            lines.append(
                f"  {name:7s} a = {state['a']['re']:+.12f}{state['a']['im']:+.12f}i"
                f"   b = {state['b']['re']:+.12f}{state['b']['im']:+.12f}i"
            )
        failed = [v["check"] for v in result["verification"] if not v["passed"]]
        lines.append(
            f"verification: {len(result['verification'])} checks, "
            + ("all passed" if not failed else f"FAILED: {failed}")
        )
        return lines
    if command == "measure":
        sign = "+1/2" if result["value"] > 0 else "-1/2"
        return [
            f"measured {sign} (probability {result['probability']:.6g})",
            f"post state: {result['post_state']['token']}",
        ]
    if command == "chain":
        lines = []
        for index, stage in enumerate(result["per_stage"]):
            axis = stage["axis"]
            axis_text = axis if isinstance(axis, str) else f"{axis['theta']:.4g}/{axis['phi']:.4g}"
            lines.append(
                f"stage {index + 1}: {axis_text}:{stage['selected_port']}  "
                f"up={stage['up_count']} down={stage['down_count']}  "
                f"p_up={stage['p_up']:.6g}"
            )
        lines.append(
            f"exact probability {result['final_probability_exact']:.6g}, "
            f"observed frequency {result['final_frequency']:.6g} "
            f"({result['survivors']}/{result['shots']})"
        )
        return lines
    if command == "commutator":
        if result["algebra"] == "orbital":
            return [
                f"[L_x, L_y] = ({result['sign']:+d}) * i*hbar*L_z",
                f"residual: {result['residual']}",
            ]
        return [
            f"[S_x, S_y] = ({result['sign']:+d}) * i*S_z",
            f"residual: {result['residual']:.3g}",
        ]
    if command == "bloch":
        x, y, z = result["bloch"]
        return [f"bloch vector: ({x:+.12f}, {y:+.12f}, {z:+.12f})"]
    return [str(result)]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        serve(port=args.port, bind=args.bind)
        return 0

    try:
        options = _options_from_args(args)
    except SpinHalfError as exc:
        envelope = failure(exc)
    else:
        envelope = execute_command(CommandRequest(args.command, options))

    if getattr(args, "json", False):
        sys.stdout.buffer.write(render_envelope(envelope))
        sys.stdout.buffer.flush()
    elif envelope.ok:
        for line in _human_lines(args.command, envelope.result):
            print(line)
    else:
        print(
            f"error [{envelope.error['code']}]: {envelope.error['message']}",
            file=sys.stderr,
        )
    return envelope.exit_code


if __name__ == "__main__":
    sys.exit(main())
