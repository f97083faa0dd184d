import json
import threading
from concurrent.futures import ThreadPoolExecutor

import httpx
import jsonschema
import pytest

from spinhalf import cli
from spinhalf.api import (
    ApiEnvelope,
    CommandRequest,
    execute_command,
    load_schema,
    parse_stage_list,
    render_envelope,
)
from spinhalf.errors import UsageError
from spinhalf.server import create_server

TOL = 1e-12


@pytest.fixture(scope="module")
def server_url():
    server = create_server(0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()


def validate_envelope(payload: dict):
    jsonschema.validate(payload, load_schema("api_envelope"))


# -- execute_command ------------------------------------------------------------


def test_unknown_command_is_usage_error():
    envelope = execute_command(CommandRequest("frobnicate", {}))
    assert not envelope.ok
    assert envelope.error["code"] == "UsageError"
    assert envelope.exit_code == 2
    validate_envelope(envelope.to_json())


def test_domain_error_maps_to_exit_one():
    envelope = execute_command(
        CommandRequest("bloch", {"state": "0.5,0;0,0"})
    )
    assert envelope.error["code"] == "NotNormalized"
    assert envelope.exit_code == 1
    assert envelope.http_status == 422


def test_envelope_has_exactly_one_payload_field():
    ok = execute_command(CommandRequest("version", {}))
    bad = execute_command(CommandRequest("bloch", {}))
    assert ok.result is not None and ok.error is None
    assert bad.result is None and bad.error is not None
    validate_envelope(ok.to_json())
    validate_envelope(bad.to_json())


def test_syntax_position_survives_into_envelope():
    envelope = execute_command(
        CommandRequest("bloch", {"state": "equatorial:pie"})
    )
    assert envelope.error["code"] == "UsageError"


def test_deduce_result_matches_report_schema():
    envelope = execute_command(CommandRequest("deduce", {}))
    assert envelope.ok
    jsonschema.validate(envelope.result, load_schema("deduction_report"))
    x_up = envelope.result["final_states"]["x_up"]
    assert abs(x_up["a"]["re"] - 0.7071067811865476) <= TOL
    assert envelope.result["chirality"] == "right-handed"


def test_chain_result_matches_statistics_schema():
    options = {
        "preparation": "z+",
        "stages": [{"axis": "x", "selected_port": "up"}],
        "shots": 1000,
        "seed": 9,
    }
    envelope = execute_command(CommandRequest("chain", options))
    assert envelope.ok
    jsonschema.validate(envelope.result, load_schema("chain_statistics"))


def test_chain_request_validated_against_schema():
    envelope = execute_command(
        CommandRequest(
            "chain",
            {
                "preparation": "z+",
                "stages": [{"axis": "x", "selected_port": "up"}],
                "shots": 0,
                "seed": 1,
            },
        )
    )
    assert envelope.error["code"] == "UsageError"
    assert envelope.http_status == 400


def test_parse_stage_list():
    stages = parse_stage_list("x:up,z:down")
    assert stages == [
        {"axis": "x", "selected_port": "up"},
        {"axis": "z", "selected_port": "down"},
    ]
    custom = parse_stage_list("1.5707963/0:up")
    assert custom[0]["axis"] == "1.5707963/0"
    with pytest.raises(UsageError):
        parse_stage_list("xup")


def test_emitted_tokens_are_accepted_back():
    measured = execute_command(
        CommandRequest("measure", {"state": "z+", "axis": "x", "seed": 4})
    )
    token = measured.result["post_state"]["token"]
    again = execute_command(CommandRequest("bloch", {"state": token}))
    assert again.ok
    state_object = measured.result["post_state"]
    third = execute_command(
        CommandRequest("probabilities", {"state": state_object, "axis": "z"})
    )
    assert third.ok
    assert third.result["p_up"] == pytest.approx(0.5, abs=TOL)


# -- CLI --------------------------------------------------------------------------


def run_cli(capsysbinary, argv):
    code = cli.main(argv)
    captured = capsysbinary.readouterr()
    return code, captured.out, captured.err


def test_cli_deduce_json(capsysbinary):
    code, out, _ = run_cli(capsysbinary, ["deduce", "--json"])
    assert code == 0
    payload = json.loads(out)
    validate_envelope(payload)
    assert payload["ok"] is True
    assert payload["result"]["chirality"] == "right-handed"


def test_cli_chain_exact_quarter(capsysbinary):
    code, out, _ = run_cli(
        capsysbinary,
        [
            "chain",
            "--prepare", "z+",
            "--stages", "x:up,z:up",
            "--shots", "100000",
            "--seed", "42",
            "--json",
        ],
    )
    assert code == 0
    result = json.loads(out)["result"]
    assert result["final_probability_exact"] == pytest.approx(0.25, abs=TOL)


def test_cli_commutator_left_handed(capsysbinary):
    code, out, _ = run_cli(
        capsysbinary,
        ["commutator", "--algebra", "orbital", "--handedness", "left", "--json"],
    )
    assert code == 0
    result = json.loads(out)["result"]
    assert result["sign"] == -1
    assert result["residual"] == "0"


def test_cli_human_output(capsysbinary):
    code = cli.main(["bloch", "--state", "y+"])
    captured = capsysbinary.readouterr()
    assert code == 0
    assert b"bloch vector" in captured.out


def test_cli_usage_error_exit_code(capsysbinary):
    code, out, err = run_cli(capsysbinary, ["bloch", "--state", "q+"])
    assert code == 2
    assert b"UsageError" in err


def test_cli_domain_error_exit_code(capsysbinary):
    code, _, err = run_cli(capsysbinary, ["bloch", "--state", "0.5,0;0,0"])
    assert code == 1
    assert b"NotNormalized" in err


def test_cli_deduce_with_overrides(capsysbinary):
    code, out, _ = run_cli(
        capsysbinary,
        ["deduce", "--set", "phi1=pi/4", "--set", "phi2=pi/4", "--json"],
    )
    assert code == 0
    payload = json.loads(out)
    conventions = payload["result"]["conventions"]
    assert conventions["phi1"] == "pi/4"
    x_up = payload["result"]["final_states"]["x_up"]
    # joint overall phase: same ray as the conventional state
    magnitude = abs(complex(x_up["a"]["re"], x_up["a"]["im"]))
    assert magnitude == pytest.approx(0.7071067811865476, abs=TOL)


def test_cli_rejects_unknown_flags():
    with pytest.raises(SystemExit) as err:
        cli.main(["deduce", "--frobnicate"])
    assert err.value.code == 2


# -- HTTP service -------------------------------------------------------------------


def test_http_version_and_basis(server_url):
    version = httpx.get(server_url + "/api/version")
    assert version.status_code == 200
    validate_envelope(version.json())
    basis = httpx.get(server_url + "/api/basis").json()
    states = {entry["name"]: entry for entry in basis["result"]["states"]}
    assert set(states) == {"z+", "z-", "x+", "x-", "y+", "y-"}
    y_up = states["y+"]
    assert y_up["state"]["a"]["re"] == pytest.approx(0.7071067811865476, abs=TOL)
    assert y_up["state"]["b"]["im"] == pytest.approx(0.7071067811865476, abs=TOL)
    assert y_up["bloch"] == pytest.approx([0.0, 1.0, 0.0], abs=TOL)


def test_http_probabilities(server_url):
    response = httpx.post(
        server_url + "/api/probabilities", json={"state": "z+", "axis": "x"}
    )
    assert response.status_code == 200
    result = response.json()["result"]
    assert result["p_up"] == pytest.approx(0.5, abs=TOL)
    assert result["p_down"] == pytest.approx(0.5, abs=TOL)


def test_http_chain_usage_error_is_400(server_url):
    response = httpx.post(
        server_url + "/api/chain",
        json={
            "preparation": "z+",
            "stages": [{"axis": "x", "selected_port": "up"}],
            "shots": 0,
            "seed": 1,
        },
    )
    assert response.status_code == 400
    payload = response.json()
    validate_envelope(payload)
    assert payload["error"]["code"] == "UsageError"


def test_http_domain_error_is_422(server_url):
    response = httpx.post(
        server_url + "/api/bloch", json={"state": "0.5,0;0,0"}
    )
    assert response.status_code == 422
    assert response.json()["error"]["code"] == "NotNormalized"


def test_http_unknown_endpoint_is_404(server_url):
    response = httpx.get(server_url + "/api/nonsense")
    assert response.status_code == 404
    validate_envelope(response.json())


def test_http_malformed_body_is_400(server_url):
    response = httpx.post(
        server_url + "/api/measure",
        content=b"{not json",
        headers={"Content-Type": "application/json"},
    )
    assert response.status_code == 400
    assert response.json()["error"]["code"] == "UsageError"


def test_http_deduce_empty_body_uses_defaults(server_url):
    response = httpx.post(server_url + "/api/deduce")
    assert response.status_code == 200
    jsonschema.validate(response.json()["result"], load_schema("deduction_report"))


def test_http_measure_is_seed_deterministic(server_url):
    body = {"state": "x+", "axis": "z", "seed": 1234}
    first = httpx.post(server_url + "/api/measure", json=body).content
    second = httpx.post(server_url + "/api/measure", json=body).content
    assert first == second


# -- CLI/HTTP byte identity -----------------------------------------------------------


CLI_HTTP_PAIRS = [
    (["deduce", "--json"], "POST", "/api/deduce", {}),
    (
        ["measure", "--state", "z+", "--axis", "x", "--seed", "42", "--json"],
        "POST",
        "/api/measure",
        {"state": "z+", "axis": "x", "seed": 42},
    ),
    (
        [
            "chain",
            "--prepare", "z+",
            "--stages", "x:up,z:up",
            "--shots", "5000",
            "--seed", "7",
            "--json",
        ],
        "POST",
        "/api/chain",
        {
            "preparation": "z+",
            "stages": [
                {"axis": "x", "selected_port": "up"},
                {"axis": "z", "selected_port": "up"},
            ],
            "shots": 5000,
            "seed": 7,
        },
    ),
    (
        ["commutator", "--algebra", "orbital", "--handedness", "left", "--json"],
        "POST",
        "/api/commutator",
        {"algebra": "orbital", "handedness": "left"},
    ),
    (
        ["commutator", "--algebra", "spin", "--handedness", "right", "--json"],
        "POST",
        "/api/commutator",
        {"algebra": "spin", "handedness": "right"},
    ),
    (["bloch", "--state", "y+", "--json"], "POST", "/api/bloch", {"state": "y+"}),
]


@pytest.mark.parametrize("argv,method,path,body", CLI_HTTP_PAIRS)
def test_cli_and_http_payloads_are_byte_identical(
    capsysbinary, server_url, argv, method, path, body
):
    code = cli.main(argv)
    cli_bytes = capsysbinary.readouterr().out
    assert code == 0
    response = httpx.request(method, server_url + path, json=body)
    assert response.status_code == 200
    assert response.content == cli_bytes


# -- statelessness under concurrency ---------------------------------------------------


def test_concurrent_requests_match_serial_responses(server_url):
    bodies = [
        ("/api/measure", {"state": "x+", "axis": "z", "seed": seed})
        for seed in range(8)
    ] + [
        (
            "/api/chain",
            {
                "preparation": "z+",
                "stages": [{"axis": "x", "selected_port": "up"}],
                "shots": 2000,
                "seed": seed,
            },
        )
        for seed in range(8)
    ]
    serial = [httpx.post(server_url + path, json=body).content for path, body in bodies]

    def fetch(item):
        path, body = item
        return httpx.post(server_url + path, json=body).content

    with ThreadPoolExecutor(max_workers=8) as pool:
        concurrent = list(pool.map(fetch, bodies))
    assert concurrent == serial


def test_render_envelope_is_ascii_and_newline_terminated():
    envelope = ApiEnvelope(ok=True, version="0.1.0", result={"value": 1.5})
    payload = render_envelope(envelope)
    assert payload.endswith(b"\n")
    payload.decode("ascii")


def test_default_port_env_override(monkeypatch):
    from spinhalf.server import DEFAULT_PORT, default_port

    monkeypatch.delenv("SPINHALF_PORT", raising=False)
    assert default_port() == DEFAULT_PORT
    monkeypatch.setenv("SPINHALF_PORT", "9123")
    assert default_port() == 9123
    monkeypatch.setenv("SPINHALF_PORT", "not-a-port")
    with pytest.raises(UsageError):
        default_port()
