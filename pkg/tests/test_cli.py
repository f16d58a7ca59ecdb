import json
import os
import shutil
import subprocess
import sys

import pytest

from qsigalois.cli import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, EXIT_REFUSED, main


@pytest.fixture
def data(tmp_path, demo_data):
    for name in os.listdir(demo_data):
        shutil.copy(os.path.join(demo_data, name), tmp_path / name)
    return tmp_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(data, capsys):
    assert run(["validate", data / "first_example.json"], capsys)[0] == EXIT_PASS
    code, out, _ = run(["validate", data / "identity_2.json"], capsys)
    assert code == EXIT_FAIL


def test_solve_writes_twin(data, capsys):
    code, out, _ = run(["solve", data / "jordan.json"], capsys)
    assert code == EXIT_PASS
    assert "[[Q, (1/2)*Z*Q, X], [0, Q, 0], [0, 0, 1]]" in out
    twin = json.loads((data / "jordan.solution.json").read_text())
    assert twin["command"] == "solve" and twin["exit_code"] == 0
    assert twin["config"]["q"] in (None, "2")


def test_solve_scaled_and_diagonal(data, capsys):
    code, out, _ = run(["solve", data / "scaled.json"], capsys)
    assert code == EXIT_PASS and "[[Q*L, X*L], [0, L]]" in out
    code, out, _ = run(["solve", data / "diagonal_b0.json"], capsys)
    assert code == EXIT_PASS and "[[Q, 0], [0, Q^2]]" in out


def test_json_out(data, capsys, tmp_path):
    target = tmp_path / "report.json"
    code, _, _ = run(["galois-group", data / "first_example.json", "--json-out", target], capsys)
    assert code == EXIT_PASS
    report = json.loads(target.read_text())
    assert report["status"] == "pass"
    assert "g*e = (1/2)*e*g" in json.dumps(report["result"])


def test_error_exit_codes(data, capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"A": [[1, 0], [0')
    assert run(["solve", broken], capsys)[0] == EXIT_INPUT
    assert run(["solve", tmp_path / "missing.json"], capsys)[0] == EXIT_INPUT
    assert run(["solve", data / "identity_2.json"], capsys)[0] == EXIT_FAIL
    code, _, err = run(["galois-group", data / "first_example.json", "--q", "zeta3"], capsys)
    assert code == EXIT_REFUSED and "refused" in err
    assert run(["solve", data / "first_example.json", "--order", "-1"], capsys)[0] == EXIT_INPUT
    assert run(["no-such-command"], capsys)[0] == EXIT_INPUT


@pytest.mark.parametrize("builtin", ["Hq", "GHq", "frakH", "G12_1", "G12_3:3", "Taft2", "Taft3"])
def test_hopf_check(builtin, capsys):
    assert run(["hopf-check", "--builtin", builtin, "--degree", "2"], capsys)[0] == EXIT_PASS


def test_hopf_check_unknown(capsys):
    assert run(["hopf-check", "--builtin", "nope"], capsys)[0] == EXIT_INPUT


def test_r_commands(capsys):
    assert run(["torsor", "--degree", "2"], capsys)[0] == EXIT_PASS
    assert run(["taft", "--N", "2", "--lambda", "1", "--check", "torsor", "--check", "cleft",
                "--check", "trivialize"], capsys)[0] == EXIT_PASS
    assert run(["constants", "--q-degree", "2", "--tau-degree", "2"], capsys)[0] == EXIT_PASS
    code, out, _ = run(["normalize", "--b", "tau + 2*Q"], capsys)
    assert code == EXIT_PASS and "normalized onto R" in out
    assert run(["simplicity", "--random", "5", "--seed", "1"], capsys)[0] == EXIT_PASS
    assert run(["simplicity", "--element", "Q*tau^2 + 1"], capsys)[0] == EXIT_PASS


def test_hull_command(data, capsys):
    code, out, _ = run(["hull", "--element", "t", "--order", "3"], capsys)
    assert code == EXIT_PASS and "Q*t + X" in out
    assert run(["hull", "--element", "1/(t+1)", "--other", "t^2", "--c", "2", "--order", "3"], capsys)[0] == EXIT_PASS
    assert run(["hull", "--witness", data / "witness_diag.json", "--order", "3"], capsys)[0] == EXIT_PASS
    assert run(["hull", "--q", "zeta3"], capsys)[0] == EXIT_REFUSED


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "qsigalois.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "galois-group" in proc.stdout
