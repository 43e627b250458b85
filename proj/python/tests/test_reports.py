# Copyright 2026 The qhedge Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

# Runs the command-line tool and checks every --json report against the schema.
# Needs QHEDGE_TOOL; QHEDGE_SOURCE_DIR defaults to the repository root.

import json
import os
import pathlib
import subprocess

import pytest

jsonschema = pytest.importorskip("jsonschema")

SOURCE = pathlib.Path(os.environ.get("QHEDGE_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
DATA = SOURCE / "data"
FIXTURES = SOURCE / "tests" / "fixtures"
TOOL = os.environ.get("QHEDGE_TOOL")

pytestmark = pytest.mark.skipif(not TOOL, reason="QHEDGE_TOOL not set")


@pytest.fixture(scope="module")
def validator():
    schema = json.loads((DATA / "run_report.schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema)


def run(*args):
    proc = subprocess.run([TOOL, "--json", *map(str, args)], capture_output=True, text=True, timeout=120)
    return proc.returncode, json.loads(proc.stdout)


CASES = [
    (0, ["solve", DATA / "hedging.test", "--outcome", "1", "--sense", "max"]),
    (0, ["solve", DATA / "echo.test", "--outcome", "0", "--sense", "min"]),
    (0, ["eval", DATA / "hedging.test", DATA / "identity-2.channel"]),
    (0, ["demo", "hedging"]),
    (0, ["bound", "--k", 2, "--t", 1, "--p", 0.85, "--model", "quantum"]),
    (2, ["solve", FIXTURES / "truncated.test", "--outcome", "1", "--sense", "max"]),
    (2, ["solve", DATA / "hedging.test", "--outcome", "7", "--sense", "max"]),
    (2, ["bound", "--k", 2, "--t", 3, "--p", 0.5, "--model", "classical"]),
    (3, ["solve", FIXTURES / "unnormalized.test", "--outcome", "1", "--sense", "max"]),
    (3, ["eval", DATA / "hedging.test", FIXTURES / "identity-3.channel"]),
    (3, ["eval", DATA / "hedging.test", FIXTURES / "doubled-identity-2.channel"]),
    (6, ["--tol", "1e-2", "demo", "hedging"]),
]


@pytest.mark.parametrize("code,args", CASES, ids=[" ".join(map(str, a[1][:2])) + f" -> {a[0]}" for a in CASES])
def test_report_matches_schema(validator, code, args):
    rc, report = run(*args)
    validator.validate(report)
    assert rc == code
    assert report["exit_code"] == code
    assert (report["status"] == "ok") == (code == 0)


def test_product_reports(validator, tmp_path):
    out = tmp_path / "pair.test"
    rc, report = run("product", DATA / "hedging.test", DATA / "hedging.test", "-o", out)
    validator.validate(report)
    assert rc == 0 and out.exists()
    assert report["outputs"]["path"] == str(out)

    big = tmp_path / "quad.test"
    rc, report = run("product", out, out, "-o", big)
    validator.validate(report)
    assert rc == 5 and not big.exists()


def test_solve_values(validator):
    _, report = run("solve", DATA / "hedging.test", "--outcome", "1", "--sense", "max")
    values = report["values"]
    assert values["converged"] and values["certified"]
    assert values["value"] == pytest.approx(0.8535533906, abs=1e-6)
