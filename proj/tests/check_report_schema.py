# Copyright 2026 The mixbound Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Validates `mixbound ... --json` output against schemas/report.json."""

import json
import subprocess
import sys

import jsonschema

UNIFORM = ["--uniform", "0.4", "--N", "20"]
GEOM = ["--profile-json", '{"kind": "geometric", "C": 1, "rho": 0.5}']
GEOM_ALPHA = ["--profile-json", '{"kind": "geometric", "rho": 0.5, "family": "alpha"}']

COMMANDS = [
    ["verify-table", "--timing"],
    ["validate", "--models", "10", "--n-max", "5"],
    ["validate", "--models", "3", "--inject-fault", "0.5"],
    ["compare", "--model", "markov", "--N", "10", "--mc-trials", "2000", "--seed", "1"],
    ["compare", "--model", "block", "--m", "1", "--p", "0.2", "--q", "4"],
    ["bound", "phi", *UNIFORM, *GEOM, "--L", "2"],
    ["bound", "phi-opt", *UNIFORM, *GEOM],
    ["bound", "alpha", *UNIFORM, *GEOM_ALPHA, "--L", "3"],
    ["bound", "alpha-lower-mass", *UNIFORM, *GEOM_ALPHA, "--L", "3"],
    ["bound", "window-phi", *UNIFORM, *GEOM, "--i", "1", "--n", "3", "--L", "1"],
    ["bound", "window-alpha", *UNIFORM, *GEOM_ALPHA, "--n", "2", "--L", "0"],
    ["bound", "geom-phi", *UNIFORM, "--rho", "0.5"],
    ["bound", "poly-alpha", "--SN", "3000", "--N", "10000", "--C", "1", "--gamma", "2"],
]


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for args in COMMANDS:
        proc = subprocess.run([binary, *args, "--json"], capture_output=True, text=True)
        if proc.returncode not in (0, 1):
            print(f"FAIL {' '.join(args)}: exit {proc.returncode}: {proc.stderr.strip()}")
            failures += 1
            continue
        errors = list(validator.iter_errors(json.loads(proc.stdout)))
        for error in errors:
            print(f"FAIL {' '.join(args)}: {error.json_path}: {error.message}")
        failures += bool(errors)
        if not errors:
            print(f"ok   {' '.join(args)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
