#!/usr/bin/env python3
# Copyright 2026 The alignaudit Authors.
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
"""Rebuilds tests/data/replay: a recorded binary audit for the replay check.

The mock answers with the ground truth except for every 7th rule (flipped)
and every 11th (unparseable), so the pinned report has all four confusion
cells, re-asks and triage rows.

usage: make_replay_fixture.py <alignaudit binary>
"""

import csv
import hashlib
import json
import pathlib
import shutil
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "data" / "replay"
N_ITEMS = 20


def run(tool, *args):
    subprocess.run([tool, *args], check=True, cwd=OUT)


def main():
    tool = str(pathlib.Path(sys.argv[1]).resolve())
    if OUT.exists():
        shutil.rmtree(OUT)
    OUT.mkdir(parents=True)
    shutil.copy(ROOT / "data" / "skills.csv", OUT / "skills.csv")
    with open(ROOT / "data" / "items.csv", newline="") as f:
        rows = list(csv.reader(f))
    with open(OUT / "items.csv", "w", newline="") as f:
        csv.writer(f, lineterminator="\n").writerows(rows[: N_ITEMS + 1])

    run(tool, "synthesize", "--items", "items.csv", "--skills", "skills.csv", "--seed", "5", "--out", "pairs.csv")
    run(tool, "make-oracle", "--items", "items.csv", "--skills", "skills.csv", "--pairs", "pairs.csv",
        "--out", "oracle.json")
    mock = json.loads((OUT / "oracle.json").read_text())
    (OUT / "oracle.json").unlink()
    for i, rule in enumerate(mock["rules"]):
        if i % 11 == 10:
            rule["response"] = "It depends on the reader."
        elif i % 7 == 6:
            rule["response"] = "Aligned" if rule["response"] == "Misaligned" else "Misaligned"
    (OUT / "mock.json").write_text(json.dumps(mock, indent=2) + "\n")

    run(tool, "audit", "--skills", "skills.csv", "--items", "items.csv", "--pairs", "pairs.csv",
        "--backend", "mock:mock.json", "--concurrency", "4", "--out", "run")
    digest = hashlib.sha256((OUT / "run" / "report.json").read_bytes()).hexdigest()
    (OUT / "report.sha256").write_text(digest + "\n")
    print(digest)


if __name__ == "__main__":
    main()
