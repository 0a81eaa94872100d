"""
Driving the command line
========================

The console entry point reads a problem file, prints the JSON report on
stdout and a human summary on stderr, and exits 0 (pass), 1 (fail), or
2 (unusable input).  Problem files are plain JSON; complex entries are
two-element [re, im] arrays.
"""

import json
import os
import subprocess
import sys
import tempfile

problem = {
    "blocks": [1, 1],
    "V": [[0, 1], [0, 1]],
    "H": [[1, 0], [1, 0]],
}
with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as f:
    json.dump(problem, f)
    path = f.name

for argv in (["verify", path], ["build", path, "--emit", "bimodule"]):
    proc = subprocess.run([sys.executable, "-m", "starint.cli", *argv],
                          capture_output=True, text=True)
    print("$ starint", " ".join(argv), "->", proc.returncode)
    payload = json.loads(proc.stdout)
    print("  keys:", sorted(payload)[:6])

# a deterministic fuzz run: same seed, same bytes
one = subprocess.run([sys.executable, "-m", "starint.cli", "fuzz", path,
                      "--amplify", "2", "--seed", "3"], capture_output=True)
two = subprocess.run([sys.executable, "-m", "starint.cli", "fuzz", path,
                      "--amplify", "2", "--seed", "3"], capture_output=True)
print("fuzz reports identical:", one.stdout == two.stdout)
os.unlink(path)
