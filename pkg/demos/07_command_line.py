"""The same pipeline through the ``rotwave`` command line.

A JSON configuration drives validate -> dispersion -> branch -> inspect.
Outputs are plain CSV (with a '#' header line) and JSON, so they can be
plotted directly; ``--emit-gnuplot`` writes matching scripts.
"""

import json
import os
import tempfile

from rotwave.cli import main

config = {
    "vorticity": {"kind": "constant", "coefficients": [-0.5]},
    "p0": -1.0, "g": 9.8,
    "grid": {"nq": 32, "np": 30},
    "continuation": {"max_steps": 40},
    "outputs": {"snapshot_stride": 10},
}

with tempfile.TemporaryDirectory() as work:
    path = os.path.join(work, "run.json")
    with open(path, "w") as fh:
        json.dump(config, fh)
    out = os.path.join(work, "out")
    for command in (["validate"], ["dispersion"], ["branch", "--both"], ["check"]):
        print("$ rotwave %s --config run.json" % " ".join(command))
        code = main(command + ["--config", path, "--out", out])
        print("exit %d\n" % code)
    snap = os.path.join(out, "branch_plus", "snapshots", "step_00040.csv")
    print("$ rotwave inspect --snapshot %s" % os.path.relpath(snap, work))
    code = main(["inspect", "--snapshot", snap, "--out", os.path.join(work, "inspect")])
    print("exit %d" % code)
    with open(os.path.join(work, "inspect", "geometry.json")) as fh:
        report = json.load(fh)
    print("checks:", report["checks"])
    for root, _, files in os.walk(out):
        print(os.path.relpath(root, work), sorted(files)[:4], "..." if len(files) > 4 else "")
