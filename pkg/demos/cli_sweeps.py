"""Drive the command line in-process: small sweeps, a tree dump, one eval."""

import json
import os
import tempfile

from qident.cli import main

fd, path = tempfile.mkstemp(suffix=".jsonl")
os.close(fd)

print("$ qident verify qcv --L1 0..3 --L2 0..3 --ell -2..2")
code = main(["verify", "qcv", "--L1", "0..3", "--L2", "0..3",
             "--ell", "-2..2", "--out", path])
with open(path) as fh:
    lines = fh.read().splitlines()
print("  exit", code, "summary:", json.loads(lines[-1]))

print()
print("$ qident verify series.strings --N 2 --ell 0..2 --m 0..4")
code = main(["verify", "series.strings", "--N", "2", "--ell", "0..2",
             "--m", "0..4", "--out", path])
with open(path) as fh:
    rows = [json.loads(ln) for ln in fh.read().splitlines()]
for r in rows[:4]:
    print("  ", r)
print("  ...", rows[-1])

print()
print("$ qident tree --depth 2 --format text")
main(["tree", "--depth", "2", "--format", "text"])

print()
print("$ qident eval string.spinon --N 2 --m 2 --ell 0 --trunc 6")
main(["eval", "string.spinon", "--N", "2", "--m", "2", "--ell", "0", "--trunc", "6"])

os.unlink(path)
