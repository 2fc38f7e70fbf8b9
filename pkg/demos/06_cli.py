"""The dpflex command line, driven from Python.  The same calls work in a shell."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path


def dpflex(*args):
    res = subprocess.run([sys.executable, "-m", "dpflex.cli", *args], capture_output=True, text=True)
    return res.returncode, res.stdout, res.stderr


print(dpflex("surface", "--degree", "3")[1])
print(dpflex("check", "--degree", "3", "--construction", "cuspcubic:last4", "--cone", "B(3)")[1])

with tempfile.TemporaryDirectory() as tmp:
    cfg = Path(tmp) / "collinear.json"
    cfg.write_text(json.dumps({"degree": 6, "collinear_triples": [[1, 2, 3]]}))
    code, out, _ = dpflex("cones", "--config", str(cfg), "--cone", "Ample", "--format", "json",
                          "--cache-dir", tmp)
    print("Ample rays:", json.loads(out)["cone"]["rays"])

    code, out, _ = dpflex("cover", "--degree", "5", "--construction", "lines,cuspcubic",
                          "--cone", "B(1)", "--polar-filter", "--reduce", "--volume",
                          "--cache-dir", tmp)
    print(out)

# bad input exits with code 2 and names the error
print(dpflex("surface", "--degree", "9"))
