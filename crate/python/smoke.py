"""Smoke test for the rigidkit Python extension.

Builds the extension with cargo (unless RIGIDKIT_PY_LIB points at an
existing shared library), imports it and exercises each function.

    python3 python/smoke.py
"""

import importlib.util
import json
import os
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def build() -> Path:
    lib = os.environ.get("RIGIDKIT_PY_LIB")
    if lib:
        return Path(lib)
    subprocess.run(["cargo", "build", "-p", "rigidkit-py"], cwd=ROOT, check=True)
    target = Path(os.environ.get("CARGO_TARGET_DIR", ROOT / "target"))
    for name in ("librigidkit_py.so", "librigidkit_py.dylib", "rigidkit_py.dll"):
        p = target / "debug" / name
        if p.exists():
            return p
    sys.exit("built library not found")


def load(lib: Path):
    tmp = Path(tempfile.mkdtemp())
    suffix = ".pyd" if lib.suffix == ".dll" else ".so"
    dest = tmp / ("rigidkit_py" + suffix)
    shutil.copy(lib, dest)
    spec = importlib.util.spec_from_file_location("rigidkit_py", dest)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def main() -> None:
    rk = load(build())
    print("rigidkit_py", rk.__version__)

    code, text = rk.run(["verify", "--suite", "ring-cpn"])
    report = json.loads(text)
    assert code == 0 and report["status"] == "ok", text

    code, text = rk.run([
        "complex", str(DATA / "a.cplx"),
        "--tensor", str(DATA / "b.cplx"),
        "--verify-product", "--seed", "7",
    ])
    rows = json.loads(text)["results"]["product_formula"]["classes"]
    assert code == 0 and all(r["lhs"] == r["rhs"] for r in rows)

    code, _ = rk.run(["no-such-command"])
    assert code == 2

    ring = (DATA / "quadric.ring").read_text()
    assert rk.canonicalize("ring", ring) == ring
    try:
        rk.canonicalize("ring", "{}")
    except ValueError as e:
        print("rejected malformed ring:", str(e).splitlines()[0])
    else:
        raise AssertionError("malformed ring accepted")

    assert rk.cz((DATA / "rotation.path").read_text()) == 2.0
    z = rk.zeta((DATA / "cp2.poly").read_text(), (DATA / "f.pl").read_text())
    print("zeta(f) =", z)
    print("ok")


if __name__ == "__main__":
    main()
