"""Smoke test for the latpair_py extension.

Build first:

    cargo build -p latpair-py --release --features extension-module

The script imports an installed ``latpair_py`` if there is one, otherwise it
loads ``target/release/liblatpair_py.so`` directly.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys


def load():
    try:
        import latpair_py

        return latpair_py
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for name in ("liblatpair_py.so", "liblatpair_py.dylib", "latpair_py.dll"):
        path = root / "target" / "release" / name
        if path.exists():
            loader = importlib.machinery.ExtensionFileLoader("latpair_py", str(path))
            spec = importlib.util.spec_from_file_location("latpair_py", path, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("latpair_py not found; build it with --features extension-module")


def main():
    lp = load()

    m = lp.Matrix("1,7/3;0,1")
    assert m.dim == 2
    assert m.det() == "1"
    assert (m @ m.inverse()) == lp.Matrix("1,0;0,1")

    q = lp.Matrix("sqrt(2),1;0,1/2*sqrt(2)")
    assert q.radicand == 2
    assert q.det() == "1"

    pair = lp.cascade(["1/2", "3"])
    assert pair.family == "cascade"
    pair_json = json.dumps({"gamma1": str(pair.basis), "gamma2": "1,0,0;0,1,0;0,0,1"})
    report = json.loads(lp.check_witness(pair_json, str(pair.witness)))
    assert report["verdict"] == "pass", report

    again = lp.ConstructedPair.from_json(pair.to_json())
    assert again.basis == pair.basis

    assert json.loads(lp.check_single_lattice("1,0;0,1", "1,0;0,1"))["verdict"] == "pass"
    assert json.loads(lp.check_single_lattice("1,0;0,1", "2,0;0,1"))["verdict"] == "fail"

    points = lp.enumerate("1,0;0,1", "2,0;0,2", "closed")
    assert len(points) == 25

    assert lp.equal_lattices("1,1;0,1", "1,0;0,1")
    assert not lp.equal_lattices("2,0;0,1", "1,0;0,1")

    mc = json.loads(lp.verify_mc(str(pair.witness), str(pair.basis), samples=200, seed=7))
    assert mc["verdict"] == "pass", mc

    co = lp.coprime2(3, 5)
    summed = lp.direct_sum(co, lp.diagonal([2]))
    assert summed.basis.dim == 4

    scan = json.loads(lp.notgood_scan(2, 3, 11))
    assert scan["skipped_checks"] == 0

    print("latpair_py smoke test passed")


if __name__ == "__main__":
    main()
