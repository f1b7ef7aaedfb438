#!/usr/bin/env python3
"""Smoke test for the seqtc_py extension module.

Builds nothing itself: run `cargo build -p seqtc-py` (or --release) first.
The script locates the compiled cdylib, stages it under the importable
module name, imports it, and drives the main types and operations.
"""

import json
import shutil
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_cdylib() -> Path:
    names = ["libseqtc_py.so", "seqtc_py.dll", "libseqtc_py.dylib"]
    for profile in ("release", "debug"):
        for name in names:
            candidate = ROOT / "target" / profile / name
            if candidate.exists():
                return candidate
    sys.exit("cdylib not found; run `cargo build -p seqtc-py` first")


def stage_module() -> None:
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    staging = Path(tempfile.mkdtemp(prefix="seqtc_py_"))
    shutil.copy2(locate_cdylib(), staging / f"seqtc_py{suffix}")
    sys.path.insert(0, str(staging))


checks = 0


def check(label: str, actual, expected) -> None:
    global checks
    if actual != expected:
        sys.exit(f"FAIL {label}: expected {expected!r}, got {actual!r}")
    checks += 1
    print(f"ok {label}: {actual!r}")


def main() -> None:
    stage_module()
    import seqtc_py

    # graded ring arithmetic
    rp3 = seqtc_py.Ring([("a", 1, 4)])
    check("Ring(RP^3).total_dim", rp3.total_dim, 4)
    check("Ring(RP^3).top_degree", rp3.top_degree, 3)
    check("Ring(RP^3).cup_length", rp3.cup_length(), 3)
    check("Ring(RP^3).degree_basis(2)", rp3.degree_basis(2), ["a^2"])

    s2 = seqtc_py.Ring([("i", 2, 2)])
    product = rp3.tensor([s2])
    check("tensor dim", product.total_dim, 8)
    check("tensor top degree", product.top_degree, 5)

    # catalog spaces
    t2 = seqtc_py.Space.torus(2)
    check("T^2 is an H-space", t2.h_space, True)
    check("T^2 ring dim", t2.ring().total_dim, 4)

    # kernel nilpotence of the covering maps
    p2 = seqtc_py.Map.double_cover(2)
    check("nil(p_2 at (3,3))", p2.nil_index(3, 3), 7)
    nil, length, degree, element = seqtc_py.Map.identity(
        seqtc_py.Space.real_projective(2)
    ).nil_witness(2, 2)
    check("zero-divisor nil of RP^2", nil, 4)
    check("witness length", length, 3)
    check("witness element", element, "a.1^2*a.2^2")

    # full interval pipeline
    check("TC_{3,3}(p_2)", p2.tc_interval(3, 3, 3), (7, 7))
    check("TC_{3,1}(p_2)", p2.tc_interval(3, 1, 3), (4, 5))
    pr = seqtc_py.Map.projection(seqtc_py.Space.sphere(3), seqtc_py.Space.sphere(1))
    check("TC_{3,2}(projection)", pr.tc_interval(3, 2, 3), (3, 3))

    problem = {
        "maps": [{"name": "p", "kind": "double_cover", "params": {"n": 1}}],
        "queries": ["tcrs(p, r=3, s=2)", "sec(p, s=2)"],
        "r_max": 3,
    }
    report = json.loads(seqtc_py.solve_problem(json.dumps(problem)))
    by_name = {q["quantity"]: (q["lo"], q["hi"]) for q in report["queries"]}
    check("tcrs(p_1, r=3, s=2)", by_name["tcrs(p, r=3, s=2)"], (3, 3))
    check("sec(p_1, s=2)", by_name["sec(p, s=2)"], (3, 3))

    # golden tables
    tables = json.loads(seqtc_py.reproduce_json())
    check("reproduce ok", tables["ok"], True)
    check("reproduce row count", len(tables["rows"]), 149)

    print(f"\nall {checks} smoke checks passed")


if __name__ == "__main__":
    main()
