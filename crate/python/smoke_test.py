#!/usr/bin/env python3
"""Smoke test for the garside_py extension module.

Builds the cdylib if needed, loads it, and exercises normal forms, rigidity,
conjugacy search, the matrix family, and the verification suite at desk scale.
"""

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def locate_library() -> Path:
    names = ["libgarside_py.so", "libgarside_py.dylib", "garside_py.dll"]
    candidates = [
        REPO / "target" / profile / name
        for profile in ("release", "debug")
        for name in names
    ]
    for path in candidates:
        if path.exists():
            return path
    subprocess.run(
        ["cargo", "build", "-p", "garside-py"], cwd=REPO, check=True
    )
    for path in candidates:
        if path.exists():
            return path
    raise SystemExit("could not find the built garside_py library")


def import_module():
    library = locate_library()
    stage = Path(tempfile.mkdtemp(prefix="garside_py_"))
    shutil.copy2(library, stage / "garside_py.so")
    sys.path.insert(0, str(stage))
    import garside_py

    return garside_py


def main() -> None:
    g = import_module()

    # Normal forms and group identities.
    b = g.Braid(3, [1, 2, -1])
    assert (b.inf, b.sup, b.canonical_length) == (-1, 1, 2), b
    assert (b * b.inverse()).is_identity()
    assert g.Braid(3, b.word()) == b
    assert b.tau().tau() == b
    delta = g.Braid.delta(3)
    assert b.conjugate(delta) == b.tau()

    # A constrained family element on 14 strands: rigid, pseudo-Anosov at the
    # standard-curve level, and its rigid set has the predicted size.
    e = g.sample_constrained(14, 2, seed=7)
    assert e.is_constrained and e.n == 14 and e.k == 2
    x = e.alpha()
    assert x.is_rigid()
    assert g.find_standard_reduction(x) == []

    graph = g.family_rigid_set(e)
    assert len(graph) == g.predicted_size(2, 6) == 16, len(graph)
    assert graph.verify_edges()
    assert graph.is_strongly_connected()

    kinds = {kind for _, kind in g.minimal_conjugators(x)}
    assert kinds <= {"cut-head", "add-tail"} and kinds

    # Below 14 strands the raw search is cheap enough to cross-check the
    # hint-accelerated enumeration node for node.
    small = g.sample_constrained(10, 2, seed=3)
    hinted = g.family_rigid_set(small)
    raw = g.enumerate_rigid_set(small.alpha())
    assert {node for node in hinted.nodes()} == {node for node in raw.nodes()}

    # Conjugacy machinery: cycling round trip and recovery from a scramble.
    cycled, conjugator = g.cycling(x)
    assert cycled == x.conjugate(conjugator)
    assert g.decycling(cycled)[0] == x

    scrambled = x.conjugate(g.Braid(14, [3, -5, 2, 11]))
    representative, witness = g.super_summit(scrambled)
    assert representative == scrambled.conjugate(witness)
    assert (representative.inf, representative.sup) == (x.inf, x.sup)

    y = small.alpha()
    shifted = y.conjugate(g.Braid(10, [2, -7, 4]))
    answer, certificate = g.is_conjugate(y, shifted)
    assert answer and y.conjugate(certificate) == shifted
    assert not g.is_conjugate(y, y.tau().inverse())[0]

    # Matrix plumbing: text round trip and braid recognition.
    again = g.FamilyElement.parse(e.matrix_text())
    assert again.rows == e.rows and again.slot == e.slot
    read_back = g.parse_family_braid(x)
    assert read_back is not None and read_back.is_constrained
    assert read_back.alpha() == x

    # Odd strand counts carry the vertical-strand slot.
    odd = g.sample_constrained(15, 3, seed=11)
    assert odd.slot == odd.p - 2
    assert odd.alpha().is_rigid()
    assert len(g.family_rigid_set(odd)) == g.predicted_size(3, odd.p)

    # The verification suite must not report failures at desk scale.
    report = g.run_verification(ns=[10, 14], ks=[2], samples=8, seed=5)
    statuses = {check["status"] for check in report["checks"]}
    assert "fail" not in statuses, report
    assert "pass" in statuses

    print("smoke test passed:", len(report["checks"]), "suite checks,",
          f"rigid set of size {len(graph)} at (n, k) = (14, 2)")


if __name__ == "__main__":
    main()
