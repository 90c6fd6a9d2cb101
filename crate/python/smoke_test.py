#!/usr/bin/env python3
"""Smoke test for the mpos_py extension module.

Builds the extension with cargo if needed, imports it from the build tree,
and exercises the main surface: system validation, characters, transforms,
step-function Fourier analysis, and tile generation.

Run from the repository root:  python3 python/smoke_test.py
Pass --release to test the release build instead of the dev build.
"""

import argparse
import math
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def build_and_import(profile: str):
    args = ["cargo", "build", "-p", "mpos-python"]
    if profile == "release":
        args.append("--release")
    subprocess.run(args, cwd=REPO, check=True)
    lib = REPO / "target" / profile / "libmpos_py.so"
    if not lib.exists():  # e.g. macOS
        lib = REPO / "target" / profile / "libmpos_py.dylib"
    stage = Path(tempfile.mkdtemp(prefix="mpos_py_"))
    shutil.copy(lib, stage / "mpos_py.so")
    sys.path.insert(0, str(stage))
    import mpos_py

    return mpos_py


def approx(a, b, tol=1e-10):
    return abs(a - b) <= tol


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--release", action="store_true")
    opts = parser.parse_args()
    mpos_py = build_and_import("release" if opts.release else "debug")

    checks = 0

    def ok(cond, what):
        nonlocal checks
        assert cond, what
        checks += 1
        print(f"  ok: {what}")

    print("== construction and validation")
    dyadic = mpos_py.System([[2]], digits=[[0], [1]], dual_digits=[[0], [1]], label="dyadic")
    twin = mpos_py.System([[1, 1], [1, -1]], digits=[[0, 0], [1, 0]], label="twindragon")
    ok(dyadic.m == 2 and dyadic.dim == 1, "dyadic system has m = 2, d = 1")
    ok(twin.m == 2 and twin.det_sign == -1, "twindragon has m = 2, det < 0")
    try:
        mpos_py.System([[1, 0], [0, 2]])
        raise AssertionError("non-expanding matrix was accepted")
    except ValueError as e:
        ok("NotExpanding" in str(e), "non-expanding matrix rejected with NotExpanding")
    try:
        mpos_py.System([[2]], digits=[[0], [2]])
        raise AssertionError("congruent digits were accepted")
    except ValueError as e:
        ok("NotAResidueSystem" in str(e), "congruent digits rejected")

    print("== grid indexing and carry-free addition")
    ok(dyadic.gamma(5) == [5], "scalar grid vector is the index itself")
    ok(twin.gamma(2) == [1, 1], "twindragon gamma(2) = (1, 1)")
    ok(twin.index_of_gamma([1, 1]) == 2, "index recovers the grid vector")
    ok(dyadic.oplus_index(3, 5) == 6, "radix-2 carry-free addition is xor")

    print("== characters and Walsh functions")
    ok(approx(dyadic.chi(1, 1, 0, 1), -1.0), "chi(1/2, 1) = -1")
    ok(approx(dyadic.chi(2, 1, -1, 1), -1.0), "chi(1/4, 2) = -1")
    ok(approx(dyadic.chi(1, 1, -1, 1), 1.0), "chi(1/2, 2) = +1")
    rademacher = [dyadic.walsh(1, 3, k) for k in range(8)]
    ok(
        all(approx(v, 1.0) for v in rademacher[:4])
        and all(approx(v, -1.0) for v in rademacher[4:]),
        "W_1 is the first Rademacher pattern on eighths",
    )
    ok(approx(dyadic.char_sum([0]), 2.0) and approx(dyadic.char_sum([1]), 0.0),
       "digit character sums are exactly m and 0")

    print("== transforms")
    spectrum = dyadic.vc_forward([1, 0])
    ok(approx(spectrum[0], 0.5) and approx(spectrum[1], 0.5), "depth-1 Hadamard case")
    values = [complex(k % 3 - 1, (k % 5) / 4) for k in range(8)]
    back = dyadic.vc_inverse(dyadic.vc_forward(values))
    ok(max(abs(a - b) for a, b in zip(back, values)) < 1e-12, "transform round trip")
    naive = dyadic.vc_forward(values, fast=False)
    fast = dyadic.vc_forward(values)
    ok(max(abs(a - b) for a, b in zip(naive, fast)) < 1e-12, "fast path matches naive path")

    print("== step-function Fourier analysis")
    space, n, p, coeffs = twin.fourier("X", 0, 0, [1.0])
    ok(space == "X*" and (n, p) == (0, 0) and approx(coeffs[0], 1.0),
       "tile indicator maps to the dual tile indicator")
    f = [complex(k, -k / 8) for k in range(8)]
    space, n, p, ghat = twin.fourier("X", 2, 1, f)
    ok(space == "X*" and (n, p) == (1, 2), "scale duality (2,1) -> (1,2)")
    _, n2, p2, back = twin.fourier(space, n, p, ghat)
    ok((n2, p2) == (2, 1) and max(abs(a - b) for a, b in zip(back, f)) < 1e-12,
       "Fourier round trip is exact")
    lhs, rhs = twin.poisson(2, 1, f)
    ok(abs(lhs - rhs) < 1e-10, "grid-sum identity")
    n3, p3, shifted = dyadic.shift(0, 0, [1.0], 1)
    ok((n3, p3) == (0, 1) and approx(shifted[0], 0.0) and approx(shifted[1], 1.0),
       "translation moves the tile indicator to the cell at 1")

    print("== tiles")
    pts = twin.tile_points(12)
    ok(len(pts) == 4096, "depth-12 twindragon cloud has 4096 points")
    spread = max(math.hypot(*q) for q in pts)
    ok(0.5 < spread < 3.0, "cloud has a finite, nontrivial extent")
    ok(twin.self_similarity(8), "refinement identity at depth 8")
    est, err = dyadic.measure_estimate(10, 20000, seed=3)
    ok(abs(est - 1.0) < 0.05, f"unit-interval area estimate {est:.4f}")
    residuals = twin.dilation_series_residuals(12)
    ok(all(approx(r, 2.0 ** -(k + 1), 1e-9) for k, r in enumerate(residuals)),
       "series residuals halve at each order")

    print("== identity suite")
    for name, passed, detail in twin.verify(level=1):
        ok(passed, f"identity {name} ({detail})")

    print(f"\nall {checks} smoke checks passed")


if __name__ == "__main__":
    main()
