# Copyright 2026 The innrange Authors
# SPDX-License-Identifier: Apache-2.0

"""Solves exported LP files with HiGHS (through scipy) and compares against `innrange range`.

Skips with ctest's skip code when scipy is missing.
"""

import json
import math
import os
import random
import subprocess
import sys
import tempfile

SKIP = 77


def parse_lp(text):
    maximize, objective = None, None
    rows, bounds, binaries = [], {}, []
    section = None
    for line in text.splitlines():
        if not line or line.startswith("\\"):
            continue
        if not line.startswith(" "):
            section = line.split()[0]
            if section in ("Maximize", "Minimize"):
                maximize = section == "Maximize"
            continue
        w = line.split()
        if section in ("Maximize", "Minimize"):
            objective = w[1]
        elif section == "Subject":
            terms, sign, i = [], 1.0, 1
            while w[i] not in ("<=", ">=", "="):
                if w[i] in ("+", "-"):
                    sign = -1.0 if w[i] == "-" else 1.0
                    i += 1
                    continue
                terms.append((sign * float(w[i]), w[i + 1]))
                sign, i = 1.0, i + 2
            rows.append((terms, w[i], float(w[i + 1])))
        elif section == "Bounds":
            if len(w) == 5:
                bounds[w[2]] = (float(w[0]), float(w[4]))
            elif w[1] == "=":
                bounds[w[0]] = (float(w[2]), float(w[2]))
            else:
                bounds[w[0]] = (-math.inf, math.inf)
        elif section == "Binary":
            binaries.append(w[0])
    return maximize, objective, rows, bounds, binaries


def solve_lp_text(text, np, opt):
    maximize, objective, rows, bounds, binaries = parse_lp(text)
    names = sorted({n for terms, _, _ in rows for _, n in terms} | set(bounds) | set(binaries) | {objective})
    col = {n: j for j, n in enumerate(names)}
    c = np.zeros(len(names))
    c[col[objective]] = -1.0 if maximize else 1.0
    a = np.zeros((len(rows), len(names)))
    lo, hi = np.full(len(rows), -np.inf), np.full(len(rows), np.inf)
    for r, (terms, sense, rhs) in enumerate(rows):
        for coef, n in terms:
            a[r, col[n]] += coef
        if sense in ("<=", "="):
            hi[r] = rhs
        if sense in (">=", "="):
            lo[r] = rhs
    lb = np.array([bounds.get(n, (0.0, math.inf))[0] for n in names])
    ub = np.array([bounds.get(n, (0.0, math.inf))[1] for n in names])
    for n in binaries:
        lb[col[n]], ub[col[n]] = 0.0, 1.0
    integrality = np.array([1 if n in binaries else 0 for n in names])
    res = opt.milp(c, constraints=opt.LinearConstraint(a, lo, hi), integrality=integrality,
                   bounds=opt.Bounds(lb, ub), options={"mip_rel_gap": 0.0})
    if res.status != 0:
        raise RuntimeError(f"HiGHS status {res.status}: {res.message}")
    return -res.fun if maximize else res.fun


def main():
    try:
        import numpy as np
        import scipy.optimize as opt
    except ImportError:
        print("scipy not available; skipping")
        return SKIP
    binary = sys.argv[1]
    rng = random.Random(2026)
    worst = 0.0
    with tempfile.TemporaryDirectory() as d:
        for trial in range(25):
            sizes = [rng.randint(1, 3)] + [rng.randint(2, 6) for _ in range(rng.randint(1, 3))] + [rng.randint(1, 2)]
            net = {"layers": sizes,
                   "weights": [[[rng.uniform(-2, 2) for _ in range(sizes[i + 1])] for _ in range(sizes[i])]
                               for i in range(len(sizes) - 1)],
                   "biases": [[rng.uniform(-2, 2) for _ in range(sizes[i + 1])] for i in range(len(sizes) - 1)]}
            box = {"bounds": [sorted([rng.uniform(-1, 1), rng.uniform(-1, 1)]) for _ in range(sizes[0])]}
            npath, bpath = os.path.join(d, "n.json"), os.path.join(d, "b.json")
            with open(npath, "w") as f:
                json.dump(net, f)
            with open(bpath, "w") as f:
                json.dump(box, f)
            rr = json.loads(subprocess.run([binary, "range", "-n", npath, "-b", bpath], check=True,
                                           capture_output=True, text=True).stdout)
            for node, out in enumerate(rr["result"]["outputs"]):
                lp = subprocess.run([binary, "encode", "-n", npath, "-b", bpath, "--node", str(node)], check=True,
                                    capture_output=True, text=True).stdout
                upper = solve_lp_text(lp, np, opt)
                lower = solve_lp_text(lp.replace("Maximize", "Minimize"), np, opt)
                for mine, theirs in ((out["upper"], upper), (out["lower"], lower)):
                    worst = max(worst, abs(mine - theirs))
                    if abs(mine - theirs) > 1e-5:
                        print(f"trial {trial} node {node}: innrange {mine} vs HiGHS {theirs}")
                        return 1
    print(f"25 networks agree with HiGHS; largest difference {worst:.3g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
