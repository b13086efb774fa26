# Copyright 2026 The innrange Authors
# SPDX-License-Identifier: Apache-2.0

"""End-to-end checks of the innrange binary: exit codes, output shapes, determinism."""

import json
import os
import random
import subprocess
import sys
import tempfile
import unittest

BINARY = os.environ.get("INNRANGE_BIN", "innrange")


def run(*args, expect=0):
    proc = subprocess.run([BINARY, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        raise AssertionError(
            f"{' '.join(args)}: exit {proc.returncode}, wanted {expect}\nstdout:\n{proc.stdout}\nstderr:\n{proc.stderr}")
    return proc


def random_net(rng, sizes):
    return {
        "layers": sizes,
        "weights": [[[round(rng.uniform(-2, 2), 6) for _ in range(sizes[i + 1])] for _ in range(sizes[i])]
                    for i in range(len(sizes) - 1)],
        "biases": [[round(rng.uniform(-2, 2), 6) for _ in range(sizes[i + 1])] for i in range(len(sizes) - 1)],
    }


class CliTest(unittest.TestCase):
    def setUp(self):
        self.dir = tempfile.TemporaryDirectory()
        rng = random.Random(7)
        self.net = self.write("net.json", random_net(rng, [2, 4, 4, 2]))
        self.box = self.write("box.json", {"bounds": [[-1, 1], [0, 1]]})
        self.ident = self.write("ident.json", {"layers": [[[0], [1]], [[0], [1], [2], [3]],
                                                         [[0], [1], [2], [3]], [[0], [1]]]})
        self.merge = self.write("merge.json", {"layers": [[[0], [1]], [[0, 2], [1, 3]], [[0, 1, 2, 3]], [[0], [1]]]})

    def tearDown(self):
        self.dir.cleanup()

    def path(self, name):
        return os.path.join(self.dir.name, name)

    def write(self, name, doc):
        with open(self.path(name), "w") as f:
            f.write(json.dumps(doc) if not isinstance(doc, str) else doc)
        return self.path(name)

    def test_identity_partition_gives_identical_intervals(self):
        plain = json.loads(run("range", "-n", self.net, "-b", self.box).stdout)
        ident = json.loads(run("range", "-n", self.net, "-b", self.box, "-p", self.ident).stdout)
        self.assertEqual(plain["result"], ident["result"])
        self.assertTrue(ident["metadata"]["abstraction_used"])

    def test_range_is_deterministic(self):
        a = json.loads(run("range", "-n", self.net, "-b", self.box, "-p", self.merge, "-j", "3").stdout)
        b = json.loads(run("range", "-n", self.net, "-b", self.box, "-p", self.merge).stdout)
        self.assertEqual(a["result"], b["result"])
        self.assertEqual(a["metadata"], b["metadata"])

    def test_abstract_range_contains_concrete(self):
        plain = json.loads(run("range", "-n", self.net, "-b", self.box).stdout)["result"]["outputs"]
        merged = json.loads(run("range", "-n", self.net, "-b", self.box, "-p", self.merge).stdout)["result"]["outputs"]
        for p, m in zip(plain, merged):
            self.assertLessEqual(m["lower"], p["lower"] + 1e-6)
            self.assertGreaterEqual(m["upper"], p["upper"] - 1e-6)

    def test_oracle_matches_range(self):
        small = self.write("small.json", random_net(random.Random(3), [2, 3, 3, 1]))
        r = json.loads(run("range", "-n", small, "-b", self.box).stdout)["result"]["outputs"]
        o = json.loads(run("oracle", "-n", small, "-b", self.box).stdout)["result"]["outputs"]
        for a, b in zip(r, o):
            self.assertAlmostEqual(a["lower"], b["lower"], delta=1e-6)
            self.assertAlmostEqual(a["upper"], b["upper"], delta=1e-6)

    def test_bench_row_count(self):
        csv_path = self.path("bench.csv")
        out = self.path("bench.json")
        run("bench", "-n", self.net, "-b", self.box, "--counts", "2,3,4", "--runs", "10", "--seed", "5",
            "--csv", csv_path, "-o", out)
        with open(csv_path) as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], "count,run,node,abs_time,enc_time,solve_time,lower,upper")
        self.assertEqual(len(lines), 1 + 3 * 10 * 2)
        with open(out) as f:
            doc = json.load(f)
        self.assertEqual(doc["result"]["seed"], 5)
        # Same seed, same bounds.
        again = run("bench", "-n", self.net, "-b", self.box, "--counts", "2,3,4", "--runs", "10", "--seed", "5")
        strip = lambda rows: [r.split(",")[:3] + r.split(",")[6:] for r in rows]
        self.assertEqual(strip(again.stdout.splitlines()), strip(lines))

    def test_bench_three_counts_ten_runs_single_output(self):
        one = self.write("one.json", random_net(random.Random(11), [2, 8, 8, 1]))
        out = run("bench", "-n", one, "-b", self.box, "--counts", "2,4,8", "--runs", "10").stdout.splitlines()
        self.assertEqual(len(out), 31)

    def test_soundness(self):
        ok = json.loads(run("check-soundness", "-n", self.net, "-b", self.box, "-p", self.merge,
                            "--samples", "40", "--selections", "1").stdout)
        self.assertEqual(ok["result"]["violation_count"], 0)
        witness = self.write("witness.json", {"layers": [1, 2, 1], "weights": [[[1, 1]], [[1], [1]]],
                                              "biases": [[0, 0], [0]]})
        pbox = self.write("pbox.json", {"bounds": [[0.5, 1]]})
        part = self.write("wpart.json", {"layers": [[[0]], [[0, 1]], [[0]]]})
        run("check-soundness", "-n", witness, "-b", pbox, "-p", part, "--samples", "20", expect=0)
        bad = run("check-soundness", "-n", witness, "-b", pbox, "-p", part, "--samples", "20",
                  "--unscaled-abstraction", expect=1)
        self.assertIn("WARNING", bad.stderr)
        doc = json.loads(bad.stdout)
        self.assertEqual(doc["result"]["violation_count"], 20)
        self.assertIn("warning", doc["metadata"])

    def test_unscaled_requires_opt_in_and_warns(self):
        out = run("range", "-n", self.net, "-b", self.box, "-p", self.merge, "--unscaled-abstraction")
        self.assertIn("WARNING", out.stderr)
        self.assertTrue(json.loads(out.stdout)["metadata"]["unsound_abstraction"])

    def test_exit_codes_and_error_messages(self):
        bad = self.write("bad.json", {"layers": [1, 1], "weights": [[[[5, 3]]]], "biases": [[0]]})
        out = run("validate", "-n", bad, expect=1)
        self.assertIn("$.weights[0][0][0]", out.stdout)
        short = self.write("short.json", {"layers": [[[0]], [[0], [1]], [[0, 1]], [[0], [1]]]})
        out = run("validate", "-n", self.net, "-p", short, expect=1)
        self.assertIn("not covered", out.stdout)
        out = run("range", "-n", self.net, "-b", self.write("b3.json", {"bounds": [[0, 1]]}), expect=1)
        self.assertIn("b3.json", out.stderr)
        self.assertNotIn("terminate", out.stderr)
        out = run("range", "-n", self.write("broken.json", "{\"layers\": [1,"), "-b", self.box, expect=1)
        self.assertIn("broken.json", out.stderr)
        infeasible = self.write("inf.json", {"bounds": [[-1, 1], [0, 1]], "constraints": [
            {"terms": [{"input": 1, "coef": 1}], "sense": ">=", "rhs": 5}]})
        doc = json.loads(run("range", "-n", self.net, "-b", infeasible, expect=2).stdout)
        self.assertFalse(doc["result"]["feasible"])
        run("range", "-n", self.net, "-b", self.box, "--frobnicate", expect=1)

    def test_node_limit_flags_non_exact(self):
        big = self.write("big.json", random_net(random.Random(5), [2, 10, 10, 1]))
        proc = subprocess.run([BINARY, "range", "-n", big, "-b", self.box, "--node-limit", "1"],
                              capture_output=True, text=True)
        doc = json.loads(proc.stdout)
        if doc["result"]["exact"]:
            self.assertEqual(proc.returncode, 0)
        else:
            self.assertEqual(proc.returncode, 2)
            statuses = {o[k] for o in doc["result"]["outputs"] for k in ("lower_status", "upper_status")}
            self.assertIn("node-limit", statuses)

    def test_nnet_input(self):
        nnet = self.write("tiny.nnet", "// tiny\n2,1,1,1,\n1,1,1,\n0,\n-1,\n1,\n0,0,\n1,1,\n2.5,\n-0.5,\n-3,\n4,\n")
        nbox = self.write("nbox.json", {"bounds": [[0, 1]]})
        doc = json.loads(run("range", "-n", nnet, "-b", nbox).stdout)
        self.assertEqual(doc["result"]["outputs"][0]["lower"], 0.0)
        self.assertEqual(doc["result"]["outputs"][0]["upper"], 4.0)
        run("validate", "-n", nnet)
        broken = self.write("broken.nnet", "2,1,1,1,\n1,1,1,\n0,\n-1,\n1,\n0,0,\n1,1,\n2.5,3,\n")
        out = run("validate", "-n", broken, expect=1)
        self.assertIn("broken.nnet: line 8, column 5", out.stderr)

    def test_encode_writes_lp(self):
        lp = run("encode", "-n", self.net, "-b", self.box, "--node", "1").stdout
        self.assertIn("Maximize", lp)
        self.assertIn(" obj: x_3_1", lp)
        self.assertEqual(lp.count("C_"), 4 * (4 + 4 + 2))
        run("encode", "-n", self.net, "-b", self.box, "--node", "2", expect=1)

    def test_abstract_writes_network(self):
        doc = json.loads(run("abstract", "-n", self.net, "-p", self.merge).stdout)
        self.assertEqual(doc["layers"], [2, 2, 1, 2])
        gen = json.loads(run("abstract", "-n", self.net, "--groups", "2", "--seed", "4").stdout)
        self.assertEqual(gen["layers"], [2, 2, 2, 2])


if __name__ == "__main__":
    if len(sys.argv) > 1 and not sys.argv[1].startswith("-"):
        BINARY = sys.argv.pop(1)
    unittest.main()
