"""End-to-end checks of baro_lab: schemas, exit codes, determinism."""

import csv
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

LAB = sys.argv[1]
ROOT = pathlib.Path(sys.argv[2])
DOCS = ROOT / "docs"
CONFIG_SCHEMA = json.loads((DOCS / "config.schema.json").read_text())
SUMMARY_SCHEMA = json.loads((DOCS / "summary.schema.json").read_text())

TRACE_HEADER = ["t", "is_ro", "value", "weight", "rank", "tentative",
                "blocked_main", "blocked_outer", "picked", "occupation"]
TRIALS_HEADER = ["trial", "seed", "algorithm", "ro_value", "total_value",
                 "occupation", "ro_picks", "picks", "invariants_ok"]
SWEEP_HEADER = ["k", "gamma", "pattern", "algorithm", "ratio_mean",
                "ratio_ci95", "trials", "seed"]

failures = []


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def lab(*args):
    return subprocess.run([LAB, *map(str, args)], capture_output=True, text=True)


def header(path):
    with open(path, newline="") as f:
        return next(csv.reader(f))


def write(tmp, name, text):
    path = tmp / name
    path.write_text(text)
    return path


def main():
    tmp = pathlib.Path(tempfile.mkdtemp(prefix="baro_lab_"))

    for example in sorted((DOCS / "examples").glob("*.json")):
        try:
            jsonschema.validate(json.loads(example.read_text()), CONFIG_SCHEMA)
            check(True, f"{example.name} matches the config schema")
        except jsonschema.ValidationError as e:
            check(False, f"{example.name} matches the config schema: {e.message}")

    minimal = DOCS / "examples" / "minimal.json"
    a, b = tmp / "a", tmp / "b"
    r = lab("run", minimal, "--out", a, "--threads", 1)
    check(r.returncode == 0, "run minimal exits 0")
    r = lab("run", minimal, "--out", b, "--threads", 4)
    check(r.returncode == 0, "run minimal with 4 threads exits 0")
    summary = json.loads((a / "summary.json").read_text())
    jsonschema.validate(summary, SUMMARY_SCHEMA)
    check(True, "minimal summary matches the summary schema")
    check(summary["results"][0]["ratio"]["ratio_mean"] > 0, "ratio field present")
    for f in sorted(p.name for p in a.iterdir()):
        check((a / f).read_bytes() == (b / f).read_bytes(),
              f"{f} byte-identical across runs and thread counts")
    check(header(a / "trials.csv") == TRIALS_HEADER, "trials.csv columns")
    traces = sorted(a.glob("trace_*.csv"))
    check(len(traces) == 1 and header(traces[0]) == TRACE_HEADER,
          "trace csv columns")

    out = tmp / "too_many"
    r = lab("run", DOCS / "examples" / "too_many.json", "--out", out)
    check(r.returncode == 0, "run too_many exits 0")
    summary = json.loads((out / "summary.json").read_text())
    jsonschema.validate(summary, SUMMARY_SCHEMA)
    gaps = summary["ratio_gaps"]
    check(len(gaps) == 1 and gaps[0]["baseline"] == "primal"
          and gaps[0]["difference"] > 0, "too_many reports a positive ratio gap")

    out = tmp / "paper"
    r = lab("run", minimal, "--out", out, "--profile", "paper")
    summary = json.loads((out / "summary.json").read_text())
    jsonschema.validate(summary, SUMMARY_SCHEMA)
    check(summary["config"]["profile"] == "paper"
          and summary["config"]["constants"]["a1"] == 601,
          "--profile paper overrides the constants")

    out = tmp / "sweep"
    r = lab("sweep", DOCS / "examples" / "sweep_gamma.json", "--out", out)
    check(r.returncode == 0, "sweep exits 0")
    with open(out / "sweep.csv", newline="") as f:
        rows = list(csv.reader(f))
    check(rows[0] == SWEEP_HEADER, "sweep.csv columns")
    check(len(rows) == 1 + 6, "sweep emits one row per grid point and algorithm")

    single = write(tmp, "single.json",
                   '{"n": 500, "k": 10, "trials": 2, "grid": {"k": [10]}}\n')
    r = lab("sweep", single, "--out", tmp / "single")
    check(r.returncode == 0 and r.stdout.count("\n") == 2,
          "single grid point gives one row")

    bad_key = write(tmp, "bad_key.json",
                    '{\n  "n": 100,\n  "k": 5,\n  "trails": 3\n}\n')
    r = lab("run", bad_key, "--out", tmp / "x")
    check(r.returncode == 2 and f"{bad_key}:4:" in r.stderr,
          "unknown key: exit 2 anchored at line 4")
    bad_type = write(tmp, "bad_type.json",
                     '{\n  "n": 100,\n  "k": "five"\n}\n')
    r = lab("run", bad_type, "--out", tmp / "x")
    check(r.returncode == 2 and f"{bad_type}:3:" in r.stderr,
          "wrong type: exit 2 anchored at line 3")
    malformed = write(tmp, "malformed.json", '{\n  "n": 100,\n  "k": 5,,\n}\n')
    r = lab("run", malformed, "--out", tmp / "x")
    check(r.returncode == 2 and f"{malformed}:3:" in r.stderr,
          "malformed JSON: exit 2 anchored at line 3")
    rule = write(tmp, "rule.json",
                 '{\n  "n": 100,\n  "k": 5,\n  "gamma": 2\n}\n')
    r = lab("run", rule, "--out", tmp / "x")
    check(r.returncode == 2 and f"{rule}:4:" in r.stderr,
          "pattern none with gamma > 0: exit 2 at the gamma line")
    empty = write(tmp, "empty.json", '{"n": 100, "k": 5, "grid": {}}\n')
    check(lab("sweep", empty, "--out", tmp / "x").returncode == 2,
          "empty grid: exit 2")
    empty_axis = write(tmp, "empty_axis.json",
                       '{"n": 100, "k": 5, "grid": {"k": []}}\n')
    check(lab("sweep", empty_axis, "--out", tmp / "x").returncode == 2,
          "empty grid axis: exit 2")
    check(lab("run", tmp / "missing.json").returncode == 3,
          "unreadable config: exit 3")
    blocker = write(tmp, "blocker", "not a directory\n")
    check(lab("run", minimal, "--out", blocker / "sub").returncode == 3,
          "unwritable output: exit 3")
    check(lab("verify", "no-such-suite").returncode == 2, "unknown suite: exit 2")
    check(lab("bogus").returncode == 2, "unknown command: exit 2")

    r1 = lab("verify", "lemma-sat", "--seed", 5, "--cases", 2000)
    r2 = lab("verify", "lemma-sat", "--seed", 5, "--cases", 2000)
    check(r1.returncode == 0 and r1.stdout == r2.stdout,
          "lemma-sat verify is reproducible")
    r = lab("verify", "lp-equivalence")
    check(r.returncode == 0 and "pass=1000 flag=0 fail=0" in r.stdout,
          "lp-equivalence: 1000 passes")

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
