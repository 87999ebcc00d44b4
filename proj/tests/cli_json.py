"""Runs the CLI, checks exit codes and validates every --json document."""
import json
import os
import subprocess
import sys

import jsonschema

CLI, ROOT = sys.argv[1], sys.argv[2]
THEORIES = os.path.join(ROOT, "corpus", "theories")
PROOFS = os.path.join(ROOT, "corpus", "proofs")
with open(os.path.join(ROOT, "schema", "report.schema.json")) as f:
    SCHEMA = json.load(f)
validator = jsonschema.Draft202012Validator(SCHEMA)

failures = []


def run(args, expect_exit, env=None, check=None):
    full_env = dict(os.environ, **(env or {}))
    p = subprocess.run([CLI, "--json"] + args, capture_output=True, text=True, env=full_env)
    label = " ".join(args)
    if p.returncode != expect_exit:
        failures.append(f"{label}: exit {p.returncode}, expected {expect_exit}\n{p.stdout}{p.stderr}")
        return None
    try:
        doc = json.loads(p.stdout)
    except json.JSONDecodeError as e:
        failures.append(f"{label}: not JSON ({e})")
        return None
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        failures.append(f"{label}: schema: {errors[0].message} at {list(errors[0].path)}")
    if check and not check(doc):
        failures.append(f"{label}: unexpected content")
    return doc


def th(name):
    return os.path.join(THEORIES, name + ".dth")


def has_cex(doc, text):
    return any(c["input"] == text for ch in doc["checks"] for c in ch["counterexamples"])


# all expectations of demo match
run(["verify", th("demo")], 0, check=lambda d: d["unexpected"] == 0)
# demo with the strong untag/tag check expected to hold
run(["verify", os.path.join(ROOT, "corpus", "expected_failures", "demo_strong_holds.dth")], 1,
    check=lambda d: d["unexpected"] == 1 and has_cex(d, "exn T b"))
run(["verify", th("handlers"), "--only", "multi"], 0, check=lambda d: len(d["checks"]) == 1)
run(["verify", th("handlers"), "--only", "missing"], 2)
run(["prove", th("demo"), "--proof", os.path.join(PROOFS, "demo_axiom.dpf")], 0)
run(["prove", th("demo"), "--proof", os.path.join(PROOFS, "invalid", "demo_axiom_strong.dpf")], 1,
    check=lambda d: d["derivations"][0]["path"] == "root")
run(["check", th("states")], 0)
run(["eval", th("demo"), "--term", "untag[T] . tag[T]", "--input", "exn T b"], 0,
    check=lambda d: d["output"] == "ok b")
run(["eval", th("states"), "--term", "update[X]", "--input", "0", "--state", "{X=1, Y=u}"], 0,
    check=lambda d: d["output"] == "((), {X=0, Y=u})")
run(["eval", th("demo"), "--term", "tag[T] . tag[T]", "--input", "a"], 2)
run(["soundness", th("demo"), "--rules", "w-subs", "--samples", "100", "--witnesses"], 0)
run(["soundness", th("demo"), "--rules", "no-such-rule"], 2)
run(["rules", "--logic", "EXC_PLUS"], 0, check=lambda d: len(d["rules"]) == 47)
run(["rules", "--logic", "BOGUS"], 2, check=lambda d: d["command"] == "error")
run(["oracle", th("handlers")], 0, check=lambda d: d["differing"] == 0)
run(["verify", th("demo")], 3, env={"DECKIT_MAX_CARRIER": "1"},
    check=lambda d: d["kind"] == "CarrierTooLarge")
for name in sorted(os.listdir(THEORIES)):
    run(["check", os.path.join(THEORIES, name)], 0)

# usage errors print help and exit 2
p = subprocess.run([CLI], capture_output=True, text=True)
if p.returncode != 2 or "Usage" not in p.stdout + p.stderr:
    failures.append(f"no subcommand: exit {p.returncode}")

# identical inputs give identical bytes
outs = [subprocess.run([CLI, "soundness", th("pairs"), "--samples", "80"], capture_output=True).stdout
        for _ in range(2)]
if outs[0] != outs[1]:
    failures.append("soundness output differs between runs")

for f in failures:
    print("FAIL", f)
print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
