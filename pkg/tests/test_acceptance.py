"""One check per acceptance criterion; each prints a ``criterion N: PASS|FAIL``
line, and the lines are repeated together at the end of the run."""
import json
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from esakia_forge.cli import dispatch
from esakia_forge.suites import run_suite

RESULTS: dict[int, str] = {}


def report(capsys, n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    RESULTS[n] = line
    with capsys.disabled():
        print(f"\n{line}")
    assert ok, line


def timed_suite(name, **kw):
    start = time.perf_counter()
    rep = run_suite(name, **kw)
    return rep, time.perf_counter() - start


def suite_detail(rep, secs):
    return f"[{rep.name}: {len(rep.log)} checks, {rep.failures} failed, {secs:.2f}s]"


# (criterion, suite, size bound passed to the suite, time limit in seconds)
SUITE_CRITERIA = [
    (2, "stabilization", 4, 30),
    (3, "g-open", 3, 300),
    (4, "lifting", 3, None),
    (5, "lc", 4, 300),
    (6, "kc", 4, None),
    (7, "bool", 4, None),
    (8, "godel", None, 300),
    (9, "codistributivity", None, None),
    (10, "product", None, None),
    (11, "amalgamation", 3, None),
    (12, "stability", 3, None),
    (13, "inquisitive", 3, None),
]


def test_criterion_1_ladder(capsys, tmp_path):
    chain = tmp_path / "chain.json"
    chain.write_text(json.dumps({"elements": ["0", "1"], "leq": [["0", "1"]]}))
    start = time.perf_counter()
    status = dispatch(["complex", "build", "--poset", str(chain), "--witness", "terminal",
                       "--depth", "3", "--mode", "ha"])
    doc = json.loads(capsys.readouterr().out)
    rep = run_suite("ladder")
    secs = time.perf_counter() - start
    ok = status == 0 and doc["sizes"] == [2, 3, 4, 5] and rep.passed and secs < 1.0
    report(capsys, 1, ok, f"sizes {doc['sizes']} {suite_detail(rep, secs)}")


@pytest.mark.parametrize("n,name,size,limit", SUITE_CRITERIA,
                         ids=[f"criterion_{c[0]}_{c[1]}" for c in SUITE_CRITERIA])
def test_suite_criterion(capsys, n, name, size, limit):
    rep, secs = timed_suite(name, max_size=size)
    ok = rep.passed and (limit is None or secs < limit)
    limit_text = f" limit {limit}s" if limit else ""
    report(capsys, n, ok, suite_detail(rep, secs) + limit_text)


def _cli(args, seed):
    env = {**os.environ, "PYTHONHASHSEED": str(seed)}
    src = str(Path(__file__).resolve().parent.parent / "src")
    env["PYTHONPATH"] = src + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.Popen([sys.executable, "-m", "esakia_forge", *args],
                            stdout=subprocess.PIPE, stderr=subprocess.PIPE, env=env)


def test_criterion_14_determinism(capsys, tmp_path):
    chain = tmp_path / "chain.json"
    chain.write_text(json.dumps({"elements": ["0", "1"], "leq": [["0", "1"]]}))
    vee = tmp_path / "vee.json"
    vee.write_text(json.dumps({"elements": ["a", "b", "c"],
                               "leq": [["c", "a"], ["c", "b"]]}))
    runs = [["check", "--suite", "all"]]
    for emit in ("json", "dot"):
        runs += [["complex", "build", "--poset", str(chain), "--depth", "3", "--emit", emit],
                 ["complex", "build", "--poset", str(vee), "--depth", "2", "--emit", emit],
                 ["universal", "--gens", "1", "--depth", "4", "--emit", emit],
                 ["inquisitive", "--size", "2", "--depth", "2", "--emit", emit],
                 ["free", "--logic", "lc", "--gens", "2", "--emit", emit],
                 ["product", "--left", str(chain), "--right", str(vee), "--emit", emit]]
    runs += [["stability", "--poset", str(chain), "--depth", "3"],
             ["regular", "--poset", str(vee)],
             ["oracle", "godel", "--vars", "2"]]
    # different hash seeds, so set and dict iteration order cannot leak through
    procs = [(args, _cli(args, 1), _cli(args, 2)) for args in runs]
    differing, failed = [], []
    for args, a, b in procs:
        out_a, _ = a.communicate()
        out_b, _ = b.communicate()
        if a.returncode or b.returncode:
            failed.append(" ".join(args[:2]))
        if out_a != out_b or not out_a:
            differing.append(" ".join(args[:2]))
    ok = not differing and not failed
    report(capsys, 14, ok, f"[{len(runs)} commands run twice, {len(differing)} differ, "
                           f"{len(failed)} failed]")
