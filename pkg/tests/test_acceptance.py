"""Acceptance criteria at their stated sizes, tolerances and time limits.

Each test records a one-line verdict; the lines are printed in the pytest
terminal summary, or directly when this file is run as a script.
"""
import os
import subprocess
import sys
import time

import pytest

from weylkit import checks

RESULTS = {}


def record(num, title, ok, detail, elapsed, limit):
    status = "PASS" if ok and (limit is None or elapsed < limit) else "FAIL"
    budget = f" (limit {limit:.0f}s)" if limit else ""
    RESULTS[num] = f"[{status}] {num:2d}. {title}: {detail}; {elapsed:.2f}s{budget}"
    return status == "PASS"


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def verdict(results):
    cases = sum(r.cases for r in results)
    failures = [f for r in results for f in r.failures]
    return cases, failures


def test_01_trace_formula():
    res, dt = timed(lambda: checks.check_trace_formula(seed=0, count=200))
    ok = record(1, "trace formula, exact", res.ok and res.cases >= 200, f"{res.cases} random modules, {len(res.failures)} failures", dt, 60)
    assert ok, res.failures[:5]


def test_02_coinvariant_order():
    res, dt = timed(lambda: checks.check_coinvariants(seed=0, count=100))
    ok = record(2, "|coinvariants| = det(1-u) = alternating trace", res.ok and res.cases >= 100, f"{res.cases} elliptic matrices", dt, 5)
    assert ok, res.failures[:5]


def test_03_length_threeway():
    res, dt = timed(lambda: checks.check_length_threeway(max_len=10))
    ok = record(3, "length three-way agreement (A1, A2, C2, G2; l <= 10)", res.ok, f"{res.cases} elements", dt, 30)
    assert ok, res.failures[:5]


def test_04_demazure():
    (law, assoc), dt = timed(lambda: (checks.check_demazure_law(max_total=6), checks.check_demazure_assoc(seed=0, count=1000)))
    cases, failures = verdict([law, assoc])
    ok = record(4, "Demazure interval law (l(u)+l(v) <= 6) and associativity", not failures and assoc.cases >= 1000,
                f"{law.cases} pairs, {assoc.cases} triples", dt, 60)
    assert ok, failures[:5]


def test_05_regularity():
    res, dt = timed(lambda: checks.check_regularity(seed=0, max_len=8, pairs=500))
    ok = record(5, "m-regularity sandwich (A2, l <= 8) and Demazure closure", res.ok, f"{res.cases} cases", dt, 30)
    assert ok, res.failures[:5]


def test_06_packet_counts():
    from weylkit.cartan import build_root_datum
    from weylkit.packets import PacketDescription, packet_classes, packet_partition
    from weylkit.twist import FrobeniusTwist, parse_finite_word

    def run():
        named = []
        a1 = build_root_datum("A", 1)
        a2 = build_root_datum("A", 2)
        ad = build_root_datum("A", 1, isogeny="adjoint")
        named.append(packet_classes(PacketDescription(a1, FrobeniusTwist(a1), parse_finite_word(a1, "s"))).count == 2)
        named.append(packet_classes(PacketDescription(a2, FrobeniusTwist(a2), a2.coxeter_element)).count == 3)
        named.append(len(packet_partition(PacketDescription(ad, FrobeniusTwist(ad), parse_finite_word(ad, "s")))) == 1)
        return named, checks.check_fiber_counts(), checks.check_refinement()

    (named, counts, refine), dt = timed(run)
    cases, failures = verdict([counts, refine])
    ok = record(6, "packet counts (A1: 2, A2 Coxeter: 3, det(1-v), adjoint merge)", all(named) and not failures,
                f"named cases {named}, {cases} randomized cases", dt, 5)
    assert ok, failures[:5]


def test_07_induced_identity():
    res, dt = timed(lambda: checks.check_induced(seed=0, count=100))
    ok = record(7, "induced-trace identity, exact", res.ok and res.cases >= 100, f"{res.cases} (Lambda_0, M_0) pairs", dt, 30)
    assert ok, res.failures[:5]


def test_08_filtration_fg():
    res, dt = timed(lambda: checks.check_filtration_fg(seed=0, n_max=20, subgroups=3, verify=True))
    ok = record(8, "finite generation of the length filtration (n_max = 20)", res.ok, f"{res.cases} lattices", dt, 30)
    assert ok, res.failures[:5]


def test_09_weyl_averaging():
    res, dt = timed(lambda: checks.check_weyl_averaging(seed=0, count=50))
    ok = record(9, "Weyl averaging: invariants form = averaged form", res.ok and res.cases >= 50, f"{res.cases} extended modules", dt, 30)
    assert ok, res.failures[:5]


def test_10_cli_determinism():
    from test_cli import CASES, GOLDEN

    def run():
        bad = []
        for name, argv in sorted(CASES.items()):
            want = (GOLDEN / f"{name}.json").read_bytes()
            for threads in (1, 1, 4, 4):
                env = dict(os.environ, WEYLKIT_THREADS=str(threads))
                p = subprocess.run([sys.executable, "-m", "weylkit", *argv], capture_output=True, env=env, timeout=300)
                if p.returncode != 0 or p.stdout != want:
                    bad.append((name, threads))
        return bad

    bad, dt = timed(run)
    ok = record(10, "CLI golden files byte-stable (two runs, threads 1 and 4)", not bad, f"{len(CASES)} subcommand cases, mismatches {bad}", dt, None)
    assert ok


if __name__ == "__main__":
    sys.path.insert(0, os.path.dirname(__file__))
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_")):
        try:
            fn()
        except AssertionError:
            pass
    for k in sorted(RESULTS):
        print(RESULTS[k])
