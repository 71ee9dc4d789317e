"""Acceptance gates.

One test per gate; each prints a single PASS/FAIL line before asserting, so
a bare run still reads as a checklist.  Derived counts (family sizes, the
exhaustive sequence total) are frozen from independent enumeration; the
wall-clock ceilings are part of the gate and are asserted, not advisory.
Randomized gates use pinned seeds and tolerate zero violations.
"""

import random
import time
from collections import Counter

from srlab.elements import FreeGroupOps
from srlab.experiments import (
    amalgam_witness_report,
    batch_report,
    counting_report,
    degenerate_oracle_report,
    dichotomy_report,
    free_family_report,
    graph_bounds_report,
    graph_equivalence_report,
    hnn_relation_report,
    hnn_witness_report,
    planted_cycle_report,
    random_left_instance,
    random_right_instance,
    report_bytes,
    support_series_report,
    witness_sweep_report,
)
from srlab.ring_lab import left_translation_table, right_translation_table
from srlab.words import Alphabet

# frozen enumeration sizes: the connected two-sided clique-union family up to
# 8 vertices, and how many of its members carry an alternating cycle
FAMILY_INSTANCES = 9190
FAMILY_WITH_CYCLE = 4788

# raw sequences over 2 base generators plus the stable letter, length <= 8:
# sum of 6^k for k = 0..8
DEGENERATE_SEQUENCES = 2_015_539

# hard wall-clock ceilings, seconds
EQUIVALENCE_TIME_LIMIT = 120.0
PLANTED_TIME_LIMIT = 60.0
SWEEP_TIME_LIMIT = 300.0


def _verdict(gate: int, label: str, ok: bool, detail: str) -> None:
    print(f"gate {gate} ({label}): {'PASS' if ok else 'FAIL'} [{detail}]")


def test_gate_01_criterion_matches_cycle_search_exhaustively():
    start = time.monotonic()
    report = graph_equivalence_report(max_n=8)
    elapsed = time.monotonic() - start
    ok = (
        report["holds"]
        and report["instances"] == FAMILY_INSTANCES
        and report["with_cycle"] == FAMILY_WITH_CYCLE
        and not report["disagreements"]
        and elapsed < EQUIVALENCE_TIME_LIMIT
    )
    _verdict(
        1,
        "component-count criterion vs cycle search",
        ok,
        f"{report['instances']} instances, {len(report['disagreements'])} "
        f"disagreements, {elapsed:.1f}s",
    )
    assert ok, report["disagreements"][:3]


def test_gate_02_component_bound_and_cycle_free_witnesses():
    report = graph_bounds_report(max_n=8, samples=10_000, sample_max_n=10, seed=2)
    ok = (
        report["holds"]
        and report["family_instances"] == FAMILY_INSTANCES
        and report["samples"] == 10_000
        and not report["inequality_violations"]
        and not report["witness_violations"]
        and report["cycle_free_samples"] > 0
    )
    _verdict(
        2,
        "component bound and cycle-free witnesses",
        ok,
        f"{report['family_instances']} family + {report['samples']} sampled, "
        f"{report['cycle_free_samples']} cycle-free, "
        f"{len(report['inequality_violations'])} + "
        f"{len(report['witness_violations'])} violations",
    )
    assert ok


def test_gate_03_planted_multipartite_instances_have_cycles():
    start = time.monotonic()
    report = planted_cycle_report(count=1000, seed=3)
    elapsed = time.monotonic() - start
    ok = (
        report["holds"]
        and report["count"] == 1000
        and not report["failures"]
        and elapsed < PLANTED_TIME_LIMIT
    )
    _verdict(
        3,
        "planted multipartite cycles",
        ok,
        f"1000 instances, n in [{report['min_n']}, {report['max_n']}], "
        f"{len(report['failures'])} failures, {elapsed:.1f}s",
    )
    assert ok, report["failures"][:3]


def _brute_isolated(table) -> int:
    # recount isolation from scratch: format every product and count repeats
    ops = table.ops
    texts = [ops.fmt(ops.multiply(f, g)) for f, g in table.pairs]
    counts = Counter(texts)
    return sum(1 for t in texts if counts[t] == 1)


def test_gate_04_translation_tables_beat_thresholds_brute_forced():
    ops = FreeGroupOps(Alphabet(("a", "b")))
    rng = random.Random(4)
    violations = []
    for run in range(50):
        sets, translators = random_right_instance(rng)
        table = right_translation_table(ops, sets[0], sets[1], sets[2], translators)
        brute = _brute_isolated(table)
        if brute != table.isolated_count or brute <= len(translators):
            violations.append(("right", run, brute, len(translators)))
    for run in range(50):
        s_list, x_list = random_left_instance(rng)
        table = left_translation_table(ops, s_list, x_list)
        brute = _brute_isolated(table)
        total = sum(len(s) for s in s_list)
        if brute != table.isolated_count or brute <= total:
            violations.append(("left", run, brute, total))
    ok = not violations
    _verdict(
        4,
        "translation-table counting, brute-forced",
        ok,
        f"50 right + 50 left instances, {len(violations)} violations",
    )
    assert ok, violations[:3]


def test_gate_05_conjugator_witnesses_hold_at_bound_six():
    start = time.monotonic()
    report = witness_sweep_report(
        count=100, seed=5, max_set_size=3, max_member_len=4, check_len=6
    )
    elapsed = time.monotonic() - start
    ok = (
        report["holds"]
        and report["count"] == 100
        and not report["failures"]
        and elapsed < SWEEP_TIME_LIMIT
    )
    _verdict(
        5,
        "power-conjugator witnesses at bound 6",
        ok,
        f"100 random sets, {len(report['failures'])} failures, {elapsed:.1f}s",
    )
    assert ok, report["failures"][:3]


def test_gate_06_extension_calculus_oracle_relations_witnesses():
    oracle = degenerate_oracle_report(max_len=8)
    relations = hnn_relation_report(count=20, seed=6)
    witnesses = hnn_witness_report(count=20, seed=6)
    ok = (
        oracle["holds"]
        and oracle["checked"] == DEGENERATE_SEQUENCES
        and not oracle["mismatches"]
        and relations["holds"]
        and len(relations["rows"]) == 20
        and witnesses["holds"]
        and witnesses["count"] == 20
        and not witnesses["failures"]
    )
    _verdict(
        6,
        "extension calculus: free-product oracle, defining relation, witnesses",
        ok,
        f"{oracle['checked']} sequences agree, 20 relation rows, "
        f"20 verified witness runs ({witnesses['skipped']} skipped draws)",
    )
    assert ok, (oracle["mismatches"][:2], witnesses["failures"][:2])


def test_gate_07_amalgam_dichotomy_witnesses_free_families():
    dichotomy = dichotomy_report(max_sylls=3)
    witnesses = amalgam_witness_report(count=50, seed=7)
    families = free_family_report(family_size=3, relation_len=6)
    sections_ok = all(
        not s["neither"] and s["sandwich"] + s["power"] == s["elements"]
        for s in dichotomy["presentations"]
    )
    both_shapes = all(
        s["sandwich"] > 0 and s["power"] > 0 for s in dichotomy["presentations"]
    )
    ok = (
        dichotomy["holds"]
        and sections_ok
        and both_shapes
        and witnesses["holds"]
        and not witnesses["failures"]
        and families["holds"]
        and len(families["rows"]) == 5
        and all(r["relation"] is None for r in families["rows"])
    )
    checked = sum(s["elements"] for s in dichotomy["presentations"])
    _verdict(
        7,
        "amalgam shape dichotomy, witnesses, free families",
        ok,
        f"{checked} middles classified, 50 witness runs, "
        f"5 families relation-free at syllable bound 6",
    )
    assert ok


def test_gate_08_support_bound_never_below_two():
    report = support_series_report(runs=50, seed=8)
    ok = (
        report["holds"]
        and report["runs"] == 50
        and len(report["rows"]) == 50
        and report["min_support_w"] >= 2
        and all(row["holds"] for row in report["rows"])
    )
    _verdict(
        8,
        "group-ring support bound",
        ok,
        f"50 runs, min surviving support {report['min_support_w']}",
    )
    assert ok


def test_gate_09_reports_are_byte_identical_for_a_seed():
    makers = [
        ("planted", lambda: planted_cycle_report(count=30, seed=9)),
        ("witness_sweep", lambda: witness_sweep_report(count=5, seed=9)),
        ("extension_witness", lambda: hnn_witness_report(count=3, seed=9)),
        ("amalgam_witness", lambda: amalgam_witness_report(count=5, seed=9)),
        ("counting", lambda: counting_report(runs=5, seed=9)),
        ("support_series", lambda: support_series_report(runs=3, seed=9)),
        ("batch_quick", lambda: batch_report(seed=9, scale="quick")),
    ]
    mismatched = []
    for name, make in makers:
        first, second = make(), make()
        if report_bytes(first) != report_bytes(second):
            mismatched.append(name)
        if first.get("seed") != 9:
            mismatched.append(name + ":seed")
    ok = not mismatched
    _verdict(
        9,
        "seeded reports byte-identical",
        ok,
        f"{len(makers)} report families re-run, mismatches: {mismatched or 'none'}",
    )
    assert ok, mismatched
