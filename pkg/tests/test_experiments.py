"""Generator and report-plumbing tests for the experiment drivers.  The
full-scale sweeps live in the acceptance suite; here we pin the enumeration
combinatorics, the generator invariants, and byte-level determinism."""

import json
import random

import pytest

from srlab.experiments import (
    batch_report,
    counting_report,
    fixed_amalgam_presentations,
    hnn_word_from_signed,
    integer_partitions,
    iter_bounded_amalgam_elements,
    iter_set_partitions,
    iter_two_clique_family,
    random_planted_multipartite,
    random_sr_graph,
    random_support_family,
    report_bytes,
    support_series_csv,
    support_series_report,
)
from srlab.hnn import HnnPresentation, structure_word
from srlab.ring_lab import SUPPORT_CSV_FIELDS
from srlab.sr_graph import complete_criterion, multipartite_hypotheses, stats
from srlab.words import Alphabet, from_signed


def test_set_partition_counts_are_bell_numbers():
    bells = [1, 1, 2, 5, 15, 52]
    for n, bell in enumerate(bells):
        assert len(list(iter_set_partitions(list(range(n))))) == bell


def test_integer_partitions_of_eight():
    parts = list(integer_partitions(8))
    assert len(parts) == 22
    for shape in parts:
        assert sum(shape) == 8
        assert all(shape[i] >= shape[i + 1] for i in range(len(shape) - 1))


def test_two_clique_family_small_counts():
    # per-size counts of the connected two-sided clique-union family
    by_n = {}
    for g in iter_two_clique_family(4):
        by_n[g.n] = by_n.get(g.n, 0) + 1
    assert by_n == {1: 1, 2: 2, 3: 4, 4: 15}


def test_two_clique_family_members_satisfy_criterion_hypotheses():
    for g in iter_two_clique_family(4):
        # raises on incomplete F-components or a disconnected union
        complete_criterion(g)


def test_random_sr_graph_is_valid_and_bounded():
    rng = random.Random(11)
    for _ in range(25):
        g = random_sr_graph(rng, max_n=10)
        assert 1 <= g.n <= 10
        stats(g)  # must not raise


def test_random_planted_multipartite_hypotheses():
    rng = random.Random(12)
    for _ in range(20):
        g = random_planted_multipartite(rng)
        assert multipartite_hypotheses(g)


def test_hnn_word_from_signed_matches_structure_split():
    base = Alphabet(("a", "b"))
    p = HnnPresentation(base, "t", (), ())
    # reduced sequences: the raw split and the parsed split must agree
    for seq in [(1, 3, 2), (-3, 1, 3), (1, 2, -1), ()]:
        raw = hnn_word_from_signed(p, seq)
        parsed = structure_word(p, from_signed(p.full_alphabet, seq))
        assert raw.t_length == parsed.t_length


def test_hnn_word_from_signed_keeps_unreduced_stable_pairs():
    base = Alphabet(("a", "b"))
    p = HnnPresentation(base, "t", (), ())
    # t t^-1 must survive the split; free reduction would erase it
    raw = hnn_word_from_signed(p, (3, -3))
    assert raw.t_length == 2


def test_bounded_amalgam_elements_are_distinct_and_bounded():
    _, glued = fixed_amalgam_presentations()
    elems = list(iter_bounded_amalgam_elements(glued, 2, 1))
    assert len(elems) == len(set(elems))
    assert all(w.length <= 2 for w in elems)
    assert elems  # the pool feeds the random witness sweeps


def test_report_bytes_ignores_key_insertion_order():
    assert report_bytes({"a": 1, "b": [2]}) == report_bytes({"b": [2], "a": 1})


def test_counting_report_deterministic():
    first = counting_report(runs=3, seed=17)
    second = counting_report(runs=3, seed=17)
    assert report_bytes(first) == report_bytes(second)


def test_support_family_instances_are_identity_free_on_phi():
    rng = random.Random(13)
    for _ in range(10):
        for _, phi, _u in random_support_family(rng):
            assert all(not g.is_identity for g in phi.support)


def test_support_series_csv_header():
    report = support_series_report(runs=2, seed=14)
    lines = support_series_csv(report).splitlines()
    assert lines[0] == ",".join(SUPPORT_CSV_FIELDS)
    assert len(lines) == 3


def test_batch_report_rejects_unknown_scale():
    with pytest.raises(ValueError):
        batch_report(scale="huge")


def test_batch_report_quick_sections_hold():
    report = batch_report(seed=21, scale="quick")
    assert report["holds"]
    assert set(report["sections"]) == {
        "graph_equivalence",
        "graph_bounds",
        "planted",
        "witness_sweep",
        "degenerate_oracle",
        "extension_relations",
        "extension_witness",
        "dichotomy",
        "amalgam_witness",
        "free_families",
        "counting",
        "support_series",
    }
    # seed is stamped on every seeded section
    payload = json.loads(report_bytes(report))
    assert payload["seed"] == 21
