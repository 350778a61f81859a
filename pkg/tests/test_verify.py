from __future__ import annotations

import random
from dataclasses import replace

from contiguity import constant_map, identity_map
from contiguity.distance import DistanceResult
from contiguity.verify import Evaluator, Ledger, Limits, generate_tasks, make_pair_task, load_corpus, run_suite

from conftest import FIXTURES


def test_interval_semantics():
    led = Ledger()
    led.le("a", 1, 2, {})
    led.le("b", DistanceResult(3, False, (), lower_bound=1), 2, {})
    led.le("c", 3, DistanceResult(2, False, (), lower_bound=0), {})
    led.eq("d", 2, 1, {"x": 1})
    assert led.tally["a"]["pass"] == 1
    assert led.tally["b"]["undecided"] == 1
    assert led.tally["c"]["fail"] == 1
    assert [v["check"] for v in led.violations] == ["c", "d"]
    assert led.violations[1]["instance"] == {"x": 1}


def test_tasks_are_reproducible():
    a = generate_tasks(7, 5, 5, 2, [], [])
    b = generate_tasks(7, 5, 5, 2, [], [])
    assert a == b
    complexes, pairs = a
    assert len(complexes) == 5 and len(pairs) == 5
    assert [t.oracle for t in complexes] == [True, False, True, False, True]


def test_corpus_loads():
    complexes, maps = load_corpus(FIXTURES)
    assert any(K.n_facets == 7 for K in complexes)
    assert maps and all(f.domain == g.domain and f.codomain == g.codomain for f, g in maps)


def test_small_suite_has_no_violations():
    report = run_suite(seed=11, n_complexes=8, n_pairs=12, oracle_every=4, corpus_dir=None)
    assert report["violations"] == []
    assert report["complexes"] == report["random_complexes"] == 8
    assert report["map_pairs"] == 12
    assert report["checks"]["class_invariance"]["pass"] >= 1
    assert report["checks"]["scat_le_tc"].get("fail", 0) == 0


def test_suite_independent_of_threads():
    one = run_suite(seed=5, n_complexes=3, n_pairs=4, threads=1, corpus_dir=None)
    two = run_suite(seed=5, n_complexes=3, n_pairs=4, threads=2, corpus_dir=None)
    assert one == two


def test_planted_violation_is_caught(boundary):
    """A stored class member that is not in the class shows up as a violation."""
    rng = random.Random(0)
    c = constant_map(boundary, boundary, 0)
    t = make_pair_task(rng, boundary, boundary, [boundary])
    bad = replace(t, phi=c, psi=c, phi_bar=identity_map(boundary), psi_bar=c)
    led = Evaluator(Limits()).run_pair(bad)
    assert [v["check"] for v in led.violations if v["check"] == "class_invariance"] == ["class_invariance"]
