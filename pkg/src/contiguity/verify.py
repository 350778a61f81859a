"""Mechanical checks of the contiguity-distance theorems on random and corpus instances.

Every distance carries an interval ``[lower_bound, value]`` (a point when
exact). An inequality ``a <= b`` passes when ``a.value <= b.lower_bound``, is a
violation when ``a.lower_bound > b.value`` and is undecided otherwise.
Undecided checks are counted and reported, never counted as passes.
"""
from __future__ import annotations

import random
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from . import formats
from .collapse import core, is_strongly_collapsible
from .complex import (
    SimplicialComplex,
    SimplicialMap,
    bits,
    compose,
    constant_map,
    identity_map,
    restrict,
    restrict_map,
)
from .constructions import (
    DEFAULT_PRODUCT_CAP,
    SizeGuardError,
    axis_inclusion,
    barycentric_subdivision,
    categorical_product,
    sd_map,
)
from .distance import DistanceResult, contiguity_distance
from .engine import check_certificate, same_contiguity_class
from .generate import random_class_member, random_complex, random_connected_cover, random_map
from .oracle import OracleCapError, exhaustive_distance, exhaustive_same_class


@dataclass(frozen=True)
class Limits:
    tc_facet_cap: int = 25
    sd_facet_cap: int = 240
    exhaustive_cap: int = 20
    node_budget: int = 200_000
    state_cap: int = 200_000
    oracle_facet_cap: int = 8

    def distance_kw(self) -> dict:
        return dict(exhaustive_cap=self.exhaustive_cap, node_budget=self.node_budget, state_cap=self.state_cap)


def _bounds(x: DistanceResult | int) -> tuple[int, int]:
    if isinstance(x, DistanceResult):
        return x.lower_bound, x.value
    return x, x


def _sum_bounds(items: Iterable[DistanceResult | int]) -> tuple[int, int]:
    lo = hi = 0
    for it in items:
        a, b = _bounds(it)
        lo, hi = lo + a, hi + b
    return lo, hi


@dataclass
class Ledger:
    """Per-check tallies plus the offending instances."""

    tally: dict[str, Counter] = field(default_factory=lambda: defaultdict(Counter))
    violations: list[dict] = field(default_factory=list)

    def record(self, name: str, outcome: str, instance: dict | None = None, detail: str = "") -> None:
        self.tally[name][outcome] += 1
        if outcome == "fail":
            self.violations.append({"check": name, "detail": detail, "instance": instance or {}})

    def le(self, name: str, a, b, instance: dict) -> None:
        alo, ahi = a if isinstance(a, tuple) else _bounds(a)
        blo, bhi = b if isinstance(b, tuple) else _bounds(b)
        if ahi <= blo:
            self.record(name, "pass")
        elif alo > bhi:
            self.record(name, "fail", instance, f"[{alo},{ahi}] <= [{blo},{bhi}] violated")
        else:
            self.record(name, "undecided")

    def eq(self, name: str, a, b, instance: dict) -> None:
        alo, ahi = _bounds(a)
        blo, bhi = _bounds(b)
        if alo == ahi == blo == bhi:
            self.record(name, "pass")
        elif alo > bhi or blo > ahi:
            self.record(name, "fail", instance, f"[{alo},{ahi}] != [{blo},{bhi}]")
        else:
            self.record(name, "undecided")

    def holds(self, name: str, cond: bool | None, instance: dict, detail: str = "") -> None:
        if cond is None:
            self.record(name, "undecided")
        else:
            self.record(name, "pass" if cond else "fail", instance, detail)

    def merge(self, other: Ledger) -> None:
        for name, counts in other.tally.items():
            self.tally[name].update(counts)
        self.violations.extend(other.violations)


def describe_complex(K: SimplicialComplex) -> list[list[str]]:
    return [list(K.facet_names(j)) for j in range(K.n_facets)]


def describe_map(f: SimplicialMap) -> dict:
    return {"domain": describe_complex(f.domain), "codomain": describe_complex(f.codomain),
            "assignment": f.as_names()}


# -- tasks ------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexTask:
    K: SimplicialComplex
    oracle: bool = False


@dataclass(frozen=True)
class PairTask:
    phi: SimplicialMap
    psi: SimplicialMap
    phi_bar: SimplicialMap
    psi_bar: SimplicialMap
    cover: tuple[int, ...]
    mu: SimplicialMap
    alpha: SimplicialMap
    alpha_bar: SimplicialMap
    eta: SimplicialMap
    eta_prime: SimplicialMap
    oracle: bool = False


class Evaluator:
    """Pure evaluation of tasks, with per-process caches of complex invariants."""

    def __init__(self, limits: Limits):
        self.limits = limits
        self._scat: dict[SimplicialComplex, DistanceResult] = {}
        self._tc: dict[SimplicialComplex, DistanceResult | None] = {}

    def distance(self, phi, psi, hints=(), upper_target: int | None = None,
                 lower_target: int | None = None) -> DistanceResult:
        return contiguity_distance(phi, psi, hints=hints, upper_target=upper_target, lower_target=lower_target,
                                   **self.limits.distance_kw())

    def scat(self, K: SimplicialComplex) -> DistanceResult:
        if K not in self._scat:
            self._scat[K] = self.distance(identity_map(K), constant_map(K, K, 0))
        return self._scat[K]

    def tc(self, K: SimplicialComplex) -> DistanceResult | None:
        if K not in self._tc:
            if K.n_facets ** 2 > self.limits.tc_facet_cap:
                self._tc[K] = None
            else:
                square = categorical_product(K, K, DEFAULT_PRODUCT_CAP)
                self._tc[K] = self.distance(square.p1, square.p2)
        return self._tc[K]

    def sd_pair(self, phi, psi, witness: tuple[int, ...]):
        """Subdivided maps plus the subdivided witness cover as a search hint."""
        K = phi.domain
        sd_K = barycentric_subdivision(K)
        if sd_K.n_facets > self.limits.sd_facet_cap:
            return None
        simplices = K.simplices()
        names_to_facet = {}
        for j, facet in enumerate(K.facets):
            fm = sum(1 << v for v in facet)
            names_to_facet[j] = fm
        top = [sum(1 << v for v in simplices[max(flag, key=lambda i: len(simplices[i]))]) for flag in sd_K.facets]
        hint = []
        for piece in witness:
            sub = 0
            for i, m in enumerate(top):
                if any(names_to_facet[j] == m for j in bits(piece)):
                    sub |= 1 << i
            hint.append(sub)
        return sd_map(phi), sd_map(psi), hint

    # -- complex-level checks ---------------------------------------------

    def run_complex(self, task: ComplexTask) -> Ledger:
        led = Ledger()
        K = task.K
        inst = {"complex": describe_complex(K)}
        s = self.scat(K)
        led.holds("scat_certified_cover", _certified(s, identity_map(K), constant_map(K, K, 0)), inst)
        collapsible = is_strongly_collapsible(K)
        led.holds("collapsible_implies_scat_zero", (not collapsible) or (s.exact and s.value == 0) or
                  (None if not s.exact and s.lower_bound == 0 else False), inst)
        if s.exact and s.value == 0:
            led.holds("scat_zero_implies_collapsible", collapsible, inst)
        elif s.lower_bound > 0:
            led.holds("scat_zero_implies_collapsible", True, inst)
        else:
            led.record("scat_zero_implies_collapsible", "undecided")

        # core: retraction∘inclusion = id, inclusion∘retraction ~ id, fixed point
        cr = core(K)
        led.holds("core_retraction_section", compose(cr.retraction, cr.inclusion) == identity_map(cr.core), inst)
        led.holds("core_fixed_point", core(cr.core).core == cr.core, inst)
        if K.n_vertices <= 8:
            led.holds("core_inclusion_retraction_class",
                      same_contiguity_class(compose(cr.inclusion, cr.retraction), identity_map(K)).same, inst)

        square = categorical_product(K, K)
        i1 = axis_inclusion(K, 0, 1, square)
        i2 = axis_inclusion(K, 0, 2, square)
        led.eq("scat_equals_axis_distance", s, self.distance(i1, i2), inst)

        sd = self.sd_pair(identity_map(K), constant_map(K, K, 0), s.witness)
        if sd is None:
            led.record("scat_sd_le_scat", "skipped")
        else:
            sd_id, sd_c, hint = sd
            led.holds("sd_identity_is_identity", sd_id == identity_map(sd_id.domain), inst)
            led.le("scat_sd_le_scat", self.distance(sd_id, sd_c, hints=[hint], upper_target=s.lower_bound), s, inst)

        t = self.tc(K)
        if t is None:
            led.record("scat_le_tc", "skipped")
            led.record("tc_le_scat_square", "skipped")
        else:
            led.le("scat_le_tc", s, t, inst)
            sq = self.distance(identity_map(square.complex), constant_map(square.complex, square.complex, 0),
                               lower_target=t.value)
            led.le("tc_le_scat_square", t, sq, inst)

        if task.oracle:
            try:
                ref = exhaustive_distance(identity_map(K), constant_map(K, K, 0),
                                          facet_cap=self.limits.oracle_facet_cap)
            except OracleCapError:
                led.record("oracle_scat", "skipped")
            else:
                led.holds("oracle_scat", s.exact and s.value == ref, inst, f"engine {s.value} oracle {ref}")
        return led

    # -- pair-level checks -------------------------------------------------

    def run_pair(self, task: PairTask) -> Ledger:
        led = Ledger()
        phi, psi = task.phi, task.psi
        K, K2 = phi.domain, phi.codomain
        inst = {"phi": describe_map(phi), "psi": describe_map(psi)}
        sd_val = self.distance(phi, psi)
        led.holds("witness_certified", _certified(sd_val, phi, psi), inst)

        led.eq("class_invariance", self.distance(task.phi_bar, task.psi_bar), sd_val,
               dict(inst, phi_bar=describe_map(task.phi_bar), psi_bar=describe_map(task.psi_bar)))

        pieces = []
        for m in task.cover:
            L = restrict(K, m)
            pieces.append(self.distance(restrict_map(phi, L), restrict_map(psi, L)))
        lo, hi = _sum_bounds(pieces)
        n = len(task.cover) - 1
        led.le("subadditivity", sd_val, (lo + n, hi + n), dict(inst, cover=list(task.cover)))

        sd = self.sd_pair(phi, psi, sd_val.witness)
        if sd is None:
            led.record("subdivision", "skipped")
        else:
            sphi, spsi, hint = sd
            led.le("subdivision", self.distance(sphi, spsi, hints=[hint], upper_target=sd_val.lower_bound),
                   sd_val, inst)

        mu = task.mu
        led.le("precomposition", self.distance(compose(phi, mu), compose(psi, mu)), sd_val,
               dict(inst, mu=describe_map(mu)))

        alpha, alpha_bar = task.alpha, task.alpha_bar
        led.le("postcomposition_contiguous", self.distance(compose(alpha, phi), compose(alpha_bar, psi)), sd_val,
               dict(inst, alpha=describe_map(alpha), alpha_bar=describe_map(alpha_bar)))

        led.le("sd_le_scat_domain", sd_val, self.scat(K), inst)
        t = self.tc(K2)
        if t is None:
            led.record("sd_le_tc_codomain", "skipped")
        else:
            led.le("sd_le_tc_codomain", sd_val, t, inst)

        sm_phi = self.distance(phi, constant_map(K, K2, 0))
        led.le("scat_map_le_scat_domain", sm_phi, self.scat(K), inst)
        led.le("scat_map_le_scat_codomain", sm_phi, self.scat(K2), inst)

        beta = core(K).inclusion
        alpha_r = core(K2).retraction
        led.eq("right_strong_equivalence", self.distance(compose(phi, beta), compose(psi, beta)), sd_val, inst)
        led.eq("left_strong_equivalence", self.distance(compose(alpha_r, phi), compose(alpha_r, psi)), sd_val, inst)
        led.eq("strong_homotopy_invariance",
               self.distance(compose(alpha_r, compose(phi, beta)), compose(alpha_r, compose(psi, beta))), sd_val, inst)

        if is_strongly_collapsible(K) or is_strongly_collapsible(K2):
            led.holds("collapsible_side_zero", None if not sd_val.exact and sd_val.lower_bound == 0
                      else sd_val.value == 0, inst)

        eta, eta_p = task.eta, task.eta_prime
        hyp = same_contiguity_class(compose(phi, eta_p), compose(psi, eta_p), certificate=False).same
        if hyp:
            led.le("composition_bound", self.distance(compose(phi, eta), compose(psi, eta)),
                   self.distance(eta, eta_p), dict(inst, eta=describe_map(eta), eta_prime=describe_map(eta_p)))
        else:
            led.record("composition_bound", "skipped")

        if task.oracle:
            try:
                ref = exhaustive_distance(phi, psi, facet_cap=self.limits.oracle_facet_cap)
            except OracleCapError:
                led.record("oracle_distance", "skipped")
            else:
                led.holds("oracle_distance", sd_val.exact and sd_val.value == ref, inst,
                          f"engine {sd_val.value} (exact={sd_val.exact}) oracle {ref}")
            try:
                same = same_contiguity_class(phi, psi, certificate=False).same
                ref_same = exhaustive_same_class(phi, psi)
            except OracleCapError:
                led.record("oracle_same_class", "skipped")
            else:
                led.holds("oracle_same_class", same == ref_same, inst, f"engine {same} oracle {ref_same}")
        return led


def _certified(result: DistanceResult, phi: SimplicialMap, psi: SimplicialMap) -> bool:
    """Witness covers every facet, has ``value + 1`` pieces and every piece carries a valid chain."""
    K = phi.domain
    cover = 0
    for m in result.witness:
        cover |= m
    if cover != K.full_mask or len(result.witness) != result.value + 1:
        return False
    for m, cert in zip(result.witness, result.certificates):
        L = restrict(K, m)
        if not check_certificate(restrict_map(phi, L), restrict_map(psi, L), cert):
            return False
    return True


# -- generation ----------------------------------------------------------------


def make_pair_task(rng: random.Random, K: SimplicialComplex, K2: SimplicialComplex,
                   pool: list[SimplicialComplex], oracle: bool = False) -> PairTask:
    phi = random_map(rng, K, K2)
    psi = random_map(rng, K, K2) if rng.random() < 0.7 else constant_map(K, K2, rng.randrange(K2.n_vertices))
    if rng.random() < 0.2 and K == K2:
        phi = identity_map(K)
    M = rng.choice(pool)
    N = rng.choice(pool)
    alpha = random_map(rng, K2, N)
    eta_src = rng.choice(pool)
    eta = random_map(rng, eta_src, K)
    eta_p = random_map(rng, eta_src, K) if rng.random() < 0.5 else constant_map(eta_src, K, 0)
    return PairTask(
        phi=phi,
        psi=psi,
        phi_bar=random_class_member(rng, phi),
        psi_bar=random_class_member(rng, psi),
        cover=tuple(random_connected_cover(rng, K)),
        mu=random_map(rng, M, K),
        alpha=alpha,
        alpha_bar=random_class_member(rng, alpha),
        eta=eta,
        eta_prime=eta_p,
        oracle=oracle,
    )


def generate_tasks(seed: int, n_complexes: int, n_pairs: int, oracle_every: int = 0,
                   corpus: Iterable[SimplicialComplex] = (),
                   corpus_maps: Iterable[tuple[SimplicialMap, SimplicialMap]] = ()):
    rng = random.Random(seed)
    corpus = list(corpus)
    randoms = [random_complex(rng) for _ in range(n_complexes)]
    pool = corpus + randoms
    # corpus instances are always cross-checked; random ones every ``oracle_every``-th
    complex_tasks = [ComplexTask(K, oracle=True) for K in corpus]
    complex_tasks += [ComplexTask(K, oracle=bool(oracle_every) and i % oracle_every == 0)
                      for i, K in enumerate(randoms)]
    pair_tasks = []
    for phi, psi in corpus_maps:
        t = make_pair_task(rng, phi.domain, phi.codomain, pool, oracle=True)
        pair_tasks.append(PairTask(phi, psi, random_class_member(rng, phi), random_class_member(rng, psi),
                                   t.cover, t.mu, t.alpha, t.alpha_bar, t.eta, t.eta_prime, True))
    for i in range(n_pairs):
        K = rng.choice(pool)
        K2 = K if rng.random() < 0.3 else rng.choice(pool)
        pair_tasks.append(make_pair_task(rng, K, K2, pool, oracle=bool(oracle_every) and i % oracle_every == 0))
    return complex_tasks, pair_tasks


_WORKER: Evaluator | None = None


def _init_worker(limits: Limits) -> None:
    global _WORKER
    _WORKER = Evaluator(limits)


def _run_task(task) -> Ledger:
    assert _WORKER is not None
    if isinstance(task, ComplexTask):
        return _WORKER.run_complex(task)
    return _WORKER.run_pair(task)


def run_suite(
    seed: int = 0,
    n_complexes: int = 200,
    n_pairs: int = 500,
    threads: int = 1,
    limits: Limits = Limits(),
    oracle_every: int = 0,
    corpus_dir: str | Path | None = None,
) -> dict:
    """Generate and evaluate every task; the report is independent of ``threads``."""
    corpus, corpus_maps = load_corpus(corpus_dir) if corpus_dir else ([], [])
    complex_tasks, pair_tasks = generate_tasks(seed, n_complexes, n_pairs, oracle_every, corpus, corpus_maps)
    tasks = list(complex_tasks) + list(pair_tasks)
    if threads <= 1:
        _init_worker(limits)
        ledgers = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=threads, initializer=_init_worker, initargs=(limits,)) as pool:
            ledgers = list(pool.map(_run_task, tasks, chunksize=4))
    total = Ledger()
    for led in ledgers:
        total.merge(led)
    return {
        "seed": seed,
        "complexes": len(complex_tasks),
        "random_complexes": n_complexes,
        "map_pairs": len(pair_tasks),
        "checks": {name: dict(sorted(c.items())) for name, c in sorted(total.tally.items())},
        "violations": total.violations,
    }


def load_corpus(directory: str | Path):
    """Complexes (``*.cplx``) and same-shape map pairs (``*.map``) from a corpus directory."""
    directory = Path(directory)
    complexes = []
    for path in sorted(directory.glob("*.cplx")):
        K = formats.read_complex(path)
        if K not in complexes and _connected(K):
            complexes.append(K)
    maps = [formats.read_map(p) for p in sorted(directory.glob("*.map"))]
    pairs = []
    for i, f in enumerate(maps):
        for g in maps[i + 1 :]:
            if f.domain == g.domain and f.codomain == g.codomain:
                pairs.append((f, g))
    return complexes, pairs


def _connected(K: SimplicialComplex) -> bool:
    from .complex import is_connected

    return is_connected(K)
