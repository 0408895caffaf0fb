"""The acceptance suite: ten numbered criteria, each a set of named boolean checks.

Every criterion returns a :class:`Criterion` whose ``data`` is deterministic for
a fixed seed (no timings), so two runs serialise to identical bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import spectral
from .config import InvariantViolation
from .corpus import all_graphs_upto, random_corpus, spectral_corpus
from .density import enumerate_quotients, hom_count, inj_count, t, t_inj
from .graph_core import (
    AdmissiblePair,
    Graph,
    RandomSource,
    cartesian_sum,
    complete,
    configuration_model,
    cycle,
    hypercube,
    projective_incidence,
    random_graph,
)
from .graphoning import (
    DigitPoint,
    GaugeFunction,
    abs_diff_batch,
    acyclicity_test,
    block_structure,
    covering_sum,
    gauge_growth_check,
    is_member_batch,
    kernel_sample_batch,
)
from .polynomials.chromatic import (
    chromatic_polynomial,
    chromatic_root_measure,
    chvalue_identity_check,
    root_sum_residual,
    star_sequence,
)
from .polynomials.matching import (
    heilmann_lieb_check,
    matching_profile,
    matching_totals,
    matchpar_check,
    rho_moment_via_walks,
)
from .polynomials.roots import real_roots
from .report import canonical_json

RUNTIME_BUDGET = {1: 120, 2: 120, 3: 60, 4: 300, 5: 120, 6: 180, 7: 60, 8: 300, 9: 120, 10: None}


@dataclass(frozen=True)
class AcceptanceConfig:
    seed: int = 0
    exhaustive_n: int = 7
    random_graphs: int = 200
    pattern_n: int = 5
    spectral_graphs: int = 100
    chromatic_graphs: int = 30
    mc_samples: int = 10_000
    depth: int = 128
    # the acyclicity precondition asks for 8 complete blocks; the cube set has 7 at depth 128
    min_blocks: int = 6

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class Criterion:
    number: int
    title: str
    checks: dict[str, bool]
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def failed_checks(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_dict(self) -> dict:
        return {
            "number": self.number,
            "title": self.title,
            "passed": self.passed,
            "checks": self.checks,
            "data": self.data,
        }


def _stream(cfg: AcceptanceConfig, tag: int) -> RandomSource:
    return RandomSource(np.random.SeedSequence([cfg.seed, tag]))


def _is_kdd_union(G: Graph, d) -> bool:
    if d != int(d) or not G.is_regular(int(d)):
        return False
    return all(len(c) == 2 * d for c in G.components) and G.is_bipartite()


def _corpus(cfg: AcceptanceConfig) -> list[Graph]:
    return all_graphs_upto(cfg.exhaustive_n) + random_corpus(_stream(cfg, 1), cfg.random_graphs)


def _spectral_pairs(cfg: AcceptanceConfig) -> list[AdmissiblePair]:
    return spectral_corpus(_stream(cfg, 2), cfg.spectral_graphs)


# -- 1 -------------------------------------------------------------------------
def criterion_1(cfg: AcceptanceConfig) -> Criterion:
    corpus = _corpus(cfg)
    patterns = all_graphs_upto(cfg.pattern_n)
    mismatches, above_one, evaluations, ones = [], 0, 0, 0
    for gi, G in enumerate(corpus):
        base = max(1, G.max_degree)
        for d in (base, base + 1):
            pr = AdmissiblePair(G, d)
            regular = G.is_regular(d)
            kdd = _is_kdd_union(G, d)
            for fi, F in enumerate(patterns):
                val = t(F, pr).exact
                evaluations += 1
                predicted = F.num_edges == 0 or (F.is_forest() and regular) or (F.is_bipartite() and kdd)
                ones += val == 1
                above_one += val > 1
                if (val == 1) != predicted and len(mismatches) < 10:
                    mismatches.append({"graph": G.to_edgelist(), "d": d, "pattern": fi, "t": val})
    quotient_fail, quotient_checked = 0, 0
    quotients = {fi: enumerate_quotients(F) for fi, F in enumerate(patterns)}
    targets = corpus[:: max(1, len(corpus) // 60)]
    for G in targets:
        for fi, F in enumerate(patterns):
            rhs = sum(q.multiplicity * inj_count(q.graph, G) for q in quotients[fi])
            quotient_checked += 1
            quotient_fail += hom_count(F, G) != rhs
    return Criterion(
        1,
        "exact density identities",
        {
            "t_equals_one_iff_characterised": not mismatches,
            "t_at_most_one": above_one == 0,
            "quotient_identity": quotient_fail == 0,
        },
        {
            "graphs": len(corpus),
            "patterns": len(patterns),
            "evaluations": evaluations,
            "t_equal_one": ones,
            "mismatches": mismatches,
            "quotient_pairs": quotient_checked,
            "quotient_failures": quotient_fail,
        },
    )


# -- 2 -------------------------------------------------------------------------
def criterion_2(cfg: AcceptanceConfig) -> Criterion:
    pairs = _spectral_pairs(cfg)
    worst = 0.0
    invariants_ok = True
    edge_ok = True
    for pr in pairs:
        spec = spectral.adjacency_spectrum(pr.graph, method="inrepo")
        try:
            spectral.check_spectrum(pr, spec)
        except InvariantViolation:
            invariants_ok = False
        sig = spectral.sigma(pr, spec)
        for k in range(1, 9):
            exact = float(spectral.moment_identity_value(pr, k))
            worst = max(worst, abs(spectral.moment(sig, k) - exact))
        n = pr.graph.n
        for r in sorted({1, n // 4 or 1, n // 2 or 1, n - 1 or 1}):
            edge_ok &= spectral.top_lower_edge_check(pr, r, spec)
    cube_err = 0.0
    for d in range(1, 9):
        vals = spectral.adjacency_spectrum(hypercube(d), method="inrepo").eigenvalues
        cube_err = max(cube_err, max(abs(a - b) for a, b in zip(vals, spectral.hypercube_spectrum(d))))
    rng = _stream(cfg, 3)
    kron_err = 0.0
    for _ in range(10):
        G = random_graph(int(rng.gen.integers(2, 8)), 0.5, rng)
        H = random_graph(int(rng.gen.integers(2, 8)), 0.5, rng)
        a = spectral.adjacency_spectrum(G, method="inrepo").eigenvalues
        b = spectral.adjacency_spectrum(H, method="inrepo").eigenvalues
        want = sorted((x + y for x in a for y in b), reverse=True)
        got = spectral.adjacency_spectrum(cartesian_sum(G, H), method="inrepo").eigenvalues
        kron_err = max(kron_err, max(abs(x - y) for x, y in zip(got, want)))
    return Criterion(
        2,
        "spectral moment identity",
        {
            "moments_within_1e-9": worst <= 1e-9,
            "hypercube_closed_form_within_1e-8": cube_err <= 1e-8,
            "cartesian_sumset_within_1e-8": kron_err <= 1e-8,
            "spectrum_invariants": invariants_ok,
            "top_r_lower_edge": edge_ok,
        },
        {
            "pairs": len(pairs),
            "max_moment_error": worst,
            "max_hypercube_error": cube_err,
            "max_sumset_error": kron_err,
        },
    )


# -- 3 -------------------------------------------------------------------------
def criterion_3(cfg: AcceptanceConfig) -> Criterion:
    pairs = _spectral_pairs(cfg)
    bound_ok, failures = True, []
    for pr in pairs:
        spec = spectral.adjacency_spectrum(pr.graph)
        for eps in (0.25, 0.5):
            if not spectral.dirac_concentration_check(pr, eps, spec):
                bound_ok = False
                failures.append({"graph": pr.name, "eps": eps})
    outside = {}
    for d in range(6, 13):
        pr = AdmissiblePair(hypercube(d), d, f"Q{d}")
        spec = spectral.adjacency_spectrum(pr.graph)
        for eps in (0.25, 0.5):
            bound_ok &= spectral.dirac_concentration_check(pr, eps, spec)
        outside[d] = 1.0 - spectral.dirac_mass(pr, 0.5, spec)
    seq = [outside[d] for d in range(6, 13)]
    return Criterion(
        3,
        "Dirac concentration",
        {
            "chebyshev_bound_all_pairs": bound_ok,
            "hypercube_outside_mass_nonincreasing": all(b <= a + 1e-12 for a, b in zip(seq, seq[1:])),
        },
        {"bound_failures": failures, "hypercube_outside_mass": outside},
    )


# -- 4 -------------------------------------------------------------------------
def criterion_4(cfg: AcceptanceConfig) -> Criterion:
    rows, within, exact4 = {}, True, True
    for d in (8, 10, 12):
        pr = AdmissiblePair(hypercube(d), d, f"Q{d}")
        ms = {2 * k: rho_moment_via_walks(pr, 2 * k) for k in (1, 2, 3)}
        for k in (1, 2, 3):
            within &= abs(ms[2 * k] - spectral.catalan(k)) <= Fraction(3 * k * k, d)
        exact4 &= ms[4] == 2 - Fraction(1, d)
        rows[d] = ms
    return Criterion(
        4,
        "semicircle moments via tree-like walks",
        {"catalan_within_3k2_over_d": within, "fourth_moment_exact": exact4},
        {"moments": rows},
    )


# -- 5 -------------------------------------------------------------------------
def criterion_5(cfg: AcceptanceConfig) -> Criterion:
    corpus = _corpus(cfg)
    hl_ok, ident_ok, worst, checked, pm_checked = True, True, 0.0, 0, 0
    bad = []
    for G in corpus:
        pr = AdmissiblePair(G, max(2, G.max_degree))
        try:
            roots = real_roots(matching_profile(G).mu).roots
            hl = heilmann_lieb_check(pr, roots)
            res = matchpar_check(pr)
        except InvariantViolation as exc:
            hl_ok = ident_ok = False
            if len(bad) < 10:
                bad.append({"graph": G.to_edgelist(), "error": str(exc)})
            continue
        hl_ok &= hl
        worst = max(worst, res.residual)
        checked += 1
        pm_checked += res.lhs_Pm is not None
    ident_ok &= worst <= 1e-8
    fixed = {
        "M_K3": matching_totals(complete(3))[0],
        "M_C4": matching_totals(cycle(4))[0],
        "Pm_C4": matching_totals(cycle(4))[1],
    }
    return Criterion(
        5,
        "real matching roots and matching-count identities",
        {
            "roots_real_and_bounded": hl_ok,
            "log_identities_within_1e-8": ident_ok,
            "fixed_counts": fixed == {"M_K3": 4, "M_C4": 7, "Pm_C4": 2},
        },
        {"graphs": checked, "perfect_matching_identities": pm_checked, "max_residual": worst, "fixed": fixed, "errors": bad},
    )


# -- 6 -------------------------------------------------------------------------
def _chromatic_graphs(cfg: AcceptanceConfig) -> list[Graph]:
    rng = _stream(cfg, 6)
    out = []
    while len(out) < cfg.chromatic_graphs:
        G = random_graph(int(rng.gen.integers(5, 11)), float(rng.gen.uniform(0.2, 0.6)), rng)
        if 0 < G.num_edges <= 30:
            out.append(G)
    return out


def criterion_6(cfg: AcceptanceConfig) -> Criterion:
    xi = 10
    worst_id, worst_sum = 0.0, 0.0
    rng = _stream(cfg, 7)
    for G in _chromatic_graphs(cfg):
        pr = AdmissiblePair(G, max(1, G.max_degree))
        poly = chromatic_polynomial(G)
        worst_id = max(worst_id, chvalue_identity_check(pr, xi, poly, rng))
        nu = chromatic_root_measure(pr, poly, rng)
        worst_sum = max(worst_sum, root_sum_residual(G, [z * float(pr.d) for z in nu.atoms]))
    stars = star_sequence([4, 8, 16, 32, 64], xi)
    last = stars[-1]
    return Criterion(
        6,
        "chromatic value identity",
        {
            "identity_within_1e-8": worst_id <= 1e-8,
            "root_sum_equals_edges": worst_sum <= 1e-8,
            "star_ratio_residual_at_64": last["ratio_residual"] <= 2 / last["d"],
        },
        {"max_identity_residual": worst_id, "max_root_sum_residual": worst_sum, "stars": stars},
    )


# -- 7 -------------------------------------------------------------------------
def criterion_7(cfg: AcceptanceConfig) -> Criterion:
    multiset_ok, moment_ok, gap_ok = True, True, True
    rows = {}
    for d in (6, 8):
        pr = AdmissiblePair(hypercube(d), d, f"Q{d}")
        m = spectral.sigma_sqrt(pr)
        scaled = [x * math.sqrt(d) for x in m.atoms]
        ints = sorted(round(x) for x in scaled)
        want = sorted(d - 2 * i for i in range(d + 1) for _ in range(math.comb(d, i)))
        err = max(abs(x - round(x)) for x in scaled)
        multiset_ok &= ints == want and err <= 1e-8
        m4 = spectral.moment(m, 4)
        moment_ok &= abs(m4 - (3 - 2 / d)) <= 1e-9
        gap = abs(m4 - spectral.semicircle_moment(4))
        gap_ok &= gap >= 0.9
        rows[d] = {"fourth_moment": m4, "gap_to_semicircle": gap, "rounding_error": err}
    return Criterion(
        7,
        "rescaled hypercube spectra",
        {
            "binomial_multiset": multiset_ok,
            "fourth_moment_3_minus_2_over_d": moment_ok,
            "gap_to_semicircle_at_least_0.9": gap_ok,
        },
        {"hypercubes": rows},
    )


# -- 8 -------------------------------------------------------------------------
def _icbrt(n: int) -> int:
    r = round(n ** (1 / 3))
    while r**3 > n:
        r -= 1
    while (r + 1) ** 3 <= n:
        r += 1
    return r


def criterion_8(cfg: AcceptanceConfig) -> Criterion:
    proj_rows, proj_ok = {}, True
    for q in (2, 3, 5, 7, 11):
        pr = projective_incidence(q, 2)
        vals = {k: t_inj(cycle(k), pr).exact for k in range(3, 7)}
        proj_ok &= all(v < Fraction(1, 2 * q) for v in vals.values())
        proj_rows[q] = vals
    rng = _stream(cfg, 8)
    cm_rows = {}
    seq = []
    for j in range(8, 13):
        n = 2**j
        d = _icbrt(n)
        _, G = configuration_model(n, d, rng)
        val = t_inj(cycle(3), AdmissiblePair(G, d)).exact
        cm_rows[j] = {"n": n, "d": d, "t_inj_C3": val, "edges": G.num_edges}
        seq.append(val)
    return Criterion(
        8,
        "essential girth",
        {
            "projective_below_1_over_2q": proj_ok,
            "configuration_triangles_decrease": all(b < a for a, b in zip(seq, seq[1:])),
        },
        {"projective": proj_rows, "configuration": cm_rows},
    )


# -- 9 -------------------------------------------------------------------------
def criterion_9(cfg: AcceptanceConfig) -> Criterion:
    cube = block_structure(GaugeFunction.cube())
    proj = block_structure(GaugeFunction.proj())
    cover = {
        s.kind: {n: covering_sum(s, s.gauge, n) for n in range(1, 13)} for s in (cube, proj)
    }
    cover_ok = all(v == 1 for rows in cover.values() for v in rows.values())
    rng = _stream(cfg, 9)
    acyc = {}
    acyc_ok = True
    for s in (cube, proj):
        for k in (2, 3):
            res = acyclicity_test(s, k, cfg.mc_samples, cfg.depth, rng, cfg.min_blocks)
            acyc[f"{s.kind}_k{k}"] = res.to_dict()
            acyc_ok &= res.hit_fraction < 0.01
    kernel_ok, kernel_draws = True, 0
    for s in (cube, proj):
        radices = s.radices(cfg.depth)
        starts = [Fraction(0), Fraction(1, 2), Fraction(1, 3), Fraction(5, 7)]
        for x in starts:
            X = np.repeat(DigitPoint.from_fraction(x, radices).as_array(), cfg.mc_samples // 4, axis=0)
            Y = kernel_sample_batch(X, s, rng)
            kernel_ok &= bool(is_member_batch(abs_diff_batch(X, Y, radices), s).all())
            kernel_draws += len(X)
    cube_ratios = gauge_growth_check(GaugeFunction.cube(), [AdmissiblePair(hypercube(d), d) for d in range(4, 13)])
    proj_ratios = gauge_growth_check(GaugeFunction.proj(), [projective_incidence(q) for q in (2, 3, 5, 7, 11)])
    return Criterion(
        9,
        "Cantor-set graphonings",
        {
            "covering_sum_exactly_one": cover_ok,
            "acyclicity_hits_below_0.01": acyc_ok,
            "kernel_samples_members": kernel_ok,
            "cube_growth_ratio_one": all(r == 1.0 for r in cube_ratios),
            "proj_growth_within_0.15_at_q11": abs(proj_ratios[-1] - 1) <= 0.15,
        },
        {
            "covering": cover,
            "acyclicity": acyc,
            "kernel_draws": kernel_draws,
            "cube_growth": cube_ratios,
            "proj_growth": proj_ratios,
        },
    )


# -- 10 ------------------------------------------------------------------------
def criterion_10(cfg: AcceptanceConfig, first: dict[int, str] | None = None) -> Criterion:
    """Re-run the seeded criteria and compare serialised reports byte for byte."""
    first = first or {}
    same = {}
    for n in (6, 8, 9):
        a = first.get(n) or canonical_json(CRITERIA[n](cfg))
        b = canonical_json(CRITERIA[n](cfg))
        same[n] = a == b
    return Criterion(
        10,
        "determinism",
        {"seeded_reports_identical": all(same.values())},
        {"compared": sorted(same)},
    )


CRITERIA: dict[int, Callable[[AcceptanceConfig], Criterion]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_suite(cfg: AcceptanceConfig, only=None, on_done=None) -> list[Criterion]:
    """Run the selected criteria in order; ``on_done(criterion, seconds)`` sees each result."""
    import time

    wanted = sorted(only) if only else list(range(1, 11))
    out, serialised = [], {}
    for n in wanted:
        t0 = time.perf_counter()
        if n == 10:
            res = criterion_10(cfg, serialised)
        else:
            res = CRITERIA[n](cfg)
            serialised[n] = canonical_json(res)
        out.append(res)
        if on_done:
            on_done(res, time.perf_counter() - t0)
    return out
