"""Acceptance suite: runs ``graphlim verify`` twice with the same seed and
checks every criterion against its pinned tolerances.

One PASS/FAIL line per criterion is printed in the terminal summary.
"""

import json
import math
import re
import subprocess
import sys
from fractions import Fraction

import pytest

from graphlim.acceptance import RUNTIME_BUDGET
from graphlim.spectral import catalan

SEED = 0
RESULTS: dict[int, tuple[bool, str]] = {}
_LINE = re.compile(r"criterion (\d+): (PASS|FAIL) \(([\d.]+)s")


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    """Two concurrent seeded runs; returns their reports, raw bytes and timings."""
    procs = []
    for tag in ("a", "b"):
        out = tmp_path_factory.mktemp(f"verify_{tag}")
        cmd = [sys.executable, "-m", "graphlim", "verify", "--suite", "acceptance", "--seed", str(SEED), "--out", str(out)]
        procs.append((out, subprocess.Popen(cmd, stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)))
    done = []
    for out, p in procs:
        _, err = p.communicate(timeout=1800)
        raw = (out / "acceptance.json").read_bytes()
        times = {int(m[1]): float(m[3]) for m in _LINE.finditer(err)}
        done.append({"code": p.returncode, "raw": raw, "report": json.loads(raw), "times": times, "stderr": err})
    return done


def _criterion(runs, n):
    return next(c for c in runs[0]["report"]["criteria"] if c["number"] == n)


def _record(n, ok, why=""):
    RESULTS[n] = (ok, why)


def _check(runs, n, conditions: dict[str, bool]):
    budget = RUNTIME_BUDGET.get(n)
    secs = runs[0]["times"].get(n)
    if budget is not None:
        conditions[f"runtime_under_{budget}s"] = secs is not None and secs < budget
    failed = [k for k, ok in conditions.items() if not ok]
    _record(n, not failed, ", ".join(failed))
    assert not failed, f"criterion {n} failed: {failed}"


def test_criterion_1_exact_densities(runs):
    d = _criterion(runs, 1)["data"]
    _check(runs, 1, {
        "t_equals_one_iff_characterised": d["mismatches"] == [] and d["t_equal_one"] > 0,
        "corpus_has_exhaustive_and_200_random": d["graphs"] >= 1044 + 200,
        "quotient_identity_exact": d["quotient_failures"] == 0 and d["quotient_pairs"] > 0,
    })


def test_criterion_2_spectral_moments(runs):
    d = _criterion(runs, 2)["data"]
    _check(runs, 2, {
        "100_graphs": d["pairs"] == 100,
        "moments_within_1e-9": d["max_moment_error"] <= 1e-9,
        "hypercube_closed_form_within_1e-8": d["max_hypercube_error"] <= 1e-8,
    })


def test_criterion_3_dirac_concentration(runs):
    d = _criterion(runs, 3)["data"]
    mass = [d["hypercube_outside_mass"][str(k)] for k in range(6, 13)]
    _check(runs, 3, {
        "chebyshev_bound_every_pair": d["bound_failures"] == [],
        "hypercube_outside_mass_nonincreasing": all(b <= a for a, b in zip(mass, mass[1:])),
    })


def test_criterion_4_semicircle_moments(runs):
    m = _criterion(runs, 4)["data"]["moments"]
    conds = {}
    for d in (8, 10, 12):
        row = {int(k): Fraction(v) for k, v in m[str(d)].items()}
        conds[f"catalan_d{d}"] = all(abs(row[2 * k] - catalan(k)) <= Fraction(3 * k * k, d) for k in (1, 2, 3))
        conds[f"m4_exact_d{d}"] = row[4] == 2 - Fraction(1, d)
    _check(runs, 4, conds)


def test_criterion_5_heilmann_lieb_and_matchings(runs):
    d = _criterion(runs, 5)["data"]
    _check(runs, 5, {
        "roots_real_and_bounded": d["errors"] == [],
        "log_identities_within_1e-8": d["max_residual"] <= 1e-8,
        "fixed_counts": d["fixed"] == {"M_K3": 4, "M_C4": 7, "Pm_C4": 2},
    })


def test_criterion_6_chromatic_identity(runs):
    d = _criterion(runs, 6)["data"]
    star64 = next(r for r in d["stars"] if r["m"] == 64)
    _check(runs, 6, {
        "identity_within_1e-8": d["max_identity_residual"] <= 1e-8,
        "root_sum_within_1e-8": d["max_root_sum_residual"] <= 1e-8,
        "star_residual_at_most_2_over_d": star64["ratio_residual"] <= 2 / 64,
    })


def test_criterion_7_rescaled_spectra(runs):
    c = _criterion(runs, 7)
    h = c["data"]["hypercubes"]
    _check(runs, 7, {
        "binomial_multiset": c["checks"]["binomial_multiset"],
        "fourth_moment_3_minus_2_over_d": all(abs(h[str(d)]["fourth_moment"] - (3 - 2 / d)) <= 1e-12 for d in (6, 8)),
        "gap_to_semicircle_at_least_0.9": all(h[str(d)]["fourth_moment"] - 2 >= 0.9 for d in (6, 8)),
    })


def test_criterion_8_essential_girth(runs):
    d = _criterion(runs, 8)["data"]
    proj_ok = all(
        Fraction(v) < Fraction(1, 2 * int(q)) for q, row in d["projective"].items() for v in row.values()
    )
    tri = [Fraction(d["configuration"][str(j)]["t_inj_C3"]) for j in range(8, 13)]
    degs = [d["configuration"][str(j)]["d"] for j in range(8, 13)]
    _check(runs, 8, {
        "projective_below_1_over_2q": proj_ok,
        "configuration_degrees_floor_cube_root": degs == [math.floor((2**j) ** (1 / 3) + 1e-9) for j in range(8, 13)],
        "configuration_triangles_decrease": all(b < a for a, b in zip(tri, tri[1:])),
    })


def test_criterion_9_graphoning(runs):
    c = _criterion(runs, 9)
    d = c["data"]
    acyc = d["acyclicity"]
    _check(runs, 9, {
        "covering_sum_exactly_one": all(v == "1/1" for s in ("cube", "proj") for v in d["covering"][s].values())
        and all(str(n) in d["covering"]["cube"] for n in range(1, 13)),
        "acyclicity_below_0.01": all(acyc[f"{s}_k{k}"]["hit_fraction"] < 0.01 for s in ("cube", "proj") for k in (2, 3))
        and all(a["trials"] == 10_000 and a["depth"] == 128 for a in acyc.values()),
        "kernel_samples_members": c["checks"]["kernel_samples_members"],
        "cube_growth_identically_one": all(r == 1.0 for r in d["cube_growth"]),
        "proj_growth_within_0.15_at_q11": abs(d["proj_growth"][-1] - 1) <= 0.15,
    })


def test_criterion_10_determinism(runs):
    a, b = runs
    _check(runs, 10, {
        "reports_byte_identical": a["raw"] == b["raw"],
        "in_process_rerun_identical": _criterion(runs, 10)["passed"],
        "exit_status_consistent": a["code"] == b["code"] == (0 if a["report"]["passed"] else 1),
    })
