"""Acceptance criteria, one test each, at full stated scale.

Each test logs a ``PASS``/``FAIL`` line (collected into the terminal summary)
before asserting. Run with ``pytest tests/test_acceptance.py -v -s``.
"""
import math
import os
import subprocess
import sys
from pathlib import Path

import mpmath
import pytest

from hcaplab import (
    HalfDisk,
    Hull,
    Rect,
    Slit,
    VSlit,
    bound_constants,
    bound_constants_mp,
    coverage_check,
    cover_sums,
    greedy_cover,
    hcap_wos,
    hcap_zipper,
    hsiz_quadtree,
    strip_exit_prob,
    strip_exit_prob_mc,
)
from hcaplab.corpus import random_corpus
from hcaplab.verify import (
    LOWER,
    UPPER,
    check_capacity_inequality,
    check_scaling,
    check_slit_saturation,
    get_budget,
    rect_chain,
    verify_many,
)

pytestmark = pytest.mark.slow

N = 1_000_000
CORPUS_SEED = 7
DATA = Path(__file__).resolve().parents[1] / "data" / "hulls"


def report(log, number: int, title: str, ok: bool, detail: str) -> None:
    log(f"[{'PASS' if ok else 'FAIL'}] {number:2d} {title}: {detail}")


@pytest.fixture(scope="module")
def corpus():
    return random_corpus(100, CORPUS_SEED)


@pytest.fixture(scope="module")
def corpus_reports(corpus):
    return verify_many(corpus, "default", CORPUS_SEED)


def test_01_slit_capacity(acceptance_log):
    w = hcap_wos(Hull.of(VSlit(0.0, 1.0)), N, seed=1)
    z = hcap_zipper(Slit(0.0, ((0.0, 1.0),)))
    ok_w = abs(w.value - 0.5) <= 0.01 * 0.5 + 3 * w.std_error
    ok_z = abs(z.value - 0.5) <= 0.01 * 0.5 + 3 * z.std_error
    report(acceptance_log, 1, "slit capacity", ok_w and ok_z,
           f"wos={w.value:.5f}+-{w.std_error:.5f} zipper={z.value:.6f} target 0.5")
    assert ok_w and ok_z


def test_02_halfdisk_capacity(acceptance_log):
    w = hcap_wos(Hull.of(HalfDisk(0.0, math.sqrt(2.0))), N, seed=2)
    ok = abs(w.value - 2.0) <= 0.01 * 2.0 + 3 * w.std_error
    report(acceptance_log, 2, "half-disk capacity", ok, f"wos={w.value:.5f}+-{w.std_error:.5f} target 2")
    assert ok


def test_03_rect_hsiz(acceptance_log):
    tol = 1e-3
    q = hsiz_quadtree(Hull.of(Rect(-2.0, 2.0, 1.0)), tol)
    target = math.pi + 8
    ok = abs(q.value - target) <= tol and q.error_bound <= tol
    report(acceptance_log, 3, "rectangle hsiz", ok, f"{q.value:.6f}+-{q.error_bound:.1e} target {target:.6f}")
    assert ok


def test_04_constant_chain(acceptance_log):
    ch = rect_chain(N, seed=4)
    r1, r2 = ch.hcap_r1, ch.hcap_r2
    report(acceptance_log, 4, "constant chain", ch.passed,
           f"hcap R(i,1)={r1.value:.4f}+-{r1.std_error:.4f} (<2), hcap R(i,2)={r2.value:.4f}+-{r2.std_error:.4f} "
           "(in (1, 3.5))")
    assert ch.passed


def test_05_rho_constants(acceptance_log):
    rho, ratio = bound_constants_mp("8/5", dps=60)
    with mpmath.workdps(60):
        exceeds = ratio > mpmath.mpf(1) / 66
    gaps = [abs(b.exit_prob - math.sqrt(2) * b.rho) for b in map(bound_constants, (0.25, 0.5, 1.0, 1.6, 2.0, 5.0))]
    ok = bool(exceeds) and max(gaps) < 1e-12
    report(acceptance_log, 5, "rho constants", ok,
           f"rho^2/(pi+64/5)={mpmath.nstr(ratio, 20)} vs 1/66={1 / 66:.17f}; max|exit-sqrt2 rho|={max(gaps):.1e}")
    assert ok


def test_06_strip_exit(acceptance_log):
    rows = []
    ok = True
    for k, c in enumerate((0.5, 1.0, 2.0)):
        e = strip_exit_prob_mc(c, N, seed=60 + k)
        p = strip_exit_prob(c)
        good = abs(e.value - p) <= 3 * e.std_error
        ok &= good
        rows.append(f"c={c}: {e.value:.5f} vs {p:.5f} ({(e.value - p) / e.std_error:+.2f} sigma)")
    report(acceptance_log, 6, "strip exit probability", ok, "; ".join(rows))
    assert ok


def test_07_theorem_sandwich(acceptance_log, corpus_reports):
    fails = [r for r in corpus_reports if r.verdict == "fail"]
    inconclusive = sum(r.verdict == "inconclusive" for r in corpus_reports)
    lo = min(r.ratio_lo for r in corpus_reports)
    hi = max(r.ratio_hi for r in corpus_reports)
    ok = not fails
    report(acceptance_log, 7, "hcap/hsiz sandwich", ok,
           f"{len(corpus_reports)} hulls, {len(fails)} violations, {inconclusive} inconclusive, ratio range "
           f"[{lo:.4f}, {hi:.4f}] within ({LOWER:.4f}, {UPPER:.4f}]")
    assert ok, [r.hull_id for r in fails]


def test_08_covering(acceptance_log, corpus, corpus_reports):
    bad_structure = []
    bad_sandwich = []
    for k, ((hid, h), rep) in enumerate(zip(corpus, corpus_reports)):
        for c in (1.0, 1.6):
            cv = greedy_cover(h, c)
            cc = coverage_check(h, cv, 100_000, seed=800 + k)
            if not cc.passed:
                bad_structure.append((hid, c))
            if c == 1.0:
                s = cover_sums(cv)
                q = rep.hsiz
                if not (s.hsiz_lo <= q.value + q.error_bound and q.value - q.error_bound <= s.hsiz_hi):
                    bad_sandwich.append(hid)
    ok = not bad_structure and not bad_sandwich
    report(acceptance_log, 8, "covering", ok,
           f"{2 * len(corpus)} covers, {len(bad_structure)} structure/coverage failures, "
           f"{len(bad_sandwich)} c=1 sandwich failures")
    assert ok, (bad_structure, bad_sandwich)


def test_09_properties(acceptance_log, corpus, corpus_reports):
    b = get_budget("default")
    lower_fail = [r.hull_id for (_, h), r in zip(corpus, corpus_reports)
                  if r.hcap.interval()[1] < 0.5 * h.sup_im ** 2]
    sat = check_slit_saturation(b, seed=900)
    ineq = check_capacity_inequality(b, seed=900)
    scal = check_scaling(corpus[:20], b, seed=900)
    ok = not lower_fail and sat.passed and ineq.passed and ineq.n_cases == 50 and scal.passed
    report(acceptance_log, 9, "property suite", ok,
           f"lower bound {len(corpus) - len(lower_fail)}/{len(corpus)}, saturation {sat.n_cases - len(sat.failures)}"
           f"/{sat.n_cases}, inequality {ineq.n_cases - len(ineq.failures)}/{ineq.n_cases}, "
           f"scaling {scal.n_cases - len(scal.failures)}/{scal.n_cases}")
    assert ok, (lower_fail, sat.failures, ineq.failures, scal.failures)


def _cli(args: list[str], workers: str, out: Path) -> bytes:
    env = dict(os.environ, HCAPLAB_WORKERS=workers)
    subprocess.run([sys.executable, "-m", "hcaplab", *args, "-o", str(out)], check=True, env=env,
                   stdout=subprocess.DEVNULL)
    return out.read_bytes()


def test_10_determinism(acceptance_log, tmp_path):
    runs = {
        "hcap wos": ["hcap", "--method", "wos", "--n", "200000", "--seed", "3", str(DATA / "mixed.json")],
        "hcap integral": ["hcap", "--method", "integral", "--n", "50000", "--seed", "3", str(DATA / "comb.json")],
        "hsiz mc": ["hsiz", "--method", "mc", "--n", "300000", "--seed", "3", str(DATA / "halfdisk.json")],
        "verify": ["verify", "--budget", "quick", "--random", "4", "--seed", "3", "--format", "json"],
    }
    mismatched = []
    for name, args in runs.items():
        outs = {(w, rep): _cli(args, w, tmp_path / f"{name.replace(' ', '_')}-{w}-{rep}.out")
                for w in ("1", "2", "4") for rep in (0, 1)}
        if len(set(outs.values())) != 1:
            mismatched.append(name)
    ok = not mismatched
    report(acceptance_log, 10, "determinism", ok,
           f"{len(runs)} commands x workers {{1,2,4}} x 2 repeats byte-identical"
           + (f"; mismatched: {mismatched}" if mismatched else ""))
    assert ok
