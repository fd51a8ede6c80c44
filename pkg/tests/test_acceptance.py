"""Acceptance criteria, one test each, at the stated tolerances.

Every test reports a PASS/FAIL line (collected into the terminal summary)
before asserting.
"""

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

import pwlcl.cycle as cycle_mod
import pwlcl.report.record as record_mod
from reference import REGRESSION_Y0_STAR, TIGHT_SCAN
from pwlcl.audit import compare_methods, gamma_points, gamma_sign_check, uniqueness_check
from pwlcl.cli import main
from pwlcl.cycle import analyze_cycle, delta_prime_closed_form, displacement, find_limit_cycle
from pwlcl.errors import DomainError
from pwlcl.flow import Direction, Half, return_ordinates
from pwlcl.geometry import c_eval, crossing_audit, f_expanded, f_quotient, sign_a_tl
from pwlcl.halfmap import MAPS, trace_cubic
from pwlcl.lienard import LienardParams, PwlSystem, Verdict, canonicalize, classify_params, classify_raw
from pwlcl.sampling import EXAMPLE_PARAMS, MIRRORED_EXAMPLE_PARAMS, random_admissible

EXAMPLE_TOML = """
[params]
tL = 0.4
tR = -0.3
dL = 3.0
dR = 0.1
a = -0.2
"""


def test_criterion_1_example_reproduction(criterion, tmp_path):
    cfg = tmp_path / "example.toml"
    cfg.write_text(EXAMPLE_TOML)
    t0 = time.perf_counter()
    code = main(["analyze", "--config", str(cfg), "--out", str(tmp_path / "out"), "--method", "both"])
    elapsed = time.perf_counter() - t0
    rec = json.loads((tmp_path / "out" / "record.json").read_text())
    checks = {"exit 0": code == 0, "runtime < 5 s": elapsed < 5.0}
    p = EXAMPLE_PARAMS
    for m, search in rec["searches"].items():
        c = search["cycle"]
        checks[f"{m}: one bracket"] = len(search["brackets"]) == 1
        checks[f"{m}: Attracting"] = c is not None and c["stability"] == "Attracting"
        checks[f"{m}: delta' < 0"] = c is not None and c["delta_prime"] < 0
        checks[f"{m}: sign rule"] = c is not None and math.copysign(1, c["delta_prime"]) == sign_a_tl(p) == -1
        checks[f"{m}: regression"] = c is not None and abs(c["y0_star"] - REGRESSION_Y0_STAR) <= 1e-9
    tight = find_limit_cycle(p, TIGHT_SCAN, "direct")
    checks["direct oracle at 1e-12 reproduces the committed y0*"] = abs(tight.y0_star - REGRESSION_Y0_STAR) <= 1e-13
    bad = [k for k, v in checks.items() if not v]
    y0 = rec["cycle"]["y0_star"] if rec["cycle"] else math.nan
    ok = criterion(not bad, f"y0*={y0:.12g} (regression {REGRESSION_Y0_STAR:.12g}), {elapsed:.2f} s, failed: {bad or 'none'}")
    assert ok


def test_criterion_2_cross_method_equivalence(criterion):
    t0 = time.perf_counter()
    p = EXAMPLE_PARAMS
    # dense near the cycle, then geometric out to the domain cap
    grid = sorted(set(np.linspace(0.0, 5.0, 41)[1:].tolist() + np.geomspace(5.0, 1e6, 21)[1:].tolist()))
    rows = compare_methods(p, 0, grid=grid, cap=1e6)
    per_map = {h.value: sum(r["half"] == h.value for r in rows) for h, _ in MAPS}
    worst = max(r["err"] / r["tol"] for r in rows)
    example_ok = all(r["ok"] for r in rows) and min(per_map.values()) >= 50

    rng = np.random.default_rng(2)
    draws, tries, checked, failures = 0, 0, 0, []
    while draws < 100 and tries < 1000:
        tries += 1
        q = random_admissible(rng, "mixed" if tries % 2 else "focus")
        res = compare_methods(q, 6)
        if not res:
            continue
        draws += 1
        checked += len(res)
        failures += [(q, r) for r in res if not r["ok"]]
        worst = max([worst] + [r["err"] / r["tol"] for r in res if "err" in r])
    elapsed = time.perf_counter() - t0
    ok = example_ok and draws >= 100 and not failures and elapsed < 60.0
    criterion(ok, f"example {per_map} points, {draws} random draws / {checked} comparisons, "
                  f"worst err/tol {worst:.3g}, {len(failures)} failures, {elapsed:.1f} s")
    assert ok, failures[:3]


def _roots():
    out = [EXAMPLE_PARAMS, MIRRORED_EXAMPLE_PARAMS]
    rng = np.random.default_rng(3)
    found = 0
    while found < 20:
        q = random_admissible(rng, "mixed")
        if analyze_cycle(q, method="cubic").report is not None:
            out.append(q)
            found += 1
    return out


def test_criterion_3_derivative_factorization(criterion):
    worst_fd, worst_cf, n = 0.0, 0.0, 0
    for p in _roots():
        search = analyze_cycle(p, method="direct")
        rep = search.report
        if rep is None:
            continue
        n += 1
        y0 = rep.y0_star
        h = 1e-4 * max(1.0, y0)
        dplus = displacement(p, y0 + h, "direct", setup=search.setup).delta
        dminus = displacement(p, y0 - h, "direct", setup=search.setup).delta
        fd = (dplus - dminus) / (2 * h)
        closed = delta_prime_closed_form(p, y0, rep.y1_star)
        worst_fd = max(worst_fd, abs(closed - fd) / abs(fd))
        product = c_eval(p, y0, rep.y1_star) * f_expanded(p, y0, rep.y1_star)
        worst_cf = max(worst_cf, abs(closed - product) / abs(product))
    ok = n >= 20 and worst_fd <= 1e-3 and worst_cf <= 1e-12
    criterion(ok, f"{n} roots, worst |closed - FD|/|FD| = {worst_fd:.3g}, worst |closed - C F| rel = {worst_cf:.3g}")
    assert ok


def _a3_dt(p):
    # a^3 (tL - tR) rounded once
    a, tl, tr = (Fraction(v) for v in (p.a, p.tL, p.tR))
    return float(a ** 3 * (tl - tr))


def test_criterion_4_algebraic_identity(criterion):
    rng = np.random.default_rng(4)
    worst, exact = 0.0, True
    for i in range(10_000):
        p = random_admissible(rng, "mixed" if i % 2 else "focus")
        y0, y1 = rng.uniform(-5.0, 5.0, 2)
        if y0 == y1:
            continue
        e = f_expanded(p, y0, y1)
        worst = max(worst, abs(f_quotient(p, y0, y1) - e) / abs(e))
        exact &= f_expanded(p, 0.0, 0.0) == _a3_dt(p)
    exact &= f_expanded(EXAMPLE_PARAMS, 0.0, 0.0) == _a3_dt(EXAMPLE_PARAMS)
    ok = worst <= 1e-12 and exact
    criterion(ok, f"10000 draws, worst relative gap {worst:.3g}, F(0,0) exact: {exact}")
    assert ok


def test_criterion_5_sign_identity_on_gamma(criterion):
    rng = np.random.default_rng(5)
    draws, tries, points, bad, worst_gap = 0, 0, 0, [], 0.0
    while draws < 100 and tries < 2000:
        tries += 1
        p = random_admissible(rng, "mixed" if tries % 2 else "focus")
        pts = gamma_points(p)
        if not pts:
            continue
        draws += 1
        rows = gamma_sign_check(p, pts)
        points += len(rows)
        worst_gap = max([worst_gap] + [r["unit_gap"] for r in rows])
        bad += [(p, r) for r in rows if not r["ok"]]
    ok = draws >= 100 and not bad
    criterion(ok, f"{draws} draws, {points} gamma points, {len(bad)} sign failures, "
                  f"worst |unit X_L - unit X_R| = {worst_gap:.3g}")
    assert ok, bad[:3]


def test_criterion_6_uniqueness(criterion):
    rng = np.random.default_rng(6)
    scanned, tries, counts = 0, 0, {}
    while scanned < 200 and tries < 1000:
        tries += 1
        k = uniqueness_check(random_admissible(rng, "mixed" if tries % 2 else "focus"))
        if k is None:
            continue
        scanned += 1
        counts[k] = counts.get(k, 0) + 1
    ok = scanned >= 200 and max(counts) <= 1
    criterion(ok, f"{scanned} completed scans out of {tries} draws, brackets histogram {dict(sorted(counts.items()))}")
    assert ok


def _strict(seq, increasing):
    return all((b > a) if increasing else (b < a) for a, b in zip(seq, seq[1:]))


def test_criterion_7_stability_by_simulation(criterion):
    out = {}
    for name, p, converge in (("example", EXAMPLE_PARAMS, True), ("mirrored", MIRRORED_EXAMPLE_PARAMS, False)):
        y0s = find_limit_cycle(p).y0_star
        for f in (1.05, 0.95):
            ys = return_ordinates(p, f * y0s, 6)
            dist = [abs(y - y0s) for y in ys]
            mono = _strict(ys, increasing=(f < 1) == converge)
            same_side = all((y > y0s) == (f > 1) for y in ys)
            trend = _strict(dist, increasing=not converge)
            out[f"{name} x{f}"] = len(ys) - 1 >= 5 and mono and same_side and trend
    bad = [k for k, v in out.items() if not v]
    criterion(not bad, f"runs {sorted(out)}, failed: {bad or 'none'}")
    assert not bad


def test_criterion_8_verdict_rules(criterion, monkeypatch, tmp_path):
    def forbidden(*a, **k):
        raise AssertionError("cycle search performed")

    monkeypatch.setattr(cycle_mod, "scan_displacement", forbidden)
    monkeypatch.setattr(cycle_mod, "prepare_maps", forbidden)
    monkeypatch.setattr(record_mod, "analyze_cycle", forbidden)
    base = dict(aL11=0.2, aL21=-3.0, aR11=-0.5, aR21=-0.1, a12=1.0, a22=0.2, b1=0.0, b2=-0.2)
    cases = {
        "tL tR > 0": (dict(base, aR11=0.1), Verdict.NO_LIMIT_CYCLE_TRACE_PRODUCT),
        "tL tR = 0": (dict(base, aR11=-0.2), Verdict.NO_LIMIT_CYCLE_TRACE_PRODUCT),
        "a = 0": (dict(base, b2=0.0), Verdict.NO_LIMIT_CYCLE_HOMOGENEOUS),
        "a12 = 0": (dict(base, a12=0.0), Verdict.NO_PERIODIC_ORBIT_A12_ZERO),
    }
    results = {}
    for name, (raw, want) in cases.items():
        sys_ = PwlSystem(**raw)
        ok = classify_raw(sys_) is want
        toml = "[raw]\n" + "".join(f"{k} = {v!r}\n" for k, v in raw.items())
        cfg = tmp_path / f"{len(results)}.toml"
        cfg.write_text(toml)
        code = main(["analyze", "--config", str(cfg), "--out", str(tmp_path / f"o{len(results)}")])
        rec = json.loads((tmp_path / f"o{len(results)}" / "record.json").read_text())
        ok &= code == 2 and rec["verdict"] == want.value and rec["searches"] == {}
        if want is not Verdict.NO_PERIODIC_ORBIT_A12_ZERO:
            search = analyze_cycle(canonicalize(sys_))
            ok &= search.verdict is want and search.report is None and not search.samples
        results[name] = ok
    # the precedence also holds on canonical input
    results["a = 0 before trace product"] = classify_params(LienardParams(0.4, 0.3, 1, 1, 0.0)) is Verdict.NO_LIMIT_CYCLE_HOMOGENEOUS
    bad = [k for k, v in results.items() if not v]
    criterion(not bad, f"cases {list(results)}, failed: {bad or 'none'}")
    assert not bad


def test_criterion_9_region_crossing_audit(criterion):
    p = EXAMPLE_PARAMS
    audits = {}
    for half, d in MAPS:
        path = []
        trace_cubic(p, half, d, [5.0], path=path)
        audits[half.value] = crossing_audit(p, [q for q in path if q[1] <= 0.0 <= q[0]])
    right, left = audits["right"], audits["left"]
    ok_r = right["regions"] == ["R+"] and right["start"] == "R+"
    ok_l = left["start"] == "R-" and left["transitions"] == [("R-", "R+")] and left["end"] == "R+"
    criterion(ok_r and ok_l, f"gamma_R regions {right['regions']}; gamma_L starts {left['start']}, "
                             f"transitions {left['transitions']}")
    assert ok_r and ok_l
