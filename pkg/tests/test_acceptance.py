"""Exit criteria, one test each, at the stated tolerances.

Every test prints a single ``ACCEPTANCE <n>: PASS|FAIL`` line with the
measured numbers, then asserts. Run directly (``python3
tests/test_acceptance.py``) for the summary lines alone.
"""

import math
import sys
import time

import numpy as np
import pytest

from conftest import check_circumscribed, check_inscribed, convex_quad_points
from quadcover import channel, energy, geometry, optimizer, placement, report
from quadcover.reference import (AFFINE_ST, CASE_STUDY_VERTICES, CIRCUMSCRIBED_AREA,
                                 CIRCUMSCRIBED_AXES, CIRCUMSCRIBED_U, INSCRIBED_AXES,
                                 INSCRIBED_COVERAGE, SIMILARITY_ST, SIMILARITY_VW, TABLE_I,
                                 TABLE_II)

pytestmark = pytest.mark.acceptance

LINK = channel.LinkBudget()


def verdict(n, ok, detail, capsys=None):
    line = f"ACCEPTANCE {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


def info(lines, capsys=None):
    text = "\n".join(f"    info: {x}" for x in lines)
    if capsys is not None:
        with capsys.disabled():
            print(text)
    else:
        print(text)


def _quad():
    return geometry.validate_quadrilateral(CASE_STUDY_VERTICES)


def test_c01_area(capsys):
    area = _quad().area
    ok = area == 126000.0
    assert verdict(1, ok, f"shoelace area {area!r} (want 126000 exactly)", capsys)


def test_c02_inscribed(capsys):
    q = _quad()
    t0 = time.perf_counter()
    e = geometry.max_inscribed_ellipse(q).ellipse
    dt = time.perf_counter() - t0
    cov = e.area / q.area
    ok = (abs(e.a - INSCRIBED_AXES[0]) <= 0.5 and abs(e.b - INSCRIBED_AXES[1]) <= 0.5
          and abs(cov - INSCRIBED_COVERAGE) <= 0.001 and dt < 1.0)
    assert verdict(2, ok, f"a={e.a:.3f} b={e.b:.3f} coverage={cov:.4%} ({dt * 1e3:.1f} ms)",
                   capsys)


def test_c03_circumscribed(capsys):
    q = _quad()
    t0 = time.perf_counter()
    fit = geometry.min_circumscribed_ellipse(q)
    dt = time.perf_counter() - t0
    e, u = fit.ellipse, fit.diagnostics["u"]
    ok = (abs(e.a - CIRCUMSCRIBED_AXES[0]) <= 0.5 and abs(e.b - CIRCUMSCRIBED_AXES[1]) <= 0.5
          and abs(e.area / CIRCUMSCRIBED_AREA - 1) <= 0.002
          and abs(u - CIRCUMSCRIBED_U) <= 0.005 and dt < 1.0)
    d = fit.diagnostics
    info([f"true minimum: pencil search area {d['pencil_area']:.2f}, "
          f"relative gap {d['pencil_relative_gap']:.1e}",
          f"printed cubic route: u={d['published_u']:.4f} a={d['published_a']:.3f} "
          f"b={d['published_b']:.3f} area={d['published_area']:.1f} (larger than the minimum)",
          f"outside share: computed {1 - q.area / e.area:.2%}, printed 39.99%, "
          f"from printed areas {1 - q.area / CIRCUMSCRIBED_AREA:.2%}"], capsys)
    assert verdict(3, ok, f"a={e.a:.3f} b={e.b:.3f} area={e.area:.1f} u={u:.5f} "
                          f"({dt * 1e3:.1f} ms)", capsys)


def test_c04_canonical(capsys):
    q = _quad()
    _, a = geometry.affine_to_canonical(q)
    _, s = geometry.similarity_to_canonical(q)
    errs = [abs(a.s - AFFINE_ST[0]), abs(a.t - AFFINE_ST[1]),
            abs(s.s - SIMILARITY_ST[0]), abs(s.t - SIMILARITY_ST[1]),
            abs(s.v - SIMILARITY_VW[0]), abs(s.w - SIMILARITY_VW[1])]
    ok = max(errs) <= 1e-12
    assert verdict(4, ok, f"max deviation {max(errs):.1e}", capsys)


def test_c05_table_i(capsys):
    q = _quad()
    ins = geometry.max_inscribed_ellipse(q)
    circ = geometry.min_circumscribed_ellipse(q)
    published = geometry.published_circumscribed_ellipse(q)
    b = report.scale_alignment(ins.conic.normalized().coefficients, TABLE_I["B"])
    d = report.scale_alignment(circ.conic.normalized().coefficients, TABLE_I["D"])
    dp = report.scale_alignment(published.conic.normalized().coefficients, TABLE_I["D"])
    ab_i = ins.ellipse.a * ins.ellipse.b / (INSCRIBED_AXES[0] * INSCRIBED_AXES[1]) - 1
    ab_c = circ.ellipse.a * circ.ellipse.b / (CIRCUMSCRIBED_AXES[0] * CIRCUMSCRIBED_AXES[1]) - 1
    ab_p = published.ellipse.a * published.ellipse.b / (CIRCUMSCRIBED_AXES[0] * CIRCUMSCRIBED_AXES[1]) - 1
    dev = lambda r: math.inf if r["scale"] is None else r["max_relative_deviation"]
    ok = dev(b) <= 0.01 and dev(d) <= 0.01 and abs(ab_i) <= 0.005 and abs(ab_c) <= 0.005
    info([f"published-route D column: max deviation {dev(dp):.2%}, a*b off by {ab_p:+.2%}"], capsys)
    assert verdict(5, ok, f"B max dev {dev(b):.2%}, D max dev {dev(d):.2%}; "
                          f"a*b inscribed {ab_i:+.3%}, circumscribed {ab_c:+.3%}", capsys)


def test_c06_table_ii(capsys):
    # Table II is a function of the printed semi-axes; evaluated at those inputs
    axes = {"inscribed": INSCRIBED_AXES, "circumscribed": CIRCUMSCRIBED_AXES}
    t0 = time.perf_counter()
    worst_h = worst_ang = 0.0
    misses = []
    for fp, rows in TABLE_II.items():
        a, b = axes[fp]
        for env, (h_ref, th_ref, psi_ref) in rows.items():
            res = optimizer.optimal_altitude_pathloss(a, b, LINK, channel.environment(env))
            psi, theta = placement.beam_angles(a, b, res.h_opt)
            dh = abs(res.h_opt - h_ref)
            dth = abs(math.degrees(theta) - th_ref)
            dpsi = abs(math.degrees(psi) - psi_ref)
            worst_h, worst_ang = max(worst_h, dh), max(worst_ang, dth, dpsi)
            if dh > 1.0 or dth > 0.1 or dpsi > 0.1:
                misses.append(f"{fp}/{env}: H={res.h_opt:.2f} theta={math.degrees(theta):.2f} "
                              f"psi={math.degrees(psi):.2f} vs printed "
                              f"{h_ref}/{th_ref}/{psi_ref}")
    dt = time.perf_counter() - t0
    ok = not misses and dt < 1.0
    info(misses, capsys)
    assert verdict(6, ok, f"worst |dH|={worst_h:.2f} m, worst angle {worst_ang:.2f} deg, "
                          f"{len(misses)} row(s) out of tolerance ({dt * 1e3:.1f} ms)", capsys)


def test_c07_unified_vs_composed(capsys):
    e = geometry.max_inscribed_ellipse(_quad()).ellipse
    worst = 0.0
    for env in channel.PRESETS.values():
        for h in np.geomspace(0.5, 1e4, 1000):
            worst = max(worst, abs(channel.max_path_loss(e.a, e.b, h, LINK, env)
                                   - channel.composed_max_path_loss(e.a, e.b, h, LINK, env)))
    assert verdict(7, worst < 1e-9, f"max |unified - composed| = {worst:.1e} dB", capsys)


def test_c08_directivity(capsys):
    e0 = geometry.max_inscribed_ellipse(_quad()).ellipse
    a, b = e0.a, e0.b
    parts, ok = [], True
    for env in ("suburban", "urban"):
        e = channel.environment(env)
        res = [optimizer.optimal_altitude_snr(a, b, channel.LinkBudget(g0_db=5.0, m=m), e)
               for m in (0, 2, 4)]
        hs = [r.h_opt for r in res]
        snr = [r.objective_value for r in res]
        ok &= hs[0] < hs[1] < hs[2] and snr[0] > snr[1] > snr[2]
        parts.append(f"{env}: H {hs[0]:.1f}<{hs[1]:.1f}<{hs[2]:.1f}, "
                     f"SNR {snr[0]:.2f}>{snr[1]:.2f}>{snr[2]:.2f}")
    assert verdict(8, ok, "; ".join(parts), capsys)


def test_c09_energy(capsys):
    q = _quad()
    ins = geometry.max_inscribed_ellipse(q).ellipse
    circ = geometry.min_circumscribed_ellipse(q).ellipse
    env, p = channel.environment("suburban"), energy.PropulsionParams()
    s = optimizer.OptimizerSettings(h_min=5.0, h_max=2000.0)
    interior, hs, circ_more = True, [], True
    for qbits in (1e7, 1e8, 1e9):
        m = energy.MissionSpec(payload_bits=qbits)
        ri = optimizer.optimal_altitude_energy(ins.a, ins.b, LINK, env, p, m, settings=s)
        rc = optimizer.optimal_altitude_energy(circ.a, circ.b, LINK, env, p, m, settings=s)
        interior &= ri.interior and rc.interior
        circ_more &= rc.objective_value > ri.objective_value
        hs.append(ri.h_opt)
    nonincreasing = hs[0] >= hs[1] >= hs[2]
    ok = interior and nonincreasing and circ_more
    info([f"interior minima: {interior}; circumscribed > inscribed: {circ_more}; "
          f"h_opt non-increasing in Q: {nonincreasing}"], capsys)
    assert verdict(9, ok, "inscribed h_opt for Q = 10/100/1000 Mbit: "
                          + ", ".join(f"{h:.1f}" for h in hs) + " m", capsys)


def test_c10_propulsion(capsys):
    p = energy.PropulsionParams()
    # term-by-term oracle from the constants
    z1 = 0.012 / 8 * 1.225 * 0.05 * 0.503 * 120 ** 3
    z2 = 1.1 * 20 ** 1.5 / math.sqrt(2 * 1.225 * 0.503)
    hov = z1 + z2
    fwd = (z1 * (1 + 3 * 400 / 120 ** 2)
           + z2 * math.sqrt(math.sqrt(1 + 20 ** 4 / (4 * 4.03 ** 4)) - 400 / (2 * 4.03 ** 2))
           + 0.5 * 0.6 * 1.225 * 0.05 * 0.503 * 20 ** 3)
    vto = z1 + 20 * 3 / 2 + 10 * math.sqrt(9 + 40 / (1.225 * 0.503))
    got = (energy.hover_power(p), energy.vto_power(p), energy.forward_power(p))
    want = (hov, vto, fwd)
    printed = (168.5, 195.8, 178.3)
    ok = all(abs(g / w - 1) <= 0.005 for g, w in zip(got, want)) and all(
        abs(g / r - 1) <= 0.005 for g, r in zip(got, printed))
    assert verdict(10, ok, "p_hov={:.2f} p_vto={:.2f} p_for={:.2f} W".format(*got), capsys)


def test_c11_random_certificates(capsys):
    rng = np.random.default_rng(20240611)
    t0 = time.perf_counter()
    failures, worst_gap, three = [], 0.0, 0
    for i in range(100):
        pts = convex_quad_points(rng, spread=float(10 ** rng.uniform(-1, 3)))
        q = geometry.validate_quadrilateral(pts)
        try:
            fi = geometry.max_inscribed_ellipse(q)
            check_inscribed(q, fi)
            three += fi.diagnostics["sides_touched"] == 3
            fc = geometry.min_circumscribed_ellipse(q)
            check_circumscribed(q, fc)
            worst_gap = max(worst_gap, fc.diagnostics["pencil_relative_gap"])
        except AssertionError as exc:
            failures.append(f"quad {i}: {exc}")
    dt = time.perf_counter() - t0
    ok = not failures and worst_gap <= 1e-6 and dt < 30
    info(failures[:5] + [f"{three} of 100 maximal inscribed ellipses touch only three sides"],
         capsys)
    assert verdict(11, ok, f"{100 - len(failures)}/100 certified, worst pencil gap "
                           f"{worst_gap:.1e} ({dt:.1f} s)", capsys)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c"):
            try:
                fn(None)
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
