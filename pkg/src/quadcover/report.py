"""Report builders shared by the command-line tool.

Every builder returns plain dicts of floats, strings and lists so the
result can go straight to ``json.dumps``. Angles are carried in degrees.
"""

import math

import numpy as np

from . import channel, energy, geometry, optimizer, placement, reference
from .errors import EmptyFeasibleSet

MODES = ("inscribed", "circumscribed", "circumscribed-published")
OBJECTIVES = ("pathloss", "snr", "energy")


def clean(obj):
    """Recursively convert numpy scalars and tuples; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def fit_ellipse(quad, mode):
    if mode == "inscribed":
        return geometry.max_inscribed_ellipse(quad)
    if mode == "circumscribed":
        return geometry.min_circumscribed_ellipse(quad)
    if mode == "circumscribed-published":
        return geometry.published_circumscribed_ellipse(quad)
    raise ValueError(f"unknown mode {mode!r}")


def ellipse_section(quad, fit):
    e = fit.ellipse
    return clean({
        "conic": fit.conic.as_dict(),
        "center": list(e.center),
        "a": e.a,
        "b": e.b,
        "rotation_deg": math.degrees(e.rotation),
        "area": e.area,
        "quadrilateral_area": quad.area,
        "area_ratio": e.area / quad.area,
        "diagnostics": fit.diagnostics,
    })


def geometry_at(a, b, h, link, env):
    g = placement.beam_geometry(a, b, h)
    return {
        "H_m": h,
        "theta_deg": math.degrees(g.theta),
        "psi_deg": math.degrees(g.psi),
        "x0_m": g.x0,
        "phi_deg": g.phi_deg,
        "d_m": g.d,
        "p_los": channel.los_probability(g.phi_deg, env),
        "pl_max_db": channel.max_path_loss(a, b, h, link, env),
        "snr_min_db": channel.min_snr_db(a, b, h, link, env),
    }


def _result_dict(res: optimizer.OptimizationResult):
    return {
        "h_opt": res.h_opt,
        "objective_value": res.objective_value,
        "bracket": list(res.bracket),
        "iterations": res.iterations,
        "stationarity_residual": res.stationarity_residual,
        "boundary": res.boundary,
        "interior": res.interior,
        "local_minima": list(res.local_minima),
        "domain": list(res.domain),
    }


def optimize(objective, a, b, sc, settings=None, mission=None):
    settings = settings or sc.optimizer
    if objective == "pathloss":
        return optimizer.optimal_altitude_pathloss(a, b, sc.link, sc.environment, settings)
    if objective == "snr":
        return optimizer.optimal_altitude_snr(a, b, sc.link, sc.environment, settings)
    if objective == "energy":
        return optimizer.optimal_altitude_energy(
            a, b, sc.link, sc.environment, sc.propulsion, mission or sc.mission,
            sc.transit_model, settings)
    raise ValueError(f"unknown objective {objective!r}")


def altitude_section(sc, fit, objective, settings=None):
    a, b = fit.ellipse.a, fit.ellipse.b
    res = optimize(objective, a, b, sc, settings)
    units = {"pathloss": "dB", "snr": "dB", "energy": "J"}[objective]
    out = {
        "objective": objective,
        "units": units,
        "environment": sc.environment.name,
        "ellipse": {"a": a, "b": b},
        "result": _result_dict(res),
        "at_optimum": geometry_at(a, b, res.h_opt, sc.link, sc.environment),
    }
    if objective == "energy":
        br = energy.energy_breakdown(a, b, res.h_opt, sc.link, sc.environment,
                                     sc.propulsion, sc.mission, sc.transit_model)
        out["energy"] = {
            "transit_model": sc.transit_model,
            "payload_bits": sc.mission.payload_bits,
            "p_vto_W": br.p_vto, "p_for_W": br.p_for, "p_hov_W": br.p_hov,
            "takeoff_J": br.takeoff_j, "transit_J": br.transit_j, "hover_J": br.hover_j,
            "rate_bps": br.rate_bps,
        }
    return clean(out)


# --------------------------------------------------------------------------
# Case-study reproduction
# --------------------------------------------------------------------------

def scale_alignment(ours, printed):
    """Best single positive factor ``k`` aligning ``k * ours`` with ``printed``.

    ``k`` minimizes the largest relative deviation ``|k r_i - 1|`` with
    ``r_i = ours_i / printed_i``; the optimum is ``2 / (max r + min r)`` and
    the deviation it leaves is ``(max r - min r) / (max r + min r)``.
    """
    ours, printed = np.asarray(ours, float), np.asarray(printed, float)
    r = ours / printed
    if np.any(r <= 0):
        return {"scale": None, "max_relative_deviation": None,
                "sign_mismatch": True, "ratios": r.tolist()}
    hi, lo = float(r.max()), float(r.min())
    k = 2.0 / (hi + lo)
    return {"scale": k, "max_relative_deviation": (hi - lo) / (hi + lo),
            "sign_mismatch": False, "ratios": r.tolist(),
            "scaled": (k * ours).tolist()}


def table_i(fits):
    out = {}
    for key, fit_key in (("B", "inscribed"), ("D", "circumscribed"),
                         ("D_published_route", "circumscribed-published")):
        printed = reference.TABLE_I["B" if key == "B" else "D"]
        ours = fits[fit_key].conic.normalized().coefficients
        out[key] = {"normalized": ours.tolist(), "printed": list(printed),
                    **scale_alignment(ours, printed)}
    return out


def table_ii(sc, fits, environments=None):
    envs = environments or list(channel.PRESETS)
    settings = sc.optimizer
    out = {}
    for footprint in ("inscribed", "circumscribed", "circumscribed-published"):
        e = fits[footprint].ellipse
        rows = {}
        printed_key = "inscribed" if footprint == "inscribed" else "circumscribed"
        for name in envs:
            env = channel.environment(name)
            res = optimizer.optimal_altitude_pathloss(e.a, e.b, sc.link, env, settings)
            psi, theta = placement.beam_angles(e.a, e.b, res.h_opt)
            row = {"H_m": res.h_opt, "theta_deg": math.degrees(theta),
                   "psi_deg": math.degrees(psi), "pl_max_db": res.objective_value,
                   "interior": res.interior}
            printed = reference.TABLE_II[printed_key].get(name)
            if printed is not None:
                row["printed"] = {"H_m": printed[0], "theta_deg": printed[1],
                                  "psi_deg": printed[2]}
            rows[name] = row
        out[footprint] = {"a": e.a, "b": e.b, "rows": rows}
    return out


def energy_minima(sc, fits):
    out = {}
    for footprint in ("inscribed", "circumscribed"):
        e = fits[footprint].ellipse
        rows = []
        for q in sc.payload_list:
            mission = energy.MissionSpec(sc.mission.bandwidth_hz, q, sc.mission.pt_watts)
            try:
                res = optimizer.optimal_altitude_energy(
                    e.a, e.b, sc.link, sc.environment, sc.propulsion, mission,
                    sc.transit_model, sc.optimizer)
                rows.append({"payload_bits": q, "h_opt": res.h_opt,
                             "energy_J": res.objective_value, "interior": res.interior})
            except EmptyFeasibleSet as exc:
                rows.append({"payload_bits": q, "h_opt": None, "energy_J": None,
                             "error": str(exc)})
        out[footprint] = rows
    return out


def build_report(sc):
    quad = sc.quadrilateral
    fits = {m: fit_ellipse(quad, m) for m in MODES}
    ins, circ = fits["inscribed"].ellipse, fits["circumscribed"].ellipse
    published = fits["circumscribed-published"].ellipse
    p = sc.propulsion

    notes = [
        "circumscribed: minimal ellipse from the exact area-stationarity cubic; "
        "circumscribed-published: root of the printed cubic evaluated with the "
        "similarity-frame (s, t), which reproduces the published figures but is "
        "not area-minimal for this quadrilateral",
        "inscribed: dual-pencil area maximization; the printed closed-form "
        "parameter is recorded under diagnostics.published_q",
    ]
    printed_outside = reference.CIRCUMSCRIBED_OUTSIDE_PRINTED
    recomputed = 1.0 - reference.CASE_STUDY_AREA / reference.CIRCUMSCRIBED_AREA
    outside = {
        "printed": printed_outside,
        "from_printed_areas": recomputed,
        "computed": 1.0 - quad.area / circ.area,
        "computed_published_route": 1.0 - quad.area / published.area,
    }
    notes.append(f"printed outside share {printed_outside:.2%} disagrees with the "
                 f"printed areas, which give {recomputed:.2%}")

    report = {
        "scenario": sc.name,
        "quadrilateral": {"vertices": [list(v) for v in quad.labeled],
                          "area": quad.area},
        "ellipses": {m: ellipse_section(quad, fits[m]) for m in MODES},
        "coverage": {
            "inscribed_ratio": ins.area / quad.area,
            "circumscribed_outside_share": outside,
        },
        "table_i": table_i(fits),
        "table_ii": table_ii(sc, fits),
        "propulsion": {"p_hov_W": energy.hover_power(p),
                       "p_vto_W": energy.vto_power(p),
                       "p_for_W": energy.forward_power(p)},
        "energy_minima": energy_minima(sc, fits),
        "settings": {"environment": sc.environment.name,
                     "transit_model": sc.transit_model,
                     "m": sc.link.m, "g0_db": sc.link.g0_db},
        "notes": notes,
    }
    return clean(report)


def render_text(rep):
    """Human-readable rendering of :func:`build_report` output."""
    lines = [f"scenario: {rep['scenario']}",
             f"quadrilateral area: {rep['quadrilateral']['area']:.1f} m^2", ""]
    for mode, e in rep["ellipses"].items():
        lines.append(f"{mode:<20} a = {e['a']:.1f} m  b = {e['b']:.1f} m  "
                     f"area = {e['area']:.1f} m^2  ratio = {e['area_ratio']:.2%}")
    cov = rep["coverage"]["circumscribed_outside_share"]
    lines += ["", f"inscribed coverage: {rep['coverage']['inscribed_ratio']:.2%}",
              f"circumscribed outside share: {cov['computed']:.2%} "
              f"(published route {cov['computed_published_route']:.2%}, printed "
              f"{cov['printed']:.2%}, from printed areas {cov['from_printed_areas']:.2%})",
              "", "Table I (scaled to printed magnitudes)"]
    for key, col in rep["table_i"].items():
        if col["scale"] is None:
            lines.append(f"  {key}: sign mismatch with printed column")
            continue
        vals = "  ".join(f"{x: .4e}" for x in col["scaled"])
        lines.append(f"  {key:<14} {vals}   max dev {col['max_relative_deviation']:.2%}")
    lines += ["", "Table II (optimal altitude, min max path loss)",
              f"  {'footprint':<20}{'environment':<16}{'H [m]':>9}{'theta':>8}{'psi':>8}"]
    for footprint, block in rep["table_ii"].items():
        for env, row in block["rows"].items():
            lines.append(f"  {footprint:<20}{env:<16}{row['H_m']:>9.1f}"
                         f"{row['theta_deg']:>8.1f}{row['psi_deg']:>8.1f}")
    pr = rep["propulsion"]
    lines += ["", f"p_hov = {pr['p_hov_W']:.1f} W  p_vto = {pr['p_vto_W']:.1f} W  "
                  f"p_for = {pr['p_for_W']:.1f} W", "",
              f"energy minima ({rep['settings']['transit_model']} transit)"]
    for footprint, rows in rep["energy_minima"].items():
        for r in rows:
            if r["h_opt"] is None:
                lines.append(f"  {footprint:<14} Q = {r['payload_bits']:.3g} bit: {r['error']}")
            else:
                lines.append(f"  {footprint:<14} Q = {r['payload_bits']:.3g} bit: "
                             f"H = {r['h_opt']:.1f} m  E = {r['energy_J']:.1f} J")
    lines += [""] + [f"note: {n}" for n in rep["notes"]]
    return "\n".join(lines) + "\n"


__all__ = ["MODES", "OBJECTIVES", "build_report", "render_text", "ellipse_section",
           "altitude_section", "scale_alignment", "fit_ellipse", "geometry_at"]
