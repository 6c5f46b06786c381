"""Scenario files: TOML with one section per component.

Sections: ``[quadrilateral]`` (required), ``[environment]``, ``[link]``,
``[propulsion]``, ``[mission]``, ``[optimizer]``. Omitted sections and keys
fall back to the case-study defaults. Every value is re-validated by the
dataclass it lands in; errors name the offending ``section.key``.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field
from importlib import resources

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import channel, energy, geometry, optimizer
from .errors import GeometryError, ParseError, ValidationError

BUNDLED = ("case_study", "unit_square")


@dataclass(frozen=True)
class Scenario:
    quadrilateral: geometry.Quadrilateral
    environment: channel.Environment
    link: channel.LinkBudget = channel.LinkBudget()
    propulsion: energy.PropulsionParams = energy.PropulsionParams()
    mission: energy.MissionSpec = energy.MissionSpec()
    optimizer: optimizer.OptimizerSettings = optimizer.OptimizerSettings()
    transit_model: str = "horizontal"
    payload_list: tuple = (1e7, 1e8, 1e9)
    name: str = "scenario"
    custom_environment: bool = field(default=False, compare=False)

    def with_environment(self, env: channel.Environment) -> "Scenario":
        return dataclasses.replace(self, environment=env)


def _section(doc, name, required=False):
    sec = doc.get(name)
    if sec is None:
        if required:
            raise ValidationError(name, "section is missing")
        return {}
    if not isinstance(sec, dict):
        raise ValidationError(name, "must be a table")
    return sec


def _build(cls, section, values, exclude=()):
    known = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, val in values.items():
        if key in exclude:
            continue
        if key not in known:
            raise ValidationError(f"{section}.{key}", "unknown key")
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ValidationError(f"{section}.{key}", f"expected a number, got {val!r}")
        kwargs[key] = float(val)
    return cls(**kwargs)


def _environment(sec):
    if "preset" in sec:
        extra = set(sec) - {"preset"}
        if extra:
            raise ValidationError(f"environment.{sorted(extra)[0]}",
                                  "cannot combine a preset with custom parameters")
        return channel.environment(sec["preset"]), False
    if not sec:
        return channel.environment("suburban"), False
    missing = {"xi_los", "xi_nlos", "eta", "kappa"} - set(sec)
    if missing:
        raise ValidationError(f"environment.{sorted(missing)[0]}", "missing parameter")
    name = sec.get("name", "custom")
    values = {k: v for k, v in sec.items() if k != "name"}
    known = {"xi_los", "xi_nlos", "eta", "kappa"}
    for key, val in values.items():
        if key not in known:
            raise ValidationError(f"environment.{key}", "unknown key")
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ValidationError(f"environment.{key}", f"expected a number, got {val!r}")
    env = channel.Environment(name=str(name), **{k: float(v) for k, v in values.items()})
    return env, True


def parse_scenario(text, source="<string>") -> Scenario:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{source}: {exc}") from None

    known = {"name", "quadrilateral", "environment", "link", "propulsion",
             "mission", "optimizer"}
    for key in doc:
        if key not in known:
            raise ValidationError(key, "unknown section")

    quad_sec = _section(doc, "quadrilateral", required=True)
    if "vertices" not in quad_sec:
        raise ValidationError("quadrilateral.vertices", "missing")
    verts = quad_sec["vertices"]
    if (not isinstance(verts, list) or len(verts) != 4
            or not all(isinstance(v, list) and len(v) == 2 for v in verts)):
        raise ValidationError("quadrilateral.vertices", "expected four [x, y] pairs")
    try:
        quad = geometry.validate_quadrilateral(quad_sec["vertices"])
    except GeometryError as exc:
        raise type(exc)(f"quadrilateral.vertices: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ValidationError("quadrilateral.vertices", f"malformed: {exc}") from None

    env, custom = _environment(_section(doc, "environment"))
    link = _build(channel.LinkBudget, "link", _section(doc, "link"))
    prop = _build(energy.PropulsionParams, "propulsion", _section(doc, "propulsion"))

    mission_sec = dict(_section(doc, "mission"))
    transit = mission_sec.pop("transit_model", "horizontal")
    if transit not in energy.TRANSIT_MODELS:
        raise ValidationError("mission.transit_model",
                              f"unknown model {transit!r}; choose from {energy.TRANSIT_MODELS}")
    payloads = mission_sec.pop("payload_list", (1e7, 1e8, 1e9))
    if (not isinstance(payloads, (list, tuple)) or not payloads
            or not all(isinstance(x, (int, float)) and x > 0 for x in payloads)):
        raise ValidationError("mission.payload_list", "must be a list of positive numbers")
    mission = _build(energy.MissionSpec, "mission", mission_sec)

    opt_sec = dict(_section(doc, "optimizer"))
    if "grid_points" in opt_sec:
        gp = opt_sec.pop("grid_points")
        if isinstance(gp, bool) or not isinstance(gp, int):
            raise ValidationError("optimizer.grid_points", "must be an integer")
    else:
        gp = 64
    opt = _build(optimizer.OptimizerSettings, "optimizer", opt_sec)
    opt = dataclasses.replace(opt, grid_points=gp)

    return Scenario(quadrilateral=quad, environment=env, link=link, propulsion=prop,
                    mission=mission, optimizer=opt, transit_model=transit,
                    payload_list=tuple(float(x) for x in payloads),
                    name=str(doc.get("name", os.path.splitext(os.path.basename(source))[0])),
                    custom_environment=custom)


def bundled_text(name) -> str:
    return resources.files("quadcover").joinpath("data", f"{name}.toml").read_text()


def load_scenario(path) -> Scenario:
    """Read and validate a scenario file; bundled names are accepted too."""
    path = os.fspath(path)
    if not os.path.exists(path) and path in BUNDLED:
        return parse_scenario(bundled_text(path), f"{path}.toml")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse_scenario(text, path)
