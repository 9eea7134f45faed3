"""Scenario configuration as flat INI text, with lossless round-trips."""

import configparser
import io
from dataclasses import replace
from typing import List

from .hrl import LearnerConfig
from .human import PROFILES, ActivityCurves
from .sim import ScenarioSpec
from .thermo import ThermalGrid


class ConfigError(Exception):
    """The configuration text cannot be parsed into a scenario."""


_SCENARIO_FIELDS = (
    ("shs_enabled", bool), ("phase1_episodes", int), ("phase2_episodes", int),
    ("repetitions", int), ("eval_episodes", int),
    ("max_ticks_per_episode", int), ("seed", int), ("coupling", bool),
    ("continue_human_learning", bool), ("resume_mode", str),
    ("shs_per_action_penalty", bool), ("shs_comfort_prior", bool),
    ("shs_prior_scale", float),
)
_LEARNER_FIELDS = (
    ("gamma", float), ("alpha", float), ("epsilon_start", float),
    ("epsilon_end", float), ("epsilon_decay", float), ("alpha_schedule", str),
)
_GRID_FIELDS = (
    ("t_min", float), ("t_max", float), ("t_step", float),
    ("rh_min", float), ("rh_max", float), ("rh_step", float),
    ("dew_point", float), ("decay_k", float),
)
_CURVE_FIELDS = (
    ("n_act", int), ("subtask_len", int), ("completion_bonus", float),
)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _read(section, key, kind):
    raw = section[key]
    try:
        if kind is bool:
            if raw not in ("true", "false"):
                raise ValueError(raw)
            return raw == "true"
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def scenario_to_config(spec: ScenarioSpec) -> str:
    parser = configparser.ConfigParser()
    parser["scenario"] = {"name": spec.name}
    for name, _ in _SCENARIO_FIELDS:
        parser["scenario"][name] = _fmt(getattr(spec, name))
    parser["scenario"]["humans"] = ",".join(h.name for h in spec.humans)
    parser["scenario"]["bands"] = ",".join(
        repr(h.band_halfwidth) for h in spec.humans)
    for section, cfg in (("human_learner", spec.humans[0].learner),
                         ("shs_learner", spec.shs_learner)):
        parser[section] = {name: _fmt(getattr(cfg, name))
                           for name, _ in _LEARNER_FIELDS}
    parser["grid"] = {name: _fmt(getattr(spec.grid, name))
                      for name, _ in _GRID_FIELDS}
    parser["curves"] = {name: _fmt(getattr(spec.curves, name))
                        for name, _ in _CURVE_FIELDS}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def _learner_from(section) -> LearnerConfig:
    return LearnerConfig(**{name: _read(section, name, kind)
                            for name, kind in _LEARNER_FIELDS})


def config_to_scenario(text: str) -> ScenarioSpec:
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    try:
        sec = parser["scenario"]
        names: List[str] = [n for n in sec["humans"].split(",") if n]
        bands = [float(b) for b in sec["bands"].split(",") if b]
        if len(names) != len(bands):
            raise ConfigError("humans and bands lists differ in length")
        human_learner = _learner_from(parser["human_learner"])
        humans = []
        for name, band in zip(names, bands):
            if name not in PROFILES:
                raise ConfigError(f"unknown profile {name!r}")
            humans.append(replace(PROFILES[name], band_halfwidth=band,
                                  learner=human_learner))
        kwargs = {name: _read(sec, name, kind)
                  for name, kind in _SCENARIO_FIELDS}
        grid = ThermalGrid(**{name: _read(parser["grid"], name, kind)
                              for name, kind in _GRID_FIELDS})
        curves = ActivityCurves(**{name: _read(parser["curves"], name, kind)
                                   for name, kind in _CURVE_FIELDS})
        return ScenarioSpec(name=sec["name"], humans=tuple(humans),
                            grid=grid, curves=curves,
                            shs_learner=_learner_from(parser["shs_learner"]),
                            **kwargs)
    except KeyError as exc:
        raise ConfigError(f"missing config key or section: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load_scenario_file(path: str) -> ScenarioSpec:
    try:
        with open(path, encoding="utf-8") as f:
            return config_to_scenario(f.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
