"""Run configuration: INI-style files, ``--set`` overrides and named presets."""

import configparser
import itertools
from dataclasses import dataclass, field

from .assembly import ContactProblem, MaterialHalfPlane, ProfilePoly
from .kernel import DEFAULT_TAIL_TOL

__all__ = ["ConfigError", "RunConfig", "PRESETS", "DEFAULTS", "load_config", "preset_text"]


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


# section -> key -> (type, default)
DEFAULTS = {
    "problem": {
        "e1": (float, 1.0),
        "alpha1": (float, 0.5),
        "nu1": (float, 0.3),
        "e2": (float, 1.0),
        "alpha2": (float, 0.25),
        "nu2": (float, 0.3),
        # when set, alpha2 = alpha2_ratio * alpha1
        "alpha2_ratio": (float, None),
        # when set, alpha1 = alpha2 = alpha
        "alpha": (float, None),
        "Q0": (float, 1.0),
        "Q1": (float, 0.0),
        "P": (float, 1.0),
        "model": (str, "hertz"),
        "gamma_s": (float, 0.0),
    },
    "numerics": {
        "N": (int, 16),
        "tail_tol": (float, DEFAULT_TAIL_TOL),
        "eps": (float, 1e-4),
        "root_rtol": (float, 1e-10),
        "branch": (str, "auto"),
        "residual_tol": (float, 1e-8),
    },
    "output": {
        "tag": (str, "run"),
        "pressure_samples": (int, 0),
        "displacement_samples": (int, 0),
        "displacement_xmin": (float, -10.0),
        # closest sample to the contact edge, as a fraction of b
        "displacement_gap": (float, 1e-3),
    },
}

SWEEPABLE = set(DEFAULTS["problem"]) | {"N", "eps"}


def _parse(section, key, raw):
    typ = DEFAULTS[section][key][0]
    try:
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"{section}.{key}: cannot parse {raw!r} as {typ.__name__}") from exc


def _find_section(key):
    hits = [s for s, keys in DEFAULTS.items() if key in keys]
    if not hits:
        raise ConfigError(f"unknown setting {key!r}")
    return hits[0]


@dataclass
class RunConfig:
    """Effective settings plus optional sweep axes (name -> value list)."""

    values: dict = field(default_factory=dict)
    axes: dict = field(default_factory=dict)
    source: str = "defaults"

    def get(self, key):
        return self.values[key]

    def set(self, key, raw):
        if "." in key:
            section, key = key.split(".", 1)
            if section == "sweep":
                self.set_axis(key, raw)
                return
            if section not in DEFAULTS or key not in DEFAULTS[section]:
                raise ConfigError(f"unknown setting {section}.{key}")
        else:
            section = _find_section(key)
        self.values[key] = _parse(section, key, raw) if isinstance(raw, str) else raw

    def set_axis(self, key, raw):
        if key not in SWEEPABLE:
            raise ConfigError(f"sweep axis {key!r} is not a sweepable parameter")
        section = _find_section(key)
        items = raw.split(",") if isinstance(raw, str) else list(raw)
        vals = [_parse(section, key, str(v).strip()) for v in items if str(v).strip()]
        if not vals:
            raise ConfigError(f"sweep axis {key!r} has no values")
        self.axes[key] = vals

    def points(self):
        """Settings for each point of the Cartesian product of the axes."""
        if not self.axes:
            return [dict(self.values)]
        names = list(self.axes)
        out = []
        for combo in itertools.product(*(self.axes[n] for n in names)):
            v = dict(self.values)
            v.update(zip(names, combo))
            out.append(v)
        return out

    def describe(self):
        parts = [f"{k}={self.values[k]}" for k in sorted(self.values) if self.values[k] is not None]
        parts += [f"sweep.{k}={','.join(map(str, v))}" for k, v in self.axes.items()]
        return "; ".join(parts)


def problem_from(values):
    """Build a ContactProblem from a flat settings dict."""
    a1, a2 = values["alpha1"], values["alpha2"]
    if values.get("alpha") is not None:
        a1 = a2 = values["alpha"]
    if values.get("alpha2_ratio") is not None:
        a2 = values["alpha2_ratio"] * a1
    try:
        return ContactProblem(
            MaterialHalfPlane(values["e1"], a1, values["nu1"]),
            MaterialHalfPlane(values["e2"], a2, values["nu2"]),
            ProfilePoly(values["Q0"], values["Q1"]),
            P=values["P"],
            model=values["model"],
            gamma_s=values["gamma_s"],
            N=values["N"],
            tail_tol=values["tail_tol"],
            eps=values["eps"],
            root_rtol=values["root_rtol"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _base():
    return {k: d for keys in DEFAULTS.values() for k, (_, d) in keys.items()}


def _preset(desc, settings=None, sweep=None):
    return {"description": desc, "settings": settings or {}, "sweep": sweep or {}}


_RATIOS = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
_GAMMAS = [0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0]

PRESETS = {
    "fig2a": _preset(
        "b versus alpha2 = r alpha1, f = x^2",
        {"alpha2_ratio": 0.5},
        {"alpha1": [0.5, 0.7, 0.9], "alpha2_ratio": _RATIOS},
    ),
    "fig2b": _preset(
        "b versus alpha2 = r alpha1, f = x^4",
        {"Q0": 0.0, "Q1": 1.0, "alpha2_ratio": 0.5},
        {"alpha1": [0.5, 0.7, 0.9], "alpha2_ratio": _RATIOS},
    ),
    "fig3": _preset(
        "b versus e1, alpha2 = 0.3",
        {"alpha2": 0.3},
        {"alpha1": [0.5, 0.7, 0.9], "e1": [0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0]},
    ),
    "fig4": _preset(
        "delta versus alpha2 = r alpha1",
        {"alpha2_ratio": 0.5},
        {"alpha1": [0.5, 0.9, 0.95], "alpha2_ratio": _RATIOS},
    ),
    "fig5": _preset(
        "alpha2 = 0.1, alpha1 = 0.3, 0.7, 0.9 with pressure traces",
        {"alpha2": 0.1, "pressure_samples": 201},
        {"alpha1": [0.3, 0.7, 0.9]},
    ),
    "fig8": _preset(
        "equal exponents: b and delta versus alpha",
        {"alpha": 0.3},
        {"alpha": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]},
    ),
    "fig8-alpha-0.3": _preset(
        "equal exponents alpha = 0.3 with pressure and displacement traces",
        {"alpha": 0.3, "pressure_samples": 201, "displacement_samples": 200},
    ),
    "fig9a": _preset(
        "JKR, equal exponents: b versus gamma_s",
        {"model": "jkr", "alpha": 0.5},
        {"alpha": [0.3, 0.5, 0.7], "gamma_s": _GAMMAS},
    ),
    "fig9b": _preset(
        "JKR, equal exponents: b versus alpha at gamma_s = 1",
        {"model": "jkr", "gamma_s": 1.0, "alpha": 0.5},
        {"alpha": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]},
    ),
    "fig9c": _preset(
        "JKR, equal exponents: b versus P at gamma_s = 1",
        {"model": "jkr", "gamma_s": 1.0, "alpha": 0.5},
        {"P": [0.25, 0.5, 1.0, 2.0, 4.0, 8.0]},
    ),
    "fig9d": _preset(
        "JKR, equal exponents: b versus e1 at gamma_s = 1",
        {"model": "jkr", "gamma_s": 1.0, "alpha": 0.5},
        {"e1": [0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0]},
    ),
    "fig10": _preset(
        "Hertz and JKR at alpha = 0.5 with traces",
        {"model": "jkr", "alpha": 0.5, "pressure_samples": 201, "displacement_samples": 200},
        {"gamma_s": [0.0, 1.0]},
    ),
    "fig11a": _preset(
        "JKR, alpha2 = alpha1/2: b versus gamma_s",
        {"model": "jkr", "alpha2_ratio": 0.5},
        {"alpha1": [0.5, 0.7, 0.9], "gamma_s": _GAMMAS},
    ),
    "fig11b": _preset(
        "JKR, alpha1 = 0.9, alpha2 = 0.5: pressure for gamma_s = 0, 1, 5",
        {"model": "jkr", "alpha1": 0.9, "alpha2": 0.5, "pressure_samples": 201},
        {"gamma_s": [0.0, 1.0, 5.0]},
    ),
    "jkr-0.5-0.25": _preset(
        "JKR reference point alpha1 = 0.5, alpha2 = 0.25, gamma_s = 1",
        {"model": "jkr", "alpha1": 0.5, "alpha2": 0.25, "gamma_s": 1.0, "eps": 1e-4},
    ),
}
for _a1 in (0.3, 0.7, 0.9):
    PRESETS[f"fig5-a1-{_a1}"] = _preset(
        f"alpha1 = {_a1}, alpha2 = 0.1 with pressure trace",
        {"alpha1": _a1, "alpha2": 0.1, "pressure_samples": 201},
    )
for _a2 in (0.9, 0.8, 0.1):
    PRESETS[f"fig6-a2-{_a2}"] = _preset(
        f"alpha1 = 0.95, alpha2 = {_a2} with pressure trace",
        {"alpha1": 0.95, "alpha2": _a2, "pressure_samples": 201},
    )
for _a1 in (0.5, 0.7, 0.9):
    PRESETS[f"fig7-a1-{_a1}"] = _preset(
        f"alpha1 = {_a1}, alpha2 = alpha1/2 with displacement traces",
        {"alpha1": _a1, "alpha2_ratio": 0.5, "displacement_samples": 200},
    )
PRESETS["jkr-ref"] = PRESETS["jkr-0.5-0.25"]


def load_config(path=None, preset=None, overrides=()):
    """Defaults, then a preset, then a file, then ``key=value`` overrides."""
    cfg = RunConfig(_base())
    sources = ["defaults"]
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        spec = PRESETS[preset]
        for k, v in spec["settings"].items():
            cfg.set(k, v)
        for k, v in spec["sweep"].items():
            cfg.set_axis(k, v)
        cfg.values["tag"] = preset
        sources.append(f"preset:{preset}")
    if path is not None:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        for section in parser.sections():
            for key, raw in parser.items(section):
                if section == "sweep":
                    cfg.set_axis(key, raw)
                elif section in DEFAULTS:
                    if key not in DEFAULTS[section]:
                        raise ConfigError(f"unknown setting {section}.{key}")
                    cfg.set(f"{section}.{key}", raw)
                else:
                    raise ConfigError(f"unknown section [{section}]")
        sources.append(f"file:{path}")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, raw = item.split("=", 1)
        cfg.set(key.strip(), raw.strip())
    cfg.source = "+".join(sources)
    if cfg.values["branch"] not in ("auto", "spectral"):
        raise ConfigError("numerics.branch must be 'auto' or 'spectral'")
    # fail early on physical ranges at every sweep point
    for pt in cfg.points():
        problem_from(pt)
    return cfg


def preset_text(name):
    """INI text equivalent to a preset."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}")
    spec = PRESETS[name]
    lines = [f"# {spec['description']}"]
    for section, keys in DEFAULTS.items():
        rows = [f"{k} = {v}" for k, v in spec["settings"].items() if k in keys]
        if rows:
            lines += [f"[{section}]"] + rows
    if spec["sweep"]:
        lines.append("[sweep]")
        lines += [f"{k} = {', '.join(map(str, v))}" for k, v in spec["sweep"].items()]
    return "\n".join(lines) + "\n"
