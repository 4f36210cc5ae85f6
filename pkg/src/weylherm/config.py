"""Sectioned key-value run files.

A config may start from a preset and override it key by key::

    [scenario]
    preset = quartic
    desk = true

    [model]
    hbar = 0.01

    [output]
    snapshot_times = 0, 10, 50

Unknown sections or keys are rejected with their line number.
"""
import configparser
import inspect
import os
from dataclasses import replace

from .dynamics import StepperConfig
from .potentials import PRESETS
from .scenario import ConfigError, OutputPlan, Scenario
from .states import InitialState, PRESET_NAMES, get_preset


class ConfigParseError(ConfigError):
    """Syntax error or unknown key in a config file."""

    def __init__(self, message, line=None, field=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(field, message)
        self.line = line


def _flag(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _float_list(text):
    return tuple(float(v) for v in text.replace(",", " ").split())


def _opt_int(text):
    return None if text.strip().lower() in ("", "none", "auto") else int(text)


# section -> key -> (target, converter); target is "scenario", "initial",
# "stepper" or "output" followed by the attribute name
_SCHEMA = {
    "scenario": {"preset": None, "desk": None, "name": ("scenario", "name", str)},
    "grid": {
        "a": ("scenario", "a", float),
        "b": ("scenario", "b", float),
        "nx": ("scenario", "nx", int),
        "boundary": ("scenario", "boundary", str),
    },
    "hermite": {
        "n_max": ("scenario", "n_max", int),
        "quadrature_order": ("scenario", "quadrature_order", _opt_int),
    },
    "model": {
        "hbar": ("scenario", "hbar", float),
        "potential": ("scenario", "potential", str),
        "coupling": ("scenario", "coupling", str),
    },
    "time": {
        "dt": ("scenario", "dt", float),
        "t_final": ("scenario", "t_final", float),
    },
    "initial": {
        "x0": ("initial", "x0", float),
        "sigma_x": ("initial", "sigma_x", float),
        "p0": ("initial", "p0", float),
        "amplitude": ("initial", "amplitude", float),
        "normalization": ("initial", "normalization", str),
    },
    "solver": {
        "krylov_tol": ("stepper", "tol", float),
        "krylov_restart": ("stepper", "restart", int),
        "krylov_max_iter": ("stepper", "max_iter", int),
        "enforce_parity": ("stepper", "enforce_parity", _flag),
    },
    "output": {
        "interval": ("output", "interval", float),
        "snapshot_times": ("output", "snapshot_times", _float_list),
        "xi_min": ("output", "xi_min", float),
        "xi_max": ("output", "xi_max", float),
        "xi_count": ("output", "xi_count", int),
        "out_dir": ("output", "out_dir", str),
    },
    # free-form: validated against the potential factory signature
    "potential": None,
}

_BASE = dict(name="custom", a=-8.0, b=8.0, nx=200, n_max=20, hbar=1.0, dt=0.01, t_final=1.0)


class _LineTracker(configparser.ConfigParser):
    """ConfigParser that remembers where each option was defined."""

    def __init__(self):
        super().__init__(interpolation=None, strict=True, empty_lines_in_values=False)
        self.optionxform = str
        self.lines = {}

    def _read(self, fp, fpname):
        lines = list(fp)
        section = None
        for no, raw in enumerate(lines, start=1):
            s = raw.strip()
            if s.startswith("[") and s.endswith("]"):
                section = s[1:-1].strip()
            elif s and s[0] not in "#;" and section is not None and ("=" in s or ":" in s):
                key = s.split("=", 1)[0] if "=" in s else s.split(":", 1)[0]
                self.lines.setdefault((section, key.strip()), no)
            elif s and s[0] not in "#;" and section is None:
                self.lines.setdefault((None, None), no)
        return super()._read(iter(lines), fpname)


def _read_file(path):
    parser = _LineTracker()
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=os.fspath(path))
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigParseError("key outside any [section]", exc.lineno) from None
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigParseError("cannot parse line", line) from None
    except (configparser.DuplicateOptionError, configparser.DuplicateSectionError) as exc:
        raise ConfigParseError(str(exc).split(": ", 1)[-1], getattr(exc, "lineno", None)) from None
    return parser


def parse_config(source, desk=False):
    """Build a validated :class:`Scenario` from a preset name or a config file path."""
    source = os.fspath(source)
    if source in PRESET_NAMES:
        return get_preset(source, desk=desk)
    if not os.path.exists(source):
        raise ConfigError("config", f"no such preset or file: {source!r}")
    parser = _read_file(source)
    return scenario_from_parser(parser, desk)


def scenario_from_parser(parser, desk=False):
    lines = getattr(parser, "lines", {})

    def where(section, key=None):
        return lines.get((section, key))

    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigParseError(f"unknown section [{section}]", None, section)
        schema = _SCHEMA[section]
        if schema is None:
            continue
        for key in parser[section]:
            if key not in schema:
                raise ConfigParseError(f"unknown key {key!r} in [{section}]",
                                       where(section, key), key)

    def convert(section, key, fn):
        text = parser[section][key]
        try:
            return fn(text)
        except ValueError as exc:
            raise ConfigParseError(f"bad value for {key}: {exc}", where(section, key), key) from None

    use_desk = desk
    base = None
    if parser.has_section("scenario"):
        sec = parser["scenario"]
        if "desk" in sec:
            use_desk = convert("scenario", "desk", _flag)
        if "preset" in sec:
            name = sec["preset"].strip()
            if name not in PRESET_NAMES:
                raise ConfigParseError(f"unknown preset {name!r}", where("scenario", "preset"), "preset")
            base = get_preset(name, desk=use_desk)

    groups = {"scenario": {}, "initial": {}, "stepper": {}, "output": {}}
    for section, schema in _SCHEMA.items():
        if not schema or not parser.has_section(section):
            continue
        for key, target in schema.items():
            if target is None or key not in parser[section]:
                continue
            group, attr, fn = target
            groups[group][attr] = convert(section, key, fn)

    if base is None:
        kw = dict(_BASE)
        kw.update(groups["scenario"])
        kw["initial"] = InitialState(**groups["initial"])
        kw["stepper"] = StepperConfig(**groups["stepper"])
        kw["output"] = OutputPlan(**groups["output"])
        kw["potential_params"] = _potential_params(parser, kw["potential"] if "potential" in kw
                                                   else "harmonic", where)
        make = lambda: Scenario(**kw)  # noqa: E731
    else:
        def make():
            pot = groups["scenario"].get("potential", base.potential)
            params = dict(base.potential_params) if pot == base.potential else {}
            params.update(_potential_params(parser, pot, where))
            return base.replace(
                potential_params=params,
                initial=replace(base.initial, **groups["initial"]),
                stepper=replace(base.stepper, **groups["stepper"]),
                output=replace(base.output, **groups["output"]),
                **groups["scenario"])

    try:
        return make()
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(None, str(exc)) from None


def _potential_params(parser, potential, where):
    if not parser.has_section("potential"):
        return {}
    factory = PRESETS.get(potential)
    if factory is None:
        raise ConfigError("potential", f"potential must be one of {', '.join(PRESETS)}")
    allowed = inspect.signature(factory).parameters
    params = {}
    for key, text in parser["potential"].items():
        if key not in allowed:
            raise ConfigParseError(f"potential {potential!r} has no parameter {key!r}",
                                   where("potential", key), key)
        try:
            params[key] = float(text)
        except ValueError:
            raise ConfigParseError(f"bad value for {key}: {text!r}", where("potential", key), key) from None
    return params
