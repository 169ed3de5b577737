"""Flat ``key = value`` run configuration with ``#`` comments."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .coins import LAMBDA_ONE_MESSAGE, ModelParams, ParameterError, Variant

EXPERIMENTS = ("check", "evolve", "dispersion", "doubling", "slope", "sweep", "figure1", "figure-supplemental")


class ConfigError(ValueError):
    pass


def _float_list(text: str) -> list[float]:
    items = [t for t in text.replace(",", " ").split() if t]
    if not items:
        raise ValueError("empty list")
    return [float(t) for t in items]


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def _bool(text: str) -> bool:
    t = text.lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}")
        return text
    return parse


# key: (parser, default, help)
CONFIG_KEYS: dict[str, tuple] = {
    "experiment": (_choice(*EXPERIMENTS), None, "required; one of " + ", ".join(EXPERIMENTS)),
    "epsilon": (float, 0.1, "time step = lattice spacing (ballistic scaling)"),
    "mass": (float, 1.0, "Dirac mass m >= 0 (alias: m)"),
    "r": (float, 1.0, "Wilson parameter, any real"),
    "rho": (float, 0.6, "Wilson exponent, > 0; warnings outside ]0.5, 1["),
    "lambda": (int, 0, "Wilson matrix index, 0 or 2 (1 breaks unitarity)"),
    "variant": (_choice("WilsonLambda", "MassiveQ0"), "WilsonLambda", "coin family"),
    "model": (_choice("dqw", "lgt", "lgt-noncrossed", "naive", "dirac"), "dqw", "model for dispersion/doubling/slope"),
    "rep": (_choice("pauli", "random", "file"), "pauli", "representation source"),
    "rep_file": (str, None, "matrix text file, used when rep = file"),
    "seed": (int, 0, "seed for random representations and random states"),
    "sites": (int, 128, "lattice sites N >= 3"),
    "grid_points": (int, 1001, "odd number of Brillouin-zone samples (>= 101)"),
    "steps": (int, 100, "number of evolution steps"),
    "scheme": (_choice("one-step", "two-step"), "one-step", "evolution scheme (two-step seeded with U psi0)"),
    "k0_fraction": (float, 0.5, "packet centre momentum in units of pi/epsilon"),
    "packet_width": (float, 10.0, "packet momentum standard deviation in lattice momenta"),
    "branch": (_choice("plus", "minus"), "plus", "eigenbranch of the packet"),
    "epsilons": (_float_list, [0.1, 0.03, 0.01, 0.003], "decreasing epsilon sweep for slope/doubling"),
    "sweep_epsilons": (_float_list, [1.0, 0.1, 0.01], "unitarity sweep: epsilons"),
    "sweep_masses": (_float_list, [0.0, 0.5, 1.0], "unitarity sweep: masses"),
    "sweep_r": (_float_list, [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0], "unitarity sweep: Wilson parameters"),
    "sweep_rho": (_float_list, [0.3, 0.6, 0.9], "unitarity sweep: rho values"),
    "sweep_lambdas": (_int_list, [0, 2], "unitarity sweep: lambda values"),
    "sweep_reps": (int, 5, "unitarity sweep: number of Haar-random representations"),
    "output_dir": (str, "out", "directory for CSVs, reports and manifest"),
    "tol": (float, 1e-12, "tolerance for exact algebraic identities"),
    "norm_tol": (float, 1e-10, "tolerance on norm drift during evolution"),
    "plot_script": (_bool, False, "also write a matplotlib script for figure experiments"),
}
ALIASES = {"m": "mass", "wilson_r": "r", "lam": "lambda", "N": "sites"}


@dataclass
class RunConfig:
    experiment: str
    params: ModelParams
    values: dict = field(default_factory=dict)
    source: Optional[Path] = None
    explicit: frozenset = frozenset()

    def __getitem__(self, key):
        return self.values[key]

    @property
    def output_dir(self) -> Path:
        return Path(self.values["output_dir"])


def config_help() -> str:
    width = max(len(k) for k in CONFIG_KEYS)
    lines = ["config keys (key = value, '#' starts a comment):"]
    for key, (_, default, text) in CONFIG_KEYS.items():
        d = "" if default is None else f" [default: {default}]"
        lines.append(f"  {key.ljust(width)}  {text}{d}")
    return "\n".join(lines)


def parse_config_text(text: str, source: str = "<config>", base_dir: Optional[Path] = None) -> RunConfig:
    values: dict = {}
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = ALIASES.get(key, key)
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r} (first set on line {lines[key]})")
        parser = CONFIG_KEYS[key][0]
        try:
            values[key] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
        lines[key] = lineno

    def fail(key, msg):
        where = f"{source}:{lines[key]}" if key in lines else source
        raise ConfigError(f"{where}: {msg}")

    if "experiment" not in values:
        raise ConfigError(f"{source}: experiment missing")
    for key, (_, default, _) in CONFIG_KEYS.items():
        values.setdefault(key, default)

    if values["lambda"] == 1:
        fail("lambda", LAMBDA_ONE_MESSAGE)
    if values["lambda"] not in (0, 2):
        fail("lambda", "lambda must be 0 or 2")
    if not values["rho"] > 0:
        fail("rho", f"rho must be > 0, got {values['rho']}")
    if values["sites"] < 3:
        fail("sites", "sites must be >= 3")
    if values["grid_points"] < 101 or values["grid_points"] % 2 == 0:
        fail("grid_points", "grid_points must be odd and >= 101")
    if values["steps"] < 0:
        fail("steps", "steps must be >= 0")
    if any(l not in (0, 2) for l in values["sweep_lambdas"]):
        fail("sweep_lambdas", "sweep lambdas must be 0 or 2 (lambda = 1 breaks unitarity)")
    if any(not x > 0 for x in values["sweep_rho"]):
        fail("sweep_rho", "sweep rho values must be > 0")
    if values["rep"] == "file":
        if values["rep_file"] is None:
            fail("rep", "rep = file needs rep_file")
        path = Path(values["rep_file"])
        if not path.is_absolute() and base_dir is not None:
            path = base_dir / path
        if not path.exists():
            fail("rep_file", f"representation file {str(path)!r} does not exist")
        values["rep_file"] = str(path)
    try:
        params = ModelParams(values["epsilon"], values["mass"], values["r"], values["rho"],
                             values["lambda"], Variant(values["variant"]))
    except ParameterError as exc:
        raise ConfigError(f"{source}: {exc}") from None
    return RunConfig(values["experiment"], params, values, Path(source) if source != "<config>" else None,
                     frozenset(lines))


def parse_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text, str(path), path.parent)
