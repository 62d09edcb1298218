"""Solver / morphology parameters and the flat ``key=value`` config format."""
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path


class ConfigError(ValueError):
    """Bad, missing or unknown configuration key."""


@dataclass(frozen=True)
class SolverConfig:
    """Decomposition parameters.

    Defaults are the values shared by every database in the published
    training tables plus the FVC2000 DB1 pair ``C = 0.045``, ``beta2 = 5e-4``.
    """

    mu1: float = 1.0
    C: float = 0.045
    beta1: float = 1e-3
    beta2: float = 5e-4
    beta3: float = 1e-3
    gamma: float = 1e-3
    iterations: int = 20
    alpha: float = 0.7
    scales: int = 5
    angles_scale2: int = 16
    pad: int = 15

    def __post_init__(self):
        for name in ("mu1", "C", "beta1", "beta2", "beta3", "gamma"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.iterations < 0:
            raise ConfigError("iterations must be nonnegative")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.scales < 2:
            raise ConfigError("scales must be >= 2")
        if self.angles_scale2 < 4 or self.angles_scale2 % 4:
            raise ConfigError("angles_scale2 must be a positive multiple of 4")
        if self.pad < 0:
            raise ConfigError("pad must be nonnegative")


@dataclass(frozen=True)
class MorphologyConfig:
    s: int = 9
    t: int = 5
    b: int = 6
    max_smoothing_passes: int = 10

    def __post_init__(self):
        if self.s < 1 or self.s % 2 == 0:
            raise ConfigError(f"s must be a positive odd integer, got {self.s}")
        if self.t < 0:
            raise ConfigError("t must be nonnegative")
        if not 0 <= self.b <= 8:
            raise ConfigError(f"b must lie in [0, 8], got {self.b}")
        if self.max_smoothing_passes < 1:
            raise ConfigError("max_smoothing_passes must be positive")


SOLVER_KEYS = tuple(f.name for f in fields(SolverConfig))
MORPH_KEYS = ("s", "t", "b")
REQUIRED_KEYS = SOLVER_KEYS + MORPH_KEYS
OPTIONAL_KEYS = ("max_smoothing_passes",)

_TYPES = {f.name: f.type for f in fields(SolverConfig)}
_TYPES.update({f.name: f.type for f in fields(MorphologyConfig)})


def _coerce(key, raw):
    kind = _TYPES[key]
    kind = {"float": float, "int": int}.get(kind, kind)
    try:
        if kind is int:
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as {kind.__name__}") from None


def parse_assignments(lines, source="<config>"):
    values = {}
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {line.strip()!r}")
        key, raw = (part.strip() for part in text.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = _coerce(key, raw)
    return values


def build_configs(values, require_all=True):
    if require_all:
        missing = [k for k in REQUIRED_KEYS if k not in values]
        if missing:
            raise ConfigError("missing config key(s): " + ", ".join(missing))
    solver = SolverConfig(**{k: values[k] for k in SOLVER_KEYS if k in values})
    morph = MorphologyConfig(
        **{k: values[k] for k in MORPH_KEYS + OPTIONAL_KEYS if k in values}
    )
    return solver, morph


def load_config(path, overrides=()):
    """Read a config file; ``overrides`` are extra ``key=value`` strings applied last."""
    path = Path(path)
    values = parse_assignments(path.read_text(encoding="utf-8").splitlines(), str(path))
    extra = parse_assignments(overrides, "--set")
    values.update(extra)
    return build_configs(values)


def apply_overrides(solver, morph, overrides):
    extra = parse_assignments(overrides, "--set")
    solver = replace(solver, **{k: v for k, v in extra.items() if k in SOLVER_KEYS})
    morph = replace(morph, **{k: v for k, v in extra.items() if k not in SOLVER_KEYS})
    return solver, morph


def format_config(solver, morph=None):
    items = asdict(solver)
    if morph is not None:
        items.update(asdict(morph))
    return "".join(f"{k}={v!r}\n" for k, v in items.items())


def save_config(path, solver, morph=None):
    Path(path).write_text(format_config(solver, morph), encoding="utf-8")
