"""Run configuration: defaults plus a line-oriented ``key = value`` file.

The file format is deliberately small: one assignment per line, ``#`` starts
a comment, blank lines are skipped.  Unknown keys are errors rather than
silently ignored, since a typo in a tolerance would otherwise weaken a run.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .errors import ConfigurationError
from .qseries import TruncationPolicy
from .sampling import SafeBox


@dataclass(frozen=True)
class Config:
    """Suite-level knobs; None means "use the per-scenario default"."""

    seed: int = 42
    count: int | None = None
    tol: float | None = None
    grid: int | None = None
    timing: bool = False
    tail_tol: float = 1e-13
    max_terms: int = 512
    nome_max: float = 0.2
    t_min: float = 0.3
    t_max: float = 0.5
    a_min: float = 0.15
    a_max: float = 0.7
    pole_clearance: float = 0.1
    solved_clearance: float = 0.25
    theta_floor: float = 1e-10
    max_rejections: int = 20000

    def policy(self) -> TruncationPolicy:
        return TruncationPolicy(tail_tol=self.tail_tol, max_terms=self.max_terms)

    def box(self) -> SafeBox:
        return SafeBox(
            nome_max=self.nome_max,
            t_min=self.t_min,
            t_max=self.t_max,
            a_min=self.a_min,
            a_max=self.a_max,
            pole_clearance=self.pole_clearance,
            solved_clearance=self.solved_clearance,
            theta_floor=self.theta_floor,
            max_rejections=self.max_rejections,
        )


_OPTIONAL_INT = ("count", "grid")
_OPTIONAL_FLOAT = ("tol",)


def _parse_value(key: str, raw: str):
    field_types = {f.name: f.type for f in fields(Config)}
    if key not in field_types:
        raise ConfigurationError(f"unknown config key {key!r}")
    if raw.lower() in ("none", "default") and key in _OPTIONAL_INT + _OPTIONAL_FLOAT:
        return None
    if key == "timing":
        if raw.lower() in ("on", "true", "1", "yes"):
            return True
        if raw.lower() in ("off", "false", "0", "no"):
            return False
        raise ConfigurationError(f"timing must be on/off, got {raw!r}")
    if key in ("seed", "max_terms", "max_rejections") + _OPTIONAL_INT:
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigurationError(f"{key} expects an integer, got {raw!r}") from exc
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigurationError(f"{key} expects a number, got {raw!r}") from exc


def parse_config(text: str, base: Config | None = None) -> Config:
    """Apply ``key = value`` lines from ``text`` on top of ``base``."""
    cfg = base if base is not None else Config()
    updates = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigurationError(
                f"line {lineno}: expected 'key = value', got {line.rstrip()!r}"
            )
        key, raw = (part.strip() for part in stripped.split("=", 1))
        updates[key] = _parse_value(key, raw)
    return replace(cfg, **updates)


def load_config(path: str, base: Config | None = None) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text, base)
