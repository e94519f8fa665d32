"""Experiment configuration: flat dotted key=value files with a fixed schema.

Format: one ``section.key = value`` per line, ``#`` comments, blank lines
ignored.  Values are numbers, booleans (true/false), bare strings, or
comma-separated lists.  Unknown keys are hard errors — a typo must never
silently fall back to a default.
"""
from __future__ import annotations

from typing import Any

from .errors import ConfigurationError

# key -> (type, default).  Types: int, float, str, bool, float_list, int_list.
SCHEMA: dict[str, tuple[str, Any]] = {
    "lattice.n_sites": ("int", 4),
    "lattice.spacing": ("float", 1.0),
    "lattice.flavors": ("int", 1),
    "lattice.gauss_convention": ("str", "staggered"),
    "gauge.kind": ("str", "integrated"),
    "gauge.cutoff": ("int", 2),
    "gauge.spin": ("float", 0.5),
    "gauge.theta": ("float", 0.0),
    "model.kind": ("str", "integrated"),
    "model.zero_mode": ("str", "none"),
    "model.zero_mode_window": ("int", 4),
    "model.link_rescale": ("float", 1.0),
    "couplings.e_l": ("float", 1.0),
    "couplings.t": ("float", 1.0),
    "couplings.m": ("float", 0.0),
    "couplings.t_f": ("float", 0.0),
    "couplings.t_b": ("float", 0.0),
    "couplings.u": ("float", 0.0),
    "couplings.gamma": ("float", 0.0),
    "couplings.g": ("float", 0.0),
    "couplings.v_f": ("float_list", []),
    "couplings.v_b1": ("float_list", []),
    "couplings.v_b2": ("float_list", []),
    "sector.fermions": ("int_list", []),
    "solver.k": ("int", 1),
    "solver.tol": ("float", 1e-10),
    "solver.max_iter": ("int", 2000),
    "solver.seed": ("int", 0),
    "gap.sizes": ("int_list", [8, 10, 12, 14, 16]),
    "gap.cluster_tol": ("float", 1e-6),
    "gap.k": ("int", 8),
    "condensate.masses": ("float_list", [0.6, 0.3, 0.15]),
    "condensate.sizes": ("int_list", [8, 12, 16]),
    "penalty.gammas": ("float_list", [10.0, 20.0, 40.0, 80.0, 160.0]),
    "qlm.s_list": ("float_list", [0.5, 1.0, 1.5, 2.0]),
    "qlm.reference_cutoff": ("int", 4),
    "qlm.rescale": ("bool", True),
    "strong.t_values": ("float_list", [0.3, 0.1, 0.02]),
}

_VALID_CHOICES = {
    "lattice.gauss_convention": {"staggered", "uniform_half"},
    "gauge.kind": {"integrated", "truncated_integer", "quantum_link", "schwinger_boson"},
    "model.kind": {"full", "integrated", "spin", "schwinger_boson", "penalty"},
    "model.zero_mode": {"none", "rotor"},
}


def _coerce(key: str, raw: Any, kind: str) -> Any:
    try:
        if kind == "int":
            if isinstance(raw, bool):
                raise ValueError
            if isinstance(raw, str):
                raw = raw.strip()
            value = int(raw)
            if isinstance(raw, float) and raw != value:
                raise ValueError
            return value
        if kind == "float":
            return float(raw)
        if kind == "bool":
            if isinstance(raw, bool):
                return raw
            text = str(raw).strip().lower()
            if text in ("true", "1", "yes"):
                return True
            if text in ("false", "0", "no"):
                return False
            raise ValueError
        if kind == "str":
            return str(raw).strip()
        if kind in ("float_list", "int_list"):
            if isinstance(raw, str):
                raw = raw.strip().strip("[]")
                items = [p.strip() for p in raw.split(",") if p.strip()]
            elif isinstance(raw, (list, tuple)):
                items = list(raw)
            else:
                items = [raw]
            elem = int if kind == "int_list" else float
            return [elem(float(p)) for p in items]
    except (TypeError, ValueError):
        pass
    raise ConfigurationError(f"invalid value for {key}: {raw!r} (expected {kind})", field=key)


def normalize_config(entries: dict[str, Any]) -> dict[str, Any]:
    """Validate a flat dict against the schema and merge defaults."""
    config = {key: default for key, (_, default) in SCHEMA.items()}
    for key, raw in entries.items():
        if key not in SCHEMA:
            raise ConfigurationError(f"unknown configuration key: {key}", field=key)
        config[key] = _coerce(key, raw, SCHEMA[key][0])
    for key, choices in _VALID_CHOICES.items():
        if config[key] not in choices:
            raise ConfigurationError(
                f"{key} must be one of {sorted(choices)}, got {config[key]!r}", field=key
            )
    return config


def parse_config_text(text: str) -> dict[str, Any]:
    """Parse the flat key=value format into a raw (unvalidated) dict."""
    entries: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigurationError(
                f"line {lineno}: expected 'key = value', got {line!r}"
            )
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key in entries:
            raise ConfigurationError(f"line {lineno}: duplicate key {key}", field=key)
        entries[key] = value.strip()
    return entries


def load_config(path: str) -> dict[str, Any]:
    """Read, parse, and validate a config file."""
    with open(path, "r", encoding="utf-8") as fh:
        return normalize_config(parse_config_text(fh.read()))


def format_config(config: dict[str, Any]) -> str:
    """Echo the effective configuration, deterministically ordered."""
    lines = []
    for key in SCHEMA:
        value = config[key]
        if isinstance(value, list):
            value = ",".join(repr(v) for v in value)
        lines.append(f"{key} = {value}")
    return "\n".join(lines)
