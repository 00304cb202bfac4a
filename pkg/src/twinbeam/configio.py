"""Key-value configuration files with repeatable sections.

The on-disk format is deliberately plain: `[section]` headers followed
by `key = value` lines, `#` or `;` comments, blank lines ignored.
Unlike configparser, repeated section names are preserved in order,
which profile files use for their `[segment]` blocks.

All frequencies in configuration files are plain frequencies in MHz
(or kHz where the key says so).  `angular_from_mhz` is the single
point where they are converted to angular frequencies for the model
layer; nothing else in the package multiplies by 2 pi.
"""

from __future__ import annotations

import math
from pathlib import Path

__all__ = [
    "ConfigError",
    "parse_sections",
    "load_sections",
    "section_float",
    "section_int",
    "angular_from_mhz",
    "mhz_from_angular",
]


class ConfigError(ValueError):
    """Malformed configuration content."""


def parse_sections(text: str) -> list[tuple[str, dict[str, str]]]:
    """Parse sectioned key-value text, keeping duplicate sections.

    Returns a list of (section_name, mapping) in file order.  Keys
    before any section header, duplicate keys within one section, and
    lines that are neither assignments nor headers are errors.
    """
    sections: list[tuple[str, dict[str, str]]] = []
    current: dict[str, str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise ConfigError(f"line {lineno}: empty section name")
            current = {}
            sections.append((name, current))
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if current is None:
            raise ConfigError(f"line {lineno}: assignment before any [section] header")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in current:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} in section")
        current[key] = value
    return sections


def load_sections(path) -> list[tuple[str, dict[str, str]]]:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"configuration file not found: {p}")
    return parse_sections(p.read_text())


def section_float(
    mapping: dict[str, str],
    section: str,
    key: str,
    default: float | None = None,
) -> float:
    """Fetch a float value, with errors that name the offending key."""
    if key not in mapping:
        if default is not None:
            return default
        raise ConfigError(f"section [{section}] is missing required key {key!r}")
    raw = mapping[key]
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(
            f"section [{section}], key {key!r}: cannot parse {raw!r} as a number"
        ) from None
    if not math.isfinite(value):
        raise ConfigError(f"section [{section}], key {key!r}: value must be finite")
    return value


def section_int(
    mapping: dict[str, str],
    section: str,
    key: str,
    default: int | None = None,
) -> int:
    if key not in mapping:
        if default is not None:
            return default
        raise ConfigError(f"section [{section}] is missing required key {key!r}")
    raw = mapping[key]
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(
            f"section [{section}], key {key!r}: cannot parse {raw!r} as an integer"
        ) from None


def angular_from_mhz(value_mhz: float) -> float:
    """MHz -> rad/s; the only frequency-unit conversion in the package."""
    return 2.0 * math.pi * value_mhz * 1e6


def mhz_from_angular(value: float) -> float:
    return value / (2.0 * math.pi * 1e6)
