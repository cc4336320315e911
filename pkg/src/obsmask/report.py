"""Deterministic key-value run reports shared by the library and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import __version__


def format_value(value) -> str:
    """Render a report value; floats use 12 significant digits.

    Magnitudes below 1e-12 print as 0 so residuals that vanish by
    construction read as exact zeros.
    """
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if abs(x) < 1e-12:
            x = 0.0
        return f"{x:.12g}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return " ".join(format_value(v) for v in np.asarray(value).reshape(-1))
    return str(value)


@dataclass
class RunReport:
    """Ordered key-value lines with a version stamp; rendering is
    byte-deterministic for identical inputs."""

    entries: list = field(default_factory=list)
    version: str = __version__

    def add(self, key: str, value) -> "RunReport":
        self.entries.append((key, value))
        return self

    def get(self, key: str):
        for k, v in self.entries:
            if k == key:
                return v
        raise KeyError(key)

    def render(self) -> str:
        lines = [f"version: {self.version}"]
        lines.extend(f"{k}: {format_value(v)}" for k, v in self.entries)
        return "\n".join(lines) + "\n"
