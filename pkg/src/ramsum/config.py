"""Truncation settings and the run manifest written ahead of every CSV."""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

from . import __version__


@dataclass(frozen=True)
class TruncationConfig:
    """Every truncation knob in one place.

    ``t_cut=None`` lets the vertical-line integrals pick their own cut from
    the exponential tail bound.
    """

    zero_pairs: int = 100
    series_tol: float = 1e-16
    q_cutoff: int = 10_000
    quad_step: float = 0.25
    t_cut: float | None = None
    quad_tol: float = 1e-9

    def __post_init__(self) -> None:
        for name in ("zero_pairs", "series_tol", "q_cutoff", "quad_step", "quad_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.t_cut is not None and not self.t_cut > 0:
            raise ValueError(f"t_cut must be positive, got {self.t_cut!r}")

    def check_table(self, size: int) -> None:
        if self.zero_pairs > size:
            raise ValueError(f"zero_pairs={self.zero_pairs} exceeds the table size {size}")


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict[str, object]
    table_source: str = "-"
    table_count: int = 0
    version: str = __version__
    timestamp: str = field(
        default_factory=lambda: _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"))

    def header_lines(self) -> list[str]:
        """Comment lines for the CSV preamble; only the timestamp line varies between runs."""
        params = " ".join(f"{k}={v}" for k, v in self.parameters.items())
        return [
            f"# ramsum {self.version}",
            f"# subcommand: {self.subcommand}",
            f"# parameters: {params}",
            f"# zero_table: {self.table_source} ({self.table_count} zeros)",
            f"# timestamp: {self.timestamp}",
        ]
