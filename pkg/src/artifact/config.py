"""Run-wide settings: enumeration caps, LP limits, search budget, seed."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

DEFAULT_CAP = 10**6
DEFAULT_NODE_BUDGET = 10**7
DEFAULT_SEED = 20240611
FULL_THRESHOLD = 10**5


class CapExceeded(RuntimeError):
    """An operation would enumerate more objects than the configured cap."""


def check_cap(count: int, cap: int | None, what: str) -> None:
    limit = DEFAULT_CAP if cap is None else cap
    if count > limit:
        raise CapExceeded(f"{what}: {count} exceeds cap {limit}")


@dataclass(frozen=True)
class RunConfig:
    enum_cap: int = DEFAULT_CAP
    lp_nonzeros: int = 5 * 10**7
    node_budget: int = DEFAULT_NODE_BUDGET
    output_dir: str = "."
    report_format: str = "text"
    seed: int = DEFAULT_SEED
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("enum_cap", "lp_nonzeros", "node_budget"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.report_format not in ("text", "structured"):
            raise ValueError(f"unknown report format {self.report_format!r}")

    @classmethod
    def from_env(cls, **overrides) -> "RunConfig":
        """Defaults, then ARTIFACT_* environment variables, then explicit overrides."""
        env = {
            "enum_cap": "ARTIFACT_ENUM_CAP",
            "lp_nonzeros": "ARTIFACT_LP_NONZEROS",
            "node_budget": "ARTIFACT_NODE_BUDGET",
            "seed": "ARTIFACT_SEED",
        }
        values = {}
        for key, var in env.items():
            if var in os.environ:
                values[key] = int(os.environ[var])
        values.update({k: v for k, v in overrides.items() if v is not None})
        return replace(cls(), **values)
