"""Analysis configuration with sensible defaults.

Precedence (lowest to highest): built-in defaults, config file, environment
variables, command-line flags.  The CLI layers the last three; this module
only defines the record and the solver autodetection.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass, replace
from typing import Optional

from .qnum import Q, QNum

DEFAULT_TIMEOUT_S = 60.0
DEFAULT_STEPS = 64
DEFAULT_STARTS = 8
DEFAULT_DENOMINATOR_BOUND = 10 ** 6
DEFAULT_BOX_RADIUS = 1024

_KNOWN_SOLVERS = (
    ("z3", ("-in",)),
    ("cvc5", ("--lang", "smt2",)),
)


@dataclass(frozen=True)
class Config:
    solver_argv: Optional[tuple] = None  # None = autodetect
    timeout_s: float = DEFAULT_TIMEOUT_S
    steps: int = DEFAULT_STEPS
    seed: int = 0
    jobs: int = 1
    denominator_bound: int = DEFAULT_DENOMINATOR_BOUND
    output_format: str = "human"  # "human" | "json"
    smt_enabled: bool = True
    heuristics_enabled: bool = True
    num_starts: int = DEFAULT_STARTS
    box_radius: int = DEFAULT_BOX_RADIUS

    def resolved_solver(self) -> Optional[tuple]:
        """Configured argv, or the first known solver on PATH."""
        if self.solver_argv is not None:
            return tuple(self.solver_argv) or None
        for binary, args in _KNOWN_SOLVERS:
            path = shutil.which(binary)
            if path:
                return (path,) + args
        return None


def with_overrides(cfg: Config, **kwargs) -> Config:
    return replace(cfg, **{k: v for k, v in kwargs.items() if v is not None})
