"""Analysis outcomes shared by the deciders and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .certificates import RunTrace, Witness

FIXED_POINT = "fixed_point"
CONE_ENUMERATION_1D = "cone_enumeration_1d"
HEURISTIC = "heuristic"
SMT_MODEL = "smt_model"
SOLVER_UNSAT = "solver_unsat"
EMPTY_RELATION = "empty_relation"


@dataclass(frozen=True)
class NonTerminating:
    """Carries an exactly verified witness plus a checked finite run prefix."""

    witness: Witness
    run: RunTrace
    method: str = HEURISTIC


@dataclass(frozen=True)
class Terminating:
    method: str  # CONE_ENUMERATION_1D or SOLVER_UNSAT
    artifacts: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Unknown:
    reason: str


Verdict = Union[NonTerminating, Terminating, Unknown]
