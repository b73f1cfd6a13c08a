"""Value types for the multi-round consensus process.

Statistics are exact rationals (fractions.Fraction) so that consensus
verdicts never hinge on float rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

CONSENSUS = "consensus"
NO_CONSENSUS = "no_consensus"

ROUND_OPEN = "open"
ROUND_CLOSED = "closed"

DEFAULT_SCALE_MAX = 9

# panel mix used by the observatory-style validation workshops
STANDARD_CATEGORIES = (
    "policy maker",
    "researcher",
    "science museum",
    "school",
    "citizen",
)


@dataclass(frozen=True)
class Panelist:
    id: str
    category: str

    def __post_init__(self):
        if not self.category or not self.category.strip():
            raise ValueError("panelist category must be non-empty")


@dataclass(frozen=True)
class StatementStats:
    n: int
    median: Fraction
    q1: Fraction
    q3: Fraction
    iqr: Fraction
    agreement_ratio: Fraction
    verdict: str  # "consensus" | "no_consensus"


@dataclass(frozen=True)
class Feedback:
    """What panelists see about a carried-forward statement: the previous
    round's aggregate plus comments with authorship stripped."""

    stats: StatementStats
    comments: tuple[str, ...]


@dataclass(frozen=True)
class Statement:
    id: str
    text: str
    feedback: Feedback | None = None


@dataclass(frozen=True)
class Response:
    rating: int
    comment: str | None = None
    revision: int = 0


@dataclass(frozen=True)
class Round:
    id: str
    statements: tuple[Statement, ...]
    panel: tuple[Panelist, ...]
    scale_max: int = DEFAULT_SCALE_MAX
    responses: Mapping[tuple[str, str], Response] = field(default_factory=dict)
    status: str = ROUND_OPEN

    def statement(self, statement_id: str) -> Statement | None:
        for s in self.statements:
            if s.id == statement_id:
                return s
        return None

    def panelist_ids(self) -> frozenset[str]:
        return frozenset(p.id for p in self.panel)


@dataclass(frozen=True)
class OfflineStep:
    """Opaque off-line activity; only its description and completion stamp
    are recorded."""

    description: str
    completed_at: int


@dataclass(frozen=True)
class RoundStep:
    round: Round
    stats: Mapping[str, StatementStats] | None = None


Step = Union[OfflineStep, RoundStep]

PENDING = "pending"
ACTIVE = "active"
COMPLETE = "complete"


@dataclass(frozen=True)
class DelphiProcess:
    id: str
    title: str
    panel: tuple[Panelist, ...]
    steps: tuple[Step, ...] = ()
    complete: bool = False

    @property
    def status(self) -> str:
        if self.complete:
            return COMPLETE
        return ACTIVE if self.steps else PENDING

    def rounds(self) -> list[RoundStep]:
        return [s for s in self.steps if isinstance(s, RoundStep)]

    def current_round_step(self) -> RoundStep | None:
        rounds = self.rounds()
        return rounds[-1] if rounds else None
