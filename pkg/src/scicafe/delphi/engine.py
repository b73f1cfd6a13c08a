"""Delphi round lifecycle: open, collect ratings, aggregate, carry forward.

Aggregation method (fixed):
  - median and quartiles by median-of-halves; for odd n the middle element
    is excluded from both halves (Tukey-hinge style, no interpolation)
  - agreement ratio = share of ratings within +/-1 of the median
  - consensus verdict = iqr <= 2 and agreement >= 0.7

All functions are pure: they return new values and never mutate arguments.
"""

from __future__ import annotations

import csv
import io
from dataclasses import replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from scicafe.delphi.errors import (
    EmptyPanel,
    EmptyStatements,
    NotEnrolled,
    NothingToCarry,
    ProcessIncomplete,
    RatingOutOfRange,
    RoundClosed,
    RoundStillOpen,
    StepOrderViolation,
    UnknownStatement,
    UnratedStatement,
)
from scicafe.delphi.model import (
    CONSENSUS,
    DEFAULT_SCALE_MAX,
    DelphiProcess,
    Feedback,
    NO_CONSENSUS,
    OfflineStep,
    Panelist,
    Response,
    Round,
    ROUND_CLOSED,
    ROUND_OPEN,
    RoundStep,
    Statement,
    StatementStats,
)

CONSENSUS_MAX_IQR = Fraction(2)
CONSENSUS_MIN_AGREEMENT = Fraction(7, 10)

CSV_HEADER = ("statement", "n", "median", "iqr", "agreement", "verdict")


def new_process(process_id: str, title: str, panel: Sequence[Panelist]) -> DelphiProcess:
    return DelphiProcess(id=process_id, title=title, panel=tuple(panel))


def record_offline_step(
    process: DelphiProcess, description: str, completed_at: int
) -> DelphiProcess:
    """Log a finished off-line activity as the next step."""
    _require_previous_step_complete(process)
    step = OfflineStep(description=description, completed_at=completed_at)
    return replace(process, steps=process.steps + (step,))


def open_round(
    process: DelphiProcess,
    statements: Sequence[Statement],
    panel: Sequence[Panelist] | None = None,
    scale_max: int = DEFAULT_SCALE_MAX,
) -> tuple[DelphiProcess, Round]:
    """Open the next rating round with empty responses."""
    if process.complete:
        raise StepOrderViolation("process already complete")
    _require_previous_step_complete(process)
    statements = tuple(statements)
    roster = tuple(panel) if panel is not None else process.panel
    if not statements:
        raise EmptyStatements("a round needs at least one statement")
    if not roster:
        raise EmptyPanel("a round needs at least one panelist")
    ids = [s.id for s in statements]
    if len(set(ids)) != len(ids):
        raise EmptyStatements("duplicate statement ids")
    round_ = Round(
        id=f"r{len(process.rounds()) + 1}",
        statements=statements,
        panel=roster,
        scale_max=scale_max,
    )
    return replace(process, steps=process.steps + (RoundStep(round_),)), round_


def submit_response(
    round_: Round,
    panelist_id: str,
    statement_id: str,
    rating: int,
    comment: str | None = None,
) -> Round:
    """Record (or revise) one panelist's rating for one statement.

    Last write wins; an identical resubmission leaves the round unchanged,
    a differing one bumps the revision counter.
    """
    if round_.status != ROUND_OPEN:
        raise RoundClosed(f"round {round_.id} is closed")
    if panelist_id not in round_.panelist_ids():
        raise NotEnrolled(f"{panelist_id} is not on this round's panel")
    if round_.statement(statement_id) is None:
        raise UnknownStatement(f"no statement {statement_id} in round {round_.id}")
    if not isinstance(rating, int) or not (1 <= rating <= round_.scale_max):
        raise RatingOutOfRange(f"rating must be in 1..{round_.scale_max}")
    key = (panelist_id, statement_id)
    previous = round_.responses.get(key)
    if previous is not None:
        if previous.rating == rating and previous.comment == comment:
            return round_
        response = Response(rating=rating, comment=comment, revision=previous.revision + 1)
    else:
        response = Response(rating=rating, comment=comment)
    responses = dict(round_.responses)
    responses[key] = response
    return replace(round_, responses=responses)


def close_round(round_: Round) -> Round:
    if round_.status != ROUND_OPEN:
        raise RoundClosed(f"round {round_.id} is already closed")
    return replace(round_, status=ROUND_CLOSED)


def aggregate(round_: Round) -> dict[str, StatementStats]:
    """Compute per-statement stats for a closed round."""
    if round_.status != ROUND_CLOSED:
        raise RoundStillOpen(f"round {round_.id} is still open")
    stats: dict[str, StatementStats] = {}
    for statement in round_.statements:
        ratings = [
            resp.rating
            for (_, sid), resp in round_.responses.items()
            if sid == statement.id
        ]
        if not ratings:
            raise UnratedStatement(f"statement {statement.id} has no responses")
        stats[statement.id] = statement_stats(ratings)
    return stats


def statement_stats(ratings: Iterable[int]) -> StatementStats:
    """Exact aggregate of one statement's ratings; order-independent."""
    values = sorted(ratings)
    n = len(values)
    med = _median(values)
    half = n // 2
    if half:
        q1 = _median(values[:half])
        q3 = _median(values[n - half:])
    else:
        q1 = q3 = med
    iqr = q3 - q1
    agreement = Fraction(sum(1 for v in values if abs(Fraction(v) - med) <= 1), n)
    verdict = (
        CONSENSUS
        if iqr <= CONSENSUS_MAX_IQR and agreement >= CONSENSUS_MIN_AGREEMENT
        else NO_CONSENSUS
    )
    return StatementStats(
        n=n, median=med, q1=q1, q3=q3, iqr=iqr, agreement_ratio=agreement, verdict=verdict
    )


def carry_forward(round_: Round, stats: Mapping[str, StatementStats]) -> Round:
    """Build the next round from the statements that missed consensus.

    Each carried statement is packaged with the previous stats and the
    anonymized comments it attracted (sorted, so ordering leaks nothing).
    """
    carried = []
    for statement in round_.statements:
        stat = stats.get(statement.id)
        if stat is None:
            raise UnratedStatement(f"no stats for statement {statement.id}")
        if stat.verdict == CONSENSUS:
            continue
        comments = sorted(
            resp.comment
            for (_, sid), resp in round_.responses.items()
            if sid == statement.id and resp.comment
        )
        carried.append(
            Statement(
                id=statement.id,
                text=statement.text,
                feedback=Feedback(stats=stat, comments=tuple(comments)),
            )
        )
    if not carried:
        raise NothingToCarry("every statement reached consensus")
    next_number = int(round_.id[1:]) + 1 if round_.id[1:].isdigit() else 0
    return Round(
        id=f"r{next_number}",
        statements=tuple(carried),
        panel=round_.panel,
        scale_max=round_.scale_max,
    )


def export_recommendations(
    process: DelphiProcess,
) -> list[tuple[Statement, StatementStats]]:
    """Final consensus statements, strongest agreement first."""
    if not process.complete:
        raise ProcessIncomplete(f"process {process.id} is not complete")
    final: dict[str, tuple[Statement, StatementStats]] = {}
    for step in process.rounds():
        if step.stats is None:
            continue
        for statement in step.round.statements:
            stat = step.stats.get(statement.id)
            if stat is not None:
                final[statement.id] = (statement, stat)
    picked = [pair for pair in final.values() if pair[1].verdict == CONSENSUS]
    picked.sort(key=lambda pair: (-pair[1].agreement_ratio, -pair[1].median, pair[0].id))
    return picked


def stats_csv(stats: Mapping[str, StatementStats]) -> str:
    """Facilitator CSV with the fixed header row."""
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(CSV_HEADER)
    for statement_id in sorted(stats):
        s = stats[statement_id]
        writer.writerow(
            [
                statement_id,
                s.n,
                _num(s.median),
                _num(s.iqr),
                _num(s.agreement_ratio),
                s.verdict,
            ]
        )
    return out.getvalue()


# --- process-level orchestration (used by the service) ---


def process_submit(
    process: DelphiProcess,
    panelist_id: str,
    statement_id: str,
    rating: int,
    comment: str | None = None,
) -> DelphiProcess:
    step = _require_round_step(process)
    updated = submit_response(step.round, panelist_id, statement_id, rating, comment)
    return _swap_round(process, replace(step, round=updated))


def process_close_round(process: DelphiProcess) -> DelphiProcess:
    step = _require_round_step(process)
    return _swap_round(process, replace(step, round=close_round(step.round)))


def process_aggregate(
    process: DelphiProcess,
) -> tuple[DelphiProcess, dict[str, StatementStats]]:
    step = _require_round_step(process)
    if step.stats is not None:
        return process, dict(step.stats)
    stats = aggregate(step.round)
    return _swap_round(process, replace(step, stats=stats)), stats


def process_carry_forward(process: DelphiProcess) -> tuple[DelphiProcess, Round]:
    step = _require_round_step(process)
    if step.stats is None:
        raise RoundStillOpen("aggregate the current round first")
    next_round = carry_forward(step.round, step.stats)
    return (
        replace(process, steps=process.steps + (RoundStep(next_round),)),
        next_round,
    )


def finish(process: DelphiProcess) -> DelphiProcess:
    """Mark the process complete; requires an aggregated final round."""
    if process.complete:
        return process
    step = process.current_round_step()
    if step is None:
        raise StepOrderViolation("a process needs at least one round")
    if step.stats is None:
        raise StepOrderViolation("final round is not aggregated")
    return replace(process, complete=True)


def _require_previous_step_complete(process: DelphiProcess) -> None:
    if not process.steps:
        return
    last = process.steps[-1]
    if isinstance(last, RoundStep) and last.stats is None:
        raise StepOrderViolation(
            f"round {last.round.id} must be closed and aggregated first"
        )


def _require_round_step(process: DelphiProcess) -> RoundStep:
    step = process.current_round_step()
    if step is None:
        raise StepOrderViolation("no round is open")
    return step


def _swap_round(process: DelphiProcess, step: RoundStep) -> DelphiProcess:
    steps = list(process.steps)
    for i in range(len(steps) - 1, -1, -1):
        if isinstance(steps[i], RoundStep):
            steps[i] = step
            break
    return replace(process, steps=tuple(steps))


def _num(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return format(float(x), "g")


def _median(values: Sequence[int]) -> Fraction:
    n = len(values)
    if n % 2:
        return Fraction(values[n // 2])
    return Fraction(values[n // 2 - 1] + values[n // 2], 2)
