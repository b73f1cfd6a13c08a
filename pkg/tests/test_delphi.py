import random
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from scicafe.delphi import (
    CONSENSUS,
    CSV_HEADER,
    NO_CONSENSUS,
    Panelist,
    Statement,
    aggregate,
    carry_forward,
    close_round,
    export_recommendations,
    finish,
    new_process,
    open_round,
    process_aggregate,
    process_carry_forward,
    process_close_round,
    process_submit,
    record_offline_step,
    statement_stats,
    stats_csv,
    submit_response,
)
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
    UnratedStatement,
)


# Independent oracle: plain percentile arithmetic on the sorted list,
# written without reference to the engine.
def oracle_stats(ratings):
    xs = sorted(ratings)
    n = len(xs)

    def med(seq):
        m = len(seq)
        if m % 2 == 1:
            return Fraction(seq[m // 2])
        return (Fraction(seq[m // 2 - 1]) + Fraction(seq[m // 2])) / 2

    median = med(xs)
    half = n // 2
    q1 = med(xs[:half]) if half else median
    q3 = med(xs[n - half:]) if half else median
    within = sum(1 for x in xs if abs(Fraction(x) - median) <= 1)
    agreement = Fraction(within, n)
    consensus = (q3 - q1) <= 2 and agreement >= Fraction(7, 10)
    return median, q1, q3, q3 - q1, agreement, consensus


PANEL = tuple(
    Panelist(f"p{i}", cat)
    for i, cat in enumerate(
        ["policy maker", "researcher", "science museum", "school", "citizen"] * 2
    )
)
STATEMENTS = tuple(Statement(f"s{i}", f"recommendation {i}") for i in range(1, 9))


def _filled_round(ratings_by_statement):
    process = new_process("d1", "Observatory validation", PANEL)
    statements = tuple(
        Statement(sid, f"text {sid}") for sid in sorted(ratings_by_statement)
    )
    process, round_ = open_round(process, statements)
    for sid, ratings in ratings_by_statement.items():
        for panelist, rating in zip(PANEL, ratings):
            round_ = submit_response(round_, panelist.id, sid, rating)
    return close_round(round_)


class TestStats:
    def test_derived_fixture_exact(self):
        # frozen from the oracle: [6,7,7,7,7,8,8,9,9,9]
        s = statement_stats([6, 7, 7, 7, 7, 8, 8, 9, 9, 9])
        assert s.median == Fraction(15, 2)
        assert s.q1 == 7
        assert s.q3 == 9
        assert s.iqr == 2
        assert s.agreement_ratio == Fraction(3, 5)
        assert s.verdict == NO_CONSENSUS

    def test_unanimous(self):
        s = statement_stats([5] * 10)
        assert s.median == 5 and s.iqr == 0
        assert s.agreement_ratio == 1
        assert s.verdict == CONSENSUS

    def test_maximal_spread(self):
        s = statement_stats([1, 9])
        assert s.iqr == 8
        assert s.verdict == NO_CONSENSUS

    def test_matches_oracle_exhaustively(self):
        # every rating multiset of size <= 6 on a 1..5 scale
        for n in range(1, 7):
            for combo in combinations_with_replacement(range(1, 6), n):
                med, q1, q3, iqr, agr, consensus = oracle_stats(combo)
                s = statement_stats(list(combo))
                assert (s.median, s.q1, s.q3, s.iqr, s.agreement_ratio) == (
                    med,
                    q1,
                    q3,
                    iqr,
                    agr,
                ), combo
                assert (s.verdict == CONSENSUS) is consensus, combo

    def test_adding_median_rating_never_breaks_consensus(self):
        for n in range(1, 7):
            for combo in combinations_with_replacement(range(1, 6), n):
                s = statement_stats(list(combo))
                if s.verdict != CONSENSUS or s.median.denominator != 1:
                    continue
                grown = statement_stats(list(combo) + [int(s.median)])
                assert grown.verdict == CONSENSUS, combo

    def test_permutation_invariance(self):
        rng = random.Random(3)
        ratings = [rng.randint(1, 9) for _ in range(11)]
        shuffled = ratings[:]
        rng.shuffle(shuffled)
        assert statement_stats(ratings) == statement_stats(shuffled)


class TestRoundLifecycle:
    def test_open_round_awaits_responses(self):
        process = new_process("d1", "Observatory validation", PANEL)
        process, round_ = open_round(process, STATEMENTS)
        assert len(round_.statements) == 8
        assert len(round_.panel) == 10
        assert not round_.responses
        assert round_.scale_max == 9

    def test_open_round_rejects_empty_statements(self):
        process = new_process("d1", "t", PANEL)
        with pytest.raises(EmptyStatements):
            open_round(process, ())

    def test_open_round_rejects_empty_panel(self):
        process = new_process("d1", "t", ())
        with pytest.raises(EmptyPanel):
            open_round(process, STATEMENTS)

    def test_second_round_needs_first_aggregated(self):
        process = new_process("d1", "t", PANEL)
        process, _ = open_round(process, STATEMENTS)
        with pytest.raises(StepOrderViolation):
            open_round(process, STATEMENTS)

    def test_rating_bounds(self):
        process = new_process("d1", "t", PANEL)
        _, round_ = open_round(process, STATEMENTS)
        round_ = submit_response(round_, "p0", "s1", 9)
        assert round_.responses[("p0", "s1")].rating == 9
        with pytest.raises(RatingOutOfRange):
            submit_response(round_, "p0", "s1", 10)
        with pytest.raises(RatingOutOfRange):
            submit_response(round_, "p0", "s1", 0)

    def test_not_enrolled(self):
        process = new_process("d1", "t", PANEL)
        _, round_ = open_round(process, STATEMENTS)
        with pytest.raises(NotEnrolled):
            submit_response(round_, "stranger", "s1", 5)

    def test_resubmission_last_write_wins(self):
        process = new_process("d1", "t", PANEL)
        _, round_ = open_round(process, STATEMENTS)
        round_ = submit_response(round_, "p0", "s1", 5)
        round_ = submit_response(round_, "p0", "s1", 7)
        response = round_.responses[("p0", "s1")]
        assert response.rating == 7
        assert response.revision == 1
        # identical resubmission is a no-op
        again = submit_response(round_, "p0", "s1", 7)
        assert again is round_

    def test_closed_round_rejects_responses(self):
        process = new_process("d1", "t", PANEL)
        _, round_ = open_round(process, STATEMENTS)
        round_ = submit_response(round_, "p0", "s1", 5)
        round_ = close_round(round_)
        with pytest.raises(RoundClosed):
            submit_response(round_, "p1", "s1", 5)

    def test_aggregate_requires_closed(self):
        process = new_process("d1", "t", PANEL)
        _, round_ = open_round(process, STATEMENTS)
        with pytest.raises(RoundStillOpen):
            aggregate(round_)

    def test_aggregate_requires_every_statement_rated(self):
        process = new_process("d1", "t", PANEL)
        _, round_ = open_round(process, STATEMENTS)
        round_ = submit_response(round_, "p0", "s1", 5)
        round_ = close_round(round_)
        with pytest.raises(UnratedStatement):
            aggregate(round_)


class TestCarryForward:
    def test_three_no_consensus_carried_with_feedback(self):
        ratings = {f"s{i}": [7] * 10 for i in range(1, 6)}  # 5 easy consensus
        ratings["s6"] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 9]
        ratings["s7"] = [1, 1, 1, 1, 1, 9, 9, 9, 9, 9]
        ratings["s8"] = [1, 9, 1, 9, 1, 9, 1, 9, 1, 9]
        round_ = _filled_round(ratings)
        stats = aggregate(round_)
        carried = carry_forward(round_, stats)
        assert sorted(s.id for s in carried.statements) == ["s6", "s7", "s8"]
        for statement in carried.statements:
            assert statement.feedback is not None
            assert statement.feedback.stats.verdict == NO_CONSENSUS

    def test_feedback_comments_are_anonymous(self):
        ratings = {"s1": [1, 9, 1, 9, 1, 9, 1, 9, 1, 9]}
        process = new_process("d1", "t", PANEL)
        process, round_ = open_round(process, (Statement("s1", "contested"),))
        for i, panelist in enumerate(PANEL):
            round_ = submit_response(
                round_, panelist.id, "s1", ratings["s1"][i], comment=f"view {i}"
            )
        round_ = close_round(round_)
        stats = aggregate(round_)
        carried = carry_forward(round_, stats)
        feedback = carried.statements[0].feedback
        assert feedback.comments == tuple(sorted(f"view {i}" for i in range(10)))
        # no panelist identifiers anywhere in the feedback payload
        assert all("p0" not in c and "p9" not in c for c in feedback.comments)

    def test_all_consensus_nothing_to_carry(self):
        round_ = _filled_round({"s1": [7] * 10})
        stats = aggregate(round_)
        with pytest.raises(NothingToCarry):
            carry_forward(round_, stats)

    def test_carried_subset_of_previous(self):
        ratings = {"s1": [7] * 10, "s2": [1, 9] * 5}
        round_ = _filled_round(ratings)
        carried = carry_forward(round_, aggregate(round_))
        previous_ids = {s.id for s in round_.statements}
        assert {s.id for s in carried.statements} <= previous_ids
        assert "s1" not in {s.id for s in carried.statements}


class TestProcess:
    def _run_two_round_process(self):
        """Round 1: 5 of 8 statements reach consensus; round 2 settles the rest."""
        process = new_process("d1", "Observatory validation", PANEL)
        process = record_offline_step(process, "plenary meeting", completed_at=0)
        process, round_ = open_round(process, STATEMENTS)
        round1 = {
            "s1": [7] * 10,
            "s2": [8, 8, 8, 8, 8, 8, 8, 9, 9, 9],
            "s3": [6, 6, 6, 6, 6, 6, 6, 6, 7, 7],
            "s4": [9] * 10,
            "s5": [5, 5, 5, 5, 5, 5, 5, 6, 6, 6],
            "s6": [1, 2, 3, 4, 5, 6, 7, 8, 9, 9],
            "s7": [1, 1, 1, 1, 1, 9, 9, 9, 9, 9],
            "s8": [1, 9, 1, 9, 1, 9, 1, 9, 1, 9],
        }
        for sid, ratings in round1.items():
            for panelist, rating in zip(PANEL, ratings):
                process = process_submit(process, panelist.id, sid, rating)
        process = process_close_round(process)
        process, stats1 = process_aggregate(process)
        assert sum(1 for s in stats1.values() if s.verdict == CONSENSUS) == 5
        process, round2 = process_carry_forward(process)
        assert sorted(s.id for s in round2.statements) == ["s6", "s7", "s8"]
        round2_ratings = {"s6": [7] * 10, "s7": [8] * 10, "s8": [6] * 10}
        for sid, ratings in round2_ratings.items():
            for panelist, rating in zip(PANEL, ratings):
                process = process_submit(process, panelist.id, sid, rating)
        process = process_close_round(process)
        process, _ = process_aggregate(process)
        return finish(process)

    def test_two_rounds_yield_eight_recommendations(self):
        process = self._run_two_round_process()
        recommendations = export_recommendations(process)
        assert len(recommendations) == 8
        assert sorted(s.id for s, _ in recommendations) == sorted(
            f"s{i}" for i in range(1, 9)
        )

    def test_export_ordering(self):
        process = self._run_two_round_process()
        recommendations = export_recommendations(process)
        keys = [(-s.agreement_ratio, -s.median, stmt.id) for stmt, s in recommendations]
        assert keys == sorted(keys)

    def test_export_requires_complete(self):
        process = new_process("d1", "t", PANEL)
        process, round_ = open_round(process, STATEMENTS)
        with pytest.raises(ProcessIncomplete):
            export_recommendations(process)

    def test_zero_consensus_export_is_empty(self):
        process = new_process("d1", "t", PANEL)
        process, _ = open_round(process, (Statement("s1", "contested"),))
        for i, panelist in enumerate(PANEL):
            process = process_submit(process, panelist.id, "s1", 1 if i % 2 else 9)
        process = process_close_round(process)
        process, _ = process_aggregate(process)
        process = finish(process)
        assert export_recommendations(process) == []

    def test_finish_requires_aggregated_round(self):
        process = new_process("d1", "t", PANEL)
        process, _ = open_round(process, STATEMENTS)
        with pytest.raises(StepOrderViolation):
            finish(process)


class TestCsv:
    def test_fixed_header_and_rows(self):
        round_ = _filled_round({"s1": [7] * 10, "s2": [1, 9] * 5})
        csv_text = stats_csv(aggregate(round_))
        lines = csv_text.strip().splitlines()
        assert lines[0] == ",".join(CSV_HEADER)
        assert lines[1].startswith("s1,10,7,0,1,consensus")
        assert lines[2].startswith("s2,10,5,8,0,no_consensus")
