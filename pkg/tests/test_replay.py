import random

import pytest

from scicafe.core import (
    apply,
    check_invariants,
    create_session,
    replay,
    verify_permission_soundness,
)
from scicafe.core.commands import JoinTable, MoveNote, PostNote
from scicafe.core.errors import GapInSequence, ReplayError
from scicafe.core.events import Event

from genseq import random_session


def test_empty_log_rejected():
    with pytest.raises(ReplayError):
        replay([])


def test_gap_detected(session, config):
    state, ev0 = create_session(config, "org", session_id="s1", now=0)
    bad = Event(seq=3, at=1, actor="org", kind="TableClosed", payload={"table": 0})
    with pytest.raises(GapInSequence):
        replay([ev0, bad])


def test_log_must_start_with_creation():
    stray = Event(seq=1, at=0, actor="org", kind="TableClosed", payload={"table": 0})
    with pytest.raises(ReplayError):
        replay([stray])


def test_create_post_move_replays_to_final_area(config):
    from scicafe.core.commands import AssignChair, OpenTable

    state, ev0 = create_session(config, "org", session_id="s1", now=0)
    events = [ev0]
    for command, actor in (
        (AssignChair(table=0, user="cA"), "org"),
        (OpenTable(table=0, external_url="https://conf/0"), "cA"),
        (JoinTable(table=0), "alice"),
        (PostNote(table=0, text="seed", area="ideas"), "alice"),
        (MoveNote(table=0, note_id="n1", to_area="agreed"), "alice"),
    ):
        state, emitted = apply(state, command, actor, 10)
        events.extend(emitted)
    replayed = replay(events)
    assert replayed == state
    assert replayed.tables[0].blackboard.notes["n1"].area == "agreed"


def test_seq_gapless_matches_count(config):
    rng = random.Random(7)
    _, events, _ = random_session(rng, commands=40)
    assert events[-1].seq == len(events)


@pytest.mark.parametrize("seed", range(25))
def test_replay_matches_live_state(seed):
    rng = random.Random(seed)
    live, events, _ = random_session(rng, commands=30)
    assert replay(events) == live
    check_invariants(live)
    verify_permission_soundness(events)


def test_payload_json_round_trip(config):
    import json

    rng = random.Random(99)
    _, events, _ = random_session(rng, commands=40)
    for event in events:
        assert json.loads(json.dumps(event.payload)) == event.payload


@pytest.mark.parametrize("seed", range(8))
def test_archive_contains_every_posted_note_exactly_once(seed):
    from scicafe.core import build_archive
    from scicafe.core.commands import ArchiveSession, CloseTable

    live, events, _ = random_session(random.Random(seed), commands=40)
    if live.archived:
        archived = live
    else:
        for table_id in live.open_table_ids():
            live, evs = apply(live, CloseTable(table=table_id), "org", 10**9)
            events += evs
        archived, evs = apply(live, ArchiveSession(), "org", 10**9 + 1)
        events += evs
    archive = build_archive(archived)
    posted = sorted(e.payload["note_id"] for e in events if e.kind == "NotePosted")
    in_archive = sorted(n.id for t in archive.tables for n in t.notes)
    assert in_archive == posted
