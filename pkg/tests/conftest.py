import pytest

from scicafe.core import SessionConfig, create_session
from scicafe.core.commands import AssignChair, JoinTable, OpenTable


@pytest.fixture
def config():
    return SessionConfig(
        title="Energy Futures",
        table_count=3,
        rotation_minutes=20,
        areas=("unsorted", "ideas", "agreed"),
    )


@pytest.fixture
def session(config):
    state, _ = create_session(config, "org", session_id="s1", now=0)
    return state


def open_table(state, table, chair, now=0, url=None):
    """Assign a chair and open one table; returns the new state."""
    from scicafe.core import apply

    state, _ = apply(state, AssignChair(table=table, user=chair), "org", now)
    state, _ = apply(
        state, OpenTable(table=table, external_url=url or f"https://conf/{table}"), chair, now
    )
    return state


def seat(state, table, *users, now=0):
    from scicafe.core import apply

    for user in users:
        state, _ = apply(state, JoinTable(table=table), user, now)
    return state
