"""Pure state machine for a virtual World Cafe session."""

from scicafe.core.machine import (
    ALLOW,
    Decision,
    OLD,
    RECENT,
    apply,
    archive_session,
    authorize,
    build_archive,
    check_invariants,
    create_session,
    fold,
    recency_class,
    replay,
    rotate,
    verify_permission_soundness,
)
from scicafe.core.model import (
    PrivacyLevel,
    Role,
    SessionArchive,
    SessionConfig,
    SessionState,
)

__all__ = [
    "ALLOW",
    "Decision",
    "OLD",
    "RECENT",
    "PrivacyLevel",
    "Role",
    "SessionArchive",
    "SessionConfig",
    "SessionState",
    "apply",
    "archive_session",
    "authorize",
    "build_archive",
    "check_invariants",
    "create_session",
    "fold",
    "recency_class",
    "replay",
    "rotate",
    "verify_permission_soundness",
]
