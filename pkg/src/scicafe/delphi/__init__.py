"""Multi-round Delphi consensus engine."""

from scicafe.delphi.engine import (
    CSV_HEADER,
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
from scicafe.delphi.model import (
    CONSENSUS,
    NO_CONSENSUS,
    DelphiProcess,
    Feedback,
    Panelist,
    Response,
    Round,
    RoundStep,
    Statement,
    StatementStats,
)

__all__ = [
    "CONSENSUS",
    "CSV_HEADER",
    "NO_CONSENSUS",
    "DelphiProcess",
    "Feedback",
    "Panelist",
    "Response",
    "Round",
    "RoundStep",
    "Statement",
    "StatementStats",
    "aggregate",
    "carry_forward",
    "close_round",
    "export_recommendations",
    "finish",
    "new_process",
    "open_round",
    "process_aggregate",
    "process_carry_forward",
    "process_close_round",
    "process_submit",
    "record_offline_step",
    "statement_stats",
    "stats_csv",
    "submit_response",
]
