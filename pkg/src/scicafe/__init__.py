"""scicafe: event-sourced engine for facilitated deliberation sessions.

Subpackages:
  core      -- pure state machine for a virtual World Cafe session
  delphi    -- multi-round consensus process with per-round aggregation
  knowledge -- keyword extraction, entity annotation, participation metrics
  catalog   -- participation-paradigm taxonomy and classification
  service   -- FastAPI host: wire protocol, persistence, rotation scheduler
  cli       -- admin/simulation command line (thin HTTP client)
"""

__version__ = "0.1.0"
