"""Citizens' Say knowledge-exchange functions."""

from scicafe.knowledge.entities import (
    AnnotatedText,
    EntityMention,
    annotate,
    load_gazetteer,
    recognize_entities,
)
from scicafe.knowledge.keywords import (
    document_vector,
    extract_keywords,
    keyword_vector,
    recommend,
)
from scicafe.knowledge.metrics import (
    ModerationAlert,
    ParticipationSummary,
    moderation_alerts,
    session_metrics,
)
from scicafe.knowledge.repository import (
    FixtureRepositoryClient,
    HttpRepositoryClient,
    RepositoryClient,
)
from scicafe.knowledge.tokenize import Document, tokenize

__all__ = [
    "AnnotatedText",
    "Document",
    "EntityMention",
    "FixtureRepositoryClient",
    "HttpRepositoryClient",
    "ModerationAlert",
    "ParticipationSummary",
    "RepositoryClient",
    "annotate",
    "document_vector",
    "extract_keywords",
    "keyword_vector",
    "load_gazetteer",
    "moderation_alerts",
    "recognize_entities",
    "recommend",
    "session_metrics",
    "tokenize",
]
