"""Participation-paradigm taxonomy and classification."""

from scicafe.catalog.catalog import (
    CatalogEntry,
    CatalogFormatError,
    EmptyFeatures,
    Paradigm,
    ParadigmCatalog,
    ParadigmProfile,
    UnknownParadigm,
    classify,
    compose,
    load_catalog,
    validate_entry,
)
from scicafe.catalog.taxonomy import (
    FUNCTION_OF,
    PARADIGM_IDS,
    Function,
    SubFunction,
    ToolKind,
)

__all__ = [
    "CatalogEntry",
    "CatalogFormatError",
    "EmptyFeatures",
    "FUNCTION_OF",
    "Function",
    "PARADIGM_IDS",
    "Paradigm",
    "ParadigmCatalog",
    "ParadigmProfile",
    "SubFunction",
    "ToolKind",
    "UnknownParadigm",
    "classify",
    "compose",
    "load_catalog",
    "validate_entry",
]
