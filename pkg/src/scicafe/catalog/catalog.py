"""Paradigm catalog: load signatures, classify feature sets, compose bricks,
and validate catalog entries against the component-kind hierarchy."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from scicafe.catalog.taxonomy import FUNCTION_OF, PARADIGM_IDS, SubFunction, ToolKind
from scicafe.errors import DomainError


class EmptyFeatures(DomainError):
    code = "EMPTY_FEATURES"


class UnknownParadigm(DomainError):
    code = "UNKNOWN_PARADIGM"


class CatalogFormatError(DomainError):
    """The data file does not describe exactly the ten fixed paradigms."""

    code = "CATALOG_FORMAT_ERROR"


@dataclass(frozen=True)
class Paradigm:
    id: str
    name: str
    signature: frozenset[SubFunction]


@dataclass(frozen=True)
class ParadigmProfile:
    scores: Mapping[str, Fraction]
    dominant: tuple[str, ...]  # all argmax ids, ascending


@dataclass(frozen=True)
class ParadigmCatalog:
    paradigms: Mapping[str, Paradigm]

    def __iter__(self):
        return iter(self.paradigms.values())

    def get(self, paradigm_id: str) -> Paradigm:
        try:
            return self.paradigms[paradigm_id]
        except KeyError:
            raise UnknownParadigm(f"no paradigm {paradigm_id!r}") from None


def load_catalog(path: str | Path | None = None) -> ParadigmCatalog:
    """Parse the ``id<TAB>name<TAB>subs`` data file; fails closed unless it
    contains exactly the ten fixed ids."""
    if path is None:
        text = (
            resources.files("scicafe.catalog").joinpath("data", "paradigms.tsv").read_text("utf-8")
        )
    else:
        text = Path(path).read_text("utf-8")
    paradigms: dict[str, Paradigm] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise CatalogFormatError(f"line {lineno}: expected 3 tab-separated fields")
        pid, name, subs = (p.strip() for p in parts)
        if pid in paradigms:
            raise CatalogFormatError(f"line {lineno}: duplicate paradigm {pid}")
        try:
            signature = frozenset(SubFunction(s.strip()) for s in subs.split(",") if s.strip())
        except ValueError as exc:
            raise CatalogFormatError(f"line {lineno}: {exc}") from None
        if not signature:
            raise CatalogFormatError(f"line {lineno}: empty signature for {pid}")
        paradigms[pid] = Paradigm(id=pid, name=name, signature=signature)
    if set(paradigms) != set(PARADIGM_IDS) or len(paradigms) != len(PARADIGM_IDS):
        raise CatalogFormatError(
            f"catalog must hold exactly the {len(PARADIGM_IDS)} fixed paradigms, "
            f"got {sorted(paradigms)}"
        )
    return ParadigmCatalog(paradigms=paradigms)


def classify(features: Iterable[SubFunction], catalog: ParadigmCatalog) -> ParadigmProfile:
    """Score every paradigm by signature overlap; report all tied maxima.

    score(p) = |features ∩ signature(p)| / |signature(p)|
    """
    feature_set = frozenset(SubFunction(f) for f in features)
    if not feature_set:
        raise EmptyFeatures("at least one subfunction is required")
    scores = {
        p.id: Fraction(len(feature_set & p.signature), len(p.signature)) for p in catalog
    }
    best = max(scores.values())
    dominant = tuple(sorted(pid for pid, score in scores.items() if score == best))
    return ParadigmProfile(scores=scores, dominant=dominant)


def compose(paradigm_ids: Sequence[str], catalog: ParadigmCatalog) -> frozenset[SubFunction]:
    """Blueprint of the composed platform: union of the bricks' signatures."""
    blueprint: frozenset[SubFunction] = frozenset()
    for pid in paradigm_ids:
        blueprint |= catalog.get(pid).signature
    return blueprint


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    kind: ToolKind
    functions: frozenset[SubFunction] = frozenset()
    references: tuple["CatalogEntry", ...] = field(default_factory=tuple)


def validate_entry(entry: CatalogEntry) -> list[str]:
    """Check kind hierarchy and function well-formedness; [] means ok."""
    violations: list[str] = []
    for sub in entry.functions:
        if sub not in FUNCTION_OF:
            violations.append(f"unknown subfunction {sub!r}")
    if entry.kind == ToolKind.TOOL:
        if entry.references:
            violations.append("tools are leaves and must not reference components")
    elif entry.kind == ToolKind.TOOLKIT:
        if not entry.references:
            violations.append("a toolkit must collect at least one tool")
        for ref in entry.references:
            if ref.kind != ToolKind.TOOL:
                violations.append(f"toolkit reference {ref.id!r} is not a tool")
    elif entry.kind == ToolKind.TECHNIQUE:
        for ref in entry.references:
            if ref.kind not in (ToolKind.TOOL, ToolKind.TOOLKIT):
                violations.append(
                    f"technique reference {ref.id!r} must be a tool or toolkit"
                )
    elif entry.kind == ToolKind.METHOD:
        if not entry.references:
            violations.append("a method must combine components")
        for ref in entry.references:
            if ref.kind == ToolKind.METHOD:
                violations.append(f"method reference {ref.id!r} must not be a method")
    return violations
