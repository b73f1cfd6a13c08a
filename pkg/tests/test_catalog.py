from fractions import Fraction
from itertools import combinations

import pytest

from scicafe.catalog import (
    CatalogEntry,
    CatalogFormatError,
    EmptyFeatures,
    PARADIGM_IDS,
    SubFunction,
    ToolKind,
    UnknownParadigm,
    classify,
    compose,
    load_catalog,
    validate_entry,
)


@pytest.fixture(scope="module")
def catalog():
    return load_catalog()


class TestLoading:
    def test_shipped_file_has_the_ten_paradigms(self, catalog):
        assert sorted(p.id for p in catalog) == sorted(PARADIGM_IDS)
        assert all(p.signature for p in catalog)

    def test_missing_paradigm_fails_closed(self, tmp_path):
        lines = [
            f"{p.id}\t{p.name}\t" + ",".join(s.value for s in sorted(p.signature))
            for p in load_catalog()
        ]
        short = tmp_path / "nine.tsv"
        short.write_text("\n".join(lines[:9]) + "\n")
        with pytest.raises(CatalogFormatError):
            load_catalog(short)

    def test_extra_paradigm_fails_closed(self, tmp_path):
        base = (tmp_path / "eleven.tsv")
        lines = [
            f"{p.id}\t{p.name}\t" + ",".join(s.value for s in sorted(p.signature))
            for p in load_catalog()
        ]
        lines.append("EXTRA\tMade Up\tdiscuss")
        base.write_text("\n".join(lines) + "\n")
        with pytest.raises(CatalogFormatError):
            load_catalog(base)

    def test_unknown_subfunction_fails_closed(self, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("INIP\tInteractive Information Provider\tteleport\n")
        with pytest.raises(CatalogFormatError):
            load_catalog(bad)


class TestClassify:
    def test_share_goods_is_shago(self, catalog):
        profile = classify({SubFunction.SHARE_GOODS}, catalog)
        assert profile.dominant == ("SHAGO",)
        assert profile.scores["SHAGO"] == 1

    def test_discuss_is_codi(self, catalog):
        profile = classify({SubFunction.DISCUSS}, catalog)
        assert profile.dominant == ("CODI",)
        assert profile.scores["CODI"] == 1
        assert profile.scores["DIREP"] == Fraction(1, 2)

    def test_union_of_two_signatures_ties(self, catalog):
        features = catalog.get("CODI").signature | catalog.get("SHAGO").signature
        profile = classify(features, catalog)
        assert set(profile.dominant) >= {"CODI", "SHAGO"}
        assert profile.scores["CODI"] == profile.scores["SHAGO"] == 1

    def test_empty_features_rejected(self, catalog):
        with pytest.raises(EmptyFeatures):
            classify(set(), catalog)

    def test_scores_bounded(self, catalog):
        profile = classify(set(SubFunction), catalog)
        assert all(0 <= s <= 1 for s in profile.scores.values())
        assert profile.dominant == tuple(sorted(PARADIGM_IDS))

    def test_monotone_in_features(self, catalog):
        subs = list(SubFunction)
        for a, b in combinations(subs, 2):
            small = classify({a}, catalog)
            grown = classify({a, b}, catalog)
            for pid in small.scores:
                assert grown.scores[pid] >= small.scores[pid]

    def test_exact_signature_round_trips_through_compose(self, catalog):
        for paradigm in catalog:
            profile = classify(paradigm.signature, catalog)
            blueprint = compose(profile.dominant, catalog)
            assert blueprint >= paradigm.signature


class TestCompose:
    def test_union(self, catalog):
        blueprint = compose(["CODI", "SHAGO"], catalog)
        assert blueprint == catalog.get("CODI").signature | catalog.get("SHAGO").signature

    def test_idempotent_and_order_free(self, catalog):
        assert compose(["INIP"], catalog) == compose(["INIP", "INIP"], catalog)
        assert compose(["CODI", "COST"], catalog) == compose(["COST", "CODI"], catalog)

    def test_empty(self, catalog):
        assert compose([], catalog) == frozenset()

    def test_unknown_paradigm(self, catalog):
        with pytest.raises(UnknownParadigm):
            compose(["NOPE"], catalog)


class TestValidateEntry:
    def _tool(self, name="hammer"):
        return CatalogEntry(id=name, kind=ToolKind.TOOL)

    def test_method_needs_components(self):
        method = CatalogEntry(id="m", kind=ToolKind.METHOD)
        assert any("combine" in v for v in validate_entry(method))

    def test_toolkit_of_two_tools_ok(self):
        kit = CatalogEntry(
            id="kit", kind=ToolKind.TOOLKIT, references=(self._tool("a"), self._tool("b"))
        )
        assert validate_entry(kit) == []

    def test_tool_with_references_violates(self):
        tool = CatalogEntry(id="t", kind=ToolKind.TOOL, references=(self._tool("x"),))
        assert any("leaves" in v for v in validate_entry(tool))

    def test_method_may_not_nest_methods(self):
        inner = CatalogEntry(id="inner", kind=ToolKind.METHOD, references=(self._tool(),))
        outer = CatalogEntry(id="outer", kind=ToolKind.METHOD, references=(inner,))
        assert any("must not be a method" in v for v in validate_entry(outer))

    def test_technique_references_tools_or_toolkits(self):
        method = CatalogEntry(id="m", kind=ToolKind.METHOD, references=(self._tool(),))
        technique = CatalogEntry(id="t", kind=ToolKind.TECHNIQUE, references=(method,))
        assert any("tool or toolkit" in v for v in validate_entry(technique))
        bare = CatalogEntry(id="t2", kind=ToolKind.TECHNIQUE)
        assert validate_entry(bare) == []
