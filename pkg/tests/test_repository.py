import httpx
import pytest

from scicafe.knowledge import FixtureRepositoryClient, HttpRepositoryClient, load_gazetteer
from scicafe.knowledge.errors import RepositoryUnavailable


class TestFixtureClient:
    def test_hit_and_negative_cache(self):
        client = FixtureRepositoryClient({"Rome": "repo:/Rome"})
        assert client.lookup("Rome") == "repo:/Rome"
        assert client.lookup("Atlantis") is None
        assert client.lookup("Rome") == "repo:/Rome"
        assert client.lookup("Atlantis") is None
        assert client.calls == ["Rome", "Atlantis", "Rome", "Atlantis"]
        assert client.fetches == ["Rome", "Atlantis"]  # both cached after first try

    def test_from_file(self, tmp_path):
        path = tmp_path / "fixture.tsv"
        path.write_text("# comment\nRome\trepo:/Rome\nParis\trepo:/Paris\n")
        client = FixtureRepositoryClient.from_file(path)
        assert client.lookup("Paris") == "repo:/Paris"

    def test_from_file_rejects_malformed(self, tmp_path):
        path = tmp_path / "fixture.tsv"
        path.write_text("Rome repo:/Rome\n")  # space, not tab
        with pytest.raises(ValueError):
            FixtureRepositoryClient.from_file(path)


class TestGazetteerFile:
    def test_load(self, tmp_path):
        path = tmp_path / "gaz.tsv"
        path.write_text("Rome\tPlace\nNew York\tPlace\n# note\n")
        assert load_gazetteer(path) == {"Rome": "Place", "New York": "Place"}

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "gaz.tsv"
        path.write_text("RomePlace\n")
        with pytest.raises(ValueError):
            load_gazetteer(path)


def _transport(handler):
    return httpx.MockTransport(handler)


class TestHttpClient:
    def test_first_candidate_wins_and_caches(self):
        hits = []

        def handler(request):
            hits.append(request.url.params["label"])
            return httpx.Response(200, json=["repo:/A", "repo:/B"])

        client = HttpRepositoryClient("http://repo/lookup", transport=_transport(handler))
        assert client.lookup("Rome") == "repo:/A"
        assert client.lookup("Rome") == "repo:/A"
        assert hits == ["Rome"]  # second lookup served from cache

    def test_dict_body_with_uris_key(self):
        def handler(request):
            return httpx.Response(200, json={"uris": ["repo:/X"]})

        client = HttpRepositoryClient("http://repo/lookup", transport=_transport(handler))
        assert client.lookup("X") == "repo:/X"

    def test_empty_candidates_is_miss(self):
        def handler(request):
            return httpx.Response(200, json=[])

        client = HttpRepositoryClient("http://repo/lookup", transport=_transport(handler))
        assert client.lookup("Nowhere") is None

    def test_timeout_records_miss_without_crash(self):
        def handler(request):
            raise httpx.ConnectTimeout("timed out")

        client = HttpRepositoryClient("http://repo/lookup", transport=_transport(handler))
        assert client.lookup("Slow") is None
        assert client.lookup("Slow") is None  # negative-cached
        assert client.fetches == ["Slow"]

    def test_strict_mode_raises(self):
        def handler(request):
            raise httpx.ConnectTimeout("timed out")

        client = HttpRepositoryClient(
            "http://repo/lookup", strict=True, transport=_transport(handler)
        )
        with pytest.raises(RepositoryUnavailable):
            client.lookup("Slow")

    def test_cache_ttl_expiry(self):
        clock = {"now": 0.0}
        calls = []

        def handler(request):
            calls.append(1)
            return httpx.Response(200, json=["repo:/T"])

        client = HttpRepositoryClient(
            "http://repo/lookup", cache_ttl=10.0, transport=_transport(handler)
        )
        client._now = lambda: clock["now"]
        assert client.lookup("T") == "repo:/T"
        clock["now"] = 5.0
        assert client.lookup("T") == "repo:/T"
        clock["now"] = 11.0
        assert client.lookup("T") == "repo:/T"
        assert len(calls) == 2  # refetched after expiry
