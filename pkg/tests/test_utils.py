import json

import pytest

from blocktilt import utils
from blocktilt.errors import CacheIOError


def _file_backend(monkeypatch):
    for name in [
        "UPSTASH_REDIS_REST_URL",
        "UPSTASH_REDIS_REST_TOKEN",
        "KV_REST_API_URL",
        "KV_REST_API_TOKEN",
        "UPSTASH_REDIS_URL",
        "REDIS_URL",
    ]:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr(utils, "_kv_client", None)


class FakeKV:
    def __init__(self):
        self.store = {}

    def get(self, key):
        return self.store.get(key)

    def set(self, key, value):
        self.store[key] = value


def test_log_writes_timestamped_stderr(monkeypatch, capsys):
    monkeypatch.setattr(utils, "_quiet", False)
    utils.log("hello")
    err = capsys.readouterr().err
    assert err.startswith("[")
    assert err.rstrip().endswith("hello")
    utils.set_quiet(True)
    utils.log("hidden")
    assert capsys.readouterr().err == ""


def test_records_round_trip_through_file(monkeypatch, tmp_path):
    _file_backend(monkeypatch)
    path = str(tmp_path / "nested" / "cache.jsonl")
    assert utils.load_records(path, "k") == []
    records = [{"b": 2, "a": 1}, {"a": 3}]
    utils.save_records(path, "k", records)
    lines = (tmp_path / "nested" / "cache.jsonl").read_text(encoding="utf-8").splitlines()
    assert lines[0] == '{"a": 1, "b": 2}'
    assert utils.load_records(path, "k") == records


def test_load_records_reports_line(monkeypatch, tmp_path):
    _file_backend(monkeypatch)
    path = tmp_path / "cache.jsonl"
    path.write_text('{"a": 1}\n[1, 2]\n', encoding="utf-8")
    with pytest.raises(CacheIOError, match=":2:"):
        utils.load_records(str(path), "k")


def test_records_use_kv_when_configured(monkeypatch, tmp_path):
    fake = FakeKV()
    monkeypatch.setattr(utils, "_get_kv_client", lambda: fake)
    utils.save_records(str(tmp_path / "unused.jsonl"), "blocktilt:test", [{"a": 1}])
    assert json.loads(fake.store["blocktilt:test"]) == [{"a": 1}]
    assert utils.load_records(str(tmp_path / "unused.jsonl"), "blocktilt:test") == [{"a": 1}]
    assert not (tmp_path / "unused.jsonl").exists()

    fake.store["blocktilt:test"] = json.dumps({"not": "a list"})
    with pytest.raises(CacheIOError):
        utils.load_records("unused", "blocktilt:test")


def test_with_retries_retries_timeouts(monkeypatch):
    monkeypatch.setattr(utils, "_quiet", True)
    monkeypatch.setattr(utils.time, "sleep", lambda _: None)
    calls = []

    def flaky():
        calls.append(1)
        if len(calls) < 3:
            raise TimeoutError("timed out")
        return "ok"

    assert utils.with_retries(flaky, "flaky") == "ok"
    assert len(calls) == 3


def test_with_retries_does_not_retry_other_errors(monkeypatch):
    monkeypatch.setattr(utils.time, "sleep", lambda _: None)
    calls = []

    def broken():
        calls.append(1)
        raise KeyError("nope")

    with pytest.raises(KeyError):
        utils.with_retries(broken, "broken")
    assert len(calls) == 1
