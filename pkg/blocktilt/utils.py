from __future__ import annotations

from datetime import datetime, timezone
import json
import os
import socket
import sys
import time
from typing import Dict, List
from urllib.parse import urlparse

from .errors import CacheIOError


_kv_client = None
_quiet = False


def set_quiet(quiet: bool) -> None:
    global _quiet
    _quiet = quiet


def log(msg: str) -> None:
    if _quiet:
        return
    ts = datetime.now(timezone.utc).isoformat()
    print(f"[{ts}] {msg}", file=sys.stderr)


def _get_kv_client():
    global _kv_client
    rest_url = os.environ.get("UPSTASH_REDIS_REST_URL") or os.environ.get("KV_REST_API_URL")
    rest_token = os.environ.get("UPSTASH_REDIS_REST_TOKEN") or os.environ.get("KV_REST_API_TOKEN")
    redis_url = os.environ.get("UPSTASH_REDIS_URL") or os.environ.get("REDIS_URL")

    if rest_url:
        scheme = urlparse(rest_url).scheme.lower()
        if scheme in {"http", "https"} and rest_token:
            if _kv_client is None:
                from upstash_redis import Redis

                _kv_client = Redis(url=rest_url, token=rest_token)
            return _kv_client

    if redis_url:
        scheme = urlparse(redis_url).scheme.lower()
        if scheme in {"redis", "rediss"}:
            if _kv_client is None:
                import redis

                _kv_client = redis.Redis.from_url(redis_url)
            return _kv_client

    return None


def _should_retry(exc: Exception) -> bool:
    if isinstance(exc, (TimeoutError, socket.timeout, ConnectionError)):
        return True
    name = type(exc).__name__
    if name in {"ConnectionError", "TimeoutError", "BusyLoadingError"}:
        return True
    return "timed out" in str(exc).lower()


def with_retries(func, label: str, attempts: int = 5, delay: float = 1.0):
    for attempt in range(1, attempts + 1):
        try:
            return func()
        except Exception as exc:
            if attempt >= attempts or not _should_retry(exc):
                raise
            log(f"{label} failed (attempt {attempt}/{attempts}); retrying in {delay:.1f}s: {exc}")
            time.sleep(delay)
            delay *= 2


def _decode_kv(data) -> List[Dict]:
    if not data:
        return []
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, list):
        raise CacheIOError("KV cache document is not a list of records")
    return data


def load_records(path: str, key: str) -> List[Dict]:
    """Read cache records from the KV store when configured, else from a JSONL file."""
    client = _get_kv_client()
    if client is not None:
        try:
            return _decode_kv(with_retries(lambda: client.get(key), "KV cache load"))
        except CacheIOError:
            raise
        except Exception as exc:
            raise CacheIOError(f"KV cache load failed: {exc}") from exc

    if not os.path.exists(path):
        return []
    records: List[Dict] = []
    try:
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CacheIOError(f"{path}:{lineno}: malformed record") from exc
                if not isinstance(record, dict):
                    raise CacheIOError(f"{path}:{lineno}: record is not an object")
                records.append(record)
    except OSError as exc:
        raise CacheIOError(f"cannot read {path}: {exc}") from exc
    return records


def save_records(path: str, key: str, records: List[Dict]) -> None:
    client = _get_kv_client()
    if client is not None:
        payload = json.dumps(records, sort_keys=True)
        try:
            with_retries(lambda: client.set(key, payload), "KV cache save")
        except Exception as exc:
            raise CacheIOError(f"KV cache save failed: {exc}") from exc
        return

    lines = [json.dumps(r, sort_keys=True, ensure_ascii=False) for r in records]
    tmp_path = f"{path}.tmp"
    try:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(tmp_path, "w", encoding="utf-8") as f:
            for line in lines:
                f.write(line + "\n")
        os.replace(tmp_path, path)
    except OSError as exc:
        raise CacheIOError(f"cannot write {path}: {exc}") from exc
