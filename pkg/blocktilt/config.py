from __future__ import annotations

from dataclasses import dataclass, replace
import os


@dataclass(frozen=True)
class ToolConfig:
    cache_dir: str
    cache_file: str
    cache_key: str
    max_group_order: int
    spot_checks: int
    verify: bool
    quiet: bool

    @property
    def cache_path(self) -> str:
        return os.path.join(self.cache_dir, self.cache_file)


def _env_bool(name: str, default: bool = False) -> bool:
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in {"1", "true", "yes", "y", "on"}


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    if value is None or value == "":
        return default
    return int(value)


def _default_cache_dir() -> str:
    tmp_dir = os.environ.get("TMPDIR") or os.environ.get("TEMP") or "/tmp"
    return os.path.join(tmp_dir, "blocktilt")


def get_config() -> ToolConfig:
    return ToolConfig(
        cache_dir=os.environ.get("BLOCKTILT_CACHE_DIR", "").strip() or _default_cache_dir(),
        cache_file=os.environ.get("BLOCKTILT_CACHE_FILE", "kl_cache.jsonl").strip(),
        cache_key=os.environ.get("BLOCKTILT_CACHE_KEY", "blocktilt:kl-cache").strip(),
        max_group_order=_env_int("BLOCKTILT_MAX_GROUP_ORDER", 1_000_000),
        spot_checks=_env_int("BLOCKTILT_SPOT_CHECKS", 3),
        verify=_env_bool("BLOCKTILT_VERIFY", False),
        quiet=_env_bool("BLOCKTILT_QUIET", False),
    )


def with_overrides(
    config: ToolConfig, cache_dir: str | None = None, verify: bool | None = None
) -> ToolConfig:
    changes = {}
    if cache_dir:
        changes["cache_dir"] = cache_dir
    if verify is not None:
        changes["verify"] = verify
    return replace(config, **changes) if changes else config


def validate_config(config: ToolConfig) -> None:
    problems = []
    if config.max_group_order < 1:
        problems.append("BLOCKTILT_MAX_GROUP_ORDER")
    if config.spot_checks < 0:
        problems.append("BLOCKTILT_SPOT_CHECKS")
    if not config.cache_file:
        problems.append("BLOCKTILT_CACHE_FILE")
    if problems:
        raise ValueError(f"Invalid environment variables: {', '.join(problems)}")
