"""Size caps shared by the enumerating operations."""
from __future__ import annotations

import contextlib
import os
from dataclasses import dataclass, replace

ENV_CAP = "ESAKIA_FORGE_CAP"


@dataclass(frozen=True)
class RunConfig:
    """Limits applied by the enumerators.

    ``search_cap`` bounds the number of search nodes visited while
    enumerating the subsets of one Vietoris step; ``layer_cap`` bounds the
    number of elements of any layer; ``upset_base_cap`` bounds the size of
    a poset whose upsets are listed exhaustively; ``valuation_cap`` bounds
    the number of valuations swept by a validity check.
    """

    search_cap: int = 1_000_000
    layer_cap: int = 20_000
    upset_base_cap: int = 24
    upset_cap: int = 200_000
    valuation_cap: int = 4_000_000
    product_cap: int = 4096
    iso_cap: int = 64
    emit: str = "json"

    def __post_init__(self):
        for field in ("search_cap", "layer_cap", "upset_base_cap", "upset_cap",
                      "valuation_cap", "product_cap", "iso_cap"):
            if getattr(self, field) <= 0:
                raise ValueError(f"{field} must be positive")

    def with_overrides(self, **kwargs) -> "RunConfig":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


def default_config() -> RunConfig:
    cfg = RunConfig()
    env = os.environ.get(ENV_CAP)
    if env:
        cfg = cfg.with_overrides(search_cap=int(env))
    return cfg


_current = default_config()


def get_config() -> RunConfig:
    return _current


def set_config(cfg: RunConfig) -> None:
    global _current
    _current = cfg


@contextlib.contextmanager
def overridden(**kwargs):
    """Temporarily replace some caps of the current configuration."""
    before = get_config()
    set_config(before.with_overrides(**kwargs))
    try:
        yield get_config()
    finally:
        set_config(before)
