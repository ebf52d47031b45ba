"""Variety modes and the membership filters they impose on a step."""
from __future__ import annotations

import enum
from typing import Iterable

from .poset import FinitePoset, iter_bits


class VarietyMode(enum.Enum):
    HA = "ha"
    BOOL = "bool"
    KC = "kc"
    LC = "lc"

    @property
    def restriction_start(self) -> int:
        """First stage of a complex at which the mode's filter applies."""
        return {"ha": 0, "bool": 1, "kc": 2, "lc": 2}[self.value]

    def restricts(self, stage: int) -> bool:
        return self is not VarietyMode.HA and stage >= self.restriction_start

    @classmethod
    def parse(cls, value: "str | VarietyMode") -> "VarietyMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown variety mode {value!r}; "
                             f"expected one of ha, bool, kc, lc") from None


def is_linearised(members: int, ambient: FinitePoset) -> bool:
    """True iff the members of the subset ``members`` form a chain."""
    for i in iter_bits(members):
        if members & ~(ambient.up[i] | ambient.down[i]):
            return False
    return True


def well_directed_pair(D: int, D2: int, ground: FinitePoset) -> bool:
    """``up(D) ∩ down(D2)`` is non-empty, closures taken in ``ground``."""
    return bool(ground.up_mask(D) & ground.down_mask(D2))


def is_well_directed(members: Iterable[int], ground: FinitePoset) -> bool:
    """Every ordered pair ``(D, D')`` of member subsets of ``ground`` satisfies
    ``up(D) ∩ down(D') != ∅``."""
    members = list(members)
    ups = [ground.up_mask(D) for D in members]
    downs = [ground.down_mask(D) for D in members]
    return all(u & d for u in ups for d in downs)
