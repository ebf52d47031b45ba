"""Restricted steps for Boolean, KC and Gödel (LC) algebras, their upset-filter
characterizations, and the stabilization checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import modes
from .birkhoff import upsets
from .errors import NotPrelinear, StabilizationFailure
from .modes import VarietyMode
from .poset import (FinitePoset, IsoWitness, MonotoneMap, is_antichain,
                    is_prelinear, iter_bits, product)
from .vietoris import Complex, GContext, Layer, build_complex, vietoris_step


# -- Boolean -----------------------------------------------------------------------

def boolean_step(P: FinitePoset) -> Layer:
    """Singletons of ``P`` (the only admissible members at the Boolean stage)."""
    return vietoris_step(GContext.terminal(P), VarietyMode.BOOL, stage=1)


def boolean_filter_members(P: FinitePoset) -> frozenset[int]:
    """Members ``C`` of the unrestricted first layer with ``C ⊆ X-U`` or
    ``C ⊆ U`` for every upset ``U`` (returned as provenance masks).

    ``X-U`` is where the negation of ``U`` added by the step lives: the new
    implication ``U -> V`` is the set of ``C`` inside ``(X-U) ∪ V``.
    """
    layer = vietoris_step(GContext.terminal(P))
    ups = upsets(P).members
    return frozenset(C for C in layer.provenance
                     if all(not C & U or not C & ~U for U in ups))


# -- KC ----------------------------------------------------------------------------

def _ground(stage2: Layer) -> FinitePoset:
    if stage2.previous is None or stage2.previous.previous is None:
        raise ValueError("expected a layer of index >= 2")
    return stage2.previous.previous.poset


def is_well_directed(stage2: Layer, i: int) -> bool:
    """``up D ∩ down D'`` is non-empty for all members ``D, D'`` of element ``i``.

    Members are elements of the layer below, themselves subsets of the layer
    two below; the closures are taken there.
    """
    prev = stage2.previous
    members = [prev.provenance[j] for j in iter_bits(stage2.provenance[i])]
    return modes.is_well_directed(members, _ground(stage2))


def kc_filter_member(stage2: Layer, i: int, ground_upsets: Sequence[int]) -> bool:
    """For every upset ``U`` of the ground: all members avoid ``U`` or all meet it."""
    prev = stage2.previous
    members = [prev.provenance[j] for j in iter_bits(stage2.provenance[i])]
    for U in ground_upsets:
        hits = [bool(D & U) for D in members]
        if any(hits) and not all(hits):
            return False
    return True


@dataclass(frozen=True)
class Agreement:
    """Outcome of comparing two predicates on every element of a layer."""

    holds: bool
    checked: int
    disagreements: tuple[int, ...]


def kc_filter_characterization(stage2: Layer) -> Agreement:
    ups = upsets(_ground(stage2)).members
    bad = tuple(i for i in range(len(stage2))
                if is_well_directed(stage2, i) != kc_filter_member(stage2, i, ups))
    return Agreement(not bad, len(stage2), bad)


# -- LC ----------------------------------------------------------------------------

def is_linearised(layer: Layer, i: int) -> bool:
    """The members of element ``i`` are pairwise comparable in the layer below."""
    return modes.is_linearised(layer.provenance[i], layer.previous.poset)


def _split_pairs(ambient: FinitePoset) -> list[tuple[int, int]]:
    # (U - V, V - U) over all upset pairs, both sides non-empty, largest first
    ups = upsets(ambient).members
    pairs = {(U & ~V, V & ~U) for U in ups for V in ups if U & ~V and V & ~U}
    return sorted(pairs, key=lambda ab: (-(ab[0] | ab[1]).bit_count(), ab))


def lc_filter_member(C: int, pairs: Sequence[tuple[int, int]]) -> bool:
    """``C ⊆ -U ∪ V`` or ``C ⊆ -V ∪ U`` for every pair of upsets."""
    return not any(C & a and C & b for a, b in pairs)


def lc_filter_characterization(layer: Layer) -> Agreement:
    pairs = _split_pairs(layer.previous.poset)
    bad = tuple(i for i, C in enumerate(layer.provenance)
                if is_linearised(layer, i) != lc_filter_member(C, pairs))
    return Agreement(not bad, len(layer), bad)


@dataclass(frozen=True, eq=False)
class LCFree:
    """Second linearised layer plus the evidence that it has stabilized."""

    layer: Layer
    complex: Complex
    prelinear: bool
    root_iso: IsoWitness | None

    @property
    def poset(self) -> FinitePoset:
        return self.layer.poset


def _root_iso(layer: Layer) -> IsoWitness | None:
    r = layer.root
    if not r.is_isomorphism():
        return None
    back = [0] * len(r.codomain)
    for i, j in enumerate(r.assignment):
        back[j] = i
    return IsoWitness(r, MonotoneMap(r.codomain, r.domain, back, check=False))


def lc_free(X: FinitePoset, witnesses: Sequence[MonotoneMap] | None = None) -> LCFree:
    """Linearised complex to depth 3; returns layer 2 once it is certified
    prelinear and isomorphic to layer 3 through the root map."""
    cx = build_complex(X, witnesses, 3, VarietyMode.LC)
    two = cx[2]
    pre = is_prelinear(two.poset)
    iso = _root_iso(cx[3])
    if not pre:
        raise StabilizationFailure("second linearised layer is not prelinear")
    if iso is None:
        raise StabilizationFailure("root map from the third linearised layer is not "
                                   "an isomorphism")
    return LCFree(two, cx, pre, iso)


def godel_coproduct(P: FinitePoset, Q: FinitePoset) -> LCFree:
    """Dual of the coproduct of the Gödel algebras dual to ``P`` and ``Q``:
    the linearised complex over ``P x Q`` with both projections as witnesses."""
    for R, label in ((P, "left"), (Q, "right")):
        if not is_prelinear(R):
            raise NotPrelinear(f"{label} poset is not prelinear")
    base, pp, pq = product(P, Q)
    return lc_free(base, [pp, pq])


# -- stabilization --------------------------------------------------------------------

@dataclass(frozen=True)
class StabilizationVerdict:
    root_is_iso: bool
    antichain: bool

    @property
    def agrees(self) -> bool:
        return self.root_is_iso == self.antichain


def stabilization_check(X: FinitePoset) -> StabilizationVerdict:
    layer = vietoris_step(GContext.terminal(X))
    return StabilizationVerdict(layer.root.is_isomorphism(), is_antichain(X))
