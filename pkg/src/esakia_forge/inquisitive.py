"""Hyperspaces of finite discrete spaces, the max-preserving step and the
complex built on it, and regular elements of upset lattices."""
from __future__ import annotations

import string
from dataclasses import dataclass

from .birkhoff import UpsetLattice, upsets
from .config import get_config
from .errors import NotDiscrete, SizeLimitExceeded, StabilizationFailure
from .modes import VarietyMode
from .poset import FinitePoset, MonotoneMap, is_antichain, iter_bits, popcount
from .vietoris import (Complex, GContext, Layer, _layer_from_masks,
                       enumerate_rooted_g_open, vietoris_step)


def _require_discrete(X: FinitePoset) -> None:
    if not is_antichain(X):
        raise NotDiscrete("expected a poset with trivial order")


def vietoris_discrete(X: FinitePoset) -> FinitePoset:
    """Non-empty subsets of a discrete ``X`` under reverse inclusion.

    Element ``i`` is the subset with mask ``masks[i]`` where the masks run
    through ``1 .. 2^n - 1`` sorted by (cardinality, mask).
    """
    _require_discrete(X)
    n = len(X)
    if (1 << n) - 1 > get_config().layer_cap:
        raise SizeLimitExceeded(f"2^{n} - 1 subsets exceed the layer cap")
    masks = subset_masks(n)
    names = ["{" + ",".join(X.names_of(m)) + "}" for m in masks]
    up = [sum(1 << j for j, D in enumerate(masks) if not D & ~C) for C in masks]
    return FinitePoset(names, up, name=f"V({X.name or n})", check=False)


def subset_masks(n: int) -> list[int]:
    return sorted(range(1, 1 << n), key=lambda m: (popcount(m), m))


def medvedev_frame(n: int) -> FinitePoset:
    if n < 1:
        raise ValueError("n must be at least 1")
    names = list(string.ascii_lowercase[:n]) if n <= 26 else [str(i) for i in range(n)]
    return vietoris_discrete(FinitePoset.antichain(n, names))


def vmax_step(X: FinitePoset) -> tuple[Layer, Layer]:
    """The layer of rooted subsets ``C`` of ``V(X)`` that contain ``{x}``
    whenever some member of ``C`` contains ``x``; also returns the layer for
    ``V(X)`` it sits over."""
    VX = vietoris_discrete(X)
    masks = subset_masks(len(X))
    single = {i: masks.index(1 << i) for i in range(len(X))}
    ctx = GContext.terminal(VX)
    base = Layer(0, VX, None, None, VarietyMode.HA, None, ctx.witnesses)
    found = []
    for r, C in enumerate_rooted_g_open(ctx):
        need = 0
        for d in iter_bits(C):
            for x in iter_bits(masks[d]):
                need |= 1 << single[x]
        if not need & ~C:
            found.append((r, C))
    return _layer_from_masks(found, ctx, VarietyMode.HA, 1, base), base


@dataclass(frozen=True, eq=False)
class MComplex:
    complex: Complex
    ground: FinitePoset

    def __getitem__(self, k: int) -> Layer:
        return self.complex[k]

    @property
    def depth(self) -> int:
        return self.complex.depth


def max_census(mc: MComplex, k: int) -> dict[int, int]:
    """Maximal points of layer ``k`` sent to the point ``x`` of the ground whose
    singleton is their image in layer 0; raises if this is not a bijection."""
    layer = mc[k]
    down = mc.complex.to_base(k)
    VX = mc[0].poset
    masks = subset_masks(len(mc.ground))
    out = {}
    for i in range(len(layer)):
        if layer.poset.up[i] != 1 << i:
            continue
        m = masks[down(i)]
        if popcount(m) != 1:
            raise StabilizationFailure(f"maximal point {layer.poset.elements[i]} lies "
                                       f"over {VX.elements[down(i)]}")
        out[i] = m.bit_length() - 1
    if sorted(out.values()) != list(range(len(mc.ground))):
        raise StabilizationFailure(f"maximal points of layer {k} do not match the ground")
    return out


def m_complex(X: FinitePoset, depth: int) -> MComplex:
    """``M_0 = V(X)``, ``M_1`` the max-preserving step, then plain root-open steps."""
    _require_discrete(X)
    one, zero = vmax_step(X)
    layers = [zero] + ([one] if depth >= 1 else [])
    for i in range(2, depth + 1):
        prev = layers[-1]
        layers.append(vietoris_step(prev.context(), stage=i, source=prev, index=i))
    mc = MComplex(Complex(tuple(layers), VarietyMode.HA), X)
    for k in range(len(layers)):
        max_census(mc, k)
    return mc


# -- regular elements -------------------------------------------------------------------

def regular_elements(P: FinitePoset, L: UpsetLattice | None = None) -> tuple[int, ...]:
    L = L if L is not None else upsets(P)
    full = P.full
    out = []
    for U in L:
        nn = full & ~P.down_mask(full & ~P.down_mask(U))
        if nn == U:
            out.append(U)
    return tuple(out)


def heyting_closure(P: FinitePoset, gens, cap: int | None = None) -> frozenset[int]:
    """Smallest set containing ``gens``, the bounds, and closed under meet, join
    and implication."""
    full = P.full
    cap = cap if cap is not None else get_config().upset_cap
    seen = {0, full, *gens}
    fresh = list(seen)
    while fresh:
        cur = sorted(seen)
        nxt = []
        for a in fresh:
            for b in cur:
                for v in (a & b, a | b, full & ~P.down_mask(a & ~b),
                          full & ~P.down_mask(b & ~a)):
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
        if len(seen) > cap:
            raise SizeLimitExceeded(f"closure exceeded {cap} members")
        fresh = nxt
    return frozenset(seen)


def is_regularly_generated(P: FinitePoset) -> bool:
    L = upsets(P)
    return len(heyting_closure(P, regular_elements(P, L))) == len(L)


# -- boxes over the hyperspace ----------------------------------------------------------

def box_set(n: int, U: int) -> int:
    """``[U]``: the members of ``V(X)`` (|X| = n) contained in ``U``, as a mask."""
    return sum(1 << i for i, C in enumerate(subset_masks(n)) if not C & ~U)


def box_decomposition(VX: FinitePoset, n: int, W: int) -> list[int]:
    """Subsets ``U`` of ``X`` with ``W`` the union of the ``[U]``: one per member
    of ``W`` that is largest under inclusion."""
    masks = subset_masks(n)
    inside = [masks[i] for i in iter_bits(W)]
    tops = [C for C in inside if not any(C != D and not C & ~D for D in inside)]
    return sorted(tops)
