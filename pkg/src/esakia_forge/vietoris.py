"""The one-step construction of rooted g-open subsets and its iteration.

A step takes a poset ``X`` with witness maps ``g_1 .. g_k`` out of it and
returns the poset of subsets ``S`` of ``X`` that have a least element and
satisfy, for every witness ``g``::

    for all s in S and b >= s there is s' in S with s <= s' and g(s') = g(b)

ordered by reverse inclusion, together with the root map ``S -> min S``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .config import get_config
from .errors import (ImageNotInLayer, IncompatibleMaps, MissingElement,
                     NotGOpen, NotPMorphism, SizeLimitExceeded)
from .modes import VarietyMode
from .poset import (FinitePoset, IsoWitness, MonotoneMap, disjoint_union,
                    is_isomorphic, is_p_morphism, iter_bits, popcount,
                    product, pullback)


@dataclass(frozen=True, eq=False)
class GContext:
    base: FinitePoset
    witnesses: tuple[MonotoneMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "witnesses", tuple(self.witnesses))
        if not self.witnesses:
            raise IncompatibleMaps("at least one witness map is required")
        for w in self.witnesses:
            if w.domain != self.base:
                raise IncompatibleMaps("every witness must have the base as domain")

    @classmethod
    def terminal(cls, base: FinitePoset) -> "GContext":
        return cls(base, (MonotoneMap.terminal(base),))


@dataclass(frozen=True, eq=False)
class Layer:
    """One stage of a complex.

    For ``index >= 1`` element ``i`` *is* the subset ``provenance[i]`` (a bit
    mask) of the previous layer, and ``root`` sends it to its least member.
    Layer 0 carries the base poset and the witnesses the complex started from.
    """

    index: int
    poset: FinitePoset
    provenance: tuple[int, ...] | None
    root: MonotoneMap | None
    mode: VarietyMode
    previous: "Layer | None" = None
    witnesses: tuple[MonotoneMap, ...] = ()
    _lookup: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.provenance is not None and not self._lookup:
            self._lookup.update({m: i for i, m in enumerate(self.provenance)})

    def __len__(self) -> int:
        return len(self.poset)

    def element_of(self, mask: int) -> int | None:
        """Index of the element whose provenance is ``mask``, if present."""
        return self._lookup.get(mask)

    def label(self, i: int) -> str:
        """Nested set notation in terms of the base, e.g. ``{{0,1},{1}}``."""
        if self.previous is None:
            return self.poset.elements[i]
        inner = sorted(self.previous.label(j) for j in iter_bits(self.provenance[i]))
        return "{" + ",".join(inner) + "}"

    def context(self) -> GContext:
        """Context for the next step: this poset with its root (or base witnesses)."""
        if self.root is None:
            return GContext(self.poset, self.witnesses)
        return GContext(self.poset, (self.root,))


@dataclass(frozen=True, eq=False)
class Complex:
    layers: tuple[Layer, ...]
    mode: VarietyMode

    @property
    def depth(self) -> int:
        return len(self.layers) - 1

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    def __getitem__(self, i: int) -> Layer:
        return self.layers[i]

    def to_base(self, k: int) -> MonotoneMap:
        """Composite of root maps from layer ``k`` down to layer 0."""
        f = MonotoneMap.identity(self.layers[k].poset)
        for i in range(k, 0, -1):
            f = f.then(self.layers[i].root)
        return f


# -- g-openness -------------------------------------------------------------------

def _image(mask: int, values: Sequence[int]) -> int:
    out = 0
    for i in iter_bits(mask):
        out |= 1 << values[i]
    return out


def g_open_mask(X: FinitePoset, witnesses: Sequence[MonotoneMap], S: int) -> bool:
    for w in witnesses:
        vals = w.assignment
        for s in iter_bits(S):
            cone = X.up[s]
            if _image(cone, vals) & ~_image(S & cone, vals):
                return False
    return True


def is_g_open_subset(ctx: GContext, S) -> bool:
    """Condition (*) for the inclusion of ``S`` (names or a bit mask)."""
    mask = S if isinstance(S, int) else ctx.base.mask_of(S)
    return g_open_mask(ctx.base, ctx.witnesses, mask)


def is_g_open_map(f: MonotoneMap, g: MonotoneMap) -> bool:
    """``f(a) <= b`` implies ``g(f(a')) = g(b)`` for some ``a' >= a``."""
    if f.codomain != g.domain:
        raise IncompatibleMaps("codomain of f must be the domain of g")
    X, Y = f.domain, f.codomain
    gf = [g.assignment[v] for v in f.assignment]
    for a in range(len(X)):
        need = _image(Y.up[f.assignment[a]], g.assignment)
        if need & ~_image(X.up[a], gf):
            return False
    return True


# -- enumeration ------------------------------------------------------------------

class _Filter:
    """Membership filter consulted while a subset is grown top-down."""

    def admit(self, y: int, S: int) -> bool:
        return True


class _ChainFilter(_Filter):
    def __init__(self, X: FinitePoset):
        self.up = X.up

    def admit(self, y, S):
        # members already chosen lie above or beside y; all must be above
        return not S & ~self.up[y]


class _WellDirectedFilter(_Filter):
    def __init__(self, source: Layer):
        ground = source.previous.poset
        self.ups = [ground.up_mask(D) for D in source.provenance]
        self.downs = [ground.down_mask(D) for D in source.provenance]

    def admit(self, y, S):
        uy, dy = self.ups[y], self.downs[y]
        for s in iter_bits(S):
            if not (uy & self.downs[s]) or not (self.ups[s] & dy):
                return False
        return True


def _make_filter(mode: VarietyMode, stage: int, X: FinitePoset,
                 source: Layer | None) -> _Filter | None:
    if not mode.restricts(stage):
        return None
    if mode is VarietyMode.LC:
        return _ChainFilter(X)
    if mode is VarietyMode.KC:
        if source is None or source.previous is None:
            raise ValueError("the KC filter needs the layer the step starts from")
        return _WellDirectedFilter(source)
    return None


class _Enough(Exception):
    pass


def enumerate_rooted_g_open(ctx: GContext, mode: VarietyMode = VarietyMode.HA,
                            stage: int = 1, source: Layer | None = None,
                            search_cap: int | None = None, *,
                            within: int | None = None, roots: int | None = None,
                            limit: int | None = None,
                            needs: Sequence[Sequence[int]] | None = None,
                            ) -> list[tuple[int, int]]:
    """All admissible subsets of ``ctx.base`` as ``(root, mask)`` pairs.

    The list is sorted by root index, then cardinality, then mask value.
    ``within`` restricts the members (the openness condition still looks at
    whole up-cones of the base), ``roots`` restricts the roots, and
    ``limit`` stops the search for a root after that many hits.  ``needs``
    overrides, per witness and element, the mask of witness values that the
    up-cone of the element demands (by default read off the base itself).

    Per root ``x`` the up-cone of ``x`` is scanned from the top down.  An
    element may join only once its own condition holds (everything above it
    has been decided), and a branch is cut as soon as some fibre required by
    ``x`` has no remaining candidate.
    """
    X = ctx.base
    cap = search_cap if search_cap is not None else get_config().search_cap
    mode = VarietyMode.parse(mode)
    filt = _make_filter(mode, stage, X, source)
    singletons_only = mode is VarietyMode.BOOL and mode.restricts(stage)
    within = X.full if within is None else within
    roots = within if roots is None else roots & within
    vals = [w.assignment for w in ctx.witnesses]
    if needs is None:
        cones = [[_image(X.up[y], v) for y in range(len(X))] for v in vals]
    else:
        cones = [list(nd) for nd in needs]
    desc = list(reversed(X.linear_extension()))
    found: list[tuple[int, int]] = []
    nodes = 0

    for x in iter_bits(roots):
        cone = X.up[x]
        if singletons_only:
            if all(not c[x] & ~(1 << v[x]) for v, c in zip(vals, cones)):
                found.append((x, 1 << x))
            continue
        avail = cone & within
        cands = [y for y in desc if (avail >> y) & 1 and y != x]
        need = [c[x] for c in cones]
        if any(nd & ~_image(avail, v) for v, nd in zip(vals, need)):
            continue
        counts = []
        for v in vals:
            cnt: dict[int, int] = {}
            for y in iter_bits(avail):
                cnt[v[y]] = cnt.get(v[y], 0) + 1
            counts.append(cnt)
        xbit = 1 << x
        hits = 0

        def grow(k: int, S: int) -> None:
            nonlocal nodes, hits
            nodes += 1
            if nodes > cap:
                raise SizeLimitExceeded(f"subset search exceeded {cap} nodes")
            if k == len(cands):
                T = S | xbit
                for v, nd in zip(vals, need):
                    if nd & ~_image(T, v):
                        return
                if filt is not None and not filt.admit(x, S):
                    return
                found.append((x, T))
                hits += 1
                if limit is not None and hits >= limit:
                    raise _Enough
                return
            y = cands[k]
            ybit = 1 << y
            T = (S | ybit) & X.up[y]
            ok = all(not (c[y] & ~_image(T, v)) for v, c in zip(vals, cones))
            if ok and (filt is None or filt.admit(y, S)):
                grow(k + 1, S | ybit)
            # leave y out: every fibre x needs must stay reachable
            alive = True
            for v, cnt in zip(vals, counts):
                cnt[v[y]] -= 1
                if cnt[v[y]] == 0:
                    alive = False
            if alive:
                grow(k + 1, S)
            for v, cnt in zip(vals, counts):
                cnt[v[y]] += 1

        try:
            grow(0, 0)
        except _Enough:
            pass

    found.sort(key=lambda rm: (rm[0], popcount(rm[1]), rm[1]))
    return found


def _reverse_inclusion_order(roots: Sequence[int], masks: Sequence[int]) -> list[int]:
    """Up-masks for the order ``C <= D`` iff ``D ⊆ C``."""
    by_root: dict[int, list[int]] = {}
    for j, r in enumerate(roots):
        by_root.setdefault(r, []).append(j)
    ups = []
    for i, C in enumerate(masks):
        u = 0
        for r in iter_bits(C):
            for j in by_root.get(r, ()):
                if not masks[j] & ~C:
                    u |= 1 << j
        ups.append(u)
    return ups


def _layer_from_masks(found: list[tuple[int, int]], ctx: GContext, mode: VarietyMode,
                      index: int, previous: Layer | None) -> Layer:
    X = ctx.base
    cap = get_config().layer_cap
    if len(found) > cap:
        raise SizeLimitExceeded(f"layer {index} would have {len(found)} elements (cap {cap})")
    roots = [r for r, _ in found]
    masks = [m for _, m in found]
    names = [f"L{index}:{X.elements[r]}:{m:x}" for r, m in zip(roots, masks)]
    poset = FinitePoset(names, _reverse_inclusion_order(roots, masks), name=f"L{index}",
                        check=False)
    root = MonotoneMap(poset, X, roots, check=False)
    return Layer(index, poset, tuple(masks), root, mode, previous, ctx.witnesses)


def vietoris_step(ctx: GContext, mode: VarietyMode | str = VarietyMode.HA, *,
                  stage: int = 1, source: Layer | None = None,
                  index: int | None = None) -> Layer:
    """One step over ``ctx``; ``stage`` decides whether the mode's filter applies."""
    mode = VarietyMode.parse(mode)
    masks = enumerate_rooted_g_open(ctx, mode, stage, source)
    if source is None:
        source = Layer(0, ctx.base, None, None, mode, None, ctx.witnesses)
    return _layer_from_masks(masks, ctx, mode, index if index is not None else stage,
                             source)


def base_layer(base: FinitePoset, witnesses: Sequence[MonotoneMap] | None = None,
               mode: VarietyMode | str = VarietyMode.HA) -> Layer:
    witnesses = tuple(witnesses) if witnesses else (MonotoneMap.terminal(base),)
    GContext(base, witnesses)
    return Layer(0, base, None, None, VarietyMode.parse(mode), None, witnesses)


def build_complex(base: FinitePoset, witnesses: Sequence[MonotoneMap] | None = None,
                  depth: int = 1, mode: VarietyMode | str = VarietyMode.HA) -> Complex:
    """Layers ``V_0 .. V_depth``; the first step uses the base witnesses and every
    later step uses the previous root map."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    mode = VarietyMode.parse(mode)
    layers = [base_layer(base, witnesses, mode)]
    for i in range(1, depth + 1):
        prev = layers[-1]
        try:
            layers.append(vietoris_step(prev.context(), mode, stage=i, source=prev,
                                        index=i))
        except SizeLimitExceeded as exc:
            raise SizeLimitExceeded(f"{exc} while building layer {i}",
                                    partial=Complex(tuple(layers), mode)) from exc
    return Complex(tuple(layers), mode)


# -- liftings -----------------------------------------------------------------------

def lift_point_map(h: MonotoneMap, ctx: GContext, target: Layer) -> MonotoneMap:
    """The unique root-compatible, root-open lift ``a -> h[up a]``."""
    if h.codomain != ctx.base:
        raise IncompatibleMaps("h must land in the base of the context")
    for w in ctx.witnesses:
        if not is_g_open_map(h, w):
            raise NotGOpen("h is not open relative to every witness")
    Z = h.domain
    out = []
    for a in range(len(Z)):
        mask = h.image_mask(Z.up[a])
        idx = target.element_of(mask)
        if idx is None:
            raise MissingElement(
                f"h[up {Z.elements[a]}] is not an element of the target layer")
        out.append(idx)
    return MonotoneMap(Z, target.poset, out, check=False)


def lift_direct_image(p: MonotoneMap, ctx_x: GContext, ctx_y: GContext,
                      source: Layer | None = None, target: Layer | None = None,
                      ) -> MonotoneMap:
    """``C -> p[C]`` from the step over ``ctx_x`` to the step over ``ctx_y``."""
    if p.domain != ctx_x.base or p.codomain != ctx_y.base:
        raise IncompatibleMaps("p must go from the base of ctx_x to the base of ctx_y")
    if len(ctx_x.witnesses) != len(ctx_y.witnesses):
        raise IncompatibleMaps("witness lists must correspond")
    for gx, gy in zip(ctx_x.witnesses, ctx_y.witnesses):
        if [gy.assignment[v] for v in p.assignment] != list(gx.assignment):
            raise IncompatibleMaps("witness triangle does not commute")
    source = source if source is not None else vietoris_step(ctx_x)
    target = target if target is not None else vietoris_step(ctx_y)
    out = []
    for i, C in enumerate(source.provenance):
        idx = target.element_of(p.image_mask(C))
        if idx is None:
            raise ImageNotInLayer(
                f"image of {source.poset.elements[i]} is not in the target layer")
        out.append(idx)
    return MonotoneMap(source.poset, target.poset, out, check=False)


def unit_thread(P: FinitePoset, x: str, depth: int, complex_: Complex) -> list[str]:
    """``(x, up x, up(up x), ...)`` located in successive layers."""
    if complex_.layers[0].poset != P:
        raise IncompatibleMaps("complex is not built over this poset")
    if complex_.depth < depth:
        raise MissingElement(f"complex has depth {complex_.depth} < {depth}")
    cur = P.index(x)
    thread = [P.elements[cur]]
    for k in range(1, depth + 1):
        below, layer = complex_.layers[k - 1], complex_.layers[k]
        idx = layer.element_of(below.poset.up[cur])
        if idx is None:
            raise MissingElement(f"iterated up-cone missing from layer {k}")
        cur = idx
        thread.append(layer.poset.elements[cur])
    return thread


# -- products, pullbacks, codistributivity -------------------------------------------

@dataclass(frozen=True, eq=False)
class ProjectedComplex:
    """A complex over a product-like base with its projections per depth."""

    complex: Complex
    left: tuple[MonotoneMap, ...]
    right: tuple[MonotoneMap, ...]


def _projected(base, px, py, depth, mode) -> ProjectedComplex:
    cx = build_complex(base, [px, py], depth, mode)
    left = tuple(cx.to_base(k).then(px) for k in range(depth + 1))
    right = tuple(cx.to_base(k).then(py) for k in range(depth + 1))
    return ProjectedComplex(cx, left, right)


def product_complex(X: FinitePoset, Y: FinitePoset, depth: int,
                    mode: VarietyMode | str = VarietyMode.HA) -> ProjectedComplex:
    base, px, py = product(X, Y)
    return _projected(base, px, py, depth, VarietyMode.parse(mode))


def pullback_complex(f: MonotoneMap, g: MonotoneMap, depth: int) -> ProjectedComplex:
    for m, label in ((f, "f"), (g, "g")):
        if not is_p_morphism(m):
            raise NotPMorphism(f"{label} is not a p-morphism")
    base, px, py = pullback(f, g)
    return _projected(base, px, py, depth, VarietyMode.HA)


@dataclass(frozen=True)
class CodistributivityResult:
    holds: bool
    witnesses: tuple[IsoWitness | None, ...]


def codistributivity_check(X: FinitePoset, Y: FinitePoset, Z: FinitePoset,
                           depth: int) -> CodistributivityResult:
    """Compare ``V_n(X x (Y + Z))`` with ``V_n(X x Y) + V_n(X x Z)`` layerwise."""
    YZ, _, _ = disjoint_union(Y, Z)
    left = product_complex(X, YZ, depth).complex
    first = product_complex(X, Y, depth).complex
    second = product_complex(X, Z, depth).complex
    cap = max(get_config().iso_cap, get_config().layer_cap)
    wits = []
    for k in range(depth + 1):
        rhs, _, _ = disjoint_union(first[k].poset, second[k].poset)
        wits.append(is_isomorphic(left[k].poset, rhs, cap=cap))
    return CodistributivityResult(all(w is not None for w in wits), tuple(wits))
