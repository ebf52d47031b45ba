"""Prestable and stable points, the bullet construction, and truncated
universal models built from stable points.

A point ``x`` of layer ``n`` is prestable when exactly one point of layer
``n+1`` has root ``x`` (that point is then ``up x``); it is stable when every
point above it is prestable.  Both notions look one layer ahead.  Deep layers
grow very fast, so most questions here are answered by :class:`LazyComplex`,
which only builds the up-cones it is asked about.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

from .errors import InsufficientDepth, MissingElement, StabilizationFailure
from .poset import FinitePoset, MonotoneMap, free_dl_dual, iter_bits, mask_from
from .vietoris import Complex, GContext, build_complex, enumerate_rooted_g_open

Element = Hashable   # int at level 0, frozenset of level k-1 elements at level k


# -- tables over a fully built complex ------------------------------------------------

@dataclass(frozen=True)
class StabilityTable:
    """``prestable[i][x]`` and ``stable[i][x]`` are True, False or None (unknown)."""

    prestable: tuple[tuple[bool | None, ...], ...]
    stable: tuple[tuple[bool | None, ...], ...]
    known_through: int


def stability_table(c: Complex, lookahead: int = 2) -> StabilityTable:
    """Flags for every layer; the last ``lookahead`` layers are left unknown.

    Also checks that a point whose root is stable is itself stable.
    """
    if c.depth < lookahead:
        raise InsufficientDepth(f"complex depth {c.depth} leaves no layer with "
                                f"{lookahead} layers of lookahead")
    known = c.depth - lookahead
    pre, stab = [], []
    for i, layer in enumerate(c.layers):
        n = len(layer)
        if i > known:
            pre.append((None,) * n)
            stab.append((None,) * n)
            continue
        counts = [0] * n
        for r in c[i + 1].root.assignment:
            counts[r] += 1
        p = tuple(k == 1 for k in counts)
        s = tuple(all(p[y] for y in iter_bits(layer.poset.up[x])) for x in range(n))
        pre.append(p)
        stab.append(s)
    for i in range(1, known + 1):
        root = c[i].root.assignment
        for x, r in enumerate(root):
            if stab[i - 1][r] and not stab[i][x]:
                raise StabilizationFailure(
                    f"{c[i].poset.elements[x]} has a stable root but is not stable")
    return StabilityTable(tuple(pre), tuple(stab), known)


# -- local exploration ------------------------------------------------------------------

class LazyComplex:
    """The unrestricted complex over ``base``, explored one up-cone at a time.

    Level 0 points are indices of ``base``; a level ``k`` point is the
    frozenset of its level ``k-1`` members, and ``C <= D`` iff ``D ⊆ C``.
    For a point ``s`` of level ``k >= 1`` the roots of the points above ``s``
    are exactly the members of ``s`` (``s ∩ up m`` is a point rooted at ``m``),
    so admissibility of a set only needs the sets themselves and never a
    whole layer.
    """

    def __init__(self, base: FinitePoset, witnesses: Sequence[MonotoneMap] | None = None):
        self.ctx0 = GContext(base, tuple(witnesses) if witnesses
                             else (MonotoneMap.terminal(base),))
        self.base = base
        self._cone: dict = {}
        self._root: dict = {}
        self._key: dict = {}
        self._full: dict[int, Complex] = {}

    # canonical ordering of nested sets
    def key(self, k: int, x: Element) -> tuple:
        if k == 0:
            return (x,)
        got = self._key.get((k, x))
        if got is None:
            got = tuple(sorted(self.key(k - 1, m) for m in x))
            self._key[(k, x)] = got
        return got

    def leq(self, k: int, a: Element, b: Element) -> bool:
        if k == 0:
            return self.base.leq(a, b)
        return b <= a

    def least(self, k: int, C) -> Element | None:
        """The least of the level ``k`` points in ``C``, if there is one."""
        for m in C:
            if all(self.leq(k, m, n) for n in C):
                return m
        return None

    def root(self, k: int, x: Element) -> Element:
        if k == 0:
            raise ValueError("level-0 points have no root")
        r = self._root.get((k, x))
        if r is None:
            r = self.least(k - 1, x)
            if r is None:
                raise MissingElement("set is not rooted")
            self._root[(k, x)] = r
        return r

    def _local(self, k: int, elems):
        """Level ``k`` points as a poset, with the witness values they carry and
        the values their up-cones demand."""
        elems = sorted(elems, key=lambda e: self.key(k, e))
        idx = {e: i for i, e in enumerate(elems)}
        up = [mask_from(j for j, f in enumerate(elems) if self.leq(k, e, f)) for e in elems]
        P = FinitePoset([str(i) for i in range(len(elems))], up, check=False)
        vals, needs = [], []
        if k == 0:
            for w in self.ctx0.witnesses:
                a = w.assignment
                vals.append([a[e] for e in elems])
                needs.append([mask_from(a[b] for b in iter_bits(self.base.up[e]))
                              for e in elems])
        else:
            code: dict = {}
            vals.append([code.setdefault(self.root(k, e), len(code)) for e in elems])
            needs.append([mask_from(code.setdefault(m, len(code)) for m in e)
                          for e in elems])
        wits = []
        for v in vals:
            top = FinitePoset.antichain(max(v) + 1)
            wits.append(MonotoneMap(P, top, v, check=False))
        return elems, idx, GContext(P, tuple(wits)), needs

    def _search(self, k: int, elems, roots=None, limit=None) -> list[frozenset]:
        # admissible subsets of the level k points ``elems``, as level k+1 points
        elems, idx, ctx, needs = self._local(k, elems)
        rmask = None if roots is None else mask_from(idx[r] for r in roots)
        out = []
        for r, mask in enumerate_rooted_g_open(ctx, roots=rmask, limit=limit,
                                               needs=needs):
            D = frozenset(elems[i] for i in iter_bits(mask))
            self._root.setdefault((k + 1, D), elems[r])
            out.append(D)
        return out

    def cone(self, k: int, x: Element) -> frozenset:
        """Points of level ``k`` above ``x``, including ``x``."""
        if k == 0:
            return frozenset(iter_bits(self.base.up[x]))
        got = self._cone.get((k, x))
        if got is None:
            got = self._cone[(k, x)] = frozenset(self._search(k - 1, x))
        return got

    def up_point(self, k: int, x: Element) -> frozenset:
        """``up x`` as a point of level ``k+1``."""
        D = self.cone(k, x)
        self._root.setdefault((k + 1, D), x)
        return D

    def fibre(self, k: int, x: Element, limit: int | None = None) -> list[frozenset]:
        """Points of level ``k+1`` whose root is ``x`` (at most ``limit``)."""
        return self._search(k, self.cone(k, x), roots=[x], limit=limit)

    def is_point(self, k: int, C) -> bool:
        """Is the set ``C`` of level ``k-1`` points a point of level ``k``?"""
        C = frozenset(C)
        if not C or self.least(k - 1, C) is None:
            return False
        for s in C:
            above = [t for t in C if self.leq(k - 1, s, t)]
            if k - 1 == 0:
                for w in self.ctx0.witnesses:
                    a = w.assignment
                    if ({a[b] for b in iter_bits(self.base.up[s])}
                            - {a[t] for t in above}):
                        return False
            elif set(s) - {self.root(k - 1, t) for t in above}:
                return False
        return True

    def prestable(self, k: int, x: Element) -> bool:
        return len(self.fibre(k, x, limit=2)) == 1

    def stable(self, k: int, x: Element) -> bool:
        return all(self.prestable(k, y) for y in self.cone(k, x))

    def bullet(self, k: int, x: Element) -> frozenset:
        """``{up y : y >= x}``, a set of level ``k+1`` points."""
        return frozenset(self.up_point(k, y) for y in self.cone(k, x))

    # bridging to fully built layers
    def complex(self, depth: int) -> Complex:
        got = self._full.get(depth)
        if got is None:
            got = build_complex(self.base, self.ctx0.witnesses, depth)
            self._full[depth] = got
        return got

    def points(self, k: int) -> list[Element]:
        """Every point of level ``k`` in layer order (builds the layer)."""
        c = self.complex(k)
        return [self.from_layer(c, k, i) for i in range(len(c[k]))]

    def from_layer(self, c: Complex, k: int, i: int) -> Element:
        if k == 0:
            return i
        return frozenset(self.from_layer(c, k - 1, j)
                         for j in iter_bits(c[k].provenance[i]))


# -- the bullet laws ----------------------------------------------------------------------

@dataclass(frozen=True)
class BulletCheck:
    level: int
    point: Element
    bullet: frozenset
    admissible: bool
    double_root_ok: bool
    stable: bool

    @property
    def ok(self) -> bool:
        return self.admissible and self.double_root_ok and self.stable


def bullet_embed(lc: LazyComplex, k: int, x: Element) -> BulletCheck:
    B = lc.bullet(k, x)
    adm = lc.is_point(k + 2, B)
    rr = lc.root(k + 1, lc.root(k + 2, B)) == x if adm else False
    return BulletCheck(k, x, B, adm, rr, adm and lc.stable(k + 2, B))


def bullet_in_complex(c: Complex, k: int, x: int) -> int:
    """Index of ``x•`` in layer ``k+2`` of a fully built complex."""
    if c.depth < k + 2:
        raise InsufficientDepth(f"need layer {k + 2}, complex has depth {c.depth}")
    lower, mid, top = c[k], c[k + 1], c[k + 2]
    members = 0
    for y in iter_bits(lower.poset.up[x]):
        j = mid.element_of(lower.poset.up[y])
        if j is None:
            raise MissingElement(f"up of {lower.poset.elements[y]} missing from layer {k + 1}")
        members |= 1 << j
    idx = top.element_of(members)
    if idx is None:
        raise MissingElement(f"bullet of {lower.poset.elements[x]} missing from layer {k + 2}")
    return idx


@dataclass(frozen=True)
class PersistenceCheck:
    level: int
    point: Element
    through: int
    ok: bool


def persistence_check(lc: LazyComplex, k: int, x: Element, depth: int) -> PersistenceCheck:
    """Follow a stable ``x`` up to ``depth``: each next point is the only one
    over the previous, and the root maps its up-cone bijectively and
    order-isomorphically onto the previous up-cone."""
    cur, level = x, k
    while level < depth:
        fib = lc.fibre(level, cur, limit=2)
        if len(fib) != 1:
            return PersistenceCheck(k, x, level, False)
        nxt = fib[0]
        up_next = lc.cone(level + 1, nxt)
        up_cur = lc.cone(level, cur)
        image = {lc.root(level + 1, d): d for d in up_next}
        if len(image) != len(up_next) or set(image) != set(up_cur):
            return PersistenceCheck(k, x, level, False)
        for a in up_cur:
            for b in up_cur:
                if (b in lc.cone(level, a)) != (image[b] in lc.cone(level + 1, image[a])):
                    return PersistenceCheck(k, x, level, False)
        if not lc.stable(level + 1, nxt):
            return PersistenceCheck(k, x, level, False)
        cur, level = nxt, level + 1
    return PersistenceCheck(k, x, depth, True)


# -- universal models -----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class UniversalModel:
    """Stable points of layer ``depth`` with the induced order."""

    depth: int
    poset: FinitePoset
    layer_indices: tuple[int, ...]
    points: tuple[Element, ...]


def universal_model(base: FinitePoset, depth: int,
                    witnesses: Sequence[MonotoneMap] | None = None,
                    lazy: LazyComplex | None = None) -> UniversalModel:
    lc = lazy if lazy is not None else LazyComplex(base, witnesses)
    c = lc.complex(depth)
    layer = c[depth]
    pts = lc.points(depth)
    keep = [i for i, p in enumerate(pts) if lc.stable(depth, p)]
    sub = layer.poset.subposet(mask_from(keep), name=f"U{depth}")
    return UniversalModel(depth, sub, tuple(keep), tuple(pts[i] for i in keep))


def n_universal_model(n: int, depth: int) -> UniversalModel:
    base, _ = free_dl_dual(n)
    return universal_model(base, depth)


def truncation_embedding(lc: LazyComplex, lower: UniversalModel,
                         upper: UniversalModel) -> MonotoneMap:
    """Send each stable point to its only preimage one layer up.

    Raises :class:`StabilizationFailure` if the result is not an order
    embedding compatible with the root map.
    """
    if upper.depth != lower.depth + 1:
        raise ValueError("models must be at consecutive depths")
    where = {p: i for i, p in enumerate(upper.points)}
    out = []
    for x in lower.points:
        fib = lc.fibre(lower.depth, x, limit=2)
        if len(fib) != 1 or fib[0] not in where:
            raise StabilizationFailure("a stable point does not lift to a stable point")
        if lc.root(upper.depth, fib[0]) != x:
            raise StabilizationFailure("lift is not root compatible")
        out.append(where[fib[0]])
    f = MonotoneMap(lower.poset, upper.poset, out)
    if not f.is_order_embedding():
        raise StabilizationFailure("truncation map is not an order embedding")
    return f
