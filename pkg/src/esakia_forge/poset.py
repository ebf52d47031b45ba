"""Finite posets, monotone maps and the constructions built from them.

Elements are addressed by index; subsets of a poset are Python ``int``
bit masks over those indices.  The order is stored as the full
reflexive-transitive relation: ``up[i]`` is the mask of all ``j`` with
``i <= j`` and ``down[i]`` the mask of all ``j`` with ``j <= i``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from .config import get_config
from .errors import (IncompatibleMaps, OrderError, SizeLimitExceeded,
                     UnknownElement)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def mask_from(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class FinitePoset:
    """An immutable finite partial order.

    Build one with :meth:`from_relation` (names plus generating pairs,
    transitively closed on ingestion) or directly from up-masks when the
    relation is already known to be a partial order.
    """

    __slots__ = ("elements", "up", "down", "name", "_index", "_hash")

    def __init__(self, elements: Sequence[str], up: Sequence[int],
                 name: str | None = None, check: bool = True):
        self.elements = tuple(elements)
        self.up = tuple(up)
        self.name = name
        n = len(self.elements)
        if len(self.up) != n:
            raise ValueError("one up-mask per element required")
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != n:
            raise OrderError("element names must be unique")
        down = [0] * n
        for i, m in enumerate(self.up):
            for j in iter_bits(m):
                down[j] |= 1 << i
        self.down = tuple(down)
        self._hash = None
        if check:
            self._validate()

    def _validate(self) -> None:
        full = (1 << len(self)) - 1
        for i, m in enumerate(self.up):
            if not (m >> i) & 1:
                raise OrderError(f"relation is not reflexive at {self.elements[i]!r}")
            if m & ~full:
                raise OrderError("up-mask refers to elements outside the poset")
            for j in iter_bits(m):
                if self.up[j] & ~m:
                    raise OrderError("relation is not transitive")
                if j != i and (self.up[j] >> i) & 1:
                    raise OrderError(
                        f"antisymmetry fails: {self.elements[i]!r} and "
                        f"{self.elements[j]!r} are mutually related")

    # -- construction -------------------------------------------------------

    @classmethod
    def from_relation(cls, elements: Iterable[str],
                      pairs: Iterable[tuple[str, str]] = (),
                      name: str | None = None,
                      sort: bool = False) -> "FinitePoset":
        """Build a poset from generating pairs ``(a, b)`` meaning ``a <= b``.

        Reflexivity is implied and the transitive closure is taken; a cycle
        through distinct elements raises :class:`OrderError`.  With
        ``sort=True`` the elements are reindexed in lexicographic name order.
        """
        elements = list(elements)
        if sort:
            elements = sorted(elements)
        index = {e: i for i, e in enumerate(elements)}
        if len(index) != len(elements):
            raise OrderError("element names must be unique")
        n = len(elements)
        rows = [1 << i for i in range(n)]
        for a, b in pairs:
            if a not in index:
                raise UnknownElement(a)
            if b not in index:
                raise UnknownElement(b)
            rows[index[a]] |= 1 << index[b]
        # Warshall on bit rows
        for k in range(n):
            bit = 1 << k
            rk = rows[k]
            for i in range(n):
                if rows[i] & bit:
                    rows[i] |= rk
        return cls(elements, rows, name=name)

    @classmethod
    def chain(cls, n: int, names: Sequence[str] | None = None) -> "FinitePoset":
        names = list(names) if names is not None else [str(i) for i in range(n)]
        full = (1 << n) - 1
        return cls(names, [full & ~((1 << i) - 1) for i in range(n)],
                   name=f"chain{n}")

    @classmethod
    def antichain(cls, n: int, names: Sequence[str] | None = None) -> "FinitePoset":
        names = list(names) if names is not None else [str(i) for i in range(n)]
        return cls(names, [1 << i for i in range(n)], name=f"antichain{n}")

    @classmethod
    def singleton(cls, name: str = "*") -> "FinitePoset":
        return cls([name], [1], name="singleton")

    # -- basic queries ------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownElement(name) from None

    def leq(self, i: int, j: int) -> bool:
        return bool((self.up[i] >> j) & 1)

    def mask_of(self, names: Iterable[str]) -> int:
        return mask_from(self.index(n) for n in names)

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in iter_bits(mask))

    def up_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.up[i]
        return out

    def down_mask(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.down[i]
        return out

    def is_upset(self, mask: int) -> bool:
        return self.up_mask(mask) == mask

    def is_downset(self, mask: int) -> bool:
        return self.down_mask(mask) == mask

    def strict_up(self, i: int) -> int:
        return self.up[i] & ~(1 << i)

    def covers(self, i: int) -> int:
        """Mask of the upper covers of ``i``."""
        above = self.strict_up(i)
        out = above
        for j in iter_bits(above):
            out &= ~self.strict_up(j)
        return out

    def linear_extension(self) -> list[int]:
        """Indices sorted so that ``i < j`` in the order implies ``i`` first."""
        return sorted(range(len(self)), key=lambda i: (popcount(self.down[i]), i))

    def levels(self) -> list[int]:
        """Length of the longest chain ending at each element (minimal = 0)."""
        lvl = [0] * len(self)
        for i in self.linear_extension():
            below = self.down[i] & ~(1 << i)
            lvl[i] = 1 + max((lvl[j] for j in iter_bits(below)), default=-1)
        return lvl

    def subposet(self, mask: int, name: str | None = None) -> "FinitePoset":
        """Induced suborder on the elements of ``mask`` (index order kept)."""
        idx = list(iter_bits(mask))
        pos = {i: k for k, i in enumerate(idx)}
        ups = []
        for i in idx:
            ups.append(mask_from(pos[j] for j in iter_bits(self.up[i] & mask)))
        return FinitePoset([self.elements[i] for i in idx], ups, name=name, check=False)

    def renamed(self, names: Sequence[str], name: str | None = None) -> "FinitePoset":
        return FinitePoset(names, self.up, name=name, check=False)

    def permuted(self, order: Sequence[int]) -> "FinitePoset":
        """Same poset with elements re-indexed: new index k holds old ``order[k]``."""
        pos = {old: new for new, old in enumerate(order)}
        ups = [mask_from(pos[j] for j in iter_bits(self.up[old])) for old in order]
        return FinitePoset([self.elements[o] for o in order], ups, name=self.name,
                           check=False)

    def pairs(self) -> list[tuple[str, str]]:
        """All strict pairs ``a < b`` by name, in index order."""
        return [(self.elements[i], self.elements[j])
                for i in range(len(self)) for j in iter_bits(self.strict_up(i))]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and self.up == other.up

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.elements, self.up))
        return self._hash

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<FinitePoset{label} |P|={len(self)} covers={hasse_edges(self)}>"


class MonotoneMap:
    """A total order-preserving map between finite posets (by index)."""

    __slots__ = ("domain", "codomain", "assignment")

    def __init__(self, domain: FinitePoset, codomain: FinitePoset,
                 assignment: Sequence[int], check: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.assignment = tuple(assignment)
        if check:
            if len(self.assignment) != len(domain):
                raise IncompatibleMaps("assignment must be total on the domain")
            for v in self.assignment:
                if not 0 <= v < len(codomain):
                    raise UnknownElement(f"codomain index {v}")
            for i in range(len(domain)):
                target_up = codomain.up[self.assignment[i]]
                for j in iter_bits(domain.up[i]):
                    if not (target_up >> self.assignment[j]) & 1:
                        raise IncompatibleMaps(
                            f"map is not monotone: {domain.elements[i]} <= "
                            f"{domain.elements[j]} but images are not ordered")

    @classmethod
    def from_names(cls, domain: FinitePoset, codomain: FinitePoset,
                   mapping: Mapping[str, str]) -> "MonotoneMap":
        missing = [e for e in domain.elements if e not in mapping]
        if missing:
            raise IncompatibleMaps(f"map undefined on {missing}")
        for k in mapping:
            domain.index(k)
        return cls(domain, codomain, [codomain.index(mapping[e]) for e in domain.elements])

    @classmethod
    def identity(cls, poset: FinitePoset) -> "MonotoneMap":
        return cls(poset, poset, range(len(poset)), check=False)

    @classmethod
    def terminal(cls, poset: FinitePoset, target: FinitePoset | None = None) -> "MonotoneMap":
        target = target if target is not None else FinitePoset.singleton()
        return cls(poset, target, [0] * len(poset), check=False)

    def __call__(self, i: int) -> int:
        return self.assignment[i]

    def named(self) -> dict[str, str]:
        return {self.domain.elements[i]: self.codomain.elements[v]
                for i, v in enumerate(self.assignment)}

    def image_mask(self, mask: int) -> int:
        out = 0
        a = self.assignment
        for i in iter_bits(mask):
            out |= 1 << a[i]
        return out

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for i, v in enumerate(self.assignment):
            if (mask >> v) & 1:
                out |= 1 << i
        return out

    def then(self, other: "MonotoneMap") -> "MonotoneMap":
        """Composite ``other ∘ self``."""
        if other.domain is not self.codomain and other.domain != self.codomain:
            raise IncompatibleMaps("codomain/domain mismatch in composition")
        return MonotoneMap(self.domain, other.codomain,
                           [other.assignment[v] for v in self.assignment], check=False)

    def is_surjective(self) -> bool:
        return self.image_mask(self.domain.full) == self.codomain.full

    def is_injective(self) -> bool:
        return len(set(self.assignment)) == len(self.assignment)

    def is_order_embedding(self) -> bool:
        d, c, a = self.domain, self.codomain, self.assignment
        for i in range(len(d)):
            for j in range(len(d)):
                if d.leq(i, j) != c.leq(a[i], a[j]):
                    return False
        return True

    def is_isomorphism(self) -> bool:
        return (len(self.domain) == len(self.codomain) and self.is_injective()
                and self.is_order_embedding())

    def __eq__(self, other) -> bool:
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (self.assignment == other.assignment and self.domain == other.domain
                and self.codomain == other.codomain)

    def __hash__(self) -> int:
        return hash(self.assignment)

    def __repr__(self) -> str:
        return f"<MonotoneMap {self.named()}>"


@dataclass(frozen=True)
class IsoWitness:
    forward: MonotoneMap
    backward: MonotoneMap

    def inverse(self) -> "IsoWitness":
        return IsoWitness(self.backward, self.forward)


# -- closures -----------------------------------------------------------------

def up_closure(P: FinitePoset, S: Iterable[str]) -> frozenset[str]:
    return frozenset(P.names_of(P.up_mask(P.mask_of(S))))


def down_closure(P: FinitePoset, S: Iterable[str]) -> frozenset[str]:
    return frozenset(P.names_of(P.down_mask(P.mask_of(S))))


def is_p_morphism(f: MonotoneMap) -> bool:
    """Back condition: ``f(x) <= y`` implies ``f(x') = y`` for some ``x' >= x``."""
    dom, cod = f.domain, f.codomain
    for x in range(len(dom)):
        if cod.up[f.assignment[x]] & ~f.image_mask(dom.up[x]):
            return False
    return True


# -- order properties -----------------------------------------------------------

def max_elements(P: FinitePoset) -> frozenset[str]:
    return frozenset(P.elements[i] for i in range(len(P)) if P.up[i] == 1 << i)


def min_elements(P: FinitePoset) -> frozenset[str]:
    return frozenset(P.elements[i] for i in range(len(P)) if P.down[i] == 1 << i)


def is_antichain(P: FinitePoset) -> bool:
    return all(P.up[i] == 1 << i for i in range(len(P)))


def _is_chain_mask(P: FinitePoset, mask: int) -> bool:
    for i in iter_bits(mask):
        if mask & ~(P.up[i] | P.down[i]):
            return False
    return True


def is_chain(P: FinitePoset) -> bool:
    return _is_chain_mask(P, P.full)


def is_prelinear(P: FinitePoset) -> bool:
    """Every principal up-cone is a chain."""
    return all(_is_chain_mask(P, P.up[i]) for i in range(len(P)))


def is_directed(P: FinitePoset) -> bool:
    """Any two elements above a common element have a common upper bound."""
    n = len(P)
    for x in range(n):
        cone = list(iter_bits(P.up[x]))
        for a, b in itertools.combinations(cone, 2):
            if not P.up[a] & P.up[b]:
                return False
    return True


def hasse_edges(P: FinitePoset) -> list[tuple[int, int]]:
    """Covering pairs ``(i, j)`` (``j`` covers ``i``), sorted."""
    return [(i, j) for i in range(len(P)) for j in iter_bits(P.covers(i))]


# -- constructions --------------------------------------------------------------

def _check_size(n: int, what: str, cap: int | None = None) -> None:
    cap = cap if cap is not None else get_config().product_cap
    if n > cap:
        raise SizeLimitExceeded(f"{what} would have {n} elements (cap {cap})")


def product(P: FinitePoset, Q: FinitePoset, cap: int | None = None
            ) -> tuple[FinitePoset, MonotoneMap, MonotoneMap]:
    """Componentwise product with its two projections.

    Elements are named ``(p,q)`` and indexed row-major in ``P`` then ``Q``.
    """
    _check_size(len(P) * len(Q), "product", cap)
    nq = len(Q)
    names, ups = [], []
    for i, p in enumerate(P.elements):
        for j, q in enumerate(Q.elements):
            names.append(f"({p},{q})")
            m = 0
            for a in iter_bits(P.up[i]):
                for b in iter_bits(Q.up[j]):
                    m |= 1 << (a * nq + b)
            ups.append(m)
    prod = FinitePoset(names, ups, name=None, check=False)
    px = MonotoneMap(prod, P, [k // nq for k in range(len(names))], check=False)
    py = MonotoneMap(prod, Q, [k % nq for k in range(len(names))], check=False)
    return prod, px, py


def disjoint_union(P: FinitePoset, Q: FinitePoset
                   ) -> tuple[FinitePoset, MonotoneMap, MonotoneMap]:
    """Tagged sum with no order across the summands, plus both injections."""
    n = len(P)
    names = [f"inl:{e}" for e in P.elements] + [f"inr:{e}" for e in Q.elements]
    ups = list(P.up) + [m << n for m in Q.up]
    S = FinitePoset(names, ups, check=False)
    inl = MonotoneMap(P, S, range(n), check=False)
    inr = MonotoneMap(Q, S, range(n, n + len(Q)), check=False)
    return S, inl, inr


def pullback(f: MonotoneMap, g: MonotoneMap, cap: int | None = None
             ) -> tuple[FinitePoset, MonotoneMap, MonotoneMap]:
    """``{(x, y) : f(x) = g(y)}`` with the induced componentwise order."""
    if f.codomain != g.codomain:
        raise IncompatibleMaps("pullback needs maps into the same poset")
    X, Y = f.domain, g.domain
    _check_size(len(X) * len(Y), "pullback", cap)
    pairs = [(x, y) for x in range(len(X)) for y in range(len(Y))
             if f.assignment[x] == g.assignment[y]]
    pos = {p: k for k, p in enumerate(pairs)}
    names, ups = [], []
    for x, y in pairs:
        names.append(f"({X.elements[x]},{Y.elements[y]})")
        ups.append(mask_from(pos[(a, b)] for (a, b) in pairs
                             if X.leq(x, a) and Y.leq(y, b)))
    PB = FinitePoset(names, ups, check=False)
    px = MonotoneMap(PB, X, [x for x, _ in pairs], check=False)
    py = MonotoneMap(PB, Y, [y for _, y in pairs], check=False)
    return PB, px, py


def free_dl_dual(n: int, cap: int | None = None) -> tuple[FinitePoset, list[int]]:
    """The poset ``2^n`` and, per generator ``i``, the upset ``{v : v_i = 1}``.

    Elements are 0/1 strings of length ``n`` (character ``i`` is coordinate
    ``i``), indexed in increasing binary order of the coordinate vector.
    """
    if n < 0:
        raise ValueError("generator count must be non-negative")
    _check_size(1 << n, "free distributive lattice dual", cap)
    size = 1 << n

    def vec(k: int) -> str:
        return "".join("1" if (k >> (n - 1 - i)) & 1 else "0" for i in range(n))

    names = [vec(k) if n else "*" for k in range(size)]
    ups = [mask_from(j for j in range(size) if j & k == k) for k in range(size)]
    P = FinitePoset(names, ups, name=f"2^{n}", check=False)
    gens = [mask_from(k for k in range(size) if (k >> (n - 1 - i)) & 1)
            for i in range(n)]
    return P, gens


# -- isomorphism ------------------------------------------------------------------

def _refine_colours(posets: Sequence[FinitePoset]) -> list[list[int]]:
    """Joint colour refinement over several posets using up/down cones."""
    colours = [[(popcount(P.up[i]), popcount(P.down[i])) for i in range(len(P))]
               for P in posets]
    palette = sorted({c for cs in colours for c in cs})
    ids = {c: k for k, c in enumerate(palette)}
    current = [[ids[c] for c in cs] for cs in colours]
    n_classes = len(palette)
    while True:
        sigs = []
        for P, cs in zip(posets, current):
            sigs.append([
                (cs[i],
                 tuple(sorted(cs[j] for j in iter_bits(P.strict_up(i)))),
                 tuple(sorted(cs[j] for j in iter_bits(P.down[i] & ~(1 << i)))))
                for i in range(len(P))])
        palette = sorted({s for ss in sigs for s in ss})
        ids = {s: k for k, s in enumerate(palette)}
        current = [[ids[s] for s in ss] for ss in sigs]
        if len(palette) == n_classes:
            return current
        n_classes = len(palette)


def is_isomorphic(P: FinitePoset, Q: FinitePoset, cap: int | None = None
                  ) -> IsoWitness | None:
    """Decide order-isomorphism; return the lexicographically least witness.

    Colour refinement prunes the candidates; backtracking assigns the
    elements of ``P`` in index order to the smallest admissible index of
    ``Q``, so the first complete assignment is the least isomorphism.
    """
    cap = cap if cap is not None else get_config().iso_cap
    if max(len(P), len(Q)) > cap:
        raise SizeLimitExceeded(f"isomorphism test above {cap} elements")
    n = len(P)
    if n != len(Q):
        return None
    cp, cq = _refine_colours([P, Q])
    if sorted(cp) != sorted(cq):
        return None
    by_colour: dict[int, list[int]] = {}
    for j, c in enumerate(cq):
        by_colour.setdefault(c, []).append(j)
    assign = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in by_colour.get(cp[i], ()):
            if used[j]:
                continue
            ok = True
            for k in range(i):
                m = assign[k]
                if P.leq(k, i) != Q.leq(m, j) or P.leq(i, k) != Q.leq(j, m):
                    ok = False
                    break
            if ok:
                assign[i] = j
                used[j] = True
                if extend(i + 1):
                    return True
                used[j] = False
        assign[i] = -1
        return False

    if not extend(0):
        return None
    back = [0] * n
    for i, j in enumerate(assign):
        back[j] = i
    return IsoWitness(MonotoneMap(P, Q, assign, check=False),
                      MonotoneMap(Q, P, back, check=False))


def isomorphic_by_permutation(P: FinitePoset, Q: FinitePoset) -> bool:
    """Brute-force isomorphism test over all bijections (small posets only)."""
    n = len(P)
    if n != len(Q):
        return False
    for perm in itertools.permutations(range(n)):
        if all(P.leq(i, j) == Q.leq(perm[i], perm[j])
               for i in range(n) for j in range(n)):
            return True
    return False


def canonical_key(P: FinitePoset) -> tuple:
    """An isomorphism invariant used to bucket posets before exact tests."""
    (colours,) = _refine_colours([P])
    return (len(P), tuple(sorted(colours)),
            tuple(sorted((colours[i], colours[j]) for i, j in hasse_edges(P))))


def posets_up_to_iso(n: int) -> list[FinitePoset]:
    """All posets on ``n`` elements up to isomorphism, in a fixed order.

    Candidates are the naturally labelled orders (``i < j`` only if the
    index of ``i`` is smaller); classes are separated by exact tests.
    """
    names = [chr(ord("a") + i) for i in range(n)]
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    buckets: dict[tuple, list[FinitePoset]] = {}
    out: list[FinitePoset] = []
    for bits_ in range(1 << len(slots)):
        ups = [1 << i for i in range(n)]
        for k, (i, j) in enumerate(slots):
            if (bits_ >> k) & 1:
                ups[i] |= 1 << j
        closed = True
        for i in range(n):
            for j in iter_bits(ups[i]):
                if ups[j] & ~ups[i]:
                    closed = False
                    break
            if not closed:
                break
        if not closed:
            continue
        P = FinitePoset(names, ups, check=False)
        key = canonical_key(P)
        bucket = buckets.setdefault(key, [])
        if any(is_isomorphic(P, Q, cap=max(n, 1)) for Q in bucket):
            continue
        bucket.append(P)
        out.append(P)
    for k, P in enumerate(out):
        P.name = f"P{n}_{k}"
    return out


def rooted_posets_up_to_iso(n: int) -> list[FinitePoset]:
    """Posets on ``n`` elements with a least element, up to isomorphism."""
    return [P for P in posets_up_to_iso(n) if len(min_elements(P)) == 1]


def monotone_maps(P: FinitePoset, Q: FinitePoset) -> Iterator[MonotoneMap]:
    """Every monotone map ``P -> Q``, in a fixed deterministic order."""
    n = len(P)
    order = P.linear_extension()
    val = [0] * n

    def extend(k: int):
        if k == n:
            yield MonotoneMap(P, Q, list(val), check=False)
            return
        i = order[k]
        # images of everything already placed below i bound the choice
        allowed = Q.full
        for j in iter_bits(P.down[i] & ~(1 << i)):
            allowed &= Q.up[val[j]]
        for v in iter_bits(allowed):
            val[i] = v
            yield from extend(k + 1)

    yield from extend(0)
