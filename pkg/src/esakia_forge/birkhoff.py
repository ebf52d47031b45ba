"""Upset lattices of finite posets and their Heyting operations.

An upset is a bit mask over the element indices of its poset.  The lattice of
all upsets is the finite dual algebra: meet is intersection, join is union and
``U -> V`` is the complement of the down-closure of ``U - V``.
"""
from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .config import get_config
from .errors import NotAnUpset, SizeLimitExceeded, UnboundVariable
from .poset import FinitePoset, is_isomorphic, iter_bits, popcount
from .syntax import And, Bot, Formula, Implies, Or, Top, Var, variables


def _key(mask: int) -> tuple[int, int]:
    return (popcount(mask), mask)


@dataclass(frozen=True, eq=False)
class UpsetLattice:
    base: FinitePoset
    members: tuple[int, ...]
    _keys: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not self._keys:
            self._keys.extend(_key(m) for m in self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def index(self, mask: int) -> int:
        k = _key(mask)
        i = bisect.bisect_left(self._keys, k)
        if i == len(self._keys) or self._keys[i] != k:
            raise NotAnUpset(f"{mask:#x} is not a member of this lattice")
        return i

    def __contains__(self, mask: int) -> bool:
        k = _key(mask)
        i = bisect.bisect_left(self._keys, k)
        return i < len(self._keys) and self._keys[i] == k

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.base.full

    def implies(self, U: int, V: int) -> int:
        return heyting_implication(self.base, U, V)

    def neg(self, U: int) -> int:
        return heyting_implication(self.base, U, 0)

    def names(self, mask: int) -> tuple[str, ...]:
        return self.base.names_of(mask)

    def inclusion_poset(self) -> FinitePoset:
        """The lattice as a poset under inclusion (element ``i`` is member ``i``)."""
        ms = self.members
        up = [sum(1 << j for j, V in enumerate(ms) if not U & ~V) for U in ms]
        return FinitePoset([f"U{m:x}" for m in ms], up, check=False)


def upsets(P: FinitePoset, cap: int | None = None) -> UpsetLattice:
    """Every upset of ``P``, sorted by (cardinality, mask)."""
    cfg = get_config()
    if len(P) > cfg.upset_base_cap:
        raise SizeLimitExceeded(f"poset has {len(P)} elements (cap {cfg.upset_base_cap})")
    cap = cap if cap is not None else cfg.upset_cap
    order = list(reversed(P.linear_extension()))
    out: list[int] = []

    # top-down: an element may join once everything strictly above it has
    def grow(k: int, S: int) -> None:
        if k == len(order):
            out.append(S)
            if len(out) > cap:
                raise SizeLimitExceeded(f"more than {cap} upsets")
            return
        y = order[k]
        grow(k + 1, S)
        if not P.strict_up(y) & ~S:
            grow(k + 1, S | (1 << y))

    grow(0, 0)
    out.sort(key=_key)
    return UpsetLattice(P, tuple(out))


def _require_upset(P: FinitePoset, U: int, what: str) -> None:
    if U & ~P.full or not P.is_upset(U):
        raise NotAnUpset(f"{what} is not an upset of {P.name or 'the poset'}")


def heyting_implication(P: FinitePoset, U: int, V: int) -> int:
    _require_upset(P, U, "antecedent")
    _require_upset(P, V, "consequent")
    return P.full & ~P.down_mask(U & ~V)


def box(P: FinitePoset, S: int) -> int:
    """Largest upset inside the arbitrary subset ``S``."""
    return P.full & ~P.down_mask(P.full & ~S)


def negation(P: FinitePoset, U: int) -> int:
    return heyting_implication(P, U, 0)


def join_irreducibles(L: UpsetLattice) -> FinitePoset:
    """Members that are not the union of the members strictly inside them.

    Ordered by reverse inclusion, so ``up(x)`` sits below ``up(y)`` iff
    ``x <= y``; a member with a least element is named after it.
    """
    P = L.base
    jis = []
    for U in L.members:
        if not U:
            continue
        below = 0
        for V in L.members:
            if V != U and not V & ~U:
                below |= V
        if below != U:
            jis.append(U)
    names = []
    for U in jis:
        least = [x for x in iter_bits(U) if not U & ~P.up[x]]
        names.append(P.elements[least[0]] if least else f"U{U:x}")
    up = [sum(1 << j for j, V in enumerate(jis) if not V & ~U) for U in jis]
    return FinitePoset(names, up, name=f"J({P.name})" if P.name else None, check=False)


def lattices_isomorphic(L1: UpsetLattice, L2: UpsetLattice) -> bool:
    """Finite distributive lattices are isomorphic iff their posets of join
    irreducibles are."""
    if len(L1) != len(L2):
        return False
    J1, J2 = join_irreducibles(L1), join_irreducibles(L2)
    cap = max(get_config().iso_cap, len(J1))
    return is_isomorphic(J1, J2, cap=cap) is not None


# -- Kripke semantics --------------------------------------------------------------

@dataclass(frozen=True)
class Valuation:
    frame: FinitePoset
    assignment: Mapping[str, int]

    def __post_init__(self):
        for var, U in self.assignment.items():
            _require_upset(self.frame, U, f"value of {var}")

    @classmethod
    def from_names(cls, frame: FinitePoset, assign: Mapping[str, Iterable[str]]
                   ) -> "Valuation":
        return cls(frame, {var: frame.mask_of(names) for var, names in assign.items()})


def eval_formula(phi: Formula, v: Valuation) -> int:
    P = v.frame
    if isinstance(phi, Var):
        try:
            return v.assignment[phi.name]
        except KeyError:
            raise UnboundVariable(f"no value for {phi.name}") from None
    if isinstance(phi, Bot):
        return 0
    if isinstance(phi, Top):
        return P.full
    a = eval_formula(phi.left, v)
    b = eval_formula(phi.right, v)
    if isinstance(phi, And):
        return a & b
    if isinstance(phi, Or):
        return a | b
    return P.full & ~P.down_mask(a & ~b)


def all_valuations(P: FinitePoset, names: Iterable[str], cap: int | None = None):
    """Every assignment of upsets of ``P`` to ``names``."""
    names = sorted(names)
    L = upsets(P)
    cap = cap if cap is not None else get_config().valuation_cap
    if len(L) ** len(names) > cap:
        raise SizeLimitExceeded(
            f"{len(L)}^{len(names)} valuations exceed the cap {cap}")
    for combo in itertools.product(L.members, repeat=len(names)):
        yield Valuation(P, dict(zip(names, combo)))


def compile_formula(phi: Formula, P: FinitePoset):
    """``phi`` as a function from a tuple of upsets (variables in sorted name
    order) to its value; skips the per-valuation checks of :func:`eval_formula`."""
    names = sorted(variables(phi))
    slot = {nm: i for i, nm in enumerate(names)}
    full = P.full
    memo: dict[int, int] = {}

    def down(m: int) -> int:
        d = memo.get(m)
        if d is None:
            d = memo[m] = P.down_mask(m)
        return d

    def build(f):
        if isinstance(f, Var):
            i = slot[f.name]
            return lambda vals: vals[i]
        if isinstance(f, Bot):
            return lambda vals: 0
        if isinstance(f, Top):
            return lambda vals: full
        a, b = build(f.left), build(f.right)
        if isinstance(f, And):
            return lambda vals: a(vals) & b(vals)
        if isinstance(f, Or):
            return lambda vals: a(vals) | b(vals)
        return lambda vals: full & ~down(a(vals) & ~b(vals))

    return build(phi), names


def validates(P: FinitePoset, phi: Formula) -> bool:
    fn, names = compile_formula(phi, P)
    L = upsets(P)
    cap = get_config().valuation_cap
    if len(L) ** len(names) > cap:
        raise SizeLimitExceeded(f"{len(L)}^{len(names)} valuations exceed the cap {cap}")
    full = P.full
    return all(fn(vals) == full
               for vals in itertools.product(L.members, repeat=len(names)))


def refutation(P: FinitePoset, phi: Formula) -> Valuation | None:
    """First valuation (in lattice order) falsifying ``phi``, if any."""
    for v in all_valuations(P, variables(phi)):
        if eval_formula(phi, v) != P.full:
            return v
    return None
