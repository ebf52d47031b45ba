"""Generated subalgebras, a chain-semantics oracle for Gödel logic, and frame
equivalence of formulas.

Syntax (trees, parser, printer, implication rank) lives in :mod:`syntax` and is
re-exported here.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping

from .birkhoff import UpsetLattice, all_valuations, eval_formula
from .config import get_config
from .errors import SizeLimitExceeded
from .poset import FinitePoset
from .syntax import (And, Bot, Formula, Implies, Not, Or, Top, Var,  # noqa: F401
                     implication_rank, is_negation, parse, size, sort_key,
                     to_text, variables)


@dataclass(frozen=True)
class _Ops:
    meet: Callable
    join: Callable
    imp: Callable
    bottom: Hashable
    top: Hashable


@dataclass(frozen=True)
class Closure:
    """Members reached by the staged closure with their first stage and the
    best witness formula (least rank, then size, then printed form)."""

    members: tuple
    stage: Mapping
    witness: Mapping
    stages: int


def _staged_closure(gens: Mapping[str, Hashable], ops: _Ops, rank_cap: int | None,
                    cap: int, order_key: Callable) -> Closure:
    wit: dict = {}
    rs: dict = {}        # value -> (rank, size) of its witness
    stage: dict = {}
    pending: set = set()

    def offer(val, phi, rank, sz, k) -> None:
        cur = rs.get(val)
        if cur is None:
            if len(wit) >= cap:
                raise SizeLimitExceeded(f"closure exceeded {cap} members")
            stage[val] = k
        elif (rank, sz) > cur or ((rank, sz) == cur
                                  and to_text(phi) >= to_text(wit[val])):
            return
        wit[val], rs[val] = phi, (rank, sz)
        pending.add(val)

    def lattice_close(k: int) -> None:
        # semi-naive: only pairs touching a new or improved member are redone
        while pending:
            fresh = sorted(pending, key=order_key)
            pending.clear()
            everything = sorted(wit, key=order_key)
            for a in fresh:
                fa, (ra, sa) = wit[a], rs[a]
                for b in everything:
                    fb, (rb, sb) = wit[b], rs[b]
                    r, n = max(ra, rb), sa + sb + 1
                    offer(ops.meet(a, b), And(fa, fb), r, n, k)
                    offer(ops.join(a, b), Or(fa, fb), r, n, k)

    offer(ops.bottom, Bot(), 0, 1, 0)
    offer(ops.top, Top(), 0, 1, 0)
    for name in sorted(gens):
        offer(gens[name], Var(name), 0, 1, 0)
    lattice_close(0)
    k = 0
    while rank_cap is None or k < rank_cap:
        before = len(wit)
        items = sorted(wit, key=order_key)
        for a, b in itertools.product(items, repeat=2):
            (ra, sa), (rb, sb) = rs[a], rs[b]
            offer(ops.imp(a, b), Implies(wit[a], wit[b]), max(ra, rb) + 1, sa + sb + 1,
                  k + 1)
        lattice_close(k + 1)
        if len(wit) == before:
            break
        k += 1
    members = tuple(sorted(wit, key=order_key))
    return Closure(members, stage, wit, k)


# -- subalgebras of upset lattices --------------------------------------------------

@dataclass(frozen=True)
class GeneratedAlgebra:
    ambient: UpsetLattice
    generators: Mapping[str, int]
    members: tuple[int, ...]
    stage: Mapping[int, int]
    witness: Mapping[int, Formula]
    stages: int

    @property
    def is_everything(self) -> bool:
        return len(self.members) == len(self.ambient)

    def max_stage(self) -> int:
        return max(self.stage.values())


def generate_subalgebra(L: UpsetLattice, gens: Mapping[str, int],
                        rank_cap: int | None = None) -> GeneratedAlgebra:
    """Close ``gens`` under meet, join, implication and the bounds, stage by stage.

    Stage 0 is the bounded sublattice generated by ``gens``; stage ``k+1`` adds
    the implications between stage ``k`` members and closes under meet and
    join again.  Stops at a fixpoint or after ``rank_cap`` stages.
    """
    for name, U in gens.items():
        L.index(U)
    P = L.base
    ops = _Ops(meet=lambda a, b: a & b, join=lambda a, b: a | b,
               imp=lambda a, b: P.full & ~P.down_mask(a & ~b),
               bottom=0, top=P.full)
    cl = _staged_closure(gens, ops, rank_cap, max(len(L), 1),
                         order_key=lambda m: (bin(m).count("1"), m))
    return GeneratedAlgebra(L, dict(gens), cl.members, cl.stage, cl.witness, cl.stages)


# -- Gödel chains -------------------------------------------------------------------

@dataclass(frozen=True)
class ChainOracle:
    """The free algebra as a set of value tuples over (chain size, valuation)
    components; ``witness`` names one formula per tuple."""

    count: int
    components: tuple[tuple[int, tuple[int, ...]], ...]
    members: tuple[tuple[int, ...], ...]
    witness: Mapping[tuple[int, ...], Formula]


def godel_chain_oracle(n_vars: int, max_chain_size: int | None = None) -> ChainOracle:
    """Free Gödel algebra on ``n_vars`` generators, computed inside the product
    of all chains of size ``2 .. max_chain_size`` under all valuations.

    On a chain ``0 < 1 < ... < m-1`` meet is min, join is max and ``a -> b`` is
    the top when ``a <= b`` and ``b`` otherwise.
    """
    if n_vars < 0:
        raise ValueError("n_vars must be non-negative")
    m_max = max_chain_size if max_chain_size is not None else n_vars + 2
    comps = [(m, val) for m in range(2, m_max + 1)
             for val in itertools.product(range(m), repeat=n_vars)]
    tops = tuple(m - 1 for m, _ in comps)

    def meet(a, b):
        return tuple(map(min, a, b))

    def join(a, b):
        return tuple(map(max, a, b))

    def imp(a, b):
        return tuple(t if x <= y else y for x, y, t in zip(a, b, tops))

    names = [f"p{i}" for i in range(n_vars)] if n_vars > 2 else ["p", "q"][:n_vars]
    gens = {nm: tuple(val[i] for _, val in comps) for i, nm in enumerate(names)}
    ops = _Ops(meet, join, imp, tuple(0 for _ in comps), tops)
    cl = _staged_closure(gens, ops, None, get_config().upset_cap, order_key=lambda t: t)
    return ChainOracle(len(cl.members), tuple(comps), cl.members, cl.witness)


# -- frame equivalence ---------------------------------------------------------------

def equivalent_on_frame(phi: Formula, psi: Formula, P: FinitePoset) -> bool:
    names = variables(phi) | variables(psi)
    if len(names) > 3:
        raise SizeLimitExceeded(f"{len(names)} variables; at most 3 are supported")
    return all(eval_formula(phi, v) == eval_formula(psi, v)
               for v in all_valuations(P, names))
