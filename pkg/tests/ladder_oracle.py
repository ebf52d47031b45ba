"""The one-generator universal model built directly, level by level.

A point of depth ``n + 1`` is a colour ``c`` (the set of true variables) placed
below an antichain ``A`` that reaches depth ``n``, with ``c`` contained in every
colour of ``A``; it is skipped when ``A`` is a single point of colour ``c``.
"""
from __future__ import annotations

import itertools

from esakia_forge.poset import FinitePoset


def universal_ladder(depth: int, n_vars: int = 1):
    """Returns (poset, colours); colours[i] is a frozenset of variable indices."""
    all_colours = [frozenset(c) for k in range(n_vars + 1)
                   for c in itertools.combinations(range(n_vars), k)]
    succ: list[frozenset[int]] = []        # immediate successors of each point
    colour: list[frozenset[int]] = []
    level: list[int] = []
    above: list[set[int]] = []             # strict up-set
    for c in all_colours:
        succ.append(frozenset()); colour.append(c); level.append(1); above.append(set())
    for d in range(2, depth + 1):
        pts = range(len(succ))
        new = []
        for r in range(1, len(succ) + 1):
            for A in itertools.combinations(pts, r):
                if max(level[a] for a in A) != d - 1:
                    continue
                if any(b in above[a] for a in A for b in A):
                    continue
                common = frozenset.intersection(*(colour[a] for a in A))
                for c in all_colours:
                    if not c <= common:
                        continue
                    if len(A) == 1 and colour[A[0]] == c:
                        continue
                    new.append((frozenset(A), c))
        for A, c in new:
            succ.append(A); colour.append(c); level.append(d)
            above.append(set(A).union(*(above[a] for a in A)))
    n = len(succ)
    names = [f"w{i}" for i in range(n)]
    ups = [(1 << i) | sum(1 << j for j in above[i]) for i in range(n)]
    return FinitePoset(names, ups), colour
