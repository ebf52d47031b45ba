"""Exhaustive reproducibility suites.

Each suite sweeps a family of small instances, writes one certificate line per
instance and reports whether every instance passed.  The log never contains
timings, so a suite's output is a pure function of its parameters.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable

from .birkhoff import (heyting_implication, lattices_isomorphic, negation, upsets,
                       validates)
from .formulas import generate_subalgebra, godel_chain_oracle, parse
from .inquisitive import box_set, is_regularly_generated, m_complex, medvedev_frame
from .modes import VarietyMode
from .poset import (FinitePoset, MonotoneMap, free_dl_dual, hasse_edges,
                    is_isomorphic, is_p_morphism, monotone_maps, posets_up_to_iso,
                    product)
from .universal import (LazyComplex, bullet_embed, persistence_check,
                        truncation_embedding, universal_model)
from .varieties import (boolean_filter_members, boolean_step, godel_coproduct,
                        is_well_directed, kc_filter_characterization,
                        lc_filter_characterization, lc_free, stabilization_check)
from .vietoris import (GContext, build_complex, codistributivity_check,
                       g_open_mask, is_g_open_map, lift_point_map, product_complex,
                       pullback_complex, vietoris_step)


@dataclass
class SuiteReport:
    name: str
    log: list[str] = field(default_factory=list)
    failures: int = 0

    @property
    def passed(self) -> bool:
        return self.failures == 0 and bool(self.log)

    def record(self, ok: bool, line: str) -> None:
        self.log.append(f"{'ok  ' if ok else 'FAIL'} {line}")
        if not ok:
            self.failures += 1

    def text(self) -> str:
        verdict = "passed" if self.passed else f"failed ({self.failures})"
        return "\n".join([*self.log, f"suite {self.name}: {verdict}"]) + "\n"


def describe(P: FinitePoset) -> str:
    E = P.elements
    covers = ",".join(f"{E[i]}<{E[j]}" for i, j in hasse_edges(P))
    return f"{P.name or 'P'}[{len(P)}]{{{covers}}}"


@functools.lru_cache(maxsize=None)
def small_posets(max_size: int) -> tuple[FinitePoset, ...]:
    return tuple(P for n in range(1, max_size + 1) for P in posets_up_to_iso(n))


def chain2() -> FinitePoset:
    return FinitePoset.chain(2)


# -- the ladder -------------------------------------------------------------------------

def ladder_figure() -> list[FinitePoset]:
    """The four posets drawn for the first steps over the 2-chain."""
    x0 = FinitePoset.chain(2)
    x1 = FinitePoset.from_relation(["{0,1}", "{0}", "{1}"],
                                   [("{0,1}", "{0}"), ("{0,1}", "{1}")])
    x2 = FinitePoset.from_relation(
        ["{{0,1},{0},{1}}", "{{0,1},{1}}", "{{1}}", "{{0}}"],
        [("{{0,1},{0},{1}}", "{{0,1},{1}}"), ("{{0,1},{1}}", "{{1}}"),
         ("{{0,1},{0},{1}}", "{{0}}")])
    x3 = FinitePoset.from_relation(
        "bacde", [("b", "a"), ("b", "c"), ("a", "d"), ("c", "d"), ("c", "e")])
    return [x0, x1, x2, x3]


def suite_ladder() -> SuiteReport:
    rep = SuiteReport("ladder")
    c = build_complex(chain2(), None, 3)
    rep.record(c.sizes() == (2, 3, 4, 5), f"layer sizes {c.sizes()}")
    for k, fig in enumerate(ladder_figure()):
        rep.record(is_isomorphic(c[k].poset, fig) is not None,
                   f"layer {k} isomorphic to the drawn poset")
    two = c[2]
    labels = {two.label(i) for i in range(len(two))}
    want = {"{{1}}", "{{0,1},{1}}", "{{0,1},{0},{1}}", "{{0}}"}
    rep.record(labels == want, f"layer 2 labels {sorted(labels)}")
    # the labels also sit where the drawing puts them
    fig2 = ladder_figure()[2]
    by_label = {two.label(i): i for i in range(len(two))}
    same = all(two.poset.leq(by_label[a], by_label[b]) == fig2.leq(fig2.index(a),
                                                                    fig2.index(b))
               for a in want for b in want)
    rep.record(same, "layer 2 order matches the labelled drawing")
    return rep


# -- steps over all small bases -----------------------------------------------------------

def suite_stabilization(max_size: int = 4) -> SuiteReport:
    rep = SuiteReport("stabilization")
    for P in small_posets(max_size):
        v = stabilization_check(P)
        rep.record(v.agrees, f"{describe(P)} root iso={v.root_is_iso} "
                             f"antichain={v.antichain}")
    return rep


def _preserves_indexed_implications(f: MonotoneMap, g: MonotoneMap, ups_x, ups_z) -> bool:
    X, Y = f.domain, f.codomain
    pulled = {U: g.preimage_mask(U) for U in ups_z}
    for U in ups_z:
        for V in ups_z:
            a, b = pulled[U], pulled[V]
            upstairs = f.preimage_mask(heyting_implication(Y, a, b))
            if upstairs != heyting_implication(X, f.preimage_mask(a), f.preimage_mask(b)):
                return False
    return True


def suite_g_open(max_size: int = 3) -> SuiteReport:
    rep = SuiteReport("g-open")
    posets = small_posets(max_size)
    for X in posets:
        ups_x = upsets(X).members
        for Y in posets:
            fs = list(monotone_maps(X, Y))
            for Z in posets:
                ups_z = upsets(Z).members
                agree = total = opens = 0
                for g in monotone_maps(Y, Z):
                    for f in fs:
                        a = is_g_open_map(f, g)
                        b = _preserves_indexed_implications(f, g, ups_x, ups_z)
                        total += 1
                        agree += a == b
                        opens += a
                rep.record(agree == total, f"{describe(X)} -> {describe(Y)} -> "
                                           f"{describe(Z)}: {total} pairs, {opens} open")
    return rep


def _lift_is_unique(h: MonotoneMap, ctx: GContext, layer) -> tuple[bool, int]:
    lift = lift_point_map(h, ctx, layer)
    root = layer.root
    hits = []
    for cand in monotone_maps(h.domain, layer.poset):
        if [root(v) for v in cand.assignment] != list(h.assignment):
            continue
        if is_g_open_map(cand, root):
            hits.append(cand)
    return hits == [lift], len(hits)


def suite_lifting(max_size: int = 3) -> SuiteReport:
    rep = SuiteReport("lifting")
    posets = small_posets(max_size)
    targets = small_posets(2)
    for X in posets:
        for W in targets:
            for g in monotone_maps(X, W):
                ctx = GContext(X, (g,))
                layer = vietoris_step(ctx)
                n_h = bad = 0
                for Z in posets:
                    for h in monotone_maps(Z, X):
                        if not is_g_open_map(h, g):
                            continue
                        n_h += 1
                        ok, _ = _lift_is_unique(h, ctx, layer)
                        bad += not ok
                rep.record(bad == 0, f"{describe(X)} g={list(g.assignment)} into "
                                     f"{describe(W)}: {n_h} open maps lifted uniquely")
    return rep


def suite_lc(max_size: int = 4) -> SuiteReport:
    rep = SuiteReport("lc")
    prelinearity = parse("(p -> q) | (q -> p)")
    for P in small_posets(max_size):
        free = lc_free(P)
        c = free.complex
        agree = lc_filter_characterization(c[2]).holds
        ok = free.prelinear and free.root_iso is not None and agree \
            and validates(free.poset, prelinearity)
        rep.record(ok, f"{describe(P)} sizes {c.sizes()} prelinear={free.prelinear} "
                       f"root iso={free.root_iso is not None} filter={agree}")
    return rep


def suite_kc(max_size: int = 4) -> SuiteReport:
    rep = SuiteReport("kc")
    for P in small_posets(max_size):
        stage2 = build_complex(P, None, 2)[2]
        agree = kc_filter_characterization(stage2)
        restricted = build_complex(P, None, 2, VarietyMode.KC)[2]
        kept = {stage2.label(i) for i in range(len(stage2))
                if is_well_directed(stage2, i)}
        same = kept == {restricted.label(i) for i in range(len(restricted))}
        rep.record(agree.holds and same,
                   f"{describe(P)} {agree.checked} stage-2 points, "
                   f"{len(restricted)} well-directed")
    return rep


def suite_bool(max_size: int = 4) -> SuiteReport:
    rep = SuiteReport("bool")
    for P in small_posets(max_size):
        step = boolean_step(P)
        singles = {1 << i for i in range(len(P))}
        filt = boolean_filter_members(P)
        L = upsets(step.poset)
        boolean = len(L) == 2 ** len(P) and all(
            negation(step.poset, negation(step.poset, U)) == U for U in L)
        ok = set(step.provenance) == singles and filt == singles and boolean
        rep.record(ok, f"{describe(P)} {len(step)} singletons, {len(L)} upsets")
    return rep


# -- Gödel algebras ---------------------------------------------------------------------------

def suite_godel() -> SuiteReport:
    rep = SuiteReport("godel")
    base1, gens1 = free_dl_dual(1)
    free1 = lc_free(base1)
    L1 = upsets(free1.poset)
    oracle1 = godel_chain_oracle(1, 3)
    rep.record(len(L1) == 6 == oracle1.count,
               f"one generator: {len(L1)} upsets, chain oracle {oracle1.count}")
    to_base = free1.complex.to_base(2)
    gen = {"p": to_base.preimage_mask(gens1[0])}
    closure = generate_subalgebra(L1, gen)
    rep.record(closure.is_everything and closure.max_stage() <= 2,
               f"generator closure reaches {len(closure.members)} of {len(L1)} "
               f"by stage {closure.max_stage()}")
    base2, _ = free_dl_dual(2)
    free2 = lc_free(base2)
    L2 = upsets(free2.poset)
    co = godel_coproduct(free1.poset, free1.poset)
    Lco = upsets(co.poset)
    oracle2 = godel_chain_oracle(2, 4)
    rep.record(len(Lco) == len(L2) == oracle2.count,
               f"two generators: coproduct {len(Lco)} upsets, free {len(L2)}, "
               f"chain oracle {oracle2.count}")
    rep.record(lattices_isomorphic(Lco, L2), "coproduct lattice isomorphic to the free one")
    return rep


# -- products, pullbacks ----------------------------------------------------------------------

def codistributivity_factors() -> list[FinitePoset]:
    return [FinitePoset.singleton("s"), FinitePoset.antichain(2, ["u", "v"]),
            FinitePoset.chain(2)]


def suite_codistributivity(depth: int = 2) -> SuiteReport:
    rep = SuiteReport("codistributivity")
    fs = codistributivity_factors()
    for X in fs:
        for Y in fs:
            for Z in fs:
                res = codistributivity_check(X, Y, Z, depth)
                rep.record(res.holds, f"{X.name} x ({Y.name} + {Z.name}) to depth {depth}")
    return rep


def product_counterexample() -> tuple[MonotoneMap, FinitePoset, FinitePoset]:
    """The map ``k`` from ``P1 + P2`` into ``P1 x P2`` induced by the two
    retractions, with ``P1 = {y < x}`` and ``P2 = {b < a}``."""
    P1 = FinitePoset.from_relation(["x", "y"], [("y", "x")], name="P1")
    P2 = FinitePoset.from_relation(["a", "b"], [("b", "a")], name="P2")
    W = FinitePoset.from_relation(["x", "y", "a", "b"], [("y", "x"), ("b", "a")],
                                  name="P1+P2")
    prod, _, _ = product(P1, P2)
    k = MonotoneMap.from_names(W, prod, {"x": "(x,a)", "y": "(y,a)",
                                         "a": "(x,a)", "b": "(y,b)"})
    return k, P1, P2


def suite_product() -> SuiteReport:
    rep = SuiteReport("product")
    k, P1, P2 = product_counterexample()
    rep.record(not is_p_morphism(k), "canonical map into the plain product is not a "
                                     "p-morphism")
    pc = product_complex(P1, P2, 1)
    base, one = pc.complex[0], pc.complex[1]
    ctx = base.context()
    opens = all(is_g_open_map(k, w) for w in ctx.witnesses)
    rep.record(opens, "canonical map is open for both projections")
    lift = lift_point_map(k, ctx, one)
    compat = lift.then(one.root) == k
    rep.record(compat, "lift into layer 1 is root compatible")
    rep.record(is_g_open_map(lift, one.root), "lift into layer 1 is open for the root")
    return rep


def surjective_p_morphisms(X: FinitePoset, Z: FinitePoset):
    return [f for f in monotone_maps(X, Z) if f.is_surjective() and is_p_morphism(f)]


def up_cone_section(layer) -> bool:
    """Every point's up-cone is a rooted subset open for the witnesses of the
    next step, hence a point of the next layer lying over it: the next root
    map is onto."""
    ctx = layer.context()
    P = ctx.base
    return all(g_open_mask(P, ctx.witnesses, P.up[i]) for i in range(len(P)))


def suite_amalgamation(max_size: int = 3, depth: int = 2) -> SuiteReport:
    """Layers below ``depth`` are built; the top one is reached through
    :func:`up_cone_section`, since its full listing is out of reach for the
    larger pullbacks."""
    rep = SuiteReport("amalgamation")
    posets = small_posets(max_size)
    for Z in posets:
        for X in posets:
            fs = surjective_p_morphisms(X, Z)
            if not fs:
                continue
            for Y in posets:
                gs = surjective_p_morphisms(Y, Z)
                n = bad = 0
                for f in fs:
                    for g in gs:
                        pc = pullback_complex(f, g, max(depth - 1, 0))
                        n += 1
                        onto = all(m.is_surjective() for m in pc.left + pc.right)
                        if depth >= 1:
                            onto = onto and up_cone_section(pc.complex[depth - 1])
                        bad += not onto
                if n:
                    rep.record(bad == 0, f"{describe(X)} -> {describe(Z)} <- "
                                         f"{describe(Y)}: {n} cospans to depth {depth}")
    return rep


# -- stability ------------------------------------------------------------------------------

def suite_stability(max_size: int = 3, depth: int = 4) -> SuiteReport:
    """Bullets of points in layers ``0 .. depth-2`` (their stability looks one
    layer beyond ``depth``), persistence of stable points up to ``depth``, and
    embeddings of the stable parts of layers ``0 .. depth-2``."""
    rep = SuiteReport("stability")
    for P in small_posets(max_size):
        lc = LazyComplex(P)
        bullets = [bullet_embed(lc, k, x) for k in range(depth - 1) for x in lc.points(k)]
        rep.record(all(b.ok for b in bullets),
                   f"{describe(P)} {len(bullets)} bullets stable over their point")
        stable = [(k, x) for k in range(depth - 1) for x in lc.points(k) if lc.stable(k, x)]
        persist = all(persistence_check(lc, k, x, depth).ok for k, x in stable)
        rep.record(persist, f"{describe(P)} {len(stable)} stable points persist to "
                            f"depth {depth}")
        models = [universal_model(P, d, lazy=lc) for d in range(depth - 1)]
        try:
            for lo, hi in zip(models, models[1:]):
                truncation_embedding(lc, lo, hi)
            emb = True
        except Exception:       # a failed certificate is a suite failure, not a crash
            emb = False
        sizes = [len(m.poset) for m in models]
        rep.record(emb, f"{describe(P)} stable parts {sizes} embed along depth")
    return rep


# -- inquisitive ----------------------------------------------------------------------------

def suite_inquisitive(max_size: int = 3) -> SuiteReport:
    rep = SuiteReport("inquisitive")
    for n in range(1, max_size + 1):
        VX = medvedev_frame(n)
        full = (1 << n) - 1
        negs = all(negation(VX, box_set(n, U)) == box_set(n, full & ~U)
                   for U in range(1 << n))
        rep.record(negs, f"|X|={n} negated boxes are boxes of complements")
        X = FinitePoset.antichain(n, [chr(ord("a") + i) for i in range(n)])
        mc = m_complex(X, 2)    # raises unless max(M_k) matches X for k <= 2
        rep.record(True, f"|X|={n} maximal points of M_0..M_2 match X, sizes "
                         f"{mc.complex.sizes()}")
        rep.record(is_regularly_generated(mc[1].poset),
                   f"|X|={n} upsets of M_1 are regularly generated")
        if n == 2:
            rep.record(is_regularly_generated(mc[2].poset),
                       f"|X|={n} upsets of M_2 are regularly generated")
    return rep


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "ladder": suite_ladder,
    "stabilization": suite_stabilization,
    "g-open": suite_g_open,
    "lifting": suite_lifting,
    "lc": suite_lc,
    "kc": suite_kc,
    "bool": suite_bool,
    "godel": suite_godel,
    "codistributivity": suite_codistributivity,
    "product": suite_product,
    "amalgamation": suite_amalgamation,
    "stability": suite_stability,
    "inquisitive": suite_inquisitive,
}

SIZED = {"stabilization", "g-open", "lifting", "lc", "kc", "bool", "amalgamation",
         "stability", "inquisitive"}


def run_suite(name: str, max_size: int | None = None) -> SuiteReport:
    fn = SUITES[name]
    if max_size is not None and name in SIZED:
        return fn(max_size)
    return fn()
