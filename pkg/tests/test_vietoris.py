import pytest
from hypothesis import given, strategies as st

from conftest import posets
from esakia_forge.errors import (IncompatibleMaps, NotGOpen, NotPMorphism,
                                 SizeLimitExceeded)
from esakia_forge.config import overridden
from esakia_forge.poset import (FinitePoset, MonotoneMap, is_antichain, is_isomorphic,
                                is_p_morphism, iter_bits, monotone_maps, posets_up_to_iso,
                                product)
from esakia_forge.vietoris import (GContext, build_complex, codistributivity_check,
                                   g_open_mask, is_g_open_map, is_g_open_subset,
                                   lift_direct_image, lift_point_map, product_complex,
                                   pullback_complex, unit_thread, vietoris_step)


@pytest.fixture
def first(chain2):
    return vietoris_step(GContext.terminal(chain2))


def test_first_step_over_the_chain(first):
    assert sorted(map(first.label, range(3))) == ["{0,1}", "{0}", "{1}"]
    bottom = [i for i in range(3) if first.label(i) == "{0,1}"][0]
    assert first.poset.up[bottom] == 0b111


def test_second_step_labels(first):
    second = vietoris_step(first.context(), source=first, index=2)
    assert {second.label(i) for i in range(4)} == {
        "{{1}}", "{{0,1},{1}}", "{{0,1},{0},{1}}", "{{0}}"}


def test_subset_examples(first):
    ctx = first.context()
    names = {first.label(i): first.poset.elements[i] for i in range(3)}
    assert not is_g_open_subset(ctx, [names["{0,1}"]])
    assert is_g_open_subset(ctx, [names["{0,1}"], names["{1}"]])
    assert is_g_open_subset(ctx, first.poset.elements)
    for i in range(3):
        assert is_g_open_subset(ctx, first.poset.up[i])


def test_map_examples(first):
    P = first.poset
    names = {first.label(i): i for i in range(3)}
    for keep, expected in ((["{0,1}", "{1}"], True), (["{0,1}"], False)):
        sub = P.subposet(sum(1 << names[k] for k in keep))
        inc = MonotoneMap(sub, P, [P.index(e) for e in sub.elements])
        assert is_g_open_map(inc, first.root) is expected
    with pytest.raises(IncompatibleMaps):
        is_g_open_map(first.root, first.root)


def test_p_morphisms_are_open_for_everything():
    small = [P for n in (1, 2, 3) for P in posets_up_to_iso(n)]
    for X in small:
        for Y in small:
            for f in monotone_maps(X, Y):
                if not is_p_morphism(f):
                    continue
                for Z in small[:3]:
                    for g in monotone_maps(Y, Z):
                        assert is_g_open_map(f, g)


def test_antichain_step_is_discrete():
    layer = vietoris_step(GContext.terminal(FinitePoset.antichain(3)))
    assert is_antichain(layer.poset) and len(layer) == 3


def test_build_examples(chain2):
    assert build_complex(chain2, None, 3).sizes() == (2, 3, 4, 5)
    assert build_complex(FinitePoset.singleton(), None, 4).sizes() == (1,) * 5
    c = build_complex(FinitePoset.antichain(3), None, 5)
    assert all(is_isomorphic(layer.poset, FinitePoset.antichain(3)) for layer in c.layers)
    with pytest.raises(ValueError):
        build_complex(chain2, None, -1)


def test_cap_reports_prefix():
    with overridden(search_cap=50):
        with pytest.raises(SizeLimitExceeded) as e:
            build_complex(FinitePoset.chain(3), None, 3)
    assert e.value.partial is not None and e.value.partial.depth >= 1


def test_lift_examples(chain2, first):
    ctx = GContext.terminal(chain2)
    ident = MonotoneMap.identity(chain2)
    lift = lift_point_map(ident, ctx, first)
    assert [first.provenance[v] for v in lift.assignment] == [chain2.up[0], chain2.up[1]]
    one = FinitePoset.singleton()
    top = MonotoneMap(one, chain2, [1])
    assert first.provenance[lift_point_map(top, ctx, first)(0)] == 0b10
    second = vietoris_step(first.context())
    back = lift_point_map(first.root, ctx, first)
    assert back.then(first.root) == first.root
    assert lift_point_map(MonotoneMap.identity(first.poset), first.context(),
                          second).then(second.root) == MonotoneMap.identity(first.poset)


def test_lift_requires_openness(chain2, first):
    ctx = GContext(chain2, (MonotoneMap.identity(chain2),))
    bottom = MonotoneMap(FinitePoset.singleton(), chain2, [0])
    with pytest.raises(NotGOpen):
        lift_point_map(bottom, ctx, vietoris_step(ctx))


def test_direct_image_examples(chain2, first):
    ctx = GContext.terminal(chain2)
    ident = lift_direct_image(MonotoneMap.identity(chain2), ctx, ctx, first, first)
    assert ident == MonotoneMap.identity(first.poset)
    one = FinitePoset.singleton()
    collapse = MonotoneMap.terminal(chain2, one)
    img = lift_direct_image(collapse, ctx, GContext.terminal(one))
    assert len(img.codomain) == 1
    A = FinitePoset.antichain(2)
    swap = MonotoneMap(A, A, [1, 0])
    sw = lift_direct_image(swap, GContext.terminal(A), GContext.terminal(A))
    assert sw.assignment == (1, 0)
    with pytest.raises(IncompatibleMaps):
        lift_direct_image(MonotoneMap.identity(chain2), GContext(
            chain2, (MonotoneMap.identity(chain2),)), ctx)


def test_unit_threads(chain2):
    c = build_complex(chain2, None, 2)
    assert len(unit_thread(chain2, "1", 2, c)) == 3
    thread = unit_thread(chain2, "0", 2, c)
    assert c[2].label(c[2].poset.index(thread[2])) == "{{0,1},{0},{1}}"
    s = FinitePoset.singleton()
    assert len(set(unit_thread(s, "*", 3, build_complex(s, None, 3)))) == 4


def test_product_complexes(chain2):
    A = FinitePoset.antichain(2)
    pc = product_complex(A, A, 2)
    assert all(len(layer) == 4 and is_antichain(layer.poset) for layer in pc.complex.layers)
    grid = product_complex(chain2, chain2, 1)
    assert grid.complex[1].root.is_surjective()
    # a trivial factor contributes nothing: every layer stays the other factor
    solo = product_complex(chain2, FinitePoset.singleton(), 2)
    assert all(is_isomorphic(layer.poset, chain2) for layer in solo.complex.layers)


def test_pullback_complexes(chain2):
    ident = MonotoneMap.identity(chain2)
    diag = pullback_complex(ident, ident, 2)
    plain = build_complex(chain2, [ident], 2)
    assert all(is_isomorphic(a.poset, b.poset)
               for a, b in zip(diag.complex.layers, plain.layers))
    with pytest.raises(NotPMorphism):
        pullback_complex(MonotoneMap(chain2, chain2, [0, 0]), ident, 1)


def test_codistributivity_examples(chain2):
    A, s = FinitePoset.antichain(2), FinitePoset.singleton()
    assert codistributivity_check(chain2, s, s, 1).holds
    assert codistributivity_check(chain2, chain2, chain2, 1).holds
    assert codistributivity_check(A, chain2, s, 2).holds


@pytest.mark.parametrize("n", range(1, 4))
def test_layer_invariants(n):
    for P in posets_up_to_iso(n):
        c = build_complex(P, None, 2)
        for k in range(1, 3):
            layer, prev = c[k], c[k - 1]
            assert layer.root.is_surjective()
            assert is_g_open_map(layer.root, prev.context().witnesses[0])
            for i, S in enumerate(layer.provenance):
                r = layer.root(i)
                assert (S >> r) & 1 and S & ~prev.poset.up[r] == 0
                assert g_open_mask(prev.poset, prev.context().witnesses, S)
                for j, T in enumerate(layer.provenance):
                    assert layer.poset.leq(i, j) == (T & ~S == 0)


@given(posets(max_size=3))
def test_maximal_points_are_singleton_threads(P):
    c = build_complex(P, None, 2)
    for layer in c.layers[1:]:
        tops = [i for i in range(len(layer)) if layer.poset.up[i] == 1 << i]
        assert len(tops) == len(P)
        assert all(bin(layer.provenance[i]).count("1") == 1 for i in tops)


@given(posets(max_size=4), st.data())
def test_step_lists_exactly_the_open_rooted_subsets(P, data):
    ctx = GContext.terminal(P)
    layer = vietoris_step(ctx)
    found = set(layer.provenance)
    for x in range(len(P)):
        cone = P.up[x]
        sub = cone
        while True:
            if (sub >> x) & 1:
                assert (sub in found) == g_open_mask(P, ctx.witnesses, sub)
            if sub == 0:
                break
            sub = (sub - 1) & cone
