import pytest

from esakia_forge.birkhoff import heyting_implication, upsets
from esakia_forge.errors import NotPrelinear
from esakia_forge.modes import VarietyMode
from esakia_forge.poset import (FinitePoset, free_dl_dual, is_antichain, is_directed,
                                is_isomorphic, posets_up_to_iso)
from esakia_forge.varieties import (boolean_filter_members, boolean_step,
                                    godel_coproduct, is_linearised, is_well_directed,
                                    kc_filter_characterization,
                                    lc_filter_characterization, lc_free,
                                    stabilization_check)
from esakia_forge.birkhoff import lattices_isomorphic
from esakia_forge.vietoris import build_complex


def by_label(layer):
    return {layer.label(i): i for i in range(len(layer))}


def test_boolean_step_examples(chain2, vee):
    assert is_isomorphic(boolean_step(chain2).poset, FinitePoset.antichain(2))
    assert is_antichain(boolean_step(FinitePoset.antichain(4)).poset)
    step = boolean_step(vee)
    L = upsets(step.poset)
    assert len(step) == 3 and len(L) == 8
    full = step.poset.full
    for U in L:
        for V in L:
            assert heyting_implication(step.poset, U, V) == (full & ~U) | V


def test_boolean_filter_is_singletons(chain2):
    assert boolean_filter_members(chain2) == {0b01, 0b10}


def test_well_directed_examples(chain2):
    two = build_complex(chain2, None, 2)[2]
    idx = by_label(two)
    assert is_well_directed(two, idx["{{1}}"])
    assert is_well_directed(two, idx["{{0,1},{1}}"])
    assert not is_well_directed(two, idx["{{0,1},{0},{1}}"])


def test_kc_examples(chain2):
    for P in (chain2, FinitePoset.antichain(2)):
        agree = kc_filter_characterization(build_complex(P, None, 2)[2])
        assert agree.holds
    assert kc_filter_characterization(build_complex(chain2, None, 2)[2]).checked == 4


def test_kc_root_is_onto_for_directed_bases():
    for n in range(1, 4):
        for P in posets_up_to_iso(n):
            if is_directed(P):
                c = build_complex(P, None, 3, VarietyMode.KC)
                assert all(layer.root.is_surjective() for layer in c.layers[1:])


def test_linearised_examples(chain2):
    two = build_complex(chain2, None, 2)[2]
    idx = by_label(two)
    assert is_linearised(two, idx["{{1}}"])
    assert is_linearised(two, idx["{{0,1},{1}}"])
    assert not is_linearised(two, idx["{{0,1},{0},{1}}"])
    assert lc_filter_characterization(two).holds
    one = build_complex(FinitePoset.singleton(), None, 2)[2]
    assert lc_filter_characterization(one).holds


def test_lc_free_examples(chain2):
    free = lc_free(chain2)
    assert len(free.poset) == 3 and len(upsets(free.poset)) == 6
    assert {free.layer.label(i) for i in range(3)} == {"{{0}}", "{{1}}", "{{0,1},{1}}"}
    assert free.complex.sizes() == (2, 3, 3, 3)
    assert len(lc_free(FinitePoset.singleton()).poset) == 1
    assert is_antichain(lc_free(FinitePoset.antichain(2)).poset)


def test_lc_layers_are_chains_from_stage_two(chain2):
    c = build_complex(FinitePoset.chain(3), None, 3, VarietyMode.LC)
    for layer in c.layers[2:]:
        assert all(is_linearised(layer, i) for i in range(len(layer)))


def test_coproduct_examples(chain2):
    one = lc_free(free_dl_dual(1)[0]).poset
    with_unit = godel_coproduct(one, FinitePoset.singleton())
    assert lattices_isomorphic(upsets(with_unit.poset), upsets(one))
    with pytest.raises(NotPrelinear):
        godel_coproduct(FinitePoset.from_relation("abc", [("c", "a"), ("c", "b")]),
                        chain2)


def test_chain_coproduct_matches_the_chain_oracle(chain2):
    # the chain 0 < 1 is dual to the three-element Godel algebra, free on one
    # generator modulo ~~p; the coproduct of two copies is free on p, q modulo
    # ~~p and ~~q, read off from every evaluation into chains of length <= 4
    from esakia_forge.formulas import _Ops, _staged_closure
    from esakia_forge.config import get_config
    import itertools
    comps = [(m, v) for m in (2, 3, 4) for v in itertools.product(range(m), repeat=2)
             if all(x > 0 for x in v)]
    tops = tuple(m - 1 for m, _ in comps)
    ops = _Ops(lambda a, b: tuple(map(min, a, b)), lambda a, b: tuple(map(max, a, b)),
               lambda a, b: tuple(t if x <= y else y for x, y, t in zip(a, b, tops)),
               tuple(0 for _ in comps), tops)
    gens = {"p": tuple(v[0] for _, v in comps), "q": tuple(v[1] for _, v in comps)}
    oracle = _staged_closure(gens, ops, None, get_config().upset_cap, lambda t: t)
    co = godel_coproduct(chain2, chain2)
    assert len(upsets(co.poset)) == len(oracle.members)


def test_stabilization_examples(chain2):
    assert stabilization_check(FinitePoset.antichain(3)) == \
        stabilization_check(FinitePoset.antichain(3))
    v = stabilization_check(FinitePoset.antichain(3))
    assert v.root_is_iso and v.antichain
    w = stabilization_check(chain2)
    assert not w.root_is_iso and not w.antichain
