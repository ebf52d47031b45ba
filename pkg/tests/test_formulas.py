import pytest
from hypothesis import given, strategies as st

from conftest import posets
from esakia_forge.birkhoff import Valuation, eval_formula, upsets
from esakia_forge.formulas import (equivalent_on_frame, generate_subalgebra,
                                   godel_chain_oracle, implication_rank, parse)
from esakia_forge.errors import SizeLimitExceeded
from esakia_forge.poset import FinitePoset, free_dl_dual
from esakia_forge.varieties import lc_free


def test_all_generators_give_everything_at_once(chain2):
    L = upsets(chain2)
    alg = generate_subalgebra(L, {f"u{i}": U for i, U in enumerate(L)})
    assert alg.is_everything and alg.max_stage() == 0


def test_free_distributive_lattice_needs_no_implication():
    P, gens = free_dl_dual(2)
    alg = generate_subalgebra(upsets(P), {"p": gens[0], "q": gens[1]})
    assert alg.is_everything and alg.max_stage() == 0


def test_one_generator_godel_algebra_by_stage_two():
    base, gens = free_dl_dual(1)
    free = lc_free(base)
    L = upsets(free.poset)
    p = free.complex.to_base(2).preimage_mask(gens[0])
    alg = generate_subalgebra(L, {"p": p})
    assert len(L) == 6 and alg.is_everything and alg.max_stage() <= 2


def test_rank_cap_stops_early():
    base, gens = free_dl_dual(1)
    from esakia_forge.vietoris import build_complex
    c = build_complex(base, None, 3)
    L = upsets(c[3].poset)
    p = c.to_base(3).preimage_mask(gens[0])
    capped = generate_subalgebra(L, {"p": p}, rank_cap=1)
    assert capped.stages <= 1 and max(capped.stage.values()) <= 1


def test_witnesses_evaluate_to_their_members():
    base, gens = free_dl_dual(1)
    from esakia_forge.vietoris import build_complex
    c = build_complex(base, None, 3)
    L = upsets(c[3].poset)
    p = c.to_base(3).preimage_mask(gens[0])
    alg = generate_subalgebra(L, {"p": p})
    v = Valuation(c[3].poset, {"p": p})
    for U in alg.members:
        phi = alg.witness[U]
        assert eval_formula(phi, v) == U
        assert alg.stage[U] <= implication_rank(phi)


def test_chain_oracle_counts():
    assert godel_chain_oracle(0).count == 2
    one = godel_chain_oracle(1)
    assert one.count == 6 == len(upsets(lc_free(free_dl_dual(1)[0]).poset))
    assert godel_chain_oracle(1, 3).count == 6


def test_chain_oracle_two_variables():
    assert godel_chain_oracle(2, 4).count == 342


def test_frame_equivalence(chain2):
    nnp, p = parse("~~p"), parse("p")
    assert equivalent_on_frame(p, p, chain2)
    assert equivalent_on_frame(nnp, p, FinitePoset.antichain(2))
    assert not equivalent_on_frame(nnp, p, chain2)
    with pytest.raises(SizeLimitExceeded):
        equivalent_on_frame(parse("a & b & c & d"), p, chain2)


@given(posets(max_size=4), st.data())
def test_closure_is_monotone_and_idempotent(P, data):
    L = upsets(P)
    small = data.draw(st.lists(st.sampled_from(L.members), max_size=2, unique=True))
    extra = data.draw(st.lists(st.sampled_from(L.members), max_size=2, unique=True))
    a = generate_subalgebra(L, {f"g{i}": U for i, U in enumerate(small)})
    b = generate_subalgebra(L, {f"g{i}": U for i, U in enumerate(small + extra)})
    assert set(a.members) <= set(b.members)
    again = generate_subalgebra(L, {f"m{i}": U for i, U in enumerate(a.members)})
    assert set(again.members) == set(a.members) and again.max_stage() == 0
