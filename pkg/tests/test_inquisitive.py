import pytest

from esakia_forge.birkhoff import negation, upsets
from esakia_forge.errors import NotDiscrete
from esakia_forge.inquisitive import (box_decomposition, box_set, heyting_closure,
                                      is_regularly_generated, m_complex, max_census,
                                      medvedev_frame, regular_elements, vmax_step)
from esakia_forge.poset import FinitePoset, is_isomorphic, posets_up_to_iso


def letters(n):
    return FinitePoset.antichain(n, [chr(ord("a") + i) for i in range(n)])


def test_medvedev_sizes():
    assert len(medvedev_frame(1)) == 1
    V = medvedev_frame(2)
    assert V.elements == ("{a}", "{b}", "{a,b}")
    assert V.up[2] == 0b111 and V.up[0] == 0b001
    V3 = medvedev_frame(3)
    assert len(V3) == 7 and sum(V3.up[i] == 1 << i for i in range(7)) == 3
    with pytest.raises(ValueError):
        medvedev_frame(0)


def test_vmax_examples():
    assert len(vmax_step(letters(1))[0]) == 1
    one, base = vmax_step(letters(2))
    assert {one.label(i) for i in range(3)} == {"{{a}}", "{{b}}", "{{a,b},{a},{b}}"}
    assert is_isomorphic(one.poset, base.poset)
    with pytest.raises(NotDiscrete):
        vmax_step(FinitePoset.chain(2))


def test_vmax_keeps_principal_upsets_with_singletons():
    one, base = vmax_step(letters(3))
    members = set(one.provenance)
    V = base.poset
    # up C holds {x} for each x in C, so every principal upset qualifies
    assert all(V.up[c] in members for c in range(len(V)))
    assert len(members) > len(V)


def test_m_complex_examples():
    assert m_complex(letters(1), 3).complex.sizes() == (1, 1, 1, 1)
    mc = m_complex(letters(2), 2)
    assert mc.complex.sizes() == (3, 3, 3)
    for k in range(3):
        assert sorted(max_census(mc, k).values()) == [0, 1]
    assert m_complex(letters(3), 2).complex.sizes() == (7, 14, 165)


def test_regular_elements_examples(chain2):
    assert regular_elements(chain2) == (0, 0b11)
    P = FinitePoset.antichain(3)
    assert set(regular_elements(P)) == set(upsets(P))
    V = medvedev_frame(2)
    regs = set(regular_elements(V))
    assert all(box_set(2, U) in regs for U in range(4))


def test_regular_generation_examples(chain2):
    assert is_regularly_generated(FinitePoset.antichain(3))
    assert not is_regularly_generated(chain2)
    for n in (1, 2, 3):
        assert is_regularly_generated(medvedev_frame(n))
    mc = m_complex(letters(2), 2)
    assert is_regularly_generated(mc[1].poset) and is_regularly_generated(mc[2].poset)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_negated_boxes(n):
    V = medvedev_frame(n)
    full = (1 << n) - 1
    for U in range(1 << n):
        assert negation(V, box_set(n, U)) == box_set(n, full & ~U)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_upsets_are_unions_of_boxes(n):
    V = medvedev_frame(n)
    for W in upsets(V):
        parts = box_decomposition(V, n, W)
        union = 0
        for U in parts:
            union |= box_set(n, U)
        assert union == W


def test_closure_of_generators(chain2):
    assert heyting_closure(chain2, []) == frozenset({0, 0b11})
    assert len(heyting_closure(chain2, [0b10])) == 3


def test_images_stay_regularly_generated():
    # homomorphic images of upsets(P) are upsets(U) for upsets U of P
    for n in range(1, 6):
        for P in posets_up_to_iso(n):
            if not is_regularly_generated(P):
                continue
            for U in upsets(P):
                if U:
                    assert is_regularly_generated(P.subposet(U))
