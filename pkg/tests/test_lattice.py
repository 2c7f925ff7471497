"""Lattices, the Birkhoff transform, free distributive lattices and the
freeness criterion."""

import random
from itertools import combinations

import pytest

from posetsheaf.errors import DomainError, InputError, ResourceError
from posetsheaf.lattice import (
    DEDEKIND,
    DLattice,
    birkhoff,
    birkhoff_reconstruct,
    free_distributive_lattice,
    generate_sublattice,
    is_free_on,
    lattice_from_json,
    lattice_isomorphic,
    lattice_to_json,
    meet_irreducibles,
    poset_isomorphic,
    upper_set_lattice,
)
from posetsheaf.poset import FinitePoset


def dedekind_bruteforce(n: int) -> int:
    """Oracle: count antichains of the Boolean poset B_n by scanning all
    subsets of its carrier."""
    carrier = list(range(1 << n))
    count = 0
    for mask in range(1 << len(carrier)):
        members = [carrier[i] for i in range(len(carrier)) if mask >> i & 1]
        ok = True
        for a, b in combinations(members, 2):
            if a & b == a or a & b == b:
                ok = False
                break
        if ok:
            count += 1
    return count


def powerset_lattice(base) -> DLattice:
    sets = [frozenset(c) for r in range(len(base) + 1) for c in combinations(base, r)]
    return DLattice.from_subsets(sets)


def diamond() -> DLattice:
    return upper_set_lattice(FinitePoset.antichain(["x", "y"]))


def two_chain() -> DLattice:
    return upper_set_lattice(FinitePoset.chain(["p"]))


def test_dedekind_oracle_small():
    assert dedekind_bruteforce(0) == 2
    assert dedekind_bruteforce(1) == 3
    assert dedekind_bruteforce(2) == 6
    assert dedekind_bruteforce(3) == 20


def test_meet_irreducibles_two_chain():
    L = two_chain()
    bottom = L.elements[L.bottom_idx()]
    assert meet_irreducibles(L) == [bottom]


def test_meet_irreducibles_diamond():
    L = diamond()
    mids = {e for e in L.elements if len(e) == 1}
    assert set(meet_irreducibles(L)) == mids


def test_meet_irreducibles_free_three():
    L = free_distributive_lattice(3)
    irr = meet_irreducibles(L)
    assert len(irr) == 6
    # the irreducibles are exactly the joins over proper nonempty subsets
    gens = list(L.generators)
    joins = set()
    for r in (1, 2):
        for I in combinations(range(3), r):
            c = gens[I[0]]
            for i in I[1:]:
                c = L.join(c, gens[i])
            joins.add(c)
    assert set(irr) == joins


def test_top_never_irreducible():
    for L in (two_chain(), diamond(), free_distributive_lattice(2)):
        top = L.elements[L.top_idx()]
        assert top not in meet_irreducibles(L)


def test_birkhoff_two_chain():
    pair = birkhoff(two_chain())
    assert len(pair.irreducible_poset) == 1
    assert len(birkhoff_reconstruct(pair)) == 2


def test_birkhoff_diamond():
    pair = birkhoff(diamond())
    assert len(pair.irreducible_poset) == 2
    assert not pair.irreducible_poset.leq(*pair.irreducible_poset.elements)
    assert len(birkhoff_reconstruct(pair)) == 4


def test_birkhoff_iso_invariants():
    L = free_distributive_lattice(3)
    pair = birkhoff(L)
    iso = pair.iso
    assert len(set(iso.values())) == len(L)
    for a in L.elements:
        for b in L.elements:
            assert iso[L.meet(a, b)] == iso[a] | iso[b]
            assert iso[L.join(a, b)] == iso[a] & iso[b]


def test_birkhoff_free_two_irreducible_poset_is_antichain():
    L = free_distributive_lattice(2)
    pair = birkhoff(L)
    assert poset_isomorphic(pair.irreducible_poset, FinitePoset.antichain([0, 1]))


def test_birkhoff_rejects_nondistributive():
    # M3, the diamond of three incomparable middles
    elems = ["bot", "x", "y", "z", "top"]
    mids = {"x", "y", "z"}

    def jn(i, j):
        a, b = elems[i], elems[j]
        if a == b:
            return i
        if "top" in (a, b) or (a in mids and b in mids):
            return elems.index("top")
        if a == "bot":
            return j
        if b == "bot":
            return i
        return elems.index("top")

    def mt(i, j):
        a, b = elems[i], elems[j]
        if a == b:
            return i
        if "bot" in (a, b) or (a in mids and b in mids):
            return elems.index("bot")
        if a == "top":
            return j
        if b == "top":
            return i
        return elems.index("bot")

    L = DLattice(elems, jn, mt)
    assert not L.distributive
    with pytest.raises(DomainError):
        birkhoff(L)


def test_upper_set_lattice_examples():
    assert len(upper_set_lattice(FinitePoset.chain(["p"]))) == 2
    assert len(upper_set_lattice(FinitePoset.antichain(["a", "b"]))) == 4
    assert len(upper_set_lattice(FinitePoset.subsets(("x", "y")))) == 6


def test_upper_set_lattice_always_distributive():
    rng = random.Random(2)
    for _ in range(15):
        n = rng.randint(1, 6)
        rel = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
        P = FinitePoset(list(range(n)), rel)
        L = upper_set_lattice(P)
        assert L.distributive
        assert len(meet_irreducibles(L)) == len(P)


def test_generate_sublattice_top():
    L = diamond()
    top = L.elements[L.top_idx()]
    assert len(generate_sublattice(L, [top])) == 1


def test_generate_sublattice_two_sets():
    # closure by hand: {1,2}, {2,3} force {2} and {1,2,3}
    amb = powerset_lattice((1, 2, 3))
    gens = [frozenset({1, 2}), frozenset({2, 3})]
    sub = generate_sublattice(amb, gens)
    assert set(sub.elements) == {
        frozenset({1, 2}), frozenset({2, 3}), frozenset({2}), frozenset({1, 2, 3})
    }
    assert sub.generators == tuple(gens)


def test_generate_sublattice_v_shape_free_model():
    # three characteristic sets with all support patterns generate 18 sets
    pts = [frozenset(s) for s in ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))]
    amb = powerset_lattice(pts)
    gens = [frozenset(p for p in pts if i in p) for i in range(3)]
    sub = generate_sublattice(amb, gens)
    assert len(sub) == 18


def test_free_distributive_lattice_sizes():
    for n in (1, 2, 3, 4):
        L = free_distributive_lattice(n)
        assert len(L) == DEDEKIND[n] - 2
    assert len(free_distributive_lattice(2)) == dedekind_bruteforce(2) - 2
    assert len(free_distributive_lattice(3)) == dedekind_bruteforce(3) - 2


def test_free_distributive_lattice_bounds():
    with pytest.raises(ResourceError):
        free_distributive_lattice(0)
    with pytest.raises(ResourceError):
        free_distributive_lattice(7)
    with pytest.raises(ResourceError):
        free_distributive_lattice(6)  # gated behind allow_large


def test_is_free_on_free_lattices():
    for n in (1, 2, 3, 4):
        L = free_distributive_lattice(n)
        assert is_free_on(L, L.generators).free


def test_is_free_on_collapsed_generators():
    L = two_chain()
    top = L.elements[L.top_idx()]
    verdict = is_free_on(L, [top, top])
    assert not verdict.free
    assert verdict.witness["clause"] == "distinct"


def test_is_free_on_diamond_middles():
    L = diamond()
    mids = [e for e in L.elements if len(e) == 1]
    assert is_free_on(L, mids).free


def test_is_free_on_requires_generation():
    # two co-atoms of the 3-set powerset pass every clause yet generate
    # only 4 of the 8 elements
    L = powerset_lattice((1, 2, 3))
    with pytest.raises(DomainError):
        is_free_on(L, [frozenset({1, 2}), frozenset({1, 3})])


def test_lattice_json_roundtrip():
    L = diamond()
    doc = lattice_to_json(L)
    L2 = lattice_from_json(doc)
    assert lattice_isomorphic(L, L2)
    with pytest.raises(InputError):
        lattice_from_json({"elements": [1]})


def test_lattice_isomorphic_negative():
    assert not lattice_isomorphic(two_chain(), diamond())
    chain3 = upper_set_lattice(FinitePoset.chain(["a", "b", "c"]))
    chain3b = upper_set_lattice(FinitePoset.chain([1, 2, 3]))
    assert lattice_isomorphic(chain3, chain3b)
    four_chain = upper_set_lattice(FinitePoset.chain(["a", "b", "c"]))
    assert not lattice_isomorphic(four_chain, diamond())


def naturally_labeled_posets(n: int):
    """All posets on 0..n-1 whose order refines the integer order; every
    poset is isomorphic to one of these."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for mask in range(1 << len(pairs)):
        chosen = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        ok = True
        for (a, b) in chosen:
            if not ok:
                break
            for (c, d) in chosen:
                if b == c and (a, d) not in chosen:
                    ok = False
                    break
        if ok:
            yield FinitePoset(list(range(n)), list(chosen))


def test_birkhoff_roundtrip_small_distributive_family():
    # every distributive lattice with <= 6 elements arises from a poset
    # with <= 5 points
    seen = 0
    for n in range(0, 5):
        for P in naturally_labeled_posets(n):
            L = upper_set_lattice(P)
            if len(L) > 6:
                continue
            rec = birkhoff_reconstruct(birkhoff(L))
            assert lattice_isomorphic(L, rec)
            seen += 1
    assert seen >= 14


def test_validation_detects_broken_tables():
    with pytest.raises(InputError):
        DLattice([0, 1], lambda i, j: 0, lambda i, j: 1)  # absorption fails
