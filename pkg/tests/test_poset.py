"""Order core: upper sets, Alexandrov opens, opposites, monotonicity,
topological predicates."""

import json
import random
from itertools import combinations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posetsheaf.errors import InputError, ResourceError
from posetsheaf.poset import (
    FinitePoset,
    FinitePreorder,
    alexandrov_opens,
    hasse_edges,
    is_monotone,
    is_upper_mask,
    opposite,
    poset_from_json,
    poset_to_json,
    to_dot,
    topo_report,
    up_set,
)

THREE_DISKS_SUPPORTS = {
    "A": (0, 1, 2), "B": (0, 1), "C": (0, 2), "D": (1, 2),
    "E": (1,), "F": (0,), "G": (2,),
}


def three_disk_partition_poset() -> FinitePoset:
    labels = sorted(THREE_DISKS_SUPPORTS)
    rel = [
        (x, y)
        for x in labels
        for y in labels
        if set(THREE_DISKS_SUPPORTS[x]) >= set(THREE_DISKS_SUPPORTS[y])
    ]
    return FinitePoset(labels, rel)


def count_antichains_bruteforce(P: FinitePoset) -> int:
    """Independent oracle: antichains counted by scanning all subsets."""
    n = len(P)
    comparable = [
        [P._up[i] >> j & 1 or P._up[j] >> i & 1 for j in range(n)] for i in range(n)
    ]
    count = 0
    for mask in range(1 << n):
        bits = [i for i in range(n) if mask >> i & 1]
        if all(not comparable[i][j] for i, j in combinations(bits, 2)):
            count += 1
    return count


def upsets_bruteforce(P) -> set:
    n = len(P)
    return {m for m in range(1 << n) if is_upper_mask(P, m)}


def random_poset(rng: random.Random, n: int) -> FinitePoset:
    rel = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                rel.append((i, j))
    return FinitePoset(list(range(n)), rel)


def test_up_set_chain():
    P = FinitePoset.chain(["a", "b", "c"])
    assert up_set(P, ["b"]).members == {"b", "c"}


def test_up_set_antichain():
    P = FinitePoset.antichain(["a", "b"])
    assert up_set(P, ["a"]).members == {"a"}


def test_up_set_three_disk_minimum():
    P = three_disk_partition_poset()
    assert up_set(P, ["A"]).members == set("ABCDEFG")


def test_up_set_unknown_label():
    P = FinitePoset.chain(["a"])
    with pytest.raises(InputError):
        up_set(P, ["nope"])


def test_up_set_idempotent_random():
    rng = random.Random(5)
    for _ in range(30):
        P = random_poset(rng, rng.randint(1, 7))
        S = [e for e in P.elements if rng.random() < 0.5]
        once = up_set(P, S)
        assert up_set(P, once.members) == once


def test_alexandrov_opens_singleton():
    assert len(alexandrov_opens(FinitePoset.chain(["x"]))) == 2


def test_alexandrov_opens_two_antichain():
    assert len(alexandrov_opens(FinitePoset.antichain(["x", "y"]))) == 4


def test_alexandrov_opens_boolean_two_set():
    P = FinitePoset.subsets(("x", "y"))
    opens = alexandrov_opens(P)
    assert len(opens) == 6
    assert count_antichains_bruteforce(P) == 6


def test_alexandrov_opens_match_bruteforce():
    rng = random.Random(11)
    for _ in range(25):
        P = random_poset(rng, rng.randint(0, 8))
        got = {u.mask for u in alexandrov_opens(P)}
        assert got == upsets_bruteforce(P)
        assert len(got) == count_antichains_bruteforce(P)


def test_alexandrov_opens_closed_under_union_intersection():
    rng = random.Random(23)
    for _ in range(10):
        P = random_poset(rng, rng.randint(1, 8))
        masks = {u.mask for u in alexandrov_opens(P)}
        for a, b in product(masks, repeat=2):
            assert a | b in masks
            assert a & b in masks


def test_alexandrov_opens_bound():
    P = FinitePoset.antichain(list(range(21)))
    with pytest.raises(ResourceError):
        alexandrov_opens(P)
    with pytest.raises(ResourceError):
        alexandrov_opens(FinitePoset.antichain(list(range(8))), max_elements=4)


def test_alexandrov_opens_empty_poset():
    P = FinitePoset((), ())
    assert len(alexandrov_opens(P)) == 1


def test_opposite_chain():
    P = FinitePoset.chain(["a", "b"])
    Q = opposite(P)
    assert Q.leq("b", "a") and not Q.leq("a", "b")


def test_opposite_involution():
    P = three_disk_partition_poset()
    assert opposite(opposite(P)) == P


def test_closed_sets_are_opens_of_opposite():
    # exhaustive flip check on random posets up to 8 points
    rng = random.Random(3)
    for _ in range(20):
        P = random_poset(rng, rng.randint(1, 8))
        full = (1 << len(P)) - 1
        closed = {full ^ u.mask for u in alexandrov_opens(P)}
        assert closed == {u.mask for u in alexandrov_opens(opposite(P))}


def test_closed_sets_of_three_chain():
    P = FinitePoset.chain(["a", "b", "c"])
    assert len(alexandrov_opens(opposite(P))) == 4


def test_is_monotone_identity_and_constant():
    P = three_disk_partition_poset()
    ident = {e: e for e in P.elements}
    assert is_monotone(ident, P, P)
    const = {e: "A" for e in P.elements}
    assert is_monotone(const, P, P)


def test_is_monotone_middle_swap_fails():
    P = FinitePoset.chain(["a", "b", "c", "d"])
    f = {"a": "a", "b": "c", "c": "b", "d": "d"}
    assert not is_monotone(f, P, P)


def test_is_monotone_partial_mapping():
    P = FinitePoset.chain(["a", "b"])
    with pytest.raises(InputError):
        is_monotone({"a": "a"}, P, P)


def test_monotone_iff_preimages_open():
    rng = random.Random(7)
    for _ in range(40):
        P = random_poset(rng, rng.randint(1, 6))
        Q = random_poset(rng, rng.randint(1, 6))
        f = {e: rng.choice(Q.elements) for e in P.elements}
        preimages_open = all(
            is_upper_mask(P, sum(1 << P.index(e) for e in P.elements if u.mask >> Q.index(f[e]) & 1))
            for u in alexandrov_opens(Q)
        )
        assert is_monotone(f, P, Q) == preimages_open


def test_topo_report_examples():
    P1 = FinitePoset([frozenset([0]), frozenset([1]), frozenset([0, 1])],
                     [(frozenset([0]), frozenset([0, 1])), (frozenset([1]), frozenset([0, 1]))])
    assert topo_report(P1) == topo_report(P1).__class__(True, False, True)
    r = topo_report(FinitePoset.antichain(["a", "b"]))
    assert (r.is_T0, r.is_T1, r.is_connected) == (True, True, False)
    r1 = topo_report(FinitePoset.chain(["a"]))
    assert (r1.is_T0, r1.is_T1, r1.is_connected) == (True, True, True)
    r0 = topo_report(FinitePoset((), ()))
    assert (r0.is_T0, r0.is_T1, r0.is_connected) == (True, True, True)


def test_preorder_allows_cycles_poset_rejects():
    pre = FinitePreorder(["a", "b"], [("a", "b"), ("b", "a")])
    assert pre.leq("a", "b") and pre.leq("b", "a")
    assert not topo_report(pre).is_T0
    with pytest.raises(InputError):
        FinitePoset(["a", "b"], [("a", "b"), ("b", "a")])


def test_preorder_opens_factor_through_classes():
    pre = FinitePreorder(["a", "b", "c"], [("a", "b"), ("b", "a"), ("a", "c")])
    opens = alexandrov_opens(pre)
    # classes {a,b} < {c}: upsets are {}, {c}, {a,b,c}
    assert {u.members for u in opens} == {frozenset(), frozenset("c"), frozenset("abc")}


def test_up_set_on_preorder_saturates_classes():
    pre = FinitePreorder(["a", "b", "c"], [("a", "b"), ("b", "a"), ("a", "c")])
    assert up_set(pre, ["b"]).members == {"a", "b", "c"}


def test_hasse_edges_three_disks():
    P = three_disk_partition_poset()
    edges = set(hasse_edges(P))
    assert edges == {
        ("A", "B"), ("A", "C"), ("A", "D"),
        ("B", "E"), ("B", "F"), ("C", "F"),
        ("C", "G"), ("D", "E"), ("D", "G"),
    }


def test_dot_output():
    P = FinitePoset.chain(["a", "b"])
    dot = to_dot(P)
    assert '"a" -> "b";' in dot and dot.startswith("digraph")


def test_json_roundtrip_and_optional_reflexive():
    P = three_disk_partition_poset()
    doc = poset_to_json(P)
    assert poset_from_json(doc) == P
    # reflexive pairs optional on input
    doc2 = {"elements": ["a", "b"], "leq": [["a", "b"]]}
    Q = poset_from_json(doc2)
    assert Q.leq("a", "a") and Q.leq("a", "b")
    # always present on output
    out = poset_to_json(Q)
    assert ["a", "a"] in out["leq"]
    assert json.loads(json.dumps(out)) == out


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.data())
def test_up_set_idempotence_property(n, data):
    pairs = data.draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda t: t[0] < t[1]),
            max_size=10,
        )
    )
    P = FinitePoset(list(range(n)), pairs)
    S = data.draw(st.lists(st.integers(0, n - 1), max_size=n))
    once = up_set(P, S)
    assert up_set(P, once.members) == once
