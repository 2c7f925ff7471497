"""Glued Toeplitz cubes: membership, extension, class transport and the
cocycle law, freeness witnesses."""

import random
from itertools import permutations

import pytest

from posetsheaf.errors import DomainError, InputError, ResourceError
from posetsheaf.multipullback import (
    PullbackTuple,
    class_of,
    cocycle_check,
    component_position,
    extend_partial,
    is_member,
    pi_edge,
    phi_quotient,
    random_member,
    random_monomial_tensor,
    separator_sigma_mI,
    tuple_from_json,
    tuple_to_json,
    unit_tuple,
    verify_freeness,
    witness_TmI,
    witness_xI,
    zero_tuple,
)
from posetsheaf.toeplitz import (
    T_ONE,
    Z,
    Z_STAR,
    compact_unit,
    from_factors,
    mt_one,
    psi_ij_inv,
    section_at,
    t_monomial,
)


def test_component_position():
    assert component_position(2, 0) == 1
    assert component_position(2, 1) == 2
    assert component_position(2, 3) == 3
    assert component_position(0, 1) == 1
    with pytest.raises(InputError):
        component_position(1, 1)


def test_mirror_sphere_membership():
    z1, zs = from_factors([Z]), from_factors([Z_STAR])
    assert is_member(PullbackTuple.make([z1, zs])).ok
    bad = is_member(PullbackTuple.make([z1, z1]))
    assert not bad.ok and bad.failing_pair == (0, 1)


def test_zero_and_unit_tuples_are_members():
    for n in (1, 2, 3):
        assert is_member(zero_tuple(n)).ok
        assert is_member(unit_tuple(n)).ok


def test_membership_closed_under_products():
    rng = random.Random(15)
    for n in (1, 2):
        for _ in range(10):
            s = random_member(rng, n)
            t = random_member(rng, n)
            assert is_member(s.mul(t)).ok


def test_extend_partial_lift_example():
    t = extend_partial({0: from_factors([Z])}, 1)
    assert t.components[1] == from_factors([Z_STAR])


def test_extend_partial_empty_input():
    t = extend_partial({}, 2)
    assert t.components == zero_tuple(2).components


def test_extend_partial_units():
    one = mt_one(("T", "T"))
    t = extend_partial({0: one, 1: one}, 2)
    assert t.components[2] == one


def test_extend_partial_keeps_given_components():
    rng = random.Random(44)
    for n in (1, 2, 3):
        for _ in range(15):
            full = random_member(rng, n)
            keep = sorted(rng.sample(range(n + 1), rng.randint(1, n)))
            partial = {i: full.components[i] for i in keep}
            redone = extend_partial(partial, n)
            assert is_member(redone).ok
            for i in keep:
                assert redone.components[i] == full.components[i]


def test_extend_partial_incompatible_named_pair():
    z1 = from_factors([Z])
    with pytest.raises(DomainError) as err:
        extend_partial({0: z1, 1: z1}, 1)
    assert "(0,1)" in str(err.value)


def test_extend_partial_bad_shape():
    with pytest.raises(InputError):
        extend_partial({0: from_factors([Z])}, 2)


def test_phi_quotient_documented_value():
    # moving the class of z x 1 (x 1) across the 0-2 edge with spectator 1
    for n in (2, 3):
        pad = [T_ONE] * (n - 2)
        rep = class_of(2, 0, 1, from_factors([Z, T_ONE] + pad))
        out = phi_quotient(0, 2, 1, rep)
        assert out == class_of(0, 2, 1, from_factors([T_ONE, Z_STAR] + pad))


def test_phi_quotient_fixes_unit_class():
    rep = class_of(2, 0, 1, mt_one(("T", "T", "T")))
    assert phi_quotient(0, 2, 1, rep) == class_of(0, 2, 1, mt_one(("T", "T", "T")))


def test_phi_quotient_index_clash():
    rep = class_of(2, 0, 1, mt_one(("T", "T")))
    with pytest.raises(InputError):
        phi_quotient(0, 2, 2, rep)
    rep3 = class_of(2, 0, 1, mt_one(("T", "T", "T")))
    with pytest.raises(InputError):
        phi_quotient(1, 2, 3, rep3)  # S positions sit at the (0,1)-quotient


def test_phi_quotient_well_defined_on_classes():
    # perturbing the lift by a kernel element of either quotient does not
    # change the transported class
    from posetsheaf.multipullback import class_of, phi_on_lift

    rng = random.Random(31)
    i, j, k, n = 0, 2, 1, 2
    for _ in range(40):
        b = random_monomial_tensor(rng, n, 2)
        p = rng.choice([component_position(j, i), component_position(j, k)])
        kernel_factor = [t_monomial(rng.randint(0, 1), rng.randint(0, 1))] * n
        kernel_factor[p - 1] = compact_unit()
        perturbed = b + from_factors(kernel_factor)
        lhs = class_of(i, j, k, phi_on_lift(i, j, b))
        rhs = class_of(i, j, k, phi_on_lift(i, j, perturbed))
        assert lhs == rhs


def test_cocycle_exact_small():
    assert cocycle_check(0, 2, 1, 2, max_exp=2)
    assert cocycle_check(2, 0, 1, 2, max_exp=1)
    for (i, j, k) in permutations(range(3), 3):
        assert cocycle_check(i, j, k, 2, max_exp=1)


def test_cocycle_fails_without_antipode():
    assert not cocycle_check(0, 2, 1, 2, max_exp=1, antipode=False)


def test_mattprop_kernel_image_condition():
    # the two routes into the shared face carry the kernel toward a third
    # index onto the same set: the explicit preimage of an image of a
    # kernel generator lands in the matching kernel
    rng = random.Random(62)
    for n in (2, 3):
        for (i, j, k) in permutations(range(n + 1), 3):
            for _ in range(8):
                factors = [
                    t_monomial(rng.randint(0, 2), rng.randint(0, 2)) for _ in range(n)
                ]
                pos_k = component_position(i, k)
                factors[pos_k - 1] = compact_unit()
                x = from_factors(factors)  # generator of ker pi^i_k inside B_i
                assert not pi_edge(i, k, x)
                w = pi_edge(i, j, x)
                pos = component_position(j, i)
                if i > j:
                    y = section_at(pos, w)
                else:
                    y = section_at(pos, psi_ij_inv(i, j, w))
                assert pi_edge(j, i, y) == w
                assert not pi_edge(j, k, y)


def test_witness_xI_membership_and_vanishing():
    for n in (1, 2, 3):
        for I in ({0}, {n}, set(range(1, n + 1))):
            t = witness_xI(sorted(I), n)
            assert is_member(t).ok
            for idx in range(n + 1):
                assert bool(t.components[idx]) == (idx not in I)


def test_witness_xI_rejects_full_set():
    with pytest.raises(InputError):
        witness_xI([0, 1], 1)
    with pytest.raises(InputError):
        witness_xI([], 2)


def test_witness_TmI_separator_interaction():
    n = 2
    for I in ({1}, {2}, {1, 2}):
        m = 0
        probe = witness_TmI(m, sorted(I), n)
        # the probe dies toward exactly the indices in I
        for k in range(n + 1):
            if k == m:
                continue
            assert (not pi_edge(m, k, probe)) == (k in I)
        assert separator_sigma_mI(m, sorted(I), probe)


def test_separator_rejects_misplaced_m():
    with pytest.raises(InputError):
        separator_sigma_mI(0, [0], mt_one(("T", "T")))


def test_freeness_reports_pass():
    for n in (1, 2, 3):
        rep = verify_freeness(n, seed=3)
        assert rep.ok
        assert rep.join_element_count == 2 ** (n + 1) - 2
        assert rep.gluing.ok and rep.distinct_and_ordered.ok and rep.meet_irreducible.ok


def test_freeness_bound():
    with pytest.raises(ResourceError):
        verify_freeness(4)


def test_freeness_flags_broken_gluing_before_clauses():
    rep = verify_freeness(2, seed=3, antipode=False)
    assert not rep.gluing.ok
    assert rep.distinct_and_ordered is None and rep.meet_irreducible is None
    assert not rep.ok


def test_tuple_json_roundtrip():
    t = extend_partial({0: random_monomial_tensor(random.Random(1), 2, 2)}, 2)
    doc = tuple_to_json(t)
    assert tuple_from_json(doc) == t
