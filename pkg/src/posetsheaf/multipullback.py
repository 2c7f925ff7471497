"""The glued quantum projective space over Toeplitz cubes.

An element is a tuple of N+1 cube components, each a length-N all-T
tensor, compatible across every pair of indices through a symbol map on
one side and a twisted symbol map on the other.  This module decides
membership, extends compatible partial families one missing component at
a time by section-lifting, transports double-quotient classes around
index triangles and checks the cocycle law, and runs the freeness
witnesses: the kernel intersections of the component projections are
pairwise distinct, ordered by index containment, and sum irreducible.

Every operation takes an ``antipode`` flag; disabling it deforms the
gluing (the twist stops being an involution) and is used to prove the
checks are not vacuous.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Optional, Sequence

from .errors import DomainError, InputError, ResourceError
from .toeplitz import (
    MixedTensor,
    S,
    T,
    compact_unit,
    from_factors,
    mt_basis,
    mt_one,
    mt_zero,
    psi,
    psi_ij,
    psi_ij_inv,
    section_at,
    sigma_k,
    t_monomial,
    tensor_from_json,
    tensor_to_json,
)


def component_position(m: int, x: int) -> int:
    """1-indexed tensor position of covering index x inside component m:
    the m-th index is skipped, smaller indices shift up by one."""
    if x == m:
        raise InputError("a component has no position for its own index")
    return x + 1 if x < m else x


def _check_component(b: MixedTensor, N: int, name: str = "component") -> None:
    if b.shape != (T,) * N:
        raise InputError(f"{name} must be an all-T tensor of length {N}")


def pi_edge(m: int, k: int, b: MixedTensor, antipode: bool = True) -> MixedTensor:
    """The edge map from component m toward index k: a symbol map when
    m < k, the twisted route otherwise.  Output circle factor sits at
    position max(m, k)."""
    N = len(b.shape)
    if not (0 <= m <= N and 0 <= k <= N) or m == k:
        raise InputError(f"bad index pair ({m},{k}) at size {N}")
    _check_component(b, N)
    if m < k:
        return sigma_k(k, b)
    return psi_ij(k, m, sigma_k(k + 1, b), antipode)


@dataclass(frozen=True)
class PullbackTuple:
    """Candidate element of the glued algebra: components b_0..b_N, each
    an all-T tensor of length N."""

    n: int
    components: tuple

    @classmethod
    def make(cls, components: Sequence[MixedTensor]) -> "PullbackTuple":
        comps = tuple(components)
        n = len(comps) - 1
        if n < 1:
            raise InputError("need at least two components")
        for i, b in enumerate(comps):
            _check_component(b, n, f"component {i}")
        return cls(n, comps)

    def mul(self, other: "PullbackTuple") -> "PullbackTuple":
        if self.n != other.n:
            raise InputError("size mismatch")
        return PullbackTuple(
            self.n,
            tuple(a.mul(b) for a, b in zip(self.components, other.components)),
        )

    def scale(self, c) -> "PullbackTuple":
        return PullbackTuple(self.n, tuple(b.scale(c) for b in self.components))


def zero_tuple(N: int) -> PullbackTuple:
    return PullbackTuple(N, tuple(mt_zero((T,) * N) for _ in range(N + 1)))


def unit_tuple(N: int) -> PullbackTuple:
    return PullbackTuple(N, tuple(mt_one((T,) * N) for _ in range(N + 1)))


@dataclass(frozen=True)
class MemberResult:
    ok: bool
    failing_pair: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.ok


def is_member(t: PullbackTuple, antipode: bool = True) -> MemberResult:
    """Exact compatibility over every index pair; reports the first
    failing pair."""
    for i in range(t.n + 1):
        for j in range(i + 1, t.n + 1):
            lhs = pi_edge(i, j, t.components[i], antipode)
            rhs = pi_edge(j, i, t.components[j], antipode)
            if lhs != rhs:
                return MemberResult(False, (i, j))
    return MemberResult(True)


def extend_partial(
    partial: Mapping[int, MixedTensor], N: int, antipode: bool = True
) -> PullbackTuple:
    """Complete a pairwise-compatible partial family to a full member.

    Missing components are assembled in increasing index order; each
    already-fixed index pins the symbol of the new component at one
    tensor position, and the section lifts the difference between the
    required and current symbol there.  Corrections at later positions
    leave earlier ones untouched exactly because the fixed data is
    pairwise compatible; the final membership assertion would expose any
    violation of that hypothesis.
    """
    given = dict(partial)
    for i, b in given.items():
        if not (0 <= i <= N):
            raise InputError(f"index {i} outside 0..{N}")
        _check_component(b, N, f"component {i}")
    idx = sorted(given)
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            i, j = idx[a], idx[b]
            if pi_edge(i, j, given[i], antipode) != pi_edge(j, i, given[j], antipode):
                raise DomainError(f"incompatible input components at pair ({i},{j})")
    fixed = dict(given)
    for k in range(N + 1):
        if k in fixed:
            continue
        t = mt_zero((T,) * N)
        for i in sorted(fixed):
            pos = component_position(k, i)
            if i > k:
                required = pi_edge(i, k, fixed[i], antipode)
            else:
                required = psi_ij_inv(i, k, pi_edge(i, k, fixed[i], antipode), antipode)
            current = sigma_k(pos, t)
            t = t + section_at(pos, required - current)
        fixed[k] = t
    result = PullbackTuple.make([fixed[i] for i in range(N + 1)])
    check = is_member(result, antipode)
    if not check.ok:
        raise RuntimeError(
            f"assembled tuple fails membership at pair {check.failing_pair}; "
            "the gluing hypotheses do not hold for this configuration"
        )
    return result


# -- double-quotient transport ---------------------------------------------


def quotient_positions(m: int, i: int, k: int) -> tuple[int, int]:
    return component_position(m, i), component_position(m, k)


def _check_class_shape(x: MixedTensor, m: int, i: int, k: int, N: int) -> None:
    want = [T] * N
    for pos in quotient_positions(m, i, k):
        want[pos - 1] = S
    if x.shape != tuple(want):
        raise InputError(
            f"class representative must have S exactly at positions "
            f"{sorted(quotient_positions(m, i, k))}"
        )


def class_of(m: int, i: int, k: int, b: MixedTensor) -> MixedTensor:
    """Canonical double-symbol representative of b in the quotient of
    component m by the two kernels toward i and k."""
    N = len(b.shape)
    _check_component(b, N)
    p1, p2 = quotient_positions(m, i, k)
    return sigma_k(p1, sigma_k(p2, b)) if p1 > p2 else sigma_k(p2, sigma_k(p1, b))


def phi_on_lift(i: int, j: int, b: MixedTensor, antipode: bool = True) -> MixedTensor:
    """The transporting composite on an all-T representative of component
    j: route the symbol toward i through the twist and lift back through
    the section at the position of j."""
    y = pi_edge(j, i, b, antipode)
    if i > j:
        y = psi_ij_inv(j, i, y, antipode)
    return section_at(component_position(i, j), y)


def phi_quotient(
    i: int, j: int, k: int, rep: MixedTensor, antipode: bool = True
) -> MixedTensor:
    """Transport a class of component j (quotiented toward i and k) to a
    class of component i (quotiented toward j and k).

    Input and output are canonical double-symbol representatives."""
    if len({i, j, k}) != 3:
        raise InputError(f"indices must be pairwise distinct, got ({i},{j},{k})")
    N = len(rep.shape)
    for x in (i, j, k):
        if not (0 <= x <= N):
            raise InputError(f"index {x} outside 0..{N}")
    _check_class_shape(rep, j, i, k, N)
    b = rep
    for pos in sorted(quotient_positions(j, i, k)):
        b = section_at(pos, b)
    out = phi_on_lift(i, j, b, antipode)
    return class_of(i, j, k, out)


def cocycle_check(
    i: int, j: int, k: int, N: int, max_exp: int = 2, antipode: bool = True
) -> bool:
    """The triangle law: transporting j -> i directly equals transporting
    j -> k -> i, on every monomial class with exponents up to the bound."""
    if len({i, j, k}) != 3:
        raise InputError(f"indices must be pairwise distinct, got ({i},{j},{k})")
    p1, p2 = quotient_positions(j, i, k)
    spots = []
    for pos in range(1, N + 1):
        if pos in (p1, p2):
            spots.append([m for m in range(-max_exp, max_exp + 1)])
        else:
            spots.append([(a, b) for a in range(max_exp + 1) for b in range(max_exp + 1)])
    shape = tuple(S if pos in (p1, p2) else T for pos in range(1, N + 1))
    for key in product(*spots):
        rep = mt_basis(shape, tuple(key))
        direct = phi_quotient(i, j, k, rep, antipode)
        via_k = phi_quotient(i, k, j, phi_quotient(k, j, i, rep, antipode), antipode)
        if direct != via_k:
            return False
    return True


# -- freeness witnesses ------------------------------------------------------


def _index_of_position(m: int, pos: int) -> int:
    """Covering index tied to tensor position pos of component m."""
    return pos - 1 if pos <= m else pos


def witness_xI(I: Sequence[int], N: int) -> PullbackTuple:
    """The member vanishing exactly at the components in I: the compact
    block 1 - zz* on every factor outside I.  Needs a proper nonempty I,
    otherwise there is nothing nonzero to witness."""
    Iset = frozenset(I)
    if not Iset or not Iset <= set(range(N + 1)):
        raise InputError(f"need a nonempty I inside 0..{N}")
    if Iset == set(range(N + 1)):
        raise InputError("I must be a proper subset; the full tuple is zero")
    block = from_factors([compact_unit()] * N)
    comps = [mt_zero((T,) * N) if i in Iset else block for i in range(N + 1)]
    return PullbackTuple.make(comps)


def witness_TmI(m: int, I: Sequence[int], N: int) -> MixedTensor:
    """The probe tensor for component m: compact factor on positions tied
    to I, the plain generator z elsewhere."""
    Iset = frozenset(I)
    if not Iset or not Iset <= set(range(N + 1)):
        raise InputError(f"need a nonempty I inside 0..{N}")
    if m in Iset or not 0 <= m <= N:
        raise InputError(f"m must lie outside I within 0..{N}")
    factors = []
    for pos in range(1, N + 1):
        tied = _index_of_position(m, pos)
        factors.append(compact_unit() if tied in Iset else t_monomial(1, 0))
    return from_factors(factors)


def separator_sigma_mI(m: int, I: Sequence[int], x: MixedTensor) -> MixedTensor:
    """Apply the identity on positions tied to I and the symbol map on
    all others; kills anything whose symbol toward some index outside I
    vanishes."""
    Iset = frozenset(I)
    N = len(x.shape)
    if m in Iset or not 0 <= m <= N:
        raise InputError(f"m must lie outside I within 0..{N}")
    _check_component(x, N)
    out = x
    for pos in range(1, N + 1):
        tied = _index_of_position(m, pos)
        if tied not in Iset:
            out = sigma_k(pos, out)
    return out


def in_kernel_intersection(t: PullbackTuple, I: Sequence[int]) -> bool:
    """Membership in the intersection of the kernels of the component
    projections indexed by I: the components there must vanish."""
    return all(not t.components[i] for i in I)


# -- the freeness report -------------------------------------------------------


@dataclass
class ClauseResult:
    name: str
    ok: bool
    details: list = field(default_factory=list)


@dataclass
class FreenessReport:
    n: int
    join_element_count: int
    gluing: ClauseResult
    distinct_and_ordered: Optional[ClauseResult] = None
    meet_irreducible: Optional[ClauseResult] = None

    @property
    def ok(self) -> bool:
        return (
            self.gluing.ok
            and self.distinct_and_ordered is not None
            and self.distinct_and_ordered.ok
            and self.meet_irreducible is not None
            and self.meet_irreducible.ok
        )

    def lines(self) -> list[str]:
        out = [f"freeness verification at size {self.n}: {self.join_element_count} join elements"]
        for clause in (self.gluing, self.distinct_and_ordered, self.meet_irreducible):
            if clause is None:
                out.append("  [skipped] remaining clauses (gluing failed)")
                break
            mark = "pass" if clause.ok else "FAIL"
            out.append(f"  [{mark}] {clause.name}")
            for d in clause.details:
                out.append(f"      {d}")
        return out


def _proper_nonempty_subsets(N: int) -> list[frozenset]:
    full = list(range(N + 1))
    out = []
    for mask in range(1, (1 << (N + 1)) - 1):
        out.append(frozenset(i for i in full if mask >> i & 1))
    out.sort(key=lambda s: (len(s), sorted(s)))
    return out


def random_monomial_tensor(rng: random.Random, N: int, max_exp: int = 1) -> MixedTensor:
    key = tuple((rng.randint(0, max_exp), rng.randint(0, max_exp)) for _ in range(N))
    return mt_basis((T,) * N, key)


def random_member(rng: random.Random, N: int, antipode: bool = True) -> PullbackTuple:
    return extend_partial({0: random_monomial_tensor(rng, N)}, N, antipode)


def verify_freeness(
    N: int, seed: int = 0, antipode: bool = True, samples_per_ideal: int = 2
) -> FreenessReport:
    """Run the full freeness suite at size N.

    Gluing preflight first (twist involutivity, a cocycle instance, the
    two-component mirror membership); when it fails the freeness clauses
    are not meaningful and are skipped.  Then (a) kernel intersections
    over proper nonempty index sets, probed by their vanishing witnesses,
    must be pairwise distinct and ordered exactly by containment, and
    (b) for every such intersection and every outside index the lifted
    probe separates it from the sum of all strictly larger ones.
    """
    if not 1 <= N <= 3:
        raise ResourceError(f"freeness verification supports 1 <= N <= 3, got {N}", bound=3)
    rng = random.Random(seed)
    join_count = 2 ** (N + 1) - 2

    gluing = ClauseResult("gluing sanity (twist involutive, cocycle, mirror)", True)
    for m in (-1, 0, 1, 2):
        for tkey in product([(0, 0), (1, 0), (0, 1), (1, 1)], repeat=N - 1):
            x = mt_basis((T,) * (N - 1) + (S,), tkey + (m,))
            if psi(psi(x, antipode), antipode) != x:
                gluing.ok = False
                gluing.details.append(f"twist not involutive on {x!r}")
                break
        if not gluing.ok:
            break
    z1 = from_factors([t_monomial(1, 0)] * N)
    zs = from_factors([t_monomial(0, 1)] + [t_monomial(1, 0)] * (N - 1))
    if N == 1:
        mirror_good = is_member(PullbackTuple.make([z1, zs]), antipode).ok
        mirror_bad = is_member(PullbackTuple.make([z1, z1]), antipode).ok
        if not mirror_good or mirror_bad:
            gluing.ok = False
            gluing.details.append("two-component mirror membership is wrong")
    if N >= 2 and gluing.ok:
        if not cocycle_check(0, 2, 1, N, max_exp=1, antipode=antipode):
            gluing.ok = False
            gluing.details.append("cocycle instance (0,2,1) fails")
    if not gluing.ok:
        return FreenessReport(N, join_count, gluing)

    subsets = _proper_nonempty_subsets(N)
    witnesses = {I: witness_xI(sorted(I), N) for I in subsets}
    clause_a = ClauseResult("kernel intersections distinct and ordered by containment", True)
    for I in subsets:
        if not is_member(witnesses[I], antipode).ok:
            clause_a.ok = False
            clause_a.details.append(f"witness for I={sorted(I)} is not a member")
    for I in subsets:
        for J in subsets:
            expected = I <= J
            observed = in_kernel_intersection(witnesses[J], sorted(I))
            if expected != observed:
                clause_a.ok = False
                clause_a.details.append(
                    f"containment probe fails: I={sorted(I)}, J={sorted(J)}"
                )

    clause_b = ClauseResult("kernel intersections sum irreducible", True)
    members = [random_member(rng, N, antipode) for _ in range(samples_per_ideal)]
    for I in subsets:
        for m in sorted(set(range(N + 1)) - I):
            probe = witness_TmI(m, sorted(I), N)
            partial = {m: probe}
            for i in I:
                partial[i] = mt_zero((T,) * N)
            p_m = extend_partial(partial, N, antipode)
            sep = separator_sigma_mI(m, sorted(I), p_m.components[m])
            if not sep:
                clause_b.ok = False
                clause_b.details.append(
                    f"separator vanishes on the probe for I={sorted(I)}, m={m}"
                )
                continue
            for J in subsets + [frozenset(range(N + 1))]:
                if not (J > I):
                    continue
                samples = []
                if J != frozenset(range(N + 1)):
                    samples.append(witnesses[J])
                    samples.extend(witnesses[J].mul(w) for w in members)
                else:
                    samples.append(zero_tuple(N))
                for s in samples:
                    if separator_sigma_mI(m, sorted(I), s.components[m]):
                        clause_b.ok = False
                        clause_b.details.append(
                            f"separator does not vanish on a sample of "
                            f"I={sorted(I)} vs J={sorted(J)} (m={m})"
                        )
    return FreenessReport(N, join_count, gluing, clause_a, clause_b)


# -- JSON ----------------------------------------------------------------


def tuple_to_json(t: PullbackTuple) -> dict:
    return {"n": t.n, "components": [tensor_to_json(b) for b in t.components]}


def tuple_from_json(doc: dict) -> PullbackTuple:
    try:
        comps = [tensor_from_json(d) for d in doc["components"]]
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad tuple document: {exc}") from None
    return PullbackTuple.make(comps)


def partial_from_json(doc: dict) -> tuple[dict, int]:
    try:
        n = int(doc["n"])
        comps = {int(k): tensor_from_json(v) for k, v in doc["components"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad partial document: {exc}") from None
    return comps, n
