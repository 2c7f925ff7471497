"""Finite set coverings, partition spaces, the classifying map into the
projective poset, and the covering lattice with its quotient isomorphism.

A covering of a ground set induces a preorder by reverse inclusion of
supports; identifying points with equal support gives the partition
space.  Each ground point is then classified by the characteristic point
of its support inside the projective poset, and that map factors through
the partition space as an order embedding of the opposite order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

from .errors import InputError, ResourceError
from .lattice import DLattice
from .poset import FinitePoset, FinitePreorder
from .projspace import ProjPoint, proj_poset

Label = Hashable

GROUND_MAX = 4096
COVERING_LATTICE_MAX = 100000


@dataclass(frozen=True)
class CoveringSpec:
    """A finite ground set with an ordered family of parts covering it.

    Empty parts are permitted; they occur in no support and create no
    class."""

    ground: tuple
    parts: tuple

    @classmethod
    def make(cls, ground: Sequence[Label], parts: Sequence[Iterable[Label]]) -> "CoveringSpec":
        ground = tuple(ground)
        if len(set(ground)) != len(ground):
            raise InputError("duplicate labels in ground set")
        if len(ground) > GROUND_MAX:
            raise ResourceError(f"ground set larger than {GROUND_MAX}", bound=GROUND_MAX)
        pf = tuple(frozenset(p) for p in parts)
        gset = set(ground)
        for i, p in enumerate(pf):
            bad = p - gset
            if bad:
                raise InputError(f"part {i} mentions labels outside the ground set: {sorted(map(repr, bad))}")
        covered = set().union(*pf) if pf else set()
        if covered != gset:
            missing = sorted(map(repr, gset - covered))
            raise InputError(f"parts do not cover the ground set; missing {missing}")
        return cls(ground, pf)

    @property
    def n_parts(self) -> int:
        return len(self.parts)


def support(x: Label, C: CoveringSpec) -> frozenset:
    """Indices of the parts containing x; nonempty by the covering
    invariant."""
    if x not in set(C.ground):
        raise InputError(f"unknown ground element: {x!r}")
    return frozenset(i for i, p in enumerate(C.parts) if x in p)


def ground_preorder(C: CoveringSpec) -> FinitePreorder:
    """The ground set preordered by reverse inclusion of supports."""
    supp = {x: support(x, C) for x in C.ground}
    rel = [(x, y) for x in C.ground for y in C.ground if supp[x] >= supp[y]]
    return FinitePreorder(C.ground, rel)


@dataclass(frozen=True)
class PartitionSpace:
    """Classes of equal support, ordered by reverse support inclusion.

    Class labels are the sorted tuples of part indices in the support."""

    poset: FinitePoset
    projection: dict
    class_support: dict


def partition_space(C: CoveringSpec) -> PartitionSpace:
    supp = {x: support(x, C) for x in C.ground}
    classes = sorted({tuple(sorted(s)) for s in supp.values()})
    rel = [
        (a, b)
        for a in classes
        for b in classes
        if set(a) >= set(b)
    ]
    poset = FinitePoset(classes, rel)
    projection = {x: tuple(sorted(supp[x])) for x in C.ground}
    class_support = {c: frozenset(c) for c in classes}
    return PartitionSpace(poset, projection, class_support)


@dataclass(frozen=True)
class XiReport:
    monotone_from_opposite: bool
    factors_through_partition: bool
    embedding: bool

    @property
    def ok(self) -> bool:
        return self.monotone_from_opposite and self.factors_through_partition and self.embedding


def xi(C: CoveringSpec) -> tuple[dict, XiReport]:
    """The classifying map: each ground point goes to the projective
    point supported on its part indices.

    The report confirms that the map is monotone from the opposite of
    the support preorder, factors through the partition space, and that
    the induced map on classes is an order embedding into the horizon
    N = number of parts - 1 projective poset."""
    supp = {x: support(x, C) for x in C.ground}
    mapping = {x: ProjPoint(s) for x, s in supp.items()}
    part = partition_space(C)
    # monotone from the opposite: x <= y there iff supp(x) <= supp(y)
    monotone = all(
        (not supp[x] <= supp[y]) or mapping[x].support <= mapping[y].support
        for x in C.ground
        for y in C.ground
    )
    factors = all(
        mapping[x] == mapping[y]
        for x in C.ground
        for y in C.ground
        if part.projection[x] == part.projection[y]
    )
    # induced class map into proj_poset(N), embedding of the opposite order
    N = C.n_parts - 1
    P = proj_poset(N) if N >= 0 else FinitePoset((), ())
    classes = part.poset.elements
    embedding = len(set(classes)) == len(classes)
    for a in classes:
        if a not in P._index:
            embedding = False
    if embedding:
        for a in classes:
            for b in classes:
                # a below b in the opposite partition order iff the
                # images compare the same way in the projective poset
                if part.poset.leq(b, a) != P.leq(a, b):
                    embedding = False
    return mapping, XiReport(monotone, factors, embedding)


def _closure_under_ops(seed: Iterable[frozenset], bound: int) -> list[frozenset]:
    family = set(seed)
    frontier = list(family)
    while frontier:
        new = []
        for a in frontier:
            for b in list(family):
                for c in (a | b, a & b):
                    if c not in family:
                        family.add(c)
                        new.append(c)
                        if len(family) > bound:
                            raise ResourceError(
                                f"covering lattice exceeds {bound} elements", bound=bound
                            )
        frontier = new
    return sorted(family, key=lambda s: (len(s), sorted(map(repr, s))))


def covering_lattice(C: CoveringSpec) -> DLattice:
    """Sublattice of the power set generated by the parts under union and
    intersection (set polarity)."""
    family = _closure_under_ops(C.parts, COVERING_LATTICE_MAX)
    return DLattice.from_subsets(family, generators=list(C.parts), polarity="set")


def verify_lattice_iso(C: CoveringSpec) -> bool:
    """Push the covering lattice through the partition projection and
    check that taking images is a lattice isomorphism with preimage as
    inverse, by explicit closure on both sides."""
    part = partition_space(C)
    proj = part.projection
    lam_c = _closure_under_ops(C.parts, COVERING_LATTICE_MAX)
    pi_parts = [frozenset(proj[x] for x in p) for p in C.parts]
    lam_q = _closure_under_ops(pi_parts, COVERING_LATTICE_MAX)
    if len(lam_c) != len(lam_q):
        return False
    lam_q_set = set(lam_q)

    def push(s: frozenset) -> frozenset:
        return frozenset(proj[x] for x in s)

    def pull(t: frozenset) -> frozenset:
        return frozenset(x for x in C.ground if proj[x] in t)

    for a in lam_c:
        if push(a) not in lam_q_set:
            return False
        if pull(push(a)) != a:
            return False
    for a in lam_c:
        for b in lam_c:
            if push(a | b) != push(a) | push(b):
                return False
            if push(a & b) != push(a) & push(b):
                return False
    return True


def covering_to_json(C: CoveringSpec) -> dict:
    return {"ground": list(C.ground), "parts": [sorted(map(str, p)) for p in C.parts]}


def covering_from_json(doc: dict) -> CoveringSpec:
    try:
        ground = doc["ground"]
        parts = doc["parts"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"covering document missing field: {exc}") from None
    return CoveringSpec.make(ground, parts)
