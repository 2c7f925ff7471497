"""Sheaves over finite Alexandrov spaces in diagram form.

A diagram assigns a finite object to every point of a finite poset and a
transition map to every related pair, composing functorially.  Two
object kinds hide behind one interface:

* tabulated carriers with explicit transition tables, used for generic
  sheaf checking (limits, equalizer conditions, patterns);
* ideal placeholders, where the object at a point is a lattice element
  standing for the quotient by it and every check reduces to a lattice
  identity.  These arise from covering models: a family of kernel ideals
  intersecting to zero, with the assignment sending an open set to the
  intersection over its minimal supports of the corresponding kernel
  sums.

Ideals are realized as subsets of a finite ground set, with union as sum
and intersection as intersection; any finite distributive lattice of
ideals embeds this way, so nothing is lost at the lattice level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .errors import DomainError, InputError
from .lattice import DLattice
from .poset import FinitePoset, opposite
from .projspace import OpenSetRep, TameSurjection, proj_poset

Label = Hashable


@dataclass(frozen=True)
class PDiagram:
    """Poset-indexed objects with transitions along the order.

    kind "table": objects are tuples of carrier values, transitions are
    dicts; kind "ideal": objects are frozensets (ideal placeholders) and
    transitions are implicit order relations.
    """

    base: FinitePoset
    objects: dict
    transitions: dict = field(default_factory=dict)
    kind: str = "table"

    def transition(self, p: Label, q: Label):
        if self.kind != "table":
            raise InputError("explicit transitions exist only for table diagrams")
        if p == q:
            return {v: v for v in self.objects[p]}
        return self.transitions[(p, q)]

    def is_flabby(self) -> bool:
        if self.kind == "ideal":
            return True
        for (p, q), t in self.transitions.items():
            if set(t.values()) != set(self.objects[q]):
                return False
        return True


def validate_pdiagram(F: PDiagram) -> None:
    """Identity and composition laws, checked exhaustively."""
    base = F.base
    for p in base.elements:
        if p not in F.objects:
            raise InputError(f"no object at {p!r}")
    if F.kind == "ideal":
        return
    for p in base.elements:
        for q in base.elements:
            if p != q and base.leq(p, q):
                t = F.transitions.get((p, q))
                if t is None:
                    raise InputError(f"missing transition {p!r} -> {q!r}")
                if set(t) != set(F.objects[p]):
                    raise InputError(f"transition {p!r} -> {q!r} not total")
                if any(v not in set(F.objects[q]) for v in t.values()):
                    raise InputError(f"transition {p!r} -> {q!r} leaves the target")
    for p in base.elements:
        for q in base.elements:
            for r in base.elements:
                if p != q and q != r and base.leq(p, q) and base.leq(q, r):
                    tpq = F.transitions[(p, q)]
                    tqr = F.transitions[(q, r)]
                    tpr = F.transition(p, r)
                    for v in F.objects[p]:
                        if tqr[tpq[v]] != tpr[v]:
                            raise InputError(
                                f"composition fails along {p!r} <= {q!r} <= {r!r}"
                            )


# -- ideal covering models -------------------------------------------------


@dataclass(frozen=True)
class IdealCoveringModel:
    """Kernel ideals of a covering, in the subset model: each kernel is a
    subset of a finite ground set, sums are unions, and the kernels
    intersect to the zero ideal (the empty set)."""

    ground: frozenset
    kernels: tuple

    @classmethod
    def make(cls, kernels: Sequence[Iterable], ground: Optional[Iterable] = None) -> "IdealCoveringModel":
        ks = tuple(frozenset(k) for k in kernels)
        if not ks:
            raise InputError("a covering model needs at least one kernel")
        g = frozenset(ground) if ground is not None else frozenset().union(*ks)
        for i, k in enumerate(ks):
            if not k <= g:
                raise InputError(f"kernel {i} leaves the ground set")
        common = ks[0]
        for k in ks[1:]:
            common = common & k
        if common:
            raise DomainError(
                f"kernels intersect to {sorted(map(repr, common))}, not to zero"
            )
        return cls(g, ks)

    @property
    def horizon(self) -> int:
        return len(self.kernels) - 1

    def kernel(self, i: int) -> frozenset:
        """Out-of-range indices denote the unit ideal (whole algebra)."""
        if i < len(self.kernels):
            return self.kernels[i]
        return self.ground

    def ideal_lattice(self) -> DLattice:
        """The distributive lattice the kernels generate, ideal polarity,
        kernels marked as generators."""
        from .covering import _closure_under_ops, COVERING_LATTICE_MAX

        family = _closure_under_ops(self.kernels, COVERING_LATTICE_MAX)
        return DLattice.from_subsets(family, generators=list(self.kernels), polarity="ideal")


def R_of(U: OpenSetRep, M: IdealCoveringModel) -> frozenset:
    """Intersection over the supports in U of the kernel sums indexed by
    them.  Sums grow with the support, so minimal supports suffice.  The
    empty open yields the unit ideal."""
    if U.horizon < M.horizon:
        raise InputError(
            f"open set horizon {U.horizon} below the last kernel index {M.horizon}"
        )
    if U.is_empty():
        return M.ground
    out = None
    for a in U.antichain:
        s = frozenset()
        for i in a:
            s = s | M.kernel(i)
        out = s if out is None else out & s
    return out


def covering_to_sheaf(M: IdealCoveringModel, N: int) -> PDiagram:
    """The ideal diagram over the horizon-N projective poset: the object
    at a point is the kernel sum over its support (the ideal the section
    algebra is divided by); transitions are the order relations.  Flabby
    by construction."""
    if N < M.horizon:
        raise InputError(f"horizon {N} does not accommodate {M.horizon + 1} kernels")
    base = proj_poset(N)
    objects = {}
    for lab in base.elements:
        s = frozenset()
        for i in lab:
            s = s | M.kernel(i)
        objects[lab] = s
    return PDiagram(base, objects, {}, kind="ideal")


def sheaf_to_covering(F: PDiagram) -> IdealCoveringModel:
    """Read the kernels back off the objects at the minimal basic points;
    inverse to the diagram construction."""
    if F.kind != "ideal":
        raise DomainError("kernel recovery needs an ideal diagram")
    if not F.is_flabby():
        raise DomainError("kernel recovery needs a flabby diagram")
    singles = sorted(lab for lab in F.base.elements if len(lab) == 1)
    kernels = [F.objects[lab] for lab in singles]
    ground = frozenset().union(*F.objects.values()) if F.objects else frozenset()
    return IdealCoveringModel.make(kernels, ground=ground)


# -- limits and the sheaf condition ----------------------------------------


@dataclass(frozen=True)
class LimitResult:
    """Compatible families over an open set, with their projections."""

    members: tuple
    points: tuple

    def project(self, member: Mapping, p: Label):
        return member[p]

    def __len__(self) -> int:
        return len(self.members)


def limit_over(U: Iterable[Label], F: PDiagram) -> LimitResult | frozenset:
    """Families (f_v) over the open U with f_q the image of f_v whenever
    v <= q.  Backtracks over the minimal points first; every other value
    is forced and then cross-checked.

    For ideal diagrams this is the lattice shadow: the kernel sum
    attached to U as a whole (intersection over the minimal points)."""
    base = F.base
    pts = list(U)
    ptset = set(pts)
    for p in pts:
        for q in base.elements:
            if base.leq(p, q) and q not in ptset:
                raise InputError(f"{sorted(map(str, pts))} is not an upper set")
    if F.kind == "ideal":
        out = None
        for p in pts:
            if all(q == p or not base.leq(q, p) for q in pts):
                out = F.objects[p] if out is None else out & F.objects[p]
        if out is None:
            # sections over the empty open form the zero quotient, whose
            # ideal is everything the diagram can see
            return frozenset().union(*F.objects.values()) if F.objects else frozenset()
        return out
    mins = [p for p in pts if all(q == p or not base.leq(q, p) for q in pts)]
    members = []
    for choice in product(*(F.objects[m] for m in mins)):
        fam = dict(zip(mins, choice))
        ok = True
        for q in pts:
            if q in fam:
                continue
            m = next(m for m in mins if base.leq(m, q))
            fam[q] = F.transition(m, q)[fam[m]]
        for v in pts:
            for q in pts:
                if v != q and base.leq(v, q) and F.transition(v, q)[fam[v]] != fam[q]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            members.append(fam)
    return LimitResult(tuple(members), tuple(pts))


def _close_under_intersection(base: FinitePoset, cover: list[frozenset]) -> list[frozenset]:
    family = set(cover)
    changed = True
    while changed:
        changed = False
        for a in list(family):
            for b in list(family):
                c = a & b
                if c and c not in family:
                    family.add(c)
                    changed = True
    return sorted(family, key=lambda s: (len(s), sorted(map(str, s))))


def check_sheaf_condition(F: PDiagram, U: Iterable[Label], cover: Sequence[Iterable[Label]]) -> bool:
    """Equalizer test: sections over U must biject with compatible
    families over the intersection-closure of the cover.

    For ideal diagrams this is the lattice identity: the ideal attached
    to U equals the intersection of the ideals attached to the cover."""
    Uset = frozenset(U)
    covers = [frozenset(V) for V in cover]
    for V in covers:
        if not V <= Uset:
            raise InputError("cover member leaves the open set")
    if frozenset().union(*covers) != Uset:
        raise InputError("cover does not cover the open set")
    if not Uset:
        return True  # the empty open is covered vacuously
    if F.kind == "ideal":
        lhs = limit_over(Uset, F)
        rhs = None
        for V in covers:
            rv = limit_over(V, F)
            rhs = rv if rhs is None else rhs & rv
        return lhs == rhs
    # without the composition law the canonical comparison map is not
    # even well defined, so a corrupted square fails the condition
    for p in Uset:
        for q in Uset:
            if p == q or not F.base.leq(p, q):
                continue
            for r in Uset:
                if q == r or not F.base.leq(q, r):
                    continue
                tpq, tqr, tpr = F.transition(p, q), F.transition(q, r), F.transition(p, r)
                if any(tqr[tpq[v]] != tpr[v] for v in F.objects[p]):
                    return False
    closed = _close_under_intersection(F.base, covers)
    sections = limit_over(Uset, F)
    # compatible families of sections on the closed cover
    per_open = {V: limit_over(V, F).members for V in closed}
    count = 0
    images = set()
    for combo in product(*(per_open[V] for V in closed)):
        fam = dict(zip(closed, combo))
        ok = True
        for V in closed:
            for W in closed:
                if W < V and any(fam[V][p] != fam[W][p] for p in W):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            count += 1
            images.add(tuple(sorted((str(p), str(v)) for p, v in _glue(fam).items())))
    section_keys = {
        tuple(sorted((str(p), str(v)) for p, v in s.items())) for s in sections.members
    }
    return count == len(sections) and images == section_keys


def _glue(fam: Mapping[frozenset, Mapping]) -> dict:
    out = {}
    for V, sec in fam.items():
        for p, v in sec.items():
            out[p] = v
    return out


# -- morphism data between covering models -----------------------------------


@dataclass(frozen=True)
class CoveringMorphism:
    """Data of a map between covering models: the preimage of each target
    kernel, as an ideal of the source, together with a tame reindexing
    witness.  Two data are equivalent when the preimage tables agree; the
    witness is a choice and carries no extra information."""

    source: IdealCoveringModel
    target: IdealCoveringModel
    kernel_preimages: tuple
    alpha: TameSurjection

    def preimage(self, i: int) -> frozenset:
        """Out-of-range target indices denote the zero quotient, whose
        kernel pulls back to the whole source."""
        if i < len(self.kernel_preimages):
            return self.kernel_preimages[i]
        return self.source.ground


def alpha_for_morphism(
    source: IdealCoveringModel,
    target: IdealCoveringModel,
    kernel_preimages: Sequence[Iterable],
) -> TameSurjection:
    """The canonical tame witness of a covering morphism: each pinned
    index takes the least source kernel inside the given preimage, and a
    padding block past the target horizon restores surjectivity (the
    padded entries point at the zero quotient, so any value is valid
    there)."""
    pre = [frozenset(p) for p in kernel_preimages]
    if len(pre) != target.horizon + 1:
        raise InputError("one preimage per target kernel is required")
    head = {}
    for i, p in enumerate(pre):
        choices = [j for j in range(source.horizon + 1) if source.kernel(j) <= p]
        if not choices:
            raise DomainError(
                f"not a covering morphism: no source kernel inside the preimage of target {i}"
            )
        head[i] = choices[0]
    n_t = target.horizon
    for k in range(source.horizon + 1):
        head[n_t + 1 + k] = k
    big = n_t + 1 + source.horizon
    return TameSurjection.from_mapping(head, big - source.horizon).trimmed()


def covering_morphism(
    source: IdealCoveringModel,
    target: IdealCoveringModel,
    kernel_preimages: Sequence[Iterable],
) -> CoveringMorphism:
    pre = tuple(frozenset(p) for p in kernel_preimages)
    alpha = alpha_for_morphism(source, target, pre)
    return CoveringMorphism(source, target, pre, alpha)


def morphisms_equivalent(m1: CoveringMorphism, m2: CoveringMorphism) -> bool:
    """The quotient that forgets the tame witness: equality of the
    underlying preimage tables over the same models."""
    return (
        m1.source == m2.source
        and m1.target == m2.target
        and m1.kernel_preimages == m2.kernel_preimages
    )


def reindex_kernels(alpha: TameSurjection, M: IdealCoveringModel, horizon: int) -> IdealCoveringModel:
    """Precompose the kernel family with a tame map: the i-th kernel of
    the result is the alpha(i)-th kernel of the input."""
    kernels = [M.kernel(alpha(i)) for i in range(horizon + 1)]
    return IdealCoveringModel.make(kernels, ground=M.ground)


# -- pushforward along tame maps -------------------------------------------


def pushforward(alpha: TameSurjection, F: PDiagram, target_horizon: Optional[int] = None) -> PDiagram:
    """Direct image along the pullback action: the object at a point
    with support b is the source object at support alpha(b), because the
    preimage of the basic open at i is the basic open at alpha(i)."""
    base = F.base
    N = max(max(lab) for lab in base.elements)
    if target_horizon is None:
        M = -1
        while alpha(M + 1) <= N:
            M += 1
        if M < 0:
            raise InputError("the map sends index 0 beyond the source horizon")
    else:
        M = target_horizon
        for i in range(M + 1):
            if alpha(i) > N:
                raise InputError(
                    f"horizon mismatch: index {i} maps to {alpha(i)} beyond {N}"
                )
    tbase = proj_poset(M)
    relabel = {}
    for lab in tbase.elements:
        src = tuple(sorted({alpha(i) for i in lab}))
        relabel[lab] = src
    objects = {lab: F.objects[relabel[lab]] for lab in tbase.elements}
    transitions = {}
    if F.kind == "table":
        for p in tbase.elements:
            for q in tbase.elements:
                if p != q and tbase.leq(p, q):
                    sp, sq = relabel[p], relabel[q]
                    if sp == sq:
                        transitions[(p, q)] = {v: v for v in F.objects[sp]}
                    else:
                        transitions[(p, q)] = dict(F.transitions[(sp, sq)])
    return PDiagram(tbase, objects, transitions, kind=F.kind)


# -- patterns ----------------------------------------------------------------


@dataclass(frozen=True)
class PatternView:
    """The closed-set dual of a diagram: same data indexed by the closed
    sets of the opposite space.  The principal closed set of the opposite
    space at p is the up-set of p in the base, so objects transfer
    unchanged and a restriction runs from the point whose closed set is
    larger (lower in the base) to the smaller one."""

    space: FinitePoset
    objects: dict
    restrictions: dict

    def is_global(self) -> bool:
        return all(
            set(t.values()) == set(self.objects[q]) for (_, q), t in self.restrictions.items()
        )


def pattern_view(F: PDiagram | PatternView):
    """Flip between the open-set diagram and its closed-set dual; applying
    it twice returns the original data."""
    if isinstance(F, PatternView):
        return sheaf_view(F)
    if F.kind != "table":
        raise InputError("patterns are computed for table diagrams")
    space = opposite(F.base)
    restrictions = {k: dict(t) for k, t in F.transitions.items()}
    return PatternView(space, dict(F.objects), restrictions)


def sheaf_view(P: PatternView) -> PDiagram:
    base = opposite(P.space)
    transitions = {k: dict(t) for k, t in P.restrictions.items()}
    return PDiagram(base, dict(P.objects), transitions, kind="table")
