"""Finite preorders and posets with their Alexandrov topology.

Carriers are immutable after construction.  The order relation is stored
as one reachability bitmask per element (bit j of ``up[i]`` set iff
``elements[i] <= elements[j]``); the transitive closure is computed once
at construction, Warshall style, so the invariants are checked in a
single place.

Open sets of the Alexandrov topology are exactly the upper sets, so all
topological predicates reduce to order computations.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InputError, ResourceError

Label = Hashable

DEFAULT_OPENS_BOUND = 20


def _opens_bound(explicit: int | None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("POSETSHEAF_MAX_ELEMS")
    return int(env) if env else DEFAULT_OPENS_BOUND


class FinitePreorder:
    """A finite set with a reflexive transitive relation."""

    __slots__ = ("elements", "_index", "_up")

    def __init__(self, elements: Sequence[Label], relations: Iterable[tuple[Label, Label]] = ()):
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        if len(index) != len(elements):
            raise InputError("duplicate labels in carrier")
        n = len(elements)
        up = [1 << i for i in range(n)]
        for p, q in relations:
            if p not in index or q not in index:
                raise InputError(f"relation mentions unknown label: ({p!r}, {q!r})")
            up[index[p]] |= 1 << index[q]
        # Warshall closure on bitmasks.
        for k in range(n):
            bit = 1 << k
            mk = up[k]
            for i in range(n):
                if up[i] & bit:
                    up[i] |= mk
        self.elements = elements
        self._index = index
        self._up = tuple(up)
        self._check()

    def _check(self) -> None:
        pass  # reflexivity and transitivity hold by construction

    # -- trusted fast path for generators that produce closed relations --
    @classmethod
    def _from_up_masks(cls, elements: Sequence[Label], up: Sequence[int]) -> "FinitePreorder":
        self = object.__new__(cls)
        self.elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._up = tuple(up)
        return self

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinitePreorder)
            and self.elements == other.elements
            and self._up == other._up
        )

    def __hash__(self) -> int:
        return hash((self.elements, self._up))

    def __repr__(self) -> str:
        kind = type(self).__name__
        return f"{kind}({len(self)} elements)"

    def index(self, label: Label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown label: {label!r}") from None

    def up_mask(self, label: Label) -> int:
        return self._up[self.index(label)]

    def leq(self, p: Label, q: Label) -> bool:
        return bool(self._up[self.index(p)] >> self.index(q) & 1)

    def mask_of(self, labels: Iterable[Label]) -> int:
        m = 0
        for x in labels:
            m |= 1 << self.index(x)
        return m

    def labels_of(self, mask: int) -> frozenset:
        return frozenset(e for i, e in enumerate(self.elements) if mask >> i & 1)

    def strict_down_mask(self, i: int) -> int:
        m = 0
        bit = 1 << i
        for j, uj in enumerate(self._up):
            if j != i and uj & bit:
                m |= 1 << j
        return m


class FinitePoset(FinitePreorder):
    """A finite preorder that is also antisymmetric."""

    __slots__ = ()

    def _check(self) -> None:
        for i, ui in enumerate(self._up):
            for j in range(i + 1, len(self._up)):
                if ui >> j & 1 and self._up[j] >> i & 1:
                    raise InputError(
                        f"antisymmetry fails: {self.elements[i]!r} and {self.elements[j]!r}"
                    )

    @classmethod
    def chain(cls, labels: Sequence[Label]) -> "FinitePoset":
        rel = [(labels[i], labels[i + 1]) for i in range(len(labels) - 1)]
        return cls(labels, rel)

    @classmethod
    def antichain(cls, labels: Sequence[Label]) -> "FinitePoset":
        return cls(labels, ())

    @classmethod
    def subsets(cls, base: Sequence[Label], nonempty_only: bool = False) -> "FinitePoset":
        """Boolean poset of subsets of ``base`` ordered by inclusion."""
        n = len(base)
        subs = [frozenset(b for j, b in enumerate(base) if s >> j & 1)
                for s in range(1 if nonempty_only else 0, 1 << n)]
        subs.sort(key=lambda a: (len(a), sorted(map(repr, a))))
        up = []
        for a in subs:
            m = 0
            for i, b in enumerate(subs):
                if a <= b:
                    m |= 1 << i
            up.append(m)
        return cls._from_up_masks(subs, up)


@dataclass(frozen=True)
class UpperSet:
    """A subset closed under going up, i.e. an Alexandrov open set."""

    carrier: FinitePreorder
    mask: int

    @property
    def members(self) -> frozenset:
        return self.carrier.labels_of(self.mask)

    def __contains__(self, label: Label) -> bool:
        return bool(self.mask >> self.carrier.index(label) & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UpperSet)
            and self.mask == other.mask
            and self.carrier.elements == other.carrier.elements
        )

    def __hash__(self) -> int:
        return hash((self.carrier.elements, self.mask))


def up_set(P: FinitePreorder, S: Iterable[Label]) -> UpperSet:
    """Upward closure of ``S``: all q with p <= q for some p in S."""
    mask = 0
    for x in S:
        mask |= P.up_mask(x)
    return UpperSet(P, mask)


def is_upper_mask(P: FinitePreorder, mask: int) -> bool:
    for i in range(len(P)):
        if mask >> i & 1 and P._up[i] & ~mask:
            return False
    return True


def alexandrov_opens(P: FinitePreorder, max_elements: int | None = None) -> list[UpperSet]:
    """All upper sets of ``P``, including the empty set and the whole carrier.

    Enumeration runs by DFS over minimal-element choices with memoization
    on the remaining sub-carrier; the open count equals the number of
    antichains and can reach Dedekind-number scale, hence the bound.
    """
    bound = _opens_bound(max_elements)
    if len(P) > bound:
        raise ResourceError(
            f"carrier has {len(P)} elements, above the open-enumeration bound {bound}",
            bound=bound,
        )
    if isinstance(P, FinitePoset):
        masks = _upset_masks(P)
    else:
        masks = _preorder_upset_masks(P)
    masks = sorted(masks, key=lambda m: (m.bit_count(), m))
    return [UpperSet(P, m) for m in masks]


def _upset_masks(P: FinitePoset) -> list[int]:
    n = len(P)
    up = P._up
    down = [P.strict_down_mask(i) for i in range(n)]

    @lru_cache(maxsize=None)
    def rec(avail: int) -> tuple[int, ...]:
        if avail == 0:
            return (0,)
        # lowest-index element minimal within avail
        m = avail
        pick = -1
        while m:
            i = (m & -m).bit_length() - 1
            if not down[i] & avail:
                pick = i
                break
            m &= m - 1
        up_m = up[pick] & avail
        without = rec(avail & ~(1 << pick))
        with_m = tuple(u | up_m for u in rec(avail & ~up_m))
        return without + with_m

    out = rec((1 << n) - 1)
    rec.cache_clear()
    return list(out)


def _preorder_upset_masks(P: FinitePreorder) -> list[int]:
    # Upper sets of a preorder are saturated under mutual comparability,
    # so enumerate on the poset of equivalence classes and expand.
    n = len(P)
    classes: list[int] = []
    seen = 0
    for i in range(n):
        if seen >> i & 1:
            continue
        cls = 1 << i
        for j in range(i + 1, n):
            if P._up[i] >> j & 1 and P._up[j] >> i & 1:
                cls |= 1 << j
        seen |= cls
        classes.append(cls)
    reps = [(c & -c).bit_length() - 1 for c in classes]
    k = len(classes)
    qup = []
    for a, ia in enumerate(reps):
        m = 0
        for b, ib in enumerate(reps):
            if P._up[ia] >> ib & 1:
                m |= 1 << b
        qup.append(m)
    Q = FinitePoset._from_up_masks(tuple(range(k)), qup)
    out = []
    for qm in _upset_masks(Q):
        m = 0
        for b in range(k):
            if qm >> b & 1:
                m |= classes[b]
        out.append(m)
    return out


def opposite(P: FinitePreorder) -> FinitePreorder:
    """Same carrier with the relation reversed; closed sets of ``P`` are
    exactly the open sets of ``opposite(P)``."""
    n = len(P)
    down = [0] * n
    for i, ui in enumerate(P._up):
        m = ui
        while m:
            j = (m & -m).bit_length() - 1
            down[j] |= 1 << i
            m &= m - 1
    cls = FinitePoset if isinstance(P, FinitePoset) else FinitePreorder
    return cls._from_up_masks(P.elements, down)


def is_monotone(f: Mapping[Label, Label], P: FinitePreorder, Q: FinitePreorder) -> bool:
    """True iff p <= q implies f(p) <= f(q); for Alexandrov spaces this is
    exactly the continuity test."""
    for e in P.elements:
        if e not in f:
            raise InputError(f"mapping is partial: no value for {e!r}")
    fi = [Q.index(f[e]) for e in P.elements]
    for i in range(len(P)):
        m = P._up[i]
        ti = Q._up[fi[i]]
        while m:
            j = (m & -m).bit_length() - 1
            if not ti >> fi[j] & 1:
                return False
            m &= m - 1
    return True


@dataclass(frozen=True)
class TopoReport:
    is_T0: bool
    is_T1: bool
    is_connected: bool


def topo_report(P: FinitePreorder) -> TopoReport:
    """T0 via separation by up-sets, T1 via closedness of singletons,
    connectedness via nonexistence of a proper nonempty clopen upper set.

    The empty carrier reports all three true (vacuous)."""
    n = len(P)
    t0 = True
    for i in range(n):
        for j in range(i + 1, n):
            if P._up[i] >> j & 1 and P._up[j] >> i & 1:
                t0 = False
    # {p} is closed iff its complement is an upper set iff nothing lies
    # strictly below p.
    t1 = all(P.strict_down_mask(i) == 0 for i in range(n))
    # Clopen sets are unions of comparability components.
    comp_count = 0
    seen = 0
    full = (1 << n) - 1
    neigh = [P._up[i] | P.strict_down_mask(i) | (1 << i) for i in range(n)]
    for i in range(n):
        if seen >> i & 1:
            continue
        comp_count += 1
        frontier = 1 << i
        comp = 0
        while frontier:
            j = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            if comp >> j & 1:
                continue
            comp |= 1 << j
            frontier |= neigh[j] & ~comp
        seen |= comp
    connected = comp_count <= 1 and seen == full
    return TopoReport(t0, t1, connected)


def hasse_edges(P: FinitePoset) -> list[tuple[Label, Label]]:
    """Covering pairs (p, q): p < q with no r strictly between."""
    n = len(P)
    strict = [P._up[i] & ~(1 << i) for i in range(n)]
    edges = []
    for i in range(n):
        m = strict[i]
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            if not any(strict[i] >> k & 1 and strict[k] >> j & 1 for k in range(n) if k != i and k != j):
                edges.append((P.elements[i], P.elements[j]))
    return edges


def label_str(label: Label) -> str:
    if isinstance(label, frozenset):
        return "{" + ",".join(sorted(map(label_str, label))) + "}"
    if isinstance(label, tuple):
        return "(" + ",".join(map(label_str, label)) + ")"
    return str(label)


def to_dot(P: FinitePoset, name: str = "poset") -> str:
    """Hasse diagram in DOT form: one edge per covering pair."""
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for e in P.elements:
        lines.append(f'  "{label_str(e)}";')
    for p, q in hasse_edges(P):
        lines.append(f'  "{label_str(p)}" -> "{label_str(q)}";')
    lines.append("}")
    return "\n".join(lines)


def _label_to_json(label: Label):
    if isinstance(label, frozenset):
        return sorted((_label_to_json(x) for x in label), key=repr)
    if isinstance(label, tuple):
        return [_label_to_json(x) for x in label]
    return label


def _label_from_json(obj) -> Label:
    if isinstance(obj, list):
        return tuple(_label_from_json(x) for x in obj)
    return obj


def poset_to_json(P: FinitePreorder) -> dict:
    """Schema: {"elements": [...], "leq": [[p, q], ...]} with every pair,
    reflexive ones included."""
    pairs = []
    for i, e in enumerate(P.elements):
        m = P._up[i]
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            pairs.append([_label_to_json(e), _label_to_json(P.elements[j])])
    return {"elements": [_label_to_json(e) for e in P.elements], "leq": pairs}


def poset_from_json(doc: dict, poset: bool = True) -> FinitePreorder:
    """Reflexive pairs are optional on input; the closure is recomputed."""
    if not isinstance(doc, dict) or "elements" not in doc:
        raise InputError("poset document must have an 'elements' field")
    elements = [_label_from_json(e) for e in doc["elements"]]
    rel = [(_label_from_json(p), _label_from_json(q)) for p, q in doc.get("leq", [])]
    cls = FinitePoset if poset else FinitePreorder
    return cls(elements, rel)
