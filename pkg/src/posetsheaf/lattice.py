"""Finite lattices, the Birkhoff transform, and the freeness criterion.

A ``DLattice`` stores its join and meet as dense tables for small
carriers and as cached on-demand functions above that, so Dedekind-scale
free lattices stay constructible.  Lattice laws (associativity,
commutativity, idempotence, absorption) are verified at construction,
exhaustively up to 12 elements and on seeded samples above; failure of
distributivity does not reject the value, it only downgrades the
``distributive`` flag.

Two polarities coexist.  With the set convention join is union and meet
is intersection; with the ideal convention the roles flip (join is
intersection of ideals, meet is their sum), which is the convention used
whenever kernels of quotient maps generate the lattice.  All criteria
below read the operation tables, so they are polarity-correct by
construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Optional, Sequence

from .errors import DomainError, InputError, ResourceError
from .poset import FinitePoset, alexandrov_opens

Label = Hashable

DENSE_TABLE_MAX = 512
VALIDATE_EXHAUSTIVE_MAX = 12
VALIDATE_SAMPLES = 4000

# Dedekind numbers M(n): antichain counts of the Boolean poset B_n.
DEDEKIND = {0: 2, 1: 3, 2: 6, 3: 20, 4: 168, 5: 7581, 6: 7828354}


class DLattice:
    """Finite lattice given by join/meet operation tables.

    ``generators`` optionally marks a distinguished generating family
    (duplicates allowed); ``polarity`` records which set-theoretic
    reading the tables came from ("set" or "ideal").
    """

    def __init__(
        self,
        elements: Sequence[Label],
        join_fn: Callable[[int, int], int],
        meet_fn: Callable[[int, int], int],
        generators: Optional[Sequence[Label]] = None,
        polarity: str = "set",
        _validate: bool = True,
    ):
        self.elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise InputError("duplicate labels in lattice carrier")
        if polarity not in ("set", "ideal"):
            raise InputError(f"unknown polarity {polarity!r}")
        self.polarity = polarity
        self.generators = tuple(generators) if generators is not None else None
        if self.generators is not None:
            for g in self.generators:
                if g not in self._index:
                    raise InputError(f"marked generator {g!r} not in carrier")
        n = len(self.elements)
        if n <= DENSE_TABLE_MAX:
            self._join = [[join_fn(i, j) for j in range(n)] for i in range(n)]
            self._meet = [[meet_fn(i, j) for j in range(n)] for i in range(n)]
            self._join_fn = self._meet_fn = None
        else:
            self._join = self._meet = None
            self._join_fn, self._meet_fn = join_fn, meet_fn
            self._join_cache: dict[tuple[int, int], int] = {}
            self._meet_cache: dict[tuple[int, int], int] = {}
        self.distributive = True
        if _validate:
            self._validate_laws()

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_tables(cls, elements, join_table, meet_table, generators=None, polarity="set"):
        return cls(
            elements,
            lambda i, j: join_table[i][j],
            lambda i, j: meet_table[i][j],
            generators=generators,
            polarity=polarity,
        )

    @classmethod
    def from_subsets(
        cls,
        sets: Iterable[frozenset],
        generators: Optional[Sequence[frozenset]] = None,
        polarity: str = "set",
    ) -> "DLattice":
        """Lattice on a family of sets closed under union and intersection.

        Set polarity: join = union, meet = intersection.  Ideal polarity
        (the sets stand for ideals, union for their sum): join =
        intersection, meet = union.
        """
        family = sorted(set(sets), key=_set_key)
        index = {s: i for i, s in enumerate(family)}

        def union(i, j):
            u = family[i] | family[j]
            if u not in index:
                raise InputError("family is not closed under union")
            return index[u]

        def inter(i, j):
            u = family[i] & family[j]
            if u not in index:
                raise InputError("family is not closed under intersection")
            return index[u]

        if polarity == "set":
            join, meet = union, inter
        else:
            join, meet = inter, union
        return cls(family, join, meet, generators=generators, polarity=polarity)

    # -- core operations -------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"DLattice({len(self)} elements, polarity={self.polarity!r})"

    def index(self, label: Label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown lattice element: {label!r}") from None

    def join_idx(self, i: int, j: int) -> int:
        if self._join is not None:
            return self._join[i][j]
        key = (i, j) if i <= j else (j, i)
        v = self._join_cache.get(key)
        if v is None:
            v = self._join_fn(i, j)
            self._join_cache[key] = v
        return v

    def meet_idx(self, i: int, j: int) -> int:
        if self._meet is not None:
            return self._meet[i][j]
        key = (i, j) if i <= j else (j, i)
        v = self._meet_cache.get(key)
        if v is None:
            v = self._meet_fn(i, j)
            self._meet_cache[key] = v
        return v

    def join(self, a: Label, b: Label) -> Label:
        return self.elements[self.join_idx(self.index(a), self.index(b))]

    def meet(self, a: Label, b: Label) -> Label:
        return self.elements[self.meet_idx(self.index(a), self.index(b))]

    def leq_idx(self, i: int, j: int) -> bool:
        return self.join_idx(i, j) == j

    def leq(self, a: Label, b: Label) -> bool:
        return self.leq_idx(self.index(a), self.index(b))

    def top_idx(self) -> int:
        t = 0
        for i in range(1, len(self)):
            t = self.join_idx(t, i)
        return t

    def bottom_idx(self) -> int:
        b = 0
        for i in range(1, len(self)):
            b = self.meet_idx(b, i)
        return b

    def order_poset(self) -> FinitePoset:
        n = len(self)
        rel = [
            (self.elements[i], self.elements[j])
            for i in range(n)
            for j in range(n)
            if self.leq_idx(i, j)
        ]
        return FinitePoset(self.elements, rel)

    # -- validation ------------------------------------------------------

    def _validate_laws(self) -> None:
        n = len(self)
        if n == 0:
            raise InputError("empty lattice")
        if n <= VALIDATE_EXHAUSTIVE_MAX:
            triples = [(i, j, k) for i in range(n) for j in range(n) for k in range(n)]
        else:
            rng = random.Random(0xD157)
            triples = [
                (rng.randrange(n), rng.randrange(n), rng.randrange(n))
                for _ in range(VALIDATE_SAMPLES)
            ]
        jn, mt = self.join_idx, self.meet_idx
        for i, j, k in triples:
            if jn(i, j) != jn(j, i) or mt(i, j) != mt(j, i):
                raise InputError(f"commutativity fails at ({i},{j})")
            if jn(i, i) != i or mt(i, i) != i:
                raise InputError(f"idempotence fails at {i}")
            if jn(i, jn(j, k)) != jn(jn(i, j), k) or mt(i, mt(j, k)) != mt(mt(i, j), k):
                raise InputError(f"associativity fails at ({i},{j},{k})")
            if jn(i, mt(i, j)) != i or mt(i, jn(i, j)) != i:
                raise InputError(f"absorption fails at ({i},{j})")
            if mt(i, jn(j, k)) != jn(mt(i, j), mt(i, k)):
                self.distributive = False
                self._distributivity_witness = (
                    self.elements[i],
                    self.elements[j],
                    self.elements[k],
                )


def _set_key(s: frozenset):
    return (len(s), sorted(map(repr, s)))


# -- operations ----------------------------------------------------------


def meet_irreducibles(L: DLattice) -> list[Label]:
    """Elements c with (c = a meet b implies c in {a, b}) and some element
    not below c.  The second clause rules out the global top."""
    n = len(L)
    out = []
    for c in range(n):
        if all(L.leq_idx(x, c) for x in range(n)):
            continue
        ok = True
        for a in range(n):
            if not ok:
                break
            for b in range(a + 1, n):
                if a != c and b != c and L.meet_idx(a, b) == c:
                    ok = False
                    break
        if ok:
            out.append(L.elements[c])
    return out


@dataclass(frozen=True)
class BirkhoffPair:
    """A lattice together with its meet-irreducible poset and the
    isomorphism onto the upper sets of that poset (element a maps to the
    set of meet irreducibles above a; under that convention joins land on
    intersections and meets on unions)."""

    lattice: DLattice
    irreducible_poset: FinitePoset
    iso: dict


def birkhoff(L: DLattice) -> BirkhoffPair:
    if not L.distributive:
        a, b, c = L._distributivity_witness
        raise DomainError(
            f"lattice is not distributive: ({a!r}, {b!r}, {c!r}) violates the law"
        )
    irr = meet_irreducibles(L)
    rel = [(x, y) for x in irr for y in irr if L.leq(x, y)]
    P = FinitePoset(irr, rel)
    iso = {}
    for a in L.elements:
        ia = L.index(a)
        iso[a] = frozenset(x for x in irr if L.leq_idx(ia, L.index(x)))
    if len(set(iso.values())) != len(L):
        raise DomainError("transform is not injective; lattice not distributive?")
    return BirkhoffPair(L, P, iso)


def birkhoff_reconstruct(pair: BirkhoffPair) -> DLattice:
    """Rebuild a lattice from the upper sets of the irreducible poset,
    with intersection as join to match the transform's convention."""
    return upper_set_lattice(pair.irreducible_poset, polarity="ideal")


def upper_set_lattice(P: FinitePoset, polarity: str = "set", max_elements: int | None = None) -> DLattice:
    """Lattice of all upper sets of ``P``; always distributive."""
    opens = alexandrov_opens(P, max_elements=max_elements)
    return DLattice.from_subsets([u.members for u in opens], polarity=polarity)


def generate_sublattice(ambient: DLattice, gens: Sequence[Label]) -> DLattice:
    """Smallest subset of ``ambient`` containing ``gens`` and closed under
    its join and meet, with the induced tables."""
    idx = [ambient.index(g) for g in gens]
    closed = set(idx)
    frontier = list(closed)
    while frontier:
        new = []
        for i in frontier:
            for j in list(closed):
                for v in (ambient.join_idx(i, j), ambient.meet_idx(i, j)):
                    if v not in closed:
                        closed.add(v)
                        new.append(v)
        frontier = new
    order = sorted(closed)
    sub_index = {v: k for k, v in enumerate(order)}
    elements = [ambient.elements[v] for v in order]
    return DLattice(
        elements,
        lambda i, j: sub_index[ambient.join_idx(order[i], order[j])],
        lambda i, j: sub_index[ambient.meet_idx(order[i], order[j])],
        generators=list(gens),
        polarity=ambient.polarity,
    )


def _nonempty_subsets_poset(n: int) -> FinitePoset:
    return FinitePoset.subsets(tuple(range(n)), nonempty_only=True)


def free_distributive_lattice(n: int, allow_large: bool = False) -> DLattice:
    """The free distributive lattice without bounds on ``n`` generators.

    Modeled as the nonempty upper sets of the poset of nonempty subsets
    of {0..n-1} under union/intersection; generator i is the principal
    upper set of {i}.  Size is the Dedekind count M(n) minus 2.
    """
    if n < 1 or n > 6:
        raise ResourceError(f"generator count {n} outside 1..6", bound=6)
    if n == 6 and not allow_large:
        raise ResourceError(
            "n=6 reaches 7828352 elements; pass allow_large=True to proceed", bound=5
        )
    P = _nonempty_subsets_poset(n)
    upsets = [u.members for u in alexandrov_opens(P, max_elements=1 << n)]
    family = [u for u in upsets if u]
    gens = [frozenset(s for s in P.elements if frozenset([i]) <= s) for i in range(n)]
    return DLattice.from_subsets(family, generators=gens, polarity="set")


@dataclass(frozen=True)
class FreenessVerdict:
    free: bool
    witness: Optional[dict] = None


def is_free_on(L: DLattice, gens: Sequence[Label]) -> FreenessVerdict:
    """Freeness test for the lattice generated by ``gens``.

    The joins c_I over nonempty proper index sets I must be pairwise
    distinct, ordered exactly by index containment, and each meet
    irreducible in L.  The witness names the first violated clause; the
    generation requirement is only enforced once every clause holds,
    since a failed clause already decides the question.
    """
    k = len(gens)
    gidx = [L.index(g) for g in gens]
    subsets = []
    for m in range(1, (1 << k) - 1):
        I = frozenset(i for i in range(k) if m >> i & 1)
        ci = -1
        for i in I:
            ci = gidx[i] if ci < 0 else L.join_idx(ci, gidx[i])
        subsets.append((I, ci))
    for a in range(len(subsets)):
        I, ci = subsets[a]
        for b in range(a + 1, len(subsets)):
            J, cj = subsets[b]
            if ci == cj:
                return FreenessVerdict(False, {"clause": "distinct", "I": I, "J": J})
    for I, ci in subsets:
        for J, cj in subsets:
            if L.leq_idx(ci, cj) != (I <= J):
                return FreenessVerdict(False, {"clause": "containment-order", "I": I, "J": J})
    irr = set(L.index(x) for x in meet_irreducibles(L))
    for I, ci in subsets:
        if ci not in irr:
            return FreenessVerdict(False, {"clause": "meet-irreducible", "I": I})
    if len(generate_sublattice(L, gens)) != len(L):
        raise DomainError("the marked elements do not generate the lattice")
    return FreenessVerdict(True)


# -- isomorphism testing -------------------------------------------------


def _lattice_invariants(L: DLattice) -> list[tuple]:
    n = len(L)
    downs = [sum(1 for j in range(n) if L.leq_idx(j, i)) for i in range(n)]
    ups = [sum(1 for j in range(n) if L.leq_idx(i, j)) for i in range(n)]
    irr = set(L.index(x) for x in meet_irreducibles(L))
    inv = []
    for i in range(n):
        above_profile = sorted(
            downs[j]
            for j in range(n)
            if i != j and L.leq_idx(i, j)
        )
        inv.append((downs[i], ups[i], i in irr, tuple(above_profile)))
    return inv


def lattice_isomorphic(L1: DLattice, L2: DLattice) -> bool:
    """Backtracking search for a bijection matching both operation tables,
    pruned by order invariants."""
    n = len(L1)
    if n != len(L2):
        return False
    inv1, inv2 = _lattice_invariants(L1), _lattice_invariants(L2)
    if sorted(inv1) != sorted(inv2):
        return False
    candidates = [[j for j in range(n) if inv2[j] == inv1[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    image = [-1] * n
    used = [False] * n
    assigned: list[int] = []

    def consistent() -> bool:
        # every fully-assigned triple (a, b, a op b) must match in L2
        for a in assigned:
            for b in assigned:
                jj = L1.join_idx(a, b)
                if image[jj] != -1 and image[jj] != L2.join_idx(image[a], image[b]):
                    return False
                mm = L1.meet_idx(a, b)
                if image[mm] != -1 and image[mm] != L2.meet_idx(image[a], image[b]):
                    return False
        return True

    def extend(d: int) -> bool:
        if d == n:
            return True
        i = order[d]
        for j in candidates[i]:
            if used[j]:
                continue
            image[i] = j
            used[j] = True
            assigned.append(i)
            if consistent() and extend(d + 1):
                return True
            assigned.pop()
            image[i] = -1
            used[j] = False
        return False

    return extend(0)


def poset_isomorphic(P1: FinitePoset, P2: FinitePoset) -> bool:
    n = len(P1)
    if n != len(P2):
        return False

    def inv(P):
        return [
            (P._up[i].bit_count(), P.strict_down_mask(i).bit_count())
            for i in range(n)
        ]

    inv1, inv2 = inv(P1), inv(P2)
    if sorted(inv1) != sorted(inv2):
        return False
    candidates = [[j for j in range(n) if inv2[j] == inv1[i]] for i in range(n)]
    image = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for p in range(i):
                if (P1._up[i] >> p & 1) != (P2._up[j] >> image[p] & 1):
                    ok = False
                    break
                if (P1._up[p] >> i & 1) != (P2._up[image[p]] >> j & 1):
                    ok = False
                    break
            if ok:
                image[i] = j
                used[j] = True
                if extend(i + 1):
                    return True
                image[i] = -1
                used[j] = False
        return False

    return extend(0)


# -- JSON ----------------------------------------------------------------


def lattice_to_json(L: DLattice) -> dict:
    from .poset import _label_to_json

    n = len(L)
    return {
        "elements": [_label_to_json(e) for e in L.elements],
        "join": [[L.join_idx(i, j) for j in range(n)] for i in range(n)],
        "meet": [[L.meet_idx(i, j) for j in range(n)] for i in range(n)],
        "generators": [
            _label_to_json(g) for g in (L.generators or ())
        ],
        "polarity": L.polarity,
    }


def lattice_from_json(doc: dict) -> DLattice:
    from .poset import _label_from_json

    try:
        elements = [_label_from_json(e) for e in doc["elements"]]
        join = doc["join"]
        meet = doc["meet"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"lattice document missing field: {exc}") from None
    gens = [_label_from_json(g) for g in doc.get("generators", [])] or None
    return DLattice.from_tables(
        elements, join, meet, generators=gens, polarity=doc.get("polarity", "set")
    )
