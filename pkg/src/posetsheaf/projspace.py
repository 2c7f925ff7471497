"""The projective spaces over the two-element field, seen as posets of
nonempty finite index sets, together with the machinery acting on them:
basic opens, horizon embeddings, the tame-surjection monoid and its
pullback action, and the reconstruction of continuous maps from lattice
morphisms of open sets.

A point is identified with its set of nonzero coordinates, so the order
is inclusion of supports.  The infinite-horizon space is never
materialized; every statement about it is evaluated at a finite horizon
large enough to contain all supports in play.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import DomainError, InputError, ResourceError
from .poset import FinitePoset

PROJ_HORIZON_MAX = 20


@dataclass(frozen=True)
class ProjPoint:
    """A point with finitely many nonzero coordinates, stored as the set
    of indices where the coordinate is 1.  Always nonempty."""

    support: frozenset

    def __post_init__(self):
        s = frozenset(self.support)
        object.__setattr__(self, "support", s)
        if not s:
            raise InputError("projective point needs a nonempty support")
        if any((not isinstance(i, int)) or i < 0 for i in s):
            raise InputError("support entries must be naturals")

    def __le__(self, other: "ProjPoint") -> bool:
        return self.support <= other.support

    def __repr__(self) -> str:
        return f"ProjPoint({sorted(self.support)})"


def point(*indices: int) -> ProjPoint:
    return ProjPoint(frozenset(indices))


def proj_poset(N: int) -> FinitePoset:
    """Poset of nonempty subsets of {0..N} under inclusion; carrier size
    is 2**(N+1) - 1.  Labels are sorted tuples of indices."""
    if N < 0 or N > PROJ_HORIZON_MAX:
        raise ResourceError(f"horizon {N} outside 0..{PROJ_HORIZON_MAX}", bound=PROJ_HORIZON_MAX)
    subs = []
    for m in range(1, 1 << (N + 1)):
        subs.append(tuple(i for i in range(N + 1) if m >> i & 1))
    subs.sort(key=lambda t: (len(t), t))
    pos = {t: i for i, t in enumerate(subs)}
    up = []
    for a in subs:
        sa = set(a)
        mask = 0
        for i, b in enumerate(subs):
            if sa.issubset(b):
                mask |= 1 << i
        up.append(mask)
    # inclusion is reflexive, transitive and antisymmetric by construction
    return FinitePoset._from_up_masks(subs, up)


def proj_point_label(p: ProjPoint) -> tuple:
    return tuple(sorted(p.support))


def _min_antichain(sets: Iterable[frozenset]) -> frozenset:
    pool = sorted(set(sets), key=len)
    keep: list[frozenset] = []
    for s in pool:
        if not any(k <= s for k in keep):
            keep.append(s)
    return frozenset(keep)


@dataclass(frozen=True)
class OpenSetRep:
    """An open set of the horizon-N space, stored as the antichain of
    minimal supports generating it.  The empty antichain is the empty
    open; the whole space is generated by the singletons."""

    horizon: int
    antichain: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        sets = frozenset(frozenset(a) for a in self.antichain)
        for a in sets:
            if not a:
                raise InputError("empty index set cannot generate an open")
            if any(i < 0 or i > self.horizon for i in a):
                raise InputError("index set exceeds the horizon")
        object.__setattr__(self, "antichain", _min_antichain(sets))

    def contains(self, p: ProjPoint) -> bool:
        return any(a <= p.support for a in self.antichain)

    def __contains__(self, p: ProjPoint) -> bool:
        return self.contains(p)

    def is_empty(self) -> bool:
        return not self.antichain

    def union(self, other: "OpenSetRep") -> "OpenSetRep":
        h = max(self.horizon, other.horizon)
        return OpenSetRep(h, self.antichain | other.antichain)

    def intersection(self, other: "OpenSetRep") -> "OpenSetRep":
        h = max(self.horizon, other.horizon)
        combos = {a | b for a in self.antichain for b in other.antichain}
        return OpenSetRep(h, combos)

    def points(self) -> list[ProjPoint]:
        """All members, by brute enumeration over the horizon."""
        out = []
        n = self.horizon + 1
        for m in range(1, 1 << n):
            s = frozenset(i for i in range(n) if m >> i & 1)
            if any(a <= s for a in self.antichain):
                out.append(ProjPoint(s))
        return out

    def __repr__(self) -> str:
        chains = sorted(sorted(a) for a in self.antichain)
        return f"OpenSetRep(horizon={self.horizon}, antichain={chains})"


def whole_space(N: int) -> OpenSetRep:
    return OpenSetRep(N, frozenset(frozenset([i]) for i in range(N + 1)))


def empty_open(N: int) -> OpenSetRep:
    return OpenSetRep(N, frozenset())


def basic_open(a: Iterable[int], N: int) -> OpenSetRep:
    """The up-set of the point with support ``a``; intersecting basic
    opens unions their index sets."""
    a = frozenset(a)
    if not a:
        raise InputError("basic open needs a nonempty index set")
    return OpenSetRep(N, frozenset([a]))


def phi_embed(p: ProjPoint, N: int) -> ProjPoint:
    """View a horizon-N point at horizon N+1 (pad with a zero); the
    support is unchanged."""
    if any(i > N for i in p.support):
        raise InputError(f"support {sorted(p.support)} exceeds horizon {N}")
    return ProjPoint(p.support)


def phi_preimage_basic_open(i: int, N: int) -> OpenSetRep:
    """Preimage at horizon N of the basic open with index i at horizon
    N+1: the same basic open if i <= N, empty if i = N+1."""
    if i < 0 or i > N + 1:
        raise InputError(f"index {i} outside 0..{N + 1}")
    if i == N + 1:
        return empty_open(N)
    return basic_open([i], N)


# -- tame surjections ------------------------------------------------------


@dataclass(frozen=True)
class TameSurjection:
    """A surjection of the naturals with finite fibers, almost all of them
    singletons: explicit on a finite head, a backward shift beyond it.

    head maps {0..H} where H = max key (head may be empty); past the head
    the rule is i -> i - tail_offset.
    """

    head: tuple = ()
    tail_offset: int = 0

    @classmethod
    def from_mapping(cls, head: Mapping[int, int], tail_offset: int = 0) -> "TameSurjection":
        items = tuple(sorted(head.items()))
        return cls(items, tail_offset)

    def __post_init__(self):
        head = dict(self.head)
        H = max(head, default=-1)
        if set(head) != set(range(H + 1)):
            raise InputError("head must cover a contiguous range {0..H}")
        if any(v < 0 for v in head.values()):
            raise InputError("head values must be naturals")
        off = self.tail_offset
        if off < 0 or H + 1 - off < 0:
            raise InputError("tail offset must satisfy 0 <= offset <= H+1")
        # tail covers [H+1-off, inf); the head must supply the rest
        missing = set(range(H + 1 - off)) - set(head.values())
        if missing:
            raise InputError(f"not surjective: {sorted(missing)} never attained")
        object.__setattr__(self, "head", tuple(sorted(head.items())))

    @property
    def head_dict(self) -> dict:
        return dict(self.head)

    @property
    def head_len(self) -> int:
        return len(self.head)

    def __call__(self, i: int) -> int:
        if i < 0:
            raise InputError("tame surjections act on naturals")
        if i < len(self.head):
            return self.head[i][1]
        return i - self.tail_offset

    def preimage(self, a: Iterable[int]) -> frozenset:
        a = set(a)
        out = {i for i, v in self.head if v in a}
        H = len(self.head) - 1
        for k in a:
            i = k + self.tail_offset
            if i > H:
                out.add(i)
        return frozenset(out)

    def trimmed(self) -> "TameSurjection":
        """Canonical form: drop trailing head entries that already obey
        the tail rule."""
        head = list(self.head)
        while head and head[-1][1] == head[-1][0] - self.tail_offset:
            head.pop()
        return TameSurjection(tuple(head), self.tail_offset)

    def same_map(self, other: "TameSurjection") -> bool:
        return self.trimmed() == other.trimmed()

    def __repr__(self) -> str:
        return f"TameSurjection(head={dict(self.head)}, tail_offset={self.tail_offset})"


def identity_tame() -> TameSurjection:
    return TameSurjection((), 0)


def shift_down() -> TameSurjection:
    """The generator collapsing 0 and 1: 0 -> 0 and i -> i-1 above."""
    return TameSurjection(((0, 0),), 1)


def transposition(i: int, j: int) -> TameSurjection:
    if i == j:
        return identity_tame()
    H = max(i, j)
    head = {k: k for k in range(H + 1)}
    head[i], head[j] = j, i
    return TameSurjection.from_mapping(head, 0)


def compose_tame(alpha: TameSurjection, beta: TameSurjection) -> TameSurjection:
    """Pointwise composition alpha after beta; the pullback action
    reverses the order: acting by the composite equals acting by alpha
    first and then by beta."""
    H = max(len(beta.head) - 1, len(alpha.head) - 1 + beta.tail_offset)
    head = {i: alpha(beta(i)) for i in range(H + 1)}
    return TameSurjection.from_mapping(head, alpha.tail_offset + beta.tail_offset).trimmed()


def act_tame(alpha: TameSurjection, p: ProjPoint) -> ProjPoint:
    """Pullback action on points: the new support is the preimage of the
    old one.  Tameness keeps it finite, surjectivity keeps it nonempty."""
    return ProjPoint(alpha.preimage(p.support))


def point_to_json(p: ProjPoint) -> dict:
    return {"support": sorted(p.support)}


def point_from_json(doc: dict) -> ProjPoint:
    try:
        return ProjPoint(frozenset(int(i) for i in doc["support"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad point document: {exc}") from None


def open_to_json(U: OpenSetRep) -> dict:
    return {
        "horizon": U.horizon,
        "antichain": sorted(sorted(a) for a in U.antichain),
    }


def open_from_json(doc: dict) -> OpenSetRep:
    try:
        horizon = int(doc["horizon"])
        chains = [frozenset(int(i) for i in a) for a in doc.get("antichain", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad open-set document: {exc}") from None
    return OpenSetRep(horizon, frozenset(chains))


def tame_to_json(alpha: TameSurjection) -> dict:
    return {
        "head": {str(i): v for i, v in alpha.head},
        "tail_offset": alpha.tail_offset,
    }


def tame_from_json(doc: dict) -> TameSurjection:
    try:
        head = {int(k): int(v) for k, v in doc.get("head", {}).items()}
        off = int(doc.get("tail_offset", 0))
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad tame surjection document: {exc}") from None
    return TameSurjection.from_mapping(head, off)


# -- maps from lattice morphisms ------------------------------------------


def function_from_lattice_morphism(
    X: Mapping[int, OpenSetRep], N: int, M: int
) -> dict[frozenset, ProjPoint]:
    """Rebuild the unique continuous map f with X(U) = f^{-1}(U) from the
    images of the basic opens.

    ``X[i]`` is the horizon-N open assigned to the i-th basic open of the
    horizon-M space.  The covering condition (the images must union to
    the whole space) is checked on minimal points; an uncovered point is
    reported.  The value at z is the point supported on the indices whose
    assigned open contains z.
    """
    for i in range(M + 1):
        if i not in X:
            raise InputError(f"no open assigned to basic index {i}")
    for j in range(N + 1):
        probe = point(j)
        if not any(probe in X[i] for i in range(M + 1)):
            raise DomainError(
                f"basic-open images do not cover the space: {probe!r} is uncovered"
            )
    out: dict[frozenset, ProjPoint] = {}
    for m in range(1, 1 << (N + 1)):
        s = frozenset(i for i in range(N + 1) if m >> i & 1)
        z = ProjPoint(s)
        a = frozenset(i for i in range(M + 1) if z in X[i])
        out[s] = ProjPoint(a)
    return out


def preimage_morphism(f: Mapping[frozenset, ProjPoint], N: int, M: int) -> dict[int, OpenSetRep]:
    """The open-set morphism of a pointwise map, on basic opens: index i
    maps to the preimage of the i-th basic open."""
    out = {}
    for i in range(M + 1):
        supports = [s for s, v in f.items() if i in v.support]
        out[i] = OpenSetRep(N, frozenset(frozenset(s) for s in supports))
    return out


def homeo_permutation(
    f: Mapping[frozenset, ProjPoint], N: int
) -> Optional[dict[int, int]]:
    """If f is a homeomorphism of the horizon-N space it must permute
    coordinates; return that permutation (sigma with f(chi_a) =
    chi_{sigma^{-1}(a)}), or None when f is not a homeomorphism."""
    keys = set()
    for m in range(1, 1 << (N + 1)):
        keys.add(frozenset(i for i in range(N + 1) if m >> i & 1))
    if set(f) != keys:
        raise InputError("mapping must be total on the horizon-N space")
    values = [f[k].support for k in keys]
    if len(set(values)) != len(keys):
        return None
    sigma_inv = {}
    for i in range(N + 1):
        img = f[frozenset([i])].support
        if len(img) != 1:
            return None
        sigma_inv[i] = next(iter(img))
    if set(sigma_inv.values()) != set(range(N + 1)):
        return None
    for s in keys:
        if f[s].support != frozenset(sigma_inv[i] for i in s):
            return None
    return {v: k for k, v in sigma_inv.items()}
