"""Exact symbolic arithmetic for the polynomial Toeplitz algebra, the
circle algebra, and mixed tensor products of the two.

The single relation z* z = 1 gives every polynomial a unique normal form
as a combination of monomials z^a z*^b, so products reduce to index
arithmetic: (z^a z*^b)(z^c z*^d) = z^(a+max(c-b,0)) z*^(d+max(b-c,0)).
The circle algebra is Laurent polynomials in a unitary u; the symbol map
sends z^a z*^b to u^(a-b) and its kernel is the ideal generated by
1 - zz*, the polynomial shadow of the compacts.

Coefficients are exact rationals by default; Gaussian rationals are
accepted everywhere so adjoints of complex combinations stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import InputError

Coeff = Union[int, Fraction, "GaussRat"]


@dataclass(frozen=True)
class GaussRat:
    """A Gaussian rational re + im*i with exact components."""

    re: Fraction
    im: Fraction

    @classmethod
    def of(cls, re, im=0) -> "GaussRat":
        return cls(Fraction(re), Fraction(im))

    def __add__(self, other):
        o = _gauss(other)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_gauss(other))

    def __rsub__(self, other):
        return _gauss(other) + (-self)

    def __mul__(self, other):
        o = _gauss(other)
        return GaussRat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __str__(self) -> str:
        return f"{self.re}{'+' if self.im >= 0 else ''}{self.im}i"


def _gauss(c) -> GaussRat:
    if isinstance(c, GaussRat):
        return c
    return GaussRat(Fraction(c), Fraction(0))


def _conj(c: Coeff) -> Coeff:
    if isinstance(c, GaussRat):
        return c.conjugate()
    return c


def _norm_terms(terms: Mapping) -> dict:
    out = {}
    for k, c in terms.items():
        if isinstance(c, float):
            raise InputError("coefficients must be exact (int, Fraction, GaussRat)")
        if isinstance(c, int):
            c = Fraction(c)
        if c:
            out[k] = c
    return out


class ToeplitzElem:
    """A finite combination of normal-form monomials z^a z*^b."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple, Coeff] = ()):
        terms = dict(terms) if not isinstance(terms, dict) else terms
        for (a, b) in terms:
            if a < 0 or b < 0:
                raise InputError(f"monomial exponents must be naturals, got ({a},{b})")
        object.__setattr__(self, "terms", _norm_terms(terms))

    def __setattr__(self, *a):
        raise AttributeError("ToeplitzElem is immutable")

    def __eq__(self, other):
        return isinstance(other, ToeplitzElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return ToeplitzElem(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c: Coeff) -> "ToeplitzElem":
        return ToeplitzElem({k: v * c for k, v in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "T<0>"
        bits = []
        for (a, b), c in sorted(self.terms.items()):
            mono = (f"z^{a}" if a else "") + (f"z*^{b}" if b else "") or "1"
            bits.append(f"{c}*{mono}")
        return "T<" + " + ".join(bits) + ">"


def t_monomial(a: int, b: int, c: Coeff = 1) -> ToeplitzElem:
    return ToeplitzElem({(a, b): c})


T_ZERO = ToeplitzElem()
T_ONE = t_monomial(0, 0)
Z = t_monomial(1, 0)
Z_STAR = t_monomial(0, 1)


def t_mul(x: ToeplitzElem, y: ToeplitzElem) -> ToeplitzElem:
    out: dict = {}
    for (a, b), c1 in x.terms.items():
        for (cc, d), c2 in y.terms.items():
            key = (a + max(cc - b, 0), d + max(b - cc, 0))
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return ToeplitzElem(out)


def t_star(x: ToeplitzElem) -> ToeplitzElem:
    return ToeplitzElem({(b, a): _conj(c) for (a, b), c in x.terms.items()})


def compact_unit() -> ToeplitzElem:
    """1 - zz*, the generator of the polynomial shadow of the compacts."""
    return ToeplitzElem({(0, 0): 1, (1, 1): -1})


class CircleElem:
    """A Laurent polynomial in the unitary circle generator u."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Coeff] = ()):
        terms = dict(terms) if not isinstance(terms, dict) else terms
        object.__setattr__(self, "terms", _norm_terms(terms))

    def __setattr__(self, *a):
        raise AttributeError("CircleElem is immutable")

    def __eq__(self, other):
        return isinstance(other, CircleElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return CircleElem(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c: Coeff) -> "CircleElem":
        return CircleElem({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        out: dict = {}
        for j, c1 in self.terms.items():
            for k, c2 in other.terms.items():
                out[j + k] = out.get(j + k, Fraction(0)) + c1 * c2
        return CircleElem(out)

    def __repr__(self):
        if not self.terms:
            return "S<0>"
        return "S<" + " + ".join(f"{c}*u^{k}" for k, c in sorted(self.terms.items())) + ">"


def u_monomial(k: int, c: Coeff = 1) -> CircleElem:
    return CircleElem({k: c})


U = u_monomial(1)
S_ONE = u_monomial(0)


def symbol(x: ToeplitzElem) -> CircleElem:
    """Unital star homomorphism onto the circle algebra, z to u; kills
    exactly the ideal generated by 1 - zz*."""
    out: dict = {}
    for (a, b), c in x.terms.items():
        out[a - b] = out.get(a - b, Fraction(0)) + c
    return CircleElem(out)


def section(h: CircleElem) -> ToeplitzElem:
    """Linear right inverse of the symbol map: nonnegative powers lift to
    powers of z, negative ones to powers of z*."""
    out = {}
    for k, c in h.terms.items():
        out[(k, 0) if k >= 0 else (0, -k)] = c
    return ToeplitzElem(out)


def circle_antipode(h: CircleElem) -> CircleElem:
    return CircleElem({-k: c for k, c in h.terms.items()})


def circle_counit(h: CircleElem) -> Coeff:
    total = Fraction(0)
    for c in h.terms.values():
        total = total + c
    return total


def circle_star(h: CircleElem) -> CircleElem:
    return CircleElem({-k: _conj(c) for k, c in h.terms.items()})


# -- mixed tensors ---------------------------------------------------------

T, S = "T", "S"


class MixedTensor:
    """An exact combination of basis tensors over a shape of factor kinds:
    at a T position the entry is an exponent pair (a, b) for z^a z*^b, at
    an S position an integer power of u."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape: Iterable[str], terms: Mapping[tuple, Coeff] = ()):
        shape = tuple(shape)
        for kind in shape:
            if kind not in (T, S):
                raise InputError(f"unknown factor kind {kind!r}")
        terms = dict(terms) if not isinstance(terms, dict) else terms
        for key in terms:
            if len(key) != len(shape):
                raise InputError("basis tuple length does not match the shape")
            for kind, entry in zip(shape, key):
                if kind == T:
                    if not (isinstance(entry, tuple) and len(entry) == 2
                            and entry[0] >= 0 and entry[1] >= 0):
                        raise InputError(f"bad T entry {entry!r}")
                else:
                    if not isinstance(entry, int):
                        raise InputError(f"bad S entry {entry!r}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "terms", _norm_terms(terms))

    def __setattr__(self, *a):
        raise AttributeError("MixedTensor is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, MixedTensor)
            and self.shape == other.shape
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.shape, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if self.shape != other.shape:
            raise InputError(f"shape mismatch: {self.shape} vs {other.shape}")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return MixedTensor(self.shape, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c: Coeff) -> "MixedTensor":
        return MixedTensor(self.shape, {k: v * c for k, v in self.terms.items()})

    def mul(self, other: "MixedTensor") -> "MixedTensor":
        """Componentwise product; basis tensors multiply to basis tensors
        because both factor algebras have monomial normal forms."""
        if self.shape != other.shape:
            raise InputError(f"shape mismatch: {self.shape} vs {other.shape}")
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = []
                for kind, e1, e2 in zip(self.shape, k1, k2):
                    if kind == T:
                        a, b = e1
                        cc, d = e2
                        key.append((a + max(cc - b, 0), d + max(b - cc, 0)))
                    else:
                        key.append(e1 + e2)
                key = tuple(key)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return MixedTensor(self.shape, out)

    def star(self) -> "MixedTensor":
        out = {}
        for key, c in self.terms.items():
            new = tuple(
                (e[1], e[0]) if kind == T else -e
                for kind, e in zip(self.shape, key)
            )
            out[new] = out.get(new, Fraction(0)) + _conj(c)
        return MixedTensor(self.shape, out)

    def tensor(self, other: "MixedTensor") -> "MixedTensor":
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[k1 + k2] = out.get(k1 + k2, Fraction(0)) + c1 * c2
        return MixedTensor(self.shape + other.shape, out)

    def __repr__(self):
        if not self.terms:
            return f"MT<{''.join(self.shape)}|0>"
        bits = []
        for key, c in sorted(self.terms.items(), key=repr):
            fac = []
            for kind, e in zip(self.shape, key):
                if kind == T:
                    a, b = e
                    fac.append((f"z^{a}" if a else "") + (f"z*^{b}" if b else "") or "1")
                else:
                    fac.append(f"u^{e}" if e else "1")
            bits.append(f"{c}*" + "(x)".join(fac))
        return f"MT<{''.join(self.shape)}|" + " + ".join(bits) + ">"


def mt_zero(shape: Iterable[str]) -> MixedTensor:
    return MixedTensor(tuple(shape))


def mt_one(shape: Iterable[str]) -> MixedTensor:
    shape = tuple(shape)
    key = tuple((0, 0) if k == T else 0 for k in shape)
    return MixedTensor(shape, {key: 1})


def mt_basis(shape: Iterable[str], key: tuple, c: Coeff = 1) -> MixedTensor:
    return MixedTensor(tuple(shape), {key: c})


def from_factors(factors: Iterable[ToeplitzElem | CircleElem]) -> MixedTensor:
    """Tensor product of single-factor elements."""
    out = MixedTensor((), {(): 1})
    for f in factors:
        if isinstance(f, ToeplitzElem):
            piece = MixedTensor((T,), {((a, b),): c for (a, b), c in f.terms.items()})
        elif isinstance(f, CircleElem):
            piece = MixedTensor((S,), {(k,): c for k, c in f.terms.items()})
        else:
            raise InputError(f"cannot tensor a {type(f).__name__}")
        out = out.tensor(piece)
    return out


def _entry_degree(kind: str, entry) -> int:
    return entry[0] - entry[1] if kind == T else entry


def _check_pos(x: MixedTensor, pos: int, kind: str) -> int:
    if pos < 1 or pos > len(x.shape):
        raise InputError(f"position {pos} outside 1..{len(x.shape)}")
    if x.shape[pos - 1] != kind:
        raise InputError(f"position {pos} has kind {x.shape[pos - 1]}, expected {kind}")
    return pos - 1


def symbol_at(pos: int, x: MixedTensor) -> MixedTensor:
    """Apply the symbol map at a 1-indexed T position."""
    i = _check_pos(x, pos, T)
    shape = x.shape[:i] + (S,) + x.shape[i + 1:]
    out: dict = {}
    for key, c in x.terms.items():
        a, b = key[i]
        new = key[:i] + (a - b,) + key[i + 1:]
        out[new] = out.get(new, Fraction(0)) + c
    return MixedTensor(shape, out)


def sigma_k(k: int, x: MixedTensor) -> MixedTensor:
    return symbol_at(k, x)


def section_at(pos: int, x: MixedTensor) -> MixedTensor:
    """Lift the S factor at a 1-indexed position through the linear
    section of the symbol map."""
    i = _check_pos(x, pos, S)
    shape = x.shape[:i] + (T,) + x.shape[i + 1:]
    out: dict = {}
    for key, c in x.terms.items():
        m = key[i]
        entry = (m, 0) if m >= 0 else (0, -m)
        new = key[:i] + (entry,) + key[i + 1:]
        out[new] = out.get(new, Fraction(0)) + c
    return MixedTensor(shape, out)


def antipode_at(pos: int, x: MixedTensor) -> MixedTensor:
    i = _check_pos(x, pos, S)
    out: dict = {}
    for key, c in x.terms.items():
        new = key[:i] + (-key[i],) + key[i + 1:]
        out[new] = out.get(new, Fraction(0)) + c
    return MixedTensor(x.shape, out)


def coaction_rho(x: ToeplitzElem) -> MixedTensor:
    """The gauge coaction: z^a z*^b goes to z^a z*^b tensor u^(a-b)."""
    return MixedTensor((T, S), {((a, b), a - b): c for (a, b), c in x.terms.items()})


def diag_coaction(n: int, x: MixedTensor) -> MixedTensor:
    """Diagonal coaction on an all-T tensor of length n: append the
    circle factor carrying the total degree."""
    if x.shape != (T,) * n:
        raise InputError(f"expected an all-T shape of length {n}")
    out = {}
    for key, c in x.terms.items():
        total = sum(a - b for (a, b) in key)
        out[key + (total,)] = c
    return MixedTensor((T,) * n + (S,), out)


def psi(x: MixedTensor, antipode: bool = True) -> MixedTensor:
    """The gluing twist on a trailing-circle tensor: the circle exponent
    m becomes -(total T degree + m).  An involution; with the antipode
    disabled the reflection is dropped and involutivity fails."""
    if not x.shape or x.shape[-1] != S or any(k != T for k in x.shape[:-1]):
        raise InputError(f"expected shape T...TS, got {''.join(x.shape)}")
    out: dict = {}
    for key, c in x.terms.items():
        total = sum(a - b for (a, b) in key[:-1]) + key[-1]
        m = -total if antipode else total
        new = key[:-1] + (m,)
        out[new] = out.get(new, Fraction(0)) + c
    return MixedTensor(x.shape, out)


def psi_inv(x: MixedTensor, antipode: bool = True) -> MixedTensor:
    """Inverse of the twist; equal to it exactly when the antipode is on."""
    if antipode:
        return psi(x, True)
    if not x.shape or x.shape[-1] != S or any(k != T for k in x.shape[:-1]):
        raise InputError(f"expected shape T...TS, got {''.join(x.shape)}")
    out: dict = {}
    for key, c in x.terms.items():
        deg = sum(a - b for (a, b) in key[:-1])
        new = key[:-1] + (key[-1] - deg,)
        out[new] = out.get(new, Fraction(0)) + c
    return MixedTensor(x.shape, out)


def chi(j: int, x: MixedTensor) -> MixedTensor:
    """Move the trailing circle factor to 1-indexed position j."""
    if not x.shape or x.shape[-1] != S:
        raise InputError("expected a trailing S factor")
    n = len(x.shape)
    if j < 1 or j > n:
        raise InputError(f"position {j} outside 1..{n}")
    shape = x.shape[:j - 1] + (S,) + x.shape[j - 1:-1]
    out = {}
    for key, c in x.terms.items():
        new = key[:j - 1] + (key[-1],) + key[j - 1:-1]
        out[new] = c
    return MixedTensor(shape, out)


def chi_inv(j: int, x: MixedTensor) -> MixedTensor:
    """Move the circle factor at 1-indexed position j to the end."""
    i = _check_pos(x, j, S)
    shape = x.shape[:i] + x.shape[i + 1:] + (S,)
    out = {}
    for key, c in x.terms.items():
        new = key[:i] + key[i + 1:] + (key[i],)
        out[new] = c
    return MixedTensor(shape, out)


def psi_ij(i: int, j: int, x: MixedTensor, antipode: bool = True) -> MixedTensor:
    """The gluing isomorphism between two mixed cube faces: circle factor
    at position i+1 in, at position j out (0 <= i < j <= number of
    factors)."""
    n = len(x.shape)
    if not (0 <= i < j <= n):
        raise InputError(f"need 0 <= i < j <= {n}, got ({i},{j})")
    _check_pos(x, i + 1, S)
    return chi(j, psi(chi_inv(i + 1, x), antipode))


def psi_ij_inv(i: int, j: int, x: MixedTensor, antipode: bool = True) -> MixedTensor:
    """Inverse route: circle factor at position j in, at position i+1 out."""
    n = len(x.shape)
    if not (0 <= i < j <= n):
        raise InputError(f"need 0 <= i < j <= {n}, got ({i},{j})")
    _check_pos(x, j, S)
    return chi(i + 1, psi_inv(chi_inv(j, x), antipode))


# -- JSON ----------------------------------------------------------------


def _coeff_to_str(c: Coeff) -> str:
    return str(c)


def _coeff_from_str(s) -> Coeff:
    if isinstance(s, int):
        return Fraction(s)
    s = str(s).strip()
    if s.endswith("i"):
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-", 1))
        if cut <= 0:
            return GaussRat.of(0, Fraction(body if body not in ("", "+", "-") else body + "1"))
        re = Fraction(body[:cut])
        imtok = body[cut:]
        if imtok in ("+", "-"):
            imtok += "1"
        return GaussRat.of(re, Fraction(imtok))
    return Fraction(s)


def elem_to_json(x: ToeplitzElem | CircleElem) -> dict:
    if isinstance(x, ToeplitzElem):
        return {"T": [{"a": a, "b": b, "c": _coeff_to_str(c)}
                      for (a, b), c in sorted(x.terms.items())]}
    return {"S": [{"k": k, "c": _coeff_to_str(c)} for k, c in sorted(x.terms.items())]}


def elem_from_json(doc: dict) -> ToeplitzElem | CircleElem:
    try:
        if "T" in doc:
            return ToeplitzElem(
                {(int(t["a"]), int(t["b"])): _coeff_from_str(t["c"]) for t in doc["T"]}
            )
        if "S" in doc:
            return CircleElem({int(t["k"]): _coeff_from_str(t["c"]) for t in doc["S"]})
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad element literal: {exc}") from None
    raise InputError("element literal needs a 'T' or 'S' key")


def tensor_to_json(x: MixedTensor) -> dict:
    terms = []
    for key, c in sorted(x.terms.items(), key=repr):
        factors = []
        for kind, e in zip(x.shape, key):
            if kind == T:
                factors.append({"a": e[0], "b": e[1]})
            else:
                factors.append({"k": e})
        terms.append({"factors": factors, "c": _coeff_to_str(c)})
    return {"shape": "".join(x.shape), "terms": terms}


def tensor_from_json(doc: dict) -> MixedTensor:
    """Accepts either per-term factor entries or, for pure tensors, a
    'factors' array of element literals matching the shape string."""
    try:
        shape = tuple(doc["shape"])
        if "factors" in doc:
            factors = [elem_from_json(f) for f in doc["factors"]]
            for kind, f in zip(shape, factors):
                want = ToeplitzElem if kind == T else CircleElem
                if not isinstance(f, want):
                    raise InputError("factor literal kind does not match the shape")
            if len(factors) != len(shape):
                raise InputError("factor count does not match the shape")
            return from_factors(factors)
        terms = {}
        for t in doc.get("terms", []):
            key = []
            for kind, f in zip(shape, t["factors"]):
                if kind == T:
                    key.append((int(f["a"]), int(f["b"])))
                else:
                    key.append(int(f["k"]))
            terms[tuple(key)] = _coeff_from_str(t["c"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad tensor document: {exc}") from None
    return MixedTensor(shape, terms)
