"""Exact arithmetic of polyhomogeneous index sets.

An index set is a subset of C x N0 closed under ``(a, k) -> (a + l, k')`` for
``l >= 0`` integer and ``k' <= k``.  It is stored through its minimal
generators together with a rational ``cutoff``; only members with real part
``<= cutoff`` are ever enumerated, and membership above the cutoff is
reported as unknown (``None``).

Exponents have exact rational real and imaginary parts so that the
"same exponent modulo integers" test used by the extended union is decidable.

The text form used by the command line is::

    {(0,1), (-1/2+1/3i,2)}; cutoff=10
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

DEFAULT_CUTOFF = Fraction(10)

FACES = ("sc", "zf", "phif0", "bf0", "lb0", "rb0")


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**9)
    return Fraction(x)


@dataclass(frozen=True, order=True)
class IndexTerm:
    """A pair ``(alpha, k)`` with ``alpha = re + i*im``."""

    re: Fraction
    im: Fraction = Fraction(0)
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))
        if int(self.k) != self.k or self.k < 0:
            raise ValueError(f"log power must be a non-negative integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    def covers(self, other: "IndexTerm") -> bool:
        """True if ``other`` lies in the closure generated by ``self``."""
        shift = other.re - self.re
        return (
            other.im == self.im
            and shift >= 0
            and shift.denominator == 1
            and other.k <= self.k
        )

    def shifted(self, re=0, im=0, k=0) -> "IndexTerm":
        return IndexTerm(self.re + _frac(re), self.im + _frac(im), self.k + k)

    def alpha_text(self) -> str:
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def __str__(self) -> str:
        return f"({self.alpha_text()},{self.k})"


def term(re, k: int = 0, im=0) -> IndexTerm:
    return IndexTerm(_frac(re), _frac(im), k)


def _minimal(terms: Iterable[IndexTerm], cutoff: Fraction) -> frozenset[IndexTerm]:
    pool = sorted({t for t in terms if t.re <= cutoff}, key=lambda t: (t.re, -t.k, t.im))
    kept: list[IndexTerm] = []
    for t in pool:
        if any(g.covers(t) for g in kept):
            continue
        # a later (larger re) term cannot cover an earlier one, but an equal-re
        # term with larger k sorts first, so ``kept`` is already minimal
        kept.append(t)
    return frozenset(kept)


@dataclass(frozen=True)
class IndexSet:
    generators: frozenset = field(default_factory=frozenset)
    cutoff: Fraction = DEFAULT_CUTOFF

    def __post_init__(self):
        object.__setattr__(self, "cutoff", _frac(self.cutoff))
        object.__setattr__(self, "generators", _minimal(self.generators, self.cutoff))

    @classmethod
    def of(cls, *pairs, cutoff=DEFAULT_CUTOFF) -> "IndexSet":
        """``IndexSet.of((0, 0), ("-1/2", 1))`` -- pairs of (alpha, k)."""
        return cls(frozenset(term(a, k) for a, k in pairs), cutoff)

    @classmethod
    def empty(cls, cutoff=DEFAULT_CUTOFF) -> "IndexSet":
        return cls(frozenset(), cutoff)

    @property
    def is_empty(self) -> bool:
        return not self.generators

    def sorted_generators(self) -> list[IndexTerm]:
        return sorted(self.generators, key=lambda t: (t.re, t.im, t.k))

    def members(self) -> frozenset[IndexTerm]:
        """Every member with real part at most ``cutoff``."""
        out = set()
        for g in self.generators:
            ell = 0
            while g.re + ell <= self.cutoff:
                for kk in range(g.k + 1):
                    out.add(IndexTerm(g.re + ell, g.im, kk))
                ell += 1
        return frozenset(out)

    def contains(self, t: IndexTerm) -> bool | None:
        if t.re > self.cutoff:
            return None
        return any(g.covers(t) for g in self.generators)

    def max_log(self, re, im=0) -> int | None:
        """Largest log power carried by exponent ``re + i*im``, -1 if absent."""
        probe = IndexTerm(_frac(re), _frac(im), 0)
        if probe.re > self.cutoff:
            return None
        ks = [g.k for g in self.generators if g.covers(probe)]
        return max(ks) if ks else -1

    def min_re(self) -> Fraction | None:
        return min((g.re for g in self.generators), default=None)

    def with_cutoff(self, cutoff) -> "IndexSet":
        return IndexSet(self.generators, cutoff)

    def __str__(self) -> str:
        body = ", ".join(str(g) for g in self.sorted_generators())
        return "{" + body + "}; cutoff=" + str(self.cutoff)


def normalize(raw_terms: Iterable[IndexTerm], cutoff=DEFAULT_CUTOFF) -> IndexSet:
    return IndexSet(frozenset(raw_terms), cutoff)


def _common_cutoff(E: IndexSet, F: IndexSet) -> Fraction:
    return min(E.cutoff, F.cutoff)


def union(E: IndexSet, F: IndexSet) -> IndexSet:
    return IndexSet(E.generators | F.generators, _common_cutoff(E, F))


def extended_union(E: IndexSet, F: IndexSet) -> IndexSet:
    """``E u F u {(a, k + l + 1) : (a, k) in E, (a, l) in F}``.

    Two generators meet exactly when their exponents differ by an integer;
    the common exponents then start at the larger of the two.
    """
    cutoff = _common_cutoff(E, F)
    gens = set(E.generators) | set(F.generators)
    for g in E.generators:
        for h in F.generators:
            if g.im != h.im or (g.re - h.re).denominator != 1:
                continue
            start = max(g.re, h.re)
            gens.add(IndexTerm(start, g.im, g.k + h.k + 1))
    return IndexSet(frozenset(gens), cutoff)


def minkowski_sum(E: IndexSet, F: IndexSet) -> IndexSet:
    cutoff = _common_cutoff(E, F)
    gens = {
        IndexTerm(g.re + h.re, g.im + h.im, g.k + h.k)
        for g in E.generators
        for h in F.generators
    }
    return IndexSet(frozenset(gens), cutoff)


def shift(E: IndexSet, c) -> IndexSet:
    return minkowski_sum(E, IndexSet.of((c, 0), cutoff=E.cutoff))


def check_bound(E: IndexSet, c, strict: bool = False) -> bool:
    """``E > c`` (strict) or ``E >= c`` with no logarithm at real part ``c``."""
    c = _frac(c)
    if c > E.cutoff:
        raise ValueError(f"bound {c} lies above the cutoff {E.cutoff}")
    for g in E.generators:
        if strict:
            if g.re <= c:
                return False
        elif g.re < c or (g.re == c and g.k > 0):
            return False
    return True


# ---------------------------------------------------------------------------
# index triples on the blown-up quadrant and the pushforward rule


@dataclass(frozen=True)
class IndexTriple:
    """Index sets at the faces (10), (11) and (01) of the blown-up quadrant."""

    e10: IndexSet
    e11: IndexSet
    e01: IndexSet

    def as_tuple(self) -> tuple[IndexSet, IndexSet, IndexSet]:
        return (self.e10, self.e11, self.e01)


def pushforward_triple(left: IndexTriple, right: IndexTriple) -> IndexTriple:
    """Index sets of ``int u(x1, x2) w(x2, x3) dx2/x2`` on the (x1, x3) quadrant."""
    E10, E11, E01 = left.as_tuple()
    W10, W11, W01 = right.as_tuple()
    F10 = extended_union(minkowski_sum(E11, W10), E10)
    F11 = extended_union(minkowski_sum(E10, W01), minkowski_sum(E11, W11))
    F01 = extended_union(minkowski_sum(E01, W11), W01)
    return IndexTriple(F10, F11, F01)


def indicator_weight(cutoff=DEFAULT_CUTOFF) -> IndexTriple:
    """Weight of ``1{x3 <= x2}``: vanishing at (10), smooth at (11) and (01).

    The face-(11) set is taken as the smooth set N0 x {0}; the literal
    "N0 x N0" would give unbounded log powers at a single exponent.
    """
    smooth = IndexSet.of((0, 0), cutoff=cutoff)
    return IndexTriple(IndexSet.empty(cutoff), smooth, smooth)


def damped_weight(cutoff=DEFAULT_CUTOFF) -> IndexTriple:
    """Weight of ``1{x3 <= x2} g(x2/x3)`` with ``g`` rapidly decaying at infinity."""
    smooth = IndexSet.of((0, 0), cutoff=cutoff)
    return IndexTriple(IndexSet.empty(cutoff), smooth, IndexSet.empty(cutoff))


# ---------------------------------------------------------------------------
# face bounds


@dataclass(frozen=True)
class Bound:
    value: Fraction
    strict: bool = False
    log_at_bound: bool = False

    def __str__(self) -> str:
        op = ">" if self.strict else ">="
        tail = " (log at bound)" if self.log_at_bound else ""
        return f"{op} {self.value}{tail}"


FaceBounds = Mapping[str, Bound]


def bound_set(b: Bound, cutoff=DEFAULT_CUTOFF) -> IndexSet:
    """Largest index set allowed by a non-strict bound ``>= c``: generated by (c, 0)."""
    if b.strict:
        raise ValueError("a strict bound has no largest index set")
    return IndexSet.of((b.value, 0), cutoff=cutoff)


def lower_bound(E: IndexSet) -> Bound | None:
    """The sharpest bound satisfied by ``E`` (None for the empty set)."""
    c = E.min_re()
    if c is None:
        return None
    return Bound(c, strict=False, log_at_bound=not check_bound(E, c))


def check_face_bounds(sets: Mapping[str, IndexSet], bounds: FaceBounds) -> dict[str, bool]:
    return {face: check_bound(sets[face], b.value, b.strict) for face, b in bounds.items()}


def resolvent_power_bounds(sigma: int, b: int) -> dict[str, Bound]:
    """Face bounds for the ``sigma``-th power of the low-energy resolvent."""
    if sigma < 1:
        raise ValueError("sigma must be a positive integer")
    if b < 2:
        raise ValueError("the fibration base needs dimension b >= 2")
    F = Fraction
    return {
        "sc": Bound(F(0)),
        "phif0": Bound(min(F(0), F(-2 * sigma + b + 1))),
        "bf0": Bound(F(-2 * sigma)),
        "lb0": Bound(F(-2 * (sigma - 1)), strict=True),
        "rb0": Bound(F(-2 * (sigma - 1)), strict=True),
        "zf": Bound(F(-2 * sigma)),
    }


def resolvent_trace_bounds(nu: int, b: int) -> dict[str, Bound]:
    """Bounds for the pointwise trace of ``(Delta + kappa^2)^-nu`` on the diagonal."""
    if nu < 1:
        raise ValueError("nu must be a positive integer")
    F = Fraction
    return {"sc": Bound(F(0)), "zf": Bound(F(-2 * nu)), "phif0": Bound(F(-2 * nu + b + 1))}


def heat_trace_contributions(nu: int, b: int, weight: str = "damped", cutoff=None) -> dict[str, dict[str, IndexSet]]:
    """Index sets of the three pieces of the contour representation of the heat trace.

    ``rays``: the rays beyond |xi| = 1 are exponentially small for large t, so
    only the sc set survives.  ``arc``: the arc of radius 1/t carries the
    prefactor t^-nu, a shift by 2 nu at zf and phif0.  ``segments``: the rays
    between 1/t and 1 are a pushforward along s = sqrt(|xi|), with the s^2
    Jacobian shifting phif0 and zf by 2 before the pushforward and the
    prefactor t^(1-nu) shifting them by 2 nu - 2 afterwards.

    ``weight`` selects the segment weight: ``"damped"`` keeps the factor
    exp(-c t s^2), which vanishes to infinite order as s/sqrt(t) -> infinity;
    ``"indicator"`` drops it and keeps only the cut s >= 1/sqrt(t).
    """
    if cutoff is None:
        cutoff = max(DEFAULT_CUTOFF, Fraction(b + 3))
    inputs = {f: bound_set(bd, cutoff) for f, bd in resolvent_trace_bounds(nu, b).items()}
    empty = IndexSet.empty(cutoff)

    rays = {"sc": inputs["sc"], "zf": empty, "phif0": empty}
    arc = {
        "sc": inputs["sc"],
        "zf": shift(inputs["zf"], 2 * nu),
        "phif0": shift(inputs["phif0"], 2 * nu),
    }
    # faces of the (x, s) quadrant: (10) = sc, (11) = phif0, (01) = zf
    integrand = IndexTriple(inputs["sc"], shift(inputs["phif0"], 2), shift(inputs["zf"], 2))
    w = {"damped": damped_weight, "indicator": indicator_weight}[weight](cutoff)
    out = pushforward_triple(integrand, w)
    segments = {
        "sc": out.e10,
        "phif0": shift(out.e11, 2 * nu - 2),
        "zf": shift(out.e01, 2 * nu - 2),
    }
    total = {f: union(union(rays[f], arc[f]), segments[f]) for f in ("sc", "zf", "phif0")}
    return {"rays": rays, "arc": arc, "segments": segments, "total": total}


def heat_trace_bounds(nu: int, b: int, weight: str = "damped") -> dict[str, Bound]:
    """Face bounds of the long-time pointwise heat trace, taken over all contour pieces."""
    total = heat_trace_contributions(nu, b, weight)["total"]
    return {face: lower_bound(E) for face, E in total.items()}


# ---------------------------------------------------------------------------
# text form

_TERM_RE = re.compile(r"\(\s*([^,()]+?)\s*,\s*(\d+)\s*\)")
_CUTOFF_RE = re.compile(r"cutoff\s*=\s*([-+0-9/.]+)")


def _parse_alpha(text: str) -> tuple[Fraction, Fraction]:
    s = text.replace(" ", "").replace("·", "").replace("*", "")
    if not s.endswith("i"):
        return Fraction(s), Fraction(0)
    body = s[:-1]
    # split at the last sign that is not leading and not part of an exponent
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-":
            re_part, im_part = body[:pos], body[pos:]
            break
    else:
        re_part, im_part = "0", body
    if im_part in ("+", "-", ""):
        im_part += "1"
    return Fraction(re_part), Fraction(im_part)


def parse_index_set(text: str, cutoff=None) -> IndexSet:
    """Parse ``{(a,k), ...}`` with an optional ``; cutoff=C`` suffix."""
    m = _CUTOFF_RE.search(text)
    if cutoff is None:
        cutoff = Fraction(m.group(1)) if m else DEFAULT_CUTOFF
    body = text[: m.start()] if m else text
    body = body.strip().rstrip(";").strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ValueError(f"index set must be written as {{(alpha,k), ...}}: {text!r}")
    inner = body[1:-1].strip()
    terms = []
    consumed = 0
    for mt in _TERM_RE.finditer(inner):
        if inner[consumed:mt.start()].strip(" ,"):
            raise ValueError(f"cannot parse index set near {inner[consumed:mt.start()]!r}")
        re_part, im_part = _parse_alpha(mt.group(1))
        terms.append(IndexTerm(re_part, im_part, int(mt.group(2))))
        consumed = mt.end()
    if inner[consumed:].strip(" ,"):
        raise ValueError(f"cannot parse index set near {inner[consumed:]!r}")
    return IndexSet(frozenset(terms), cutoff)
