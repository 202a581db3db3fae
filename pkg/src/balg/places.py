"""Place functions over a backend algebra.

A place function is a finite rational linear combination of characteristic
elements with pairwise disjoint supports.  The canonical form keeps nonzero,
pairwise distinct coefficients on disjoint nonzero supports, so equivalent
representations canonicalize to structurally identical values and ``==``
decides equality in the space.

Two additions are provided on purpose: ``add_formula`` evaluates the
three-part formula built from pairwise meets and relative complements, and
``add_refine`` sums coefficients over a joint cell refinement.  The second
is the correctness oracle for the first.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import Algebra, AlgebraError


@dataclass(frozen=True, slots=True)
class PlaceFunction:
    """Canonical disjoint-support rational combination of characteristics."""

    backend: object
    terms: tuple[tuple[Fraction, object], ...]

    def is_zero(self) -> bool:
        return not self.terms

    def is_positive(self) -> bool:
        """Membership in the positive cone (0 included)."""
        return all(c > 0 for c, _ in self.terms)

    def support(self):
        """Join of all term supports."""
        out = self.backend.zero
        for _, x in self.terms:
            out = out | x
        return out

    def __add__(self, other: "PlaceFunction") -> "PlaceFunction":
        return add_refine(self, other)

    def __sub__(self, other: "PlaceFunction") -> "PlaceFunction":
        return add_refine(self, scale(Fraction(-1), other))

    def __neg__(self) -> "PlaceFunction":
        return scale(Fraction(-1), self)


def zero(backend) -> PlaceFunction:
    return PlaceFunction(backend, ())


def unit(backend) -> PlaceFunction:
    """The strong unit: the characteristic of the backend's unit."""
    return chi(backend.one)


def chi(x) -> PlaceFunction:
    """Characteristic place function of an element."""
    if x.is_zero():
        return PlaceFunction(x.alg, ())
    return PlaceFunction(x.alg, ((Fraction(1), x),))


def canonicalize(backend, raw: Iterable[tuple[Fraction, object]]) -> PlaceFunction:
    """Canonical form of an arbitrary coefficient/support list.

    Supports may overlap and coefficients may repeat or vanish: supports are
    refined to a shared cell partition, coefficients summed cellwise, zero
    cells dropped, and cells sharing a coefficient merged by joining.
    """
    terms = []
    for c, x in raw:
        c = Fraction(c)
        if c != 0 and not x.is_zero():
            if x.alg != backend:
                raise AlgebraError("support from a different backend")
            terms.append((c, x))
    if getattr(backend, "is_trivial", False) or not terms:
        return PlaceFunction(backend, ())
    payload, masks, ncells = backend.joint_cells([x for _, x in terms])
    values: dict[int, Fraction] = {}
    for (c, _), mask in zip(terms, masks):
        mm = mask
        while mm:
            low = mm & -mm
            i = low.bit_length() - 1
            values[i] = values.get(i, Fraction(0)) + c
            mm ^= low
    groups: dict[Fraction, int] = {}
    for i, v in values.items():
        if v != 0:
            groups[v] = groups.get(v, 0) | (1 << i)
    out = [(v, backend.join_cells(payload, mask)) for v, mask in groups.items()]
    out.sort(key=lambda t: backend.sort_key(t[1]))
    return PlaceFunction(backend, tuple(out))


def _match(f: PlaceFunction, g: PlaceFunction) -> None:
    if f.backend != g.backend:
        raise AlgebraError("place functions over different backends")


def add_formula(f: PlaceFunction, g: PlaceFunction) -> PlaceFunction:
    """Sum by the three-part formula.

    Terms (coeff sum, meet) over all support pairs, plus each side's terms on
    the relative complement of its support against the other side's total
    support; terms with vanishing coefficient or zero support are omitted,
    then the result is canonicalized.
    """
    _match(f, g)
    backend = f.backend
    sup_f = f.support()
    sup_g = g.support()
    raw: list[tuple[Fraction, object]] = []
    for lam, x in f.terms:
        for gam, y in g.terms:
            if lam + gam != 0:
                m = x & y
                if not m.is_zero():
                    raw.append((lam + gam, m))
    for lam, x in f.terms:
        r = x.rel_complement(sup_g)
        if not r.is_zero():
            raw.append((lam, r))
    for gam, y in g.terms:
        r = y.rel_complement(sup_f)
        if not r.is_zero():
            raw.append((gam, r))
    return canonicalize(backend, raw)


def add_refine(f: PlaceFunction, g: PlaceFunction) -> PlaceFunction:
    """Sum by joint cell refinement and cellwise coefficient addition."""
    _match(f, g)
    return canonicalize(f.backend, f.terms + g.terms)


def scale(c, f: PlaceFunction) -> PlaceFunction:
    c = Fraction(c)
    if c == 0:
        return PlaceFunction(f.backend, ())
    # scaling keeps supports, order, distinctness: already canonical
    return PlaceFunction(f.backend, tuple((c * ci, x) for ci, x in f.terms))


def _cell_values(backend, f: PlaceFunction, g: PlaceFunction):
    supports = [x for _, x in f.terms] + [x for _, x in g.terms]
    payload, masks, ncells = backend.joint_cells(supports)
    fvals = [Fraction(0)] * ncells
    gvals = [Fraction(0)] * ncells
    for (c, _), mask in zip(f.terms, masks[: len(f.terms)]):
        mm = mask
        while mm:
            low = mm & -mm
            fvals[low.bit_length() - 1] += c
            mm ^= low
    for (c, _), mask in zip(g.terms, masks[len(f.terms):]):
        mm = mask
        while mm:
            low = mm & -mm
            gvals[low.bit_length() - 1] += c
            mm ^= low
    return payload, fvals, gvals


def _from_cell_values(backend, payload, vals) -> PlaceFunction:
    groups: dict[Fraction, int] = {}
    for i, v in enumerate(vals):
        if v != 0:
            groups[v] = groups.get(v, 0) | (1 << i)
    out = [(v, backend.join_cells(payload, mask)) for v, mask in groups.items()]
    out.sort(key=lambda t: backend.sort_key(t[1]))
    return PlaceFunction(backend, tuple(out))


def lattice(f: PlaceFunction, g: PlaceFunction, which: str) -> PlaceFunction:
    """Cellwise min or max over the joint refinement of both supports.

    The refinement covers the whole unit, so the residual region outside both
    supports participates with value zero.
    """
    _match(f, g)
    if which not in ("meet", "join"):
        raise ValueError("which must be 'meet' or 'join'")
    backend = f.backend
    if getattr(backend, "is_trivial", False):
        return PlaceFunction(backend, ())
    op = min if which == "meet" else max
    payload, fvals, gvals = _cell_values(backend, f, g)
    return _from_cell_values(backend, payload, [op(a, b) for a, b in zip(fvals, gvals)])


def meet(f: PlaceFunction, g: PlaceFunction) -> PlaceFunction:
    return lattice(f, g, "meet")


def join(f: PlaceFunction, g: PlaceFunction) -> PlaceFunction:
    return lattice(f, g, "join")


def pos_part(f: PlaceFunction) -> PlaceFunction:
    return join(f, zero(f.backend))


def abs_(f: PlaceFunction) -> PlaceFunction:
    return join(f, zero(f.backend)) - meet(f, zero(f.backend))


def leq(f: PlaceFunction, g: PlaceFunction) -> bool:
    """Pointwise order: f <= g on every cell of the joint refinement."""
    _match(f, g)
    if getattr(f.backend, "is_trivial", False):
        return True
    _, fvals, gvals = _cell_values(f.backend, f, g)
    return all(a <= b for a, b in zip(fvals, gvals))


def is_component(f: PlaceFunction) -> bool:
    """Whether f satisfies the component equation f ^ (e - f) = 0 against
    the strong unit e.  Requires f in the positive cone."""
    if not f.is_positive():
        raise ValueError("component test requires a positive place function")
    e = unit(f.backend)
    return meet(f, e - f).is_zero()


@dataclass(frozen=True, slots=True)
class Component:
    """A place function verified to satisfy the component equation."""

    elem: PlaceFunction

    def __post_init__(self):
        if not is_component(self.elem):
            raise ValueError("not a component of the unit")

    def as_element(self):
        return as_element(self.elem)


def as_element(f: PlaceFunction):
    """The backend element x with f = chi(x), or None."""
    if not f.terms:
        return f.backend.zero
    if len(f.terms) == 1 and f.terms[0][0] == 1:
        return f.terms[0][1]
    return None


def random_place(backend, rng: random.Random, max_terms: int = 3,
                 positive: bool = False) -> PlaceFunction:
    raw = []
    for _ in range(rng.randint(0 if not positive else 1, max_terms)):
        num = rng.randint(1, 4) if positive else rng.choice([-4, -3, -2, -1, 1, 2, 3, 4])
        coeff = Fraction(num, rng.randint(1, 3))
        raw.append((coeff, backend.random_elem(rng)))
    return canonicalize(backend, raw)


@dataclass(frozen=True, slots=True)
class RegularityCheck:
    ok: bool
    detail: str
    counterexample: PlaceFunction | None = None


def check_regularity(xs: Sequence, s, rng: random.Random | None = None,
                     trials: int = 100) -> RegularityCheck:
    """Verify chi(s) is the least upper bound of {chi(x) : x in xs} in the
    place-function space.

    Requires s to be the join of xs.  chi(s) must dominate every chi(x);
    every sampled upper bound must dominate chi(s); and each constructed
    candidate strictly below chi(s) (the unit dented on one refinement cell
    under s) must fail to be an upper bound.
    """
    if not xs:
        raise AlgebraError("empty family")
    backend = xs[0].alg
    joined = backend.sup(xs)
    if joined != s:
        return RegularityCheck(False, "s is not the join of xs")
    target = chi(s)
    for x in xs:
        if not leq(chi(x), target):
            return RegularityCheck(False, "chi(s) fails to bound a member", chi(x))
    # a candidate below chi(s) dented on any refinement cell under s misses
    # some member: every such cell lies under some x in xs
    payload, masks, ncells = backend.joint_cells(list(xs) + [s])
    s_mask = masks[-1]
    for i in range(ncells):
        if not s_mask >> i & 1:
            continue
        cell = backend.join_cells(payload, 1 << i)
        dented = target - scale(Fraction(1, 2), chi(cell))
        if all(leq(chi(x), dented) for x in xs):
            return RegularityCheck(False, "strictly smaller upper bound exists", dented)
    rng = rng or random.Random(0)
    for _ in range(trials):
        g = random_place(backend, rng)
        if all(leq(chi(x), g) for x in xs) and not leq(target, g):
            return RegularityCheck(False, "sampled upper bound below chi(s)", g)
    return RegularityCheck(True, "least upper bound verified")
