"""Boolean algebra backends: finite powersets and the finite-cofinite algebra.

Elements are immutable values with a unique representation per mathematical
element, so structural equality (``==``) decides mathematical equality.
Powerset elements are bitsets over the atom index range; finite-cofinite
elements are a (mode, sorted support) pair over the naturals.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

POWERSET = "powerset"
FINITE_COFINITE = "finite_cofinite"

MAX_ATOMS = 16


class AlgebraError(ValueError):
    """Malformed descriptor, cross-algebra operand mix, or unsupported call."""


@dataclass(frozen=True, slots=True)
class Algebra:
    """Descriptor of a Boolean algebra backend.

    ``powerset`` is the algebra of subsets of ``atom_count`` points (atom
    indices are 1-based in text form); ``finite_cofinite`` is the algebra of
    finite and cofinite subsets of the naturals.  A ``trivial`` algebra is the
    one-element algebra in which 0 = 1.  The ``name`` is a display label and
    does not participate in equality.
    """

    kind: str
    atom_count: int = 0
    trivial: bool = False
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.kind not in (POWERSET, FINITE_COFINITE):
            raise AlgebraError(f"unknown algebra kind {self.kind!r}")
        if self.trivial:
            if self.kind != POWERSET or self.atom_count != 0:
                raise AlgebraError("the trivial algebra is flagged, not given atoms")
        elif self.kind == POWERSET:
            if not 1 <= self.atom_count <= MAX_ATOMS:
                raise AlgebraError(
                    f"powerset atom count must be 1..{MAX_ATOMS}, got {self.atom_count}"
                )
        elif self.atom_count != 0:
            raise AlgebraError("finite_cofinite has no atom count")

    # -- element constructors ------------------------------------------------

    @property
    def zero(self) -> "Elem":
        if self.kind == POWERSET:
            return Elem(self, 0)
        return Elem(self, ("fin", ()))

    @property
    def one(self) -> "Elem":
        if self.trivial:
            return Elem(self, 0)
        if self.kind == POWERSET:
            return Elem(self, (1 << self.atom_count) - 1)
        return Elem(self, ("cof", ()))

    @property
    def is_trivial(self) -> bool:
        return self.trivial

    def subset(self, atoms: Iterable[int]) -> "Elem":
        """Powerset element from 1-based atom indices."""
        if self.kind != POWERSET or self.trivial:
            raise AlgebraError("subset literals require a nontrivial powerset algebra")
        bits = 0
        for a in atoms:
            if not 1 <= a <= self.atom_count:
                raise AlgebraError(f"atom {a} out of range 1..{self.atom_count}")
            bits |= 1 << (a - 1)
        return Elem(self, bits)

    def fin(self, support: Iterable[int] = ()) -> "Elem":
        """Finite set of naturals."""
        if self.kind != FINITE_COFINITE:
            raise AlgebraError("fin literals require the finite_cofinite algebra")
        return Elem(self, ("fin", _support(support)))

    def cof(self, excluded: Iterable[int] = ()) -> "Elem":
        """Cofinite set: all naturals except ``excluded``."""
        if self.kind != FINITE_COFINITE:
            raise AlgebraError("cof literals require the finite_cofinite algebra")
        return Elem(self, ("cof", _support(excluded)))

    # -- structure -----------------------------------------------------------

    def atoms(self) -> tuple["Elem", ...]:
        """The minimal nonzero elements, in index order (powerset only)."""
        if self.trivial:
            raise AlgebraError("the trivial algebra has no atoms")
        if self.kind != POWERSET:
            raise AlgebraError("atoms are not enumerable for finite_cofinite")
        return tuple(Elem(self, 1 << i) for i in range(self.atom_count))

    def atom_mask(self, x: "Elem") -> int:
        """Bitmask of atoms below x (powerset only)."""
        if self.kind != POWERSET or self.trivial:
            raise AlgebraError("atom masks require a nontrivial powerset algebra")
        self._check(x)
        return x.data  # type: ignore[return-value]

    def from_atom_mask(self, bits: int) -> "Elem":
        if self.kind != POWERSET or self.trivial:
            raise AlgebraError("atom masks require a nontrivial powerset algebra")
        return Elem(self, bits & ((1 << self.atom_count) - 1))

    def elements(self) -> Iterator["Elem"]:
        """All elements (finite algebras only)."""
        if self.trivial:
            yield self.zero
            return
        if self.kind != POWERSET:
            raise AlgebraError("finite_cofinite is infinite")
        for bits in range(1 << self.atom_count):
            yield Elem(self, bits)

    def card(self) -> int:
        if self.trivial:
            return 1
        if self.kind != POWERSET:
            raise AlgebraError("finite_cofinite is infinite")
        return 1 << (1 << self.atom_count)

    def sup(self, xs: Iterable["Elem"]) -> "Elem":
        """Join of a nonempty finite set of elements."""
        xs = list(xs)
        if not xs:
            raise AlgebraError("sup of an empty collection")
        out = xs[0]
        for x in xs[1:]:
            out = out | x
        self._check(out)
        return out

    def random_elem(self, rng: random.Random, span: int = 12) -> "Elem":
        if self.trivial:
            return self.zero
        if self.kind == POWERSET:
            return Elem(self, rng.getrandbits(self.atom_count))
        size = rng.randint(0, 4)
        support = _support(rng.sample(range(span), size))
        return Elem(self, (rng.choice(("fin", "cof")), support))

    def sort_key(self, x: "Elem"):
        """Deterministic total order on elements; cells sort fin-before-cof."""
        if self.kind == POWERSET:
            bits = x.data
            low = (bits & -bits).bit_length()
            return (low, bits)
        mode, support = x.data
        return (0, support) if mode == "fin" else (1, support)

    def joint_cells(self, parts: Sequence["Elem"]):
        """Shared cell partition refining every part, plus per-part bitmasks."""
        cells = refine_partition(self.one, parts, self.sort_key)
        masks = []
        for x in parts:
            m = 0
            for i, c in enumerate(cells):
                if c.leq(x):
                    m |= 1 << i
            masks.append(m)
        return cells, masks, len(cells)

    def join_cells(self, cells: Sequence["Elem"], mask: int) -> "Elem":
        out = self.zero
        for i, c in enumerate(cells):
            if mask >> i & 1:
                out = out | c
        return out

    def _check(self, x: "Elem") -> "Elem":
        if x.alg != self:
            raise AlgebraError(f"element of {x.alg.name or x.alg.kind} used in {self.name or self.kind}")
        return x


def powerset(atom_count: int, name: str = "") -> Algebra:
    return Algebra(POWERSET, atom_count, False, name or f"P({atom_count})")


def finite_cofinite(name: str = "") -> Algebra:
    return Algebra(FINITE_COFINITE, 0, False, name or "finite_cofinite")


def trivial_algebra(name: str = "") -> Algebra:
    return Algebra(POWERSET, 0, True, name or "trivial")


def _support(items: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted(set(items)))
    if out and out[0] < 0:
        raise AlgebraError("finite_cofinite supports are sets of naturals")
    return out


@dataclass(frozen=True, slots=True)
class Elem:
    """An element of a backend algebra.

    ``data`` is an atom bitmask for powerset algebras and a
    ``(mode, sorted support)`` pair for the finite-cofinite algebra.
    """

    alg: Algebra
    data: int | tuple[str, tuple[int, ...]]

    def _match(self, other: "Elem") -> None:
        if not isinstance(other, Elem) or self.alg != other.alg:
            raise AlgebraError("operands belong to different algebras")

    def is_zero(self) -> bool:
        if self.alg.kind == POWERSET:
            return self.data == 0
        return self.data == ("fin", ())

    def __and__(self, other: "Elem") -> "Elem":
        self._match(other)
        if self.alg.kind == POWERSET:
            return Elem(self.alg, self.data & other.data)
        ma, sa = self.data
        mb, sb = other.data
        a, b = set(sa), set(sb)
        if ma == "fin" and mb == "fin":
            return Elem(self.alg, ("fin", _support(a & b)))
        if ma == "fin":
            return Elem(self.alg, ("fin", _support(a - b)))
        if mb == "fin":
            return Elem(self.alg, ("fin", _support(b - a)))
        return Elem(self.alg, ("cof", _support(a | b)))

    def __invert__(self) -> "Elem":
        if self.alg.trivial:
            return self
        if self.alg.kind == POWERSET:
            return Elem(self.alg, self.data ^ ((1 << self.alg.atom_count) - 1))
        mode, support = self.data
        return Elem(self.alg, ("cof" if mode == "fin" else "fin", support))

    def __or__(self, other: "Elem") -> "Elem":
        self._match(other)
        if self.alg.kind == POWERSET:
            return Elem(self.alg, self.data | other.data)
        return ~(~self & ~other)

    def __xor__(self, other: "Elem") -> "Elem":
        # disjoint sum (x & ~y) | (~x & y)
        return (self & ~other) | (~self & other)

    def leq(self, other: "Elem") -> bool:
        """Boolean order: x <= y iff x & y == x."""
        self._match(other)
        if self.alg.kind == POWERSET:
            return self.data & other.data == self.data
        ma, sa = self.data
        mb, sb = other.data
        if ma == "fin":
            if mb == "fin":
                return set(sa) <= set(sb)
            return not set(sa) & set(sb)
        if mb == "fin":
            return False
        return set(sb) <= set(sa)

    def rel_complement(self, other: "Elem") -> "Elem":
        """Complement of self & other relative to self: x & ~(x & y)."""
        return self & ~(self & other)

    def contains(self, n: int) -> bool:
        """Pointwise membership; powerset atoms are 1-based."""
        if self.alg.kind == POWERSET:
            if not 1 <= n <= self.alg.atom_count:
                return False
            return bool(self.data >> (n - 1) & 1)
        mode, support = self.data
        return (n in support) if mode == "fin" else (n not in support)


def refine_partition(one, parts: Sequence, key: Callable) -> list:
    """Atoms of the finite subalgebra generated by ``parts``.

    Splits the unit by each part in turn, keeping nonzero cells; the result is
    the partition of unity into all nonzero signed meets, sorted by ``key``.
    """
    cells = [one]
    seen = set()
    for x in parts:
        if x in seen:
            continue
        seen.add(x)
        nxt = []
        for c in cells:
            inside = c & x
            outside = c & ~x
            if not inside.is_zero():
                nxt.append(inside)
            if not outside.is_zero():
                nxt.append(outside)
        cells = nxt
    cells.sort(key=key)
    return cells


# -- homomorphisms -----------------------------------------------------------


class HomDomainError(AlgebraError):
    """Element outside the subalgebra a homomorphism is defined on."""


class Hom:
    """A (claimed) Boolean homomorphism between two backends.

    Three backing strategies:

    * ``atom_map`` -- total function from target atoms to source atoms; the
      image of x is exactly the set of target atoms whose image atom lies in x
      (powerset-to-powerset only, always a genuine homomorphism);
    * ``generator images`` -- images prescribed on a finite generating set and
      extended over the generated subalgebra by signed meets;
    * ``table`` -- an explicit element table, used for negative-control
      fixtures that need not be homomorphisms at all.
    """

    __slots__ = ("source", "target", "_atom_map", "_cells", "_images", "_table", "label")

    def __init__(self, source: Algebra, target: Algebra, *, atom_map=None,
                 cells=None, images=None, table=None, label: str = ""):
        self.source = source
        self.target = target
        self._atom_map = atom_map
        self._cells = cells
        self._images = images
        self._table = table
        self.label = label

    @classmethod
    def from_atom_map(cls, source: Algebra, target: Algebra,
                      atom_map: Sequence[int], label: str = "") -> "Hom":
        """atom_map[q] is the 1-based source atom assigned to target atom q+1."""
        if source.kind != POWERSET or target.kind != POWERSET:
            raise AlgebraError("atom maps require powerset backends")
        if len(atom_map) != target.atom_count:
            raise AlgebraError("atom map must cover every target atom")
        for a in atom_map:
            if not 1 <= a <= source.atom_count:
                raise AlgebraError(f"atom map value {a} outside source atoms")
        return cls(source, target, atom_map=tuple(atom_map), label=label)

    @classmethod
    def identity(cls, alg: Algebra) -> "Hom":
        if alg.kind == POWERSET and not alg.trivial:
            return cls.from_atom_map(alg, alg, range(1, alg.atom_count + 1), label="id")
        return cls(alg, alg, table="identity", label="id")

    @classmethod
    def from_generator_images(cls, source: Algebra, target: Algebra,
                              pairs: Sequence[tuple[Elem, Elem]], label: str = "") -> "Hom":
        """Extend prescribed generator images over the generated subalgebra.

        The domain cells are the atoms of the subalgebra generated by the
        generator elements; each cell's image is the matching signed meet of
        the generator images.
        """
        gens = [g for g, _ in pairs]
        for g, img in pairs:
            source._check(g)
            target._check(img)
        cells = refine_partition(source.one, gens, source.sort_key)
        images = []
        for c in cells:
            img = target.one
            for g, gi in pairs:
                img = img & (gi if c.leq(g) else ~gi)
            images.append(img)
        return cls(source, target, cells=tuple(cells), images=tuple(images), label=label)

    @classmethod
    def from_table(cls, source: Algebra, target: Algebra,
                   table: dict[Elem, Elem], label: str = "") -> "Hom":
        return cls(source, target, table=dict(table), label=label)

    def __call__(self, x: Elem) -> Elem:
        self.source._check(x)
        if self._atom_map is not None:
            bits = 0
            for q, a in enumerate(self._atom_map):
                if x.data >> (a - 1) & 1:
                    bits |= 1 << q
            return Elem(self.target, bits)
        if self._table == "identity":
            return Elem(self.target, x.data)
        if self._table is not None:
            try:
                return self._table[x]
            except KeyError:
                raise HomDomainError("element outside the table domain") from None
        selected = [i for i, c in enumerate(self._cells) if c.leq(x)]
        rejoin = self.source.zero
        for i in selected:
            rejoin = rejoin | self._cells[i]
        if rejoin != x:
            raise HomDomainError("element outside the generated subalgebra")
        out = self.target.zero
        for i in selected:
            out = out | self._images[i]
        return out

    def domain_elements(self) -> Iterator[Elem]:
        """Every element the homomorphism is defined on (finite domains only)."""
        if self._atom_map is not None or self._table == "identity":
            yield from self.source.elements()
        elif self._table is not None:
            yield from self._table
        else:
            n = len(self._cells)
            if n > 20:
                raise AlgebraError("domain too large to enumerate")
            for mask in range(1 << n):
                out = self.source.zero
                for i in range(n):
                    if mask >> i & 1:
                        out = out | self._cells[i]
                yield out

    def random_domain_elem(self, rng: random.Random) -> Elem:
        if self._atom_map is not None or self._table == "identity":
            return self.source.random_elem(rng)
        if self._table is not None:
            return rng.choice(sorted(self._table, key=self.source.sort_key))
        out = self.source.zero
        for c in self._cells:
            if rng.random() < 0.5:
                out = out | c
        return out


@dataclass(frozen=True, slots=True)
class HomCheck:
    """Outcome of a homomorphism check, with a violating pair on failure."""

    ok: bool
    pairs_checked: int
    axiom: str = ""
    witness: tuple[Elem, Elem] | None = None
    lhs: Elem | None = None
    rhs: Elem | None = None


def check_homomorphism(h: Hom, exhaustive: bool = False, trials: int = 200,
                       rng: random.Random | None = None) -> HomCheck:
    """Check meet, disjoint-sum, and unit preservation on element pairs.

    Exhaustive mode walks every pair of the (finite) domain; sampled mode
    draws ``trials`` pairs.  A passing verdict also asserts finite-join
    preservation on the same pairs, which must follow from the axioms.
    """
    if exhaustive and h.source.kind == POWERSET and h.source.atom_count > 12:
        raise AlgebraError("exhaustive checks are capped at 12 source atoms")
    one_img = h(h.source.one)
    if one_img != h.target.one:
        return HomCheck(False, 0, "unit", (h.source.one, h.source.one),
                        one_img, h.target.one)
    if exhaustive:
        pool = list(h.domain_elements())
        pairs: Iterable[tuple[Elem, Elem]] = ((x, y) for x in pool for y in pool)
    else:
        rng = rng or random.Random(0)
        pairs = ((h.random_domain_elem(rng), h.random_domain_elem(rng))
                 for _ in range(trials))
    checked = 0
    for x, y in pairs:
        checked += 1
        hx, hy = h(x), h(y)
        got = h(x & y)
        want = hx & hy
        if got != want:
            return HomCheck(False, checked, "meet", (x, y), got, want)
        got = h(x ^ y)
        want = hx ^ hy
        if got != want:
            return HomCheck(False, checked, "disjoint-sum", (x, y), got, want)
        got = h(x | y)
        want = hx | hy
        if got != want:
            return HomCheck(False, checked, "join", (x, y), got, want)
    return HomCheck(True, checked)
