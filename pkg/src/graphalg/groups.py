"""Computable groups: the integers, cyclic groups, and permutation groups.

Permutations are tuples of images on ``0..m-1`` and multiply left to right:
``mul(a, b)`` applies ``a`` first, so fibres and cosets carry right actions
and ``H g . c(e)`` reads literally.  Cycle notation in files is 1-based.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Any, Iterable

PERM_CAP = 100_000


class GroupError(ValueError):
    pass


# -- permutations ------------------------------------------------------------


def perm_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(b[x] for x in a)


def perm_inv(a: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Parse ``"(1 2 3)(4 5)"`` (1-based points; ``"()"`` is the identity)."""
    s = text.strip()
    if not re.fullmatch(r"(\(\s*[\d\s,]*\))*", s) or not s:
        raise GroupError(f"bad cycle notation {text!r}")
    images = list(range(degree))
    seen: set[int] = set()
    for body in re.findall(r"\(([^)]*)\)", s):
        pts = [int(t) - 1 for t in re.split(r"[\s,]+", body.strip()) if t]
        for p in pts:
            if not 0 <= p < degree:
                raise GroupError(f"point {p + 1} out of range 1..{degree}")
            if p in seen:
                raise GroupError(f"point {p + 1} repeated in {text!r}")
            seen.add(p)
        for x, y in zip(pts, pts[1:] + pts[:1]):
            images[x] = y
    return tuple(images)


def cycles(p: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Nontrivial cycles of ``p`` (0-based), each starting at its least point."""
    out, seen = [], set()
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append(tuple(cyc))
    return out


def format_cycles(p: tuple[int, ...], sep: str = " ") -> str:
    cs = cycles(p)
    if not cs:
        return "()"
    return "".join("(" + sep.join(str(x + 1) for x in c) + ")" for c in cs)


# -- groups ------------------------------------------------------------------


class Group:
    """Interface shared by the three group kinds."""

    finite: bool = True

    def identity(self) -> Any:
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def check(self, a) -> Any:
        """Return ``a`` normalised, or raise if it is not an element."""
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    def format_id(self, a) -> str:
        """Whitespace-free rendering used inside product vertex ids."""
        return self.format(a)

    def elements(self) -> list:
        raise GroupError(f"{self} is infinite")

    def order(self) -> int | float:
        return len(self.elements()) if self.finite else math.inf

    def prod(self, xs: Iterable) -> Any:
        return reduce(self.mul, xs, self.identity())

    def conj(self, g, x):
        """``g x g^-1``."""
        return self.mul(self.mul(g, x), self.inv(g))

    @property
    def abelian(self) -> bool:
        return False

    @property
    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.spec


@dataclass(frozen=True)
class Integers(Group):
    finite = False

    def identity(self):
        return 0

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def check(self, a):
        if isinstance(a, bool) or not isinstance(a, int):
            raise GroupError(f"{a!r} is not an integer")
        return a

    def parse(self, text):
        try:
            return int(text)
        except ValueError:
            raise GroupError(f"bad integer {text!r}") from None

    @property
    def abelian(self):
        return True

    @property
    def spec(self):
        return "Z"


@dataclass(frozen=True)
class Cyclic(Group):
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise GroupError("cyclic group order must be positive")

    def identity(self):
        return 0

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def check(self, a):
        if isinstance(a, bool) or not isinstance(a, int):
            raise GroupError(f"{a!r} is not an integer")
        return a % self.n

    def parse(self, text):
        try:
            return int(text) % self.n
        except ValueError:
            raise GroupError(f"bad integer {text!r}") from None

    def elements(self):
        return list(range(self.n))

    def order(self):
        return self.n

    @property
    def abelian(self):
        return True

    @property
    def spec(self):
        return f"Zn:{self.n}"


@dataclass(frozen=True)
class PermutationGroup(Group):
    """The group generated by ``generators`` acting on ``degree`` points."""

    degree: int
    generators: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.degree < 1:
            raise GroupError("degree must be positive")
        gens = tuple(tuple(g) for g in self.generators)
        for g in gens:
            if sorted(g) != list(range(self.degree)):
                raise GroupError(f"{g} is not a permutation of {self.degree} points")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def symmetric(cls, m: int) -> "PermutationGroup":
        if m == 1:
            return cls(1, ())
        gens = [tuple([1, 0] + list(range(2, m)))]
        if m > 2:
            gens.append(tuple(list(range(1, m)) + [0]))
        return cls(m, tuple(gens))

    def identity(self):
        return tuple(range(self.degree))

    def mul(self, a, b):
        return perm_mul(a, b)

    def inv(self, a):
        return perm_inv(a)

    def check(self, a):
        a = tuple(a)
        if a not in self._element_set:
            raise GroupError(f"{a} is not in {self.spec}")
        return a

    def parse(self, text):
        return self.check(parse_cycles(text, self.degree))

    def format(self, a):
        return format_cycles(a)

    def format_id(self, a):
        return format_cycles(a, sep=",")

    @cached_property
    def _elements(self) -> tuple:
        return tuple(sorted(closure(self, [self.identity()], self.generators)))

    @cached_property
    def _element_set(self) -> frozenset:
        return frozenset(self._elements)

    def elements(self):
        return list(self._elements)

    def order(self):
        return len(self._elements)

    @property
    def spec(self):
        gens = ",".join(format_cycles(g) for g in self.generators)
        return f"perm:{self.degree}:{gens}" if gens else f"perm:{self.degree}"


def closure(group: Group, start: Iterable, gens: Iterable, cap: int = PERM_CAP) -> set:
    """Everything reached from ``start`` by right multiplication with ``gens``."""
    gens = list(gens)
    seen = set(start)
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = group.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise GroupError(f"group exceeds {cap} elements")
        frontier = nxt
    return seen


def parse_group(spec: str) -> Group:
    """``Z`` | ``Zn:<n>`` | ``perm:<m>:<gen>[,<gen>...]`` (gens in cycle notation)."""
    s = spec.strip()
    if s == "Z":
        return Integers()
    m = re.fullmatch(r"Zn:(\d+)", s)
    if m:
        return Cyclic(int(m.group(1)))
    m = re.fullmatch(r"perm:(\d+)(?::(.*))?", s)
    if m:
        degree = int(m.group(1))
        body = (m.group(2) or "").strip()
        gens = [parse_cycles(g, degree) for g in re.findall(r"(?:\([^)]*\))+", body)] if body else []
        return PermutationGroup(degree, tuple(gens))
    raise GroupError(f"bad group spec {spec!r}")


# -- subgroups ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of ``group``.

    Subgroups of the integers are ``d Z`` (``modulus=d``; ``d=0`` is trivial,
    ``d=1`` everything).  Subgroups of finite groups list their members.
    """

    group: Group
    modulus: int | None = None
    members: frozenset | None = field(default=None, repr=False)

    def __post_init__(self):
        if isinstance(self.group, Integers):
            if self.modulus is None or self.modulus < 0:
                raise GroupError("a subgroup of Z needs a modulus d >= 0")
        elif self.members is None:
            raise GroupError("a subgroup of a finite group needs its members")

    @classmethod
    def generated(cls, group: Group, gens: Iterable) -> "Subgroup":
        gens = [group.check(g) for g in gens]
        if isinstance(group, Integers):
            return cls(group, modulus=math.gcd(*gens) if gens else 0)
        return cls(group, members=frozenset(closure(group, [group.identity()], gens)))

    @classmethod
    def trivial(cls, group: Group) -> "Subgroup":
        return cls.generated(group, [])

    @classmethod
    def whole(cls, group: Group) -> "Subgroup":
        if isinstance(group, Integers):
            return cls(group, modulus=1)
        return cls(group, members=frozenset(group.elements()))

    def __contains__(self, x) -> bool:
        if self.modulus is not None:
            return x == 0 if self.modulus == 0 else x % self.modulus == 0
        return x in self.members

    def __eq__(self, other):
        if not isinstance(other, Subgroup) or other.group != self.group:
            return NotImplemented
        return self.modulus == other.modulus and self.members == other.members

    def __hash__(self):
        return hash((self.group, self.modulus, self.members))

    def elements(self) -> list:
        if self.modulus is not None:
            if self.modulus == 0:
                return [0]
            raise GroupError(f"{self.modulus}Z is infinite")
        return sorted(self.members)

    def order(self) -> int | float:
        if self.modulus is not None:
            return 1 if self.modulus == 0 else math.inf
        return len(self.members)

    def index(self) -> int | float:
        if self.modulus is not None:
            return self.modulus if self.modulus else math.inf
        return self.group.order() // len(self.members)

    def coset_rep(self, g):
        """Canonical representative of the right coset ``H g``."""
        if self.modulus is not None:
            return g % self.modulus if self.modulus else g
        return min(self.group.mul(h, g) for h in self.members)

    def cosets(self) -> list:
        """Canonical representatives of all right cosets, in element order."""
        if self.modulus is not None:
            if self.modulus == 0:
                raise GroupError("infinite coset space")
            return list(range(self.modulus))
        reps, covered = [], set()
        for g in self.group.elements():
            if g not in covered:
                reps.append(g)
                covered.update(self.group.mul(h, g) for h in self.members)
        return reps

    def conjugate(self, g) -> "Subgroup":
        """``g H g^-1``."""
        if self.modulus is not None:
            return self
        return Subgroup(self.group, members=frozenset(self.group.conj(g, h) for h in self.members))

    def is_normal(self) -> bool:
        if self.group.abelian:
            return True
        gens = getattr(self.group, "generators", None)
        gens = gens if gens is not None else self.group.elements()
        return all(self.conjugate(g) == self for g in gens)

    def describe(self) -> str:
        if self.modulus is not None:
            return {0: "0", 1: "Z"}.get(self.modulus, f"{self.modulus}Z")
        return "{" + ", ".join(self.group.format(x) for x in self.elements()) + "}"
