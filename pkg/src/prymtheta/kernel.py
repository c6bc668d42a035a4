"""Exact truncated polynomial rings over the rationals.

Every cohomology class handled by the package is a :class:`ClassExpr`: a
sparse map from exponent vectors to :class:`fractions.Fraction`
coefficients, living in a :class:`SpaceDescriptor`.  The space fixes the
generator order and the truncation rules:

* a generator with truncation exponent ``t`` satisfies ``y**(t+1) == 0``;
* a monomial whose total degree exceeds ``total_dimension`` is zero.

All generators have degree one (they are classes in ``H^2``), so the total
degree of a monomial is the sum of its exponents.

    >>> S = SpaceDescriptor.of([("theta1", 3), ("h'", 1)], total_dimension=7)
    >>> t, hp = S.gen("theta1"), S.gen("h'")
    >>> print((t + hp) ** 2)
    2/1 * theta1 h' + 1/1 * theta1^2
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]

__all__ = [
    "Generator",
    "SpaceDescriptor",
    "ClassExpr",
    "SpaceMismatchError",
    "binomial",
    "class_add",
    "class_mul",
    "class_substitute",
    "class_coefficient",
]


class SpaceMismatchError(ValueError):
    """Raised when two classes from different spaces are combined."""


def binomial(n: int, k: int) -> Fraction:
    """Exact binomial coefficient ``C(n, k)``.

    Zero for ``k < 0`` and for ``k > n >= 0``.  For negative ``n`` the
    generalized falling-factorial definition is used.
    """
    if k < 0:
        return Fraction(0)
    if n >= 0:
        if k > n:
            return Fraction(0)
        return Fraction(math.comb(n, k))
    num = 1
    for i in range(k):
        num *= n - i
    return Fraction(num, math.factorial(k))


@dataclass(frozen=True)
class Generator:
    name: str
    truncation: Optional[int] = None  # None means unbounded

    def __post_init__(self):
        if self.truncation is not None and self.truncation < 0:
            raise ValueError(f"negative truncation exponent for {self.name}")


@dataclass(frozen=True)
class SpaceDescriptor:
    generators: Tuple[Generator, ...]
    total_dimension: Optional[int] = None

    def __post_init__(self):
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate generator names in {names}")
        if self.total_dimension is not None and self.total_dimension < 0:
            raise ValueError("total_dimension must be nonnegative")

    @classmethod
    def of(cls, gens: Iterable[Union[Generator, Tuple[str, Optional[int]], str]],
           total_dimension: Optional[int] = None) -> "SpaceDescriptor":
        out = []
        for g in gens:
            if isinstance(g, Generator):
                out.append(g)
            elif isinstance(g, str):
                out.append(Generator(g))
            else:
                out.append(Generator(*g))
        return cls(tuple(out), total_dimension)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"generator {name!r} not in space {self.names}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def generator(self, name: str) -> Generator:
        return self.generators[self.index(name)]

    def admits(self, exps: Exponent) -> bool:
        """True when the monomial ``exps`` is not killed by truncation."""
        total = 0
        for e, g in zip(exps, self.generators):
            if g.truncation is not None and e > g.truncation:
                return False
            total += e
        return self.total_dimension is None or total <= self.total_dimension

    def zero(self) -> "ClassExpr":
        return ClassExpr(self, {})

    def one(self) -> "ClassExpr":
        return self.scalar(1)

    def scalar(self, c: Scalar) -> "ClassExpr":
        return ClassExpr(self, {(0,) * self.ngens: Fraction(c)})

    def gen(self, name: str) -> "ClassExpr":
        return self.monomial({name: 1})

    def monomial(self, powers: Mapping[str, int], coeff: Scalar = 1) -> "ClassExpr":
        exps = [0] * self.ngens
        for name, e in powers.items():
            exps[self.index(name)] += e
        return ClassExpr(self, {tuple(exps): Fraction(coeff)})

    def exponent(self, powers: Mapping[str, int]) -> Exponent:
        exps = [0] * self.ngens
        for name, e in powers.items():
            exps[self.index(name)] = e
        return tuple(exps)

    def with_truncation(self, name: str, truncation: Optional[int]) -> "SpaceDescriptor":
        gens = tuple(Generator(g.name, truncation) if g.name == name else g
                     for g in self.generators)
        return SpaceDescriptor(gens, self.total_dimension)


class ClassExpr:
    """An element of a truncated polynomial ring with rational coefficients.

    Instances are immutable.  Stored coefficients are never zero and every
    stored exponent vector is admitted by the space.
    """

    __slots__ = ("space", "_terms", "_hash")

    def __init__(self, space: SpaceDescriptor, terms: Mapping[Exponent, Scalar]):
        clean: Dict[Exponent, Fraction] = {}
        n = space.ngens
        for exps, c in terms.items():
            if len(exps) != n:
                raise ValueError(f"exponent vector {exps} has wrong length for {space.names}")
            if c and space.admits(exps):
                clean[tuple(exps)] = clean.get(tuple(exps), Fraction(0)) + Fraction(c)
        self.space = space
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, space: SpaceDescriptor, terms: Dict[Exponent, Fraction]) -> "ClassExpr":
        # terms already pruned and admitted
        obj = cls.__new__(cls)
        obj.space = space
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, monomial: Union[Exponent, Mapping[str, int]]) -> Fraction:
        if isinstance(monomial, Mapping):
            monomial = self.space.exponent(monomial)
        if len(monomial) != self.space.ngens:
            raise ValueError("monomial does not match the space")
        return self._terms.get(tuple(monomial), Fraction(0))

    def degrees(self) -> set:
        return {sum(e) for e in self._terms}

    def is_homogeneous(self, degree: Optional[int] = None) -> bool:
        degs = self.degrees()
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def exponent_of(self, name: str) -> set:
        i = self.space.index(name)
        return {e[i] for e in self._terms}

    def slice(self, name: str, power: int) -> "ClassExpr":
        """The part with ``name**power``, with that factor removed."""
        i = self.space.index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i] == power:
                out[e[:i] + (0,) + e[i + 1:]] = c
        return ClassExpr._raw(self.space, out)

    def homogeneous_part(self, degree: int, names: Optional[Sequence[str]] = None) -> "ClassExpr":
        """Terms whose degree in ``names`` (default: all generators) is ``degree``."""
        idx = range(self.space.ngens) if names is None else [self.space.index(n) for n in names]
        out = {e: c for e, c in self._terms.items() if sum(e[i] for i in idx) == degree}
        return ClassExpr._raw(self.space, out)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "ClassExpr") -> None:
        if self.space != other.space:
            raise SpaceMismatchError(f"space mismatch: {self.space.names} vs {other.space.names}")

    def _coerce(self, other) -> "ClassExpr":
        if isinstance(other, ClassExpr):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.space.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return ClassExpr._raw(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return ClassExpr._raw(self.space, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "ClassExpr":
        c = Fraction(c)
        if not c:
            return self.space.zero()
        return ClassExpr._raw(self.space, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        space = self.space
        gens = space.generators
        caps = [g.truncation for g in gens]
        top = space.total_dimension
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            for e2, c2 in other._terms.items():
                if top is not None and d1 + sum(e2) > top:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                if any(cap is not None and x > cap for x, cap in zip(e, caps)):
                    continue
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return ClassExpr._raw(space, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ClassExpr":
        if n < 0:
            raise ValueError("negative powers are not defined")
        result = self.space.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c: Scalar) -> "ClassExpr":
        return self.scale(Fraction(1) / Fraction(c))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.space.scalar(other)
        if not isinstance(other, ClassExpr):
            return NotImplemented
        return self.space == other.space and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self._terms.items())))
        return self._hash

    def truncate(self) -> "ClassExpr":
        # idempotent: stored terms are already admitted
        return ClassExpr(self.space, self._terms)

    def map_coefficients(self, f) -> "ClassExpr":
        return ClassExpr(self.space, {e: f(c) for e, c in self._terms.items()})

    # -- text -------------------------------------------------------------

    def monomial_text(self, exps: Exponent) -> str:
        parts = []
        for name, e in zip(self.space.names, exps):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return " ".join(parts) if parts else "1"

    def to_text(self) -> str:
        """Canonical form: lexicographically sorted ``p/q * monomial`` terms."""
        if not self._terms:
            return "0"
        return " + ".join(f"{c.numerator}/{c.denominator} * {self.monomial_text(e)}"
                          for e, c in sorted(self._terms.items()))

    __str__ = to_text

    def __repr__(self):
        return f"ClassExpr({self.to_text()!r}, space={self.space.names})"


def class_add(a: ClassExpr, b: ClassExpr) -> ClassExpr:
    a._check(b)
    return a + b


def class_mul(a: ClassExpr, b: ClassExpr) -> ClassExpr:
    a._check(b)
    return a * b


def class_coefficient(e: ClassExpr, monomial) -> Fraction:
    return e.coefficient(monomial)


def class_substitute(e: ClassExpr, rules: Mapping[str, ClassExpr],
                     target: SpaceDescriptor) -> ClassExpr:
    """Image of ``e`` under the ring map defined by ``rules``.

    Generators without a rule are sent to the generator of the same name in
    ``target``.  Every rule value must live in ``target``.
    """
    src = e.space
    images = []
    for name in src.names:
        if name in rules:
            img = rules[name]
            if isinstance(img, (int, Fraction)):
                img = target.scalar(img)
            if img.space != target:
                raise SpaceMismatchError(f"rule for {name!r} does not live in the target space")
            images.append(img)
        elif name in target:
            images.append(target.gen(name))
        else:
            images.append(None)

    used = set()
    for exps in e._terms:
        used.update(i for i, x in enumerate(exps) if x)
    for i in used:
        if images[i] is None:
            raise ValueError(f"generator {src.names[i]!r} has no rule and is absent from the target")

    powers: Dict[Tuple[int, int], ClassExpr] = {}

    def power(i: int, k: int) -> ClassExpr:
        key = (i, k)
        if key not in powers:
            powers[key] = images[i] if k == 1 else power(i, k - 1) * images[i]
        return powers[key]

    result = target.zero()
    for exps, c in e._terms.items():
        term = target.scalar(c)
        for i, k in enumerate(exps):
            if k:
                term = term * power(i, k)
                if not term:
                    break
        result = result + term
    return result
