"""Brill-Noether combinatorics of a double cover of a cycle of P^1's.

Components ``N_1, ..., N_n`` are arranged cyclically; node ``i`` glues
``P_{i-1}^inf`` to ``P_i^0`` with a nonzero scalar ``lambda_i``.  Sections
on ``N_i`` are modelled by polynomials of degree at most ``k_i``: the value
at ``P_i^0`` is the constant coefficient and the value at ``P_i^inf`` the
top coefficient, each killed by a base point (``a_i^0`` / ``a_i^inf``).

Three independent routes to ``h^0(C, L)``:

* :func:`h0_exact` solves the gluing system for given scalars;
* :func:`h0_generic` does the same over ``Q(lambda_1, ..., lambda_n)``;
* :func:`h0_combinatorial` is the vertex-marking count.

Component indices are 1-based throughout the public API.
"""

from __future__ import annotations

import itertools
import json
import random
import re
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from .intersection import CaseTag
from .kernel import SpaceDescriptor
from .linalg import rank

__all__ = [
    "CyclicCurveConfig",
    "ComponentShape",
    "LineBundleShape",
    "GluingData",
    "StratumDescriptor",
    "ShapeParseError",
    "cyclic_less",
    "gluing_matrix",
    "h0_exact",
    "h0_generic",
    "h0_combinatorial",
    "section_decomposition",
    "random_gluing",
    "special_gluing",
    "is_special",
    "component_options",
    "enumerate_shapes",
    "stratum_dim",
    "martens_max_dim",
    "martens_witness",
    "sing_strata",
    "sing_k_strata",
    "parse_shape",
    "format_shape",
]


# -- data ---------------------------------------------------------------------

@dataclass(frozen=True)
class CyclicCurveConfig:
    d: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if not self.d:
            raise ValueError("need at least one component")
        if any(x < 1 for x in self.d):
            raise ValueError(f"every d_i must be >= 1, got {self.d}")

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def g(self) -> int:
        return sum(self.d)


@dataclass(frozen=True)
class ComponentShape:
    present: bool = True
    k: int = 0
    a0: int = 0
    ainf: int = 0

    def __post_init__(self):
        if self.k < 0 or self.a0 not in (0, 1) or self.ainf not in (0, 1):
            raise ValueError(f"invalid component data {self}")
        if not self.present and (self.k or self.a0 or self.ainf):
            raise ValueError("an absent component carries no k or base points")

    @property
    def used_degree(self) -> int:
        return 2 * self.k + self.a0 + self.ainf if self.present else 0

    @property
    def unmarked(self) -> bool:
        # a single section, nonzero at both nodes
        return self.present and self.k == 0 and self.a0 == 0 and self.ainf == 0

    @property
    def free_at_inf(self) -> bool:
        """Has a section vanishing at P^0 but not at P^inf."""
        if not self.present or self.ainf:
            return False
        return self.a0 == 1 or self.k >= 1

    @property
    def free_at_zero(self) -> bool:
        """Has a section vanishing at P^inf but not at P^0."""
        if not self.present or self.a0:
            return False
        return self.ainf == 1 or self.k >= 1


ABSENT = ComponentShape(present=False)


@dataclass(frozen=True)
class LineBundleShape:
    components: Tuple[ComponentShape, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def of(cls, *comps) -> "LineBundleShape":
        """Build from ``None`` (absent) or ``(k, a0, ainf)`` triples."""
        out = []
        for c in comps:
            if c is None:
                out.append(ABSENT)
            elif isinstance(c, ComponentShape):
                out.append(c)
            else:
                out.append(ComponentShape(True, *c))
        return cls(tuple(out))

    @property
    def n(self) -> int:
        return len(self.components)

    def check(self, cfg: CyclicCurveConfig) -> None:
        if self.n != cfg.n:
            raise ValueError(f"shape has {self.n} components, curve has {cfg.n}")
        for i, (c, d) in enumerate(zip(self.components, cfg.d), start=1):
            if c.used_degree > d:
                raise ValueError(f"component {i}: 2k + a0 + ainf = {c.used_degree} exceeds d_{i} = {d}")

    def free_degrees(self, cfg: CyclicCurveConfig) -> Tuple[int, ...]:
        self.check(cfg)
        return tuple(d - c.used_degree for c, d in zip(self.components, cfg.d))


@dataclass(frozen=True)
class GluingData:
    lambdas: Tuple[Fraction, ...]

    def __post_init__(self):
        lams = tuple(Fraction(x) for x in self.lambdas)
        if any(x == 0 for x in lams):
            raise ValueError("gluing scalars must be nonzero")
        object.__setattr__(self, "lambdas", lams)

    @property
    def product(self) -> Fraction:
        p = Fraction(1)
        for x in self.lambdas:
            p *= x
        return p


@dataclass(frozen=True)
class StratumDescriptor:
    family: str
    indices: Tuple[int, ...]
    dim_picN: int
    exceptional: bool = False
    k: Optional[int] = None
    label: str = ""

    @property
    def dim_picC(self) -> int:
        # preimage under beta^*: one more for the C^* of gluings
        return self.dim_picN + 1

    def to_dict(self) -> dict:
        out = asdict(self)
        out["indices"] = list(self.indices)
        out["dim_picC"] = self.dim_picC
        return out


# -- cyclic order -------------------------------------------------------------

def cyclic_less(i: int, j: int, k: int, n: int,
                left_strict: bool = True, right_strict: bool = True) -> bool:
    """``i (<|<=) j (<|<=) k`` in the cyclic order on ``1..n``.

    The strict relation holds when ``j`` lies strictly inside the arc that
    runs from ``i`` forward to ``k`` (the whole circle when ``i == k``).
    A non-strict side also allows equality on that side, provided the
    outer pair is not collapsed, with ``i <= j <= k`` admitting any
    equality.
    """
    for x in (i, j, k):
        if not 1 <= x <= n:
            raise ValueError(f"index {x} outside 1..{n}")
    s = (j - i) % n
    t = (k - i) % n or n
    strict = 0 < s < t
    if strict:
        return True
    if left_strict and right_strict:
        return False
    if not left_strict and not right_strict:
        return i == j or j == k
    if not left_strict:
        return i == j and j != k
    return j == k and i != j


def _arc(i: int, j: int, n: int) -> int:
    return (j - i) % n


# -- linear system ------------------------------------------------------------

def _columns(shape: LineBundleShape) -> List[Optional[Tuple[int, int]]]:
    """Column offsets (first, last) of each component's coefficients."""
    cols, pos = [], 0
    for c in shape.components:
        if c.present:
            cols.append((pos, pos + c.k))
            pos += c.k + 1
        else:
            cols.append(None)
    return cols


def gluing_matrix(shape: LineBundleShape, lambdas: Sequence, one=1, zero=0) -> List[list]:
    """Row ``i`` encodes ``lambda_i ev^inf_{i-1}(s_{i-1}) - ev^0_i(s_i)``.

    ``lambdas`` may be numbers or ring elements; a pair ``(p, q)`` means
    ``p/q`` and is entered as ``p ev^inf - q ev^0`` to stay fraction free.
    """
    n = shape.n
    cols = _columns(shape)
    width = sum(c.k + 1 for c in shape.components if c.present)
    rows = []
    for i in range(n):
        row = [zero] * width
        prev, cur = shape.components[i - 1], shape.components[i]
        lam = lambdas[i]
        p, q = lam if isinstance(lam, tuple) else (lam, one)
        if cols[i - 1] is not None and not prev.ainf:
            top = cols[i - 1][1]
            row[top] = row[top] + p
        if cols[i] is not None and not cur.a0:
            bottom = cols[i][0]
            row[bottom] = row[bottom] - q
        rows.append(row)
    return rows


def _unknowns(shape: LineBundleShape) -> int:
    return sum(c.k + 1 for c in shape.components if c.present)


def h0_exact(cfg: CyclicCurveConfig, shape: LineBundleShape, glue: GluingData) -> int:
    """Dimension of the sections of ``L`` for explicit gluing scalars."""
    shape.check(cfg)
    if len(glue.lambdas) != cfg.n:
        raise ValueError(f"need {cfg.n} gluing scalars, got {len(glue.lambdas)}")
    lams = [(x.numerator, x.denominator) for x in glue.lambdas]
    return _unknowns(shape) - rank(gluing_matrix(shape, lams))


def _lambda_space(n: int) -> SpaceDescriptor:
    return SpaceDescriptor.of([(f"lambda{i}", None) for i in range(1, n + 1)])


def h0_generic(cfg: CyclicCurveConfig, shape: LineBundleShape) -> int:
    """Dimension for independent transcendental gluing scalars."""
    shape.check(cfg)
    R = _lambda_space(cfg.n)
    lams = [R.gen(f"lambda{i}") for i in range(1, cfg.n + 1)]
    rows = gluing_matrix(shape, lams, one=R.one(), zero=R.zero())
    return _unknowns(shape) - rank(rows)


def h0_combinatorial(cfg: CyclicCurveConfig, shape: LineBundleShape,
                     special_cycle: bool = False) -> int:
    """Vertex-marking count of sections.

    Components that are absent or carry any marking cut the cycle.  Between
    two consecutive cuts ``i`` and ``j`` (possibly ``i == j`` around the
    whole cycle) a chain of unmarked components carries one extra section
    when ``i`` has a section alive only at its infinity node and ``j`` one
    alive only at its zero node.  Without any cut, the whole cycle carries
    one section exactly for special gluing.
    """
    shape.check(cfg)
    comps = shape.components
    total = sum(max(0, c.k + c.a0 + c.ainf - 1) for c in comps if c.present)
    cuts = [i for i, c in enumerate(comps) if not c.unmarked]
    if not cuts:
        return total + (1 if special_cycle else 0)
    for pos, i in enumerate(cuts):
        j = cuts[(pos + 1) % len(cuts)]
        if comps[i].free_at_inf and comps[j].free_at_zero:
            total += 1
    return total


def section_decomposition(cfg: CyclicCurveConfig, shape: LineBundleShape) -> dict:
    """Where the combinatorial sections come from (1-based indices)."""
    shape.check(cfg)
    comps = shape.components
    single = {i + 1: max(0, c.k + c.a0 + c.ainf - 1) for i, c in enumerate(comps) if c.present}
    cuts = [i for i, c in enumerate(comps) if not c.unmarked]
    segments = []
    for pos, i in enumerate(cuts):
        j = cuts[(pos + 1) % len(cuts)]
        if comps[i].free_at_inf and comps[j].free_at_zero:
            segments.append((i + 1, j + 1))
    return {
        "single": {i: v for i, v in single.items() if v},
        "segments": segments,
        "whole_cycle": not cuts,
    }


# -- gluings ------------------------------------------------------------------

def is_special(glue: GluingData) -> bool:
    """Whole-cycle condition: the transfer ratios multiply to one."""
    return glue.product == 1


def random_gluing(n: int, rng: random.Random, height: int = 97) -> GluingData:
    lams = []
    for _ in range(n):
        p = rng.randint(1, height) * rng.choice((1, -1))
        q = rng.randint(1, height)
        lams.append(Fraction(p, q))
    return GluingData(tuple(lams))


def special_gluing(n: int, rng: Optional[random.Random] = None) -> GluingData:
    """A gluing with product one (random unless ``rng`` is None)."""
    if rng is None:
        return GluingData((Fraction(1),) * n)
    lams = [random_gluing(1, rng).lambdas[0] for _ in range(n - 1)]
    prod = Fraction(1)
    for x in lams:
        prod *= x
    lams.append(1 / prod)
    return GluingData(tuple(lams))


# -- enumeration and dimensions -----------------------------------------------

def component_options(d: int, include_absent: bool = True) -> List[ComponentShape]:
    out = [ABSENT] if include_absent else []
    for k in range(d // 2 + 1):
        for a0 in (0, 1):
            for ainf in (0, 1):
                if 2 * k + a0 + ainf <= d:
                    out.append(ComponentShape(True, k, a0, ainf))
    return out


def enumerate_shapes(cfg: CyclicCurveConfig, include_absent: bool = True) -> Iterator[LineBundleShape]:
    opts = [component_options(d, include_absent) for d in cfg.d]
    for combo in itertools.product(*opts):
        yield LineBundleShape(combo)


def stratum_dim(cfg: CyclicCurveConfig, shape: LineBundleShape, needs_special_gluing: bool) -> int:
    """Dimension inside ``Pic^d(C)``: free divisor moduli plus the gluing fiber."""
    free = shape.free_degrees(cfg)
    if any(f < 0 for f in free):
        raise ValueError("negative free degree")
    body = sum(f for f, c in zip(free, shape.components) if c.present)
    return body + (0 if needs_special_gluing else 1)


def _strata(cfg: CyclicCurveConfig):
    for shape in enumerate_shapes(cfg):
        generic = h0_combinatorial(cfg, shape, False)
        yield shape, False, generic
        special = h0_combinatorial(cfg, shape, True)
        if special > generic:
            yield shape, True, special


def martens_witness(cfg: CyclicCurveConfig, r: int):
    """``(dim, shape, needs_special)`` of a largest stratum with ``h^0 >= r+1``.

    Returns ``(-1, None, None)`` when ``W^r`` is empty.
    """
    if r < 1 or 2 * r > cfg.g:
        raise ValueError(f"need 0 < 2r <= {cfg.g}, got r={r}")
    best = (-1, None, None)
    for shape, special, h0 in _strata(cfg):
        if h0 >= r + 1:
            dim = stratum_dim(cfg, shape, special)
            if dim > best[0]:
                best = (dim, shape, special)
    return best


def martens_max_dim(cfg: CyclicCurveConfig, r: int) -> int:
    """``dim W^r_d(C)``, with ``-1`` standing for the empty set."""
    return martens_witness(cfg, r)[0]


# -- singular locus -----------------------------------------------------------

def _residual_ok(d: Sequence[int], uses: Sequence[int]) -> bool:
    need = [0] * len(d)
    for i in uses:
        need[i - 1] += 1
    return all(x <= y for x, y in zip(need, d))


def sing_strata(cfg: CyclicCurveConfig) -> List[StratumDescriptor]:
    """Families A, B, B', C, C' of the singular locus at the ``Pic(N)`` level.

    A tuple is kept when the residual multidegree is nonnegative; every
    family then has dimension ``g - 4``.
    """
    n, d = cfg.n, cfg.d
    dim = cfg.g - 4
    idx = range(1, n + 1)
    out: List[StratumDescriptor] = []

    def add(family, indices, uses):
        if dim >= 0 and _residual_ok(d, uses):
            out.append(StratumDescriptor(family, tuple(indices), dim, family in ("B'", "C'")))

    for i in idx:
        for j in idx:
            if i <= j:
                add("A", (i, j), (i, i, j, j))
    for i, j, k in itertools.product(idx, repeat=3):
        if cyclic_less(i, j, k, n, False, False):
            add("B", (i, j, k), (i, j, j, k))
        if cyclic_less(i, j, k, n, True, True):
            add("B'", (i, j, k), (i, j, j, k))
    for i, j, k, l in itertools.product(idx, repeat=4):
        sj, sk, sl = _arc(i, j, n), _arc(i, k, n), _arc(i, l, n)
        if 0 <= sj < sk <= sl:
            add("C", (i, j, k, l), (i, j, k, l))
        if 0 < sj <= sk < sl:
            add("C'", (i, j, k, l), (i, j, k, l))
    return out


def sing_k_strata(g: int, case: CaseTag, k: int) -> List[StratumDescriptor]:
    """Components of ``Sing_k`` for ``d = (g)`` and ``d = (1, g-1)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    m = g - 2 * k
    if m < 0:
        return []
    if case is CaseTag.D_G:
        return [
            StratumDescriptor("A_k", (1,), m, False, k, "k delta + N_{g-2k}"),
            StratumDescriptor("B_k", (1,), m, False, k, "O(P0+Pinf) + (k-1) delta + N_{g-2k}"),
        ]
    out = []
    if m - 1 >= 0:
        out.append(StratumDescriptor("A_k", (1, 2), m, False, k,
                                     "Pic1(N1) + k delta_2 + N_{2,g-2k-1}"))
        out.append(StratumDescriptor("B_k", (1, 2), m, False, k,
                                     "Pic1(N1) + O(P2^0+P2^inf) + (k-1) delta_2 + N_{2,g-2k-1}"))
    out.append(StratumDescriptor("B_k", (1, 2), m, False, k,
                                 "O(P1^0+P2^inf) + (k-1) delta_2 + N_{2,g-2k}"))
    out.append(StratumDescriptor("B_k", (2, 1), m, False, k,
                                 "O(P1^inf+P2^0) + (k-1) delta_2 + N_{2,g-2k}"))
    return out


def strata_json(strata: Sequence[StratumDescriptor]) -> str:
    return json.dumps([s.to_dict() for s in strata])


# -- shape text ---------------------------------------------------------------

class ShapeParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


_COMP_RE = re.compile(r"comp(\d+)\s*:\s*(.*)$", re.S)


def parse_shape(text: str) -> Tuple[CyclicCurveConfig, LineBundleShape]:
    """Parse ``"n=2; d=1,4; comp1: k=0,a0=1,ainf=0; comp2: absent"``.

    Components not mentioned are absent.
    """
    n = None
    d = None
    comps = {}
    pos = 0
    for chunk in text.split(";"):
        start = pos + len(chunk) - len(chunk.lstrip())
        pos += len(chunk) + 1
        item = chunk.strip()
        if not item:
            continue
        if item.startswith("n="):
            try:
                n = int(item[2:])
            except ValueError:
                raise ShapeParseError(f"bad component count {item[2:]!r}", start + 2) from None
            continue
        if item.startswith("d="):
            try:
                d = tuple(int(x) for x in item[2:].split(","))
            except ValueError:
                raise ShapeParseError(f"bad multidegree {item[2:]!r}", start + 2) from None
            continue
        m = _COMP_RE.match(item)
        if not m:
            raise ShapeParseError(f"unexpected field {item!r}", start)
        idx = int(m.group(1))
        body = m.group(2).strip()
        if body == "absent":
            comps[idx] = ABSENT
            continue
        fields = {"k": 0, "a0": 0, "ainf": 0}
        for part in body.split(","):
            key, sep, val = part.partition("=")
            key = key.strip()
            if not sep or key not in fields:
                raise ShapeParseError(f"bad component field {part.strip()!r}", start + item.find(part))
            try:
                fields[key] = int(val)
            except ValueError:
                raise ShapeParseError(f"bad value {val.strip()!r}", start + item.find(part)) from None
        try:
            comps[idx] = ComponentShape(True, fields["k"], fields["a0"], fields["ainf"])
        except ValueError as exc:
            raise ShapeParseError(str(exc), start) from None
    if d is None:
        raise ShapeParseError("missing d=", len(text))
    if n is None:
        n = len(d)
    if n != len(d):
        raise ShapeParseError(f"n={n} but d has {len(d)} entries", 0)
    bad = [i for i in comps if not 1 <= i <= n]
    if bad:
        raise ShapeParseError(f"component index {bad[0]} outside 1..{n}", text.find(f"comp{bad[0]}"))
    cfg = CyclicCurveConfig(d)
    shape = LineBundleShape(tuple(comps.get(i, ABSENT) for i in range(1, n + 1)))
    shape.check(cfg)
    return cfg, shape


def format_shape(cfg: CyclicCurveConfig, shape: LineBundleShape) -> str:
    parts = [f"n={cfg.n}", "d=" + ",".join(map(str, cfg.d))]
    for i, c in enumerate(shape.components, start=1):
        if c.present:
            parts.append(f"comp{i}: k={c.k},a0={c.a0},ainf={c.ainf}")
        else:
            parts.append(f"comp{i}: absent")
    return "; ".join(parts)
