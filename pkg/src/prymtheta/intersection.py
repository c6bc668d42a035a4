"""Chern-Mather classes of theta divisors of cyclic bielliptic curves.

The derivation runs entirely in truncated cohomology rings:

1. the conormal class of the symmetric product ``N_d x |omega_C|`` is
   ``sum_r h^r c_{g-r}(E_K)`` with evaluation-bundle Chern classes
   ``c_r(E_{K,i}) = sum_k C(r,k) x_i^k theta_i^(r-k)/(r-k)!``;
2. it is pulled back to the blowup ``~N_d`` by multiplying with
   ``x_1 + ... + x_n + h'``;
3. the blowup-center contribution is subtracted;
4. the Abel-Jacobi pushforward sends ``x_i^a`` to ``theta_i^a / a!``.

The result is compared with the closed form in the ring where ``h'^2 = 0``,
then restricted to the Prym variety (``h' -> 0``, total polarization
``-> xi``, ``h^j -> h^(j-1)``) to read off the Chern-Mather coefficients.

Space bookkeeping per stage (``g`` is the genus of ``N``):

==========  ==========================================================
stage       generators (truncation exponent)
==========  ==========================================================
symmetric   D_G: x1 (g), theta1 (g), h (g), h' (1)
            D_1G: x1 (1), theta1 (1), x2 (g-1), theta2 (g-1), h (g), h' (1)
picbar      theta_i (d_i), h (g), h' (1)
prym        xi (g), h (g-1)
==========  ==========================================================
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .kernel import ClassExpr, SpaceDescriptor, binomial, class_substitute

__all__ = [
    "CaseTag",
    "PipelineReport",
    "multidegree",
    "symmetric_space",
    "picbar_space",
    "prym_space",
    "eval_bundle_chern",
    "abel_pushforward",
    "conormal_class_symmetric",
    "tnd_pullback",
    "center_correction",
    "closed_form_theta",
    "lemma_form_theta",
    "chern_mather_theta_pipeline",
    "restrict_to_prym",
    "chern_mather_xi",
    "mather_closed_form",
    "gauss_degree",
]


class CaseTag(enum.Enum):
    D_G = "g"
    D_1G = "1g-1"

    @classmethod
    def parse(cls, text: str) -> "CaseTag":
        key = text.strip().lower().replace("(", "").replace(")", "").replace(",", "")
        aliases = {"g": cls.D_G, "d_g": cls.D_G, "dg": cls.D_G,
                   "1g-1": cls.D_1G, "d_1g": cls.D_1G, "1g": cls.D_1G, "d1g": cls.D_1G}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown case {text!r}; expected 'g' or '1g-1'") from None


def _check_genus(g: int) -> None:
    if not isinstance(g, int) or g < 3:
        raise ValueError(f"genus must be an integer >= 3, got {g!r}")


def multidegree(g: int, case: CaseTag) -> Tuple[int, ...]:
    return (g,) if case is CaseTag.D_G else (1, g - 1)


def symmetric_space(g: int, case: CaseTag) -> SpaceDescriptor:
    """``P_N x |omega_C|``: symmetric product classes, ``h`` and ``h'``."""
    gens = []
    for i, d in enumerate(multidegree(g, case), start=1):
        gens += [(f"x{i}", d), (f"theta{i}", d)]
    gens += [("h", g), ("h'", 1)]
    return SpaceDescriptor.of(gens, total_dimension=2 * g + 1)


def picbar_space(g: int, case: CaseTag) -> SpaceDescriptor:
    """``Pic-bar x |omega_C|``: the P^1-bundle over Pic(N) times |omega_C|."""
    gens = [(f"theta{i}", d) for i, d in enumerate(multidegree(g, case), start=1)]
    gens += [("h", g), ("h'", 1)]
    return SpaceDescriptor.of(gens, total_dimension=2 * g + 1)


def prym_space(g: int) -> SpaceDescriptor:
    """``P x |omega_N|`` with ``|omega_N| = P^(g-1)``."""
    return SpaceDescriptor.of([("xi", g), ("h", g - 1)], total_dimension=2 * g - 1)


def eval_bundle_chern(i: int, r: int, space: SpaceDescriptor) -> ClassExpr:
    """``c_r`` of the evaluation bundle on the ``i``-th symmetric product."""
    x, t = f"x{i}", f"theta{i}"
    if x not in space or t not in space:
        raise KeyError(f"space {space.names} lacks {x} or {t}")
    if r < 0:
        return space.zero()
    out = space.zero()
    for k in range(r + 1):
        coeff = binomial(r, k) / math.factorial(r - k)
        out = out + space.monomial({x: k, t: r - k}, coeff)
    return out


_PUSHABLE = ("x", "theta")


def abel_pushforward(e: ClassExpr, dims: Sequence[int]) -> ClassExpr:
    """Pushforward along ``N_{d_1} x ... x N_{d_n} -> Pic^d(N)``.

    Each ``d_i`` must equal the genus of ``N_i`` (birational Abel-Jacobi
    map).  By Poincare's formula ``x_i^a`` goes to ``theta_i^a / a!``;
    ``theta_i``, ``h`` and ``h'`` are carried along (projection formula).
    """
    src = e.space
    n = len(dims)
    allowed = {f"x{i}" for i in range(1, n + 1)} | {f"theta{i}" for i in range(1, n + 1)}
    allowed |= {"h", "h'"}
    for name in src.names:
        if name not in allowed:
            raise ValueError(f"no pushforward rule for generator {name!r}")

    gens = [(f"theta{i}", d) for i, d in enumerate(dims, start=1)]
    gens += [(g.name, g.truncation) for g in src.generators if g.name in ("h", "h'")]
    total = None
    if src.total_dimension is not None:
        # the fibers of P_N x |omega_C| -> Pic-bar x |omega_C| have dimension 0
        total = src.total_dimension
    target = SpaceDescriptor.of(gens, total_dimension=total)

    x_idx = [src.index(f"x{i}") if f"x{i}" in src else None for i in range(1, n + 1)]
    t_idx = [src.index(f"theta{i}") if f"theta{i}" in src else None for i in range(1, n + 1)]
    carry = [(src.index(nm), target.index(nm)) for nm in ("h", "h'") if nm in src]

    out: Dict[Tuple[int, ...], Fraction] = {}
    for exps, c in e.items():
        new = [0] * target.ngens
        coeff = c
        for i in range(n):
            a = exps[x_idx[i]] if x_idx[i] is not None else 0
            b = exps[t_idx[i]] if t_idx[i] is not None else 0
            new[i] = a + b
            coeff /= math.factorial(a)
        for si, ti in carry:
            new[ti] = exps[si]
        key = tuple(new)
        out[key] = out.get(key, Fraction(0)) + coeff
    return ClassExpr(target, out)


def _hsum(space: SpaceDescriptor, g: int, shift: int, component: int) -> ClassExpr:
    """``sum_{r=0}^{g} h^r c_{g-r-shift}(E_{K,component})``."""
    h = space.gen("h")
    out = space.zero()
    for r in range(g + 1):
        out = out + h ** r * eval_bundle_chern(component, g - r - shift, space)
    return out


def conormal_class_symmetric(g: int, case: CaseTag) -> ClassExpr:
    """Class of the conormal variety in ``N_d x |omega_C|``.

    For ``D_1G`` the elliptic factor contributes ``c(E_{K,1}) = 1 + 2 x1``
    (``theta1`` identified with ``x1``), so
    ``c_m = 2 x1 c_{m-1}(E_{K,2}) + c_m(E_{K,2})``.
    """
    _check_genus(g)
    S = symmetric_space(g, case)
    if case is CaseTag.D_G:
        return _hsum(S, g, 0, 1)
    x1 = S.gen("x1")
    return 2 * x1 * _hsum(S, g, 1, 2) + _hsum(S, g, 0, 2)


def tnd_pullback(e: ClassExpr, case: CaseTag) -> ClassExpr:
    """Multiply by the class ``x_1 + ... + x_n + h'`` of the blowup."""
    S = e.space
    n = 1 if case is CaseTag.D_G else 2
    cls = S.gen("h'")
    for i in range(1, n + 1):
        cls = cls + S.gen(f"x{i}")
    return cls * e


def center_correction(g: int, case: CaseTag) -> ClassExpr:
    """Contribution of the blowup center, already reindexed in ``h``."""
    _check_genus(g)
    S = symmetric_space(g, case)
    if case is CaseTag.D_G:
        return S.gen("x1") ** 2 * _hsum(S, g, 1, 1)
    x1, x2 = S.gen("x1"), S.gen("x2")
    tail = _hsum(S, g, 1, 2)
    return 2 * x1 * x2 * tail + x2 ** 2 * tail


def closed_form_theta(g: int, case: CaseTag) -> ClassExpr:
    """Closed form of ``(alpha x Id)_*[P Lambda_~N]`` on ``Pic-bar x |omega_C|``.

    ``D_G``:  ``sum_r h^r (theta+h')^(m+1)/(m+1)! C(2m, m)`` with ``m = g-r``.

    ``D_1G``: the same in ``theta1 + theta2 + h'`` minus
    ``sum_r 2 h^r h' theta1 theta2^(m-1)/(m-1)! C(2m-2, m)``.
    Both are taken modulo ``h'^2``.
    """
    _check_genus(g)
    T = picbar_space(g, case)
    h, hp = T.gen("h"), T.gen("h'")
    theta = T.gen("theta1") if case is CaseTag.D_G else T.gen("theta1") + T.gen("theta2")
    out = T.zero()
    for r in range(g + 1):
        m = g - r
        out = out + h ** r * (theta + hp) ** (m + 1) * (binomial(2 * m, m) / math.factorial(m + 1))
    if case is CaseTag.D_1G:
        t1, t2 = T.gen("theta1"), T.gen("theta2")
        for r in range(g):
            m = g - r
            c = 2 * binomial(2 * m - 2, m) / math.factorial(m - 1)
            out = out - h ** r * hp * t1 * t2 ** (m - 1) * c
    return out


def lemma_form_theta(g: int, case: CaseTag) -> ClassExpr:
    """``sum_r h^(r+1) theta^(g-r)/(g-r)! C(2g-2r-2, g-r-1)`` (no ``h'``)."""
    _check_genus(g)
    T = picbar_space(g, case)
    h = T.gen("h")
    theta = T.gen("theta1") if case is CaseTag.D_G else T.gen("theta1") + T.gen("theta2")
    out = T.zero()
    for r in range(g + 1):
        c = binomial(2 * g - 2 * r - 2, g - r - 1) / math.factorial(g - r)
        out = out + h ** (r + 1) * theta ** (g - r) * c
    return out


def mather_closed_form(g: int, r: int) -> Fraction:
    """``C(2g-2r-2, g-r-1) / (g-r)!``."""
    return binomial(2 * g - 2 * r - 2, g - r - 1) / math.factorial(g - r)


@dataclass(frozen=True)
class PipelineReport:
    g: int
    case: CaseTag
    derived_class: ClassExpr
    closed_form: ClassExpr
    match: bool
    mather_coefficients: List[Tuple[int, Fraction]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "case": self.case.value,
            "match": self.match,
            "mather": [
                {"r": r, "coefficient": f"{c.numerator}/{c.denominator}",
                 "binomial_check": c == mather_closed_form(self.g, r)}
                for r, c in self.mather_coefficients
            ],
            "derived_class": self.derived_class.to_text(),
            "closed_form": self.closed_form.to_text(),
            "comparison": "modulo h'^2",
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def derive_theta_class(g: int, case: CaseTag) -> ClassExpr:
    """Operator chain: pushforward(pullback(conormal) - center correction)."""
    _check_genus(g)
    upstairs = tnd_pullback(conormal_class_symmetric(g, case), case) - center_correction(g, case)
    return abel_pushforward(upstairs, multidegree(g, case))


def chern_mather_theta_pipeline(g: int, case: CaseTag) -> PipelineReport:
    derived = derive_theta_class(g, case)
    closed = closed_form_theta(g, case)
    match = (derived - closed).is_zero()
    coeffs = _mather_from_restriction(restrict_to_prym(derived, g), g)
    return PipelineReport(g, case, derived, closed, match, coeffs)


class ReductionError(ArithmeticError):
    """The h'-free part is not a polynomial in h and the total polarization."""


def restrict_to_prym(e: ClassExpr, g: int) -> ClassExpr:
    """Restrict a ``Pic-bar x |omega_C|`` class to ``P x |omega_N|``.

    Sets ``h' = 0``, rewrites the remainder in ``h`` and the total
    polarization ``theta1 + ... + theta_n``, sends it to ``xi`` and pushes
    ``h^j`` to ``h^(j-1)`` (``h^0`` terms vanish).
    """
    src = e.space
    thetas = [nm for nm in src.names if nm.startswith("theta")]
    free = class_substitute(e, {"h'": src.zero()}, src) if "h'" in src else e
    total = src.zero()
    for nm in thetas:
        total = total + src.gen(nm)

    P = prym_space(g)
    xi, h_n = P.gen("xi"), P.gen("h")
    out = P.zero()
    for j in sorted(free.exponent_of("h")):
        layer = free.slice("h", j)
        for k in sorted(layer.degrees()):
            part = layer.homogeneous_part(k, thetas)
            power = total ** k
            if not power:
                raise ReductionError(f"h^{j} layer has a nonzero degree-{k} part "
                                     f"but (sum theta)^{k} vanishes")
            lead = min(exps for exps, _ in power.items())
            c = part.coefficient(lead) / power.coefficient(lead)
            if part != power * c:
                raise ReductionError(f"h^{j} degree-{k} part is not a multiple of "
                                     f"(sum theta)^{k}: {part}")
            if j == 0:
                continue
            out = out + h_n ** (j - 1) * xi ** k * c
    return out


def _mather_from_restriction(restricted: ClassExpr, g: int) -> List[Tuple[int, Fraction]]:
    return [(r, restricted.coefficient({"h": r, "xi": g - r})) for r in range(g)]


def chern_mather_xi(g: int, case: CaseTag) -> List[Tuple[int, Fraction]]:
    """Coefficients of ``h^r xi^(g-r)`` in the restricted pipeline output."""
    return _mather_from_restriction(restrict_to_prym(derive_theta_class(g, case), g), g)


def gauss_degree(g: int, case: CaseTag = CaseTag.D_G) -> int:
    """Degree of the Gauss map: ``c_{M,0} = c xi^g`` integrates to ``c g!``."""
    r0 = dict(chern_mather_xi(g, case))[0]
    deg = r0 * math.factorial(g)
    if deg.denominator != 1:
        raise ArithmeticError(f"non-integral Gauss degree {deg}")
    return int(deg)
