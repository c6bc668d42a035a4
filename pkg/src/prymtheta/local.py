"""Local models: the blown-up symmetric product, A_1 points and CC parity."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from .kernel import ClassExpr, SpaceDescriptor

__all__ = [
    "LocalType",
    "CharacteristicCycle",
    "blowup_local_type",
    "ramification_hessian",
    "hessian_determinant",
    "diagonal_determinant",
    "cc_cycle",
    "milnor_parity",
]


@dataclass(frozen=True)
class LocalType:
    """The germ ``V(x_1...x_k - x_{k+1}...x_{k+l})`` at the origin."""

    k: int
    l: int

    def __post_init__(self):
        if self.k < 0 or self.l < 0:
            raise ValueError("k and l must be nonnegative")

    @property
    def on_blowup(self) -> bool:
        # lambda s^0 = mu s^inf forces both sides to vanish or neither
        return (self.k == 0) == (self.l == 0)

    @property
    def is_smooth(self) -> bool:
        return min(self.k, self.l) <= 1

    def model(self) -> ClassExpr:
        n = max(self.k + self.l, 1)
        S = SpaceDescriptor.of([f"x{i}" for i in range(1, n + 1)])
        lhs, rhs = S.one(), S.one()
        for i in range(1, self.k + 1):
            lhs = lhs * S.gen(f"x{i}")
        for i in range(self.k + 1, self.k + self.l + 1):
            rhs = rhs * S.gen(f"x{i}")
        return lhs - rhs

    def gradient_vanishes(self) -> bool:
        """Exact check that the model is singular at the origin."""
        f = self.model()
        if f.is_zero() or f.coefficient((0,) * f.space.ngens):
            # (0, 0) is the smooth graph of a unit; the origin is off V otherwise
            return False
        linear = f.homogeneous_part(1)
        return linear.is_zero()

    def swapped(self) -> "LocalType":
        return LocalType(self.l, self.k)


def blowup_local_type(zero_node_count: int, infty_node_count: int,
                      lambda_zero: bool, mu_zero: bool) -> LocalType:
    if zero_node_count < 0 or infty_node_count < 0:
        raise ValueError("node counts must be nonnegative")
    if lambda_zero and mu_zero:
        raise ValueError("lambda and mu cannot both vanish")
    return LocalType(zero_node_count + int(lambda_zero), infty_node_count + int(mu_zero))


def ramification_hessian(Q: Sequence) -> List[List[Fraction]]:
    """Hessian at 0 of ``prod(z_i^2 + Q_i) - prod(Q_i)``.

    The product is expanded in a ring truncated at total degree two, which
    is all the second derivatives at the origin can see.
    """
    Q = [Fraction(q) for q in Q]
    g = len(Q)
    if g < 1:
        raise ValueError("need at least one variable")
    names = [f"z{i}" for i in range(1, g + 1)]
    S = SpaceDescriptor.of(names, total_dimension=2)
    f = S.one()
    for name, q in zip(names, Q):
        f = f * (S.gen(name) ** 2 + q)
    const = Fraction(1)
    for q in Q:
        const *= q
    f = f - const
    H = [[Fraction(0)] * g for _ in range(g)]
    for i in range(g):
        for j in range(g):
            if i == j:
                H[i][i] = 2 * f.coefficient({names[i]: 2})
            else:
                H[i][j] = f.coefficient({names[i]: 1, names[j]: 1})
    return H


def hessian_determinant(H: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant by exact Gaussian elimination."""
    m = [list(map(Fraction, row)) for row in H]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                t = m[r][c] / m[c][c]
                m[r] = [x - t * y for x, y in zip(m[r], m[c])]
    return det


def diagonal_determinant(Q: Sequence) -> Fraction:
    """``2^g (prod Q_i)^(g-1)``."""
    g = len(Q)
    p = Fraction(1)
    for q in Q:
        p *= Fraction(q)
    return Fraction(2) ** g * p ** (g - 1)


@dataclass(frozen=True)
class CharacteristicCycle:
    g: int
    base_multiplicity: int = 1
    point_contributions: Tuple[Tuple[str, int], ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "base_multiplicity": self.base_multiplicity,
            "points": [{"label": p, "multiplicity": m} for p, m in self.point_contributions],
        }


def cc_cycle(g: int, isolated_points: Sequence[str]) -> CharacteristicCycle:
    """CC of the IC sheaf of the Prym theta divisor with A_1 points.

    Each isolated quadratic point adds ``1 - (-1)^g`` copies of its
    conormal fiber: nothing for even ``g``, twice for odd ``g``.
    """
    if g < 4:
        raise ValueError(f"need g >= 4, got {g}")
    mult = 1 - (-1) ** g
    return CharacteristicCycle(g, 1, tuple((str(p), mult) for p in isolated_points))


def milnor_parity(g: int) -> int:
    """Reduced Euler characteristic of the Milnor fiber ``S^(g-1)``."""
    if g < 1:
        raise ValueError(f"need g >= 1, got {g}")
    return (-1) ** (g - 1)
