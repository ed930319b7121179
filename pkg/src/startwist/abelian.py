"""Abelian group contexts, character pairings and exact unitary Fourier transforms.

Two kinds of context exist.  A lattice context models Z^n; its dual torus is
never discretized and enters only through character pairings, so the algebra
built on top of it carries no sampling error.  A finite context models a
product of cyclic groups Z/N_1 x ... x Z/N_n, which is self-dual and small
enough that every transform and every sum below is exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "GroupContext",
    "GroupPoint",
    "FiniteVector",
    "pairing",
    "fourier",
    "inverse_fourier",
]


@dataclass(frozen=True)
class GroupContext:
    """A lattice Z^rank (moduli is None) or a finite product of cyclic groups."""

    rank: int
    moduli: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        if self.moduli is not None:
            moduli = tuple(int(m) for m in self.moduli)
            object.__setattr__(self, "moduli", moduli)
            if len(moduli) != self.rank:
                raise ValueError(
                    f"need {self.rank} moduli, got {len(moduli)}"
                )
            if any(m < 2 for m in moduli):
                raise ValueError(f"moduli must all be >= 2, got {moduli}")

    @classmethod
    def lattice(cls, rank: int) -> "GroupContext":
        return cls(rank, None)

    @classmethod
    def finite(cls, moduli: int | Sequence[int]) -> "GroupContext":
        """Finite context; ``finite(5)`` is Z/5, ``finite([4, 4])`` is (Z/4)^2."""
        if isinstance(moduli, int):
            moduli = (moduli,)
        moduli = tuple(int(m) for m in moduli)
        return cls(len(moduli), moduli)

    @property
    def is_finite(self) -> bool:
        return self.moduli is not None

    @property
    def size(self) -> int:
        """Number of group elements (finite mode only)."""
        if self.moduli is None:
            raise ValueError("lattice context has no finite size")
        return math.prod(self.moduli)

    @property
    def norm_const(self) -> float:
        """The measure constant |V|^(-1/2) making the Fourier transform unitary."""
        return self.size ** -0.5

    @property
    def uniform_modulus(self) -> int:
        """Common modulus N when all moduli agree (finite mode only)."""
        if self.moduli is None:
            raise ValueError("lattice context has no modulus")
        if len(set(self.moduli)) != 1:
            raise ValueError(f"moduli {self.moduli} are not uniform")
        return self.moduli[0]

    def point(self, *coords: int) -> "GroupPoint":
        if len(coords) == 1 and isinstance(coords[0], (tuple, list, np.ndarray)):
            coords = tuple(coords[0])
        return GroupPoint(self, tuple(int(c) for c in coords))

    def zero(self) -> "GroupPoint":
        return GroupPoint(self, (0,) * self.rank)

    def points(self) -> Iterator["GroupPoint"]:
        """All group elements in lexicographic order (finite mode only)."""
        if self.moduli is None:
            raise ValueError("cannot enumerate a lattice context")
        for coords in itertools.product(*(range(m) for m in self.moduli)):
            yield GroupPoint(self, coords)


@dataclass(frozen=True)
class GroupPoint:
    """Integer coordinate vector in a context; reduced mod moduli when finite."""

    context: GroupContext
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != self.context.rank:
            raise ValueError(
                f"point of length {len(coords)} in rank-{self.context.rank} context"
            )
        if self.context.moduli is not None:
            coords = tuple(c % m for c, m in zip(coords, self.context.moduli))
        object.__setattr__(self, "coords", coords)

    def _check_same(self, other: "GroupPoint") -> None:
        if self.context != other.context:
            raise ValueError("group points from different contexts")

    def __add__(self, other: "GroupPoint") -> "GroupPoint":
        self._check_same(other)
        return GroupPoint(
            self.context, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other: "GroupPoint") -> "GroupPoint":
        self._check_same(other)
        return GroupPoint(
            self.context, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self) -> "GroupPoint":
        return GroupPoint(self.context, tuple(-c for c in self.coords))

    def vector(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)


class FiniteVector:
    """A complex function on a finite context, stored as a shaped array."""

    __slots__ = ("context", "values")

    def __init__(self, context: GroupContext, values: np.ndarray | Sequence) -> None:
        if not context.is_finite:
            raise ValueError("FiniteVector requires a finite context")
        arr = np.asarray(values, dtype=np.complex128)
        if arr.shape != tuple(context.moduli):
            arr = arr.reshape(tuple(context.moduli))
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("FiniteVector entries must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        self.context = context
        self.values = arr

    @classmethod
    def zero(cls, context: GroupContext) -> "FiniteVector":
        if not context.is_finite:
            raise ValueError("FiniteVector requires a finite context")
        return cls(context, np.zeros(tuple(context.moduli), dtype=np.complex128))

    @classmethod
    def delta(cls, point: GroupPoint) -> "FiniteVector":
        vec = np.zeros(tuple(point.context.moduli), dtype=np.complex128)
        vec[point.coords] = 1.0
        return cls(point.context, vec)

    @classmethod
    def constant(cls, context: GroupContext, value: complex = 1.0) -> "FiniteVector":
        if not context.is_finite:
            raise ValueError("FiniteVector requires a finite context")
        return cls(context, np.full(tuple(context.moduli), value, dtype=np.complex128))

    def __getitem__(self, point: GroupPoint) -> complex:
        return complex(self.values[point.coords])

    def __add__(self, other: "FiniteVector") -> "FiniteVector":
        self._check_same(other)
        return FiniteVector(self.context, self.values + other.values)

    def __sub__(self, other: "FiniteVector") -> "FiniteVector":
        self._check_same(other)
        return FiniteVector(self.context, self.values - other.values)

    def __mul__(self, scalar: complex) -> "FiniteVector":
        return FiniteVector(self.context, self.values * scalar)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteVector)
            and self.context == other.context
            and np.array_equal(self.values, other.values)
        )

    def _check_same(self, other: "FiniteVector") -> None:
        if self.context != other.context:
            raise ValueError("finite vectors from different contexts")

    def l2_norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def linf_distance(self, other: "FiniteVector") -> float:
        self._check_same(other)
        return float(np.max(np.abs(self.values - other.values)))

    def __repr__(self) -> str:
        return f"FiniteVector({self.context.moduli}, {self.values!r})"


def pairing(ctx: GroupContext, u: GroupPoint, xi) -> complex:
    """Character pairing, a unit complex number, biadditive in both slots.

    Finite mode pairs two group points: exp(2 pi i sum u_j xi_j / N_j).
    Lattice mode pairs a lattice point with a torus point given as a real
    vector in [0, 1)^rank: exp(2 pi i sum u_j t_j).
    """
    if u.context != ctx:
        raise ValueError("first argument does not belong to the context")
    if ctx.is_finite:
        if not isinstance(xi, GroupPoint) or xi.context != ctx:
            raise ValueError("second argument does not belong to the context")
        angle = sum(a * b / m for a, b, m in zip(u.coords, xi.coords, ctx.moduli))
    else:
        t = np.asarray(xi, dtype=np.float64)
        if t.shape != (ctx.rank,):
            raise ValueError(
                f"torus point of shape {t.shape} in rank-{ctx.rank} context"
            )
        angle = float(np.dot(u.coords, t))
    return complex(np.exp(2j * np.pi * angle))


def fourier(f: FiniteVector) -> FiniteVector:
    """Unitary transform f_hat(v) = |V|^(-1/2) sum_xi pairing(v, xi) f(xi)."""
    size = f.context.size
    return FiniteVector(f.context, np.fft.ifftn(f.values) * math.sqrt(size))


def inverse_fourier(f_hat: FiniteVector) -> FiniteVector:
    """Two-sided inverse of :func:`fourier`."""
    size = f_hat.context.size
    return FiniteVector(f_hat.context, np.fft.fftn(f_hat.values) / math.sqrt(size))
