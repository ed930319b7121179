"""Cocycle tables over a finite group acting on a finite set.

A three-argument unit-modulus table tau over (group, group, space) is checked
against the twisted cocycle identity, a two-argument factor table j-hat is
checked against the coboundary identity it should trivialize, and a solver
recovers j-hat from tau by exact linear algebra over Z/M on exponent tables.
The transform U(k): x -> j-hat(k, k^{-1} x) converts a valid factor into a
family satisfying the product identity used by the deformation machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .checks import CheckReport
from .modarith import solve_mod_system

__all__ = [
    "GammaAction",
    "TauCocycle",
    "AutomorphyFactor",
    "tau_cocycle_check",
    "automorphy_check",
    "coboundary",
    "solve_automorphy",
    "u_transform",
    "u_cocycle_check",
]

_UNIT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GammaAction:
    """A finite group (multiplication table) acting on a finite set.

    Elements are 0..order-1; ``mul[g, h]`` is the product, ``act[g, x]`` the
    image of x.  Group and action axioms are verified exhaustively on
    construction, which is affordable at the sizes used here.
    """

    mul: np.ndarray
    act: np.ndarray

    def __post_init__(self) -> None:
        mul = np.asarray(self.mul, dtype=np.int64)
        act = np.asarray(self.act, dtype=np.int64)
        order = mul.shape[0]
        if mul.shape != (order, order):
            raise ValueError("multiplication table must be square")
        if act.ndim != 2 or act.shape[0] != order:
            raise ValueError("action table must have one row per group element")
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "act", act)
        object.__setattr__(self, "identity", self._find_identity())
        object.__setattr__(self, "inv", self._find_inverses())
        self._validate()

    def _find_identity(self) -> int:
        order = self.mul.shape[0]
        for e in range(order):
            if np.array_equal(self.mul[e], np.arange(order)) and np.array_equal(
                self.mul[:, e], np.arange(order)
            ):
                return e
        raise ValueError("multiplication table has no identity")

    def _find_inverses(self) -> np.ndarray:
        order = self.mul.shape[0]
        e = self.identity
        inv = np.full(order, -1, dtype=np.int64)
        for g in range(order):
            hits = np.nonzero(self.mul[g] == e)[0]
            if hits.size != 1 or self.mul[hits[0], g] != e:
                raise ValueError(f"element {g} has no two-sided inverse")
            inv[g] = hits[0]
        return inv

    def _validate(self) -> None:
        order = self.order
        for g in range(order):
            for h in range(order):
                for k in range(order):
                    if self.mul[self.mul[g, h], k] != self.mul[g, self.mul[h, k]]:
                        raise ValueError("multiplication table is not associative")
        if not np.array_equal(self.act[self.identity], np.arange(self.n_points)):
            raise ValueError("identity must act trivially")
        for g in range(order):
            for h in range(order):
                for x in range(self.n_points):
                    if self.act[g, self.act[h, x]] != self.act[self.mul[g, h], x]:
                        raise ValueError("action is not compatible with products")
        if np.any(self.act < 0) or np.any(self.act >= self.n_points):
            raise ValueError("action table leaves the point set")

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    @property
    def n_points(self) -> int:
        return self.act.shape[1]

    @classmethod
    def cyclic(cls, order: int, n_points: int = 1, act=None) -> "GammaAction":
        """Cyclic group Z/order; trivial action unless a table is given."""
        g = np.arange(order)
        mul = (g[:, None] + g[None, :]) % order
        if act is None:
            act = np.zeros((order, n_points), dtype=np.int64) + np.arange(n_points)
        return cls(mul, act)

    @classmethod
    def cyclic_translation(cls, order: int) -> "GammaAction":
        """Z/order acting on itself by translation."""
        g = np.arange(order)
        return cls.cyclic(order, order, (g[:, None] + g[None, :]) % order)


def _check_unit(values: np.ndarray, what: str) -> None:
    if np.max(np.abs(np.abs(values) - 1.0), initial=0.0) > _UNIT_TOL:
        raise ValueError(f"{what} values must have modulus 1")


@dataclass(frozen=True, eq=False)
class TauCocycle:
    """Unit-modulus table tau(k1, k2, x)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128)
        if values.ndim != 3 or values.shape[0] != values.shape[1]:
            raise ValueError("tau table must have shape (order, order, points)")
        _check_unit(values, "tau")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def trivial(cls, action: GammaAction) -> "TauCocycle":
        return cls(np.ones((action.order, action.order, action.n_points)))


@dataclass(frozen=True, eq=False)
class AutomorphyFactor:
    """Unit-modulus table j-hat(k, x)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.complex128)
        if values.ndim != 2:
            raise ValueError("factor table must have shape (order, points)")
        _check_unit(values, "factor")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @classmethod
    def trivial(cls, action: GammaAction) -> "AutomorphyFactor":
        return cls(np.ones((action.order, action.n_points)))


def _check_shapes(action: GammaAction, tau: TauCocycle | None, jhat=None) -> None:
    if tau is not None and tau.values.shape != (
        action.order,
        action.order,
        action.n_points,
    ):
        raise ValueError("tau table does not match the action")
    if jhat is not None and jhat.values.shape != (action.order, action.n_points):
        raise ValueError("factor table does not match the action")


def tau_cocycle_check(
    action: GammaAction, tau: TauCocycle, tol: float = 1e-9
) -> CheckReport:
    """Exhaustive twisted cocycle identity over all triples and points.

    tau(k1 k2, k3, x) tau(k1, k2, k3 x) = tau(k1, k2 k3, x) tau(k2, k3, x),
    the k3-translate on the middle argument implementing the inverse action
    on base functions.
    """
    _check_shapes(action, tau)
    t = tau.values
    dev = 0.0
    for k1 in range(action.order):
        for k2 in range(action.order):
            k12 = action.mul[k1, k2]
            for k3 in range(action.order):
                k123 = action.mul[k2, k3]
                lhs = t[k12, k3] * t[k1, k2, action.act[k3]]
                rhs = t[k1, k123] * t[k2, k3]
                dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    return CheckReport(dev <= tol, dev)


def automorphy_check(
    action: GammaAction,
    tau: TauCocycle,
    jhat: AutomorphyFactor,
    tol: float = 1e-9,
) -> CheckReport:
    """Exhaustive check of j(k1, k2 x) j(k2, x) = tau(k1, k2, x) j(k1 k2, x)."""
    _check_shapes(action, tau, jhat)
    j = jhat.values
    dev = 0.0
    for k1 in range(action.order):
        for k2 in range(action.order):
            k12 = action.mul[k1, k2]
            lhs = j[k1, action.act[k2]] * j[k2]
            rhs = tau.values[k1, k2] * j[k12]
            dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    return CheckReport(dev <= tol, dev)


def coboundary(action: GammaAction, jhat: AutomorphyFactor) -> TauCocycle:
    """The cocycle trivialized by j-hat: tau(k1,k2,x) = j(k1,k2 x) j(k2,x) / j(k1 k2,x)."""
    _check_shapes(action, None, jhat)
    j = jhat.values
    out = np.empty(
        (action.order, action.order, action.n_points), dtype=np.complex128
    )
    for k1 in range(action.order):
        for k2 in range(action.order):
            k12 = action.mul[k1, k2]
            out[k1, k2] = j[k1, action.act[k2]] * j[k2] / j[k12]
    return TauCocycle(out)


def _roots_to_exponents(values: np.ndarray, m: int) -> np.ndarray:
    """Exponent table t with values = exp(2 pi i t / M), or raise."""
    angles = np.angle(values) * m / (2.0 * np.pi)
    exponents = np.round(angles).astype(np.int64) % m
    recon = np.exp(2j * np.pi * exponents / m)
    err = float(np.max(np.abs(recon - values)))
    if err > 1e-9:
        raise ValueError(f"values are not {m}-th roots of unity (error {err:.3e})")
    return exponents


def solve_automorphy(
    action: GammaAction, tau: TauCocycle, modulus: int
) -> AutomorphyFactor | None:
    """Solve for a factor with values among the M-th roots of unity, or report none.

    Passing to exponents turns the coboundary identity into the linear system
    j(k1, k2 x) + j(k2, x) - j(k1 k2, x) = t(k1, k2, x) over Z/M, solved by
    Smith-style elimination; inconsistency over Z/M is reported as None (the
    same class may be solvable at a multiple of M).
    """
    report = tau_cocycle_check(action, tau)
    if not report.ok:
        raise ValueError(
            f"tau is not a cocycle (deviation {report.max_deviation:.3e})"
        )
    t = _roots_to_exponents(tau.values, modulus)
    order, n_points = action.order, action.n_points
    n_unknowns = order * n_points

    def unknown(k: int, x: int) -> int:
        return k * n_points + x

    rows = []
    rhs = []
    for k1 in range(order):
        for k2 in range(order):
            k12 = action.mul[k1, k2]
            for x in range(n_points):
                row = [0] * n_unknowns
                row[unknown(k1, action.act[k2, x])] += 1
                row[unknown(k2, x)] += 1
                row[unknown(k12, x)] -= 1
                rows.append(row)
                rhs.append(int(t[k1, k2, x]))
    solution = solve_mod_system(rows, rhs, modulus)
    if solution is None:
        return None
    exponents = np.array(solution, dtype=np.int64).reshape(order, n_points)
    return AutomorphyFactor(np.exp(2j * np.pi * exponents / modulus))


def u_transform(action: GammaAction, jhat: AutomorphyFactor) -> np.ndarray:
    """The family U(k): x -> j-hat(k, k^{-1} x), one row per group element."""
    _check_shapes(action, None, jhat)
    out = np.empty_like(jhat.values)
    for k in range(action.order):
        k_inv = action.inv[k]
        out[k] = jhat.values[k, action.act[k_inv]]
    return out


def u_cocycle_check(
    action: GammaAction,
    tau: TauCocycle,
    u: np.ndarray,
    tol: float = 1e-9,
) -> CheckReport:
    """Check U(k1)(x) U(k2)(k1^{-1} x) = tau(k1, k2, (k1 k2)^{-1} x) U(k1 k2)(x).

    The tau argument is left-translated by k1 k2, matching the multiplier
    convention in which the group also moves the base argument of tau.
    """
    _check_shapes(action, tau)
    dev = 0.0
    for k1 in range(action.order):
        k1_inv = action.inv[k1]
        for k2 in range(action.order):
            k12 = action.mul[k1, k2]
            k12_inv = action.inv[k12]
            lhs = u[k1] * u[k2, action.act[k1_inv]]
            rhs = tau.values[k1, k2, action.act[k12_inv]] * u[k12]
            dev = max(dev, float(np.max(np.abs(lhs - rhs))))
    return CheckReport(dev <= tol, dev)
