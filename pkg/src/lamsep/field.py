"""The near-wall shear field carried around a circular wall, and its calculus.

The velocity profile over wall distance r is the shear-with-curvature law

    h(r) = alpha1 * r - (alpha2 / 2) * r**2,

transported along circles concentric with the wall: at distance d from the
center the speed is h(d - delta) and the direction is the clockwise tangent.
The closed forms below (Laplacian, advection, the stationary
pressure-gradient ansatz) are all verified against finite differences in
:mod:`lamsep.fdops`.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .geometry import ArcBoundary

VARIANTS = ("paper", "corrected")


@dataclass(frozen=True)
class LaminarParams:
    """Wall shear rate alpha1, profile curvature alpha2, kinematic viscosity nu.

    alpha2 == 0 is permitted as an internal pure-shear test mode; the theorem
    operations reject it.
    """

    alpha1: float
    alpha2: float
    nu: float

    def __post_init__(self):
        if self.alpha1 <= 0:
            raise ValueError(f"alpha1 must be positive, got {self.alpha1}")
        if self.alpha2 < 0:
            raise ValueError(f"alpha2 must be >= 0, got {self.alpha2}")
        if self.nu <= 0:
            raise ValueError(f"nu must be positive, got {self.nu}")

    @property
    def bl(self) -> float:
        """Boundary-layer thickness alpha1/alpha2 (inf in pure-shear test mode)."""
        return self.alpha1 / self.alpha2 if self.alpha2 > 0 else float("inf")

    def to_json(self) -> str:
        return json.dumps({"alpha1": self.alpha1, "alpha2": self.alpha2, "nu": self.nu})

    @classmethod
    def from_json(cls, text: str) -> "LaminarParams":
        obj = json.loads(text)
        return cls(float(obj["alpha1"]), float(obj["alpha2"]), float(obj["nu"]))


@dataclass(frozen=True)
class FieldHandle:
    """An evaluable planar vector field, optionally with analytic derivatives.

    ``evaluator`` maps points of shape (..., 2) to vectors of the same shape.
    ``jacobian`` and ``laplacian``, when given, must match the finite-difference
    oracles of :mod:`lamsep.fdops`.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray] | None = None
    laplacian: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""
    divergence_free: bool = False

    def __call__(self, x) -> np.ndarray:
        return self.evaluator(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class ScalarFieldHandle:
    """An evaluable planar scalar field (pressure), optionally with a gradient."""

    evaluator: Callable[[np.ndarray], np.ndarray]
    gradient: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""

    def __call__(self, x) -> np.ndarray:
        return self.evaluator(np.asarray(x, dtype=float))


def profile_h(params: LaminarParams, r):
    """Speed at wall distance r: alpha1*r - (alpha2/2)*r**2."""
    r = np.asarray(r, dtype=float)
    return params.alpha1 * r - 0.5 * params.alpha2 * r * r


def profile_h_prime(params: LaminarParams, r):
    """d h / d r = alpha1 - alpha2 * r."""
    return params.alpha1 - params.alpha2 * np.asarray(r, dtype=float)


def _clockwise_tangent(rel: np.ndarray) -> np.ndarray:
    # rotate the outward radial direction by -90 degrees: (x, y) -> (y, -x)
    return np.stack([rel[..., 1], -rel[..., 0]], axis=-1)


def laminar_field(arc: ArcBoundary, params: LaminarParams) -> FieldHandle:
    """Velocity field with speed h(dist - delta) along clockwise circles.

    In the local frame at any wall point the components are
    v1 = h(rho - delta) * (delta + r) / rho and v2 = -h(rho - delta) * s / rho
    with rho = sqrt((delta + r)**2 + s**2); on the wall the field vanishes and
    |u(Phi(s, r))| = h(r).
    """
    center = arc.center_array
    delta = arc.delta

    def evaluate(x: np.ndarray) -> np.ndarray:
        rel = np.asarray(x, dtype=float) - center
        d = np.linalg.norm(rel, axis=-1)
        g = profile_h(params, d - delta) / d
        return g[..., None] * _clockwise_tangent(rel)

    def jacobian(x: np.ndarray) -> np.ndarray:
        rel = np.asarray(x, dtype=float) - center
        d = np.linalg.norm(rel, axis=-1)
        h = profile_h(params, d - delta)
        hp = profile_h_prime(params, d - delta)
        g = h / d
        gp = (hp * d - h) / (d * d)
        tang = _clockwise_tangent(rel)
        jac = gp[..., None, None] * tang[..., :, None] * (rel / d[..., None])[..., None, :]
        rot = np.array([[0.0, 1.0], [-1.0, 0.0]])
        return jac + g[..., None, None] * rot

    def laplacian(x: np.ndarray) -> np.ndarray:
        rel = np.asarray(x, dtype=float) - center
        d = np.linalg.norm(rel, axis=-1)
        r = d - delta
        mag = -params.alpha2 + profile_h_prime(params, r) / d - profile_h(params, r) / d**2
        return mag[..., None] * _clockwise_tangent(rel) / d[..., None]

    return FieldHandle(
        evaluator=evaluate,
        jacobian=jacobian,
        laplacian=laplacian,
        name="laminar",
        divergence_free=True,
    )


def analytic_laplacian(params: LaminarParams, delta: float, r):
    """Vector Laplacian of the laminar field at wall distance r, in (tangent, normal) parts.

    tangential = -alpha2 + (alpha1 - alpha2*r)/(r + delta) - h(r)/(r + delta)**2,
    normal = 0.  nu * tangential equals the ansatz component P(r).
    """
    r = np.asarray(r, dtype=float)
    tangential = (
        -params.alpha2
        + (params.alpha1 - params.alpha2 * r) / (r + delta)
        - profile_h(params, r) / (r + delta) ** 2
    )
    return tangential, np.zeros_like(tangential)


def advection(params: LaminarParams, delta: float, r, variant: str = "paper"):
    """Normal component of (u . grad) u at wall distance r; the tangential part is 0.

    variant "paper" returns -h(r)/(r + delta) as printed; variant "corrected"
    returns the centripetal value -h(r)**2/(r + delta).  Both are exposed so the
    finite-difference oracle can adjudicate which one the flow obeys.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    h = profile_h(params, r)
    if variant == "paper":
        return -h / (np.asarray(r, dtype=float) + delta)
    return -h * h / (np.asarray(r, dtype=float) + delta)


def stationary_gradp_ansatz(params: LaminarParams, delta: float, r, variant: str = "paper"):
    """Pressure-gradient components (P, Pperp) a stationary flow would require.

    P(r) = nu * (alpha1/(r+d) - alpha2*r/(r+d) - h(r)/(r+d)**2 - alpha2) and
    Pperp(r) = h(r)/(r+d) under the printed variant; the "corrected" variant
    carries the extra factor h(r) (see ``advection``).
    """
    tangential, _ = analytic_laplacian(params, delta, r)
    pperp = -advection(params, delta, r, variant)
    return params.nu * tangential, pperp


def stationary_gradp_field(
    arc: ArcBoundary, params: LaminarParams, variant: str = "paper"
) -> FieldHandle:
    """The ansatz gradient as a planar field: P(r) along circles, Pperp(r) outward."""
    center = arc.center_array
    delta = arc.delta

    def evaluate(x: np.ndarray) -> np.ndarray:
        rel = np.asarray(x, dtype=float) - center
        d = np.linalg.norm(rel, axis=-1)
        p_t, p_n = stationary_gradp_ansatz(params, delta, d - delta, variant)
        n_hat = rel / d[..., None]
        t_hat = _clockwise_tangent(n_hat)
        return p_t[..., None] * t_hat + p_n[..., None] * n_hat

    return FieldHandle(evaluator=evaluate, name=f"gradp-ansatz-{variant}")


def export_field_csv(field: FieldHandle, points: np.ndarray, path) -> None:
    """Sample ``field`` at ``points`` (N, 2) and write CSV columns x,y,u1,u2."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    vals = field(pts)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "u1", "u2"])
        for (x, y), (u1, u2) in zip(pts, vals):
            writer.writerow([f"{x:.17g}", f"{y:.17g}", f"{u1:.17g}", f"{u2:.17g}"])
