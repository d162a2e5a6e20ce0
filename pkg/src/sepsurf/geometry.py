"""Gaussian curvature of implicit and separable surfaces.

A separable surface is the zero set of F(x,y,z) = f(x) + g(y) + h(z).
Curvature comes in two independently computed flavors:

* ``gauss_curvature_implicit`` works on any second-order implicit jet
  (value, gradient, Hessian) through the cofactor expansion of the
  Hessian, so it also accepts rotated jets and tabulated components.
* ``gauss_curvature_separable`` uses the separable short form,
  K = (f'^2 g'' h'' + g'^2 f'' h'' + h'^2 f'' g'') / (f'^2+g'^2+h'^2)^2.

``level_state`` evaluates the change of variables in which each squared
slope X = f'^2 becomes a function of its own level value u = f(x); the
per-axis constant kappa = (X/X')' = 1 - f' f''' / (2 f''^2) labels the
flat branches downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .expr import EvalDomainError, Func1D, Jet3

__all__ = [
    "REGULARITY_EPS",
    "SingularPointError",
    "SeparableSurface",
    "ImplicitJet2",
    "LevelState",
    "implicit_jet",
    "gauss_curvature_implicit",
    "gauss_curvature_separable",
    "level_state",
    "k2_residual",
    "transform_jet",
    "curvature_batch",
    "level_state_batch",
    "k2_residual_batch",
    "shift_level",
]

# points with |grad F| at or below this are reported singular, not extrapolated
REGULARITY_EPS = 1e-9


class SingularPointError(Exception):
    """The gradient vanishes (within REGULARITY_EPS) at the requested point."""


class SeparableSurface:
    """The zero set of f(x) + g(y) + h(z).

    Components only need ``value``, ``jet3``, ``value_array``, ``jet3_array``
    and ``domain``; both expression-backed Func1D and tabulated functions
    qualify.  Immutable; safe for concurrent shared reads.
    """

    def __init__(self, f, g, h, name: str = ""):
        self.f = f
        self.g = g
        self.h = h
        self.name = name

    @property
    def components(self) -> tuple:
        return (self.f, self.g, self.h)

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"SeparableSurface{tag}({self.f!r}, {self.g!r}, {self.h!r})"

    def value(self, p: Sequence[float]) -> float:
        x, y, z = p
        return self.f.value(x) + self.g.value(y) + self.h.value(z)

    def jets(self, p: Sequence[float]) -> tuple[Jet3, Jet3, Jet3]:
        x, y, z = p
        return (self.f.jet3(x), self.g.jet3(y), self.h.jet3(z))

    def on_surface(self, p: Sequence[float], tol: float = 1e-9) -> bool:
        try:
            return abs(self.value(p)) <= tol
        except EvalDomainError:
            return False

    def jet_arrays(self, pts: np.ndarray) -> tuple:
        """Per-axis jet columns for an (N, 3) point array.

        Returns ((f,f',f'',f'''), (g,...), (h,...)) with NaN outside domains.
        """
        pts = np.asarray(pts, dtype=float)
        return (
            self.f.jet3_array(pts[:, 0]),
            self.g.jet3_array(pts[:, 1]),
            self.h.jet3_array(pts[:, 2]),
        )

    def value_arrays(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return (
            self.f.value_array(pts[:, 0])
            + self.g.value_array(pts[:, 1])
            + self.h.value_array(pts[:, 2])
        )


@dataclass(frozen=True)
class ImplicitJet2:
    """Second-order data of a trivariate implicit function at a point."""

    F: float
    grad: np.ndarray  # (3,)
    hess: np.ndarray  # (3, 3), symmetric

    def __post_init__(self):
        object.__setattr__(self, "grad", np.asarray(self.grad, dtype=float))
        hess = np.asarray(self.hess, dtype=float)
        if not np.array_equal(hess, hess.T):
            raise ValueError("Hessian must be symmetric")
        object.__setattr__(self, "hess", hess)


def implicit_jet(surface: SeparableSurface, p: Sequence[float]) -> ImplicitJet2:
    """Jet of F = f+g+h at p: diagonal Hessian diag(f'', g'', h'')."""
    fj, gj, hj = surface.jets(p)
    grad = np.array([fj.d1, gj.d1, hj.d1])
    hess = np.diag([fj.d2, gj.d2, hj.d2])
    return ImplicitJet2(fj.v + gj.v + hj.v, grad, hess)


def _cofactor_quadratic(grad: np.ndarray, hess: np.ndarray) -> float:
    """grad^T . cofactor(hess) . grad, expanded in the six 2x2 determinants."""
    gx, gy, gz = grad
    hxx, hxy, hxz = hess[0, 0], hess[0, 1], hess[0, 2]
    hyy, hyz, hzz = hess[1, 1], hess[1, 2], hess[2, 2]
    return (
        gx * gx * (hyy * hzz - hyz * hyz)
        + gy * gy * (hxx * hzz - hxz * hxz)
        + gz * gz * (hxx * hyy - hxy * hxy)
        + 2.0 * gx * gy * (hyz * hxz - hxy * hzz)
        + 2.0 * gy * gz * (hxy * hxz - hyz * hxx)
        + 2.0 * gx * gz * (hxy * hyz - hxz * hyy)
    )


def gauss_curvature_implicit(jet: ImplicitJet2, eps: float = REGULARITY_EPS) -> float:
    """K of the level set from an arbitrary implicit jet.

    Even in the gradient, so no normal orientation is involved; homogeneous
    of degree zero under F -> lambda F.
    """
    g2 = float(jet.grad @ jet.grad)
    if math.sqrt(g2) <= eps:
        raise SingularPointError(f"|grad F| = {math.sqrt(g2):.3e} <= {eps:.0e}")
    return _cofactor_quadratic(jet.grad, jet.hess) / (g2 * g2)


def gauss_curvature_separable(
    surface: SeparableSurface, p: Sequence[float], eps: float = REGULARITY_EPS
) -> float:
    """K from the separable short form of the cofactor expansion."""
    fj, gj, hj = surface.jets(p)
    return _curvature_from_jets(
        fj.d1, fj.d2, gj.d1, gj.d2, hj.d1, hj.d2, eps=eps
    )


def _curvature_from_jets(f1, f2, g1, g2, h1, h2, eps=REGULARITY_EPS) -> float:
    X, Y, Z = f1 * f1, g1 * g1, h1 * h1
    s = X + Y + Z
    if math.sqrt(s) <= eps:
        raise SingularPointError(f"|grad F| = {math.sqrt(s):.3e} <= {eps:.0e}")
    num = X * g2 * h2 + Y * f2 * h2 + Z * f2 * g2
    return num / (s * s)


@dataclass(frozen=True)
class LevelState:
    """Change-of-variables data at a surface point.

    u, v, w   level values f(x), g(y), h(z); u+v+w ~ 0 on the surface.
    X, Y, Z   squared slopes f'^2, g'^2, h'^2 (always >= 0).
    dX, ...   rates of the squared slopes w.r.t. their own level value,
              dX/du = 2 f''(x).
    kappa_*   the per-axis branch constant 1 - f' f''' / (2 f''^2);
              None where the second derivative vanishes.
    """

    u: float
    v: float
    w: float
    X: float
    Y: float
    Z: float
    dX: float
    dY: float
    dZ: float
    kappa_x: Optional[float]
    kappa_y: Optional[float]
    kappa_z: Optional[float]

    @property
    def kappas(self) -> tuple[Optional[float], Optional[float], Optional[float]]:
        return (self.kappa_x, self.kappa_y, self.kappa_z)


def _branch_constant(d1: float, d2: float, d3: float) -> Optional[float]:
    if d2 == 0.0:
        return None
    return 1.0 - d1 * d3 / (2.0 * d2 * d2)


def level_state(surface: SeparableSurface, p: Sequence[float]) -> LevelState:
    fj, gj, hj = surface.jets(p)
    return LevelState(
        u=fj.v, v=gj.v, w=hj.v,
        X=fj.d1 ** 2, Y=gj.d1 ** 2, Z=hj.d1 ** 2,
        dX=2.0 * fj.d2, dY=2.0 * gj.d2, dZ=2.0 * hj.d2,
        kappa_x=_branch_constant(fj.d1, fj.d2, fj.d3),
        kappa_y=_branch_constant(gj.d1, gj.d2, gj.d3),
        kappa_z=_branch_constant(hj.d1, hj.d2, hj.d3),
    )


def k2_residual(state: LevelState, K: float) -> float:
    """Normalized residual of the squared-slope curvature identity.

    (X dY dZ + Y dX dZ + Z dX dY - 4 K (X+Y+Z)^2) / max(1, (X+Y+Z)^2)
    """
    s = state.X + state.Y + state.Z
    lhs = state.X * state.dY * state.dZ + state.Y * state.dX * state.dZ \
        + state.Z * state.dX * state.dY
    return (lhs - 4.0 * K * s * s) / max(1.0, s * s)


def transform_jet(
    jet: ImplicitJet2,
    rotation: np.ndarray,
    translation: Sequence[float] = (0.0, 0.0, 0.0),
) -> ImplicitJet2:
    """Jet of F composed with the rigid motion q -> R q + t, at the preimage.

    grad -> R^T grad, hess -> R^T hess R; the value and the translation do
    not enter.  The rotation must be orthogonal to 1e-12.
    """
    R = np.asarray(rotation, dtype=float)
    if R.shape != (3, 3):
        raise ValueError("rotation must be 3x3")
    if np.max(np.abs(R.T @ R - np.eye(3))) > 1e-12:
        raise ValueError("rotation is not orthogonal within 1e-12")
    np.asarray(translation, dtype=float)  # shape check only
    grad = R.T @ jet.grad
    hess = R.T @ jet.hess @ R
    hess = 0.5 * (hess + hess.T)  # kill round-off asymmetry
    return ImplicitJet2(jet.F, grad, hess)


# -- batch variants ------------------------------------------------------------
#
# Same arithmetic as the scalar operations, applied to (N,) columns; points
# that are singular or out of domain come back as NaN and are filtered by
# the callers.


def curvature_batch(surface: SeparableSurface, pts: np.ndarray,
                    eps: float = REGULARITY_EPS) -> np.ndarray:
    fa, ga, ha = surface.jet_arrays(pts)
    X, Y, Z = fa[1] ** 2, ga[1] ** 2, ha[1] ** 2
    s = X + Y + Z
    num = X * ga[2] * ha[2] + Y * fa[2] * ha[2] + Z * fa[2] * ga[2]
    with np.errstate(all="ignore"):
        K = num / (s * s)
        K = np.where(np.sqrt(s) > eps, K, np.nan)
    return K


def level_state_batch(surface: SeparableSurface, pts: np.ndarray) -> dict:
    """Columns of LevelState fields; kappa columns hold NaN where absent."""
    fa, ga, ha = surface.jet_arrays(pts)
    out = {
        "u": fa[0], "v": ga[0], "w": ha[0],
        "X": fa[1] ** 2, "Y": ga[1] ** 2, "Z": ha[1] ** 2,
        "dX": 2.0 * fa[2], "dY": 2.0 * ga[2], "dZ": 2.0 * ha[2],
    }
    for key, ja in (("kappa_x", fa), ("kappa_y", ga), ("kappa_z", ha)):
        d1, d2, d3 = ja[1], ja[2], ja[3]
        with np.errstate(all="ignore"):
            k = 1.0 - d1 * d3 / (2.0 * d2 * d2)
        out[key] = np.where(d2 != 0.0, k, np.nan)
    return out


def k2_residual_batch(state: dict, K: np.ndarray) -> np.ndarray:
    s = state["X"] + state["Y"] + state["Z"]
    lhs = state["X"] * state["dY"] * state["dZ"] \
        + state["Y"] * state["dX"] * state["dZ"] \
        + state["Z"] * state["dX"] * state["dY"]
    return (lhs - 4.0 * K * s * s) / np.maximum(1.0, s * s)


def shift_level(func, x0: float, du: float, steps: int = 12) -> float:
    """x near x0 with func(x) = func(x0) + du, by Newton on the level value.

    Needs a nonzero slope at x0; used to probe the squared-slope functions
    at displaced level values.
    """
    target = func.value(x0) + du
    x = x0
    for _ in range(steps):
        j = func.jet3(x)
        r = j.v - target
        if j.d1 == 0.0:
            raise SingularPointError("zero slope during level inversion")
        step = r / j.d1
        x = x - step
        if abs(step) <= 1e-15 * (1.0 + abs(x)):
            break
    if abs(func.value(x) - target) > 1e-10 * (1.0 + abs(target)):
        raise EvalDomainError("level inversion did not converge")
    return x
