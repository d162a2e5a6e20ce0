"""Constructors for the classified surface families.

Each family is a small parameter record (``FamilySpec``) that a single
dispatcher, ``build_surface``, turns into a ``SeparableSurface`` with
domains restricted so every component expression is real and regular:

* right cylinders, translation surfaces, rotational surfaces (the three
  elementary shapes),
* the flat log-product cones ("generalized cone"),
* the flat exponential cylinders,
* the flat power-law cones ("conical power"),
* rotational surfaces of constant nonzero curvature, built by integrating
  the profile equation r'' = -K r, z' = sqrt(1 - r'^2) in arclength and
  tabulating h(z) = -r(z)^2.

Specs serialize to and from JSON documents ``{"family": tag, "params": {...}}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .expr import Binary, Const, Func1D, Jet3
from .geometry import SeparableSurface

__all__ = [
    "InvalidFamilyError",
    "DegenerateSurfaceError",
    "RightCylinder",
    "Translation",
    "RotationalParabolic",
    "RotationalCGC",
    "GeneralizedCone",
    "ExpCylinder",
    "ConicalPower",
    "FamilySpec",
    "TabulatedFunc1D",
    "build_surface",
    "rotational_profile",
    "admissible_box",
    "family_to_json",
    "family_from_json",
    "PRESETS",
    "preset_surface",
    "preset_box",
]

Box = tuple[float, float, float, float, float, float]


class InvalidFamilyError(ValueError):
    """Parameters violate a family's admissibility conditions."""


class DegenerateSurfaceError(InvalidFamilyError):
    """The zero set degenerates to a point or is empty."""


def _func_field(value, var: str) -> Func1D:
    if isinstance(value, Func1D):
        return value
    if isinstance(value, str):
        return Func1D.parse(value, var)
    if isinstance(value, dict):
        dom = value.get("domain")
        if dom is None:
            dom = (-math.inf, math.inf)
        else:
            lo = -math.inf if dom[0] is None else float(dom[0])
            hi = math.inf if dom[1] is None else float(dom[1])
            dom = (lo, hi)
        return Func1D.parse(value["expr"], var, dom)
    raise InvalidFamilyError(f"cannot interpret {value!r} as a one-variable function")


def _func_json(f: Func1D) -> dict:
    lo, hi = f.domain
    return {
        "expr": f.source(),
        "domain": [None if math.isinf(lo) else lo, None if math.isinf(hi) else hi],
    }


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidFamilyError(message)


@dataclass(frozen=True)
class RightCylinder:
    """f(c1) + g(c2) + a = 0 over the two coordinates present in ``plane``'s
    complement; the absent coordinate's function is the constant a."""

    f: Func1D
    g: Func1D
    a: float = 0.0
    plane: str = "z"  # the absent coordinate

    tag = "right-cylinder"

    def __post_init__(self):
        _require(self.plane in ("x", "y", "z"), "plane must be one of x, y, z")


@dataclass(frozen=True)
class Translation:
    """The graph z = a x + g(y) with a != 0."""

    a: float
    g: Func1D

    tag = "translation"

    def __post_init__(self):
        _require(self.a != 0.0, "slope a must be nonzero (a = 0 is a right cylinder)")


@dataclass(frozen=True)
class RotationalParabolic:
    """Axis-parallel rotational surface h(z) = x^2 + y^2 + a x + b y + c."""

    a: float
    b: float
    c: float
    h: Func1D

    tag = "rotational-parabolic"


@dataclass(frozen=True)
class RotationalCGC:
    """Rotational surface of constant curvature K != 0 about the z axis.

    The profile starts at radius r0 with slope dr0 against arclength and is
    integrated over ``arc_span`` (centered); the surface is
    x^2 + y^2 - r(z)^2 = 0 with h tabulated.
    """

    K: float
    r0: float
    dr0: float = 0.0
    arc_span: float = 3.0
    step: Optional[float] = None

    tag = "rotational-cgc"

    def __post_init__(self):
        _require(self.K != 0.0, "K must be nonzero")
        _require(self.r0 > 0.0, "r0 must be positive")
        # |dr0| = 1 makes the profile vertical at the start, so strictly below
        _require(abs(self.dr0) < 1.0, "|dr0| must be < 1")
        _require(self.arc_span > 0.0, "arc_span must be positive")


@dataclass(frozen=True)
class GeneralizedCone:
    """The flat cone (m1 x + n1)^p (m2 y + n2)^q = (m3 z + n3) with p + q = 1,
    built through logarithms on the positive chart."""

    p: float
    m: tuple[float, float, float]
    n: tuple[float, float, float] = (0.0, 0.0, 0.0)

    tag = "generalized-cone"

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(float(v) for v in self.m))
        object.__setattr__(self, "n", tuple(float(v) for v in self.n))
        _require(all(v != 0.0 for v in self.m), "all m coefficients must be nonzero")
        _require(self.p not in (0.0, 1.0), "p (and q = 1 - p) must be nonzero")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def apex(self) -> tuple[float, float, float]:
        return tuple(-n / m for m, n in zip(self.m, self.n))


@dataclass(frozen=True)
class ExpCylinder:
    """The flat cylinder n1 e^{m1 x} + n2 e^{m2 y} + n3 e^{m3 z} = 0 with
    generators parallel to (1/m1, 1/m2, 1/m3)."""

    m: tuple[float, float, float]
    n: tuple[float, float, float]

    tag = "exp-cylinder"

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(float(v) for v in self.m))
        object.__setattr__(self, "n", tuple(float(v) for v in self.n))
        _require(all(v != 0.0 for v in self.m), "all m coefficients must be nonzero")
        _require(all(v != 0.0 for v in self.n), "all n coefficients must be nonzero")
        _require(
            min(self.n) < 0.0 < max(self.n),
            "coefficients n must not all share one sign (zero set would be empty)",
        )

    @property
    def generator(self) -> tuple[float, float, float]:
        return (1.0 / self.m[0], 1.0 / self.m[1], 1.0 / self.m[2])


@dataclass(frozen=True)
class ConicalPower:
    """The flat cone sum_i eps_i (m_i t + n_i)^alpha = 0 with alpha = 1/(1-k).

    For odd integer alpha the default build mixes charts (last axis on the
    negative side) so the canonical equation keeps all term signs implicit;
    for non-integer alpha the last term carries an explicit minus sign, the
    sign freedom the profile integration leaves open.  Even positive integer
    alpha degenerates: the canonical zero set is a single point (the apex).
    """

    k: float
    m: tuple[float, float, float]
    n: tuple[float, float, float] = (0.0, 0.0, 0.0)
    signs: Optional[tuple[int, int, int]] = None

    tag = "conical-power"

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(float(v) for v in self.m))
        object.__setattr__(self, "n", tuple(float(v) for v in self.n))
        if self.signs is not None:
            object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
            _require(all(s in (-1, 1) for s in self.signs), "signs must be +-1")
            _require(
                min(self.signs) < max(self.signs),
                "term signs must not all be equal (zero set would be empty)",
            )
        _require(all(v != 0.0 for v in self.m), "all m coefficients must be nonzero")
        _require(self.k not in (0.0, 1.0), "k must avoid 0 and 1")
        _require(math.isfinite(self.k), "k must be finite")

    @property
    def exponent(self) -> float:
        return 1.0 / (1.0 - self.k)

    @property
    def apex(self) -> tuple[float, float, float]:
        return tuple(-n / m for m, n in zip(self.m, self.n))


FamilySpec = (
    RightCylinder
    | Translation
    | RotationalParabolic
    | RotationalCGC
    | GeneralizedCone
    | ExpCylinder
    | ConicalPower
)

_TAGS = {
    cls.tag: cls
    for cls in (
        RightCylinder,
        Translation,
        RotationalParabolic,
        RotationalCGC,
        GeneralizedCone,
        ExpCylinder,
        ConicalPower,
    )
}


# -- tabulated functions --------------------------------------------------------


class TabulatedFunc1D:
    """Piecewise-quintic function from breakpoint jets (value, d1, d2).

    The interpolant matches value and two derivatives at both ends of every
    interval, so it is C^2 across breakpoints; the third derivative comes
    from the quintic.  Immutable after construction.
    """

    def __init__(self, breakpoints: np.ndarray, values: np.ndarray,
                 d1: np.ndarray, d2: np.ndarray):
        z = np.asarray(breakpoints, dtype=float)
        if z.ndim != 1 or z.size < 2:
            raise ValueError("need at least two breakpoints")
        if not np.all(np.diff(z) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        self.breakpoints = z
        self.node_values = np.asarray(values, dtype=float)
        self.node_d1 = np.asarray(d1, dtype=float)
        self.node_d2 = np.asarray(d2, dtype=float)
        self.domain = (float(z[0]), float(z[-1]))
        self.var = "z"
        self.truncated = False
        self._coeffs = self._build_coeffs()

    def _build_coeffs(self) -> np.ndarray:
        z, p, m, s = self.breakpoints, self.node_values, self.node_d1, self.node_d2
        d = np.diff(z)
        n = d.size
        c = np.zeros((n, 6))
        c[:, 0] = p[:-1]
        c[:, 1] = m[:-1]
        c[:, 2] = 0.5 * s[:-1]
        A = np.zeros((n, 3, 3))
        A[:, 0, 0], A[:, 0, 1], A[:, 0, 2] = d ** 3, d ** 4, d ** 5
        A[:, 1, 0], A[:, 1, 1], A[:, 1, 2] = 3 * d ** 2, 4 * d ** 3, 5 * d ** 4
        A[:, 2, 0], A[:, 2, 1], A[:, 2, 2] = 6 * d, 12 * d ** 2, 20 * d ** 3
        rhs = np.stack(
            [
                p[1:] - (c[:, 0] + c[:, 1] * d + c[:, 2] * d ** 2),
                m[1:] - (c[:, 1] + 2 * c[:, 2] * d),
                s[1:] - 2 * c[:, 2],
            ],
            axis=1,
        )
        c[:, 3:] = np.linalg.solve(A, rhs[..., None])[..., 0]
        return c

    def __repr__(self) -> str:
        lo, hi = self.domain
        return f"TabulatedFunc1D({self.breakpoints.size} nodes on ({lo:.4g}, {hi:.4g}))"

    def source(self) -> str:
        return repr(self)

    def contains(self, x: float) -> bool:
        lo, hi = self.domain
        return lo < x < hi

    def _locate(self, xs: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.breakpoints, xs, side="right") - 1
        return np.clip(idx, 0, self.breakpoints.size - 2)

    def _eval_cols(self, xs: np.ndarray) -> tuple[np.ndarray, ...]:
        xs = np.asarray(xs, dtype=float)
        idx = self._locate(xs)
        t = xs - self.breakpoints[idx]
        c = self._coeffs[idx]
        v = c[:, 0] + t * (c[:, 1] + t * (c[:, 2] + t * (c[:, 3] + t * (c[:, 4] + t * c[:, 5]))))
        d1 = c[:, 1] + t * (2 * c[:, 2] + t * (3 * c[:, 3] + t * (4 * c[:, 4] + t * 5 * c[:, 5])))
        d2 = 2 * c[:, 2] + t * (6 * c[:, 3] + t * (12 * c[:, 4] + t * 20 * c[:, 5]))
        d3 = 6 * c[:, 3] + t * (24 * c[:, 4] + t * 60 * c[:, 5])
        lo, hi = self.domain
        bad = (xs <= lo) | (xs >= hi)
        for col in (v, d1, d2, d3):
            col[bad] = np.nan
        return v, d1, d2, d3

    def jet3_array(self, xs: np.ndarray) -> tuple[np.ndarray, ...]:
        return self._eval_cols(xs)

    def value_array(self, xs: np.ndarray) -> np.ndarray:
        return self._eval_cols(xs)[0]

    def _check(self, x: float) -> None:
        if not self.contains(x):
            from .expr import EvalDomainError

            raise EvalDomainError(
                f"{x!r} outside tabulated domain ({self.domain[0]}, {self.domain[1]})")

    def value(self, x: float) -> float:
        self._check(x)
        return float(self._eval_cols(np.array([x]))[0][0])

    __call__ = value

    def jet3(self, x: float) -> Jet3:
        self._check(x)
        cols = self._eval_cols(np.array([x]))
        return Jet3(*(float(col[0]) for col in cols))


# -- the rotational profile ODE -------------------------------------------------

_Q2_FLOOR = 0.01  # stop when the profile slope approaches vertical
_R_FLOOR_REL = 0.05  # stop when the radius approaches the axis


def rotational_profile(K: float, r0: float, dr0: float, arc_span: float = 3.0,
                       step: Optional[float] = None) -> TabulatedFunc1D:
    """Integrate r'' = -K r, z' = sqrt(1 - r'^2) and tabulate h(z) = -r(z)^2.

    Classical fixed-step 4th-order integration in arclength, centered on the
    start point; the run stops early (and flags ``truncated``) where the
    slope approaches vertical or the radius approaches the axis.  Node jets
    of h are computed in closed form from (r, r'), so only the interpolant
    between nodes is approximate.
    """
    if K == 0.0:
        raise InvalidFamilyError("K must be nonzero")
    if r0 <= 0.0:
        raise InvalidFamilyError("r0 must be positive")
    if abs(dr0) >= 1.0:
        raise InvalidFamilyError("|dr0| must be < 1")
    if arc_span <= 0.0:
        raise InvalidFamilyError("arc_span must be positive")
    if step is None:
        step = 1e-3 * arc_span
    if step > 1e-3 * arc_span * (1 + 1e-12):
        raise InvalidFamilyError("step must be <= 1e-3 * arc_span")

    half = 0.5 * arc_span
    n_steps = max(2, int(math.ceil(half / step)))
    ds = half / n_steps
    r_floor = max(1e-9, _R_FLOOR_REL * r0)

    def rhs(state):
        r, p, _ = state
        q = math.sqrt(max(0.0, 1.0 - p * p))
        return (p, -K * r, q)

    def rk4(state, h):
        k1 = rhs(state)
        k2 = rhs(tuple(s + 0.5 * h * k for s, k in zip(state, k1)))
        k3 = rhs(tuple(s + 0.5 * h * k for s, k in zip(state, k2)))
        k4 = rhs(tuple(s + h * k for s, k in zip(state, k3)))
        return tuple(
            s + (h / 6.0) * (a + 2 * b + 2 * c + d)
            for s, a, b, c, d in zip(state, k1, k2, k3, k4)
        )

    def valid(state):
        r, p, _ = state
        return r >= r_floor and (1.0 - p * p) >= _Q2_FLOOR

    start = (r0, dr0, 0.0)
    if not valid(start):
        raise InvalidFamilyError("profile start violates validity bounds")

    truncated = False
    branches = []
    for sign in (+1.0, -1.0):
        states = []
        cur = start
        for _ in range(n_steps):
            nxt = rk4(cur, sign * ds)
            if not valid(nxt):
                truncated = True
                break
            states.append(nxt)
            cur = nxt
        branches.append(states)

    fwd, back = branches
    chain = list(reversed(back)) + [start] + fwd
    if len(chain) < 8:
        raise InvalidFamilyError("profile band too short; adjust r0/dr0/arc_span")

    r = np.array([st[0] for st in chain])
    p = np.array([st[1] for st in chain])
    z = np.array([st[2] for st in chain])
    q = np.sqrt(1.0 - p * p)

    h = -r * r
    h1 = -2.0 * r * p / q
    h2 = (-2.0 * p * p + 2.0 * K * r * r) / q ** 2 + 2.0 * K * r * r * p * p / q ** 4

    tab = TabulatedFunc1D(z, h, h1, h2)
    tab.truncated = truncated
    tab.profile_nodes = {"z": z, "r": r, "dr": p}
    return tab


# -- expression helpers ----------------------------------------------------------


def _r(value: float) -> str:
    """Literal source for a float; parses back to the same double."""
    return repr(float(value))


def _affine_src(m: float, n: float, var: str) -> str:
    if n == 0.0:
        return f"{_r(m)}*{var}"
    return f"{_r(m)}*{var}+{_r(n)}"


def _chart_domain(m: float, n: float, side: int) -> tuple[float, float]:
    """Open interval where side*(m t + n) > 0."""
    edge = -n / m
    if (m > 0) == (side > 0):
        return (edge, math.inf)
    return (-math.inf, edge)


# -- build_surface ----------------------------------------------------------------


def build_surface(spec: FamilySpec) -> SeparableSurface:
    """Realize a family spec as a SeparableSurface with admissible domains."""
    if isinstance(spec, RightCylinder):
        surf = _build_right_cylinder(spec)
    elif isinstance(spec, Translation):
        surf = _build_translation(spec)
    elif isinstance(spec, RotationalParabolic):
        surf = _build_rotational_parabolic(spec)
    elif isinstance(spec, RotationalCGC):
        surf = _build_rotational_cgc(spec)
    elif isinstance(spec, GeneralizedCone):
        surf = _build_generalized_cone(spec)
    elif isinstance(spec, ExpCylinder):
        surf = _build_exp_cylinder(spec)
    elif isinstance(spec, ConicalPower):
        surf = _build_conical_power(spec)
    else:
        raise InvalidFamilyError(f"unknown family spec {spec!r}")
    surf.family_spec = spec
    return surf


def _build_right_cylinder(spec: RightCylinder) -> SeparableSurface:
    present = [c for c in "xyz" if c != spec.plane]
    parts = {}
    parts[present[0]] = _rebind(spec.f, present[0])
    parts[present[1]] = _rebind(spec.g, present[1])
    parts[spec.plane] = Func1D(Const(float(spec.a)), var=spec.plane)
    surf = SeparableSurface(parts["x"], parts["y"], parts["z"],
                            name=f"right-cylinder[{spec.plane} absent]")
    surf.preferred_axis = {"z": 1, "y": 2, "x": 2}[spec.plane]
    return surf


def _rebind(f: Func1D, var: str) -> Func1D:
    if f.var == var:
        return f
    return Func1D(_rename_var(f.ast, var), f.domain, var)


def _rename_var(node, var: str):
    from .expr import Unary, Var

    if isinstance(node, Var):
        return Var(var)
    if isinstance(node, Const):
        return node
    if isinstance(node, Unary):
        return Unary(node.op, _rename_var(node.arg, var))
    return Binary(node.op, _rename_var(node.lhs, var), _rename_var(node.rhs, var))


def _build_translation(spec: Translation) -> SeparableSurface:
    f = Func1D.parse(f"{_r(spec.a)}*x", "x")
    g = _rebind(spec.g, "y")
    h = Func1D.parse("-z", "z")
    surf = SeparableSurface(f, g, h, name=f"translation[a={spec.a:g}]")
    surf.preferred_axis = 2
    return surf


def _build_rotational_parabolic(spec: RotationalParabolic) -> SeparableSurface:
    f = Func1D.parse(f"x^2+{_r(spec.a)}*x", "x")
    g = Func1D.parse(f"y^2+{_r(spec.b)}*y", "y")
    hz = _rebind(spec.h, "z")
    # h-component of F is c - h(z)
    h = Func1D(Binary("sub", Const(float(spec.c)), hz.ast), hz.domain, "z")
    surf = SeparableSurface(f, g, h, name="rotational-parabolic")
    surf.preferred_axis = 2
    return surf


def _build_rotational_cgc(spec: RotationalCGC) -> SeparableSurface:
    tab = rotational_profile(spec.K, spec.r0, spec.dr0, spec.arc_span, spec.step)
    f = Func1D.parse("x^2", "x")
    g = Func1D.parse("y^2", "y")
    surf = SeparableSurface(f, g, tab, name=f"rotational-cgc[K={spec.K:g}]")
    surf.preferred_axis = 2
    return surf


def _build_generalized_cone(spec: GeneralizedCone) -> SeparableSurface:
    a, b, c = spec.p, spec.q, -1.0
    comps = []
    for coeff, m, n, var in zip((a, b, c), spec.m, spec.n, "xyz"):
        src = f"{_r(-coeff)}*log({_affine_src(m, n, var)})"
        comps.append(Func1D.parse(src, var, _chart_domain(m, n, +1)))
    surf = SeparableSurface(*comps, name=f"generalized-cone[p={spec.p:g}]")
    surf.preferred_axis = 2
    return surf


def _build_exp_cylinder(spec: ExpCylinder) -> SeparableSurface:
    comps = []
    for m, n, var in zip(spec.m, spec.n, "xyz"):
        comps.append(Func1D.parse(f"{_r(n)}*exp({_r(m)}*{var})", var))
    surf = SeparableSurface(*comps, name="exp-cylinder")
    surf.preferred_axis = 2
    return surf


def _conical_layout(spec: ConicalPower) -> list[tuple[float, int, int]]:
    """Per-axis (exponent sign data): (eps term sign, chart side)."""
    alpha = spec.exponent
    near = round(alpha)
    is_int = abs(alpha - near) <= 1e-9 and abs(near) >= 1
    if spec.signs is not None:
        return [(s, +1) for s in spec.signs]
    if is_int:
        if near % 2 == 0:
            if near > 0:
                raise DegenerateSurfaceError(
                    "even positive exponent: the canonical zero set is only the apex point"
                )
            raise DegenerateSurfaceError(
                "even negative exponent: the canonical zero set is empty"
            )
        # odd exponent: negative chart on the last axis supplies the sign
        return [(+1, +1), (+1, +1), (+1, -1)]
    # non-integer exponent: explicit minus sign on the last term
    return [(+1, +1), (+1, +1), (-1, +1)]


def _build_conical_power(spec: ConicalPower) -> SeparableSurface:
    alpha = spec.exponent
    layout = _conical_layout(spec)
    comps = []
    for (eps, side), m, n, var in zip(layout, spec.m, spec.n, "xyz"):
        base = f"({_affine_src(m, n, var)})^({_r(alpha)})"
        src = base if eps > 0 else f"-{base}"
        comps.append(Func1D.parse(src, var, _chart_domain(m, n, side)))
    surf = SeparableSurface(*comps, name=f"conical-power[k={spec.k:g}]")
    surf.preferred_axis = 2
    return surf


# -- admissible boxes -------------------------------------------------------------


def _window(dom: tuple[float, float], lo: float, hi: float,
            margin: float = 0.0) -> tuple[float, float]:
    a = max(dom[0], lo)
    b = min(dom[1], hi)
    if margin:
        a, b = a + margin, b - margin
    if not a < b:
        raise InvalidFamilyError("domain window collapsed")
    return (a, b)


def _base_window(m: float, n: float, side: int, lo: float = 0.5,
                 hi: float = 2.0) -> tuple[float, float]:
    """t interval where side*(m t + n) runs over [lo, hi]."""
    a = (side * lo - n) / m
    b = (side * hi - n) / m
    return (min(a, b), max(a, b))


def admissible_box(spec: FamilySpec) -> Box:
    """Default sampling box: interior to the charts, containing a regular patch."""
    if isinstance(spec, GeneralizedCone):
        # all bases over [0.5, 2]: the z base s1^p s2^q passes through 1
        # when s1 = s2 = 1, so the box always contains a patch
        wins = [_base_window(m, n, +1) for m, n in zip(spec.m, spec.n)]
        return tuple(v for w in wins for v in w)
    if isinstance(spec, ConicalPower):
        # same idea: the third term's magnitude equals the sum of the first two
        layout = _conical_layout(spec)
        alpha = spec.exponent
        t_lo, t_hi = sorted((0.5 ** alpha, 2.0 ** alpha))
        s_lo, s_hi = sorted(((2 * t_lo) ** (1 / alpha), (2 * t_hi) ** (1 / alpha)))
        wins = [
            _base_window(spec.m[0], spec.n[0], layout[0][1]),
            _base_window(spec.m[1], spec.n[1], layout[1][1]),
            _base_window(spec.m[2], spec.n[2], layout[2][1], 0.98 * s_lo, 1.02 * s_hi),
        ]
        return tuple(v for w in wins for v in w)
    if isinstance(spec, ExpCylinder):
        # solve the z term analytically over a probe grid to bound the window
        xs = np.linspace(-1.2, 1.2, 17)
        m1, m2, m3 = spec.m
        n1, n2, n3 = spec.n
        t = -(n1 * np.exp(m1 * xs[:, None]) + n2 * np.exp(m2 * xs[None, :]))
        with np.errstate(all="ignore"):
            z = np.log(t / n3) / m3
        z = z[np.isfinite(z)]
        if z.size == 0:
            raise InvalidFamilyError("no solvable columns over the probe window")
        pad = 0.05 * (float(z.max()) - float(z.min()) + 0.2)
        return (-1.2, 1.2, -1.2, 1.2, float(z.min()) - pad, float(z.max()) + pad)
    if isinstance(spec, RotationalCGC):
        surf = build_surface(spec)
        tab = surf.h
        zlo, zhi = tab.domain
        dz = 0.02 * (zhi - zlo)
        rmax = float(np.max(tab.profile_nodes["r"]))
        w = 0.72 * rmax
        return (-w, w, -w, w, zlo + dz, zhi - dz)
    if isinstance(spec, Translation):
        surf = build_surface(spec)
        gx = _window(surf.g.domain, -1.2, 1.2, 1e-6)
        xs = np.linspace(-1.2, 1.2, 13)
        ys = np.linspace(gx[0], gx[1], 13)
        zs = spec.a * xs[:, None] + surf.g.value_array(ys)[None, :]
        zs = zs[np.isfinite(zs)]
        if zs.size == 0:
            raise InvalidFamilyError("translation surface has no graph over the window")
        pad = 0.05 * (zs.max() - zs.min() + 1.0)
        return (-1.2, 1.2, gx[0], gx[1], float(zs.min() - pad), float(zs.max() + pad))
    if isinstance(spec, RightCylinder):
        surf = build_surface(spec)
        wins = [
            _window(comp.domain, -1.5, 1.5, 1e-6) for comp in surf.components
        ]
        return tuple(v for w in wins for v in w)
    if isinstance(spec, RotationalParabolic):
        surf = build_surface(spec)
        hz = _window(surf.h.domain, -1.0, 1.0, 1e-9)
        return (-2.0, 2.0, -2.0, 2.0, hz[0], hz[1])
    # fallback: unit box intersected with the domains
    surf = build_surface(spec)
    wins = [_window(comp.domain, -1.0, 1.0, 1e-9) for comp in surf.components]
    return tuple(v for w in wins for v in w)


# -- JSON (de)serialization --------------------------------------------------------


def family_to_json(spec: FamilySpec) -> dict:
    if isinstance(spec, RightCylinder):
        params = {"f": _func_json(spec.f), "g": _func_json(spec.g),
                  "a": spec.a, "plane": spec.plane}
    elif isinstance(spec, Translation):
        params = {"a": spec.a, "g": _func_json(spec.g)}
    elif isinstance(spec, RotationalParabolic):
        params = {"a": spec.a, "b": spec.b, "c": spec.c, "h": _func_json(spec.h)}
    elif isinstance(spec, RotationalCGC):
        params = {"K": spec.K, "r0": spec.r0, "dr0": spec.dr0,
                  "arc_span": spec.arc_span, "step": spec.step}
    elif isinstance(spec, GeneralizedCone):
        params = {"p": spec.p, "q": spec.q, "m": list(spec.m), "n": list(spec.n)}
    elif isinstance(spec, ExpCylinder):
        params = {"m": list(spec.m), "n": list(spec.n)}
    elif isinstance(spec, ConicalPower):
        params = {"k": spec.k, "m": list(spec.m), "n": list(spec.n)}
        if spec.signs is not None:
            params["signs"] = list(spec.signs)
    else:
        raise InvalidFamilyError(f"unknown family spec {spec!r}")
    return {"family": spec.tag, "params": params}


def family_from_json(doc: dict) -> FamilySpec:
    try:
        tag = doc["family"]
        params = dict(doc["params"])
    except (KeyError, TypeError) as exc:
        raise InvalidFamilyError(f"malformed family document: {exc}") from exc
    if tag not in _TAGS:
        raise InvalidFamilyError(f"unknown family tag {tag!r}")
    if tag == "right-cylinder":
        plane = params.get("plane", "z")
        present = [c for c in "xyz" if c != plane]
        return RightCylinder(
            f=_func_field(params["f"], present[0]),
            g=_func_field(params["g"], present[1]),
            a=float(params.get("a", 0.0)),
            plane=plane,
        )
    if tag == "translation":
        return Translation(a=float(params["a"]), g=_func_field(params["g"], "y"))
    if tag == "rotational-parabolic":
        return RotationalParabolic(
            a=float(params.get("a", 0.0)), b=float(params.get("b", 0.0)),
            c=float(params.get("c", 0.0)), h=_func_field(params["h"], "z"),
        )
    if tag == "rotational-cgc":
        return RotationalCGC(
            K=float(params["K"]), r0=float(params["r0"]),
            dr0=float(params.get("dr0", 0.0)),
            arc_span=float(params.get("arc_span", 3.0)),
            step=None if params.get("step") is None else float(params["step"]),
        )
    if tag == "generalized-cone":
        spec = GeneralizedCone(
            p=float(params["p"]),
            m=tuple(params["m"]), n=tuple(params.get("n", (0.0, 0.0, 0.0))),
        )
        if "q" in params and float(params["q"]) != spec.q:
            raise InvalidFamilyError("q must equal 1 - p")
        return spec
    if tag == "exp-cylinder":
        return ExpCylinder(m=tuple(params["m"]), n=tuple(params["n"]))
    signs = params.get("signs")
    return ConicalPower(
        k=float(params["k"]), m=tuple(params["m"]),
        n=tuple(params.get("n", (0.0, 0.0, 0.0))),
        signs=None if signs is None else tuple(signs),
    )


# -- presets -----------------------------------------------------------------------

PRESETS: dict[str, FamilySpec] = {
    "paper-fig1-left": GeneralizedCone(p=2.0, m=(1.0, 1.0, 1.0)),
    "paper-fig1-middle": ExpCylinder(m=(1.0, 1.0, 1.0), n=(-1.0, 1.0, 1.0)),
    "paper-fig1-right": ConicalPower(k=2.0, m=(1.0, 1.0, 1.0)),
}

_PRESET_BOXES: dict[str, Box] = {
    "paper-fig1-left": (0.5, 2.0, 0.5, 2.0, 0.5, 2.0),
    "paper-fig1-middle": (-1.0, 1.0, -1.0, 1.0, -1.0, 1.0),
    "paper-fig1-right": (0.5, 2.0, 0.5, 2.0, -1.0, -0.26),
}


def preset_surface(name: str) -> SeparableSurface:
    if name not in PRESETS:
        raise InvalidFamilyError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return build_surface(PRESETS[name])


def preset_box(name: str) -> Box:
    if name not in _PRESET_BOXES:
        raise InvalidFamilyError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return _PRESET_BOXES[name]
