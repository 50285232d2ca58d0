"""Point and gauge transformation of g(x)[P y'' + Q y' + R y] = 0.

The coordinate change x = F(u) with du/dx = 1/sqrt(g P) and the gauge
factor exp(-int W du) remove the first derivative, leaving

    -phi'' + [v(u) - g(F) R(F)] phi = 0,     v = W**2 + W'.

Splitting (hbar^2/2m)(v - gR) into V(u) - E with E constant turns it into
a Schroedinger equation.  Everything here is numeric: the coefficient
functions are plain callables and the closed forms for the two confluent
hypergeometric cases (oscillator, hydrogen) live alongside as checks.

Units: hbar = 1 throughout; ``mass`` is the particle mass.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import core
from .errors import DomainError, QuantumNumberError, SplitError
from .specfun import hyp1f1

__all__ = [
    "TransformSpec",
    "TransformResult",
    "oscillator_spec",
    "hydrogen_spec",
    "map_coordinate",
    "inverse_map",
    "map_derivative",
    "gauge_weight",
    "effective_potential",
    "split_potential_energy",
    "ho_eigenfunction",
    "hydrogen_eigenfunction",
    "oscillator_closed_forms",
    "hydrogen_closed_forms",
]

Fn = Callable[[float], float]

QUAD_TOL = 1e-10
FD_STEP = 1e-5


def _step(z: float) -> float:
    return FD_STEP * max(1.0, abs(z))


@dataclass(frozen=True)
class TransformSpec:
    """Coefficients of L_x = P d2/dx2 + Q d/dx + R, multiplier g, and map anchor.

    ``x_domain`` is the open interval on which g*P > 0.  ``x_ref`` is the
    lower limit of the coordinate integral; when it coincides with a domain
    endpoint the integral is taken through t = x_ref + s**2, which absorbs an
    inverse square-root endpoint.
    """

    P: Fn
    Q: Fn
    R: Fn
    g: Fn
    x_domain: tuple[float, float]
    x_ref: float = 0.0
    sign: int = 1
    params: Mapping[str, float] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        lo, hi = self.x_domain
        if not lo < hi:
            raise ValueError("x_domain must be an increasing interval")
        if not lo <= self.x_ref <= hi:
            raise ValueError("x_ref must lie in the closed domain")
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))

    def gp(self, x: float) -> float:
        return self.g(x) * self.P(x)

    def interior(self, x: float) -> bool:
        lo, hi = self.x_domain
        return lo < x < hi


@dataclass(frozen=True)
class TransformResult:
    u_grid: np.ndarray
    F: np.ndarray
    W: np.ndarray
    v: np.ndarray
    V: np.ndarray
    E: float
    constancy_defect: float
    coefficients: tuple[float, ...] = ()


def oscillator_spec(k: float, c: float, a: float = 0.0) -> TransformSpec:
    """Confluent hypergeometric equation with g = k**2 (oscillator case)."""
    return TransformSpec(
        P=lambda x: x,
        Q=lambda x: c - x,
        R=lambda x: -a,
        g=lambda x: k * k,
        x_domain=(0.0, math.inf),
        params={"k": k, "c": c, "a": a},
        name="harmonic_oscillator",
    )


def hydrogen_spec(k: float, c: float, a: float = 0.0) -> TransformSpec:
    """Confluent hypergeometric equation with g = k**2/x (Coulomb case)."""
    return TransformSpec(
        P=lambda x: x,
        Q=lambda x: c - x,
        R=lambda x: -a,
        g=lambda x: k * k / x,
        x_domain=(0.0, math.inf),
        params={"k": k, "c": c, "a": a},
        name="hydrogen",
    )


def _integrand(spec: TransformSpec, t: float) -> float:
    gp = spec.gp(t)
    if not gp > 0:
        raise DomainError(f"g*P = {gp!r} is not positive at x = {t}")
    return 1.0 / math.sqrt(gp)


def map_coordinate(spec: TransformSpec, x: float) -> float:
    """u(x) = sign * integral from x_ref to x of dt / sqrt(g(t) P(t))."""
    if x == spec.x_ref:
        return 0.0
    if not spec.interior(x):
        raise DomainError(f"x = {x} is outside the open domain {spec.x_domain}")
    lo, hi = spec.x_domain
    ref = spec.x_ref
    opts = dict(epsabs=QUAD_TOL, epsrel=1e-13, limit=200)
    if ref == lo and x > ref:
        val, _ = quad(lambda s: 2.0 * s * _integrand(spec, ref + s * s), 0.0, math.sqrt(x - ref), **opts)
    elif ref == hi and x < ref:
        val, _ = quad(lambda s: 2.0 * s * _integrand(spec, ref - s * s), 0.0, math.sqrt(ref - x), **opts)
        val = -val
    else:
        val, _ = quad(lambda t: _integrand(spec, t), ref, x, **opts)
    return spec.sign * val


def inverse_map(spec: TransformSpec, u: float) -> float:
    """x = F(u), inverting the monotone coordinate map by bracketed root finding."""
    if u == 0.0:
        return spec.x_ref
    lo, hi = spec.x_domain
    # sign*u > 0 means x lies above x_ref
    upward = spec.sign * u > 0
    limit = hi if upward else lo
    if spec.x_ref == limit:
        raise DomainError(f"u = {u} is outside the image of the domain")

    def resid(x: float) -> float:
        return map_coordinate(spec, x) - u

    near = spec.x_ref
    width = 1.0
    far = None
    for _ in range(200):
        trial = spec.x_ref + width if upward else spec.x_ref - width
        if math.isfinite(limit) and (trial >= limit if upward else trial <= limit):
            trial = 0.5 * (near + limit)
            if abs(trial - limit) <= 1e-15 * max(1.0, abs(limit)):
                break
        r = resid(trial)
        if r == 0.0:
            return trial
        if (r > 0) == (spec.sign * u > 0):
            far = trial
            break
        near = trial
        width *= 2.0
    if far is None:
        raise DomainError(f"u = {u} is outside the image of the domain")
    a, b = sorted((near, far))
    if a == spec.x_ref and not spec.interior(a):
        a = a + 0.0  # endpoint allowed: map_coordinate(x_ref) = 0
    return brentq(resid, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def map_derivative(spec: TransformSpec, x: float) -> float:
    """dF/du expressed at x = F(u): sign * sqrt(g(x) P(x))."""
    return spec.sign * math.sqrt(spec.gp(x))


def _second_derivative(spec: TransformSpec, x: float, h_u: float) -> float:
    # F'' = dF'/du = (dF'/dx) F'; a u-step h_u moves x by about |F'| h_u
    fp = map_derivative(spec, x)
    h = h_u * abs(fp)
    lo, hi = spec.x_domain
    if x - h <= lo or x + h >= hi:
        raise DomainError(f"x = {x} is too close to the domain boundary")
    d = (map_derivative(spec, x + h) - map_derivative(spec, x - h)) / (2.0 * h)
    return d * fp


def _weight_at_x(spec: TransformSpec, x: float, h_u: float) -> float:
    fp = map_derivative(spec, x)
    if fp == 0.0:
        raise DomainError(f"F'(u) vanishes at x = {x}")
    return (spec.g(x) * spec.Q(x) - _second_derivative(spec, x, h_u)) / (2.0 * fp)


def gauge_weight(spec: TransformSpec, u: float) -> float:
    """W(u) = [g(F) Q(F) - F''(u)] / (2 F'(u))."""
    return _weight_at_x(spec, inverse_map(spec, u), _step(u))


def effective_potential(spec: TransformSpec, u: float) -> float:
    """v(u) = W(u)**2 + W'(u), W' by central difference in u."""
    h = _step(u)
    w = gauge_weight(spec, u)
    dw = (gauge_weight(spec, u + h) - gauge_weight(spec, u - h)) / (2.0 * h)
    return w * w + dw


DEFAULT_BASIS: tuple[Fn, ...] = (
    lambda u: u * u,
    lambda u: u,
    lambda u: 1.0 / u,
    lambda u: 1.0 / (u * u),
)


def split_potential_energy(
    spec: TransformSpec,
    u_grid: Sequence[float],
    mass: float = 0.5,
    potential: Fn | Sequence[Fn] | None = None,
    tol: float = 1e-6,
) -> TransformResult:
    """Separate s(u) = (1/2m)[v(u) - g(F)R(F)] into V(u) - E.

    ``potential`` is either a fixed model V(u), in which case E is minus the
    mean of s - V, or a sequence of basis shapes whose coefficients are fitted
    by least squares together with the constant -E.  Without it, V is taken
    to have no constant part and is expanded in u**2, u, 1/u, 1/u**2.
    The default ``mass = 1/2`` gives hbar**2/2m = 1.
    """
    u = np.asarray(u_grid, dtype=float)
    if u.ndim != 1 or u.size < 8:
        raise ValueError("u_grid needs at least 8 points")
    if np.any(np.diff(u) <= 0):
        raise ValueError("u_grid must be strictly increasing")

    xs = np.array([inverse_map(spec, ui) for ui in u])
    W = np.array([_weight_at_x(spec, x, _step(ui)) for x, ui in zip(xs, u)])
    v = np.array([effective_potential(spec, ui) for ui in u])
    gR = np.array([spec.g(x) * spec.R(x) for x in xs])
    s = (v - gR) / (2.0 * mass)

    coeffs: tuple[float, ...] = ()
    if callable(potential):
        V = np.array([potential(ui) for ui in u])
        E = -float(np.mean(s - V))
    else:
        basis = DEFAULT_BASIS if potential is None else tuple(potential)
        A = np.column_stack([[b(ui) for ui in u] for b in basis] + [np.ones_like(u)])
        # column scaling keeps the normal equations well conditioned
        scale = np.linalg.norm(A, axis=0)
        sol, *_ = np.linalg.lstsq(A / scale, s, rcond=None)
        sol = sol / scale
        coeffs = tuple(float(c) for c in sol[:-1])
        V = A[:, :-1] @ sol[:-1]
        E = -float(sol[-1])

    defect = float(np.max(np.abs(s - V + E)))
    if defect > tol * (1.0 + abs(E)):
        raise SplitError(f"v - gR is not V(u) - E with constant E (defect {defect:.3g})")
    return TransformResult(u, xs, W, v, V, E, defect, coeffs)


# closed forms for the two confluent hypergeometric cases


def oscillator_closed_forms(k: float, c: float, a: float = 0.0, mass: float = 0.5) -> dict[str, Fn | float]:
    def W(u):
        return (2 * c - 1) / (2 * u) - u * k * k / 4

    def v(u):
        return (4 * c * c + 3 - 8 * c) / (4 * u * u) + u * u * k**4 / 16 - c * k * k / 2

    def V(u):
        return ((4 * c * c + 3 - 8 * c) / (4 * u * u) + u * u * k**4 / 16) / (2 * mass)

    return {
        "F": lambda u: u * u * k * k / 4,
        "W": W,
        "v": v,
        "V": V,
        "E": k * k * (c - 2 * a) / (4 * mass),
    }


def hydrogen_closed_forms(k: float, c: float, a: float = 0.0, mass: float = 0.5) -> dict[str, Fn | float]:
    def W(u):
        return c / (2 * u) - k / 2

    def v(u):
        return c * c / (4 * u * u) + k * k / 4 - c * k / (2 * u) - c / (2 * u * u)

    def V(u):
        return (c * (c - 2) / (4 * u * u) + (2 * a - c) * k / (2 * u)) / (2 * mass)

    return {
        "F": lambda u: u * k,
        "W": W,
        "v": v,
        "V": V,
        "E": -k * k / (8 * mass),
    }


# eigenfunctions


def ho_eigenfunction(
    n: int,
    l: int,
    model: core.SaturationModel,
    omega: float,
    r: float | np.ndarray,
    hbar: float = 1.0,
    mass: float = 1.0,
) -> float | np.ndarray:
    """Radial oscillator eigenfunction with the self-consistent frequency.

    phi(r) = r**(l+1) exp(-m omega sqrt(f) r**2 / 2 hbar) 1F1((l-n)/2; l+3/2; k**2 r**2/4)
    with k**2 = 4 m omega sqrt(f) / hbar and f = f(E_n) at the solved E_n.
    Unnormalised.
    """
    if n < 0 or l < 0 or l > n:
        raise QuantumNumberError(f"need 0 <= l <= n, got n={n}, l={l}")
    if (n - l) % 2:
        raise QuantumNumberError(f"n - l must be even for a terminating series, got n={n}, l={l}")
    e_n = oscillator_energy(n, model, omega, hbar)
    sqrt_f = math.sqrt(model.f(e_n))
    k2 = 4.0 * mass * omega * sqrt_f / hbar
    a = (l - n) / 2
    c = l + 1.5

    def one(ri: float) -> float:
        return ri ** (l + 1) * math.exp(-ri * ri * k2 / 8.0) * hyp1f1(a, c, ri * ri * k2 / 4.0)

    if np.ndim(r) == 0:
        return one(float(r))
    return np.array([one(float(ri)) for ri in np.ravel(r)]).reshape(np.shape(r))


def oscillator_energy(n: int, model: core.SaturationModel, omega: float, hbar: float = 1.0) -> float:
    """Self-consistent oscillator level E_n for hbar*omega*(n + 3/2)."""
    spec = core.BaseSpectrum("harmonic_oscillator", hbar_omega=hbar * omega)
    level = core.solve(model, core.base_energy(spec, n))
    if not level.valid:
        raise DomainError(f"level n={n} has no admissible energy: {level.reason}")
    return level.energy


def hydrogen_eigenfunction(
    n: int,
    l: int,
    model: core.SaturationModel,
    a0: float,
    u: float | np.ndarray,
    rydberg: float = 0.5,
    exponent: str = "printed",
) -> float | np.ndarray:
    """Coulomb radial function with the deformation factor sqrt(f(E_n)).

    phi(u) = u**p exp(-u sqrt(f)/(n a0)) 1F1(l+1-n; 2(l+1); 2 sqrt(f) u/(n a0))

    ``exponent="printed"`` uses p = l - 1; ``exponent="corrected"`` uses the
    textbook p = l + 1 (u times the radial function R_nl).  Unnormalised.
    """
    if n < 1 or l < 0 or l >= n:
        raise QuantumNumberError(f"need 0 <= l < n, got n={n}, l={l}")
    if exponent not in ("printed", "corrected"):
        raise ValueError("exponent must be 'printed' or 'corrected'")
    power = l - 1 if exponent == "printed" else l + 1
    spec = core.BaseSpectrum("hydrogen", rydberg=rydberg)
    level = core.solve(model, core.base_energy(spec, n, l))
    if not level.valid:
        raise DomainError(f"level n={n} has no admissible energy: {level.reason}")
    sqrt_f = math.sqrt(model.f(level.energy))
    scale = sqrt_f / (n * a0)

    def one(ui: float) -> float:
        return ui**power * math.exp(-ui * scale) * hyp1f1(l + 1 - n, 2 * (l + 1), 2 * scale * ui)

    if np.ndim(u) == 0:
        return one(float(u))
    return np.array([one(float(ui)) for ui in np.ravel(u)]).reshape(np.shape(u))
