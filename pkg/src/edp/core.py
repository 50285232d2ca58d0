"""Self-consistent spectra for the deformation f(E) = (1 + lam*E)**q.

A level of the deformed problem solves

    E = (1 + lam*E)**(q/2) * E0

where E0 is the undeformed (lam = 0) energy.  For q in {0, 1, 2, 4} the
fixed point has a closed form; any other exponent goes through a homotopy
continuation in lam that starts from E = E0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from scipy.optimize import brentq

from .errors import ComplexRootError, ContinuationError, DomainError, EDPError, PoleError

__all__ = [
    "BaseSpectrum",
    "SaturationModel",
    "SolvedLevel",
    "base_energy",
    "fixed_point_residual",
    "saturation_limit",
    "solve",
    "solve_closed",
    "solve_generic",
    "spectrum_table",
]

CLOSED_FORM_Q = (0.0, 1.0, 2.0, 4.0)
POLE_TOL = 1e-12

Kind = Literal["harmonic_oscillator", "hydrogen", "quarkonia"]
Branch = Literal["plus", "minus", "unique"]


@dataclass(frozen=True)
class SaturationModel:
    """Deformation parameters: ``lam`` (inverse energy) and exponent ``q``."""

    lam: float
    q: float = 1.0

    def __post_init__(self) -> None:
        if not self.q >= 0:
            raise ValueError(f"q must be non-negative, got {self.q}")

    @property
    def closed_form(self) -> bool:
        return float(self.q) in CLOSED_FORM_Q

    def f(self, energy: float) -> float:
        return (1.0 + self.lam * energy) ** self.q


@dataclass(frozen=True)
class BaseSpectrum:
    """Generator of undeformed energies E0(n).

    ``hbar_omega`` is used by the oscillator, ``rydberg`` by hydrogen and
    ``k2``/``p2`` (squares of k and p) by quarkonia.  ``k2`` may be negative:
    the fitted quarkonium spectra need beta > 0 to rise with n.
    """

    kind: Kind
    hbar_omega: float = 1.0
    rydberg: float = 0.5
    k2: float = 1.0
    p2: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in ("harmonic_oscillator", "hydrogen", "quarkonia"):
            raise ValueError(f"unknown spectrum kind {self.kind!r}")
        if self.kind == "harmonic_oscillator" and not self.hbar_omega > 0:
            raise ValueError("hbar_omega must be positive")
        if self.kind == "hydrogen" and not self.rydberg > 0:
            raise ValueError("rydberg must be positive")

    @property
    def n_min(self) -> int:
        return 1 if self.kind == "hydrogen" else 0

    @property
    def energy_power(self) -> int:
        """Power of f(E) multiplying E0: 1/2 for HO and hydrogen, 1 for quarkonia.

        Returned as the factor applied to q to obtain the exponent of
        (1 + lam*E) in units of 1/2.
        """
        return 2 if self.kind == "quarkonia" else 1


@dataclass(frozen=True)
class SolvedLevel:
    n: int
    l: int
    base_energy: float
    energy: float
    branch: Branch
    valid: bool = True
    reason: str = ""


def base_energy(spec: BaseSpectrum, n: int, l: int = 0) -> float:
    """Undeformed energy of level ``n``.

    The radial energies do not depend on ``l``; it is accepted so callers
    can carry it through to the solved rows.
    """
    if n < spec.n_min:
        raise DomainError(f"{spec.kind} requires n >= {spec.n_min}, got {n}")
    if l < 0:
        raise DomainError(f"l must be non-negative, got {l}")
    if spec.kind == "harmonic_oscillator":
        return spec.hbar_omega * (n + 1.5)
    if spec.kind == "hydrogen":
        return -spec.rydberg / (n * n)
    s = float((2 * n + 1) ** 2)
    return -(spec.k2 / 16.0) * (s + spec.p2 / s)


def _residual(model: SaturationModel, e0: float, energy: float) -> float:
    base = 1.0 + model.lam * energy
    if base < 0:
        raise DomainError(f"1 + lam*E = {base:.3g} < 0")
    return energy - base ** (model.q / 2.0) * e0


def solve_closed(model: SaturationModel, e0: float, n: int = 0, l: int = 0) -> SolvedLevel:
    """Closed-form fixed point for q in {0, 1, 2, 4}.

    The branch taken is the one that tends to ``e0`` as lam -> 0.  Failures
    (pole for q=2, negative discriminant for q=4) come back as a level with
    ``valid=False`` instead of raising.
    """
    q = float(model.q)
    lam = model.lam
    x = lam * e0
    if q == 0.0:
        return SolvedLevel(n, l, e0, e0, "unique")
    if q == 1.0:
        root = math.sqrt(x * x + 4.0)
        # x + root rewritten to avoid cancellation for large negative x
        s = x + root if x >= 0 else 4.0 / (root - x)
        return SolvedLevel(n, l, e0, e0 * s / 2.0, "plus")
    if q == 2.0:
        denom = 1.0 - x
        if abs(denom) < POLE_TOL:
            return SolvedLevel(n, l, e0, math.nan, "unique", False, f"pole: 1 - lam*E0 = {denom:.3g}")
        return SolvedLevel(n, l, e0, e0 / denom, "unique")
    if q == 4.0:
        disc = 1.0 - 4.0 * x
        if disc < 0:
            return SolvedLevel(n, l, e0, math.nan, "minus", False, f"complex root: 1 - 4*lam*E0 = {disc:.3g}")
        # (1 - 2x - sqrt(disc)) / (2 lam^2 e0), rationalised; exact at lam = 0 and e0 = 0
        return SolvedLevel(n, l, e0, 2.0 * e0 / (1.0 - 2.0 * x + math.sqrt(disc)), "minus")
    raise ValueError(f"no closed form for q={model.q}")


def _step_root(model: SaturationModel, e0: float, guess: float) -> float:
    """Root of the fixed-point residual near ``guess`` for one continuation step."""
    lam, half_q = model.lam, model.q / 2.0

    if lam > 0:
        lo_lim, hi_lim = -1.0 / lam, math.inf
    elif lam < 0:
        lo_lim, hi_lim = -math.inf, -1.0 / lam
    else:
        return e0

    def h(e: float) -> float:
        return e - max(0.0, 1.0 + lam * e) ** half_q * e0

    def dh(e: float) -> float:
        base = 1.0 + lam * e
        if base <= 0:
            return math.inf
        return 1.0 - half_q * lam * e0 * base ** (half_q - 1.0)

    def accept(root: float) -> bool:
        # a vanishing slope means the root is degenerate (pole or fold)
        return abs(h(root)) <= 1e-12 * max(1.0, abs(root)) and abs(dh(root)) >= 1e-9

    guess = min(max(guess, lo_lim), hi_lim)
    h0 = h(guess)
    if h0 == 0.0 and accept(guess):
        return guess
    slope = dh(guess)
    if not math.isfinite(slope) or slope == 0.0:
        direction = 1.0 if h0 < 0 else -1.0
    else:
        direction = -math.copysign(1.0, h0 / slope)

    step = 1e-3 * max(1.0, abs(guess))
    a = guess
    for _ in range(200):
        b = a + direction * step
        if b <= lo_lim or b >= hi_lim:
            b = lo_lim if direction < 0 else hi_lim
        hb = h(b)
        if hb == 0.0:
            if accept(b):
                return b
            break
        if (hb > 0) != (h0 > 0):
            lo, hi = sorted((a, b))
            root = brentq(h, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=500)
            if accept(root):
                return root
            break
        if b in (lo_lim, hi_lim):
            break
        a, h0 = b, hb
        step *= 2.0
    raise ContinuationError(
        f"lost bracket at lam={lam}, E0={e0} (root hit the 1 + lam*E = 0 boundary or merged)"
    )


def solve_generic(
    model: SaturationModel, e0: float, n: int = 0, l: int = 0, max_steps: int = 64
) -> SolvedLevel:
    """Fixed point by continuation in lam from lam = 0, where E = e0.

    The path is walked in 8 equal increments; if a step loses its bracket
    the walk is retried with ``max_steps`` increments.  Each step starts from
    the previous root, clipped into the admissible region 1 + lam*E >= 0.
    """
    if model.lam == 0.0 or model.q == 0.0 or e0 == 0.0:
        return SolvedLevel(n, l, e0, e0, "unique")

    last_error: Exception | None = None
    for steps in sorted({min(8, max_steps), max_steps}):
        energy = e0
        try:
            for i in range(1, steps + 1):
                lam_i = model.lam * i / steps
                energy = _step_root(SaturationModel(lam_i, model.q), e0, energy)
        except ContinuationError as exc:
            last_error = exc
            continue
        return SolvedLevel(n, l, e0, energy, "unique")
    assert last_error is not None
    raise last_error


def solve(model: SaturationModel, e0: float, n: int = 0, l: int = 0) -> SolvedLevel:
    """Closed form when available, continuation otherwise; failures flagged."""
    if model.closed_form:
        return solve_closed(model, e0, n, l)
    try:
        return solve_generic(model, e0, n, l)
    except EDPError as exc:
        return SolvedLevel(n, l, e0, math.nan, "unique", False, str(exc))


def saturation_limit(model: SaturationModel) -> float:
    """Large-n limit -1/lam of the deformed spectrum."""
    if model.lam == 0:
        raise DomainError("lam = 0: the spectrum does not saturate")
    if model.q < 1:
        raise DomainError(f"saturation needs q >= 1, got {model.q}")
    return -1.0 / model.lam


def spectrum_table(
    spec: BaseSpectrum, model: SaturationModel, n_max: int, l: int = 0
) -> list[SolvedLevel]:
    """One solved level for each n from the spectrum's lowest n to ``n_max``.

    For quarkonia the energy scales with f(E) itself rather than its square
    root, so the exponent handed to the solver is doubled.
    """
    if n_max < spec.n_min:
        raise DomainError(f"n_max must be >= {spec.n_min} for {spec.kind}")
    effective = SaturationModel(model.lam, model.q * spec.energy_power)
    rows = []
    for n in range(spec.n_min, n_max + 1):
        e0 = base_energy(spec, n, l)
        rows.append(solve(effective, e0, n, l))
    return rows


def fixed_point_residual(model: SaturationModel, e0: float, energy: float) -> float:
    """|E - (1 + lam*E)**(q/2) * E0|, the certificate checked by the tests."""
    return abs(_residual(model, e0, energy))
