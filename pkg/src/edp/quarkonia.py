"""S-wave heavy quarkonium masses with a linear energy dependence (q = 1).

The undeformed levels are E0_n = beta_n / 16 with

    beta_n = -k2 * ((2n+1)**2 + p2 / (2n+1)**2),

and k2 -> k2 * (1 + lam*E_n) gives E_n = beta_n / (16 - lam*beta_n).  The
spin-averaged mass is M = m_q + m_qbar + E_n.  State nS corresponds to
n = N - 1.

k2 and p2 are the squares of the usual parameters and are allowed to be
negative: rising spectra need beta_n > 0, i.e. k2 < 0.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Literal

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "QUARK_MASSES",
    "SPLITTINGS",
    "ExperimentalTable",
    "MassRow",
    "QuarkoniaFit",
    "QuarkoniaParams",
    "beta",
    "energy",
    "fit",
    "load_experimental",
    "mass",
    "mass_table",
    "state_label",
]

System = Literal["ccbar", "bbbar"]

# constituent masses used for the tables; the first-pass values are kept for reference
QUARK_MASSES = {"ccbar": 1.697, "bbbar": 4.568}
INITIAL_QUARK_MASSES = {"ccbar": 1.209, "bbbar": 4.350}

# pairs (lower n, upper n) whose mass differences are fitted
SPLITTINGS: dict[str, tuple[tuple[int, int], tuple[int, int]]] = {
    "ccbar": ((0, 1), (2, 3)),
    "bbbar": ((0, 2), (1, 3)),
}

DATA_FILE = "experimental_masses.csv"
POLE_TOL = 1e-10
FIT_TOL = 1e-8


def state_label(n: int) -> str:
    return f"{n + 1}S"


def state_index(label: str) -> int:
    if not label.endswith("S") or not label[:-1].isdigit() or int(label[:-1]) < 1:
        raise ValueError(f"unrecognised state label {label!r}")
    return int(label[:-1]) - 1


def beta(n: int, k2: float, p2: float) -> float:
    """beta_n = -k2 [(2n+1)**2 + p2/(2n+1)**2]."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    s = float((2 * n + 1) ** 2)
    return -k2 * (s + p2 / s)


@dataclass(frozen=True)
class QuarkoniaParams:
    k2: float
    p2: float
    lam: float = 0.0
    quark_mass: float = QUARK_MASSES["ccbar"]
    antiquark_mass: float | None = None

    @property
    def constituent_mass(self) -> float:
        mbar = self.quark_mass if self.antiquark_mass is None else self.antiquark_mass
        return self.quark_mass + mbar

    @property
    def saturation_mass(self) -> float:
        if self.lam == 0:
            return math.inf
        return self.constituent_mass - 1.0 / self.lam


def energy(n: int, params: QuarkoniaParams) -> float:
    """E_n = beta_n / (16 - lam*beta_n)."""
    b = beta(n, params.k2, params.p2)
    denom = 16.0 - params.lam * b
    if abs(denom) < POLE_TOL:
        raise PoleError(f"16 - lam*beta vanishes at n={n}")
    return b / denom


def mass(n: int, params: QuarkoniaParams) -> float:
    return params.constituent_mass + energy(n, params)


@dataclass(frozen=True)
class ExperimentalTable:
    system: str
    rows: tuple[tuple[str, float, bool], ...]

    def __post_init__(self) -> None:
        labels = [r[0] for r in self.rows]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate state labels in {self.system} table")
        for label, m, present in self.rows:
            state_index(label)
            if present and not m > 0:
                raise ValueError(f"non-positive mass for {self.system} {label}")

    def get(self, label: str) -> float | None:
        for lab, m, present in self.rows:
            if lab == label:
                return m if present else None
        return None

    def measured(self) -> dict[int, float]:
        return {state_index(lab): m for lab, m, present in self.rows if present}


def _data_text(path: str | os.PathLike | None) -> str:
    if path is not None:
        return Path(path).read_text(encoding="utf-8")
    override = os.environ.get("EDP_DATA_DIR")
    if override:
        return (Path(override) / DATA_FILE).read_text(encoding="utf-8")
    return resources.files("edp.data").joinpath(DATA_FILE).read_text(encoding="utf-8")


def load_experimental(system: str, path: str | os.PathLike | None = None) -> ExperimentalTable:
    """Rows for ``system`` from the comma-separated data file.

    Lookup order: explicit ``path``, then ``$EDP_DATA_DIR/experimental_masses.csv``,
    then the copy shipped with the package.
    """
    text = _data_text(path)
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    rows = []
    for rec in csv.DictReader(io.StringIO("\n".join(lines))):
        if rec["system"].strip() != system:
            continue
        raw = (rec.get("mass_GeV") or "").strip()
        present = raw not in ("", "---")
        rows.append((rec["state"].strip(), float(raw) if present else math.nan, present))
    if not rows:
        raise ValueError(f"no experimental rows for system {system!r}")
    return ExperimentalTable(system, tuple(rows))


@dataclass(frozen=True)
class QuarkoniaFit:
    system: str
    lam: float
    k2: float
    p2: float
    residuals: tuple[float, float]
    converged: bool
    quark_mass: float
    n_roots: int = 1

    @property
    def params(self) -> QuarkoniaParams:
        return QuarkoniaParams(self.k2, self.p2, self.lam, self.quark_mass)


# The fit works in (K, P) = (k2, k2*p2): at lam = 0 the splittings are linear in them.


def _energy_kp(n: int, K: float, P: float, lam: float) -> float:
    s = float((2 * n + 1) ** 2)
    b = -(K * s + P / s)
    denom = 16.0 - lam * b
    if abs(denom) < POLE_TOL:
        raise PoleError(f"16 - lam*beta vanishes at n={n}")
    return b / denom


def _splitting_residuals(x, lam, pairs, targets) -> np.ndarray:
    K, P = x
    return np.array(
        [_energy_kp(j, K, P, lam) - _energy_kp(i, K, P, lam) - t for (i, j), t in zip(pairs, targets)]
    )


def _linear_guess(pairs, targets) -> tuple[float, float]:
    # E_n = -(K s + P/s)/16 at lam = 0
    A = np.empty((2, 2))
    for row, (i, j) in enumerate(pairs):
        si, sj = (2 * i + 1) ** 2, (2 * j + 1) ** 2
        A[row] = [-(sj - si) / 16.0, -(1.0 / sj - 1.0 / si) / 16.0]
    if abs(np.linalg.det(A)) < 1e-14:
        raise DomainError("splitting pairs do not determine (k, p)")
    K, P = np.linalg.solve(A, np.asarray(targets, dtype=float))
    return float(K), float(P)


def _newton(x0, lam, pairs, targets, max_iter=200):
    """Damped Newton with a central-difference Jacobian; None on failure."""
    x = np.array(x0, dtype=float)
    try:
        r = _splitting_residuals(x, lam, pairs, targets)
    except PoleError:
        return None
    for _ in range(max_iter):
        if np.max(np.abs(r)) < FIT_TOL:
            return x, r
        J = np.empty((2, 2))
        try:
            for col in range(2):
                h = 1e-6 * max(1.0, abs(x[col]))
                e = np.zeros(2)
                e[col] = h
                J[:, col] = (
                    _splitting_residuals(x + e, lam, pairs, targets)
                    - _splitting_residuals(x - e, lam, pairs, targets)
                ) / (2 * h)
            dx = np.linalg.solve(J, -r)
        except (PoleError, np.linalg.LinAlgError):
            return None
        norm = np.max(np.abs(r))
        t = 1.0
        while t > 1e-6:
            try:
                r_new = _splitting_residuals(x + t * dx, lam, pairs, targets)
            except PoleError:
                t *= 0.5
                continue
            if np.max(np.abs(r_new)) < norm:
                break
            t *= 0.5
        else:
            return None
        x = x + t * dx
        r = r_new
    if np.max(np.abs(r)) < FIT_TOL:
        return x, r
    return None


_SEEDS = [(K, P) for K in (-0.25, -0.5, -1.0, -2.0, -4.0, -8.0) for P in (-8.0, -4.0, -1.0, 1.0, 4.0, 8.0)]
N_CHECK = 10


def _physical(K: float, P: float, lam: float) -> bool:
    try:
        es = [_energy_kp(n, K, P, lam) for n in range(N_CHECK)]
    except PoleError:
        return False
    return all(b > a for a, b in zip(es, es[1:]))


def fit(
    system: System,
    lam: float,
    exp: ExperimentalTable | None = None,
    quark_mass: float | None = None,
    select: Literal["experiment", "continuation"] = "experiment",
) -> QuarkoniaFit:
    """Fit (k2, p2) so the model reproduces the two measured splittings.

    The splitting equations are nonlinear for lam != 0 and have several
    roots.  ``select="continuation"`` follows the root connected to the
    lam = 0 solution by stepping lam from zero.  ``select="experiment"``
    collects the roots reached from a fixed set of starting points, keeps
    those whose masses rise with n without a pole over 1S..10S, and returns
    the one closest (least squares) to the measured absolute masses.
    """
    if system not in SPLITTINGS:
        raise ValueError(f"unknown system {system!r}")
    exp = exp if exp is not None else load_experimental(system)
    quark_mass = QUARK_MASSES[system] if quark_mass is None else quark_mass
    if not quark_mass > 0:
        raise DomainError("quark_mass must be positive")
    pairs = SPLITTINGS[system]
    measured = exp.measured()
    missing = [state_label(n) for pair in pairs for n in pair if n not in measured]
    if missing:
        raise DomainError(f"{system}: missing experimental masses for {missing}")
    targets = [measured[j] - measured[i] for i, j in pairs]
    guess = _linear_guess(pairs, targets)

    # continuation path from the lam = 0 solution
    path_root = None
    x = guess
    steps = 1 if lam == 0 else 16
    for i in range(1, steps + 1):
        out = _newton(x, lam * i / steps, pairs, targets)
        if out is None:
            break
        x = tuple(out[0])
    else:
        path_root = out

    if select == "continuation":
        roots = [path_root] if path_root is not None else []
    elif select == "experiment":
        roots = [path_root] if path_root is not None else []
        for seed in [guess, *_SEEDS]:
            out = _newton(seed, lam, pairs, targets)
            if out is not None:
                roots.append(out)
    else:
        raise ValueError(f"unknown root selection {select!r}")

    distinct: list[tuple[np.ndarray, np.ndarray]] = []
    for xr, rr in roots:
        if not _physical(xr[0], xr[1], lam):
            continue
        if any(np.allclose(xr, d[0], rtol=1e-6, atol=1e-9) for d in distinct):
            continue
        distinct.append((xr, rr))
    if not distinct:
        raise ConvergenceError(f"{system} at lam={lam}: no physical solution of the splitting equations")

    total = 2.0 * quark_mass

    def cost(item) -> float:
        K, P = item[0]
        return sum((total + _energy_kp(n, K, P, lam) - m) ** 2 for n, m in measured.items())

    best_x, best_r = min(distinct, key=cost)
    K, P = (float(v) for v in best_x)
    return QuarkoniaFit(
        system=system,
        lam=lam,
        k2=K,
        p2=P / K,
        residuals=(float(best_r[0]), float(best_r[1])),
        converged=bool(np.max(np.abs(best_r)) < FIT_TOL),
        quark_mass=quark_mass,
        n_roots=len(distinct),
    )


@dataclass(frozen=True)
class MassRow:
    state: str
    lam: float
    mass: float
    experimental: float | None
    deviation: float | None
    ok: bool = True
    note: str = ""


def mass_table(
    system: System,
    lambda_values,
    exp: ExperimentalTable | None = None,
    quark_mass: float | None = None,
    n_max: int = 8,
    select: Literal["experiment", "continuation"] = "experiment",
) -> list[MassRow]:
    """Masses 1S..(n_max+1)S for each lam, with a saturation row when lam < 0.

    A lam whose fit fails produces a single row with ``ok=False`` and the
    table continues with the next value.
    """
    exp = exp if exp is not None else load_experimental(system)
    quark_mass = QUARK_MASSES[system] if quark_mass is None else quark_mass
    rows: list[MassRow] = []
    for lam in lambda_values:
        try:
            result = fit(system, lam, exp, quark_mass, select=select)
        except (ConvergenceError, DomainError) as exc:
            rows.append(MassRow("fit", lam, math.nan, None, None, False, str(exc)))
            continue
        params = result.params
        for n in range(n_max + 1):
            label = state_label(n)
            m = mass(n, params)
            e = exp.get(label)
            rows.append(MassRow(label, lam, m, e, None if e is None else m - e))
        if lam < 0:
            rows.append(MassRow("saturation", lam, params.saturation_mass, None, None))
    return rows
