"""Schwarz-function coefficients via Schur parameters, plus the two lemma predicates.

``w(z) = z * sigma(z)`` where sigma is the Schur function with parameters
gamma_0..gamma_m, built by the backward Moebius recursion

    sigma_m = gamma_m,
    sigma_k = (gamma_k + z sigma_{k+1}) / (1 + conj(gamma_k) z sigma_{k+1}).

The recursion only uses ring operations and ``conjugate``, so it runs on
Fractions (exact), floats, complex numbers and numpy arrays alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .classmodel import ArityMismatch

LEMMA_TOL = 1e-12
DISK_TOL = 1e-15


class ParamOutOfDisk(ValueError):
    pass


@dataclass(frozen=True)
class SchurParams:
    gamma: tuple

    def __init__(self, gamma: Sequence):
        object.__setattr__(self, "gamma", tuple(gamma))
        if not self.gamma:
            raise ValueError("at least one Schur parameter is required")

    @property
    def m(self) -> int:
        return len(self.gamma) - 1


@dataclass(frozen=True)
class SchwarzCoeffs:
    c: tuple
    certified: bool = False

    def __len__(self):
        return len(self.c)

    def __getitem__(self, k):
        return self.c[k]


@dataclass(frozen=True)
class PSParams:
    mu: Fraction
    nu: Fraction


def _conj(v):
    return v.conjugate() if hasattr(v, "conjugate") else v


def _check_disk(gamma):
    for g in gamma:
        mod = np.abs(g) if isinstance(g, np.ndarray) else abs(g)
        if np.any(mod > 1 + DISK_TOL):
            raise ParamOutOfDisk(f"Schur parameter outside the closed unit disk: {g!r}")


def schur_series(gamma: Sequence, N: int) -> list:
    """Taylor coefficients sigma_0..sigma_{N-1} of the Schur function."""
    if N < 1:
        raise ValueError("N must be at least 1")
    gamma = list(gamma)
    zero = gamma[-1] * 0
    sigma = [gamma[-1]] + [zero] * (N - 1)
    for g in reversed(gamma[:-1]):
        zs = [zero] + sigma[:-1]  # z * sigma_{k+1}
        gbar = _conj(g)
        num = [g + zs[0]] + zs[1:]
        den = [gbar * t for t in zs]  # plus the constant 1
        out = []
        for k in range(N):
            acc = num[k]
            for j in range(1, k + 1):
                acc = acc - den[j] * out[k - j]
            out.append(acc)
        sigma = out
    return sigma


def schur_to_coeffs(params: SchurParams | Sequence, N: int = 4) -> SchwarzCoeffs:
    gamma = params.gamma if isinstance(params, SchurParams) else tuple(params)
    _check_disk(gamma)
    gamma = [Fraction(g) if isinstance(g, int) else g for g in gamma]
    return SchwarzCoeffs(tuple(schur_series(gamma, N)), certified=True)


def carlson_satisfied(c, tol: float = LEMMA_TOL) -> bool:
    """|c2| <= 1 - |c1|^2 and, when c4 is present, |c4| <= 1 - |c1|^2 - |c2|^2."""
    c = c.c if isinstance(c, SchwarzCoeffs) else tuple(c)
    if len(c) < 2:
        raise ArityMismatch("need at least c1 and c2")
    a1, a2 = abs(c[0]), abs(c[1])
    ok = a2 <= 1 - a1 ** 2 + tol
    if len(c) >= 4:
        ok = ok and abs(c[3]) <= 1 - a1 ** 2 - a2 ** 2 + tol
    return bool(ok)


def ps_admissible(p: PSParams | tuple) -> bool:
    """(mu, nu) in D1 or D2, the region where |c3 + mu c1 c2 + nu c1^3| <= 1.

    D1 = {|mu| <= 1/2, |nu| <= 1};
    D2 = {1/2 <= |mu| <= 2, (4/27)(|mu|+1)^3 - (|mu|+1) <= nu <= 1}.
    """
    mu, nu = (p.mu, p.nu) if isinstance(p, PSParams) else p
    mu, nu = _exact(mu), _exact(nu)
    amu = abs(mu)
    if amu <= Fraction(1, 2) and abs(nu) <= 1:
        return True
    if Fraction(1, 2) <= amu <= 2:
        lower = Fraction(4, 27) * (amu + 1) ** 3 - (amu + 1)
        return lower <= nu <= 1
    return False


def _exact(v):
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    return v


def ps_functional(c, p: PSParams | tuple):
    c = c.c if isinstance(c, SchwarzCoeffs) else tuple(c)
    if len(c) < 3:
        raise ArityMismatch("need c1, c2, c3")
    mu, nu = (p.mu, p.nu) if isinstance(p, PSParams) else p
    return abs(c[2] + mu * c[0] * c[1] + nu * c[0] ** 3)


def ps_grid(step: Fraction = Fraction(1, 20)) -> list:
    """Admissible (mu, nu) on a rational grid over [-2, 2] x [-1, 1]."""
    step = Fraction(step)
    nmu = int(2 / step)
    nnu = int(1 / step)
    return [
        (i * step, j * step)
        for i in range(-nmu, nmu + 1)
        for j in range(-nnu, nnu + 1)
        if ps_admissible((i * step, j * step))
    ]


def sample_gamma(seed: int, m: int, count: int, field: str = "real") -> np.ndarray:
    """Shape (count, m + 1) array of Schur parameters, deterministic per seed."""
    if m < 0 or count < 1:
        raise ValueError("need m >= 0 and count >= 1")
    rng = np.random.default_rng(seed)
    if field == "real":
        return rng.uniform(-1.0, 1.0, size=(count, m + 1))
    if field != "complex":
        raise ValueError("field must be 'real' or 'complex'")
    need = count * (m + 1)
    got = []
    have = 0
    while have < need:
        pts = rng.uniform(-1.0, 1.0, size=(2 * need, 2))
        pts = pts[(pts ** 2).sum(axis=1) <= 1.0]
        got.append(pts[:, 0] + 1j * pts[:, 1])
        have += len(pts)
    return np.concatenate(got)[:need].reshape(count, m + 1)


def coeff_arrays(gamma: np.ndarray, N: int = 4) -> np.ndarray:
    """Vectorised schur_to_coeffs: (count, m+1) parameters -> (count, N) coefficients."""
    gamma = np.asarray(gamma)
    _check_disk(list(gamma.T))
    cols = schur_series(list(gamma.T), N)
    return np.stack(cols, axis=1)


def sample_body(seed: int, m: int, count: int, field: str = "real", N: int = 4) -> list:
    coeffs = coeff_arrays(sample_gamma(seed, m, count, field), N)
    return [SchwarzCoeffs(tuple(row.tolist()), certified=True) for row in coeffs]


def check_lemmas(seed: int = 7, m: int = 3, count: int = 100_000, field: str = "real",
                 step: Fraction = Fraction(1, 20), tol: float = LEMMA_TOL) -> dict:
    """Count lemma violations over a seeded sample of the coefficient body."""
    c = coeff_arrays(sample_gamma(seed, m, count, field), 4)
    a1, a2, a4 = np.abs(c[:, 0]), np.abs(c[:, 1]), np.abs(c[:, 3])
    c2_fail = int(np.sum(a2 > 1 - a1 ** 2 + tol))
    c4_fail = int(np.sum(a4 > 1 - a1 ** 2 - a2 ** 2 + tol))
    grid = ps_grid(step)
    c1c2 = c[:, 0] * c[:, 1]
    c1cube = c[:, 0] ** 3
    worst = 0.0
    ps_fail = 0
    for mu, nu in grid:
        vals = np.abs(c[:, 2] + float(mu) * c1c2 + float(nu) * c1cube)
        worst = max(worst, float(vals.max()))
        ps_fail += int(np.sum(vals > 1 + tol))
    return {
        "seed": seed, "m": m, "count": count, "field": field,
        "carlson_c2_failures": c2_fail,
        "carlson_c4_failures": c4_fail,
        "ps_grid_points": len(grid),
        "ps_failures": ps_fail,
        "ps_max": worst,
        "passed": c2_fail == 0 and c4_fail == 0 and ps_fail == 0,
    }
