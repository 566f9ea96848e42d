"""Numerical search for large |H3(1)| over the Schwarz coefficient body.

Points are Schur parameter vectors, so every candidate is a genuine Schwarz
coefficient tuple.  The optimiser is a compass (pattern) search with complete
polling and step halving, run for all restarts in lock-step on numpy arrays.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import reference
from .classmodel import ClassSpec, derive_coefficients
from .hankel import NumericPoly, h3, hankel_eval
from .schwarz import SchurParams, SchwarzCoeffs, carlson_satisfied, coeff_arrays, schur_to_coeffs

COUNTEREXAMPLE_MARGIN = 1e-7
DEFAULT_SEED = 7


def default_seed() -> int:
    return int(os.environ.get("HANKELBOUND_SEED", DEFAULT_SEED))


@dataclass
class SearchResult:
    spec: ClassSpec
    m: int
    field: str
    seed: int
    restarts: int
    best_value: float
    best_params: SchurParams
    best_coeffs: SchwarzCoeffs
    conjectured: Fraction
    proven: Fraction
    counterexample_candidate: bool
    exact_value: Optional[Fraction] = None
    exact_params: Optional[tuple] = None
    clusters: list = field(default_factory=list)
    evaluations: int = 0
    trace: list = field(default_factory=list)

    @property
    def conjecture_gap(self) -> float:
        return self.best_value - float(self.conjectured)

    @property
    def proven_bound_margin(self) -> float:
        return float(self.proven) - self.best_value

    def to_json(self) -> dict:
        def num(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            return float(v)

        out = {
            "class": self.spec.name,
            "m": self.m,
            "field": self.field,
            "seed": self.seed,
            "restarts": self.restarts,
            "best_value": self.best_value,
            "best_params": [num(g) for g in self.best_params.gamma],
            "best_coeffs": [num(c) for c in self.best_coeffs.c],
            "conjectured": _q(self.conjectured),
            "proven_bound": _q(self.proven),
            "conjecture_gap": self.conjecture_gap,
            "proven_bound_margin": self.proven_bound_margin,
            "counterexample_candidate": self.counterexample_candidate,
            "clusters": self.clusters,
            "evaluations": self.evaluations,
        }
        if self.exact_value is not None:
            out["exact_recheck"] = {"params": [_q(g) for g in self.exact_params],
                                    "abs_H3": _q(self.exact_value)}
        return out


def _q(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class Objective:
    """|H3(1)| as a function of Schur parameters, vectorised over rows."""

    def __init__(self, spec: ClassSpec, field: str = "real"):
        self.spec = spec
        self.field = field
        self.table = derive_coefficients(spec, 5)
        self.h3 = NumericPoly(h3(self.table).poly)
        self.calls = 0

    def to_gamma(self, z: np.ndarray) -> np.ndarray:
        if self.field == "real":
            return z
        half = z.shape[1] // 2
        return z[:, :half] + 1j * z[:, half:]

    def project(self, z: np.ndarray) -> np.ndarray:
        if self.field == "real":
            return np.clip(z, -1.0, 1.0)
        half = z.shape[1] // 2
        g = z[:, :half] + 1j * z[:, half:]
        mod = np.abs(g)
        g = np.where(mod > 1.0, g / np.maximum(mod, 1e-300), g)
        return np.concatenate([g.real, g.imag], axis=1)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        self.calls += len(z)
        c = coeff_arrays(self.to_gamma(z), 4)
        return np.abs(self.h3(c[:, 0], c[:, 1], c[:, 2], c[:, 3]))


def _initial_points(seed: int, restarts: int, dim: int, field: str) -> np.ndarray:
    children = np.random.SeedSequence(seed).spawn(restarts)
    rows = []
    for child in children:
        rng = np.random.default_rng(child)
        if field == "real":
            rows.append(rng.uniform(-1.0, 1.0, dim))
        else:
            half = dim // 2
            r = np.sqrt(rng.uniform(0.0, 1.0, half))
            t = rng.uniform(0.0, 2 * np.pi, half)
            rows.append(np.concatenate([r * np.cos(t), r * np.sin(t)]))
    return np.array(rows)


def pattern_search(obj: Objective, start: np.ndarray, step: float = 0.5, tol: float = 1e-10,
                   max_iter: int = 5000, restart_ids=None, trace: Optional[list] = None):
    """Maximise ``obj`` from each row of ``start``; returns (points, values)."""
    xs = obj.project(start.copy())
    fx = obj(xs)
    n, d = xs.shape
    steps = np.full(n, step)
    active = np.ones(n, dtype=bool)
    dirs = np.vstack([np.eye(d), -np.eye(d)])
    ids = np.arange(n) if restart_ids is None else np.asarray(restart_ids)
    for it in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        base = xs[idx]
        trial = base[None, :, :] + dirs[:, None, :] * steps[idx][None, :, None]
        trial = obj.project(trial.reshape(-1, d)).reshape(2 * d, idx.size, d)
        vals = obj(trial.reshape(-1, d)).reshape(2 * d, idx.size)
        best = np.argmax(vals, axis=0)
        bestval = vals[best, np.arange(idx.size)]
        improved = bestval > fx[idx]
        moved = idx[improved]
        xs[moved] = trial[best[improved], np.flatnonzero(improved)]
        fx[moved] = bestval[improved]
        shrink = idx[~improved]
        steps[shrink] *= 0.5
        active[steps < tol] = False
        if trace is not None:
            for k in moved:
                trace.append((int(ids[k]), it, float(fx[k]), *xs[k].tolist()))
    return xs, fx


def search_extremal(spec: ClassSpec, m: int = 4, restarts: int = 1000, seed: Optional[int] = None,
                    field: str = "real", tol: float = 1e-10, max_iter: int = 5000,
                    threads: int = 1, trace: Optional[list] = None) -> SearchResult:
    if m < 0 or restarts < 1:
        raise ValueError("need m >= 0 and restarts >= 1")
    if field not in ("real", "complex"):
        raise ValueError("field must be 'real' or 'complex'")
    seed = default_seed() if seed is None else seed
    dim = (m + 1) * (1 if field == "real" else 2)
    start = _initial_points(seed, restarts, dim, field)

    chunks = np.array_split(np.arange(restarts), max(1, min(threads, restarts)))

    def run(chunk):
        obj = Objective(spec, field)
        local_trace = [] if trace is not None else None
        xs, fx = pattern_search(obj, start[chunk], tol=tol, max_iter=max_iter,
                                restart_ids=chunk, trace=local_trace)
        return xs, fx, obj.calls, local_trace

    if len(chunks) == 1:
        results = [run(chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(pool.map(run, chunks))
    xs = np.vstack([r[0] for r in results])
    fx = np.concatenate([r[1] for r in results])
    calls = sum(r[2] for r in results)
    if trace is not None:
        for r in results:
            trace.extend(r[3])

    obj = Objective(spec, field)
    k = int(np.argmax(fx))
    gamma = obj.to_gamma(xs[k:k + 1])[0]
    params = SchurParams([complex(g) if field == "complex" else float(g) for g in gamma])
    coeffs = schur_to_coeffs(params, 4)
    best = float(fx[k])
    conj = reference.CONJECTURED_BOUND.get(spec.name)
    proven = reference.PROVEN_BOUND.get(spec.name)
    flagged = conj is not None and best > float(conj) + COUNTEREXAMPLE_MARGIN

    result = SearchResult(
        spec=spec, m=m, field=field, seed=seed, restarts=restarts,
        best_value=best, best_params=params, best_coeffs=coeffs,
        conjectured=conj if conj is not None else Fraction(0),
        proven=proven if proven is not None else Fraction(0),
        counterexample_candidate=bool(flagged),
        clusters=_clusters(obj, xs, fx, best), evaluations=calls,
    )
    if field == "real":
        exact_params = tuple(_nearest_rational(float(g)) for g in gamma)
        result.exact_params = exact_params
        result.exact_value = evaluate_candidate(spec, SchurParams(exact_params))[1]
    return result


def _nearest_rational(v: float, max_den: int = 10 ** 6) -> Fraction:
    q = Fraction(v).limit_denominator(max_den)
    return max(Fraction(-1), min(Fraction(1), q))


def _clusters(obj: Objective, xs: np.ndarray, fx: np.ndarray, best: float, rel: float = 1e-7,
              limit: int = 10) -> list:
    """Distinct coefficient tuples among near-optimal restarts."""
    near = np.flatnonzero(fx >= best - rel * max(best, 1e-300))
    c = coeff_arrays(obj.to_gamma(xs[near]), 4)
    seen = []
    for row, val in zip(c, fx[near]):
        key = np.round(row, 5)
        if any(np.allclose(key, s["key"], atol=1e-4) for s in seen):
            for s in seen:
                if np.allclose(key, s["key"], atol=1e-4):
                    s["count"] += 1
            continue
        seen.append({"key": key, "count": 1, "value": float(val)})
        if len(seen) >= limit:
            break

    def enc(v):
        return [v.real, v.imag] if np.iscomplexobj(v) else float(v)

    return [{"coeffs": [enc(v) for v in s["key"]], "count": s["count"], "value": s["value"]} for s in seen]


def evaluate_candidate(spec: ClassSpec, params: SchurParams):
    """Coefficients and |H3(1)| for given Schur parameters, exact when rational."""
    coeffs = schur_to_coeffs(params, 4)
    table = derive_coefficients(spec, 5)
    value = abs(hankel_eval(table, 3, 1, coeffs.c))
    return coeffs, value


def check_candidate(spec: ClassSpec, result: SearchResult) -> bool:
    return carlson_satisfied(result.best_coeffs)
