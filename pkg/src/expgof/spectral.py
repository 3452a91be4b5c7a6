"""Largest eigenvalue of the limiting integral operator.

The limiting null distribution of n * M_{n,a} is a weighted sum of
chi-square variables whose weights are the eigenvalues of the integral
operator with kernel h2_tilde against the Exp(1) law.  Only the largest
eigenvalue delta_1 is needed (it sets the tail constant of the Bahadur
slope), so we discretize the operator on a uniform grid over [0, B] and
run a deterministic power iteration.

Grid cell i in [B i/m, B (i+1)/m] carries the Exp(1) probability mass
w_i = e^{-B i/m} - e^{-B (i+1)/m}; matrix entry (i, j) is
h2_tilde(B i/m, B j/m, a) * sqrt(w_i w_j) / (1 - e^{-B}).
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

from .special import h2_tilde

DEFAULT_M = 4500
DEFAULT_B = 10.0
DEFAULT_TOL = 1e-10

#: refuse to allocate matrices beyond this many entries (~3.2 GB at 20001^2)
MAX_MATRIX_ENTRIES = 4 * 10**8


class NonConvergenceError(RuntimeError):
    """Power iteration did not reach the requested residual."""

    def __init__(self, iterations, residual):
        super().__init__(
            f"power iteration did not converge after {iterations} iterations "
            f"(residual {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


class IndefiniteOperatorError(ArithmeticError):
    """Dominant eigenvalue is not positive; operator is not PSD."""


@dataclass(frozen=True)
class SpectralConfig:
    a: float
    m: int = DEFAULT_M
    B: float = DEFAULT_B

    def __post_init__(self):
        if self.a <= 0.0:
            raise ValueError("tuning parameter a must be positive")
        if self.m < 2:
            raise ValueError("grid resolution m must be >= 2")
        if self.B <= 0.0:
            raise ValueError("truncation point B must be positive")


@dataclass(frozen=True)
class SpectralResult:
    delta1: float
    iterations: int
    residual: float


def build_operator_matrix(cfg: SpectralConfig):
    """Symmetric (m+1) x (m+1) discretization of the integral operator."""
    m, B, a = cfg.m, cfg.B, cfg.a
    if (m + 1) ** 2 > MAX_MATRIX_ENTRIES:
        raise MemoryError(f"operator matrix for m={m} exceeds the memory budget")
    i = np.arange(m + 1)
    x = B * i / m
    w = np.exp(-B * i / m) - np.exp(-B * (i + 1) / m)
    sw = np.sqrt(w)
    mat = h2_tilde(x[:, None], x[None, :], a)
    mat *= sw[:, None] * sw[None, :]
    mat /= 1.0 - np.exp(-B)
    return mat


def largest_eigenvalue(matrix, tol=DEFAULT_TOL, max_iter=20000):
    """Dominant eigenvalue of a symmetric matrix by power iteration.

    Starts from the normalized all-ones vector (no randomness, so results
    are bit-reproducible).  Raises IndefiniteOperatorError when the
    converged Rayleigh quotient is not positive.
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError("matrix must be square")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    n = matrix.shape[0]
    v = np.ones(n) / np.sqrt(n)
    lam = 0.0
    residual = np.inf
    for it in range(1, max_iter + 1):
        mv = matrix @ v
        lam = float(v @ mv)
        norm = np.linalg.norm(mv)
        if norm == 0.0:
            return SpectralResult(0.0, it, 0.0)
        residual = float(np.linalg.norm(mv - lam * v))
        if residual <= tol:
            if lam <= 0.0:
                raise IndefiniteOperatorError(
                    f"dominant eigenvalue {lam:.6e} is not positive"
                )
            return SpectralResult(lam, it, residual)
        v = mv / norm
    raise NonConvergenceError(max_iter, residual)


_CACHE: dict[tuple[float, int, float], SpectralResult] = {}


def delta1(a, m=DEFAULT_M, B=DEFAULT_B, tol=DEFAULT_TOL):
    """Largest eigenvalue for tuning parameter a, cached by (a, m, B)."""
    key = (float(a), int(m), float(B))
    hit = _CACHE.get(key)
    if hit is None:
        cfg = SpectralConfig(a=float(a), m=int(m), B=float(B))
        hit = largest_eigenvalue(build_operator_matrix(cfg), tol=tol)
        _CACHE[key] = hit
    return hit


def save_delta1_cache(path):
    """Persist cached eigenvalues as CSV (a, m, B, delta1)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["a", "m", "B", "delta1"])
        for (a, m, B), res in sorted(_CACHE.items()):
            writer.writerow([repr(a), m, repr(B), f"{res.delta1:.15g}"])


def load_delta1_cache(path):
    """Load eigenvalues persisted by save_delta1_cache, if the file exists."""
    if not os.path.exists(path):
        return 0
    loaded = 0
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            key = (float(row["a"]), int(row["m"]), float(row["B"]))
            if key not in _CACHE:
                _CACHE[key] = SpectralResult(float(row["delta1"]), 0, 0.0)
                loaded += 1
    return loaded
