"""Monte Carlo machinery: samplers, critical values, p-values, power
studies, and data-driven selection of the tuning parameter.

All randomness flows through RngStream, a (seed, stream_id) pair mapped
onto numpy's SeedSequence; identical pairs reproduce identical draws on
any platform.  Null statistic distributions are simulated once per
(n, a, N, stream) and cached in memory, optionally persisted to disk.
"""

from __future__ import annotations

import csv
import os
import tempfile
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .statistic import diff_multiset, statistic_fast, statistic_from_raw

DEFAULT_ALPHA = 0.05
DEFAULT_N = 10000
DEFAULT_B = 1000
DEFAULT_GRID = (0.5, 1.0, 2.0, 5.0)
MIN_N_REPLICATES = 1000
MIN_BOOTSTRAP = 100
MIN_INFERENCE_N = 3


@dataclass(frozen=True)
class RngStream:
    """Deterministic random stream identified by (seed, stream_id)."""

    seed: int
    stream_id: int = 0

    def generator(self):
        return np.random.default_rng(
            np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        )

    def substream(self, index):
        """Derived stream for replicate ``index`` (order-independent use)."""
        return np.random.default_rng(
            np.random.SeedSequence(
                entropy=self.seed, spawn_key=(self.stream_id, index)
            )
        )


@dataclass(frozen=True)
class PowerAlternative:
    """Alternative sampling family for the power study.

    Families and cdf conventions (all supported on (0, inf)):

    - ``W(theta)``:    F(x) = 1 - exp(-x^theta)
    - ``G(theta)``:    Gamma, shape theta, rate 1
    - ``HN``:          |N(0, 1)|
    - ``U``:           Uniform(0, 1)
    - ``CH(theta)``:   F(x) = 1 - exp(2 (1 - e^{x^theta}))
    - ``LF(theta)``:   F(x) = 1 - exp(-x - theta x^2 / 2)
    - ``EW(theta)``:   F(x) = (1 - e^{-x})^theta
    - ``EMNW(beta, theta)``: density (1+theta) e^{-x} - theta beta e^{-beta x}
    """

    family: str
    params: tuple = ()

    def label(self):
        if not self.params:
            return self.family
        return f"{self.family}({','.join(f'{p:g}' for p in self.params)})"


def _exp_draws(gen, n):
    # inversion: -log(1 - U) with U in [0, 1) keeps the argument positive
    return -np.log1p(-gen.random(n))


def sample_null(n, rng: RngStream):
    """n i.i.d. Exp(1) draws by inversion."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    return _exp_draws(rng.generator(), n)


def _emnw_inverse(u, beta, theta):
    # cdf F(x) = (1+theta)(1 - e^{-x}) - theta (1 - e^{-beta x}); monotone,
    # inverted by bisection (60 steps ~ full double precision on [0, 60])
    lo = np.zeros_like(u)
    hi = np.full_like(u, 60.0)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        cdf = (1.0 + theta) * (-np.expm1(-mid)) - theta * (-np.expm1(-beta * mid))
        above = cdf >= u
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return 0.5 * (lo + hi)


def sample_alternative(alt: PowerAlternative, n, rng: RngStream):
    """n i.i.d. draws from the given alternative family."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    gen = rng.generator()
    fam = alt.family.upper()
    p = alt.params
    if fam == "W":
        (theta,) = p
        if theta <= 0:
            raise ValueError("W shape must be positive")
        return _exp_draws(gen, n) ** (1.0 / theta)
    if fam == "G":
        (theta,) = p
        if theta <= 0:
            raise ValueError("Gamma shape must be positive")
        return gen.gamma(theta, size=n)
    if fam == "HN":
        return np.abs(gen.standard_normal(n))
    if fam == "U":
        return 1.0 - gen.random(n)
    if fam == "CH":
        (theta,) = p
        if theta <= 0:
            raise ValueError("CH shape must be positive")
        # invert 1 - F = exp(2 (1 - e^{x^theta}))
        v = np.clip(1.0 - gen.random(n), 1e-300, 1.0 - 1e-16)
        return np.log1p(-0.5 * np.log(v)) ** (1.0 / theta)
    if fam == "LF":
        (theta,) = p
        if theta <= 0:
            raise ValueError("LF parameter must be positive")
        e = _exp_draws(gen, n)
        return (np.sqrt(1.0 + 2.0 * theta * e) - 1.0) / theta
    if fam == "EW":
        (theta,) = p
        if theta <= 0:
            raise ValueError("EW exponent must be positive")
        u = np.clip(gen.random(n), 1e-300, 1.0 - 1e-16)
        return -np.log1p(-u ** (1.0 / theta))
    if fam == "EMNW":
        beta, theta = p
        if beta <= 1 or not (0 < theta <= 1.0 / (beta - 1.0)):
            raise ValueError("EMNW requires beta > 1 and 0 < theta <= 1/(beta-1)")
        u = np.clip(gen.random(n), 1e-300, 1.0 - 1e-15)
        return _emnw_inverse(u, beta, theta)
    raise ValueError(f"unknown alternative family {alt.family!r}")


def parse_alternative(label):
    """Parse labels like ``W(1.4)``, ``HN``, ``EMNW(3,0.5)``."""
    label = label.strip()
    if "(" in label:
        name, rest = label.split("(", 1)
        params = tuple(float(tok) for tok in rest.rstrip(")").split(","))
    else:
        name, params = label, ()
    return PowerAlternative(family=name.strip().upper(), params=params)


# ---------------------------------------------------------------------------
# null distribution cache


_NULL_CACHE: dict[tuple, np.ndarray] = {}


def null_statistics(n, a, N, rng: RngStream, cache_dir=None):
    """Sorted array of N simulated null statistics M_{n,a}.

    Cached in memory by (n, a, N, seed, stream); with ``cache_dir`` also
    persisted as .npy for reuse across processes.
    """
    if N < MIN_N_REPLICATES:
        raise ValueError(f"need at least {MIN_N_REPLICATES} replicates, got {N}")
    key = (int(n), float(a), int(N), rng.seed, rng.stream_id)
    hit = _NULL_CACHE.get(key)
    if hit is not None:
        return hit
    path = None
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(
            cache_dir, f"null_n{n}_a{a:g}_N{N}_s{rng.seed}_{rng.stream_id}.npy"
        )
        if os.path.exists(path):
            stats = np.load(path)
            _NULL_CACHE[key] = stats
            return stats
    stats = np.empty(N)
    for i in range(N):
        x = _exp_draws(rng.substream(i), n)
        stats[i] = statistic_fast(x / x.mean(), a)
    stats.sort()
    _NULL_CACHE[key] = stats
    if path is not None:
        _atomic_save(path, stats)
    return stats


def _atomic_save(path, arr):
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".npy")
    os.close(fd)
    np.save(tmp, arr)
    os.replace(tmp, path)


def _quantile_index(N, alpha):
    # ceil(N (1 - alpha))-th order statistic, 1-indexed
    idx = int(np.ceil(N * (1.0 - alpha)))
    return min(max(idx, 1), N) - 1


def critical_value(n, a, alpha, N, rng: RngStream, cache_dir=None):
    """(1 - alpha) Monte Carlo quantile of the null statistic."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    if n < MIN_INFERENCE_N:
        raise ValueError(f"inference requires n >= {MIN_INFERENCE_N}")
    stats = null_statistics(n, a, N, rng, cache_dir=cache_dir)
    return float(stats[_quantile_index(N, alpha)])


def p_value(m_obs, n, a, N, rng: RngStream, cache_dir=None):
    """Monte Carlo p-value with add-one continuity correction."""
    stats = null_statistics(n, a, N, rng, cache_dir=cache_dir)
    count = int(np.sum(stats >= m_obs))
    return (count + 1.0) / (N + 1.0)


def power(alt: PowerAlternative, n, a, alpha, N, rng: RngStream,
          crit_rng: RngStream | None = None, N_crit=None, cache_dir=None):
    """Fraction of N alternative samples whose statistic exceeds the
    null critical value.

    The critical value is simulated on an independent stream
    (``crit_rng``, default stream_id + 1) with N_crit replicates
    (default N).
    """
    if crit_rng is None:
        crit_rng = replace(rng, stream_id=rng.stream_id + 1)
    crit = critical_value(n, a, alpha, N_crit or N, crit_rng, cache_dir=cache_dir)
    rejected = 0
    for i in range(N):
        gen_stream = _replicate_stream(rng, i)
        x = sample_alternative(alt, n, gen_stream)
        if statistic_from_raw(x, a) >= crit:
            rejected += 1
    return rejected / N


def _replicate_stream(rng: RngStream, index):
    # RngStream whose generator() is the dedicated substream for `index`
    return _SubStream(rng, index)


class _SubStream:
    """Adapter giving one replicate its own deterministic generator."""

    def __init__(self, parent: RngStream, index: int):
        self._parent = parent
        self._index = index

    def generator(self):
        return self._parent.substream(self._index)


def select_tuning(x, grid: Sequence[float], B, alpha, rng: RngStream,
                  N=DEFAULT_N, cache_dir=None, crit_rng: RngStream | None = None):
    """Data-driven choice of the tuning parameter.

    Draws B bootstrap resamples from the empirical distribution of x,
    computes the statistic on each for every grid value, estimates the
    bootstrap power against the null Monte Carlo critical values, and
    returns the grid value with the largest estimated power (ties broken
    toward the smaller value).
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if len(grid) == 0:
        raise ValueError("grid must be nonempty")
    if B < MIN_BOOTSTRAP:
        raise ValueError(f"need at least {MIN_BOOTSTRAP} bootstrap resamples")
    if np.all(x == x[0]):
        raise ValueError("degenerate sample: all values equal, bootstrap collapses")
    grid = sorted(float(g) for g in grid)
    if len(grid) == 1:
        return grid[0]
    if crit_rng is None:
        crit_rng = replace(rng, stream_id=rng.stream_id + 1)
    crits = [
        critical_value(n, a, alpha, N, crit_rng, cache_dir=cache_dir) for a in grid
    ]
    hits = np.zeros(len(grid))
    gen = rng.generator()
    for _ in range(B):
        xb = gen.choice(x, size=n, replace=True)
        yb = xb / xb.mean()
        diffs = diff_multiset(yb)
        for j, a in enumerate(grid):
            if statistic_fast(yb, a, _diffs=diffs) >= crits[j]:
                hits[j] += 1
    return grid[int(np.argmax(hits))]


@dataclass(frozen=True)
class DataDrivenPower:
    power: float
    selection_frequency: dict
    n: int
    alpha: float
    N: int
    B: int


def power_datadriven(alt: PowerAlternative, n, grid: Sequence[float], alpha,
                     N, B, rng: RngStream, N_crit=None, cache_dir=None):
    """Power of the test with per-sample data-driven tuning parameter.

    Each replicate draws a fresh alternative sample, selects a via
    select_tuning, and tests it at the corresponding critical value.
    Returns the mean rejection rate and the empirical distribution of
    the selected values.
    """
    grid = sorted(float(g) for g in grid)
    N_crit = N_crit or DEFAULT_N
    crit_rng = replace(rng, stream_id=rng.stream_id + 1)
    crits = {
        a: critical_value(n, a, alpha, N_crit, crit_rng, cache_dir=cache_dir)
        for a in grid
    }
    counts = {a: 0 for a in grid}
    rejected = 0
    for i in range(N):
        sub = _replicate_stream(rng, i)
        x = sample_alternative(alt, n, sub)
        a_hat = select_tuning(
            x, grid, B, alpha, _boot_stream(rng, i),
            N=N_crit, cache_dir=cache_dir, crit_rng=crit_rng,
        )
        counts[a_hat] += 1
        if statistic_from_raw(x, a_hat) >= crits[a_hat]:
            rejected += 1
    freq = {a: c / N for a, c in counts.items()}
    return DataDrivenPower(
        power=rejected / N, selection_frequency=freq,
        n=n, alpha=alpha, N=N, B=B,
    )


def _boot_stream(rng: RngStream, index):
    return RngStream(seed=rng.seed, stream_id=(rng.stream_id << 20) + 2 * index + 7)


# ---------------------------------------------------------------------------
# outcome packaging and critical value table persistence


@dataclass(frozen=True)
class TestOutcome:
    statistic: float
    a: float
    n: int
    critical_value: float
    p_value: float
    reject: bool
    alpha: float
    N: int
    seed: int
    a_selected: bool = False


def run_test(x, a, alpha=DEFAULT_ALPHA, N=DEFAULT_N, B=DEFAULT_B,
             grid=DEFAULT_GRID, seed=0, cache_dir=None):
    """Full test on raw data; ``a`` may be 'auto' for data-driven tuning."""
    x = np.asarray(x, dtype=float)
    n = x.size
    rng = RngStream(seed=int(seed), stream_id=0)
    selected = False
    if isinstance(a, str):
        if a != "auto":
            raise ValueError("a must be a positive number or 'auto'")
        a = select_tuning(x, grid, B, alpha, rng, N=N, cache_dir=cache_dir)
        selected = True
    a = float(a)
    if a <= 0.0:
        raise ValueError("tuning parameter a must be positive")
    stat = statistic_from_raw(x, a)
    crit = critical_value(n, a, alpha, N, RngStream(seed=int(seed), stream_id=1),
                          cache_dir=cache_dir)
    pv = p_value(stat, n, a, N, RngStream(seed=int(seed), stream_id=1),
                 cache_dir=cache_dir)
    return TestOutcome(
        statistic=stat, a=a, n=n, critical_value=crit, p_value=pv,
        reject=stat >= crit, alpha=alpha, N=N, seed=int(seed),
        a_selected=selected,
    )


class CriticalValueTable:
    """Persisted map (n, a, alpha, N, seed) -> critical value, CSV-backed."""

    FIELDS = ("n", "a", "alpha", "N", "seed", "critical_value")

    def __init__(self):
        self._entries: dict[tuple, float] = {}

    def put(self, n, a, alpha, N, seed, value):
        self._entries[(int(n), float(a), float(alpha), int(N), int(seed))] = float(value)

    def get(self, n, a, alpha, N, seed):
        return self._entries.get((int(n), float(a), float(alpha), int(N), int(seed)))

    def __len__(self):
        return len(self._entries)

    def save(self, path):
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)))
        os.close(fd)
        with open(tmp, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.FIELDS)
            for key in sorted(self._entries):
                n, a, alpha, N, seed = key
                writer.writerow(
                    [n, repr(a), repr(alpha), N, seed, f"{self._entries[key]:.15g}"]
                )
        os.replace(tmp, path)

    @classmethod
    def load(cls, path):
        table = cls()
        if os.path.exists(path):
            with open(path, newline="") as fh:
                for row in csv.DictReader(fh):
                    table.put(row["n"], row["a"], row["alpha"], row["N"],
                              row["seed"], row["critical_value"])
        return table
