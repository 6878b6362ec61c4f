"""Monte Carlo cycle types under nu_{n,d} and uniform-on-S_n^(k).

Cycle types are drawn sequentially: with m points left, the next cycle has
length j with probability ``d_j p_{m-j} / (m p_m)``; the identity
``m p_m = sum_j d_j p_{m-j}`` makes this a probability vector.  For
uniform weights this is just ``j = 1 + floor(u m)``.  S_n^(k) is sampled by
rejection from the uniform measure using the q_k(j) | alpha_j test.

Reproducibility: replicate ``r`` draws from its own xoshiro256** stream,
whose state is four consecutive outputs (positions 4r..4r+3) of a SplitMix64
stream started at a hash of ``seed``.  Every statistic of a
replicate therefore depends only on (seed, r), and results are identical
for any thread count.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from .arith import smallest_prime_factor
from .errors import DomainError
from .snk import qk
from .weights import WeightSystem, make_weights

PRNG_ID = "xoshiro256** (state of replicate r = SplitMix64 outputs 4r..4r+3 from mix64(seed))"
MAX_TYPE_N = 64  # full alpha vectors are stored only up to this n

# the TBB probe warns on this platform; the workqueue layer needs no extra libraries
if "NUMBA_THREADING_LAYER" not in os.environ:
    nb.config.THREADING_LAYER = "workqueue"

_U = nb.uint64


@nb.njit(cache=True, inline="always")
def _rotl(x, k):
    return (x << _U(k)) | (x >> _U(64 - k))


@nb.njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> _U(30))) * _U(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U(27))) * _U(0x94D049BB133111EB)
    return z ^ (z >> _U(31))


@nb.njit(cache=True)
def _seed_state(seed, idx, state):
    # replicate idx takes outputs 4 idx .. 4 idx + 3 of a SplitMix64 stream
    # started at mix64(seed), so distinct (seed, idx) never share a state
    x = _mix64(_U(seed)) + _U(4) * _U(idx) * _U(0x9E3779B97F4A7C15)
    for i in range(4):
        x = x + _U(0x9E3779B97F4A7C15)
        state[i] = _mix64(x)


@nb.njit(cache=True)
def _next_u64(s):
    result = _rotl(s[1] * _U(5), 7) * _U(9)
    t = s[1] << _U(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


@nb.njit(cache=True)
def _uniform(s):
    return float(_next_u64(s) >> _U(11)) * (1.0 / 9007199254740992.0)


@nb.njit(cache=True)
def _draw_lengths(general, n, pf, df, s, lens):
    """Fill ``lens`` with cycle lengths; return the number of cycles."""
    m = n
    c = 0
    while m > 0:
        u = _uniform(s)
        if not general:
            j = 1 + int(u * m)
            if j > m:
                j = m
        else:
            target = u * m * pf[m]
            acc = 0.0
            j = 0
            last = 0
            for i in range(1, m + 1):
                w = df[i] * pf[m - i]
                if w > 0.0:
                    last = i
                    acc += w
                    if acc > target:
                        j = i
                        break
            if j == 0:
                j = last
        lens[c] = j
        c += 1
        m -= j
    return c


@nb.njit(cache=True)
def _passes(lens, c, qtab, cnt):
    for i in range(c):
        cnt[lens[i]] += 1
    ok = True
    for i in range(c):
        L = lens[i]
        if qtab[L] > 1 and cnt[L] % qtab[L] != 0:
            ok = False
    for i in range(c):
        cnt[lens[i]] = 0
    return ok


@nb.njit(cache=True)
def _log_order(lens, c, spf, logs, maxexp, touched):
    nt = 0
    for i in range(c):
        x = lens[i]
        while x > 1:
            p = spf[x]
            e = 0
            while x % p == 0:
                x //= p
                e += 1
            if maxexp[p] == 0:
                touched[nt] = p
                nt += 1
            if e > maxexp[p]:
                maxexp[p] = e
    tot = 0.0
    for i in range(nt):
        p = touched[i]
        tot += maxexp[p] * logs[p]
        maxexp[p] = 0
    return tot


@nb.njit(cache=True, parallel=True)
def _kernel(general, n, R, seed, pf, df, snk_q, spf, logs, h, dks, store_types,
            omega, logP, logO, addv, D, trials, types):
    nchunks = min(R, 256)
    use_snk = snk_q.shape[0] > 0
    for ch in nb.prange(nchunks):
        lo = ch * R // nchunks
        hi = (ch + 1) * R // nchunks
        lens = np.zeros(n + 1, dtype=np.int64)
        cnt = np.zeros(n + 1, dtype=np.int64)
        maxexp = np.zeros(n + 1, dtype=np.int64)
        touched = np.zeros(n + 1, dtype=np.int64)
        s = np.zeros(4, dtype=np.uint64)
        for r in range(lo, hi):
            _seed_state(seed, r, s)
            ntr = 0
            while True:
                c = _draw_lengths(general, n, pf, df, s, lens)
                ntr += 1
                if not use_snk or _passes(lens, c, snk_q, cnt):
                    break
            trials[r] = ntr
            omega[r] = c
            lp = 0.0
            av = 0.0
            for i in range(c):
                lp += logs[lens[i]]
                if h.shape[0] > 0:
                    av += h[lens[i] - 1]
            logP[r] = lp
            addv[r] = av
            logO[r] = _log_order(lens, c, spf, logs, maxexp, touched)
            for t in range(dks.shape[0]):
                kk = dks[t]
                cc = 0
                for i in range(c):
                    if lens[i] % kk == 0:
                        cc += 1
                D[r, t] = cc
            if store_types:
                for i in range(c):
                    types[r, lens[i] - 1] += 1


@dataclass
class SampleResult:
    n: int
    R: int
    seed: int
    measure: str
    omega: np.ndarray
    logP: np.ndarray
    logO: np.ndarray
    additive: np.ndarray | None
    D: dict = field(default_factory=dict)
    trials: np.ndarray | None = None
    types: np.ndarray | None = None
    prng: str = PRNG_ID

    @property
    def acceptance_rate(self) -> float:
        return self.R / float(self.trials.sum())

    def metadata(self) -> dict:
        return {"n": self.n, "R": self.R, "seed": self.seed, "measure": self.measure, "prng": self.prng}


def sample(W: WeightSystem | None, n: int, R: int, seed: int, *, snk_k: int | None = None,
           hhat=None, dks=(), store_types: bool = False, threads: int | None = None) -> SampleResult:
    """Draw R cycle types of size n and return their statistics.

    ``W=None`` means uniform weights.  ``snk_k`` switches to the uniform
    measure on S_n^(k) (rejection).  ``hhat`` adds the additive statistic,
    ``dks`` the counts D_{n,k}; ``store_types`` keeps the alpha vectors.
    """
    if R < 1:
        raise DomainError(f"R must be >= 1, got {R}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 <= seed < 2**64:
        raise DomainError("seed must lie in [0, 2**64)")
    if W is None:
        W = make_weights("uniform", 0)
        general = False
        pf = np.ones(1)
        df = np.ones(1)
    else:
        general = W.kind != "uniform"
        if n > W.n_max and general:
            raise DomainError(f"n = {n} exceeds weight n_max {W.n_max}")
        pf = W.p_float()[: n + 1] if general else np.ones(1)
        df = W.d_float()[: n + 1] if general else np.ones(1)
        if general and not pf[n] > 0:
            raise DomainError(f"p_{n} = 0: the weights put no mass on S_{n}")
    if snk_k is not None:
        if general:
            raise DomainError("S_n^(k) sampling is implemented for the uniform measure only")
        if snk_k < 1:
            raise DomainError(f"k must be >= 1, got {snk_k}")
        snk_q = np.array([1] + [qk(snk_k, j) for j in range(1, n + 1)], dtype=np.int64)
        measure = f"snk:{snk_k}"
    else:
        snk_q = np.zeros(0, dtype=np.int64)
        measure = W.label() if general else "uniform"
    if store_types and n > MAX_TYPE_N:
        raise DomainError(f"storing full types is limited to n <= {MAX_TYPE_N}")
    h = np.zeros(0) if hhat is None else np.asarray(hhat, dtype=float)[:n]
    if hhat is not None and len(h) < n:
        raise DomainError(f"hhat table has {len(h)} entries, need {n}")
    dk = np.asarray(list(dks), dtype=np.int64)
    if np.any(dk < 1):
        raise DomainError("D:k needs k >= 1")
    spf = smallest_prime_factor(n)
    logs = np.zeros(n + 1)
    logs[1:] = np.log(np.arange(1, n + 1))
    omega = np.zeros(R, dtype=np.int64)
    logP = np.zeros(R)
    logO = np.zeros(R)
    addv = np.zeros(R)
    D = np.zeros((R, len(dk)), dtype=np.int64)
    trials = np.zeros(R, dtype=np.int64)
    types = np.zeros((R, n) if store_types else (1, 1), dtype=np.int64)
    old = nb.get_num_threads()
    if threads is not None:
        nb.set_num_threads(max(1, min(int(threads), nb.config.NUMBA_NUM_THREADS)))
    try:
        _kernel(general, n, R, np.uint64(seed), pf, df, snk_q, spf, logs, h, dk, store_types,
                omega, logP, logO, addv, D, trials, types)
    finally:
        nb.set_num_threads(old)
    return SampleResult(n=n, R=R, seed=seed, measure=measure, omega=omega, logP=logP, logO=logO,
                        additive=addv if hhat is not None else None,
                        D={int(k): D[:, i] for i, k in enumerate(dk)}, trials=trials,
                        types=types if store_types else None)


def sample_cycle_type(W: WeightSystem, n: int, rng: np.random.Generator):
    """One cycle type under nu_{n,d} from a numpy Generator (pure Python path)."""
    from .partitions import CycleType

    if n > W.n_max:
        raise DomainError(f"n = {n} exceeds weight n_max {W.n_max}")
    pf, df = W.p_float(), W.d_float()
    if not pf[n] > 0:
        raise DomainError(f"p_{n} = 0 for these weights")
    lens, m = [], n
    while m > 0:
        w = df[1 : m + 1] * pf[m - 1 :: -1][:m]
        j = int(rng.choice(m, p=w / w.sum())) + 1
        lens.append(j)
        m -= j
    return CycleType.from_lengths(lens, n)


def sample_snk(k: int, n: int, rng: np.random.Generator, max_trials: int = 10**8):
    """One cycle type uniform on S_n^(k), by rejection from uniform S_n."""
    from .partitions import CycleType
    from .snk import pavlov_filter

    for _ in range(max_trials):
        lens, m = [], n
        while m > 0:
            j = int(rng.integers(1, m + 1))
            lens.append(j)
            m -= j
        t = CycleType.from_lengths(lens, n)
        if pavlov_filter(k, t):
            return t
    raise DomainError("rejection sampler exceeded max_trials")


# -- empirical distribution functions ----------------------------------------


def empirical_cdf(values):
    """Left-continuous step function ``x -> #{v < x} / R``."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise DomainError("empirical_cdf needs a nonempty sample")

    def F(x):
        return np.searchsorted(v, x, side="left") / v.size

    return F


def sup_distance(values, G) -> float:
    """``sup_x |Fhat(x) - G(x)|`` for continuous G, evaluated on both sides of each atom."""
    v = np.sort(np.asarray(values, dtype=float))
    R = v.size
    if R == 0:
        raise DomainError("sup_distance needs a nonempty sample")
    atoms, first = np.unique(v, return_index=True)
    below = first / R  # #{v < a} / R
    upto = np.append(first[1:], R) / R  # #{v <= a} / R
    g = np.asarray(G(atoms), dtype=float)
    return float(max(np.abs(below - g).max(), np.abs(upto - g).max()))
