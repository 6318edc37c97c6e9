"""Smallest-prime-factor sieves and multiplicative-function tables.

Whole-range tables cover [1, N] in one array; segments stream factor data
for a window [lo, hi] so partial sums can reach 1e8 and beyond with bounded
memory. Both paths expose the same factorization-derived quantities (mu,
the generalized Liouville function lambda_m, Omega, and the extreme prime
divisors p(n), P(n), P_m(n)) and must agree exactly wherever they overlap.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_SEGMENT_SIZE = 1 << 22
DEFAULT_MEMORY_BUDGET = 2 * 1024**3
MEMORY_BUDGET_ENV = "CHEBDENSE_MEMORY_BUDGET"

# lambda_m(n) == mu(n) for every n < 2**64 once m exceeds 64 (an m-th power
# divisor > 1 would already exceed the value range), so larger orders only
# duplicate mu_of and are rejected.
MAX_M = 64


class MemoryBudgetError(Exception):
    """A requested table or segment would exceed the configured budget."""


class MissingPrimesError(Exception):
    """The supplied base-prime list does not cover sqrt(hi)."""


def memory_budget() -> int:
    """Byte budget for table allocation, from CHEBDENSE_MEMORY_BUDGET."""
    raw = os.environ.get(MEMORY_BUDGET_ENV)
    if raw is None:
        return DEFAULT_MEMORY_BUDGET
    try:
        budget = int(raw)
    except ValueError as exc:
        raise ValueError(f"{MEMORY_BUDGET_ENV} must be an integer byte count, got {raw!r}") from exc
    if budget <= 0:
        raise ValueError(f"{MEMORY_BUDGET_ENV} must be positive, got {budget}")
    return budget


def validate_m(m: int) -> None:
    """Reject orders outside [2, MAX_M]."""
    if not 2 <= m <= MAX_M:
        raise ValueError(f"order m must be in [2, {MAX_M}], got {m}")


@dataclass(frozen=True)
class SpfTable:
    """Smallest prime factor of every index in [1, limit]; spf[1] == 1."""

    limit: int
    spf: np.ndarray


@dataclass(frozen=True)
class Factorization:
    """Prime-power decomposition with strictly increasing primes.

    The factor list is empty exactly when n == 1.
    """

    n: int
    factors: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class ValueTable:
    """Signed byte per index in [1, limit]; values[1] == +1 for mu and lambda_m."""

    limit: int
    values: np.ndarray


def build_spf(limit: int) -> SpfTable:
    """Sieve the smallest prime factor for every n in [1, limit].

    Parameters
    ----------
    limit : int
        Upper bound (inclusive), at least 1.

    Returns
    -------
    SpfTable
        spf[n] is the least prime dividing n, spf[1] = 1, spf[0] unused.

    Raises
    ------
    MemoryBudgetError
        If the table would exceed the configured memory budget.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    need = 8 * (limit + 1)
    budget = memory_budget()
    if need > budget:
        raise MemoryBudgetError(
            f"spf table for limit {limit} needs {need} bytes, budget is {budget}"
        )
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 1:
        spf[1] = 1
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            spf[p] = p
            view = spf[p * p :: p]
            view[view == 0] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    return SpfTable(limit, spf)


def factorize(n: int, table: SpfTable) -> Factorization:
    """Decompose n by repeated division along the spf chain.

    Raises ValueError when n is outside [1, table.limit].
    """
    if n < 1 or n > table.limit:
        raise ValueError(f"n={n} out of range [1, {table.limit}]")
    spf = table.spf
    factors = []
    m = n
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factors.append((p, e))
    return Factorization(n, tuple(factors))


def mu_of(f: Factorization) -> int:
    """Mobius value: 0 on squares, else (-1)^(number of prime factors)."""
    sign = 1
    for _, e in f.factors:
        if e >= 2:
            return 0
        sign = -sign
    return sign


def lambda_m_of(f: Factorization, m: int) -> int:
    """Generalized Liouville value of order m.

    Per prime power p^a the contribution is mu(p^(a mod m)): zero when the
    residue is 2 or more, a sign flip when it is exactly 1.
    """
    validate_m(m)
    sign = 1
    for _, e in f.factors:
        r = e % m
        if r >= 2:
            return 0
        if r == 1:
            sign = -sign
    return sign


def big_omega_of(f: Factorization) -> int:
    """Number of prime factors counted with multiplicity."""
    return sum(e for _, e in f.factors)


def p_min(n: int, table: SpfTable) -> int:
    """Smallest prime divisor of n; 1 for n == 1."""
    if n < 1 or n > table.limit:
        raise ValueError(f"n={n} out of range [1, {table.limit}]")
    return int(table.spf[n])


def big_p_of(f: Factorization) -> int:
    """Largest prime divisor; 1 for n == 1."""
    if not f.factors:
        return 1
    return f.factors[-1][0]


def p_m_of(f: Factorization, m: int) -> int:
    """Largest prime whose exponent is not a multiple of m; 1 if none exists."""
    validate_m(m)
    best = 1
    for p, e in f.factors:
        if e % m != 0:
            best = p
    return best


def base_primes(limit: int) -> np.ndarray:
    """All primes up to limit (inclusive) as an int64 array."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


@dataclass(frozen=True)
class Segment:
    """Factor data for every n in [lo, hi], stored as flat ragged rows.

    Row i holds the prime-power factors of lo + i in increasing prime order,
    padded with a trailing (1, 0) entry when the leftover cofactor is 1, so
    every row is non-empty and reductions never see an empty slice.
    """

    lo: int
    hi: int
    offsets: np.ndarray
    factor_primes: np.ndarray
    factor_exps: np.ndarray

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    def lambda_values(self, m: int) -> np.ndarray:
        """lambda_m over the segment as an int8 array."""
        validate_m(m)
        starts = self.offsets[:-1]
        r = self.factor_exps % m
        bad = np.add.reduceat((r >= 2).astype(np.int8), starts)
        flips = np.add.reduceat((r == 1).astype(np.int8), starts)
        return np.where(bad > 0, 0, 1 - 2 * (flips & 1)).astype(np.int8)

    def mu_values(self) -> np.ndarray:
        """mu over the segment as an int8 array."""
        starts = self.offsets[:-1]
        bad = np.add.reduceat((self.factor_exps >= 2).astype(np.int8), starts)
        flips = np.add.reduceat((self.factor_exps == 1).astype(np.int8), starts)
        return np.where(bad > 0, 0, 1 - 2 * (flips & 1)).astype(np.int8)

    def big_omega_values(self) -> np.ndarray:
        starts = self.offsets[:-1]
        return np.add.reduceat(self.factor_exps.astype(np.int64), starts)

    def spf_values(self) -> np.ndarray:
        """Smallest prime factor of each n; rows are never empty."""
        return self.factor_primes[self.offsets[:-1]]

    def big_p_values(self) -> np.ndarray:
        """Largest prime factor of each n (pad entries carry exponent 0)."""
        starts = self.offsets[:-1]
        real = self.factor_primes * (self.factor_exps != 0)
        return np.maximum.reduceat(real, starts)

    def p_m_values(self, m: int) -> np.ndarray:
        """Largest prime with exponent not divisible by m; 1 for m-th powers."""
        validate_m(m)
        starts = self.offsets[:-1]
        marked = self.factor_primes * (self.factor_exps % m != 0)
        out = np.maximum.reduceat(marked, starts)
        out[out == 0] = 1
        return out

    def factorization_of(self, n: int) -> Factorization:
        """Single-row view, mainly for spot checks against the table path."""
        if n < self.lo or n > self.hi:
            raise ValueError(f"n={n} outside segment [{self.lo}, {self.hi}]")
        i = n - self.lo
        row = slice(int(self.offsets[i]), int(self.offsets[i + 1]))
        pairs = tuple(
            (int(p), int(e))
            for p, e in zip(self.factor_primes[row], self.factor_exps[row])
            if e > 0
        )
        return Factorization(n, pairs)


def _prime_list_gap(primes: np.ndarray, need: int) -> int | None:
    """First prime in (max(primes), need] missing from the list, or None.

    Candidates are certified by trial division against the given primes,
    which is complete for q <= max(primes)^2; anything beyond that is
    treated as missing because the list cannot even be checked.
    """
    top = int(primes[-1]) if primes.size else 1
    if top >= need:
        return None
    small = [int(p) for p in primes]
    for q in range(top + 1, need + 1):
        if q > top * top:
            return q
        if all(q % p for p in small if p * p <= q):
            return q
    return None


def build_segment(lo: int, hi: int, primes: Sequence[int] | np.ndarray) -> Segment:
    """Factor every n in [lo, hi] using the supplied base primes.

    Parameters
    ----------
    lo, hi : int
        Inclusive window bounds, 2 <= lo <= hi.
    primes : sequence of int
        All primes up to sqrt(hi), e.g. from base_primes(isqrt(hi)).

    Returns
    -------
    Segment
        Derived values agree exactly with the whole-range SpfTable path.

    Raises
    ------
    MissingPrimesError
        If the prime list does not cover sqrt(hi).
    MemoryBudgetError
        If the segment's working set would exceed the memory budget.
    """
    if lo < 2:
        raise ValueError(f"segments start at 2, got lo={lo}")
    if hi < lo:
        raise ValueError(f"need lo <= hi, got [{lo}, {hi}]")
    prs = np.asarray(primes, dtype=np.int64)
    need = math.isqrt(hi)
    if need >= 2:
        gap = _prime_list_gap(prs, need)
        if gap is not None:
            raise MissingPrimesError(
                f"prime list must cover sqrt({hi}) = {need}; missing {gap}"
            )

    size = hi - lo + 1
    budget = memory_budget()
    if 48 * size > budget:
        raise MemoryBudgetError(
            f"segment of {size} indices needs about {48 * size} bytes of "
            f"scratch, budget is {budget}; reduce the segment size"
        )

    residual = np.arange(lo, hi + 1, dtype=np.int64)
    use = prs[prs <= need]
    plist = [int(p) for p in use]
    starts_at = [(-lo) % p for p in plist]

    # One slot per dividing prime plus one unconditional residual slot.
    cnt = np.ones(size, dtype=np.int64)
    for p, i0 in zip(plist, starts_at):
        cnt[i0::p] += 1
    offsets = np.empty(size + 1, dtype=np.int64)
    offsets[0] = 0
    np.cumsum(cnt, out=offsets[1:])
    nnz = int(offsets[-1])
    if 40 * size + 9 * nnz > budget:
        raise MemoryBudgetError(
            f"segment [{lo}, {hi}] needs about {40 * size + 9 * nnz} bytes, "
            f"budget is {budget}; reduce the segment size"
        )

    factor_primes = np.empty(nnz, dtype=np.int64)
    factor_exps = np.empty(nnz, dtype=np.int8)
    cursor = offsets[:-1].copy()
    for p, i0 in zip(plist, starts_at):
        sl = slice(i0, size, p)
        slot = cursor[sl]
        r = residual[sl] // p
        e = np.ones(r.size, dtype=np.int8)
        live = np.flatnonzero(r % p == 0)
        while live.size:
            r[live] //= p
            e[live] += 1
            live = live[r[live] % p == 0]
        residual[sl] = r
        factor_primes[slot] = p
        factor_exps[slot] = e
        cursor[sl] += 1

    # Leftover cofactor is 1 or a single prime > sqrt(hi); pad with (1, 0).
    leftover = residual > 1
    factor_primes[cursor] = np.where(leftover, residual, 1)
    factor_exps[cursor] = leftover
    return Segment(lo, hi, offsets, factor_primes, factor_exps)


def iter_segments(
    lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT_SIZE, cuts: Iterable[int] = ()
) -> Iterable[tuple[int, int]]:
    """Split [lo, hi] into windows of at most segment_size indices.

    Every value in cuts that falls inside the range becomes a window upper
    bound, so callers can align segment ends with checkpoints.
    """
    if segment_size < 1:
        raise ValueError(f"segment_size must be positive, got {segment_size}")
    bounds = sorted({c for c in cuts if lo <= c <= hi} | {hi})
    start = lo
    for b in bounds:
        while start <= b:
            end = min(start + segment_size - 1, b)
            yield start, end
            start = end + 1


def _value_table(limit: int, fill) -> ValueTable:
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    budget = memory_budget()
    if limit + 1 > budget:
        raise MemoryBudgetError(f"value table for limit {limit} exceeds budget {budget}")
    values = np.zeros(limit + 1, dtype=np.int8)
    values[1] = 1
    if limit >= 2:
        primes = base_primes(math.isqrt(limit))
        for lo, hi in iter_segments(2, limit):
            seg = build_segment(lo, hi, primes)
            values[lo : hi + 1] = fill(seg)
    return ValueTable(limit, values)


def mu_table(limit: int) -> ValueTable:
    """Mobius values over [1, limit] in one signed byte per index."""
    return _value_table(limit, lambda seg: seg.mu_values())


def lambda_table(m: int, limit: int) -> ValueTable:
    """Order-m generalized Liouville values over [1, limit]."""
    validate_m(m)
    return _value_table(limit, lambda seg: seg.lambda_values(m))
