"""Prime sieve, factorization, and divisor enumeration.

Everything downstream evaluates arithmetic functions on a ``Factorization``,
so this module is the only place that ever divides integers.  The sieve keeps
smallest prime factors for 2..limit; factorization of larger n (up to limit^2)
falls back to trial division by the sieved primes.
"""

from __future__ import annotations

import itertools
import os
from math import isqrt, prod

DEFAULT_SIEVE_LIMIT = 10**6
SIEVE_LIMIT_ENV = "MANGOLDT_SIEVE_LIMIT"
# Memory guard: the spf table is one Python int per slot (~80 MB at the ceiling).
SIEVE_CEILING = 10**8


class Factorization:
    """Prime-power decomposition n = p1^a1 * ... * ps^as with p1 < ... < ps.

    ``factors`` is a tuple of (prime, exponent) pairs; n = 1 is the empty
    tuple.  Instances are immutable value objects, produced by ``factorize``.
    """

    __slots__ = ("n", "factors")

    def __init__(self, n: int, factors: tuple) -> None:
        self.n = n
        self.factors = factors

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Factorization)
            and self.n == other.n
            and self.factors == other.factors
        )

    def __hash__(self) -> int:
        return hash((self.n, self.factors))

    def __repr__(self) -> str:
        return f"Factorization({self.n}, {self.factors!r})"


ONE_FACT = Factorization(1, ())


class Sieve:
    """Smallest-prime-factor table for 2..limit plus the ascending prime list.

    Immutable once built; shared freely across workers.
    """

    __slots__ = ("limit", "spf", "primes")

    def __init__(self, limit: int) -> None:
        if limit < 2:
            raise ValueError(f"sieve limit must be >= 2, got {limit}")
        if limit > SIEVE_CEILING:
            raise ValueError(
                f"sieve limit {limit} exceeds the memory ceiling {SIEVE_CEILING}"
            )
        spf = list(range(limit + 1))
        for i in range(2, isqrt(limit) + 1):
            if spf[i] == i:  # i is prime
                for j in range(i * i, limit + 1, i):
                    if spf[j] == j:
                        spf[j] = i
        self.limit = limit
        self.spf = spf
        self.primes = [m for m in range(2, limit + 1) if spf[m] == m]

    def is_prime(self, m: int) -> bool:
        if not 2 <= m <= self.limit:
            raise ValueError(f"{m} is outside the sieve range 2..{self.limit}")
        return self.spf[m] == m


def build_sieve(limit: int) -> Sieve:
    return Sieve(limit)


_SIEVE_CACHE: dict[int, Sieve] = {}


def default_sieve(limit: int | None = None) -> Sieve:
    """Shared lazily-built sieve; MANGOLDT_SIEVE_LIMIT overrides the default limit."""
    if limit is None:
        limit = int(os.environ.get(SIEVE_LIMIT_ENV, DEFAULT_SIEVE_LIMIT))
    sieve = _SIEVE_CACHE.get(limit)
    if sieve is None:
        sieve = _SIEVE_CACHE[limit] = Sieve(limit)
    return sieve


def factorize(n: int, sieve: Sieve) -> Factorization:
    """Canonical factorization of n, supported up to sieve.limit**2.

    Below the sieve limit this walks the spf chain; above it, trial division
    by sieved primes up to sqrt(n) leaves a prime cofactor.
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}: need n >= 1")
    if n == 1:
        return ONE_FACT
    out = []
    if n <= sieve.limit:
        spf = sieve.spf
        m = n
        while m > 1:
            p = spf[m]
            a = 1
            m //= p
            while m > 1 and spf[m] == p:
                a += 1
                m //= p
            out.append((p, a))
    elif n <= sieve.limit * sieve.limit:
        m = n
        for p in sieve.primes:
            if p * p > m:
                break
            if m % p == 0:
                a = 0
                while m % p == 0:
                    a += 1
                    m //= p
                out.append((p, a))
        if m > 1:
            out.append((m, 1))  # cofactor has no factor <= sqrt(m), hence prime
    else:
        bound = sieve.limit * sieve.limit
        raise ValueError(
            f"{n} exceeds the factorization bound {bound} (sieve limit {sieve.limit})"
        )
    return Factorization(n, tuple(out))


def divisors(fact: Factorization) -> list[int]:
    """All positive divisors, ascending, via mixed-radix count over exponent vectors."""
    pows = [[p**i for i in range(a + 1)] for p, a in fact.factors]
    divs = [prod(choice) for choice in itertools.product(*pows)]
    divs.sort()
    return divs


def divisor_split(fact: Factorization):
    """Yield (d, n/d) as a Factorization pair for every divisor d of n.

    Enumeration order follows the exponent-vector count, not divisor order;
    callers that need sorted output must sort.  This is the convolution
    workhorse, so it avoids any re-factorization.
    """
    factors = fact.factors
    if not factors:
        yield ONE_FACT, ONE_FACT
        return
    primes = [p for p, _ in factors]
    alphas = [a for _, a in factors]
    pows = [[p**i for i in range(a + 1)] for p, a in factors]
    n = fact.n
    for exps in itertools.product(*[range(a + 1) for a in alphas]):
        d = 1
        dfac = []
        cfac = []
        for i, e in enumerate(exps):
            if e:
                d *= pows[i][e]
                dfac.append((primes[i], e))
            r = alphas[i] - e
            if r:
                cfac.append((primes[i], r))
        yield Factorization(d, tuple(dfac)), Factorization(n // d, tuple(cfac))
