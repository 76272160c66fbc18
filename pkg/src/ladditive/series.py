"""Numeric Dirichlet-series engine.

Real s only.  Evaluates zeta(s), the prime zeta function P(s), generalized
prime sums P_f(s) = sum over p of (f(p)/h_f(p)) / (p^s - 1), and truncated
series sum_{n<=N} F(n)/n^s, then verifies the closed-form series identities
registered in SERIES_REGISTRY against caller-supplied tolerances.

Every partial sum carries an explicit truncation-tail bound: a result
"passes" iff |lhs - rhs| <= tolerance + lhs_tail + rhs_tail.  Tail bounds for
the product series use a declared growth exponent with an empirically
recorded constant (crude but auditable); prime-sum tails use the integral
estimate through sum_{n>P} n^(g-s).

Summation is chunked (fixed CHUNK_SIZE) with exact per-chunk fsum merges, so
results are bit-identical across runs regardless of how chunks are executed.
"""

from __future__ import annotations

from array import array
from bisect import bisect_right
from dataclasses import dataclass
from math import ceil, fsum
from typing import Callable, Iterable

from .factor_core import Sieve, default_sieve, factorize
from .functions import FunctionHandle, LAdditiveFunction, l_additive_source

CHUNK_SIZE = 1 << 16
_FLOAT_SLACK = 4e-16  # fsum is exactly rounded; slack covers the final merges


class AbscissaError(ValueError):
    """s is at or below the abscissa where the requested sum converges."""


def chunked_fsum(values: Iterable[float]) -> float:
    """Deterministic chunked summation: exact fsum per chunk, then of chunks."""
    parts = []
    buf = []
    for v in values:
        buf.append(v)
        if len(buf) == CHUNK_SIZE:
            parts.append(fsum(buf))
            buf.clear()
    if buf:
        parts.append(fsum(buf))
    return fsum(parts)


def zeta(s: float, tol: float = 1e-9) -> tuple[float, float]:
    """zeta(s) for s > 1 by direct summation plus Euler-Maclaurin tail.

    Returns (value, error_bound).  The tail past M uses
    a^(1-s)/(s-1) + a^(-s)/2 + s a^(-s-1)/12 with a = M+1; the truncation
    error is bounded by the next Euler-Maclaurin term.
    """
    if s <= 1:
        raise AbscissaError(f"zeta diverges for s <= 1 (got s={s})")
    if tol <= 0:
        raise ValueError("tol must be positive")
    # pick M so the remainder term s(s+1)(s+2) a^(-s-3)/720 dips below tol
    m = ceil((s * (s + 1) * (s + 2) / (720.0 * tol)) ** (1.0 / (s + 3)))
    m = min(max(m, 1000), 2_000_000)
    partial = chunked_fsum(n ** -s for n in range(1, m + 1))
    a = float(m + 1)
    tail = a ** (1 - s) / (s - 1) + a**-s / 2 + s * a ** (-s - 1) / 12
    value = partial + tail
    bound = s * (s + 1) * (s + 2) * a ** (-s - 3) / 720 + _FLOAT_SLACK * abs(value)
    return value, bound


def _primes_upto(sieve: Sieve, cutoff: int) -> list[int]:
    if cutoff < 2:
        raise ValueError(f"prime cutoff must be >= 2, got {cutoff}")
    if cutoff > sieve.limit:
        raise ValueError(
            f"prime cutoff {cutoff} exceeds sieve limit {sieve.limit}"
        )
    return sieve.primes[: bisect_right(sieve.primes, cutoff)]


def prime_zeta(s: float, prime_cutoff: int, sieve: Sieve | None = None) -> tuple[float, float]:
    """P(s) = sum over primes of p^-s, truncated; tail by the integral bound."""
    if s <= 1:
        raise AbscissaError(f"prime zeta diverges for s <= 1 (got s={s})")
    if sieve is None:
        sieve = default_sieve()
    primes = _primes_upto(sieve, prime_cutoff)
    value = chunked_fsum(p ** -s for p in primes)
    tail = prime_cutoff ** (1 - s) / (s - 1)
    return value, tail


def _growth(spec: LAdditiveFunction) -> tuple[float, float]:
    if spec.ratio_growth is None:
        raise ValueError(
            f"{spec.name} has no declared ratio growth (c, g); series bounds "
            "need one (add growth=c,g to the spec file stanza)"
        )
    return spec.ratio_growth


def p_f(
    spec: LAdditiveFunction, s: float, prime_cutoff: int, sieve: Sieve | None = None
) -> tuple[float, float]:
    """P_f(s) = sum over primes of (f(p)/h_f(p)) / (p^s - 1), truncated.

    Requires s > 1 + g where |f(p)/h_f(p)| <= c p^g.
    """
    c, g = _growth(spec)
    if s <= 1 + g:
        raise AbscissaError(
            f"P_{spec.name} needs s > {1 + g:g} (declared growth exponent {g:g}); got s={s}"
        )
    if sieve is None:
        sieve = default_sieve()
    primes = _primes_upto(sieve, prime_cutoff)
    value = chunked_fsum(float(spec.ratio_at(p)) / (p**s - 1) for p in primes)
    # p^s - 1 >= p^s / 2 for p >= 2, hence the factor 2
    tail = 2 * c * prime_cutoff ** (1 + g - s) / (s - 1 - g)
    return value, tail


def truncated_lambda_series(
    spec: LAdditiveFunction, s: float, n_cutoff: int, sieve: Sieve | None = None
) -> float:
    """sum_{n<=N} Lambda_f(n)/n^s, iterating prime powers only."""
    c, g = _growth(spec)
    if s <= 1 + g:
        raise AbscissaError(
            f"Lambda_{spec.name} series needs s > {1 + g:g}; got s={s}"
        )
    if sieve is None:
        sieve = default_sieve()
    primes = _primes_upto(sieve, min(n_cutoff, sieve.limit))

    def terms():
        for p in primes:
            r = float(spec.ratio_at(p))
            x = float(p) ** -s
            pk = p
            t = x
            while pk <= n_cutoff:
                yield r * t
                pk *= p
                t *= x

    return chunked_fsum(terms())


def lambda_series_tail(spec: LAdditiveFunction, s: float, n_cutoff: int) -> float:
    """Bound on sum_{n>N} Lambda_f(n)/n^s via |Lambda_f(n)| <= c n^g."""
    c, g = _growth(spec)
    return c * n_cutoff ** (1 + g - s) / (s - 1 - g)


def truncated_product_series(
    F: FunctionHandle, s: float, n_cutoff: int, sieve: Sieve | None = None
) -> float:
    """sum_{n<=N} F(n)/n^s for an arbitrary handle (generic, factorizes each n)."""
    if sieve is None:
        sieve = default_sieve()

    def terms():
        for n in range(1, n_cutoff + 1):
            v = F(factorize(n, sieve))
            if v:
                yield float(v) * float(n) ** -s

    return chunked_fsum(terms())


# --------------------------------------------------------------------------
# Fast tabulation of the product series coefficients up to N = 10^6
# --------------------------------------------------------------------------


def _spf_tables(sieve: Sieve, limit: int):
    """rest[n] and lead_e[n] with n = spf(n)^lead_e * rest, spf(n) not | rest."""
    spf = sieve.spf
    rest = array("q", bytes(8 * (limit + 1)))
    lead_e = array("b", bytes(limit + 1))
    rest[1] = 1
    for n in range(2, limit + 1):
        p = spf[n]
        m = n // p
        if m > 1 and spf[m] == p:
            lead_e[n] = lead_e[m] + 1
            rest[n] = rest[m]
        else:
            lead_e[n] = 1
            rest[n] = m
    return rest, lead_e


def _tab_base(sieve: Sieve, limit: int, name: str, k: int | None = None):
    """Tabulate one base function as floats for 0..limit by spf recurrence."""
    rest, lead_e = _spf_tables(sieve, limit)
    spf = sieve.spf
    out = array("d", bytes(8 * (limit + 1)))
    if name == "Omega":
        for n in range(2, limit + 1):
            out[n] = out[rest[n]] + lead_e[n]
    elif name == "tau":
        out[1] = 1.0
        for n in range(2, limit + 1):
            out[n] = out[rest[n]] * (lead_e[n] + 1)
    elif name == "Ld":
        for n in range(2, limit + 1):
            out[n] = out[rest[n]] + lead_e[n] / spf[n]
    elif name == "A":
        for n in range(2, limit + 1):
            out[n] = out[rest[n]] + lead_e[n] * spf[n]
    elif name == "beta_k":
        if k == 0:
            for n in range(2, limit + 1):
                out[n] = out[rest[n]] + 1.0
        elif k == 1:
            for n in range(2, limit + 1):
                out[n] = out[rest[n]] + spf[n]
        else:
            for n in range(2, limit + 1):
                out[n] = out[rest[n]] + float(spf[n]) ** k
    else:
        raise ValueError(f"no tabulation for {name!r}")
    return out


_PRODUCT_FACTORS = {
    "thm-4-1": ("tau", "Omega"),
    "thm-4-2": ("Omega", "beta_k"),
    "thm-4-3": ("Ld", "beta_k"),
    "thm-4-4": ("A", "beta_k"),
}

# growth exponent of the tabulated product, up to logarithmic factors
_PRODUCT_GROWTH = {
    "thm-4-1": lambda k: 0.0,
    "thm-4-2": lambda k: max(k, 0.0),
    "thm-4-3": lambda k: max(k, 0.0),
    "thm-4-4": lambda k: 1.0 + max(k, 0.0),
}


def _product_partial(identity: str, s: float, n_cutoff: int, k: int | None, sieve: Sieve):
    """(partial sum, tail bound, coef, eps) for the identity's product series."""
    left, right = _PRODUCT_FACTORS[identity]
    a = _tab_base(sieve, n_cutoff, left, k)
    b = _tab_base(sieve, n_cutoff, right, k)
    partial = chunked_fsum(
        a[n] * b[n] * float(n) ** -s for n in range(2, n_cutoff + 1)
    )
    g = _PRODUCT_GROWTH[identity](k if k is not None else 0)
    margin = min(0.5, (s - 1 - g) / 2)
    eps = g + margin
    coef = max(a[n] * b[n] * float(n) ** -eps for n in range(2, n_cutoff + 1))
    tail = coef * n_cutoff ** (1 + eps - s) / (s - 1 - eps)
    return partial, tail, coef, eps


# --------------------------------------------------------------------------
# Identity registry
# --------------------------------------------------------------------------


@dataclass
class SeriesParams:
    """Truncation parameters; prime_cutoff defaults to n_cutoff."""

    s: float
    n_cutoff: int = 10**4
    prime_cutoff: int | None = None
    k: int | None = None

    def __post_init__(self):
        if self.prime_cutoff is None:
            self.prime_cutoff = self.n_cutoff
        if self.n_cutoff < 2 or self.prime_cutoff < 2:
            raise ValueError("cutoffs must be >= 2")


@dataclass
class SeriesResult:
    identity: str
    anchor: str
    s: float
    k: int | None
    n_cutoff: int
    prime_cutoff: int
    lhs_partial: float
    lhs_tail_bound: float
    rhs_value: float
    rhs_tail_bound: float
    abs_difference: float
    tolerance: float
    passed: bool
    chunk_size: int = CHUNK_SIZE
    lhs_growth_coef: float | None = None
    lhs_growth_exponent: float | None = None
    binding: str | None = None

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "anchor": self.anchor,
            "s": self.s,
            "k": self.k,
            "n_cutoff": self.n_cutoff,
            "prime_cutoff": self.prime_cutoff,
            "binding": self.binding,
            "lhs_partial": self.lhs_partial,
            "lhs_tail_bound": self.lhs_tail_bound,
            "rhs_value": self.rhs_value,
            "rhs_tail_bound": self.rhs_tail_bound,
            "abs_difference": self.abs_difference,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "chunk_size": self.chunk_size,
            "lhs_growth_coef": self.lhs_growth_coef,
            "lhs_growth_exponent": self.lhs_growth_exponent,
        }
        return out


def _vb_mul(a: tuple[float, float], b: tuple[float, float]) -> tuple[float, float]:
    av, ae = a
    bv, be = b
    return av * bv, abs(av) * be + abs(bv) * ae + ae * be


def _vb_add(a: tuple[float, float], b: tuple[float, float]) -> tuple[float, float]:
    return a[0] + b[0], a[1] + b[1]


@dataclass(frozen=True)
class SeriesIdentity:
    id: str
    anchor: str
    needs_f: bool
    needs_k: bool
    abscissa: Callable  # (k) -> float, strict lower bound for s
    run: Callable  # (params, sieve, f) -> pieces


SERIES_REGISTRY: dict[str, SeriesIdentity] = {}


def _series(id, anchor, needs_f=False, needs_k=False, abscissa=lambda k: 1.0):
    def deco(run):
        SERIES_REGISTRY[id] = SeriesIdentity(id, anchor, needs_f, needs_k, abscissa, run)
        return run

    return deco


@_series(
    "thm-2-6",
    "sum_n Lambda_f(n)/n^s = sum_p f(p) / (h_f(p) p^s - h_f(p))",
    needs_f=True,
)
def _run_thm_2_6(params: SeriesParams, sieve: Sieve, f: LAdditiveFunction):
    lhs = truncated_lambda_series(f, params.s, params.n_cutoff, sieve)
    lhs_tail = lambda_series_tail(f, params.s, params.n_cutoff)
    rhs, rhs_tail = p_f(f, params.s, params.prime_cutoff, sieve)
    return lhs, lhs_tail, rhs, rhs_tail, None, None


@_series(
    "thm-4-1",
    "sum_n tau(n) Omega(n)/n^s = 2 zeta(s)^2 P_Omega(s)",
)
def _run_thm_4_1(params: SeriesParams, sieve: Sieve, f):
    lhs, lhs_tail, coef, eps = _product_partial(
        "thm-4-1", params.s, params.n_cutoff, None, sieve
    )
    z = zeta(params.s)
    po = p_f(l_additive_source("Omega"), params.s, params.prime_cutoff, sieve)
    rv, re = _vb_mul(_vb_mul(z, z), po)
    return lhs, lhs_tail, 2 * rv, 2 * re, coef, eps


@_series(
    "thm-4-2",
    "sum_n Omega(n) beta_k(n)/n^s = zeta(s) P(s-k) (P_Omega(s) + 1)",
    needs_k=True,
    abscissa=lambda k: max(1.0, k + 1.0),
)
def _run_thm_4_2(params: SeriesParams, sieve: Sieve, f):
    s, k = params.s, params.k
    lhs, lhs_tail, coef, eps = _product_partial("thm-4-2", s, params.n_cutoff, k, sieve)
    z = zeta(s)
    pk = prime_zeta(s - k, params.prime_cutoff, sieve)
    po = p_f(l_additive_source("Omega"), s, params.prime_cutoff, sieve)
    rv, re = _vb_mul(_vb_mul(z, pk), (po[0] + 1.0, po[1]))
    return lhs, lhs_tail, rv, re, coef, eps


@_series(
    "thm-4-3",
    "sum_n Ld(n) beta_k(n)/n^s = zeta(s) (P(s-k) P_Ld(s) + P(s-k+1))",
    needs_k=True,
    abscissa=lambda k: max(1.0, k + 1.0),
)
def _run_thm_4_3(params: SeriesParams, sieve: Sieve, f):
    s, k = params.s, params.k
    lhs, lhs_tail, coef, eps = _product_partial("thm-4-3", s, params.n_cutoff, k, sieve)
    z = zeta(s)
    pk = prime_zeta(s - k, params.prime_cutoff, sieve)
    pld = p_f(l_additive_source("Ld"), s, params.prime_cutoff, sieve)
    pk1 = prime_zeta(s - k + 1, params.prime_cutoff, sieve)
    rv, re = _vb_mul(z, _vb_add(_vb_mul(pk, pld), pk1))
    return lhs, lhs_tail, rv, re, coef, eps


@_series(
    "thm-4-4",
    "sum_n A(n) beta_k(n)/n^s = zeta(s) (P(s-k) P_A(s) + P(s-k-1))",
    needs_k=True,
    abscissa=lambda k: max(2.0, k + 2.0),
)
def _run_thm_4_4(params: SeriesParams, sieve: Sieve, f):
    s, k = params.s, params.k
    lhs, lhs_tail, coef, eps = _product_partial("thm-4-4", s, params.n_cutoff, k, sieve)
    z = zeta(s)
    pk = prime_zeta(s - k, params.prime_cutoff, sieve)
    pa = p_f(l_additive_source("A"), s, params.prime_cutoff, sieve)
    pk1 = prime_zeta(s - k - 1, params.prime_cutoff, sieve)
    rv, re = _vb_mul(z, _vb_add(_vb_mul(pk, pa), pk1))
    return lhs, lhs_tail, rv, re, coef, eps


def verify_series_identity(
    identity: str,
    params: SeriesParams,
    tolerance: float = 1e-3,
    sieve: Sieve | None = None,
    f: LAdditiveFunction | None = None,
) -> SeriesResult:
    """Evaluate both sides of a registered series identity and compare.

    passed iff |lhs_partial - rhs_value| <= tolerance + both tail bounds.
    """
    try:
        entry = SERIES_REGISTRY[identity]
    except KeyError:
        known = ", ".join(sorted(SERIES_REGISTRY))
        raise ValueError(f"unknown series identity {identity!r}; known: {known}") from None
    if sieve is None:
        sieve = default_sieve()
    if entry.needs_f and f is None:
        raise ValueError(f"{identity} needs an L-additive function binding")
    if entry.needs_k and params.k is None:
        raise ValueError(f"{identity} needs the shift k")
    if entry.needs_f:
        c, g = _growth(f)
        floor = 1.0 + g
    else:
        floor = entry.abscissa(params.k if params.k is not None else 0)
        # the product-series tail also needs s past the LHS growth exponent
        if identity in _PRODUCT_GROWTH:
            floor = max(
                floor, 1.0 + _PRODUCT_GROWTH[identity](params.k if params.k is not None else 0)
            )
    if params.s <= floor:
        raise AbscissaError(
            f"{identity} requires s > {floor:g}; got s={params.s}"
        )
    lhs, lhs_tail, rhs, rhs_tail, coef, eps = entry.run(params, sieve, f)
    diff = abs(lhs - rhs)
    return SeriesResult(
        identity=identity,
        anchor=entry.anchor,
        s=params.s,
        k=params.k,
        n_cutoff=params.n_cutoff,
        prime_cutoff=params.prime_cutoff,
        lhs_partial=lhs,
        lhs_tail_bound=lhs_tail,
        rhs_value=rhs,
        rhs_tail_bound=rhs_tail,
        abs_difference=diff,
        tolerance=tolerance,
        passed=diff <= tolerance + lhs_tail + rhs_tail,
        lhs_growth_coef=coef,
        lhs_growth_exponent=eps,
        binding=f.name if f is not None else None,
    )
