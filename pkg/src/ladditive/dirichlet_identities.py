"""Dirichlet convolution plus a data-driven registry of exact identities.

Each registry entry states one identity as an independently evaluated left
side (usually a genuine divisor-sum convolution) and a closed-form right
side evaluated straight off the factorization.  Sweeps compare the two over
integer ranges with zero tolerance in exact mode and report counterexamples.

Entries are keyed by stable ids (thm-2-1, cor-1-1, ...) used by the CLI and
the report JSON.  One entry, cor-LdOmega, is expected *not* to hold: its
stated closed form contradicts the g=Omega specialization of thm-3-2 (first
at n = 4), so it carries expected="paper-erratum" and also evaluates the
corrected form for the report.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from .factor_core import (
    Factorization,
    Sieve,
    default_sieve,
    divisor_split,
    factorize,
)
from .functions import (
    FunctionHandle,
    LAdditiveFunction,
    builtin,
    eval_h,
    eval_l_additive,
    eval_quotient,
    handle_of,
    h_handle,
    l_additive_source,
    pointwise_product,
    quotient_completely_additive,
)
from .mangoldt import mangoldt_handle
from .numeric import DEFAULT_REAL_TOL, is_exact, render

_MU = builtin("mu")
_TAU = builtin("tau")
_ONE = builtin("one")

COUNTEREXAMPLE_CAP = 20
DEFAULT_SOURCES = ("Omega", "Ld", "A", "delta")
DEFAULT_KS = (-1, 0, 1, 2)


def convolve(F: FunctionHandle, G: FunctionHandle, fact: Factorization):
    """(F * G)(n) = sum over d|n of F(d) G(n/d), exact on exact handles."""
    Fe, Ge = F.evaluator, G.evaluator
    total = 0
    for dfact, cfact in divisor_split(fact):
        fv = Fe(dfact)
        if fv:
            total += fv * Ge(cfact)
    return total


def convolve_prime_power(F: FunctionHandle, G: FunctionHandle, p: int, m: int):
    """(F * G)(p^m) = sum over j=0..m of F(p^j) G(p^(m-j)); no divisor list."""
    total = 0
    for j in range(m + 1):
        dfact = Factorization(p**j, ((p, j),) if j else ())
        fv = F.evaluator(dfact)
        if fv:
            r = m - j
            cfact = Factorization(p**r, ((p, r),) if r else ())
            total += fv * G.evaluator(cfact)
    return total


def convolution_handle(F: FunctionHandle, G: FunctionHandle) -> FunctionHandle:
    """The Dirichlet product F * G as a reusable handle."""
    return FunctionHandle(
        f"({F.name}*{G.name})", lambda fact: convolve(F, G, fact), "plumbing"
    )


class SlotError(ValueError):
    """A binding does not satisfy an identity's slot constraints."""


@dataclass(frozen=True)
class IdentityDescriptor:
    """One verifiable identity: id, display anchor, slot constraints, builder.

    ``build(bindings)`` returns the per-sweep evaluators:
    {"lhs": fn, "rhs": fn, "extras": [fn...], "corrected": fn or None}
    where each fn maps a Factorization to a Value.
    """

    id: str
    anchor: str
    build: Callable[[dict], dict]
    expected: str = "holds"
    f_slot: str | None = None  # None | "l-additive" | "completely-additive"
    g_slot: str | None = None
    k_slot: bool = False


REGISTRY: dict[str, IdentityDescriptor] = {}


def _identity(id: str, anchor: str, **kw):
    def deco(build):
        REGISTRY[id] = IdentityDescriptor(id=id, anchor=anchor, build=build, **kw)
        return build

    return deco


def _half(v):
    """Exact halving: keeps rationals exact, floats float."""
    if isinstance(v, float):
        return v / 2.0
    return Fraction(v, 2)


def _sum_aap1_ratio(f: LAdditiveFunction, g: LAdditiveFunction, fact: Factorization):
    """(1/2) sum over p^a||n of a(a+1) f(p)g(p)/h_f(p), with g given by g(p)."""
    total = 0
    for p, a in fact.factors:
        total += a * (a + 1) * f.ratio_at(p) * g.f_at(p)
    return _half(total)


def _lambda_conv_closed(f: LAdditiveFunction, g: LAdditiveFunction, fact: Factorization):
    """Closed form of (Lambda_f * Lambda_g)(n): (a-1)-term on one prime, a
    symmetric cross term on two primes, zero past two distinct primes."""
    fs = fact.factors
    if len(fs) == 1:
        p, a = fs[0]
        return (a - 1) * f.ratio_at(p) * g.ratio_at(p)
    if len(fs) == 2:
        p = fs[0][0]
        q = fs[1][0]
        return f.ratio_at(p) * g.ratio_at(q) + f.ratio_at(q) * g.ratio_at(p)
    return 0


@_identity(
    "thm-2-1",
    "f(n) = h_f(n) * sum_{d|n} Lambda_f(d)",
    f_slot="l-additive",
)
def _thm_2_1(b):
    f = b["f"]
    lam = mangoldt_handle(f)
    return {
        "lhs": lambda fact: eval_l_additive(f, fact),
        "rhs": lambda fact: eval_h(f, fact) * convolve(lam, _ONE, fact),
    }


@_identity(
    "thm-2-2",
    "Lambda_f = mu * (f/h_f) = -(1 * mu*(f/h_f))",
    f_slot="l-additive",
)
def _thm_2_2(b):
    f = b["f"]
    lam = mangoldt_handle(f)
    q = quotient_completely_additive(f)
    mu_q = pointwise_product(_MU, q)
    return {
        "lhs": lam.evaluator,
        "rhs": lambda fact: convolve(_MU, q, fact),
        "extras": [lambda fact: -convolve(mu_q, _ONE, fact)],
    }


@_identity(
    "cor-1-1",
    "(f * h_f)(n) = f(n) tau(n) / 2",
    f_slot="l-additive",
)
def _cor_1_1(b):
    f = b["f"]
    fh = handle_of(f)
    hh = h_handle(f)
    return {
        "lhs": lambda fact: convolve(fh, hh, fact),
        "rhs": lambda fact: _half(eval_l_additive(f, fact) * _TAU(fact)),
    }


@_identity(
    "cor-2-1",
    "(tau * Lambda_f)(n) = f(n) tau(n) / (2 h_f(n))",
    f_slot="l-additive",
)
def _cor_2_1(b):
    f = b["f"]
    lam = mangoldt_handle(f)
    return {
        "lhs": lambda fact: convolve(lam, _TAU, fact),
        "rhs": lambda fact: _half(eval_quotient(f, fact) * _TAU(fact)),
    }


@_identity(
    "thm-2-3",
    "(1 * g Lambda_f)(n) = (1/2) sum_{p^a||n} a(a+1) f(p)g(p)/h_f(p)",
    f_slot="l-additive",
    g_slot="completely-additive",
)
def _thm_2_3(b):
    f, g = b["f"], b["g"]
    g_lam = pointwise_product(mangoldt_handle(f), handle_of(g))
    return {
        "lhs": lambda fact: convolve(g_lam, _ONE, fact),
        "rhs": lambda fact: _sum_aap1_ratio(f, g, fact),
    }


@_identity(
    "thm-2-4",
    "(Lambda_f * g)(n) = f(n)g(n)/h_f(n) - (1 * g Lambda_f)(n)",
    f_slot="l-additive",
    g_slot="completely-additive",
)
def _thm_2_4(b):
    f, g = b["f"], b["g"]
    lam = mangoldt_handle(f)
    gh = handle_of(g)
    return {
        "lhs": lambda fact: convolve(lam, gh, fact),
        "rhs": lambda fact: eval_quotient(f, fact) * eval_l_additive(g, fact)
        - _sum_aap1_ratio(f, g, fact),
    }


@_identity(
    "thm-2-5",
    "(Lambda_f * Lambda_g)(n): (a-1)f(p)g(p)/(h_f(p)h_g(p)) on p^a, "
    "cross term on p^a q^b, else 0",
    f_slot="l-additive",
    g_slot="l-additive",
)
def _thm_2_5(b):
    f, g = b["f"], b["g"]
    lf = mangoldt_handle(f)
    lg = mangoldt_handle(g)
    return {
        "lhs": lambda fact: convolve(lf, lg, fact),
        "rhs": lambda fact: _lambda_conv_closed(f, g, fact),
    }


@_identity(
    "thm-2-8",
    "f Lambda_f / h_f + Lambda_f * Lambda_f = mu * (f/h_f)^2",
    f_slot="l-additive",
)
def _thm_2_8(b):
    f = b["f"]
    lam = mangoldt_handle(f)
    q = quotient_completely_additive(f)
    q2 = pointwise_product(q, q)
    return {
        "lhs": lambda fact: eval_quotient(f, fact) * lam(fact)
        + convolve(lam, lam, fact),
        "rhs": lambda fact: convolve(_MU, q2, fact),
    }


@_identity(
    "cor-2-2",
    "f = 1 * Lambda_f  (h_f = 1)",
    f_slot="completely-additive",
)
def _cor_2_2(b):
    f = b["f"]
    lam = mangoldt_handle(f)
    return {
        "lhs": lambda fact: eval_l_additive(f, fact),
        "rhs": lambda fact: convolve(lam, _ONE, fact),
    }


@_identity(
    "cor-2-3",
    "Lambda_f = mu * f = -(1 * mu f)  (h_f = 1)",
    f_slot="completely-additive",
)
def _cor_2_3(b):
    f = b["f"]
    lam = mangoldt_handle(f)
    fh = handle_of(f)
    mu_f = pointwise_product(_MU, fh)
    return {
        "lhs": lam.evaluator,
        "rhs": lambda fact: convolve(_MU, fh, fact),
        "extras": [lambda fact: -convolve(mu_f, _ONE, fact)],
    }


@_identity(
    "cor-2-4",
    "(1 * g Lambda_f)(n) = (1/2) sum a(a+1) f(p)g(p)  (h_f = 1)",
    f_slot="completely-additive",
    g_slot="completely-additive",
)
def _cor_2_4(b):
    f, g = b["f"], b["g"]
    g_lam = pointwise_product(mangoldt_handle(f), handle_of(g))
    return {
        "lhs": lambda fact: convolve(g_lam, _ONE, fact),
        "rhs": lambda fact: _sum_aap1_ratio(f, g, fact),
    }


@_identity(
    "cor-2-5",
    "(Lambda_f * g)(n) = f(n)g(n) - (1 * g Lambda_f)(n)  (h_f = 1)",
    f_slot="completely-additive",
    g_slot="completely-additive",
)
def _cor_2_5(b):
    f, g = b["f"], b["g"]
    lam = mangoldt_handle(f)
    gh = handle_of(g)
    return {
        "lhs": lambda fact: convolve(lam, gh, fact),
        "rhs": lambda fact: eval_l_additive(f, fact) * eval_l_additive(g, fact)
        - _sum_aap1_ratio(f, g, fact),
    }


@_identity(
    "cor-2-6",
    "(Lambda_f * Lambda_g) case split  (h_f = h_g = 1)",
    f_slot="completely-additive",
    g_slot="completely-additive",
)
def _cor_2_6(b):
    f, g = b["f"], b["g"]
    lf = mangoldt_handle(f)
    lg = mangoldt_handle(g)
    return {
        "lhs": lambda fact: convolve(lf, lg, fact),
        "rhs": lambda fact: _lambda_conv_closed(f, g, fact),
    }


@_identity(
    "cor-2-7",
    "f Lambda_f + Lambda_f * Lambda_f = mu * f^2  (h_f = 1)",
    f_slot="completely-additive",
)
def _cor_2_7(b):
    f = b["f"]
    lam = mangoldt_handle(f)
    fh = handle_of(f)
    f2 = pointwise_product(fh, fh)
    return {
        "lhs": lambda fact: eval_l_additive(f, fact) * lam(fact)
        + convolve(lam, lam, fact),
        "rhs": lambda fact: convolve(_MU, f2, fact),
    }


@_identity(
    "cor-2-8",
    "(tau * Lambda_f)(n) = f(n) tau(n) / 2  (h_f = 1)",
    f_slot="completely-additive",
)
def _cor_2_8(b):
    f = b["f"]
    lam = mangoldt_handle(f)
    return {
        "lhs": lambda fact: convolve(lam, _TAU, fact),
        "rhs": lambda fact: _half(eval_l_additive(f, fact) * _TAU(fact)),
    }


@_identity(
    "thm-3-1",
    "(Lambda_Omega * beta_k)(n) = Omega(n) beta_k(n) - beta_k(n)",
    k_slot=True,
)
def _thm_3_1(b):
    k = b["k"]
    lam = mangoldt_handle(l_additive_source("Omega"))
    bk = builtin("beta_k", k)

    def rhs(fact):
        v = bk(fact)
        return sum(a for _, a in fact.factors) * v - v

    return {"lhs": lambda fact: convolve(lam, bk, fact), "rhs": rhs}


@_identity(
    "thm-3-2",
    "(Lambda_Ld * g)(n) = g(n) Ld(n) - (1/2) sum a(a+1) g(p)/p",
    g_slot="completely-additive",
)
def _thm_3_2(b):
    g = b["g"]
    ld = l_additive_source("Ld")
    lam = mangoldt_handle(ld)
    gh = handle_of(g)
    return {
        "lhs": lambda fact: convolve(lam, gh, fact),
        "rhs": lambda fact: eval_l_additive(g, fact) * eval_l_additive(ld, fact)
        - _sum_aap1_ratio(ld, g, fact),
    }


@_identity(
    "thm-3-3",
    "(Lambda_Ld * beta_k)(n) = Ld(n) beta_k(n) - beta_{k-1}(n)",
    k_slot=True,
)
def _thm_3_3(b):
    k = b["k"]
    ld = l_additive_source("Ld")
    lam = mangoldt_handle(ld)
    bk = builtin("beta_k", k)
    bk1 = builtin("beta_k", k - 1)
    return {
        "lhs": lambda fact: convolve(lam, bk, fact),
        "rhs": lambda fact: eval_l_additive(ld, fact) * bk(fact) - bk1(fact),
    }


@_identity(
    "thm-3-4",
    "(Lambda_A * beta_k)(n) = A(n) beta_k(n) - beta_{k+1}(n)",
    k_slot=True,
)
def _thm_3_4(b):
    k = b["k"]
    a_src = l_additive_source("A")
    lam = mangoldt_handle(a_src)
    bk = builtin("beta_k", k)
    bk1 = builtin("beta_k", k + 1)
    return {
        "lhs": lambda fact: convolve(lam, bk, fact),
        "rhs": lambda fact: eval_l_additive(a_src, fact) * bk(fact) - bk1(fact),
    }


@_identity(
    "equ-a-ld",
    "(Lambda_Ld * A)(n) = A(n) Ld(n) - (Omega_2(n) + Omega(n))/2",
)
def _equ_a_ld(b):
    ld = l_additive_source("Ld")
    a_src = l_additive_source("A")
    lam = mangoldt_handle(ld)
    ah = handle_of(a_src)

    def rhs(fact):
        om2 = sum(a * a for _, a in fact.factors)
        om = sum(a for _, a in fact.factors)
        return eval_l_additive(a_src, fact) * eval_l_additive(ld, fact) - _half(
            om2 + om
        )

    return {"lhs": lambda fact: convolve(lam, ah, fact), "rhs": rhs}


@_identity(
    "eq-1-A-LambdaLd",
    "(1 * A Lambda_Ld)(n) = (1 * Ld Lambda_A)(n) = (Omega_2(n) + Omega(n))/2",
)
def _eq_1_a_lambda_ld(b):
    ld = l_additive_source("Ld")
    a_src = l_additive_source("A")
    a_lam_ld = pointwise_product(mangoldt_handle(ld), handle_of(a_src))
    ld_lam_a = pointwise_product(mangoldt_handle(a_src), handle_of(ld))

    def rhs(fact):
        return _half(sum(a * a + a for _, a in fact.factors))

    return {
        "lhs": lambda fact: convolve(a_lam_ld, _ONE, fact),
        "rhs": rhs,
        "extras": [lambda fact: convolve(ld_lam_a, _ONE, fact)],
    }


@_identity(
    "cor-LdOmega",
    "(Lambda_Ld * Omega)(n) = Omega(n) Ld(n) - Ld(n) - sum a^2/p "
    "[inconsistent with thm-3-2 at g=Omega; corrected form: "
    "Omega(n) Ld(n) - (1/2) sum a(a+1)/p]",
    expected="paper-erratum",
)
def _cor_ld_omega(b):
    ld = l_additive_source("Ld")
    om = l_additive_source("Omega")
    lam = mangoldt_handle(ld)
    omh = handle_of(om)

    def rhs_stated(fact):
        ld_n = eval_l_additive(ld, fact)
        om_n = sum(a for _, a in fact.factors)
        return om_n * ld_n - ld_n - sum(Fraction(a * a, p) for p, a in fact.factors)

    def rhs_corrected(fact):
        om_n = sum(a for _, a in fact.factors)
        return om_n * eval_l_additive(ld, fact) - _half(
            sum(Fraction(a * (a + 1), p) for p, a in fact.factors)
        )

    return {
        "lhs": lambda fact: convolve(lam, omh, fact),
        "rhs": rhs_stated,
        "corrected": rhs_corrected,
    }


# --------------------------------------------------------------------------
# Binding resolution and sweeps
# --------------------------------------------------------------------------


def _check_slot(desc_id: str, slot: str, constraint: str, spec) -> None:
    if not isinstance(spec, LAdditiveFunction):
        raise SlotError(f"{desc_id}: slot {slot} needs an L-additive function")
    if constraint == "completely-additive" and not spec.completely_additive:
        raise SlotError(
            f"{desc_id}: slot {slot} must be completely additive (h = 1); "
            f"{spec.name} has a nontrivial h"
        )


def resolve_bindings(
    desc: IdentityDescriptor,
    bindings: dict,
    extra_sources: dict[str, LAdditiveFunction] | None = None,
) -> dict:
    """Resolve name strings to specs and enforce slot constraints."""
    out = {}
    for slot, constraint in (("f", desc.f_slot), ("g", desc.g_slot)):
        if constraint is None:
            continue
        value = bindings.get(slot)
        if value is None:
            raise SlotError(f"{desc.id}: identity needs a binding for slot {slot}")
        if isinstance(value, str):
            if extra_sources and value in extra_sources:
                value = extra_sources[value]
            else:
                value = l_additive_source(value)
        _check_slot(desc.id, slot, constraint, value)
        out[slot] = value
    if desc.k_slot:
        k = bindings.get("k")
        if not isinstance(k, int):
            raise SlotError(f"{desc.id}: identity needs an integer k binding")
        out["k"] = k
    return out


def _binding_names(bindings: dict) -> dict:
    return {
        slot: (v.name if isinstance(v, LAdditiveFunction) else v)
        for slot, v in bindings.items()
    }


def default_bindings(
    desc: IdentityDescriptor,
    source_names: tuple[str, ...] = DEFAULT_SOURCES,
    ks: tuple[int, ...] = DEFAULT_KS,
) -> Iterator[dict]:
    """The default binding matrix, filtered by the identity's slot constraints."""

    def candidates(constraint):
        if constraint is None:
            return [None]
        out = []
        for name in source_names:
            spec = l_additive_source(name)
            if constraint == "completely-additive" and not spec.completely_additive:
                continue
            out.append(spec)
        return out

    for f in candidates(desc.f_slot):
        for g in candidates(desc.g_slot):
            for k in ks if desc.k_slot else [None]:
                b = {}
                if f is not None:
                    b["f"] = f
                if g is not None:
                    b["g"] = g
                if k is not None:
                    b["k"] = k
                yield b


@dataclass
class IdentityReport:
    """Outcome of one range sweep; counterexamples capped and sorted by n."""

    id: str
    anchor: str
    bindings: dict
    n_max: int
    status: str
    expected: str
    counterexamples: list = field(default_factory=list)
    failures: int = 0

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "bindings": self.bindings,
            "n_max": self.n_max,
            "status": self.status,
            "expected": self.expected,
            "failures": self.failures,
            "counterexamples": self.counterexamples,
        }


def _values_equal(a, b, tol: float | None) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= (tol if tol is not None else DEFAULT_REAL_TOL)


def check_identity(
    desc: IdentityDescriptor,
    bindings: dict,
    fact: Factorization,
    tol: float | None = None,
):
    """Evaluate one identity at one point: returns (lhs, rhs, equal)."""
    fns = desc.build(resolve_bindings(desc, bindings))
    lhs = fns["lhs"](fact)
    rhs = fns["rhs"](fact)
    equal = _values_equal(lhs, rhs, tol)
    for extra in fns.get("extras", ()):
        equal = equal and _values_equal(lhs, extra(fact), tol)
    return lhs, rhs, equal


def _run_range(fns, facts, lo, hi, tol, cap):
    lhs_fn = fns["lhs"]
    rhs_fn = fns["rhs"]
    extras = fns.get("extras", ())
    corrected = fns.get("corrected")
    failures = 0
    ces = []
    for n in range(lo, hi):
        fact = facts[n]
        lhs = lhs_fn(fact)
        rhs = rhs_fn(fact)
        bad = not _values_equal(lhs, rhs, tol)
        extra_vals = None
        if extras:
            extra_vals = [fn(fact) for fn in extras]
            for ev in extra_vals:
                if not _values_equal(lhs, ev, tol):
                    bad = True
        if bad:
            failures += 1
            if len(ces) < cap:
                ce = {"n": n, "lhs": render(lhs), "rhs": render(rhs)}
                if extra_vals is not None:
                    for i, ev in enumerate(extra_vals, 2):
                        ce[f"rhs{i}"] = render(ev)
                if corrected is not None:
                    ce["corrected"] = render(corrected(fact))
                ces.append(ce)
    return failures, ces


_FORK_CTX = None  # (fns, facts, tol, cap) for fork-based workers


def _sweep_chunk(rng):
    lo, hi = rng
    fns, facts, tol, cap = _FORK_CTX
    return _run_range(fns, facts, lo, hi, tol, cap)


def sweep_identity(
    desc: IdentityDescriptor,
    bindings: dict,
    n_max: int,
    sieve: Sieve | None = None,
    facts: list | None = None,
    jobs: int = 1,
    tol: float | None = None,
) -> IdentityReport:
    """Check one identity for every n in 1..n_max.

    The result is deterministic and independent of the number of jobs:
    counterexamples are collected in ascending n and capped at
    COUNTEREXAMPLE_CAP.
    """
    if sieve is None:
        sieve = default_sieve()
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if n_max > sieve.limit * sieve.limit:
        raise ValueError(
            f"n_max {n_max} exceeds sieve capacity {sieve.limit * sieve.limit}"
        )
    resolved = resolve_bindings(desc, bindings)
    fns = desc.build(resolved)
    if facts is None:
        facts = [None] + [factorize(n, sieve) for n in range(1, n_max + 1)]
    if jobs > 1:
        failures, ces = _sweep_parallel(fns, facts, n_max, tol, jobs)
    else:
        failures, ces = _run_range(fns, facts, 1, n_max + 1, tol, COUNTEREXAMPLE_CAP)
    return IdentityReport(
        id=desc.id,
        anchor=desc.anchor,
        bindings=_binding_names(resolved),
        n_max=n_max,
        status="verified" if failures == 0 else "failed",
        expected=desc.expected,
        counterexamples=ces[:COUNTEREXAMPLE_CAP],
        failures=failures,
    )


def _sweep_parallel(fns, facts, n_max, tol, jobs):
    global _FORK_CTX
    chunk = max(1, (n_max + jobs - 1) // jobs)
    ranges = [(lo, min(lo + chunk, n_max + 1)) for lo in range(1, n_max + 1, chunk)]
    _FORK_CTX = (fns, facts, tol, COUNTEREXAMPLE_CAP)
    try:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(jobs) as pool:
            parts = pool.map(_sweep_chunk, ranges)
    except (ValueError, OSError):
        # fork unavailable: fall back to in-process
        parts = [_sweep_chunk(r) for r in ranges]
    finally:
        _FORK_CTX = None
    failures = sum(p[0] for p in parts)
    ces = []
    for _, part_ces in parts:  # chunks are contiguous ascending, so this is sorted
        for ce in part_ces:
            if len(ces) >= COUNTEREXAMPLE_CAP:
                break
            ces.append(ce)
    return failures, ces


def run_registry(
    ids: list[str] | None = None,
    n_max: int = 10**4,
    sieve: Sieve | None = None,
    jobs: int = 1,
    tol: float | None = None,
    source_names: tuple[str, ...] = DEFAULT_SOURCES,
    ks: tuple[int, ...] = DEFAULT_KS,
) -> list[IdentityReport]:
    """Sweep every requested identity over its default binding matrix."""
    if sieve is None:
        sieve = default_sieve()
    if ids is None:
        ids = list(REGISTRY)
    reports = []
    facts = [None] + [factorize(n, sieve) for n in range(1, n_max + 1)]
    for ident in ids:
        desc = REGISTRY[ident]
        for bindings in default_bindings(desc, source_names, ks):
            reports.append(
                sweep_identity(desc, bindings, n_max, sieve, facts, jobs, tol)
            )
    return reports
