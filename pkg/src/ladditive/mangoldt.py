"""Generalized von Mangoldt function and the induced derivative operator.

For an L-additive f with nonzero-valued h_f,

    Lambda_f(n) = f(p)/h_f(p)   if n = p^k, k >= 1,
                  0             otherwise,

and the derivative of an arbitrary handle g is g'(n) = g(n) f(n) / h_f(n).
Besides the case-split definition, Lambda_f has two Moebius-inversion forms
that serve as independent computation paths:

    Lambda_f = mu * (f/h_f)          (divisor sum of mu(n/d) (f/h_f)(d))
    Lambda_f = -(1 * mu f/h_f)       (negated divisor sum of mu(d) (f/h_f)(d))
"""

from __future__ import annotations

from .factor_core import Factorization, divisor_split
from .functions import (
    FunctionHandle,
    LAdditiveFunction,
    builtin,
    eval_quotient,
)
from .numeric import Value

_MU = builtin("mu")


class MangoldtHandle(FunctionHandle):
    """Handle for Lambda_f; remembers its source so identity code can reuse it."""

    __slots__ = ("source",)

    def __init__(self, source: LAdditiveFunction) -> None:
        def ev(fact: Factorization) -> Value:
            fs = fact.factors
            if len(fs) == 1:
                return source.ratio_at(fs[0][0])
            return source.zero

        super().__init__(f"Lambda_{source.name}", ev, "plumbing")
        self.source = source


def mangoldt_handle(spec: LAdditiveFunction) -> MangoldtHandle:
    return MangoldtHandle(spec)


def lambda_f(spec: LAdditiveFunction, fact: Factorization) -> Value:
    """Case-split definition: f(p)/h_f(p) on prime powers, 0 elsewhere."""
    fs = fact.factors
    if len(fs) == 1:
        return spec.ratio_at(fs[0][0])
    return spec.zero


def lambda_via_mobius(spec: LAdditiveFunction, fact: Factorization) -> Value:
    """Lambda_f(n) = sum over d|n of mu(n/d) (f/h_f)(d)."""
    total = spec.zero
    for dfact, cfact in divisor_split(fact):
        m = _MU(cfact)
        if m:
            total += m * eval_quotient(spec, dfact)
    return total


def lambda_via_negated(spec: LAdditiveFunction, fact: Factorization) -> Value:
    """Lambda_f(n) = -sum over d|n of mu(d) (f/h_f)(d)."""
    total = spec.zero
    for dfact, _ in divisor_split(fact):
        m = _MU(dfact)
        if m:
            total += m * eval_quotient(spec, dfact)
    return -total


def f_derivative(g: FunctionHandle, spec: LAdditiveFunction) -> FunctionHandle:
    """The derivative g'(n) = g(n) f(n) / h_f(n) induced by the source f.

    In particular e' = 0 and 1'(n) = (f/h_f)(n) = sum over d|n of Lambda_f(d).
    """
    ge = g.evaluator

    def ev(fact: Factorization) -> Value:
        v = ge(fact)
        return v * eval_quotient(spec, fact) if v else v

    return FunctionHandle(f"{g.name}'", ev, "plumbing")
