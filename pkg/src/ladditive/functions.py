"""Arithmetic-function catalog and the L-additive evaluation framework.

An arithmetic function f is L-additive when a completely multiplicative,
nonzero-valued h exists with f(mn) = f(m)h(n) + f(n)h(m) for all m, n.  Such
an f is determined by its values on primes:

    f(n) = h(n) * sum over p^a || n of  a * f(p) / h(p)

and f/h is completely additive.  This module hosts

* ``LAdditiveFunction``   -- a named (f on primes, h on primes) pair,
* ``FunctionHandle``      -- any evaluator Factorization -> Value,
* the built-in catalog    -- Omega, omega, Omega_k, Ld, A, delta, log,
                             beta_k/beta, mu, tau, e, one,
* a small expression grammar over the prime variable p, so user spec files
  can define their own (f(p), h(p)) pairs.

Built-in L-additive sources and what they do:

    Omega   f(p) = 1,   h = 1   count prime factors with multiplicity
    Ld      f(p) = 1/p, h = 1   logarithmic derivative, sum a/p
    A       f(p) = p,   h = 1   sum of prime factors with repetition, sum a*p
    delta   f(p) = 1,   h = p   arithmetic derivative, delta(n) = n * Ld(n)
    log     f(p) = ln p, h = 1  float-valued; smoke-test mode only

Convolution partners that are not L-additive sources: beta_k(n) = sum of p^k
over distinct p | n (beta = beta_1, omega = beta_0), Omega_k(n) = sum of a^k
(additive but not L-additive for k != 1), mu, tau, e, one.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from math import prod
from typing import Callable, Iterator

from .factor_core import Factorization, Sieve, factorize
from .numeric import Value


class ZeroHValue(ValueError):
    """h evaluated to 0 at a prime, violating the nonzero-valued precondition."""


class ParseError(ValueError):
    """Syntax error in a prime expression; carries the offending position."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position


# --------------------------------------------------------------------------
# Prime expressions: the grammar  ^  >  unary -  >  * /  >  + -
# with ^ right-associative and restricted to integer-constant exponents.
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([p+\-*/^()]))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            # skip leading whitespace before reporting
            stripped = pos + len(text[pos:]) - len(text[pos:].lstrip())
            if stripped >= len(text):
                break
            raise ParseError(f"unexpected character {text[stripped]!r}", stripped)
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), m.start(1)))
        else:
            tokens.append((m.group(2), None, m.start(2)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class PrimeExpr:
    """Parsed expression over the prime variable p; evaluates to an exact Fraction."""

    __slots__ = ("source", "root")

    def __init__(self, source: str, root: tuple) -> None:
        self.source = source
        self.root = root

    def __call__(self, p: int) -> Fraction:
        return _eval_node(self.root, p)

    def __repr__(self) -> str:
        return f"PrimeExpr({self.source!r})"

    def is_constant(self, value=None) -> bool:
        if self.root[0] != "const":
            return False
        return value is None or self.root[1] == value


def _eval_node(node: tuple, p: int) -> Fraction:
    op = node[0]
    if op == "const":
        return node[1]
    if op == "p":
        return Fraction(p)
    if op == "neg":
        return -_eval_node(node[1], p)
    if op == "pow":
        base = _eval_node(node[1], p)
        try:
            return base ** node[2]
        except ZeroDivisionError:
            raise ZeroDivisionError(
                f"expression {node!r} raises 0 to a negative power at p={p}"
            ) from None
    a = _eval_node(node[1], p)
    b = _eval_node(node[2], p)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    # op == "div"
    if b == 0:
        raise ZeroDivisionError(f"division by zero at p={p}")
    return a / b


def _fold(op: str, *args) -> tuple:
    # Constant subtrees collapse so that e.g. p^(6/2) has an integer exponent.
    if all(a[0] == "const" for a in args):
        vals = [a[1] for a in args]
        if op == "neg":
            return ("const", -vals[0])
        if op == "add":
            return ("const", vals[0] + vals[1])
        if op == "sub":
            return ("const", vals[0] - vals[1])
        if op == "mul":
            return ("const", vals[0] * vals[1])
        if op == "div" and vals[1] != 0:
            return ("const", vals[0] / vals[1])
    return (op, *args)


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple:
        return self.tokens[self.i]

    def take(self) -> tuple:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> tuple:
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[0]!r}", tok[2])
        return tok

    def parse(self) -> tuple:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[0]!r}", tok[2])
        return node

    def expr(self) -> tuple:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            node = _fold("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self) -> tuple:
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            rhs = self.unary()
            node = _fold("mul" if op == "*" else "div", node, rhs)
        return node

    def unary(self) -> tuple:
        if self.peek()[0] == "-":
            self.take()
            return _fold("neg", self.unary())
        return self.power()

    def power(self) -> tuple:
        base = self.atom()
        if self.peek()[0] == "^":
            caret = self.take()
            exponent = self.unary()  # right-associative: p^2^3 == p^(2^3)
            if exponent[0] != "const" or exponent[1].denominator != 1:
                raise ParseError("exponent must be an integer constant", caret[2])
            return _fold_pow(base, int(exponent[1]), caret[2])
        return base

    def atom(self) -> tuple:
        tok = self.take()
        if tok[0] == "int":
            return ("const", Fraction(tok[1]))
        if tok[0] == "p":
            return ("p",)
        if tok[0] == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {tok[0]!r}", tok[2])


def _fold_pow(base: tuple, exponent: int, position: int) -> tuple:
    if base[0] == "const":
        if base[1] == 0 and exponent < 0:
            raise ParseError("0 raised to a negative power", position)
        return ("const", base[1] ** exponent)
    return ("pow", base, exponent)


def parse_prime_expr(text: str) -> PrimeExpr:
    """Parse an expression in the variable p into an evaluatable AST."""
    return PrimeExpr(text, _Parser(text).parse())


# --------------------------------------------------------------------------
# L-additive functions
# --------------------------------------------------------------------------

PrimeMap = Callable[[int], Value]


class LAdditiveFunction:
    """A named (f on primes, h on primes) pair defining an L-additive function.

    ``h_on_prime=None`` means h = 1 identically, i.e. f is completely
    additive.  Values at individual primes are cached, since sweeps touch the
    same small primes millions of times.

    ``ratio_growth`` = (c, g) asserts |f(p)/h(p)| <= c * p**g; the series
    module uses it for truncation-tail bounds and abscissa checks.
    """

    __slots__ = (
        "name",
        "completely_additive",
        "real",
        "ratio_growth",
        "zero",
        "_f",
        "_h",
        "_fc",
        "_hc",
        "_rc",
    )

    def __init__(
        self,
        name: str,
        f_on_prime: PrimeMap,
        h_on_prime: PrimeMap | None = None,
        *,
        real: bool = False,
        ratio_growth: tuple[float, float] | None = None,
    ) -> None:
        self.name = name
        self._f = f_on_prime
        self._h = h_on_prime
        self.completely_additive = h_on_prime is None
        self.real = real
        self.ratio_growth = ratio_growth
        self.zero = 0.0 if real else 0
        self._fc: dict[int, Value] = {}
        self._hc: dict[int, Value] = {}
        self._rc: dict[int, Value] = {}

    def __repr__(self) -> str:
        return f"<LAdditiveFunction {self.name}>"

    def f_at(self, p: int) -> Value:
        v = self._fc.get(p)
        if v is None:
            v = self._fc[p] = self._f(p)
        return v

    def h_at(self, p: int) -> Value:
        if self._h is None:
            return 1
        v = self._hc.get(p)
        if v is None:
            v = self._h(p)
            if v == 0:
                raise ZeroHValue(f"h({p}) = 0 for function {self.name}")
            self._hc[p] = v
        return v

    def ratio_at(self, p: int) -> Value:
        """f(p)/h(p), the value Lambda takes on powers of p."""
        if self._h is None:
            return self.f_at(p)
        v = self._rc.get(p)
        if v is None:
            h = self.h_at(p)
            f = self.f_at(p)
            v = self._rc[p] = f / h if isinstance(f, float) else Fraction(f, h)
        return v


def eval_h(spec: LAdditiveFunction, fact: Factorization) -> Value:
    """h(n) = product of h(p)^a over p^a || n; empty product 1 at n = 1."""
    if spec.completely_additive:
        return 1
    out = 1
    for p, a in fact.factors:
        out *= spec.h_at(p) ** a
    return out


def eval_quotient(spec: LAdditiveFunction, fact: Factorization) -> Value:
    """(f/h)(n) = sum of a * f(p)/h(p): the completely additive quotient."""
    total = spec.zero
    for p, a in fact.factors:
        total += a * spec.ratio_at(p)
    return total


def eval_l_additive(spec: LAdditiveFunction, fact: Factorization) -> Value:
    """f(n) = h(n) * (f/h)(n); 0 at n = 1 (empty sum)."""
    q = eval_quotient(spec, fact)
    if spec.completely_additive:
        return q
    return eval_h(spec, fact) * q


class FunctionHandle:
    """A named, pure evaluator Factorization -> Value.

    kind is one of "l-additive", "additive", "multiplicative", or "plumbing"
    (derived/combinator handles).
    """

    __slots__ = ("name", "evaluator", "kind")

    def __init__(self, name: str, evaluator, kind: str) -> None:
        self.name = name
        self.evaluator = evaluator
        self.kind = kind

    def __call__(self, fact: Factorization) -> Value:
        return self.evaluator(fact)

    def __repr__(self) -> str:
        return f"<FunctionHandle {self.name} [{self.kind}]>"


def handle_of(spec: LAdditiveFunction) -> FunctionHandle:
    """The function f itself as an evaluator handle."""
    return FunctionHandle(
        spec.name, lambda fact: eval_l_additive(spec, fact), "l-additive"
    )


def h_handle(spec: LAdditiveFunction) -> FunctionHandle:
    """The completely multiplicative weight h_f as a handle."""
    return FunctionHandle(
        f"h[{spec.name}]", lambda fact: eval_h(spec, fact), "multiplicative"
    )


def quotient_completely_additive(spec: LAdditiveFunction) -> FunctionHandle:
    """The quotient f/h_f, which is completely additive."""
    return FunctionHandle(
        f"{spec.name}/h", lambda fact: eval_quotient(spec, fact), "additive"
    )


def eval_rational_extension(
    spec: LAdditiveFunction, n: int, m: int, sieve: Sieve
) -> Value:
    """f(n/m) = f(n) - f(m), defined only for completely additive f."""
    if not spec.completely_additive:
        raise ValueError(
            f"{spec.name} is not completely additive; the rational extension "
            "f(n/m) = f(n) - f(m) is undefined"
        )
    return eval_l_additive(spec, factorize(n, sieve)) - eval_l_additive(
        spec, factorize(m, sieve)
    )


def pointwise_product(F: FunctionHandle, G: FunctionHandle) -> FunctionHandle:
    """Pointwise product n -> F(n) * G(n) (not the Dirichlet product)."""
    Fe, Ge = F.evaluator, G.evaluator

    def ev(fact):
        v = Fe(fact)
        return v * Ge(fact) if v else v

    return FunctionHandle(f"{F.name}·{G.name}", ev, "plumbing")


def pointwise_sum(F: FunctionHandle, G: FunctionHandle) -> FunctionHandle:
    """Pointwise sum n -> F(n) + G(n)."""
    Fe, Ge = F.evaluator, G.evaluator
    return FunctionHandle(
        f"{F.name}+{G.name}", lambda fact: Fe(fact) + Ge(fact), "plumbing"
    )


# --------------------------------------------------------------------------
# Built-in catalog
# --------------------------------------------------------------------------

L_ADDITIVE_SOURCES: dict[str, LAdditiveFunction] = {
    "Omega": LAdditiveFunction("Omega", lambda p: 1, ratio_growth=(1.0, 0.0)),
    "Ld": LAdditiveFunction("Ld", lambda p: Fraction(1, p), ratio_growth=(0.5, 0.0)),
    "A": LAdditiveFunction("A", lambda p: p, ratio_growth=(1.0, 1.0)),
    "delta": LAdditiveFunction(
        "delta", lambda p: 1, lambda p: p, ratio_growth=(0.5, 0.0)
    ),
    "log": LAdditiveFunction("log", math.log, real=True, ratio_growth=(1.0, 0.5)),
}

BETA_K_RANGE = range(-2, 5)


def l_additive_source(name: str) -> LAdditiveFunction:
    """Look up a built-in L-additive source by name."""
    try:
        return L_ADDITIVE_SOURCES[name]
    except KeyError:
        known = ", ".join(sorted(L_ADDITIVE_SOURCES))
        raise ValueError(f"unknown L-additive source {name!r}; known: {known}") from None


def _omega_big(fact: Factorization) -> int:
    return sum(a for _, a in fact.factors)


def _omega_small(fact: Factorization) -> int:
    return len(fact.factors)


def _tau(fact: Factorization) -> int:
    return prod(a + 1 for _, a in fact.factors)


def _mu(fact: Factorization) -> int:
    for _, a in fact.factors:
        if a > 1:
            return 0
    return -1 if len(fact.factors) % 2 else 1


def _beta_k(k: int):
    if k >= 0:
        return lambda fact: sum(p**k for p, _ in fact.factors)
    return lambda fact: sum(Fraction(1, p**-k) for p, _ in fact.factors)


def _omega_k(k: int):
    if k >= 0:
        return lambda fact: sum(a**k for _, a in fact.factors)
    return lambda fact: sum(Fraction(1, a**-k) for _, a in fact.factors)


_PLAIN_BUILTINS = {
    "omega": (_omega_small, "additive"),
    "mu": (_mu, "multiplicative"),
    "tau": (_tau, "multiplicative"),
    "e": (lambda fact: 1 if fact.n == 1 else 0, "multiplicative"),
    "one": (lambda fact: 1, "multiplicative"),
}

BUILTIN_NAMES = (
    "Ld",
    "Omega",
    "Omega_k",
    "A",
    "e",
    "one",
    "log",
    "beta_k",
    "omega",
    "beta",
    "mu",
    "tau",
    "delta",
)


def builtin(name: str, k: int | None = None) -> FunctionHandle:
    """Catalog lookup.  beta_k and Omega_k require the shift argument k."""
    if name in L_ADDITIVE_SOURCES:
        return handle_of(L_ADDITIVE_SOURCES[name])
    if name in _PLAIN_BUILTINS:
        ev, kind = _PLAIN_BUILTINS[name]
        return FunctionHandle(name, ev, kind)
    if name == "beta":
        return FunctionHandle("beta", _beta_k(1), "additive")
    if name == "beta_k":
        if k is None:
            raise ValueError("beta_k needs k")
        if k not in BETA_K_RANGE:
            raise ValueError(
                f"beta_k supports k in {BETA_K_RANGE.start}..{BETA_K_RANGE.stop - 1}, got {k}"
            )
        return FunctionHandle(f"beta_{k}", _beta_k(k), "additive")
    if name == "Omega_k":
        if k is None:
            raise ValueError("Omega_k needs k")
        return FunctionHandle(f"Omega_{k}", _omega_k(k), "additive")
    raise ValueError(
        f"unknown function {name!r}; catalog: {', '.join(BUILTIN_NAMES)}"
    )


# --------------------------------------------------------------------------
# User spec files: stanzas of  name= / f(p)= / h(p)=  lines, # comments,
# blank line between functions.
# --------------------------------------------------------------------------


def _stanzas(lines: list[str]) -> Iterator[list[tuple[int, str]]]:
    block: list[tuple[int, str]] = []
    for no, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if block:
                yield block
                block = []
            continue
        block.append((no, line))
    if block:
        yield block


def load_spec_file(path: str) -> dict[str, LAdditiveFunction]:
    """Parse user-defined L-additive functions from a spec file."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.readlines()
    out: dict[str, LAdditiveFunction] = {}
    for block in _stanzas(lines):
        fields: dict[str, str] = {}
        for no, line in block:
            if "=" not in line:
                raise ValueError(f"{path}:{no}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in ("name", "f(p)", "h(p)", "growth"):
                raise ValueError(f"{path}:{no}: unknown key {key!r}")
            if key in fields:
                raise ValueError(f"{path}:{no}: duplicate key {key!r}")
            fields[key] = value.strip()
        first_line = block[0][0]
        if "name" not in fields or "f(p)" not in fields:
            raise ValueError(
                f"{path}:{first_line}: stanza needs at least name= and f(p)="
            )
        name = fields["name"]
        if name in out:
            raise ValueError(f"{path}:{first_line}: duplicate function name {name!r}")
        f_expr = parse_prime_expr(fields["f(p)"])
        h_text = fields.get("h(p)", "1")
        h_expr = parse_prime_expr(h_text)
        growth = None
        if "growth" in fields:
            c_text, _, g_text = fields["growth"].partition(",")
            growth = (float(c_text), float(g_text))
        completely_additive = h_expr.is_constant(1)
        out[name] = LAdditiveFunction(
            name,
            f_expr,
            None if completely_additive else h_expr,
            ratio_growth=growth,
        )
    return out
