"""A small observable language over phase-space coordinates.

Expressions are immutable trees built from constants, the symbols in
:data:`ALPHABET`, ``+ - * /``, integer powers and ``sqrt``.  Construction
goes through smart constructors that fold constants, drop 0/1 identities
and flatten nested sums and products; there is no canonical form, equality
of observables is checked by sampling.

Grammar (whitespace-insensitive)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := ("+" | "-") unary | power
    power   := atom (("^" | "**") unary)?        # right-associative, integer exponent
    atom    := NUMBER | NAME | "sqrt" "(" expr ")" | "(" expr ")"

The Poisson bracket uses ``omega = dx^a ^ dp_a``, so ``{x^a, p_b} = delta^a_b``,
extended by ``s . (grad_s f x grad_s g)`` on the spin sphere.
"""

from __future__ import annotations

import math
import re
from typing import Mapping

POSITION = ("x1", "x2", "x3")
MOMENTUM = ("p1", "p2", "p3")
SPIN = ("s1", "s2", "s3")
COORDINATES = POSITION + MOMENTUM + SPIN
PARAMETERS = ("m", "S", "c")
ALPHABET = COORDINATES + PARAMETERS


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownSymbolError(ParseError):
    pass


class DomainError(ValueError):
    """Raised for sqrt of a negative number or division by zero."""


# --- nodes -------------------------------------------------------------------------

class Expression:
    __slots__ = ("_hash", "_fn")
    precedence = 4

    def _key(self) -> tuple:
        raise NotImplementedError

    def children(self) -> tuple["Expression", ...]:
        return ()

    def __hash__(self) -> int:
        try:
            return self._hash
        except AttributeError:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_hash", h)
            return h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __setattr__(self, name, value):
        raise AttributeError("expressions are immutable")

    # operator sugar
    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return sub(self, _coerce(other))

    def __rsub__(self, other):
        return sub(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __neg__(self):
        return neg(self)

    def __pow__(self, n: int):
        return power(self, n)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({', '.join(map(repr, self._key()))})"

    def __str__(self) -> str:
        return to_text(self)

    @property
    def symbols(self) -> frozenset[str]:
        out: set[str] = set()
        for node in _postorder(self):
            if isinstance(node, Sym):
                out.add(node.name)
        return frozenset(out)

    def size(self) -> int:
        """Number of distinct subtrees."""
        return sum(1 for _ in _postorder(self))


class Const(Expression):
    __slots__ = ("value",)

    def __init__(self, value: float):
        object.__setattr__(self, "value", float(value))

    def _key(self):
        return (self.value,)


class Sym(Expression):
    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)

    def _key(self):
        return (self.name,)


class Add(Expression):
    __slots__ = ("terms",)
    precedence = 1

    def __init__(self, *terms: Expression):
        object.__setattr__(self, "terms", tuple(terms))

    def _key(self):
        return self.terms

    def children(self):
        return self.terms


class Mul(Expression):
    __slots__ = ("factors",)
    precedence = 2

    def __init__(self, *factors: Expression):
        object.__setattr__(self, "factors", tuple(factors))

    def _key(self):
        return self.factors

    def children(self):
        return self.factors


class Div(Expression):
    __slots__ = ("num", "den")
    precedence = 2

    def __init__(self, num: Expression, den: Expression):
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def _key(self):
        return (self.num, self.den)

    def children(self):
        return (self.num, self.den)


class Pow(Expression):
    __slots__ = ("base", "exp")
    precedence = 3

    def __init__(self, base: Expression, exp: int):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "exp", int(exp))

    def _key(self):
        return (self.base, self.exp)

    def children(self):
        return (self.base,)


class Sqrt(Expression):
    __slots__ = ("arg",)

    def __init__(self, arg: Expression):
        object.__setattr__(self, "arg", arg)

    def _key(self):
        return (self.arg,)

    def children(self):
        return (self.arg,)


ZERO = Const(0.0)
ONE = Const(1.0)


def _coerce(value) -> Expression:
    if isinstance(value, Expression):
        return value
    if isinstance(value, str):
        return symbol(value)
    return Const(value)


def _is_const(e: Expression, value: float | None = None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


def symbol(name: str) -> Sym:
    if name not in ALPHABET:
        raise ValueError(f"unknown symbol {name!r}; valid symbols: {', '.join(ALPHABET)}")
    return Sym(name)


def const(value: float) -> Const:
    return Const(value)


# --- smart constructors ------------------------------------------------------------

def add(*terms: Expression) -> Expression:
    flat: list[Expression] = []
    total = 0.0
    for t in terms:
        parts = t.terms if isinstance(t, Add) else (t,)
        for p in parts:
            if isinstance(p, Const):
                total += p.value
            else:
                flat.append(p)
    if total != 0.0 or not flat:
        flat.append(Const(total))
    if len(flat) == 1:
        return flat[0]
    return Add(*flat)


def mul(*factors: Expression) -> Expression:
    flat: list[Expression] = []
    coeff = 1.0
    for f in factors:
        parts = f.factors if isinstance(f, Mul) else (f,)
        for p in parts:
            if isinstance(p, Const):
                coeff *= p.value
            else:
                flat.append(p)
    if coeff == 0.0:
        return ZERO
    if coeff != 1.0 or not flat:
        flat.insert(0, Const(coeff))
    if len(flat) == 1:
        return flat[0]
    return Mul(*flat)


def neg(e: Expression) -> Expression:
    return mul(Const(-1.0), e)


def sub(a: Expression, b: Expression) -> Expression:
    return add(a, neg(b))


def div(num: Expression, den: Expression) -> Expression:
    if _is_const(den, 1.0):
        return num
    if _is_const(num, 0.0):
        return ZERO
    if isinstance(den, Const) and den.value != 0.0:
        return mul(Const(1.0 / den.value), num)
    return Div(num, den)


def power(base: Expression, n: int) -> Expression:
    if int(n) != n:
        raise ValueError(f"only integer powers are supported, got {n!r}")
    n = int(n)
    if n == 0:
        return ONE
    if n == 1:
        return base
    if isinstance(base, Const) and (base.value != 0.0 or n > 0):
        return Const(base.value ** n)
    if isinstance(base, Pow):
        return power(base.base, base.exp * n)
    return Pow(base, n)


def sqrt(arg: Expression) -> Expression:
    if isinstance(arg, Const) and arg.value >= 0.0:
        return Const(math.sqrt(arg.value))
    return Sqrt(arg)


# --- traversal ----------------------------------------------------------------------

def _postorder(root: Expression):
    """Distinct subtrees, children first (iterative, shared subtrees visited once)."""
    seen: set[int] = set()
    stack: list[tuple[Expression, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for child in reversed(node.children()):
            if id(child) not in seen:
                stack.append((child, False))


# --- differentiation ------------------------------------------------------------------

def differentiate(f: Expression, sym: str | Sym) -> Expression:
    """Exact symbolic derivative with respect to a coordinate symbol."""
    name = sym.name if isinstance(sym, Sym) else sym
    if name not in COORDINATES:
        raise ValueError(f"can only differentiate by a coordinate symbol {COORDINATES}, got {name!r}")
    memo: dict[int, Expression] = {}
    for node in _postorder(f):
        memo[id(node)] = _derive(node, name, memo)
    return memo[id(f)]


def _derive(node: Expression, name: str, memo: dict[int, Expression]) -> Expression:
    d = lambda e: memo[id(e)]  # noqa: E731
    if isinstance(node, Const):
        return ZERO
    if isinstance(node, Sym):
        return ONE if node.name == name else ZERO
    if isinstance(node, Add):
        return add(*(d(t) for t in node.terms))
    if isinstance(node, Mul):
        parts = []
        for i, f in enumerate(node.factors):
            df = d(f)
            if _is_const(df, 0.0):
                continue
            parts.append(mul(*node.factors[:i], df, *node.factors[i + 1:]))
        return add(*parts) if parts else ZERO
    if isinstance(node, Div):
        du, dv = d(node.num), d(node.den)
        first = div(du, node.den)
        if _is_const(dv, 0.0):
            return first
        return sub(first, div(mul(node.num, dv), power(node.den, 2)))
    if isinstance(node, Pow):
        db = d(node.base)
        if _is_const(db, 0.0):
            return ZERO
        return mul(Const(node.exp), power(node.base, node.exp - 1), db)
    if isinstance(node, Sqrt):
        da = d(node.arg)
        if _is_const(da, 0.0):
            return ZERO
        return div(da, mul(Const(2.0), node))
    raise TypeError(f"unknown node {node!r}")


def gradient(f: Expression, syms=COORDINATES) -> dict[str, Expression]:
    return {s: differentiate(f, s) for s in syms}


# --- Poisson bracket -----------------------------------------------------------------

def poisson_bracket(f: Expression, g: Expression) -> Expression:
    """``{f, g} = sum_a (df/dx^a dg/dp_a - df/dp_a dg/dx^a) + s . (grad_s f x grad_s g)``."""
    terms = []
    for x, p in zip(POSITION, MOMENTUM):
        terms.append(mul(differentiate(f, x), differentiate(g, p)))
        terms.append(neg(mul(differentiate(f, p), differentiate(g, x))))
    fs = [differentiate(f, s) for s in SPIN]
    gs = [differentiate(g, s) for s in SPIN]
    for i, (j, k) in enumerate(((1, 2), (2, 0), (0, 1))):
        cross = sub(mul(fs[j], gs[k]), mul(fs[k], gs[j]))
        terms.append(mul(Sym(SPIN[i]), cross))
    return add(*terms)


# --- evaluation -------------------------------------------------------------------------

def _sqrt(v: float) -> float:
    if v < 0.0:
        raise DomainError(f"sqrt of negative number {v!r}")
    return math.sqrt(v)


def _div(a: float, b: float) -> float:
    if b == 0.0:
        raise DomainError("division by zero")
    return a / b


def _pow(a: float, n: int) -> float:
    if a == 0.0 and n < 0:
        raise DomainError("division by zero (negative power of zero)")
    return a ** n


def compile_expression(expr: Expression):
    """Compile to a Python function ``fn(env) -> float`` with shared subexpressions."""
    try:
        return expr._fn
    except AttributeError:
        pass
    names: dict[Expression, str] = {}
    lines = []
    syms = sorted(expr.symbols)
    for s in syms:
        lines.append(f"    {s} = env[{s!r}]")
    counter = 0
    for node in _postorder(expr):
        if node in names:
            continue
        if isinstance(node, Sym):
            names[node] = node.name
            continue
        if isinstance(node, Const):
            names[node] = repr(node.value)
            continue
        if isinstance(node, Add):
            code = " + ".join(names[t] for t in node.terms)
        elif isinstance(node, Mul):
            code = " * ".join(names[f] for f in node.factors)
        elif isinstance(node, Div):
            code = f"_div({names[node.num]}, {names[node.den]})"
        elif isinstance(node, Pow):
            code = f"_pow({names[node.base]}, {node.exp})"
        elif isinstance(node, Sqrt):
            code = f"_sqrt({names[node.arg]})"
        else:
            raise TypeError(f"unknown node {node!r}")
        var = f"t{counter}"
        counter += 1
        lines.append(f"    {var} = {code}")
        names[node] = var
    lines.append(f"    return {names[expr]}")
    src = "def _compiled(env):\n" + "\n".join(lines) + "\n"
    namespace = {"_div": _div, "_sqrt": _sqrt, "_pow": _pow}
    exec(compile(src, "<relloc-expression>", "exec"), namespace)
    fn = namespace["_compiled"]
    object.__setattr__(expr, "_fn", fn)
    return fn


def evaluate(expr: Expression, env: Mapping[str, float]) -> float:
    """Evaluate at numeric symbol values; raises :class:`DomainError` off-domain."""
    fn = compile_expression(expr)
    try:
        return float(fn(env))
    except KeyError as exc:
        raise ValueError(f"no value supplied for symbol {exc.args[0]!r}") from None
    except OverflowError as exc:
        raise DomainError(str(exc)) from None


# --- printing ------------------------------------------------------------------------------

def _fmt_const(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def to_text(e: Expression) -> str:
    """Render in the parser's grammar; ``parse(to_text(e))`` evaluates like ``e``."""
    return _render(e, 0)


def _render(e: Expression, parent_prec: int) -> str:
    if isinstance(e, Const):
        s = _fmt_const(e.value)
        if e.value < 0 and parent_prec > 0:
            return f"({s})"
        return s
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Sqrt):
        return f"sqrt({_render(e.arg, 0)})"
    if isinstance(e, Add):
        out = _render(e.terms[0], 1)
        for t in e.terms[1:]:
            if isinstance(t, Mul) and isinstance(t.factors[0], Const) and t.factors[0].value < 0:
                pos = mul(Const(-t.factors[0].value), *t.factors[1:])
                out += " - " + _render(pos, 2)
            elif isinstance(t, Const) and t.value < 0:
                out += " - " + _fmt_const(-t.value)
            else:
                out += " + " + _render(t, 1)
        return f"({out})" if parent_prec > 1 else out
    if isinstance(e, Mul):
        factors = list(e.factors)
        prefix = ""
        if isinstance(factors[0], Const) and factors[0].value == -1.0:
            prefix = "-"
            factors = factors[1:]
        # later factors are right operands of a left-associative "*": keep a "/" inside them grouped
        body = "*".join(_render(f, 2 if k == 0 else 3) for k, f in enumerate(factors))
        out = prefix + body
        return f"({out})" if parent_prec >= 2 and prefix or parent_prec > 2 else out
    if isinstance(e, Div):
        out = f"{_render(e.num, 2)}/{_render(e.den, 3)}"
        return f"({out})" if parent_prec > 2 else out
    if isinstance(e, Pow):
        base = _render(e.base, 4)
        if isinstance(e.base, Pow):
            base = f"({base})"
        return f"{base}^({e.exp})"
    raise TypeError(f"unknown node {e!r}")


# --- parsing -------------------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^(),]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, aliases: Mapping[str, Expression]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.aliases = aliases

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op: str):
        kind, val, pos = self.peek()
        if kind != "op" or val != op:
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {op!r}, found {found}", pos)
        self.advance()

    def parse(self) -> Expression:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {val!r}", pos)
        return e

    def expr(self) -> Expression:
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            rhs = self.term()
            e = add(e, rhs) if op == "+" else sub(e, rhs)
        return e

    def term(self) -> Expression:
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.advance()[1]
            rhs = self.unary()
            e = mul(e, rhs) if op == "*" else div(e, rhs)
        return e

    def unary(self) -> Expression:
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.advance()
            inner_e = self.unary()
            return neg(inner_e) if val == "-" else inner_e
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val in ("^", "**"):
            self.advance()
            exp_pos = self.peek()[2]
            exponent = self.unary()
            if not (isinstance(exponent, Const) and exponent.value.is_integer()):
                raise ParseError("exponent must be an integer constant", exp_pos)
            return power(base, int(exponent.value))
        return base

    def atom(self) -> Expression:
        kind, val, pos = self.advance()
        if kind == "num":
            return Const(float(val))
        if kind == "name":
            if val == "sqrt":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return sqrt(arg)
            if val in ALPHABET:
                return Sym(val)
            if val in self.aliases:
                return self.aliases[val]
            valid = ", ".join(ALPHABET + tuple(self.aliases))
            raise UnknownSymbolError(f"unknown symbol {val!r} (valid: {valid}, sqrt)", pos)
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {found}", pos)


def parse(text: str, aliases: Mapping[str, Expression] | None = None) -> Expression:
    """Parse ``text``; names in ``aliases`` expand to the given expressions."""
    return _Parser(text, aliases or {}).parse()
