"""Symbolic integer/boolean expressions over named variables.

Terms are immutable trees built from integer constants, variable
references, applications of uninterpreted function symbols, arithmetic
(`+`, `-`, `*`, unary negation), arithmetic relations and boolean
connectives.  All integer arithmetic is unbounded; values never wrap.

Three operations carry the weight of the toolkit:

* :func:`evaluate` gives a term its mathematical value under an
  :class:`Environment` (variable values plus interpretations for the
  uninterpreted symbols).
* :func:`substitute` performs simultaneous replacement of variables by
  terms, which is how symbolic stores compose updates along a path.
* :func:`normalize` rewrites a term into a canonical form so that two
  data transformations can be compared by plain structural equality:
  constants are folded, commutative operators are flattened and their
  operands sorted under a fixed total order, subtraction becomes
  addition of a negation, double negation vanishes and a negated
  relation is replaced by its complement.  Equal normal forms imply
  equal semantics; the converse is not promised for nonlinear or
  uninterpreted terms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

Value = Union[int, bool]

INT = "int"
BOOL = "bool"

ARITH_OPS = ("+", "-", "*", "neg")
REL_OPS = ("=", "!=", "<", "<=", ">", ">=")
BOOL_OPS = ("and", "or", "not")

COMPLEMENT = {"=": "!=", "!=": "=", "<": ">=", "<=": ">", ">": "<=", ">=": "<"}

_REL_FUNCS: dict[str, Callable[[int, int], bool]] = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


class ExprError(Exception):
    """Base class for expression-level failures."""


class SortMismatch(ExprError):
    """An operand has the wrong sort (integer where boolean is needed, or vice versa)."""


class UnboundVariable(ExprError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


class UninterpretedSymbol(ExprError):
    def __init__(self, name: str):
        super().__init__(f"no interpretation for function symbol {name!r}")
        self.name = name


class Expr:
    """Base class; all expression nodes are frozen dataclasses."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class IntConst(Expr):
    value: int


@dataclass(frozen=True)
class BoolConst(Expr):
    value: bool


@dataclass(frozen=True)
class Var(Expr):
    """Reference to an integer-valued variable (a place/storage variable)."""

    name: str


@dataclass(frozen=True)
class Apply(Expr):
    """Application of an uninterpreted, integer-valued function symbol."""

    symbol: str
    args: tuple[Expr, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Arith(Expr):
    op: str
    args: tuple[Expr, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if self.op not in ARITH_OPS:
            raise ValueError(f"unknown arithmetic operator {self.op!r}")
        if self.op == "neg" and len(self.args) != 1:
            raise ValueError("unary negation takes exactly one operand")
        if self.op == "-" and len(self.args) != 2:
            raise ValueError("subtraction is binary")
        if self.op in ("+", "*") and len(self.args) < 2:
            raise ValueError(f"{self.op!r} needs at least two operands")


@dataclass(frozen=True)
class Rel(Expr):
    op: str
    lhs: Expr
    rhs: Expr

    def __post_init__(self) -> None:
        if self.op not in REL_OPS:
            raise ValueError(f"unknown relation {self.op!r}")


@dataclass(frozen=True)
class BoolOp(Expr):
    op: str
    args: tuple[Expr, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if self.op not in BOOL_OPS:
            raise ValueError(f"unknown boolean operator {self.op!r}")
        if self.op == "not" and len(self.args) != 1:
            raise ValueError("'not' takes exactly one operand")
        if self.op in ("and", "or") and len(self.args) < 1:
            raise ValueError(f"{self.op!r} needs at least one operand")


@dataclass(frozen=True)
class Environment:
    """Variable valuation plus interpretations for applied symbols.

    Interpretations are total integer functions; they are only needed
    when an expression containing applications is evaluated.
    """

    values: Mapping[str, int]
    functions: Mapping[str, Callable[..., int]] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.functions is None:
            object.__setattr__(self, "functions", {})


TRUE = BoolConst(True)
FALSE = BoolConst(False)


def add(*args: Expr) -> Expr:
    return Arith("+", tuple(args)) if len(args) > 1 else args[0]


def mul(*args: Expr) -> Expr:
    return Arith("*", tuple(args)) if len(args) > 1 else args[0]


def sub(a: Expr, b: Expr) -> Expr:
    return Arith("-", (a, b))


def neg(a: Expr) -> Expr:
    return Arith("neg", (a,))


def conj(args: Iterable[Expr]) -> Expr:
    """Conjunction of zero or more boolean terms (empty conjunction is true)."""
    terms = tuple(args)
    if not terms:
        return TRUE
    if len(terms) == 1:
        return terms[0]
    return BoolOp("and", terms)


def sort_of(e: Expr) -> str:
    """Return the sort of a well-sorted expression, raising :class:`SortMismatch` otherwise."""
    if isinstance(e, (IntConst, Var)):
        return INT
    if isinstance(e, BoolConst):
        return BOOL
    if isinstance(e, Apply):
        for a in e.args:
            if sort_of(a) != INT:
                raise SortMismatch(f"argument of {e.symbol} is not integer-sorted: {a}")
        return INT
    if isinstance(e, Arith):
        for a in e.args:
            if sort_of(a) != INT:
                raise SortMismatch(f"arithmetic over non-integer operand: {a}")
        return INT
    if isinstance(e, Rel):
        if sort_of(e.lhs) != INT or sort_of(e.rhs) != INT:
            raise SortMismatch(f"relation over non-integer operand: {e}")
        return BOOL
    if isinstance(e, BoolOp):
        for a in e.args:
            if sort_of(a) != BOOL:
                raise SortMismatch(f"boolean operator over non-boolean operand: {a}")
        return BOOL
    raise TypeError(f"not an expression: {e!r}")


def free_vars(e: Expr) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset((e.name,))
    if isinstance(e, (IntConst, BoolConst)):
        return frozenset()
    if isinstance(e, Apply):
        out: frozenset[str] = frozenset()
        for a in e.args:
            out |= free_vars(a)
        return out
    if isinstance(e, (Arith, BoolOp)):
        out = frozenset()
        for a in e.args:
            out |= free_vars(a)
        return out
    if isinstance(e, Rel):
        return free_vars(e.lhs) | free_vars(e.rhs)
    raise TypeError(f"not an expression: {e!r}")


def applied_symbols(e: Expr) -> frozenset[str]:
    """All uninterpreted function symbols occurring in the term."""
    out: frozenset[str] = frozenset()
    if isinstance(e, Apply):
        out = frozenset((e.symbol,))
        for a in e.args:
            out |= applied_symbols(a)
        return out
    if isinstance(e, (Arith, BoolOp)):
        for a in e.args:
            out |= applied_symbols(a)
        return out
    if isinstance(e, Rel):
        return applied_symbols(e.lhs) | applied_symbols(e.rhs)
    return out


def apply_chain(e: Expr) -> tuple[str, ...]:
    """Applied symbols in depth-first post-order (arguments before head).

    For a pure application nest this reads as the order in which the
    functions act on the data, innermost first; it is how composed
    updates are labelled in conversion reports.
    """
    chain: list[str] = []

    def walk(t: Expr) -> None:
        if isinstance(t, Apply):
            for a in t.args:
                walk(a)
            chain.append(t.symbol)
        elif isinstance(t, (Arith, BoolOp)):
            for a in t.args:
                walk(a)
        elif isinstance(t, Rel):
            walk(t.lhs)
            walk(t.rhs)

    walk(e)
    return tuple(chain)


def evaluate(e: Expr, env: Environment) -> Value:
    """Value of ``e`` under ``env``; unbounded integer arithmetic."""
    if isinstance(e, IntConst):
        return e.value
    if isinstance(e, BoolConst):
        return e.value
    if isinstance(e, Var):
        try:
            return env.values[e.name]
        except KeyError:
            raise UnboundVariable(e.name) from None
    if isinstance(e, Apply):
        try:
            fn = env.functions[e.symbol]
        except KeyError:
            raise UninterpretedSymbol(e.symbol) from None
        return int(fn(*(_eval_int(a, env) for a in e.args)))
    if isinstance(e, Arith):
        vals = [_eval_int(a, env) for a in e.args]
        if e.op == "+":
            return sum(vals)
        if e.op == "*":
            out = 1
            for v in vals:
                out *= v
            return out
        if e.op == "-":
            return vals[0] - vals[1]
        return -vals[0]
    if isinstance(e, Rel):
        return _REL_FUNCS[e.op](_eval_int(e.lhs, env), _eval_int(e.rhs, env))
    if isinstance(e, BoolOp):
        vals = [_eval_bool(a, env) for a in e.args]
        if e.op == "and":
            return all(vals)
        if e.op == "or":
            return any(vals)
        return not vals[0]
    raise TypeError(f"not an expression: {e!r}")


def _eval_int(e: Expr, env: Environment) -> int:
    v = evaluate(e, env)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SortMismatch(f"integer expected, got {v!r} from {e}")
    return v


def _eval_bool(e: Expr, env: Environment) -> bool:
    v = evaluate(e, env)
    if not isinstance(v, bool):
        raise SortMismatch(f"boolean expected, got {v!r} from {e}")
    return v


def substitute(e: Expr, bindings: Mapping[str, Expr]) -> Expr:
    """Simultaneous substitution of variables by integer-sorted terms.

    Variables absent from ``bindings`` are left unchanged.  Because the
    replacement terms are never re-visited, ``{x -> y, y -> x}`` swaps.
    """
    for name, repl in bindings.items():
        if sort_of(repl) != INT:
            raise SortMismatch(f"replacement for {name!r} is not integer-sorted: {repl}")
    return _subst(e, bindings)


def _subst(e: Expr, b: Mapping[str, Expr]) -> Expr:
    if isinstance(e, Var):
        return b.get(e.name, e)
    if isinstance(e, (IntConst, BoolConst)):
        return e
    if isinstance(e, Apply):
        return Apply(e.symbol, tuple(_subst(a, b) for a in e.args))
    if isinstance(e, Arith):
        return Arith(e.op, tuple(_subst(a, b) for a in e.args))
    if isinstance(e, Rel):
        return Rel(e.op, _subst(e.lhs, b), _subst(e.rhs, b))
    if isinstance(e, BoolOp):
        return BoolOp(e.op, tuple(_subst(a, b) for a in e.args))
    raise TypeError(f"not an expression: {e!r}")


# Total order on normalized terms used to sort operands of commutative
# operators: constants first, then variables lexicographically, then
# applications by symbol/arity/operands, then compound nodes.
def _key(e: Expr):
    if isinstance(e, IntConst):
        return (0, 0, e.value)
    if isinstance(e, BoolConst):
        return (0, 1, int(e.value))
    if isinstance(e, Var):
        return (1, e.name)
    if isinstance(e, Apply):
        return (2, e.symbol, len(e.args), tuple(_key(a) for a in e.args))
    if isinstance(e, Arith):
        return (3, e.op, len(e.args), tuple(_key(a) for a in e.args))
    if isinstance(e, Rel):
        return (4, e.op, _key(e.lhs), _key(e.rhs))
    if isinstance(e, BoolOp):
        return (5, e.op, len(e.args), tuple(_key(a) for a in e.args))
    raise TypeError(f"not an expression: {e!r}")


def normalize(e: Expr, collect_terms: bool = False) -> Expr:
    """Canonical form of a well-sorted expression.

    With ``collect_terms`` the additive like-term collection is enabled
    (``x - x`` becomes ``0``, ``2*x + x`` becomes ``3*x``); by default
    terms are only folded, flattened and sorted.
    """
    sort_of(e)
    return _norm(e, collect_terms)


def _norm(e: Expr, collect: bool) -> Expr:
    if isinstance(e, (IntConst, BoolConst, Var)):
        return e
    if isinstance(e, Apply):
        return Apply(e.symbol, tuple(_norm(a, collect) for a in e.args))
    if isinstance(e, Arith):
        if e.op == "-":
            return _norm(Arith("+", (e.args[0], Arith("neg", (e.args[1],)))), collect)
        if e.op == "neg":
            inner = _norm(e.args[0], collect)
            if isinstance(inner, IntConst):
                return IntConst(-inner.value)
            if isinstance(inner, Arith) and inner.op == "neg":
                return inner.args[0]
            return Arith("neg", (inner,))
        if e.op == "+":
            return _norm_add(e, collect)
        return _norm_mul(e, collect)
    if isinstance(e, Rel):
        lhs = _norm(e.lhs, collect)
        rhs = _norm(e.rhs, collect)
        if isinstance(lhs, IntConst) and isinstance(rhs, IntConst):
            return BoolConst(_REL_FUNCS[e.op](lhs.value, rhs.value))
        return Rel(e.op, lhs, rhs)
    if isinstance(e, BoolOp):
        if e.op == "not":
            inner = _norm(e.args[0], collect)
            if isinstance(inner, BoolConst):
                return BoolConst(not inner.value)
            if isinstance(inner, BoolOp) and inner.op == "not":
                return inner.args[0]
            if isinstance(inner, Rel):
                return Rel(COMPLEMENT[inner.op], inner.lhs, inner.rhs)
            return BoolOp("not", (inner,))
        return _norm_bool(e, collect)
    raise TypeError(f"not an expression: {e!r}")


def _flatten(op: str, args: Iterable[Expr]) -> list[Expr]:
    flat: list[Expr] = []
    for a in args:
        if isinstance(a, (Arith, BoolOp)) and a.op == op:
            flat.extend(a.args)
        else:
            flat.append(a)
    return flat


def _norm_add(e: Arith, collect: bool) -> Expr:
    operands = _flatten("+", (_norm(a, collect) for a in e.args))
    const = 0
    rest: list[Expr] = []
    for a in operands:
        if isinstance(a, IntConst):
            const += a.value
        else:
            rest.append(a)
    if collect:
        const, rest = _collect_terms(const, rest)
    rest.sort(key=_key)
    if const != 0 or not rest:
        rest.insert(0, IntConst(const))
    if len(rest) == 1:
        return rest[0]
    return Arith("+", tuple(rest))


def _collect_terms(const: int, operands: list[Expr]) -> tuple[int, list[Expr]]:
    coeffs: dict = {}
    order: list = []

    def bump(term: Expr, c: int) -> None:
        k = _key(term)
        if k not in coeffs:
            coeffs[k] = (term, 0)
            order.append(k)
        t, acc = coeffs[k]
        coeffs[k] = (t, acc + c)

    for a in operands:
        if isinstance(a, Arith) and a.op == "neg":
            bump(a.args[0], -1)
        elif isinstance(a, Arith) and a.op == "*" and isinstance(a.args[0], IntConst):
            tail = a.args[1:]
            bump(tail[0] if len(tail) == 1 else Arith("*", tail), a.args[0].value)
        else:
            bump(a, 1)

    out: list[Expr] = []
    for k in order:
        term, c = coeffs[k]
        if c == 0:
            continue
        if c == 1:
            out.append(term)
        elif c == -1:
            out.append(Arith("neg", (term,)))
        else:
            inner = _flatten("*", (IntConst(c), term))
            out.append(Arith("*", tuple(inner)))
    return const, out


def _norm_mul(e: Arith, collect: bool) -> Expr:
    operands = _flatten("*", (_norm(a, collect) for a in e.args))
    const = 1
    rest: list[Expr] = []
    for a in operands:
        if isinstance(a, IntConst):
            const *= a.value
        else:
            rest.append(a)
    if const == 0:
        return IntConst(0)
    rest.sort(key=_key)
    if const != 1 or not rest:
        rest.insert(0, IntConst(const))
    if len(rest) == 1:
        return rest[0]
    return Arith("*", tuple(rest))


def _norm_bool(e: BoolOp, collect: bool) -> Expr:
    operands = _flatten(e.op, (_norm(a, collect) for a in e.args))
    absorbing = e.op == "or"  # value of the constant that decides the whole term
    rest: list[Expr] = []
    for a in operands:
        if isinstance(a, BoolConst):
            if a.value == absorbing:
                return BoolConst(absorbing)
        else:
            rest.append(a)
    if not rest:
        return BoolConst(not absorbing)
    rest.sort(key=_key)
    if len(rest) == 1:
        return rest[0]
    return BoolOp(e.op, tuple(rest))


def negate_guard(g: Expr) -> Expr:
    """Negation of a guard: a lone relation is complemented, anything else is wrapped in ``not``."""
    if isinstance(g, Rel):
        return Rel(COMPLEMENT[g.op], g.lhs, g.rhs)
    if isinstance(g, BoolConst):
        return BoolConst(not g.value)
    if isinstance(g, BoolOp) and g.op == "not":
        return g.args[0]
    return BoolOp("not", (g,))


def structurally_equivalent(e1: Expr, e2: Expr, collect_terms: bool = False) -> bool:
    """True iff the two terms have identical normal forms.

    A true result guarantees semantic equality; a false result proves
    nothing for terms built from uninterpreted symbols.
    """
    if sort_of(e1) != sort_of(e2):
        raise SortMismatch("cannot compare expressions of different sorts")
    return normalize(e1, collect_terms) == normalize(e2, collect_terms)


# Pretty-printer.  Precedence, loosest to tightest: or, and, not,
# relations, + -, *, unary minus/atoms.  Identifiers may contain
# hyphens, so binary operators are always printed with surrounding
# spaces; `a - b` and the identifier `a-b` are different token streams.
_PREC_OR = 1
_PREC_AND = 2
_PREC_NOT = 3
_PREC_REL = 4
_PREC_ADD = 5
_PREC_MUL = 6
_PREC_ATOM = 7


def to_text(e: Expr) -> str:
    return _fmt(e, 0)


def _fmt(e: Expr, outer: int) -> str:
    if isinstance(e, IntConst):
        return str(e.value)
    if isinstance(e, BoolConst):
        return "true" if e.value else "false"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Apply):
        return f"{e.symbol}({', '.join(_fmt(a, 0) for a in e.args)})"
    if isinstance(e, Arith):
        if e.op == "neg":
            if isinstance(e.args[0], IntConst):
                return _wrap(f"-({_fmt(e.args[0], 0)})", _PREC_ATOM, outer)
            return _wrap(f"-{_fmt(e.args[0], _PREC_ATOM)}", _PREC_ATOM, outer)
        if e.op == "-":
            body = f"{_fmt(e.args[0], _PREC_ADD)} - {_fmt(e.args[1], _PREC_ADD + 1)}"
            return _wrap(body, _PREC_ADD, outer)
        prec = _PREC_ADD if e.op == "+" else _PREC_MUL
        body = f" {e.op} ".join(_fmt(a, prec) for a in e.args)
        return _wrap(body, prec, outer)
    if isinstance(e, Rel):
        body = f"{_fmt(e.lhs, _PREC_REL + 1)} {e.op} {_fmt(e.rhs, _PREC_REL + 1)}"
        return _wrap(body, _PREC_REL, outer)
    if isinstance(e, BoolOp):
        if e.op == "not":
            return _wrap(f"not {_fmt(e.args[0], _PREC_NOT)}", _PREC_NOT, outer)
        prec = _PREC_AND if e.op == "and" else _PREC_OR
        body = f" {e.op} ".join(_fmt(a, prec) for a in e.args)
        return _wrap(body, prec, outer)
    raise TypeError(f"not an expression: {e!r}")


def _wrap(body: str, prec: int, outer: int) -> str:
    return f"({body})" if prec < outer else body
