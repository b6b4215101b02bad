"""
Arithmetic expression language for user-supplied energies.

Grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := unary ('^' factor)?
    unary  := '-' unary | atom
    atom   := number | ident | ident '(' args ')' | '(' expr ')'

``^`` is right-associative and its left operand is a full ``unary``, so
``-2^2`` is ``(-2)^2 = 4``. Numbers are decimal with optional exponent
(``1e-3``). Functions: exp, log, sqrt, sin, cos, sinh, cosh, abs (one
argument), min, max (two or more), pow (two).

Error positions are 0-based byte offsets into the UTF-8 source.
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from rankone.exceptions import (
    ArityError,
    DomainError,
    ExprSyntaxError,
    ParamOutOfRangeError,
    UnboundVariableError,
    UnknownIdentifierError,
)
from rankone.models.energy import (
    FROM_ONE,
    HALF_LINE,
    POSITIVE,
    Interval,
    ScalarFn,
    SymmetricFn2,
)

logger = logging.getLogger(__name__)

TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
    | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
    | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

# Variables of each representation, as named on the command line.
VARIABLE_SETS: Mapping[str, Tuple[str, ...]] = {
    "h": ("t",),
    "f": ("theta",),
    "ftilde": ("eta",),
    "z": ("r",),
    "g": ("l1", "l2"),
    "wvol": ("J",),
}

VARIABLE_DOMAINS: Mapping[str, Interval] = {
    "t": POSITIVE,
    "theta": HALF_LINE,
    "eta": HALF_LINE,
    "r": FROM_ONE,
    "J": POSITIVE,
}


def _log(x: float) -> float:
    if not x > 0.0:
        raise DomainError("log", x, "argument must be positive")
    return math.log(x)


def _sqrt(x: float) -> float:
    if x < 0.0:
        raise DomainError("sqrt", x, "argument must be non-negative")
    return math.sqrt(x)


# name -> (callable, minimum arity, maximum arity or None)
FUNCTIONS: Mapping[str, Tuple[Callable[..., float], int, Optional[int]]] = {
    "exp": (math.exp, 1, 1),
    "log": (_log, 1, 1),
    "sqrt": (_sqrt, 1, 1),
    "sin": (math.sin, 1, 1),
    "cos": (math.cos, 1, 1),
    "sinh": (math.sinh, 1, 1),
    "cosh": (math.cosh, 1, 1),
    "abs": (abs, 1, 1),
    "min": (min, 2, None),
    "max": (max, 2, None),
    "pow": (math.pow, 2, 2),
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    position: int


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Node", ...]


Node = Union[Num, Var, Neg, BinOp, Call]


@dataclass(frozen=True)
class Expr:
    """Parsed expression over a fixed, ordered set of variables."""

    root: Node
    variables: Tuple[str, ...]
    source: str

    def eval(self, **bindings: float) -> float:
        return evaluate(self, bindings)

    def __str__(self) -> str:
        return to_source(self.root)


def tokenize(src: str) -> List[Token]:
    """Split ``src`` into tokens; positions are byte offsets."""
    tokens: List[Token] = []
    index = 0
    while index < len(src):
        match = TOKEN_RE.match(src, index)
        if match is None:
            raise ExprSyntaxError(_byte_offset(src, index), "a token", src[index])
        kind = match.lastgroup or ""
        if kind != "ws":
            tokens.append(Token(kind, match.group(), _byte_offset(src, index)))
        index = match.end()
    tokens.append(Token("end", "", _byte_offset(src, len(src))))
    return tokens


def _byte_offset(src: str, index: int) -> int:
    return len(src[:index].encode("utf-8"))


class _Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, tokens: Sequence[Token], variables: Sequence[str]) -> None:
        self.tokens = tokens
        self.variables = frozenset(variables)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _at(self, text: str) -> bool:
        token = self.current
        return token.kind == "op" and token.text == text

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            raise self._error(f"'{text}'")
        return self._advance()

    def _error(self, expected: str) -> ExprSyntaxError:
        token = self.current
        found = None if token.kind == "end" else token.text
        return ExprSyntaxError(token.position, expected, found)

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != "end":
            raise self._error("an operator or end of input")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._at("+") or self._at("-"):
            op = self._advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self._at("*") or self._at("/"):
            op = self._advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        base = self.unary()
        if self._at("^"):
            self._advance()
            return BinOp("^", base, self.factor())
        return base

    def unary(self) -> Node:
        if self._at("-"):
            self._advance()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Node:
        token = self.current
        if token.kind == "number":
            self._advance()
            value = float(token.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(token.position, "a finite number", token.text)
            return Num(value)
        if token.kind == "ident":
            self._advance()
            if self._at("("):
                return self._call(token)
            if token.text not in self.variables:
                raise UnknownIdentifierError(token.text, token.position)
            return Var(token.text)
        if self._at("("):
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        raise self._error("a number, identifier or '('")

    def _call(self, name: Token) -> Node:
        if name.text not in FUNCTIONS:
            raise UnknownIdentifierError(name.text, name.position)
        self._expect("(")
        args = [self.expr()]
        while self._at(","):
            self._advance()
            args.append(self.expr())
        self._expect(")")
        _, low, high = FUNCTIONS[name.text]
        if len(args) < low or (high is not None and len(args) > high):
            expected = str(low) if high is not None else f"{low}+"
            raise ArityError(name.text, expected, len(args))
        return Call(name.text, tuple(args))


def parse(src: str, variables: Sequence[str]) -> Expr:
    """
    Parse ``src`` over the declared ``variables``.

    Raises:
        ExprSyntaxError: Malformed input, with byte position.
        UnknownIdentifierError: Undeclared variable or unknown function.
        ArityError: Function called with the wrong number of arguments.
    """
    if not src.strip():
        raise ExprSyntaxError(0, "an expression")
    root = _Parser(tokenize(src), variables).parse()
    return Expr(root=root, variables=tuple(variables), source=src)


def _checked(name: str, value: float, argument: object) -> float:
    if not math.isfinite(value):
        raise DomainError(name, argument, "non-finite result")
    return value


def _eval(node: Node, bindings: Mapping[str, float]) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name not in bindings:
            raise UnboundVariableError(node.name)
        return float(bindings[node.name])
    if isinstance(node, Neg):
        return -_eval(node.operand, bindings)
    if isinstance(node, BinOp):
        left = _eval(node.left, bindings)
        right = _eval(node.right, bindings)
        try:
            if node.op == "+":
                value = left + right
            elif node.op == "-":
                value = left - right
            elif node.op == "*":
                value = left * right
            elif node.op == "/":
                value = left / right
            else:
                value = math.pow(left, right)
        except (ArithmeticError, ValueError) as exc:
            raise DomainError(node.op, (left, right), str(exc)) from exc
        return _checked(node.op, value, (left, right))
    args = [_eval(arg, bindings) for arg in node.args]
    fn = FUNCTIONS[node.name][0]
    try:
        value = float(fn(*args))
    except DomainError:
        raise
    except (ArithmeticError, ValueError) as exc:
        raise DomainError(node.name, tuple(args), str(exc)) from exc
    return _checked(node.name, value, tuple(args))


def evaluate(e: Expr, bindings: Mapping[str, float]) -> float:
    """
    IEEE double evaluation; never returns NaN or infinity.

    Raises:
        UnboundVariableError: If a variable of ``e`` has no binding.
        DomainError: For out-of-domain arguments or non-finite results.
    """
    return _eval(e.root, bindings)


def to_source(node: Node) -> str:
    """Fully parenthesized source text that parses back to ``node``."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    return f"{node.name}({', '.join(to_source(arg) for arg in node.args)})"


def to_scalar_fn(
    e: Expr, name: Optional[str] = None
) -> Union[ScalarFn, SymmetricFn2]:
    """
    Wrap ``e`` as a ScalarFn (one variable) or SymmetricFn2 (two variables).

    The domain of a one-variable form follows its variable (t, J: positive;
    theta, eta: [0, inf); r: [1, inf)). Registration checks run here, so a
    non-symmetric two-variable expression raises RegistrationError.
    """
    label = name or e.source
    if len(e.variables) == 2:
        first, second = e.variables
        return SymmetricFn2(
            lambda x, y: evaluate(e, {first: x, second: y}), name=label
        )
    (variable,) = e.variables
    domain = VARIABLE_DOMAINS.get(variable, POSITIVE)
    return ScalarFn(lambda x: evaluate(e, {variable: x}), domain, name=label)


def substitute(src: str, params: Mapping[str, float]) -> str:
    """
    Replace identifiers named in ``params`` by their numeric values.

    Raises:
        ParamOutOfRangeError: If a key does not occur in ``src`` or shadows a
            function name.
    """
    if not params:
        return src
    clash = sorted(set(params) & set(FUNCTIONS))
    if clash:
        raise ParamOutOfRangeError(f"parameter names shadow functions: {clash}")
    used: Dict[str, bool] = {key: False for key in params}
    pieces: List[str] = []
    index = 0
    for match in TOKEN_RE.finditer(src):
        if match.start() != index:
            break
        text = match.group()
        if match.lastgroup == "ident" and text in params:
            used[text] = True
            text = f"({params[text]!r})"
        pieces.append(text)
        index = match.end()
    pieces.append(src[index:])
    unused = sorted(key for key, seen in used.items() if not seen)
    if unused:
        raise ParamOutOfRangeError(f"unknown parameter(s) for expression: {unused}")
    return "".join(pieces)
