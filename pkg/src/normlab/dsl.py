"""A small text language for holomorphic functions, and the JSON function-file format.

Grammar (whitespace insignificant)::

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := '-' unary | power
    power   := atom ('^' INT)?
    atom    := NUMBER | NUMBER 'i' | 'i' | 'z' | PARAM
             | 'exp' '(' expr ')' | 'reflect' '(' expr ')' | '(' expr ')'

Integer exponents are limited to 0..64 and expanded into products.  Division
is rejected.  Parameters are replaced by real literals before parsing.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from . import analytic as an
from .errors import ParseError, SchemaError, UnboundParam, UnsupportedConstruct

MAX_EXPONENT = 64
RESERVED = frozenset({"z", "i", "exp", "reflect"})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # num | ident | op | end
    text: str
    pos: int
    value: complex | None = None


def tokenize(text: str, params: dict | None = None) -> list[Token]:
    params = params or {}
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            ch = text[pos]
            if ch == "/":
                raise UnsupportedConstruct(pos, "operator (division is not supported)", ch, text)
            raise ParseError(pos, "number, identifier or operator", ch, text)
        if m.lastgroup == "ws":
            pass
        elif m.group("num") is not None:
            val = float(m.group("num"))
            tokens.append(Token("num", m.group(0), pos, complex(0, val) if m.group("imag") else complex(val)))
        elif m.group("ident") is not None:
            name = m.group("ident")
            if name in RESERVED:
                tokens.append(Token("ident", name, pos))
            elif name in params:
                tokens.append(Token("num", name, pos, complex(float(params[name]))))
            else:
                raise UnboundParam(pos, "bound parameter", name, text)
        else:
            tokens.append(Token("op", m.group(0), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, tokens: list[Token]):
        self.text = text
        self.toks = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected: str):
        t = self.tok
        found = t.text if t.kind != "end" else "<end of input>"
        pos = min(t.pos, max(len(self.text) - 1, 0))
        raise ParseError(pos, expected, found, self.text)

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str):
        if not self.accept(op):
            self.fail(f"'{op}'")

    def parse(self) -> an.Node:
        node = self.expr()
        if self.tok.kind != "end":
            self.fail("operator or end of input")
        return node

    def expr(self) -> an.Node:
        terms = [self.term()]
        while True:
            if self.accept("+"):
                terms.append(self.term())
            elif self.accept("-"):
                terms.append(an.make_product([an.Poly((-1 + 0j,)), self.term()]))
            else:
                return an.make_sum(terms)

    def term(self) -> an.Node:
        factors = [self.unary()]
        while self.accept("*"):
            factors.append(self.unary())
        return an.make_product(factors)

    def unary(self) -> an.Node:
        if self.accept("-"):
            return an.make_product([an.Poly((-1 + 0j,)), self.unary()])
        return self.power()

    def power(self) -> an.Node:
        base = self.atom()
        if not self.accept("^"):
            return base
        t = self.tok
        if t.kind != "num" or t.value.imag != 0 or not re.fullmatch(r"\d+", t.text):
            if t.kind == "num":
                raise UnsupportedConstruct(t.pos, "integer exponent 0..64", t.text, self.text)
            self.fail("integer exponent")
        n = int(t.text)
        if n > MAX_EXPONENT:
            raise UnsupportedConstruct(t.pos, f"integer exponent <= {MAX_EXPONENT}", t.text, self.text)
        self.i += 1
        return an.make_product([base] * n) if n else an.Poly((1 + 0j,))

    def atom(self) -> an.Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return an.Poly((t.value,))
        if t.kind == "ident":
            self.i += 1
            if t.text == "z":
                return an.Poly((0j, 1 + 0j))
            if t.text == "i":
                return an.Poly((1j,))
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return an.Exp(inner) if t.text == "exp" else an.ReflectSymmetrize(inner)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail("number, 'z', 'i', parameter, function call or '('")


def parse_node(text: str, params: dict | None = None) -> an.Node:
    return _Parser(text, tokenize(text, params)).parse()


def parse_fn(text: str, params: dict | None = None, domain: an.Disk | None = None,
             name: str | None = None) -> an.AnalyticFn:
    """Parse DSL text into an :class:`AnalyticFn`.

    >>> parse_fn("(z - a)*c", {"a": 0.05, "c": 10})(0.05)
    0j
    """
    return an.AnalyticFn(parse_node(text, params), domain, name)


# ---------------------------------------------------------------------------
# function files


@dataclass(frozen=True)
class FnSource:
    name: str
    expr: str
    domain: an.Disk = an.UNIT_DISK
    params: dict = field(default_factory=dict, hash=False)

    def build(self, **overrides) -> an.AnalyticFn:
        params = {**self.params, **overrides}
        return parse_fn(self.expr, params, self.domain, self.name)

    def to_json(self):
        return {"name": self.name, "expr": self.expr, "domain": self.domain.to_json(),
                "params": dict(self.params)}


def _real(x, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
        raise SchemaError(f"{what} must be a finite number")
    return float(x)


def _domain_from_json(obj, owner: str) -> an.Disk:
    if not isinstance(obj, dict) or set(obj) - {"center", "radius"} or "radius" not in obj:
        raise SchemaError(f"{owner}: domain must be an object with 'center' and 'radius'")
    center = obj.get("center", [0.0, 0.0])
    if not isinstance(center, list) or len(center) != 2:
        raise SchemaError(f"{owner}: domain center must be [re, im]")
    radius = _real(obj["radius"], f"{owner}: domain radius")
    if radius <= 0:
        raise SchemaError(f"{owner}: domain radius must be positive")
    return an.Disk(complex(_real(center[0], "center"), _real(center[1], "center")), radius)


def sources_from_json(doc) -> list[FnSource]:
    if not isinstance(doc, list):
        raise SchemaError("function file must hold a JSON array")
    out: list[FnSource] = []
    seen = set()
    for k, obj in enumerate(doc):
        if not isinstance(obj, dict):
            raise SchemaError(f"entry {k} is not an object")
        unknown = set(obj) - {"name", "expr", "domain", "params"}
        if unknown:
            raise SchemaError(f"entry {k}: unknown field(s) {sorted(unknown)}")
        name, expr = obj.get("name"), obj.get("expr")
        if not isinstance(name, str) or not name:
            raise SchemaError(f"entry {k}: 'name' must be a non-empty string")
        if not isinstance(expr, str):
            raise SchemaError(f"{name}: 'expr' must be a string")
        if name in seen:
            raise SchemaError(f"duplicate function name {name!r}")
        seen.add(name)
        domain = _domain_from_json(obj["domain"], name) if "domain" in obj else an.UNIT_DISK
        params = obj.get("params", {})
        if not isinstance(params, dict):
            raise SchemaError(f"{name}: 'params' must be an object")
        for p, v in params.items():
            if p in RESERVED:
                raise SchemaError(f"{name}: parameter name {p!r} is reserved")
            _real(v, f"{name}: parameter {p}")
        src = FnSource(name, expr, domain, {p: float(v) for p, v in params.items()})
        try:
            parse_node(expr, src.params)
        except ParseError as exc:
            exc.args = (f"{name}: {exc.args[0]}",)
            exc.owner = name
            raise
        out.append(src)
    return out


def load_fn_file(path) -> list[FnSource]:
    """Read a JSON function file; raises ``OSError`` on I/O problems."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    return sources_from_json(doc)
