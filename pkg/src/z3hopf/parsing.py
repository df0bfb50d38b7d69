"""Expression parsing and presentation files.

One grammar covers scalar literals and algebra expressions::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := "-"* atom ("^" "-"? INT)?
    atom   := INT | "q" | "j" | NAME | "(" expr ")"
            | "tensor" "(" expr "," expr ("," expr)? ")"

Division requires a scalar divisor.  Greek and primed spellings are
accepted as aliases for the ASCII generator names (b, g, th, ph, xp,
thp); printing always uses ASCII so reports are bit-exact.
"""
from __future__ import annotations

import json
import re
from typing import Union

from .algebra import Element, Generator, TensorElement
from .coeff import SC_ONE, Scalar, j_pow
from .errors import DivisionByZero, ExprSyntaxError, UnknownSymbol
from .rewrite import Presentation, RewriteRule

Value = Union[Scalar, Element, TensorElement]

ALIASES = {
    "β": "b",
    "γ": "g",
    "θ": "th",
    "φ": "ph",
    "ϕ": "ph",
    "x′": "xp",
    "θ′": "thp",
    "x'": "xp",
    "th'": "thp",
}

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-zͰ-Ͽ_][A-Za-z0-9Ͱ-Ͽ_]*['′]?)"
    r"|(?P<op>[-+*/^(),]))"
)


def tokenize(src: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == m.start():
            stripped = src[pos:].lstrip()
            if not stripped:
                break
            where = len(src) - len(stripped)
            raise ExprSyntaxError(f"unexpected character {src[where]!r}", where)
        if m.group("int") is not None:
            out.append(("int", m.group("int"), m.start("int")))
        elif m.group("name") is not None:
            out.append(("name", m.group("name"), m.start("name")))
        else:
            out.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    out.append(("end", "", len(src)))
    return out


class _Parser:
    def __init__(self, src: str, pres: Presentation):
        self.src = src
        self.pres = pres
        self.tokens = tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ExprSyntaxError(f"expected {op!r}", pos)
        return self.next()

    # -- value algebra -----------------------------------------------------
    def _promote_pair(self, a: Value, b: Value, pos: int):
        order = {Scalar: 0, Element: 1, TensorElement: 2}
        ra, rb = order[type(a)], order[type(b)]
        if ra == rb:
            return a, b
        if {ra, rb} == {0, 1}:
            if isinstance(a, Scalar):
                a = Element.scalar(self.pres, a)
            else:
                b = Element.scalar(self.pres, b)
            return a, b
        if {ra, rb} == {0, 2}:
            if isinstance(a, Scalar):
                a = TensorElement.unit(self.pres, b.rank).scale(a)
            else:
                b = TensorElement.unit(self.pres, a.rank).scale(b)
            return a, b
        raise ExprSyntaxError("cannot mix plain elements with tensors", pos)

    def _add(self, a: Value, b: Value, pos: int, sign: int):
        a, b = self._promote_pair(a, b, pos)
        return a + b if sign > 0 else a - b

    def _mul(self, a: Value, b: Value, pos: int):
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a * b
        if isinstance(a, Scalar):
            return b.__rmul__(a) if not isinstance(b, Scalar) else a * b
        if isinstance(b, Scalar):
            return a * b
        if isinstance(a, Element) and isinstance(b, Element):
            return a * b
        if isinstance(a, TensorElement) and isinstance(b, TensorElement):
            return a * b
        raise ExprSyntaxError("cannot multiply element by tensor", pos)

    def _div(self, a: Value, b: Value, pos: int):
        if not isinstance(b, Scalar):
            raise ExprSyntaxError("divisor must be a scalar expression", pos)
        if b.is_zero():
            raise DivisionByZero("division by zero in expression")
        return self._mul(a, b.inverse(), pos)

    def _pow(self, a: Value, n: int, pos: int):
        if isinstance(a, Scalar):
            return a**n
        try:
            return a**n
        except Exception as exc:  # negative power of a non-unit element
            raise ExprSyntaxError(str(exc), pos) from exc

    # -- grammar ------------------------------------------------------------
    def parse(self) -> Value:
        v = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {text!r}", pos)
        return v

    def expr(self) -> Value:
        v = self.term()
        while True:
            kind, text, pos = self.peek()
            if kind == "op" and text in "+-":
                self.next()
                rhs = self.term()
                v = self._add(v, rhs, pos, 1 if text == "+" else -1)
            else:
                return v

    def term(self) -> Value:
        v = self.factor()
        while True:
            kind, text, pos = self.peek()
            if kind == "op" and text in "*/":
                self.next()
                rhs = self.factor()
                v = self._mul(v, rhs, pos) if text == "*" else self._div(v, rhs, pos)
            else:
                return v

    def factor(self) -> Value:
        signs = 0
        while True:
            kind, text, pos = self.peek()
            if kind == "op" and text == "-":
                self.next()
                signs += 1
            else:
                break
        v = self.atom()
        kind, text, pos = self.peek()
        if kind == "op" and text == "^":
            self.next()
            neg = False
            kind2, text2, pos2 = self.peek()
            if kind2 == "op" and text2 == "-":
                self.next()
                neg = True
            kind2, text2, pos2 = self.peek()
            if kind2 != "int":
                raise ExprSyntaxError("expected integer exponent", pos2)
            self.next()
            n = -int(text2) if neg else int(text2)
            v = self._pow(v, n, pos)
        if signs % 2:
            v = self._mul(Scalar.from_int(-1), v, 0)
        return v

    def atom(self) -> Value:
        kind, text, pos = self.next()
        if kind == "int":
            return Scalar.from_int(int(text))
        if kind == "op" and text == "(":
            v = self.expr()
            self.expect_op(")")
            return v
        if kind == "name":
            if text == "q":
                return Scalar.q()
            if text == "j":
                return j_pow(1)
            if text == "tensor":
                self.expect_op("(")
                slots = [self.expr()]
                while True:
                    k2, t2, p2 = self.peek()
                    if k2 == "op" and t2 == ",":
                        self.next()
                        slots.append(self.expr())
                    else:
                        break
                self.expect_op(")")
                if len(slots) not in (2, 3):
                    raise ExprSyntaxError("tensor takes 2 or 3 slots", pos)
                els = []
                for s in slots:
                    if isinstance(s, Scalar):
                        s = Element.scalar(self.pres, s)
                    if not isinstance(s, Element):
                        raise ExprSyntaxError("tensor slots must be plain elements", pos)
                    els.append(s)
                return TensorElement.tensor(*els)
            name = ALIASES.get(text, text)
            if not self.pres.has_gen(name):
                raise UnknownSymbol(f"unknown symbol {text!r} in presentation {self.pres.name!r}", pos)
            return Element.gen(self.pres, name)
        raise ExprSyntaxError(f"unexpected token {text!r}" if text else "unexpected end of input", pos)


def parse_expression(src: str, p: Presentation) -> Element | TensorElement:
    """Parse to an element (scalars promote to multiples of the unit)."""
    v = _Parser(src, p).parse()
    if isinstance(v, Scalar):
        return Element.scalar(p, v)
    return v


def parse_scalar(src: str) -> Scalar:
    """Parse a pure scalar literal (no generators allowed)."""
    empty = Presentation("scalars", [])
    v = _Parser(src, empty).parse()
    if not isinstance(v, Scalar):
        raise ExprSyntaxError("expected a scalar literal", 0)
    return v


# -- presentation files -----------------------------------------------------------


def _letter_str(letter: tuple[str, int]) -> str:
    name, sign = letter
    return name if sign > 0 else f"{name}^-1"


def _parse_letter(text: str) -> tuple[str, int]:
    if text.endswith("^-1"):
        return (text[:-3], -1)
    return (text, 1)


def presentation_to_dict(p: Presentation) -> dict:
    return {
        "name": p.name,
        "generators": [
            {"name": g.name, "grade": g.grade, "kind": g.kind}
            | ({"weight": g.weight} if g.weight != 1 else {})
            for g in p.generators
        ],
        "order": list(p.names()),
        "free_pairs": sorted(sorted(pair) for pair in p.free_pairs),
        "annihilations": [
            [[g, m], [h, n]] for (g, m), (h, n) in p.annihilations
        ],
        "rules": [
            {
                "lhs": [_letter_str(rule.lhs[0]), _letter_str(rule.lhs[1])],
                "rhs": str(rule.rhs),
            }
            for _, rule in sorted(p.rules.items())
        ],
    }


def presentation_to_json(p: Presentation, indent: int | None = 2) -> str:
    return json.dumps(presentation_to_dict(p), indent=indent)


def presentation_from_dict(d: dict) -> Presentation:
    gens = [
        Generator(g["name"], g["grade"], g.get("kind", "plain"), g.get("weight", 1))
        for g in d["generators"]
    ]
    order = d.get("order")
    if order:
        by_name = {g.name: g for g in gens}
        if sorted(order) != sorted(by_name):
            raise ValueError("order list does not match the generator names")
        gens = [by_name[n] for n in order]
    p = Presentation(
        d["name"],
        gens,
        free_pairs=[tuple(pair) for pair in d.get("free_pairs", [])],
        annihilations=[
            ((a[0], a[1]), (b[0], b[1])) for a, b in d.get("annihilations", [])
        ],
    )
    for r in d.get("rules", []):
        lhs = (_parse_letter(r["lhs"][0]), _parse_letter(r["lhs"][1]))
        rhs = parse_expression(r["rhs"], p)
        if isinstance(rhs, TensorElement):
            raise ValueError("rule rhs must be a plain element")
        p.add_rule(RewriteRule(lhs, rhs))
    return p


def presentation_from_json(text: str) -> Presentation:
    return presentation_from_dict(json.loads(text))
