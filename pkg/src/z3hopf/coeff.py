"""Exact arithmetic in the field Q(j)(q).

j is a primitive cube root of unity, so j^2 = -1 - j and no value ever
stores a j^2 component.  q is a free parameter; rational functions of q
are kept as reduced fractions of polynomials with a monic denominator,
which makes equality a plain structural comparison.  Everything is exact
(``fractions.Fraction`` components), immutable and hashable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import DivisionByZero, PoleAtPoint

_F0 = Fraction(0)
_F1 = Fraction(1)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True, slots=True)
class Cyclo:
    """Element re + jm*j of Q[j]/(j^2 + j + 1)."""

    re: Fraction = _F0
    jm: Fraction = _F0

    @staticmethod
    def of(re, jm=0) -> "Cyclo":
        return Cyclo(_frac(re), _frac(jm))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.jm)

    def __add__(self, other: "Cyclo") -> "Cyclo":
        return Cyclo(self.re + other.re, self.jm + other.jm)

    def __sub__(self, other: "Cyclo") -> "Cyclo":
        return Cyclo(self.re - other.re, self.jm - other.jm)

    def __neg__(self) -> "Cyclo":
        return Cyclo(-self.re, -self.jm)

    def __mul__(self, other: "Cyclo") -> "Cyclo":
        # (a + bj)(c + dj) = ac + (ad + bc) j + bd j^2,  j^2 = -1 - j
        a, b, c, d = self.re, self.jm, other.re, other.jm
        bd = b * d
        return Cyclo(a * c - bd, a * d + b * c - bd)

    def conjugate(self) -> "Cyclo":
        """The image under j -> j^2 (the nontrivial field automorphism)."""
        return Cyclo(self.re - self.jm, -self.jm)

    def norm(self) -> Fraction:
        """Rational norm (self times its conjugate)."""
        a, b = self.re, self.jm
        return a * a - a * b + b * b

    def inverse(self) -> "Cyclo":
        n = self.norm()
        if not n:
            raise DivisionByZero("inverse of zero in Q(j)")
        return Cyclo((self.re - self.jm) / n, -self.jm / n)

    def __truediv__(self, other: "Cyclo") -> "Cyclo":
        return self * other.inverse()

    def sort_key(self):
        return (self.re, self.jm)

    def __str__(self) -> str:
        if not self:
            return "0"
        parts = []
        if self.re:
            parts.append(str(self.re))
        if self.jm:
            if self.jm == 1:
                js = "j"
            elif self.jm == -1:
                js = "-j"
            else:
                js = f"{self.jm}*j"
            if parts and not js.startswith("-"):
                parts.append("+" + js)
            else:
                parts.append(js)
        return "".join(parts)


CY_ZERO = Cyclo()
CY_ONE = Cyclo(_F1)
CY_J = Cyclo(_F0, _F1)


def cyclo_j_pow(n: int) -> Cyclo:
    """j^n as a Cyclo (period 3)."""
    n %= 3
    if n == 0:
        return CY_ONE
    if n == 1:
        return CY_J
    return Cyclo(Fraction(-1), Fraction(-1))  # j^2 = -1 - j


class QPoly:
    """Polynomial in q with Cyclo coefficients, stored sparsely.

    Invariant: no zero coefficients; the zero polynomial has an empty map.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs: Mapping[int, Cyclo] | Iterable[tuple[int, Cyclo]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, Cyclo] = {}
        for k, v in items:
            if k < 0:
                raise ValueError("QPoly exponents must be nonnegative")
            if v:
                w = c.get(k)
                c[k] = (w + v) if w is not None else v
                if not c[k]:
                    del c[k]
        self.c = c

    @staticmethod
    def const(v: Cyclo) -> "QPoly":
        return QPoly({0: v} if v else {})

    @staticmethod
    def q_power(k: int) -> "QPoly":
        return QPoly({k: CY_ONE})

    def is_zero(self) -> bool:
        return not self.c

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return max(self.c) if self.c else -1

    def leading(self) -> Cyclo:
        return self.c[max(self.c)] if self.c else CY_ZERO

    def __eq__(self, other) -> bool:
        return isinstance(other, QPoly) and self.c == other.c

    def __hash__(self) -> int:
        return hash(frozenset(self.c.items()))

    def __add__(self, other: "QPoly") -> "QPoly":
        c = dict(self.c)
        for k, v in other.c.items():
            w = c.get(k)
            nv = w + v if w is not None else v
            if nv:
                c[k] = nv
            elif w is not None:
                del c[k]
        out = QPoly.__new__(QPoly)
        out.c = c
        return out

    def __neg__(self) -> "QPoly":
        out = QPoly.__new__(QPoly)
        out.c = {k: -v for k, v in self.c.items()}
        return out

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __mul__(self, other: "QPoly") -> "QPoly":
        c: dict[int, Cyclo] = {}
        for k1, v1 in self.c.items():
            for k2, v2 in other.c.items():
                k = k1 + k2
                v = v1 * v2
                w = c.get(k)
                nv = w + v if w is not None else v
                if nv:
                    c[k] = nv
                elif w is not None:
                    del c[k]
        out = QPoly.__new__(QPoly)
        out.c = c
        return out

    def scale(self, v: Cyclo) -> "QPoly":
        if not v:
            return QPoly()
        out = QPoly.__new__(QPoly)
        out.c = {k: u * v for k, u in self.c.items()}
        return out

    def shift(self, k: int) -> "QPoly":
        """Multiply by q^k (k >= 0)."""
        out = QPoly.__new__(QPoly)
        out.c = {e + k: v for e, v in self.c.items()}
        return out

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        quo: dict[int, Cyclo] = {}
        rem = self
        dlead = other.leading().inverse()
        ddeg = other.degree()
        while not rem.is_zero() and rem.degree() >= ddeg:
            k = rem.degree() - ddeg
            c = rem.leading() * dlead
            quo[k] = c
            rem = rem - other.scale(c).shift(k)
        return QPoly(quo), rem

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        return self.scale(self.leading().inverse())

    def gcd(self, other: "QPoly") -> "QPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic()

    def eval(self, q0: Cyclo) -> Cyclo:
        acc = CY_ZERO
        for k in sorted(self.c, reverse=True):
            pw = CY_ONE
            for _ in range(k):
                pw = pw * q0
            acc = acc + self.c[k] * pw
        return acc

    def conj_j(self) -> "QPoly":
        out = QPoly.__new__(QPoly)
        out.c = {k: v.conjugate() for k, v in self.c.items()}
        return out

    def reversed(self) -> "QPoly":
        """q^deg * p(1/q)."""
        d = self.degree()
        out = QPoly.__new__(QPoly)
        out.c = {d - k: v for k, v in self.c.items()}
        return out

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        pieces = []
        for k in sorted(self.c, reverse=True):
            v = self.c[k]
            if k == 0:
                pieces.append(str(v))
                continue
            qs = "q" if k == 1 else f"q^{k}"
            if v == CY_ONE:
                pieces.append(qs)
            elif v == Cyclo(Fraction(-1)):
                pieces.append(f"-{qs}")
            elif v.re and v.jm:
                pieces.append(f"({v})*{qs}")
            else:
                pieces.append(f"{v}*{qs}")
        text = pieces[0]
        for p in pieces[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text


QP_ZERO = QPoly()
QP_ONE = QPoly.const(CY_ONE)


class Scalar:
    """Element of Q(j)(q): a reduced fraction num/den of QPoly values.

    Canonical form: gcd(num, den) = 1 and den is monic, so two equal field
    elements have identical (num, den) pairs.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: QPoly, den: QPoly = QP_ONE):
        if num.is_zero():
            if den.is_zero():
                raise DivisionByZero("scalar with zero denominator")
            num, den = QP_ZERO, QP_ONE
        elif den.c == {0: CY_ONE}:
            den = QP_ONE  # denominator 1 is already canonical
        elif len(den.c) == 1:
            # monomial denominator c*q^k: strip the common q-power, make monic
            if den.is_zero():
                raise DivisionByZero("scalar with zero denominator")
            k, lead = next(iter(den.c.items()))
            shift = min(k, min(num.c))
            if lead != CY_ONE:
                num = num.scale(lead.inverse())
            if shift:
                nn = QPoly.__new__(QPoly)
                nn.c = {e - shift: v for e, v in num.c.items()}
                num = nn
                k -= shift
            den = QP_ONE if k == 0 else QPoly.q_power(k)
        else:
            if den.is_zero():
                raise DivisionByZero("scalar with zero denominator")
            g = num.gcd(den)
            if g.degree() > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lead = den.leading()
            if lead != CY_ONE:
                inv = lead.inverse()
                num = num.scale(inv)
                den = den.scale(inv)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_int(n: int) -> "Scalar":
        return Scalar(QPoly.const(Cyclo.of(n)))

    @staticmethod
    def from_fraction(x: Fraction) -> "Scalar":
        return Scalar(QPoly.const(Cyclo.of(x)))

    @staticmethod
    def from_cyclo(v: Cyclo) -> "Scalar":
        return Scalar(QPoly.const(v))

    @staticmethod
    def q(k: int = 1) -> "Scalar":
        if k >= 0:
            return Scalar(QPoly.q_power(k))
        return Scalar(QP_ONE, QPoly.q_power(-k))

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == QP_ONE and self.den == QP_ONE

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        return isinstance(other, Scalar) and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, int):
            return Scalar.from_int(other)
        if isinstance(other, Fraction):
            return Scalar.from_fraction(other)
        if isinstance(other, Cyclo):
            return Scalar.from_cyclo(other)
        return NotImplemented

    def __add__(self, other) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.den == QP_ONE and o.den == QP_ONE:
            out = Scalar.__new__(Scalar)
            out.num = self.num + o.num
            out.den = QP_ONE
            return out
        return Scalar(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Scalar(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other) -> "Scalar":
        return -(self - other)

    def __neg__(self) -> "Scalar":
        out = Scalar.__new__(Scalar)
        out.num = -self.num
        out.den = self.den
        return out

    def __mul__(self, other) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return SC_ZERO
        if self.den == QP_ONE and o.den == QP_ONE:
            out = Scalar.__new__(Scalar)
            out.num = self.num * o.num
            out.den = QP_ONE
            return out
        return Scalar(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero scalar")
        return Scalar(self.den, self.num)

    def __truediv__(self, other) -> "Scalar":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other) -> "Scalar":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = SC_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- substitutions ---------------------------------------------------
    def eval_at(self, q0: Cyclo) -> Cyclo:
        d = self.den.eval(q0)
        if not d:
            raise PoleAtPoint(f"denominator {self.den} vanishes at q = {q0}")
        return self.num.eval(q0) / d

    def subst_q_inverse(self) -> "Scalar":
        """The image under q -> 1/q."""
        dn, dd = self.num.degree(), self.den.degree()
        num, den = self.num.reversed(), self.den.reversed()
        if dd >= dn:
            num = num.shift(dd - dn)
        else:
            den = den.shift(dn - dd)
        return Scalar(num, den)

    def conj_j(self) -> "Scalar":
        """The image under j -> j^2."""
        return Scalar(self.num.conj_j(), self.den.conj_j())

    def galois_qj(self) -> "Scalar":
        """The combined map q -> 1/q, j -> j^2."""
        return self.subst_q_inverse().conj_j()

    def __str__(self) -> str:
        if self.den == QP_ONE:
            return str(self.num)
        num = str(self.num)
        if any(ch in num[1:] for ch in "+-") or "/" in num or "*" in num:
            num = f"({num})"
        return f"{num}/({self.den})"

    def __repr__(self) -> str:
        return f"Scalar({self})"


SC_ZERO = Scalar(QP_ZERO)
SC_ONE = Scalar(QP_ONE)
SC_Q = Scalar.q()
SC_J = Scalar.from_cyclo(CY_J)


def j_pow(n: int) -> Scalar:
    """j^n as a Scalar; n is taken mod 3."""
    return Scalar.from_cyclo(cyclo_j_pow(n))


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Field arithmetic dispatch: op one of add, sub, mul, div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise DivisionByZero("scalar division by zero")
        return a / b
    raise ValueError(f"unknown op {op!r}")


def eval_at(s: Scalar, q0: Cyclo) -> Cyclo:
    """Substitute q = q0 after canonicalization; raises PoleAtPoint on poles."""
    return s.eval_at(q0)
