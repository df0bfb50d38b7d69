"""2x2 quantum supermatrix operations and their identity suites.

The generic matrix has the four entry symbols of the supergroup as its
entries; the superdeterminant, the entrywise inverse and the transpose
are explicit words in those symbols and their inverses, so every claimed
identity is decided by normalization.
"""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import Element
from .coeff import SC_ONE, SC_Q, Scalar, j_pow
from .errors import NotInvertible
from .presets import build_preset, defining_relations, free_entry_algebra
from .report import CheckReport, IdentityResult, timed_report
from .rewrite import Presentation, substitute

SC_QI = SC_Q.inverse()


@dataclass(frozen=True)
class Matrix2:
    """2x2 matrix of algebra elements (entries a-row then d-row)."""

    a: Element
    b: Element
    g: Element
    d: Element

    @property
    def pres(self) -> Presentation:
        return self.a.pres

    def entries(self) -> tuple[Element, Element, Element, Element]:
        return (self.a, self.b, self.g, self.d)

    def normalize(self) -> "Matrix2":
        return Matrix2(*(e.normalize() for e in self.entries()))

    def __mul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.a * other.a + self.b * other.g,
            self.a * other.b + self.b * other.d,
            self.g * other.a + self.d * other.g,
            self.g * other.b + self.d * other.d,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix2):
            return NotImplemented
        mine = [e.normalize() for e in self.entries()]
        theirs = [e.normalize() for e in other.entries()]
        return all(x == y for x, y in zip(mine, theirs))


def generic_matrix(p: Presentation | None = None) -> Matrix2:
    """The matrix whose entries are the four generator symbols."""
    p = p or build_preset("gl")
    return Matrix2(*(Element.gen(p, n) for n in ("a", "b", "g", "d")))


def identity_matrix(p: Presentation | None = None) -> Matrix2:
    p = p or build_preset("gl")
    one, zero = Element.one(p), Element.zero(p)
    return Matrix2(one, zero, zero, one)


def _inv(e: Element) -> Element:
    """Inverse of a unit monomial entry (all factors invertible)."""
    w, c = e.unit_monomial()
    p = e.pres
    try:
        iw = p.invert_word(w)
    except ValueError as exc:
        raise NotInvertible(str(exc)) from exc
    return Element(p, {iw: c.inverse()})


def sdet(t: Matrix2) -> Element:
    """Superdeterminant: a*d^-1 plus its two nilpotent corrections."""
    ai, di = _inv(t.a), _inv(t.d)
    head = t.a * di
    loop = t.g * ai * t.b * di
    out = head + head * loop + head * loop * loop
    return out.normalize()


def sdet_of_inverse(t: Matrix2) -> Element:
    """Superdeterminant of the inverse matrix, as an explicit word sum."""
    ai, di = _inv(t.a), _inv(t.d)
    head = t.d * ai
    loop = t.b * di * t.g * ai
    out = head + head * loop + head * loop * loop
    return out.normalize()


def inverse_entries(t: Matrix2) -> Matrix2:
    """Entrywise inverse of the matrix (geometric sums cut by nilpotency)."""
    ai, di = _inv(t.a), _inv(t.d)
    la = t.b * di * t.g * ai  # loops hanging off the diagonal inverses
    ld = t.g * ai * t.b * di
    big_a = ai + ai * la + ai * la * la
    big_d = di + di * ld + di * ld * ld
    big_b = -(ai * t.b * di) - ai * t.b * di * ld - ai * t.b * di * ld * ld
    big_c = -(di * t.g * ai) - di * t.g * ai * la
    return Matrix2(big_a.normalize(), big_b.normalize(), big_c.normalize(), big_d.normalize())


def supertranspose(t: Matrix2) -> Matrix2:
    """Transpose with the odd entries swapped and one twisted by j."""
    return Matrix2(t.a, t.g, t.b * j_pow(1), t.d)


def delta_forms(p: Presentation | None = None) -> tuple[Element, Element]:
    """The two quantum quantities ad - q^-1*bg and da - qj*gb, normalized."""
    p = p or build_preset("gl")
    t = generic_matrix(p)
    d1 = (t.a * t.d - t.b * t.g * SC_QI).normalize()
    d2 = (t.d * t.a - t.g * t.b * (SC_Q * j_pow(1))).normalize()
    return d1, d2


# -- identity suites -------------------------------------------------------------


def check_inverse_identity(p: Presentation | None = None) -> CheckReport:
    """T*T^-1 = I = T^-1*T, entry by entry."""
    p = p or build_preset("gl")
    t = generic_matrix(p)
    ti = inverse_entries(t)
    one, zero = Element.one(p), Element.zero(p)
    ident = Matrix2(one, zero, zero, one)
    with timed_report("inverse", p.name) as rep:
        for label, prod in (("T*T^-1", t * ti), ("T^-1*T", ti * t)):
            for entry, value, want in zip("abgd", prod.entries(), ident.entries()):
                rep.check(f"({label})[{entry}] = {want}", (value - want).normalize())
    return rep


def check_sdet_commutation(p: Presentation | None = None) -> CheckReport:
    """Commutation of the superdeterminant with the entries; it is not central."""
    p = p or build_preset("gl")
    t = generic_matrix(p)
    dq = sdet(t)
    j2 = j_pow(2)
    with timed_report("sdet", p.name) as rep:
        rep.check("a*D = D*a", (t.a * dq - dq * t.a).normalize())
        rep.check("b*D = j^2*D*b", (t.b * dq - dq * t.b * j2).normalize())
        rep.check("g*D = D*g", (t.g * dq - dq * t.g).normalize())
        rep.check("d*a*D = D*a*d", (t.d * t.a * dq - dq * t.a * t.d).normalize())
        rep.expect_nonzero("b*D != D*b (not central)", (t.b * dq - dq * t.b).normalize())
    return rep


def check_delta_relations(p: Presentation | None = None) -> CheckReport:
    """The nine commutation identities of the two quantum quantities, plus
    the cleared closed forms of both superdeterminants."""
    p = p or build_preset("gl")
    t = generic_matrix(p)
    d1, d2 = delta_forms(p)
    q2 = SC_Q * SC_Q
    qi2 = SC_QI * SC_QI
    with timed_report("delta", p.name) as rep:
        rep.check("D1*a = a*D1", (d1 * t.a - t.a * d1).normalize())
        rep.check("D1*d = d*D1", (d1 * t.d - t.d * d1).normalize())
        rep.check("D2*a = a*D2", (d2 * t.a - t.a * d2).normalize())
        rep.check("D2*d = d*D2", (d2 * t.d - t.d * d2).normalize())
        rep.check("D1*b = q^-2*b*D1", (d1 * t.b - t.b * d1 * qi2).normalize())
        rep.check("D2*b = q^-2*b*D2", (d2 * t.b - t.b * d2 * qi2).normalize())
        rep.check("D1*g = q^2*g*D1", (d1 * t.g - t.g * d1 * q2).normalize())
        rep.check("D2*g = q^2*g*D2", (d2 * t.g - t.g * d2 * q2).normalize())
        rep.check("D1*D2 = D2*D1", (d1 * d2 - d2 * d1).normalize())
        rep.check("sdet(T)*D2 = a^2", (sdet(t) * d2 - t.a * t.a).normalize())
        rep.check("sdet(T^-1)*D1 = d^2", (sdet_of_inverse(t) * d1 - t.d * t.d).normalize())
    return rep


_MIXED_TABLE = [
    # (x, Y, coefficient of Y*x, affine term)
    ("a", "A", lambda: j_pow(2), lambda: SC_ONE - j_pow(2)),
    ("a", "B", lambda: SC_QI * j_pow(2), None),
    ("a", "C", lambda: SC_Q, None),
    ("a", "D", lambda: SC_ONE, None),
    ("b", "A", lambda: SC_QI * j_pow(2), None),
    ("b", "B", lambda: SC_QI * SC_QI, None),
    ("b", "C", lambda: SC_ONE, None),
    ("b", "D", lambda: SC_QI * j_pow(1), None),
    ("g", "A", lambda: SC_Q, None),
    ("g", "B", lambda: SC_ONE, None),
    ("g", "C", lambda: SC_Q * SC_Q, None),
    ("g", "D", lambda: SC_Q, None),
    ("d", "A", lambda: SC_ONE, None),
    ("d", "B", lambda: SC_QI * j_pow(1), None),
    ("d", "C", lambda: SC_Q, None),
    ("d", "D", lambda: j_pow(1), lambda: SC_ONE - j_pow(1)),
]


def check_mixed_relations(p: Presentation | None = None) -> CheckReport:
    """The sixteen commutation relations between the entries and the
    entries of the inverse matrix."""
    p = p or build_preset("gl")
    t = generic_matrix(p)
    ti = inverse_entries(t)
    gens = {"a": t.a, "b": t.b, "g": t.g, "d": t.d}
    invs = {"A": ti.a, "B": ti.b, "C": ti.g, "D": ti.d}
    one = Element.one(p)
    with timed_report("mixed", p.name) as rep:
        for xn, yn, coeff, affine in _MIXED_TABLE:
            x, y = gens[xn], invs[yn]
            residual = x * y - y * x * coeff()
            label = f"{xn}*{yn} = ({coeff()})*{yn}*{xn}"
            if affine is not None:
                residual = residual - one * affine()
                label += f" + ({affine()})"
            rep.check(label, residual.normalize())
    return rep


def check_inverse_membership(p: Presentation | None = None) -> CheckReport:
    """The inverse entries satisfy the defining relations with the
    parameters inverted (q -> 1/q, j -> j^2)."""
    p = p or build_preset("gl")
    t = generic_matrix(p)
    ti = inverse_entries(t)
    images = {"a": ti.a, "b": ti.b, "g": ti.g, "d": ti.d}
    with timed_report("membership", p.name) as rep:
        for name, rel in defining_relations(free_entry_algebra(), galois=True):
            value = substitute(rel, images, p)
            pretty = name.translate(str.maketrans("abgd", "ABCD"))
            rep.check(f"inverse entries: {pretty} (q->1/q, j->j^2)", value)
    return rep


def check_supertranspose(p: Presentation | None = None) -> CheckReport:
    """Shape of the supertranspose and its non-involutivity witness."""
    p = p or build_preset("gl")
    t = generic_matrix(p)
    st = supertranspose(t)
    st2 = supertranspose(st)
    j1 = j_pow(1)
    with timed_report("transpose", p.name) as rep:
        rep.check("st(T)[a] = a", (st.a - t.a).normalize())
        rep.check("st(T)[b] = g", (st.b - t.g).normalize())
        rep.check("st(T)[g] = j*b", (st.g - t.b * j1).normalize())
        rep.check("st(T)[d] = d", (st.d - t.d).normalize())
        # st is not an involution: st(st(T)) twists both odd entries by j
        rep.check("st(st(T))[b] = j*b", (st2.b - t.b * j1).normalize())
        rep.check("st(st(T))[g] = j*g", (st2.g - t.g * j1).normalize())
        rep.expect_nonzero("st(st(T)) != T (informational)", (st2.b - t.b).normalize())
    return rep
