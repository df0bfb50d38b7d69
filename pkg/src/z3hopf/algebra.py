"""Z3-graded associative algebra terms.

Words are run-length factor lists ``((name, exponent), ...)``; inverse
powers of invertible generators are folded into the exponent, so unit
cancellation is plain exponent arithmetic.  Cubes of nilpotent generators
annihilate a word at merge time.  Elements are finite Scalar-linear
combinations of words; tensors carry the graded multiplication twist
``(A x B)(C x D) = j^(grad B * grad C) AC x BD`` and its slotwise
generalization for rank 3.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .coeff import SC_ONE, SC_ZERO, Scalar, j_pow
from .errors import RankMismatch

PLAIN = "plain"
NILPOTENT3 = "nilpotent3"
INVERTIBLE = "invertible"
KINDS = (PLAIN, NILPOTENT3, INVERTIBLE)

Word = tuple[tuple[str, int], ...]
UNIT_WORD: Word = ()


@dataclass(frozen=True, slots=True)
class Generator:
    """A named graded generator.

    ``weight`` only affects the monomial order used to orient rewrite
    rules; grade-0 central deformation parameters get weight 0 so their
    reordering rules stay order-decreasing.
    """

    name: str
    grade: int
    kind: str = PLAIN
    weight: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if not 0 <= self.grade <= 2:
            raise ValueError("grade must be 0, 1 or 2")
        if self.kind == INVERTIBLE and self.grade != 0:
            raise ValueError("only grade-0 generators may be invertible")


class GenIndex:
    """An ordered table of generators with the word-level operations.

    The generator order is the normal-form order: canonical words list
    generators with strictly ascending positions.

    ``annihilations`` are adjacency patterns ((g, m), (h, n)): a word dies
    when it contains adjacent factors g^e h^f with e >= m and f >= n.
    They record joint-nilpotency consequences forced by overlap
    ambiguities of the defining relations, on par with single-generator
    cubes.
    """

    def __init__(
        self,
        generators: Iterable[Generator],
        annihilations: Iterable[tuple[tuple[str, int], tuple[str, int]]] = (),
    ):
        gens = tuple(generators)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.generators = gens
        self._by_name = {g.name: g for g in gens}
        self._pos = {g.name: i for i, g in enumerate(gens)}
        self.annihilations = tuple(annihilations)

    def gen(self, name: str) -> Generator:
        return self._by_name[name]

    def has_gen(self, name: str) -> bool:
        return name in self._by_name

    def pos(self, name: str) -> int:
        return self._pos[name]

    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    # -- words ---------------------------------------------------------
    def check_factor(self, name: str, exp: int) -> None:
        g = self._by_name.get(name)
        if g is None:
            raise KeyError(f"undeclared generator {name!r}")
        if exp == 0:
            raise ValueError("zero exponent in word factor")
        if exp < 0 and g.kind != INVERTIBLE:
            raise ValueError(f"negative power of non-invertible generator {name!r}")

    def merge_factors(self, factors: Iterable[tuple[str, int]]) -> Word | None:
        """Run-length merge; returns None when the word annihilates."""
        out: list[tuple[str, int]] = []
        for name, exp in factors:
            if exp == 0:
                continue
            if out and out[-1][0] == name:
                exp += out.pop()[1]
                if exp == 0:
                    continue
            kind = self._by_name[name].kind
            if kind == NILPOTENT3 and exp >= 3:
                return None
            out.append((name, exp))
        # dropped factors may expose new adjacencies; repeat until stable
        changed = True
        while changed:
            changed = False
            i = 0
            while i + 1 < len(out):
                if out[i][0] == out[i + 1][0]:
                    name = out[i][0]
                    exp = out[i][1] + out[i + 1][1]
                    del out[i : i + 2]
                    if exp:
                        if self._by_name[name].kind == NILPOTENT3 and exp >= 3:
                            return None
                        out.insert(i, (name, exp))
                    changed = True
                else:
                    i += 1
        if self.annihilations:
            for i in range(len(out) - 1):
                g, e = out[i]
                h, f = out[i + 1]
                for (pg, pe), (ph, pf) in self.annihilations:
                    if g == pg and h == ph and e >= pe and f >= pf:
                        return None
        return tuple(out)

    def word(self, factors: Iterable[tuple[str, int]]) -> Word | None:
        for name, exp in factors:
            self.check_factor(name, exp)
        return self.merge_factors(factors)

    def concat(self, u: Word, v: Word) -> Word | None:
        if not u:
            return v
        if not v:
            return u
        return self.merge_factors((*u, *v))

    def invert_word(self, w: Word) -> Word:
        """Inverse of a word all of whose generators are invertible."""
        for name, _ in w:
            if self._by_name[name].kind != INVERTIBLE:
                raise ValueError(f"word contains non-invertible generator {name!r}")
        return tuple((name, -exp) for name, exp in reversed(w))

    def grade_of(self, w: Word) -> int:
        return sum(self._by_name[n].grade * e for n, e in w) % 3

    def letters(self, w: Word) -> Iterator[tuple[int, int]]:
        """Expand to single letters as (position, sign) pairs."""
        for name, exp in w:
            p = self._pos[name]
            s = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                yield (p, s)

    def word_degree(self, w: Word) -> int:
        return sum(e * self._by_name[n].weight for n, e in w)

    def order_key(self, w: Word):
        """Degree-lexicographic key induced by the generator order."""
        return (self.word_degree(w), tuple(self.letters(w)))

    def word_str(self, w: Word) -> str:
        if not w:
            return "1"
        parts = []
        for name, exp in w:
            parts.append(name if exp == 1 else f"{name}^{exp}")
        return "*".join(parts)

    def alphabet(self, include_inverses: bool = True) -> list[tuple[str, int]]:
        """Single-letter factors; inverse letters included for invertible generators."""
        letters = [(g.name, 1) for g in self.generators]
        if include_inverses:
            letters += [(g.name, -1) for g in self.generators if g.kind == INVERTIBLE]
        return letters


def _coerce_scalar(x) -> Scalar | None:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, int):
        return Scalar.from_int(x)
    return None


class Element:
    """Finite linear combination of words over Scalar, bound to a presentation.

    Values are free-algebra representatives: multiplication concatenates
    words (with exponent merging and nilpotent annihilation) and does not
    apply rewrite rules.  Use ``normalize`` for canonical forms.
    """

    __slots__ = ("pres", "terms")

    def __init__(self, pres, terms: Mapping[Word, Scalar]):
        self.pres = pres
        self.terms = {w: c for w, c in terms.items() if c}

    # -- constructors ----------------------------------------------------
    @staticmethod
    def zero(pres) -> "Element":
        return Element(pres, {})

    @staticmethod
    def one(pres) -> "Element":
        return Element(pres, {UNIT_WORD: SC_ONE})

    @staticmethod
    def scalar(pres, c: Scalar) -> "Element":
        return Element(pres, {UNIT_WORD: c})

    @staticmethod
    def gen(pres, name: str, exp: int = 1) -> "Element":
        w = pres.word([(name, exp)])
        return Element(pres, {w: SC_ONE} if w is not None else {})

    @staticmethod
    def monomial(pres, factors: Iterable[tuple[str, int]], coeff: Scalar = SC_ONE) -> "Element":
        w = pres.word(factors)
        return Element(pres, {w: coeff} if w is not None else {})

    # -- structure -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Element)
            and self.pres is other.pres
            and self.terms == other.terms
        )

    def __hash__(self):
        raise TypeError("Element is not hashable")

    def _check_same(self, other: "Element") -> None:
        if self.pres is not other.pres:
            raise ValueError("elements belong to different presentations")

    # -- linear operations -------------------------------------------------
    def __add__(self, other) -> "Element":
        if not isinstance(other, Element):
            c = _coerce_scalar(other)
            if c is None:
                return NotImplemented
            other = Element.scalar(self.pres, c)
        self._check_same(other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            prev = terms.get(w)
            nc = prev + c if prev is not None else c
            if nc:
                terms[w] = nc
            elif prev is not None:
                del terms[w]
        out = Element.__new__(Element)
        out.pres, out.terms = self.pres, terms
        return out

    __radd__ = __add__

    def __neg__(self) -> "Element":
        out = Element.__new__(Element)
        out.pres = self.pres
        out.terms = {w: -c for w, c in self.terms.items()}
        return out

    def __sub__(self, other) -> "Element":
        if not isinstance(other, Element):
            c = _coerce_scalar(other)
            if c is None:
                return NotImplemented
            other = Element.scalar(self.pres, c)
        return self + (-other)

    def __rsub__(self, other) -> "Element":
        return -(self - other)

    def __mul__(self, other) -> "Element":
        c = _coerce_scalar(other)
        if c is not None:
            if not c:
                return Element.zero(self.pres)
            out = Element.__new__(Element)
            out.pres = self.pres
            out.terms = {w: v * c for w, v in self.terms.items()}
            return out
        if not isinstance(other, Element):
            return NotImplemented
        self._check_same(other)
        concat = self.pres.concat
        terms: dict[Word, Scalar] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = concat(w1, w2)
                if w is None:
                    continue
                c = c1 * c2
                prev = terms.get(w)
                nc = prev + c if prev is not None else c
                if nc:
                    terms[w] = nc
                elif prev is not None:
                    del terms[w]
        out = Element.__new__(Element)
        out.pres, out.terms = self.pres, terms
        return out

    def __rmul__(self, other) -> "Element":
        c = _coerce_scalar(other)
        if c is None:
            return NotImplemented
        return self * c

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            w, c = self.unit_monomial()
            inv = self.pres.invert_word(w)
            return Element(self.pres, {inv: c.inverse()}) ** (-n)
        out = Element.one(self.pres)
        for _ in range(n):
            out = out * self
        return out

    def unit_monomial(self) -> tuple[Word, Scalar]:
        """The (word, coeff) pair of a single-term element; raises otherwise."""
        if len(self.terms) != 1:
            from .errors import NotInvertible

            raise NotInvertible("element is not a single monomial")
        return next(iter(self.terms.items()))

    def map_scalars(self, f) -> "Element":
        return Element(self.pres, {w: f(c) for w, c in self.terms.items()})

    def reinterpret(self, pres) -> "Element":
        """Rebuild this element over another presentation sharing the names."""
        terms: dict[Word, Scalar] = {}
        for w, c in self.terms.items():
            nw = pres.word(w)
            if nw is None:
                continue
            prev = terms.get(nw)
            nc = prev + c if prev is not None else c
            if nc:
                terms[nw] = nc
            elif prev is not None:
                del terms[nw]
        return Element(pres, terms)

    def grade_components(self) -> dict[int, "Element"]:
        comps: dict[int, dict[Word, Scalar]] = {}
        for w, c in self.terms.items():
            comps.setdefault(self.pres.grade_of(w), {})[w] = c
        return {g: Element(self.pres, t) for g, t in sorted(comps.items())}

    def normalize(self) -> "Element":
        return self.pres.normalize(self)

    # -- printing ---------------------------------------------------------
    def _sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: self.pres.order_key(kv[0]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for w, c in self._sorted_terms():
            pieces.append(_term_str(self.pres, w, c))
        text = pieces[0]
        for p in pieces[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text

    def __repr__(self) -> str:
        return f"<Element {self}>"


def _scalar_factor_str(c: Scalar) -> str:
    s = str(c)
    if any(ch in s[1:] for ch in "+-"):
        return f"({s})"
    return s


def _term_str(gens: GenIndex, w: Word, c: Scalar) -> str:
    if not w:
        s = str(c)
        return f"({s})" if any(ch in s[1:] for ch in "+-") and "/" not in s else s
    ws = gens.word_str(w)
    if c == SC_ONE:
        return ws
    if c == -SC_ONE:
        return f"-{ws}"
    return f"{_scalar_factor_str(c)}*{ws}"


def grade_of(pres: GenIndex, m: Word | Element) -> int:
    """Grade of a word, or of a grade-homogeneous element."""
    if isinstance(m, Element):
        comps = m.grade_components()
        if len(comps) != 1:
            raise ValueError("element is not grade-homogeneous")
        return next(iter(comps))
    return pres.grade_of(m)


def element_grade_components(e: Element) -> dict[int, Element]:
    """Split into grade-homogeneous parts; the parts sum to e."""
    return e.grade_components()


class TensorElement:
    """Rank-2 or rank-3 tensor-product element with graded multiplication."""

    __slots__ = ("pres", "rank", "terms")

    def __init__(self, pres, rank: int, terms: Mapping[tuple[Word, ...], Scalar]):
        if rank not in (2, 3):
            raise RankMismatch(f"tensor rank must be 2 or 3, got {rank}")
        self.pres = pres
        self.rank = rank
        self.terms = {k: c for k, c in terms.items() if c}

    @staticmethod
    def zero(pres, rank: int) -> "TensorElement":
        return TensorElement(pres, rank, {})

    @staticmethod
    def unit(pres, rank: int) -> "TensorElement":
        return TensorElement(pres, rank, {(UNIT_WORD,) * rank: SC_ONE})

    @staticmethod
    def tensor(*slots: Element) -> "TensorElement":
        """Plain multilinear tensor of 2 or 3 elements (no twist)."""
        if len(slots) not in (2, 3):
            raise RankMismatch("tensor takes 2 or 3 slots")
        pres = slots[0].pres
        for s in slots[1:]:
            if s.pres is not pres:
                raise ValueError("tensor slots over different presentations")
        terms: dict[tuple[Word, ...], Scalar] = {}
        keys = [()]
        coeffs = [SC_ONE]
        for s in slots:
            nk, nc = [], []
            for k, c in zip(keys, coeffs):
                for w, cw in s.terms.items():
                    nk.append((*k, w))
                    nc.append(c * cw)
            keys, coeffs = nk, nc
        for k, c in zip(keys, coeffs):
            prev = terms.get(k)
            nc2 = prev + c if prev is not None else c
            if nc2:
                terms[k] = nc2
            elif prev is not None:
                del terms[k]
        return TensorElement(pres, len(slots), terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TensorElement)
            and self.pres is other.pres
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def __add__(self, other: "TensorElement") -> "TensorElement":
        if not isinstance(other, TensorElement):
            return NotImplemented
        if self.rank != other.rank:
            raise RankMismatch("tensor ranks differ")
        terms = dict(self.terms)
        for k, c in other.terms.items():
            prev = terms.get(k)
            nc = prev + c if prev is not None else c
            if nc:
                terms[k] = nc
            elif prev is not None:
                del terms[k]
        return TensorElement(self.pres, self.rank, terms)

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.pres, self.rank, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "TensorElement":
        return TensorElement(self.pres, self.rank, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> "TensorElement":
        c = _coerce_scalar(other)
        if c is not None:
            return self.scale(c)
        if not isinstance(other, TensorElement):
            return NotImplemented
        return tensor_mul(self, other)

    def __rmul__(self, other) -> "TensorElement":
        c = _coerce_scalar(other)
        if c is None:
            return NotImplemented
        return self.scale(c)

    def __pow__(self, n: int) -> "TensorElement":
        if n < 0:
            raise ValueError("negative tensor power")
        out = TensorElement.unit(self.pres, self.rank)
        for _ in range(n):
            out = tensor_mul(out, self)
        return out

    def normalize(self) -> "TensorElement":
        """Normalize every slot word, redistributing multi-term normal forms."""
        p = self.pres
        terms: dict[tuple[Word, ...], Scalar] = {}
        for key, c in self.terms.items():
            expanded: list[tuple[tuple[Word, ...], Scalar]] = [((), c)]
            for w in key:
                nf = p.normal_form_of_word(w)
                expanded = [
                    ((*k, wn), cc * cn)
                    for k, cc in expanded
                    for wn, cn in nf.items()
                ]
            for k, cc in expanded:
                prev = terms.get(k)
                nc = prev + cc if prev is not None else cc
                if nc:
                    terms[k] = nc
                elif prev is not None:
                    del terms[k]
        return TensorElement(self.pres, self.rank, terms)

    def _sorted_terms(self):
        key = lambda kv: tuple(self.pres.order_key(w) for w in kv[0])
        return sorted(self.terms.items(), key=key, reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        p = self.pres
        pieces = []
        for k, c in self._sorted_terms():
            slots = ", ".join(p.word_str(w) for w in k)
            body = f"tensor({slots})"
            if c == SC_ONE:
                pieces.append(body)
            elif c == -SC_ONE:
                pieces.append(f"-{body}")
            else:
                pieces.append(f"{_scalar_factor_str(c)}*{body}")
        text = pieces[0]
        for pc in pieces[1:]:
            text += f" - {pc[1:]}" if pc.startswith("-") else f" + {pc}"
        return text

    def __repr__(self) -> str:
        return f"<TensorElement {self}>"


def tensor_mul(s: TensorElement, t: TensorElement) -> TensorElement:
    """Graded tensor-algebra product.

    Each factor of ``t`` moving left past a later slot of ``s`` contributes
    ``j^(grade of passed slot * grade of passing factor)``; for rank 2 this
    is exactly the twist ``j^(grad B * grad C)`` on (A x B)(C x D).
    """
    if s.rank != t.rank:
        raise RankMismatch(f"rank {s.rank} times rank {t.rank}")
    if s.pres is not t.pres:
        raise ValueError("tensor operands over different presentations")
    p = s.pres
    rank = s.rank
    concat = p.concat
    terms: dict[tuple[Word, ...], Scalar] = {}
    for ks, cs in s.terms.items():
        grades_s = [p.grade_of(w) for w in ks]
        # suffix grade sums: factor i of t passes slots i+1..rank-1 of s
        tail = [0] * rank
        acc = 0
        for i in range(rank - 1, -1, -1):
            tail[i] = acc
            acc += grades_s[i]
        for kt, ct in t.terms.items():
            twist = 0
            for i in range(rank):
                twist += p.grade_of(kt[i]) * tail[i]
            key = []
            dead = False
            for i in range(rank):
                w = concat(ks[i], kt[i])
                if w is None:
                    dead = True
                    break
                key.append(w)
            if dead:
                continue
            c = cs * ct * j_pow(twist)
            k = tuple(key)
            prev = terms.get(k)
            nc = prev + c if prev is not None else c
            if nc:
                terms[k] = nc
            elif prev is not None:
                del terms[k]
    return TensorElement(p, rank, terms)
