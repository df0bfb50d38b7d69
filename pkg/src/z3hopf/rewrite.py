"""Terminating rewriting of words to canonical normal form.

A presentation carries one rule per ordered pair of letters (a letter is a
generator or the inverse of an invertible generator).  The rule for the
out-of-order word ``X*Y`` rewrites it to an element strictly smaller in the
degree-lexicographic order; structural moves (exponent merging, unit
cancellation, nilpotent cubes) are implicit.  Pairs may instead be declared
free, in which case the engine leaves them adjacent; any other ruleless
out-of-order junction raises MissingRule.
"""
from __future__ import annotations

import itertools
import random
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import Element, GenIndex, Generator, INVERTIBLE, UNIT_WORD, Word
from .coeff import SC_ONE, Scalar
from .errors import (
    InvalidRule,
    MissingImage,
    MissingRule,
    NonInvertibleConjugation,
    NotInvertible,
)
from .report import CheckReport, IdentityResult, timed_report

Letter = tuple[str, int]  # (generator name, +1 | -1)

_MAX_STEPS = 2_000_000


def _letter_word(letter: Letter) -> Word:
    return ((letter[0], letter[1]),)


class RewriteRule:
    """Directed rule ``X*Y -> rhs`` for an out-of-order letter pair."""

    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs: tuple[Letter, Letter], rhs: Element):
        self.lhs = lhs
        self.rhs = rhs

    def validate(self, p: "Presentation") -> None:
        (g, sg), (h, sh) = self.lhs
        if p.pos(g) <= p.pos(h):
            raise InvalidRule(f"rule lhs {g},{h} is not an out-of-order pair")
        lhs_word = p.word([(g, sg), (h, sh)])
        key = p.order_key(lhs_word)
        for w in self.rhs.terms:
            if not p.order_key(w) < key:
                raise InvalidRule(
                    f"rhs word {p.word_str(w)} does not decrease the order below {p.word_str(lhs_word)}"
                )

    def __repr__(self) -> str:
        (g, sg), (h, sh) = self.lhs
        ls = ("" if sg > 0 else "^-1", "" if sh > 0 else "^-1")
        return f"<Rule {g}{ls[0]}*{h}{ls[1]} -> {self.rhs}>"


class Presentation(GenIndex):
    """Finitely presented graded algebra: generators, order, rewrite rules."""

    def __init__(
        self,
        name: str,
        generators: Iterable[Generator],
        rules: Iterable[RewriteRule] = (),
        free_pairs: Iterable[frozenset[str] | tuple[str, str]] = (),
        annihilations: Iterable[tuple[tuple[str, int], tuple[str, int]]] = (),
    ):
        super().__init__(generators, annihilations)
        self.name = name
        self.rules: dict[tuple[Letter, Letter], RewriteRule] = {}
        self.free_pairs = frozenset(frozenset(p) for p in free_pairs)
        self._nf_cache: dict[Word, dict[Word, Scalar]] = {}
        for r in rules:
            self.add_rule(r)

    def add_rule(self, rule: RewriteRule) -> None:
        if rule.lhs in self.rules:
            raise InvalidRule(f"duplicate rule for pair {rule.lhs}")
        rule.validate(self)
        self.rules[rule.lhs] = rule
        self._nf_cache.clear()

    def rule_for(self, g: Letter, h: Letter) -> RewriteRule | None:
        return self.rules.get((g, h))

    def is_free_pair(self, g: str, h: str) -> bool:
        return frozenset((g, h)) in self.free_pairs

    # -- derived presentations (ablation helpers) ------------------------
    def copy(
        self,
        name: str | None = None,
        drop_pairs: Iterable[tuple[str, str]] = (),
        free_instead: bool = False,
        replace_kind: Mapping[str, str] | None = None,
        drop_annihilations: bool = False,
    ) -> "Presentation":
        """Functional variant with rules dropped or generator kinds changed.

        ``drop_pairs`` are generator-name pairs; every rule whose lhs
        letters use those generators is removed, and the pair becomes free
        when ``free_instead`` is set.
        """
        dropped = {frozenset(p) for p in drop_pairs}
        gens = []
        for g in self.generators:
            kind = (replace_kind or {}).get(g.name, g.kind)
            gens.append(Generator(g.name, g.grade, kind, g.weight))
        free = set(self.free_pairs)
        if free_instead:
            free |= dropped
        out = Presentation(
            name or self.name,
            gens,
            free_pairs=free,
            annihilations=() if drop_annihilations else self.annihilations,
        )
        for (gl, hl), rule in self.rules.items():
            if frozenset((gl[0], hl[0])) in dropped:
                continue
            out.add_rule(RewriteRule((gl, hl), rule.rhs.reinterpret(out)))
        return out

    # -- junction scan ----------------------------------------------------
    def _first_junction(self, w: Word) -> tuple[int, RewriteRule] | None:
        rules = self.rules
        pos = self._pos
        for i in range(len(w) - 1):
            g, e = w[i]
            h, f = w[i + 1]
            pg, ph = pos[g], pos[h]
            if pg <= ph:
                continue
            if self.is_free_pair(g, h):
                continue
            rule = rules.get(((g, 1 if e > 0 else -1), (h, 1 if f > 0 else -1)))
            if rule is None:
                raise MissingRule(
                    f"no rule for adjacent pair {g}^{e} * {h}^{f} in {self.name!r}"
                )
            return i, rule
        return None

    def _junctions(self, w: Word) -> list[tuple[int, RewriteRule]]:
        out = []
        pos = self._pos
        for i in range(len(w) - 1):
            g, e = w[i]
            h, f = w[i + 1]
            if pos[g] <= pos[h] or self.is_free_pair(g, h):
                continue
            rule = self.rules.get(((g, 1 if e > 0 else -1), (h, 1 if f > 0 else -1)))
            if rule is None:
                raise MissingRule(
                    f"no rule for adjacent pair {g}^{e} * {h}^{f} in {self.name!r}"
                )
            out.append((i, rule))
        return out

    def is_normal(self, w: Word) -> bool:
        return self._first_junction(w) is None

    def _splice(self, w: Word, i: int, rule: RewriteRule) -> list[tuple[Word, Scalar]]:
        (g, e), (h, f) = w[i], w[i + 1]
        sg = 1 if e > 0 else -1
        sh = 1 if f > 0 else -1
        prefix = w[:i] + (((g, e - sg),) if e != sg else ())
        suffix = (((h, f - sh),) if f != sh else ()) + w[i + 2 :]
        out = []
        for rw, rc in rule.rhs.terms.items():
            nw = self.merge_factors((*prefix, *rw, *suffix))
            if nw is not None:
                out.append((nw, rc))
        return out

    # -- normalization ------------------------------------------------------
    def normal_form_of_word(self, w0: Word) -> dict[Word, Scalar]:
        """Memoized normal form of a single word as a word -> Scalar map."""
        memo = self._nf_cache
        hit = memo.get(w0)
        if hit is not None:
            return hit
        stack = [w0]
        while stack:
            w = stack[-1]
            if w in memo:
                stack.pop()
                continue
            j = self._first_junction(w)
            if j is None:
                memo[w] = {w: SC_ONE}
                stack.pop()
                continue
            children = self._splice(w, *j)
            pending = [cw for cw, _ in children if cw not in memo]
            if pending:
                if len(stack) > 200_000:
                    raise RuntimeError("rewriting exceeded the step bound")
                stack.extend(pending)
                continue
            acc: dict[Word, Scalar] = {}
            for cw, cc in children:
                for fw, fc in memo[cw].items():
                    c = cc * fc
                    prev = acc.get(fw)
                    nc = prev + c if prev is not None else c
                    if nc:
                        acc[fw] = nc
                    elif prev is not None:
                        del acc[fw]
            memo[w] = acc
            stack.pop()
        return memo[w0]

    def normalize(self, e: Element) -> Element:
        if e.pres is not self:
            raise ValueError("element belongs to a different presentation")
        terms: dict[Word, Scalar] = {}
        for w, c in e.terms.items():
            for fw, fc in self.normal_form_of_word(w).items():
                v = c * fc
                prev = terms.get(fw)
                nc = prev + v if prev is not None else v
                if nc:
                    terms[fw] = nc
                elif prev is not None:
                    del terms[fw]
        return Element(self, terms)

    def normalize_word_strategy(
        self, w0: Word, chooser: Callable[[int], int], max_steps: int = _MAX_STEPS
    ) -> dict[Word, Scalar]:
        """Uncached normalization with an arbitrary rewrite-selection strategy.

        On each step ``chooser`` picks which reducible word to rewrite and
        at which of its junctions; equal words are recombined after every
        step, so the intermediate element stays small.  Used by the
        confluence diagnostics to vary the reduction order.
        """
        normal: dict[Word, Scalar] = {}
        active: dict[Word, Scalar] = {}
        if self._first_junction(w0) is None:
            normal[w0] = SC_ONE
        else:
            active[w0] = SC_ONE
        steps = 0
        while active:
            steps += 1
            if steps > max_steps:
                raise RuntimeError("strategy rewriting exceeded the step bound")
            reducible = sorted(active)
            w = reducible[chooser(len(reducible))]
            js = self._junctions(w)
            i, rule = js[chooser(len(js))]
            c = active.pop(w)
            for nw, rc in self._splice(w, i, rule):
                v = c * rc
                bucket = normal if self._first_junction(nw) is None else active
                prev = bucket.get(nw)
                nc = prev + v if prev is not None else v
                if nc:
                    bucket[nw] = nc
                elif prev is not None:
                    del bucket[nw]
        return normal

    def __repr__(self) -> str:
        return f"<Presentation {self.name!r}: {len(self.generators)} generators, {len(self.rules)} rules>"


# -- building relations and rules --------------------------------------------


def rule_from_relation(p: Presentation, lhs: tuple[Letter, Letter], rhs: Element) -> RewriteRule:
    return RewriteRule(lhs, rhs)


def relation_element(p: Presentation, rule: RewriteRule) -> Element:
    """The relation ``lhs - rhs`` as an element (zero in the quotient)."""
    (g, sg), (h, sh) = rule.lhs
    return Element.monomial(p, [(g, sg), (h, sh)]) - rule.rhs


# -- inverse-rule derivation ---------------------------------------------------


def _main_split(p: Presentation, rule_lhs: tuple[Letter, Letter], rhs: Element):
    """Split rhs into c0 * (swapped word) + rest; c0 must be nonzero."""
    (g, sg), (h, sh) = rule_lhs
    swapped = p.word([(h, sh), (g, sg)])
    c0 = rhs.terms.get(swapped)
    if c0 is None or not c0:
        raise NonInvertibleConjugation(
            f"rule for {g},{h} has no swapped leading term; cannot conjugate"
        )
    rest = rhs - Element(p, {swapped: c0})
    return c0, rest


def _derive_variant(
    p: Presentation,
    base_lhs: tuple[Letter, Letter],
    base_rhs: Element,
    invert_left: bool,
    invert_right: bool,
) -> RewriteRule:
    """Conjugate a rule by the inverse of one of its letters.

    From ``X*Y = c0*Y*X + R`` one gets ``X*Y' = c0^-1*Y'*X - c0^-1*Y'*R*Y'``
    with ``Y' = Y^-1`` (and symmetrically on the left).  The correction is
    normalized with the rules available so far; when it reintroduces the
    pair being derived, the rule is solved by a nilpotent fixed-point
    iteration and checked against an independent oracle.
    """
    (g, sg), (h, sh) = base_lhs
    c0, rest = _main_split(p, base_lhs, base_rhs)
    if invert_right:
        new_lhs = ((g, sg), (h, -sh))
        conj: Letter = (h, -sh)
    elif invert_left:
        new_lhs = ((g, -sg), (h, sh))
        conj = (g, -sg)
    else:
        raise ValueError("nothing to invert")
    swapped_new = p.word([new_lhs[1], new_lhs[0]])
    c0_inv = c0.inverse()
    main = Element(p, {swapped_new: c0_inv})
    if rest.is_zero():
        return RewriteRule(new_lhs, main)

    conj_el = Element.monomial(p, [conj])
    correction_src = conj_el * rest * conj_el

    # Fixed-point: corrections re-enter through the pair being derived, but
    # every round multiplies in another nilpotent pair, so this stabilizes.
    candidate = RewriteRule(new_lhs, main)
    for _ in range(8):
        trial = Presentation(
            p.name + "~derive", p.generators,
            free_pairs=p.free_pairs, annihilations=p.annihilations,
        )
        for lhs, r in p.rules.items():
            trial.add_rule(RewriteRule(lhs, r.rhs.reinterpret(trial)))
        trial.add_rule(RewriteRule(new_lhs, candidate.rhs.reinterpret(trial)))
        corr = trial.normalize(correction_src.reinterpret(trial))
        new_rhs = (main.reinterpret(trial) - corr * c0_inv).reinterpret(p)
        if new_rhs.terms == candidate.rhs.terms:
            break
        candidate = RewriteRule(new_lhs, new_rhs)
    else:
        raise NonInvertibleConjugation(f"derivation for {new_lhs} did not stabilize")
    return candidate


def _oracle_check(p: Presentation, rule: RewriteRule) -> None:
    """Undo the conjugation: multiplying back must recover a bare word."""
    (g, sg), (h, sh) = rule.lhs
    left = Element.one(p)
    right = Element.one(p)
    expect: list[Letter] = [(g, sg), (h, sh)]
    if sg < 0:
        left = Element.gen(p, g)
        expect = expect[1:]
    if sh < 0:
        right = Element.gen(p, h)
        expect = expect[:-1]
    got = p.normalize(left * rule.rhs * right)
    want = p.normalize(Element.monomial(p, expect))
    if got.terms != want.terms:
        raise NonInvertibleConjugation(
            f"derived rule {rule!r} fails the conjugation oracle: {got} != {want}"
        )


def derive_inverse_rules(p: Presentation, name: str | None = None) -> Presentation:
    """Extend a presentation with rules for the inverse letters.

    Every rule relating generators u, v spawns the conjugated rules for
    u*v^-1, u^-1*v and u^-1*v^-1 whenever the respective generator is
    invertible.  Single-term rules are processed first so multi-term
    corrections can be normalized with already-derived rules.
    """
    out = Presentation(
        name or p.name, p.generators,
        free_pairs=p.free_pairs, annihilations=p.annihilations,
    )
    base = sorted(p.rules.values(), key=lambda r: (len(r.rhs.terms), r.lhs))
    for r in base:
        out.add_rule(RewriteRule(r.lhs, r.rhs.reinterpret(out)))
    for r in base:
        (g, sg), (h, sh) = r.lhs
        ginv = out.gen(g).kind == INVERTIBLE
        hinv = out.gen(h).kind == INVERTIBLE
        rhs = out.rules[r.lhs].rhs
        if hinv:
            nr = _derive_variant(out, r.lhs, rhs, False, True)
            out.add_rule(nr)
            _oracle_check(out, nr)
        if ginv:
            nr = _derive_variant(out, r.lhs, rhs, True, False)
            out.add_rule(nr)
            _oracle_check(out, nr)
        if ginv and hinv:
            mid = out.rules[((g, sg), (h, -sh))]
            nr = _derive_variant(out, mid.lhs, mid.rhs, True, False)
            out.add_rule(nr)
            _oracle_check(out, nr)
    return out


# -- diagnostics --------------------------------------------------------------


def check_homogeneity(p: Presentation) -> CheckReport:
    """Every rule must preserve the grade of its left-hand side."""
    with timed_report("homogeneity", p.name) as rep:
        for (gl, hl), rule in sorted(p.rules.items()):
            lhs_word = p.word([gl, hl])
            lg = p.grade_of(lhs_word)
            bad = [w for w in rule.rhs.terms if p.grade_of(w) != lg]
            name = f"grade({p.word_str(lhs_word)}) = grade(rhs)"
            if bad:
                rep.add(IdentityResult(name, "fail", f"mismatched words: {[p.word_str(w) for w in bad]}"))
            else:
                rep.add(IdentityResult(name, "pass"))
    return rep


def _nf_equal(a: Mapping[Word, Scalar], b: Mapping[Word, Scalar]) -> bool:
    return dict(a) == dict(b)


_RANDOM_PHASE = 120


def _strategies(seed: int):
    """Factories for junction-selection strategies.

    Inverse-letter corrections make some unfair reduction orders
    non-terminating, so every non-leftmost strategy runs a bounded free
    phase and then completes leftmost; any such completion still reaches a
    normal form, which is what the independence check compares.
    """

    def budgeted(pick):
        def make():
            state = {"n": 0}

            def chooser(n: int) -> int:
                state["n"] += 1
                if state["n"] > _RANDOM_PHASE:
                    return 0
                return pick(n)

            return chooser

        return make

    def rand_pick(s):
        rng = random.Random(s)
        return lambda n: rng.randrange(n)

    return [
        ("leftmost", lambda: (lambda n: 0)),
        ("rightmost", budgeted(lambda n: n - 1)),
        ("random-a", budgeted(rand_pick(seed * 2 + 1))),
        ("random-b", budgeted(rand_pick(seed * 2 + 2))),
    ]


def _word_pool(p: Presentation, max_len: int, trials: int, rng: random.Random) -> list[Word]:
    letters = p.alphabet()
    pool = []
    while len(pool) < trials:
        k = rng.randint(1, max_len)
        w = p.merge_factors([rng.choice(letters) for _ in range(k)])
        if w:
            pool.append(w)
    return pool


def check_local_confluence(
    p: Presentation, max_len: int = 6, trials: int = 1000, seed: int = 0
) -> CheckReport:
    """Randomized strategy-independence check; divergences land in the report."""
    rng = random.Random(seed)
    with timed_report("confluence", p.name) as rep:
        divergent = None
        for w in _word_pool(p, max_len, trials, rng):
            ref = None
            try:
                for sname, make in _strategies(seed):
                    nf = p.normalize_word_strategy(w, make())
                    if ref is None:
                        ref = nf
                    elif not _nf_equal(ref, nf):
                        divergent = (w, sname)
                        break
            except MissingRule:
                continue  # unreducible words say nothing about confluence
            if divergent:
                break
        name = f"strategy-independence (random, len<={max_len}, {trials} words)"
        if divergent:
            w, sname = divergent
            rep.add(IdentityResult(name, "fail", f"divergent word {p.word_str(w)} under {sname}"))
        else:
            rep.add(IdentityResult(name, "pass"))
    return rep


def check_strategy_independence_exhaustive(p: Presentation, max_len: int = 4) -> CheckReport:
    """Exhaustive strategy-independence over all words up to max_len letters."""
    letters = p.alphabet()
    with timed_report("confluence-exhaustive", p.name) as rep:
        divergent = None
        for k in range(1, max_len + 1):
            for combo in itertools.product(letters, repeat=k):
                w = p.merge_factors(combo)
                if not w:
                    continue
                ref = None
                try:
                    for sname, make in _strategies(k):
                        nf = p.normalize_word_strategy(w, make())
                        if ref is None:
                            ref = nf
                        elif not _nf_equal(ref, nf):
                            divergent = (w, sname)
                            break
                except MissingRule:
                    continue  # unreducible words say nothing about confluence
                if divergent:
                    break
            if divergent:
                break
        name = f"strategy-independence (exhaustive, len<={max_len})"
        if divergent:
            w, sname = divergent
            rep.add(IdentityResult(name, "fail", f"divergent word {p.word_str(w)} under {sname}"))
        else:
            rep.add(IdentityResult(name, "pass"))
    return rep


# -- substitution and reduction -------------------------------------------------


def normalize(e: Element, p: Presentation) -> Element:
    """Fixed point of rewriting; canonical representative of e in p."""
    if e.pres is not p:
        e = e.reinterpret(p)
    return p.normalize(e)


def substitute(e: Element, images: Mapping[str, Element], target: Presentation) -> Element:
    """Homomorphic substitution generator -> image, normalized in target.

    Negative powers require the image to be an invertible unit monomial.
    """
    acc_total = Element.zero(target)
    for w, c in e.terms.items():
        acc = Element.scalar(target, c)
        for name, exp in w:
            img = images.get(name)
            if img is None:
                raise MissingImage(f"no image for generator {name!r}")
            if img.pres is not target:
                raise MissingImage(f"image of {name!r} lives in a different presentation")
            if exp >= 0:
                for _ in range(exp):
                    acc = acc * img
            else:
                try:
                    iw, ic = img.unit_monomial()
                except NotInvertible as exc:
                    raise NotInvertible(
                        f"negative power of {name!r} but its image is not a unit monomial"
                    ) from exc
                inv = Element(target, {target.invert_word(iw): ic.inverse()})
                for _ in range(-exp):
                    acc = acc * inv
        acc_total = acc_total + acc
    return target.normalize(acc_total)


def _letters_tuple(p: Presentation, w: Word) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for name, exp in w:
        s = 1 if exp > 0 else -1
        out.extend([(name, s)] * abs(exp))
    return tuple(out)


def _word_from_letters(p: Presentation, letters: Sequence[Letter]) -> Word | None:
    return p.merge_factors([(n, s) for n, s in letters])


def reduce_against(e: Element, relations: Sequence[Element], p: Presentation) -> Element:
    """Polynomial reduction of e modulo a set of relations.

    Each relation is oriented by its order-leading word; any term of e
    containing that word as a letter-infix is replaced by the lower-order
    remainder.  The loop terminates because each replacement strictly
    decreases the rewritten term collection in the monomial order.
    """
    oriented = []
    for r in relations:
        if r.is_zero():
            continue
        lead = max(r.terms, key=p.order_key)
        c = r.terms[lead]
        rest = r - Element(p, {lead: c})
        oriented.append((_letters_tuple(p, lead), c, rest))

    guard = 0
    while True:
        guard += 1
        if guard > 100_000:
            raise RuntimeError("reduction exceeded the step bound")
        # pick the largest reducible term
        target = None
        for w in sorted(e.terms, key=p.order_key, reverse=True):
            lw = _letters_tuple(p, w)
            for lead, lc, rest in oriented:
                n, m = len(lw), len(lead)
                if m > n:
                    continue
                idx = next((i for i in range(n - m + 1) if lw[i : i + m] == lead), None)
                if idx is None:
                    continue
                target = (w, lw, idx, m, lc, rest)
                break
            if target:
                break
        if not target:
            return e
        w, lw, idx, m, lc, rest = target
        coeff = e.terms[w] / lc
        pre = _word_from_letters(p, lw[:idx])
        post = _word_from_letters(p, lw[idx + m :])
        replacement = Element.zero(p)
        if pre is not None and post is not None:
            pre_el = Element(p, {pre: SC_ONE})
            post_el = Element(p, {post: SC_ONE})
            replacement = pre_el * rest * post_el
        # lc*lead + rest = 0, so lead is replaced by -rest/lc
        e = e - Element(p, {w: e.terms[w]}) - replacement * coeff
