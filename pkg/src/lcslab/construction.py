"""The recursive word families a_n, b_n and their machine checks.

    a_0 = first seed,  b_0 = second seed  (defaults a, b)
    a_{n+1} = [b_n^-1, a_n]
    b_{n+1} = [a_n, b_n]

Lengths grow like MU^n with MU = (3+sqrt(17))/2, so n around 14 is the
practical ceiling under the default letter budget.  Every check returns a
report object with the raw numbers; nothing is asserted here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .words import Word, commutator, concat, conjugate

MU = (3.0 + math.sqrt(17.0)) / 2.0

DEFAULT_LETTER_BUDGET = 10 ** 8


class PairSequence:
    """Words a_0..a_n, b_0..b_n for one choice of seeds."""

    def __init__(self, a_words: List[Word], b_words: List[Word], seeds: Tuple[Word, Word]):
        self.a_words = a_words
        self.b_words = b_words
        self.seeds = seeds

    @property
    def n_max(self) -> int:
        return len(self.b_words) - 1

    def a(self, n: int) -> Word:
        return self.a_words[n]

    def b(self, n: int) -> Word:
        return self.b_words[n]

    def derivation(self, n: int) -> object:
        """Symbolic derivation of level n: how each word is a commutator
        of level n-1 words.  This is the membership certificate for the
        n-th derived subgroup (each level is a commutator of two words of
        the previous level)."""
        if n == 0:
            return {"n": 0, "a": str(self.seeds[0]), "b": str(self.seeds[1])}
        return {
            "n": n,
            "a": ["comm", ["inv", f"b{n - 1}"], f"a{n - 1}"],
            "b": ["comm", f"a{n - 1}", f"b{n - 1}"],
        }

    def check_derivation(self) -> bool:
        """Recompute every node from its children."""
        for n in range(1, self.n_max + 1):
            if self.a_words[n] != commutator(~self.b_words[n - 1], self.a_words[n - 1]):
                return False
            if self.b_words[n] != commutator(self.a_words[n - 1], self.b_words[n - 1]):
                return False
        return True


def build(n_max: int,
          seeds: Optional[Tuple[Word, Word]] = None,
          budget_letters: int = DEFAULT_LETTER_BUDGET) -> PairSequence:
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if seeds is None:
        seeds = (Word.parse("a"), Word.parse("b"))
    wa, wb = seeds
    if not wa or not wb:
        raise ValueError("seeds must be nontrivial")
    a_words = [wa]
    b_words = [wb]
    for n in range(n_max):
        an, bn = a_words[-1], b_words[-1]
        # the next level is at most 2(len a + len b) letters per word;
        # refuse before allocating anything that size
        if 2 * (len(an) + len(bn)) > budget_letters:
            raise ValueError(
                f"n_max={n_max} would exceed the letter budget {budget_letters} "
                f"at level {n + 1} (lengths grow like {MU:.3f}^n)")
        a_words.append(commutator(~bn, an))
        b_words.append(commutator(an, bn))
    return PairSequence(a_words, b_words, seeds)


# ----------------------------------------------------------------------
# checks

PRODUCT_LABELS = ("a.a", "b.b", "a^-1.b", "b^-1.a", "a.b^-1", "b.a^-1", "a^-1.b^-1", "b.a")


@dataclass
class NoCancellationReport:
    n: int
    cancelled: dict  # product label -> cancelled pairs

    @property
    def ok(self) -> bool:
        return all(v == 0 for v in self.cancelled.values())


def check_no_cancellation(seq: PairSequence, n: int) -> NoCancellationReport:
    """Cancellation counts of the eight products of the no-cancellation lemma."""
    an, bn = seq.a(n), seq.b(n)
    ai, bi = ~an, ~bn
    pairs = ((an, an), (bn, bn), (ai, bn), (bi, an),
             (an, bi), (bn, ai), (ai, bi), (bn, an))
    counts = {}
    for label, (u, v) in zip(PRODUCT_LABELS, pairs):
        _, k = concat(u, v)
        counts[label] = k
    return NoCancellationReport(n=n, cancelled=counts)


@dataclass
class LengthRow:
    n: int
    len_a: int
    len_b: int
    lengths_equal: bool
    at_least_2n: bool
    recurrence_ok: Optional[bool]        # len_b <= 3*prev + 2*prevprev, n >= 2
    recurrence_equality: Optional[bool]  # recorded, not asserted


@dataclass
class LengthTable:
    rows: List[LengthRow] = field(default_factory=list)
    c_prime: float = 0.0  # measured max of len_b / MU^n

    @property
    def ok(self) -> bool:
        return all(r.lengths_equal and r.at_least_2n
                   and (r.recurrence_ok is not False) for r in self.rows)


def check_lengths(seq: PairSequence, n_max: Optional[int] = None) -> LengthTable:
    if n_max is None:
        n_max = seq.n_max
    table = LengthTable()
    lb = [len(seq.b(n)) for n in range(n_max + 1)]
    for n in range(n_max + 1):
        la = len(seq.a(n))
        rec_ok = rec_eq = None
        if n >= 2:
            bound = 3 * lb[n - 1] + 2 * lb[n - 2]
            rec_ok = lb[n] <= bound
            rec_eq = lb[n] == bound
        table.rows.append(LengthRow(
            n=n, len_a=la, len_b=lb[n],
            lengths_equal=la == lb[n],
            at_least_2n=lb[n] >= 2 ** n,
            recurrence_ok=rec_ok,
            recurrence_equality=rec_eq))
        table.c_prime = max(table.c_prime, lb[n] / MU ** n)
    return table


def _eqrel_pair(x: Word, y: Word) -> Tuple[bool, bool]:
    """The two rewriting identities, instantiated at (x, y):

        [[x^-1,y],[x,y]] = [[[x^-1,y],x],[x,y]]
        [[x^-1,y],[y,x]] = [[[x^-1,y],x],[y,x]]
    """
    c = commutator(~x, y)
    cx = commutator(c, x)
    xy = commutator(x, y)
    yx = commutator(y, x)
    left = commutator(c, xy) == commutator(cx, xy)
    right = commutator(c, yx) == commutator(cx, yx)
    return left, right


@dataclass
class IdentityReport:
    n: int
    eqrel_base: Tuple[bool, bool]
    eqrel_level: Tuple[bool, bool]
    bracket_identity: bool
    conjugation_identity: bool

    @property
    def ok(self) -> bool:
        return (all(self.eqrel_base) and all(self.eqrel_level)
                and self.bracket_identity and self.conjugation_identity)


def check_identities(seq: PairSequence, n: int) -> IdentityReport:
    """Reduced-word identities behind the depth recurrence, at level n >= 2:

        b_n = [[a_{n-1}, b_{n-2}], b_{n-1}]
        b_{n-2} a_{n-1} b_{n-2}^-1 = b_{n-1}

    plus both rewriting identities at (a, b) and at (a_{n-2}, b_{n-2}).
    """
    if n < 2:
        raise ValueError("check_identities needs n >= 2")
    a_gen, b_gen = Word.parse("a"), Word.parse("b")
    bn = seq.b(n)
    am1, bm1 = seq.a(n - 1), seq.b(n - 1)
    bm2 = seq.b(n - 2)
    return IdentityReport(
        n=n,
        eqrel_base=_eqrel_pair(a_gen, b_gen),
        eqrel_level=_eqrel_pair(seq.a(n - 2), bm2),
        bracket_identity=bn == commutator(commutator(am1, bm2), bm1),
        conjugation_identity=conjugate(am1, bm2) == bm1,
    )
