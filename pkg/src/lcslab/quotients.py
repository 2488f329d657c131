"""Quotients of the rank-2 free group and membership tests for the kernel
and its derived subgroup.

A normal subgroup is presented as the kernel of a homomorphism onto a
concrete group: either a finite permutation group or Z^2 (exponent sums,
whose kernel is the commutator subgroup).  Membership in the kernel is
evaluation; membership in [kernel, kernel] projects both Fox derivatives
into the integer group ring of the quotient and requires them to vanish,
which decides it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Hashable, List, Optional, Tuple

from .words import (
    LETTER_A,
    LETTER_AI,
    LETTER_B,
    LETTER_BI,
    Word,
    inverse_letter,
)


class QuotientGroup:
    """Target of a homomorphism out of the free group on a, b.

    Elements are hashable canonical values; subclasses provide the
    arithmetic.  The kernel is automatically normal, so these quotients
    are exactly the normal subgroups this package ever needs.
    """

    kind: str = "abstract"

    def identity(self) -> Hashable:
        raise NotImplementedError

    def multiply(self, x: Hashable, y: Hashable) -> Hashable:
        raise NotImplementedError

    def invert(self, x: Hashable) -> Hashable:
        raise NotImplementedError

    # letter -> image, including inverse letters; filled by subclasses
    letter_images: Dict[int, Hashable]

    # whether the a<->b swap and generator inversions fix the kernel setwise;
    # search pruning by those automorphisms is enabled only when true
    symmetric_presentation: bool = False

    def image(self, w: Word) -> Hashable:
        g = self.identity()
        for c in w.data:
            g = self.multiply(g, self.letter_images[c])
        return g

    def generated_elements(self, limit: int = 100000) -> frozenset:
        """Closure of the generator images (finite kinds only)."""
        seen = {self.identity()}
        frontier = [self.identity()]
        gens = [self.letter_images[LETTER_A], self.letter_images[LETTER_B],
                self.letter_images[LETTER_AI], self.letter_images[LETTER_BI]]
        while frontier:
            g = frontier.pop()
            for s in gens:
                h = self.multiply(g, s)
                if h not in seen:
                    if len(seen) >= limit:
                        raise ValueError("closure exceeds enumeration limit")
                    seen.add(h)
                    frontier.append(h)
        return frozenset(seen)

    def spec_string(self) -> str:
        raise NotImplementedError


class FreeAbelianQuotient(QuotientGroup):
    """F2 -> Z^2 by exponent sums; the kernel is the commutator subgroup."""

    kind = "FreeAbelianRank2"
    symmetric_presentation = True

    def __init__(self):
        self.letter_images = {
            LETTER_A: (1, 0), LETTER_AI: (-1, 0),
            LETTER_B: (0, 1), LETTER_BI: (0, -1),
        }

    def identity(self):
        return (0, 0)

    def multiply(self, x, y):
        return (x[0] + y[0], x[1] + y[1])

    def invert(self, x):
        return (-x[0], -x[1])

    def spec_string(self) -> str:
        return "z2"


def _parse_cycles(text: str) -> List[List[int]]:
    text = text.strip()
    if text in ("", "()", "e", "id"):
        return []
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"bad cycle notation: {text!r}")
    cycles = []
    for chunk in text[1:-1].split(")("):
        pts = [int(p) for p in chunk.replace(",", " ").split()]
        if len(pts) < 2 or len(set(pts)) != len(pts) or min(pts) < 1:
            raise ValueError(f"bad cycle: ({chunk})")
        cycles.append(pts)
    return cycles


def permutation_from_cycles(text: str, degree: Optional[int] = None) -> Tuple[int, ...]:
    """One-line cycle notation, 1-based points, e.g. '(1 2)(3 4)'."""
    cycles = _parse_cycles(text)
    n = max((max(c) for c in cycles), default=1)
    if degree is not None:
        if degree < n:
            raise ValueError("degree smaller than largest moved point")
        n = degree
    perm = list(range(n))
    for cyc in cycles:
        for i, p in enumerate(cyc):
            q = cyc[(i + 1) % len(cyc)]
            perm[p - 1] = q - 1
    return tuple(perm)


def cycles_string(perm: Tuple[int, ...]) -> str:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start] or perm[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        p = perm[start]
        while p != start:
            cyc.append(p)
            seen[p] = True
            p = perm[p]
        out.append("(" + " ".join(str(i + 1) for i in cyc) + ")")
    return "".join(out) or "()"


class PermutationQuotient(QuotientGroup):
    """F2 -> a finite permutation group on {1..n} (0-based internally)."""

    kind = "FinitePermutation"

    def __init__(self, image_a: Tuple[int, ...], image_b: Tuple[int, ...],
                 symmetric_presentation: bool = False):
        n = max(len(image_a), len(image_b))
        image_a = tuple(image_a) + tuple(range(len(image_a), n))
        image_b = tuple(image_b) + tuple(range(len(image_b), n))
        for p in (image_a, image_b):
            if sorted(p) != list(range(n)):
                raise ValueError(f"not a permutation of 0..{n-1}: {p}")
        self.degree = n
        inv_a = tuple(p[1] for p in sorted(zip(image_a, range(n))))
        inv_b = tuple(p[1] for p in sorted(zip(image_b, range(n))))
        self.letter_images = {
            LETTER_A: image_a, LETTER_AI: inv_a,
            LETTER_B: image_b, LETTER_BI: inv_b,
        }
        self.symmetric_presentation = symmetric_presentation

    def identity(self):
        return tuple(range(self.degree))

    def multiply(self, x, y):
        # act with x first, then y
        return tuple(y[x[i]] for i in range(self.degree))

    def invert(self, x):
        out = [0] * self.degree
        for i, j in enumerate(x):
            out[j] = i
        return tuple(out)

    def spec_string(self) -> str:
        a = cycles_string(self.letter_images[LETTER_A])
        b = cycles_string(self.letter_images[LETTER_B])
        return f"perm:a={a};b={b}"


def free_abelian_rank2() -> FreeAbelianQuotient:
    return FreeAbelianQuotient()


def s3_transpositions() -> PermutationQuotient:
    """a -> (1 2), b -> (2 3) in S3.  The swap a<->b is realized by an inner
    automorphism of S3 (conjugation by (1 3)) and both images are
    involutions, so the kernel is fixed by the letter automorphisms."""
    return PermutationQuotient(
        permutation_from_cycles("(1 2)", 3),
        permutation_from_cycles("(2 3)", 3),
        symmetric_presentation=True)


def klein_four() -> PermutationQuotient:
    """Regular representation of Z/2 x Z/2; every letter automorphism
    descends to an automorphism of the target, so the kernel is fixed."""
    return PermutationQuotient(
        permutation_from_cycles("(1 2)(3 4)", 4),
        permutation_from_cycles("(1 3)(2 4)", 4),
        symmetric_presentation=True)


def parse_quotient_spec(spec: str) -> QuotientGroup:
    """'z2' or 'perm:a=(1 2);b=(2 3)'."""
    if spec == "z2":
        return free_abelian_rank2()
    if spec.startswith("perm:"):
        parts = dict(kv.split("=", 1) for kv in spec[5:].split(";"))
        if set(parts) != {"a", "b"}:
            raise ValueError(f"permutation spec needs a=...;b=...: {spec!r}")
        pa = permutation_from_cycles(parts["a"])
        pb = permutation_from_cycles(parts["b"])
        deg = max(len(pa), len(pb))
        return PermutationQuotient(
            permutation_from_cycles(parts["a"], deg),
            permutation_from_cycles(parts["b"], deg))
    raise ValueError(f"unknown quotient spec: {spec!r}")


# ----------------------------------------------------------------------
# group-ring carriers and membership

class GroupRingElement:
    """Finitely supported integer combination of quotient elements.
    Zero coefficients are never stored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Optional[Dict[Hashable, int]] = None):
        self.coeffs = {g: c for g, c in (coeffs or {}).items() if c}

    def add_unit(self, g: Hashable, delta: int) -> None:
        c = self.coeffs.get(g, 0) + delta
        if c:
            self.coeffs[g] = c
        else:
            self.coeffs.pop(g, None)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"GroupRingElement({self.coeffs!r})"


def in_lambda(w: Word, q: QuotientGroup) -> bool:
    """Membership in the kernel of F2 -> q."""
    return q.image(w) == q.identity()


def project_fox(w: Word, q: QuotientGroup, gen: str) -> GroupRingElement:
    """Fox derivative of w pushed into the group ring of the quotient.

    One left-to-right walk: a positive occurrence of the generator
    contributes +(image of the prefix before it), a negative one
    contributes -(image of the prefix including it).
    """
    if gen not in ("a", "b"):
        raise ValueError("gen must be 'a' or 'b'")
    pos = LETTER_A if gen == "a" else LETTER_B
    neg = LETTER_AI if gen == "a" else LETTER_BI
    out = GroupRingElement()
    p = q.identity()
    for c in w.data:
        if c == pos:
            out.add_unit(p, 1)
            p = q.multiply(p, q.letter_images[c])
        elif c == neg:
            p = q.multiply(p, q.letter_images[c])
            out.add_unit(p, -1)
        else:
            p = q.multiply(p, q.letter_images[c])
    return out


def in_derived_lambda(w: Word, q: QuotientGroup) -> bool:
    """Membership in [kernel, kernel]: the word must die in the quotient and
    both projected Fox derivatives must vanish."""
    if not in_lambda(w, q):
        return False
    return (project_fox(w, q, "a").is_zero()
            and project_fox(w, q, "b").is_zero())


# ----------------------------------------------------------------------
# incremental walkers (push/pop membership along a search path)

class KernelWalker:
    """Tracks the quotient image of the current prefix."""

    __slots__ = ("q", "stack")

    def __init__(self, q: QuotientGroup):
        self.q = q
        self.stack = [q.identity()]

    def push(self, letter: int) -> None:
        self.stack.append(self.q.multiply(self.stack[-1],
                                          self.q.letter_images[letter]))

    def pop(self, letter: int) -> None:
        self.stack.pop()

    def is_member(self) -> bool:
        return len(self.stack) > 1 and self.stack[-1] == self.q.identity()


class DerivedKernelWalker:
    """Tracks the image and both projected Fox derivatives incrementally.

    Nonzero-entry counters make the vanishing test O(1) per query.
    """

    __slots__ = ("q", "stack", "da", "db", "nza", "nzb")

    def __init__(self, q: QuotientGroup):
        self.q = q
        self.stack = [q.identity()]
        self.da: Dict[Hashable, int] = {}
        self.db: Dict[Hashable, int] = {}
        self.nza = 0
        self.nzb = 0

    def _bump(self, table: Dict[Hashable, int], key: Hashable, delta: int) -> int:
        old = table.get(key, 0)
        new = old + delta
        if new:
            table[key] = new
        else:
            del table[key]
        return (1 if new else 0) - (1 if old else 0)

    def push(self, letter: int) -> None:
        q = self.q
        p = self.stack[-1]
        p2 = q.multiply(p, q.letter_images[letter])
        if letter == LETTER_A:
            self.nza += self._bump(self.da, p, 1)
        elif letter == LETTER_AI:
            self.nza += self._bump(self.da, p2, -1)
        elif letter == LETTER_B:
            self.nzb += self._bump(self.db, p, 1)
        else:
            self.nzb += self._bump(self.db, p2, -1)
        self.stack.append(p2)

    def pop(self, letter: int) -> None:
        p2 = self.stack.pop()
        p = self.stack[-1]
        if letter == LETTER_A:
            self.nza += self._bump(self.da, p, -1)
        elif letter == LETTER_AI:
            self.nza += self._bump(self.da, p2, 1)
        elif letter == LETTER_B:
            self.nzb += self._bump(self.db, p, -1)
        else:
            self.nzb += self._bump(self.db, p2, 1)

    def is_member(self) -> bool:
        return (len(self.stack) > 1 and self.nza == 0 and self.nzb == 0
                and self.stack[-1] == self.q.identity())
