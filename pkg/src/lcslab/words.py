"""Exact arithmetic on freely reduced words in the rank-2 free group F = <a, b>.

A word is stored as an immutable bytes object over the four letter bytes
a=0x61, A=0x41, b=0x62, B=0x42, where upper case means inverse.  The empty
bytes is the identity and serializes as "1".  Keeping words as bytes makes
concatenation, inversion and letter counting memcpy-speed, which matters
once the recursive families reach tens of millions of letters.
"""

from __future__ import annotations

from typing import Iterable, Tuple

LETTER_A = 0x61  # a
LETTER_AI = 0x41  # a^-1
LETTER_B = 0x62  # b
LETTER_BI = 0x42  # b^-1

LETTERS = bytes([LETTER_A, LETTER_AI, LETTER_B, LETTER_BI])

# swap case = invert one letter
_INV_TABLE = bytes.maketrans(b"aAbB", b"AaBb")
_INV_BYTE = [0] * 256
for _c, _d in zip(b"aAbB", b"AaBb"):
    _INV_BYTE[_c] = _d


def inverse_letter(c: int) -> int:
    return _INV_BYTE[c]


def letter_generator(c: int) -> str:
    """'a' or 'b', ignoring the sign."""
    return "a" if c in (LETTER_A, LETTER_AI) else "b"


def letter_sign(c: int) -> int:
    return 1 if c >= 0x61 else -1


def reduce_bytes(raw: bytes) -> bytes:
    """Freely reduce an arbitrary letter string (stack cancellation)."""
    out = []
    push = out.append
    pop = out.pop
    inv = _INV_BYTE
    for c in raw:
        if out and out[-1] == inv[c]:
            pop()
        else:
            push(c)
    return bytes(out)


def is_reduced(data: bytes) -> bool:
    inv = _INV_BYTE
    return all(data[i + 1] != inv[data[i]] for i in range(len(data) - 1))


def cancellation_bytes(u: bytes, v: bytes) -> int:
    """Number of letter pairs cancelling at the junction of reduced u, v."""
    k = 0
    n = min(len(u), len(v))
    lu = len(u)
    inv = _INV_BYTE
    while k < n and u[lu - 1 - k] == inv[v[k]]:
        k += 1
    return k


def concat_bytes(u: bytes, v: bytes) -> Tuple[bytes, int]:
    """Reduced product of two reduced words, plus the cancellation count.

    Cancellation in a product of reduced words happens only at the junction,
    so the result is u with its tail clipped followed by v with its head
    clipped.
    """
    k = cancellation_bytes(u, v)
    if k:
        return u[: len(u) - k] + v[k:], k
    return u + v, 0


def inverse_bytes(w: bytes) -> bytes:
    return w[::-1].translate(_INV_TABLE)


class Word:
    """An immutable freely reduced word; the identity is Word.identity()."""

    __slots__ = ("data",)

    def __init__(self, data: bytes = b"", *, _checked: bool = False):
        if not _checked:
            data = reduce_bytes(data)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    # -- construction -----------------------------------------------------

    @staticmethod
    def identity() -> "Word":
        return _IDENTITY

    @staticmethod
    def from_reduced(data: bytes) -> "Word":
        """Wrap bytes already known to be reduced (no re-check in hot paths)."""
        return Word(data, _checked=True)

    @staticmethod
    def parse(text: str) -> "Word":
        """Parse the canonical serialization; '1' (or '') is the identity.

        Unreduced input is accepted and reduced.
        """
        text = text.strip()
        if text in ("1", ""):
            return _IDENTITY
        raw = text.encode("ascii", errors="strict")
        bad = set(raw) - set(LETTERS)
        if bad:
            raise ValueError(f"invalid letters in word: {text!r} (use a,A,b,B or 1)")
        return Word(raw)

    @staticmethod
    def from_letters(letters: Iterable[int]) -> "Word":
        return Word(bytes(letters))

    # -- basics -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.data)

    def __str__(self) -> str:
        return self.data.decode("ascii") if self.data else "1"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.data == other.data

    def __hash__(self) -> int:
        return hash(self.data)

    def __bool__(self) -> bool:
        return bool(self.data)

    # -- group operations -------------------------------------------------

    def __mul__(self, other: "Word") -> "Word":
        w, _ = concat_bytes(self.data, other.data)
        return Word.from_reduced(w)

    def __invert__(self) -> "Word":
        return Word.from_reduced(inverse_bytes(self.data))

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return _IDENTITY
        base = self if n > 0 else ~self
        acc = base
        for _ in range(abs(n) - 1):
            acc = acc * base
        return acc


_IDENTITY = Word(b"", _checked=True)

# the four generator words, handy everywhere
A = Word.from_reduced(b"a")
A_INV = Word.from_reduced(b"A")
B = Word.from_reduced(b"b")
B_INV = Word.from_reduced(b"B")


def concat(u: Word, v: Word) -> Tuple[Word, int]:
    """Reduced product with its cancellation count."""
    w, k = concat_bytes(u.data, v.data)
    return Word.from_reduced(w), k


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u v u^-1 v^-1, reduced."""
    ud, vd = u.data, v.data
    w, _ = concat_bytes(ud, vd)
    w, _ = concat_bytes(w, inverse_bytes(ud))
    w, _ = concat_bytes(w, inverse_bytes(vd))
    return Word.from_reduced(w)


def conjugate(u: Word, v: Word) -> Word:
    """v u v^-1, reduced."""
    vd = v.data
    w, _ = concat_bytes(vd, u.data)
    w, _ = concat_bytes(w, inverse_bytes(vd))
    return Word.from_reduced(w)


def cyclic_reduce(w: Word) -> Tuple[Word, Word]:
    """Return (core, conjugator) with w = conjugator * core * conjugator^-1.

    The core is cyclically reduced and len(core) is the conjugacy length |w|.
    """
    d = w.data
    i, j = 0, len(d)
    inv = _INV_BYTE
    while j - i >= 2 and d[i] == inv[d[j - 1]]:
        i += 1
        j -= 1
    return Word.from_reduced(d[i:j]), Word.from_reduced(d[:i])


def is_cyclically_reduced(w: Word) -> bool:
    d = w.data
    return len(d) < 2 or d[0] != _INV_BYTE[d[-1]]


def exponent_sums(w: Word) -> Tuple[int, int]:
    """Signed letter counts (image in Z^2 under abelianization)."""
    d = w.data
    return (d.count(LETTER_A) - d.count(LETTER_AI),
            d.count(LETTER_B) - d.count(LETTER_BI))


def random_word(rng, length: int) -> Word:
    """Uniform random reduced word of exactly the given length."""
    if length <= 0:
        return _IDENTITY
    inv = _INV_BYTE
    out = [rng.choice(LETTERS)]
    for _ in range(length - 1):
        banned = inv[out[-1]]
        c = rng.choice(LETTERS)
        while c == banned:
            c = rng.choice(LETTERS)
        out.append(c)
    return Word.from_reduced(bytes(out))
