"""The recursive families a_n, b_n: frozen small cases and the lemma checks.

b_2 was reduced by hand from the 16-letter concatenation a1 b1 a1^-1 b1^-1
and frozen below; everything else cross-checks the builder against
independent recomputation.
"""

from __future__ import annotations

import pytest

from lcslab import construction
from lcslab.construction import MU, build, check_identities, check_lengths, check_no_cancellation
from lcslab.words import Word, commutator


def test_level_zero_is_seeds():
    seq = build(0)
    assert str(seq.a(0)) == "a"
    assert str(seq.b(0)) == "b"


def test_level_one_words():
    seq = build(1)
    assert str(seq.a(1)) == "BabA"
    assert str(seq.b(1)) == "abAB"


def test_level_two_frozen():
    seq = build(2)
    assert str(seq.b(2)) == "BabbABaBAbbaBA"
    assert len(seq.b(2)) == 14
    assert len(seq.a(2)) == 14


def test_lengths_small_n():
    seq = build(8)
    table = check_lengths(seq)
    lens = [r.len_b for r in table.rows]
    # independent recurrence: the first three values pin everything down
    # if the 3,2-recurrence holds with equality
    expected = [1, 4, 14]
    while len(expected) <= 8:
        expected.append(3 * expected[-1] + 2 * expected[-2])
    assert lens == expected
    assert table.ok
    for r in table.rows:
        assert r.len_a == r.len_b
        assert r.len_b >= 2 ** r.n
    assert table.rows[2].recurrence_equality is True
    # measured constant: the max of len_b / MU^n is attained at n=1 (4/MU)
    assert abs(table.c_prime - 4.0 / MU) < 1e-12


def test_doubling_step():
    seq = build(8)
    for n in range(1, 9):
        assert len(seq.b(n)) >= 2 * len(seq.b(n - 1))


def test_no_cancellation_small_n():
    seq = build(6)
    for n in range(7):
        rep = check_no_cancellation(seq, n)
        assert rep.ok, (n, rep.cancelled)
        assert set(rep.cancelled) == set(construction.PRODUCT_LABELS)


def test_a1_b1_product_does_cancel():
    # a_n b_n is deliberately absent from the lemma's eight products:
    # it cancels.
    seq = build(1)
    from lcslab.words import concat
    _, k = concat(seq.a(1), seq.b(1))
    assert k > 0


def test_identities_small_n():
    seq = build(6)
    for n in range(2, 7):
        rep = check_identities(seq, n)
        assert rep.ok, (n, rep)


def test_conjugation_identity_explicit():
    # b_0 a_1 b_0^-1 = b_1: b . BabA . B -> abAB
    seq = build(1)
    from lcslab.words import conjugate
    assert conjugate(seq.a(1), seq.b(0)) == seq.b(1)


def test_derivation_checker():
    seq = build(5)
    assert seq.check_derivation()
    d = seq.derivation(3)
    assert d["b"] == ["comm", "a2", "b2"]


def test_budget_guard():
    with pytest.raises(ValueError):
        build(60)
    with pytest.raises(ValueError):
        build(10, budget_letters=100)


def test_identities_need_n_at_least_two():
    seq = build(3)
    with pytest.raises(ValueError):
        check_identities(seq, 1)


def test_seed_composition():
    """a_{n+m}(a,b) = a_n(a_m, b_m): the recursion composes under
    substitution, which is what the almost-law module relies on."""
    base = build(4)
    inner = build(1)
    shifted = build(3, seeds=(inner.a(1), inner.b(1)))
    for n in range(4):
        assert shifted.a(n) == base.a(n + 1)
        assert shifted.b(n) == base.b(n + 1)


def test_nontrivial_seed_guard():
    with pytest.raises(ValueError):
        build(2, seeds=(Word.identity(), Word.parse("b")))


def test_mu_value():
    assert abs(MU - 3.5615528128088303) < 1e-12
