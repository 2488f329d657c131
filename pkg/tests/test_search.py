import os

import pytest
from hypothesis import given, settings, strategies as st

from lcslab.words import LETTERS, Word, is_reduced, inverse_bytes
from lcslab.construction import build
from lcslab.search import (
    AUTO_TABLES,
    NotFoundBelow,
    NotFoundBelowError,
    SearchFlags,
    SearchSpec,
    alpha,
    alpha_table,
    build_oracle,
    canonical_bytes,
    check_alpha_table,
    engine_flags,
    enumerate_words,
    matches_printed,
    orbit_words,
    quotient_tables,
    report_constants,
    search_min,
    verify_minimum,
)
from lcslab.girth import BetaBracket, GirthResult, beta_bracket, girth, verify_three_x
from lcslab.quotients import free_abelian_rank2, klein_four, s3_transpositions


def test_enumeration_counts_unpruned():
    # 4 * 3^(L-1) reduced words of each length
    per_len = {}
    for w in enumerate_words(4):
        per_len[len(w)] = per_len.get(len(w), 0) + 1
    assert per_len == {1: 4, 2: 12, 3: 36, 4: 108}


def test_enumeration_yields_reduced_in_order():
    seen = list(enumerate_words(3))
    assert all(is_reduced(w.data) for w in seen)
    lengths = [len(w) for w in seen]
    assert lengths == sorted(lengths)
    assert len(set(seen)) == len(seen)


def test_pruned_classes_cover_everything():
    flags = SearchFlags(cyclic=True, inverse=True)
    reps = [w for w in enumerate_words(3, flags) if len(w) == 3]
    assert len(reps) < 36
    union = set()
    for w in reps:
        assert w.data == canonical_bytes(w.data, flags)
        union |= orbit_words(w.data, flags)
    assert union == {w.data for w in enumerate_words(3) if len(w) == 3}


def test_full_pruning_also_covers():
    flags = SearchFlags(cyclic=True, inverse=True, automorphism=True)
    union = set()
    for w in enumerate_words(4, flags):
        union |= {u for u in orbit_words(w.data, flags) if len(u) == len(w)}
    assert union == {w.data for w in enumerate_words(4)}


def test_automorphism_tables_are_free_automorphisms():
    assert len(set(AUTO_TABLES)) == 8
    w = b"abAB"
    for t in AUTO_TABLES:
        img = w.translate(t)
        assert is_reduced(img)
        # inversion commutes with every letter automorphism
        assert inverse_bytes(img) == inverse_bytes(w).translate(t)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(list(LETTERS)), min_size=1, max_size=10))
def test_canonical_is_orbit_minimum_and_idempotent(letters):
    w = Word(bytes(letters))
    if not w:
        return
    flags = SearchFlags(cyclic=True, inverse=True, automorphism=True)
    c = canonical_bytes(w.data, flags)
    orb = orbit_words(w.data, flags)
    assert c == min(orb)
    assert canonical_bytes(c, flags) == c
    assert orbit_words(c, flags) == orb


def test_small_girths():
    g = girth("z2", 6)
    assert isinstance(g, GirthResult)
    assert g.value == 4 and g.exact
    assert str(g.witness) == "ABab"

    g = girth("perm:a=(1 2);b=(2 3)", 6)
    assert g.value == 2 and str(g.witness) == "AA"

    g = girth("perm:a=(1 2)(3 4);b=(1 3)(2 4)", 6)
    assert g.value == 2


def test_not_found_below_is_explicit():
    out = girth("derived2", 6)
    assert out == NotFoundBelow(6)


def test_pruned_and_unpruned_minima_agree():
    for oid, bound in (("z2", 8), ("lcs:2", 8), ("lcs:3", 8),
                       ("derived-perm:a=(1 2);b=(2 3)", 8)):
        pruned = girth(oid, bound, reverify=False)
        plain = girth(oid, bound, reverify=False, no_prune=True)
        assert type(pruned) == type(plain)
        if isinstance(pruned, GirthResult):
            assert pruned.value == plain.value
            flags = engine_flags(build_oracle(oid))
            assert (canonical_bytes(plain.witness.data, flags)
                    == pruned.witness.data)


def test_search_deterministic_across_workers():
    o = build_oracle("derived-perm:a=(1 2);b=(2 3)")
    spec = SearchSpec(oracle_id=o.oracle_id, max_len=8, flags=engine_flags(o))
    seq, _ = search_min(spec, workers=1)
    par, _ = search_min(spec, workers=2)
    assert seq == par


def test_checkpoint_roundtrip(tmp_path):
    path = os.fspath(tmp_path / "search.ckpt")
    o = build_oracle("lcs:3")
    spec = SearchSpec(oracle_id="lcs:3", max_len=8, flags=engine_flags(o),
                      checkpoint=path)
    out1, stats1 = search_min(spec)
    assert os.path.exists(path)
    out2, stats2 = search_min(spec)  # resumes, recomputes nothing
    assert out1 == out2
    assert stats2.tested == 0 and stats2.resumed_tasks > 0


def test_checkpoint_rejects_mismatch_and_corruption(tmp_path):
    path = os.fspath(tmp_path / "search.ckpt")
    o = build_oracle("lcs:3")
    spec = SearchSpec(oracle_id="lcs:3", max_len=8, flags=engine_flags(o),
                      checkpoint=path)
    search_min(spec)
    other = SearchSpec(oracle_id="lcs:2", max_len=8, flags=engine_flags(o),
                       checkpoint=path)
    with pytest.raises(ValueError):
        search_min(other)
    with open(path, "r+b") as fh:
        fh.write(b"XXXX")
    with pytest.raises(ValueError):
        search_min(spec)


def test_alpha_small_values():
    assert alpha(1, 4, 1).value == 1
    e2 = alpha(2, 6, 2)
    assert e2.value == 4 and str(e2.witness) == "ABab"
    e3 = alpha(3, 10, 3)
    assert e3.value == 8
    assert verify_minimum("lcs:3", 8, e3.witness)


def test_alpha_requires_degree_at_least_n():
    with pytest.raises(ValueError):
        alpha(3, 8, 2)


def test_alpha_not_found_raises():
    with pytest.raises(NotFoundBelowError):
        alpha(3, 6, 3)


def test_alpha_table_consistency():
    table = alpha_table(3, 10)
    assert [e.value for e in table] == [1, 4, 8]
    check_alpha_table(table)


def test_alpha_table_checks_fire():
    from lcslab.search import AlphaEntry
    w = Word.parse("A")
    # a minimum below n is impossible: depth(w) <= len(w)
    bad = [AlphaEntry(1, 1, w, True, 4, 1), AlphaEntry(3, 2, w, True, 6, 2)]
    with pytest.raises(AssertionError):
        check_alpha_table(bad)
    # the sequence is nondecreasing in n
    bad = [AlphaEntry(1, 4, w, True, 4, 1), AlphaEntry(2, 3, w, True, 6, 2)]
    with pytest.raises(AssertionError):
        check_alpha_table(bad)


def test_matches_printed():
    assert matches_printed(1.23456789, "1.2345")   # truncation
    assert matches_printed(1.23456789, "1.2346")   # rounding
    assert not matches_printed(1.23456789, "1.2344")
    assert not matches_printed(1.23456789, "1.2347")
    assert matches_printed(2.0, "2.00")
    with pytest.raises(ValueError):
        matches_printed(1.0, "12345")


def test_constants_closed_forms():
    c = report_constants()
    assert f"{c['mu']:.12f}" == "3.561552812809"
    assert f"{c['nu']:.12f}" == "1.441155773039"
    assert f"{c['delta']:.12f}" == "0.693887516331"
    assert f"{c['log2_3']:.12f}" == "1.584962500721"
    assert f"{c['log2_mu']:.12f}" == "1.832506383580"
    # nu and delta are reciprocal by definition
    assert abs(c["nu"] * c["delta"] - 1.0) < 1e-12
    # mu is the larger root of x^2 = 3x + 2
    assert abs(c["mu"] ** 2 - (3 * c["mu"] + 2)) < 1e-12


def test_quotient_tables_relation():
    entries = alpha_table(2, 6)
    doc = quotient_tables(entries, {0: 1, 1: 4})
    rel = {r["n"]: r for r in doc["alpha_vs_beta"]}
    assert rel[0]["ok"] and rel[1]["ok"]
    assert all(row["quotient"] is None or row["quotient"] >= 1.0
               for row in doc["alpha"])


def test_verify_three_x_small_quotients():
    for q, g1_want in ((s3_transpositions(), 2), (klein_four(), 2)):
        rep = verify_three_x(q, max_len=8)
        assert rep.kernel_girth.value == g1_want
        assert rep.factor_ok is True
        assert rep.derived_lower >= 3 * g1_want


def test_verify_three_x_inconclusive_band():
    # bound too small to finish the derived search but big enough to
    # certify the 3x factor from the exhausted lengths
    rep = verify_three_x(s3_transpositions(), max_len=7)
    assert rep.derived_girth == NotFoundBelow(7)
    assert rep.derived_lower == 8
    assert rep.factor_ok is True


def test_beta_bracket_trivial_levels():
    b0 = beta_bracket(0)
    assert (b0.lower, b0.upper, b0.exact) == (1, 1, 1)
    b1 = beta_bracket(1)
    assert b1.exact == 4 and b1.lower == 3 and b1.upper == 4
    b3 = beta_bracket(3)
    assert b3.exact is None
    assert (b3.lower, b3.upper) == (27, 50)


def test_girth_validates_bad_args():
    with pytest.raises(ValueError):
        girth("z2", 0)
    with pytest.raises(ValueError):
        build_oracle("bogus")
