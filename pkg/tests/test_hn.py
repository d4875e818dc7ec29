from __future__ import annotations

import pytest
from conftest import SAMPLES, W, load_gp
from oracles import all_reduced
from smgroup.formats import parse_profile, read_text
from smgroup.gn import KappaParams, compile_gn
from smgroup.hn import (
    EmbeddingProfile,
    Match,
    NoMatch,
    ProfileError,
    compile_hn,
    gb_presentation,
    sigma_word,
    validate_profile,
    validate_sigma_shape,
)
from smgroup.presentation import make_presentation, relation_census
from smgroup.words import Word, cyclic_canonical, free_reduce


@pytest.fixture
def sigma2():
    return parse_profile(read_text(SAMPLES / "sigma2.emb"))


def _h(parity, parity_profile, N=1):
    gn = compile_gn(parity, parity.admissible("f1 f2 f3 f4 f5"), KappaParams(N))
    return gn, compile_hn(gn, parity_profile)


@pytest.mark.parametrize("N", [1, 2])
def test_hn_counts(parity, parity_profile, N):
    gn, h = _h(parity, parity_profile, N)
    c = relation_census(h)
    zsum = sum(len(z) for z in parity_profile.z)
    A = len(parity_profile.A)
    assert c.count("rho-rel") == 3 + A + zsum + (4 * N - 2) + 2
    assert c.count("d-rel") == 3 + zsum + A
    assert c.count("AB-comm") == A * len(parity_profile.B)
    for kind in ("transition", "auxiliary-Y", "auxiliary-kappa", "hub"):
        assert c.count(kind) == relation_census(gn).count(kind)
    assert h.name == f"H_{N}(parity)"
    assert h.classes["rho"] == ("rho",) and h.classes["B"] == ("b",) and h.classes["A"] == ("a",)


def test_hn_special_relators(parity, parity_profile):
    _, h = _h(parity, parity_profile)
    rels = {cyclic_canonical(r.word, h.generators) for r in h.relators}
    for text in ("~rho kappa1 rho d ~kappa1", "~rho kappa2 rho ~kappa2 ~d", "~d a d ~b ~a", "a b ~a ~b", "rho kappa3 ~rho ~kappa3"):
        assert cyclic_canonical(W(text), h.generators) in rels
    assert cyclic_canonical(W("rho kappa1 ~rho ~kappa1"), h.generators) not in rels


def test_hn_erasure_retraction(parity, parity_profile):
    _, h = _h(parity, parity_profile, 2)
    drop = {"B", "rho", "d"}
    for r in h.relators:
        if r.kind in ("rho-rel", "d-rel", "AB-comm"):
            kept = Word(tuple(l for l in r.word.letters if h.class_of[l.symbol] not in drop))
            assert free_reduce(kept) == Word(), r


def test_profile_validation(parity, parity_profile):
    gn, _ = _h(parity, parity_profile)
    assert validate_profile(parity_profile, gn).ok
    bad = EmbeddingProfile("bad", ("a",), ("b", "c"), "alpha", "alpha", "omega", ("q1", "q2", "q3", "q4", "q5"))
    msgs = validate_profile(bad).violations
    assert any("B has" in m for m in msgs) and any("distinct" in m for m in msgs)
    shared = EmbeddingProfile("s", ("a",), ("b",), "alpha", "delta", "omega", ("q1 q2", "q2", "q3", "q4", "q5"))
    assert not validate_profile(shared).ok
    order = EmbeddingProfile("o", ("a",), ("b",), "alpha", "delta", "omega", ("q2", "q1", "q3", "q4", "q5"))
    assert validate_profile(order).ok
    assert not validate_profile(order, gn).ok
    with pytest.raises(ProfileError):
        compile_hn(gn, order)
    clash = EmbeddingProfile("c", ("a",), ("q1",), "alpha", "delta", "omega", ("q1", "q2", "q3", "q4", "q5"))
    assert not validate_profile(clash, gn).ok


def test_gb_examples(sigma2, parity_profile):
    gb = gb_presentation(load_gp("g_a2.gp"), parity_profile)
    assert gb.copy.generators.symbols == ("b",)
    assert [str(r.word) for r in gb.copy.relators] == ["b b"]
    free = gb_presentation(make_presentation("f", ("a1", "a2"), []), sigma2)
    assert free.copy.generators.symbols == ("b1", "b2") and not free.copy.relators
    inv = gb_presentation(make_presentation("i", ("a1",), [W("~a1")]), sigma2)
    assert [r.word for r in inv.copy.relators] == [cyclic_canonical(W("~b1"), inv.copy.generators).canonical]
    with pytest.raises(ProfileError):
        gb_presentation(make_presentation("x", ("c",), []), sigma2)


def test_sigma_examples(sigma2):
    assert str(sigma_word(sigma2, W("a1 a2"))) == "z0 alpha alpha z1 a1 a2 z2 delta delta z3 omega omega z4"
    assert str(sigma_word(sigma2, W(""))) == "z0 z1 z2 z3 z4"
    with pytest.raises(ProfileError):
        sigma_word(sigma2, W("b1"))
    with pytest.raises(ProfileError):
        sigma_word(sigma2, W("a1 ~a1"))


def test_sigma_shape_failures(sigma2):
    assert validate_sigma_shape(sigma2, sigma_word(sigma2, W("a1"))) == Match(W("a1"))
    assert validate_sigma_shape(sigma2, W("z0 alpha z1 a1 delta z3 omega z4")) == NoMatch("z2 absent")
    r = validate_sigma_shape(sigma2, W("z0 alpha alpha z1 a1 z2 delta z3 omega z4"))
    assert isinstance(r, NoMatch) and r.reason.startswith("power mismatch")


def test_sigma_on_admissible_words(parity, parity_profile):
    w = sigma_word(parity_profile, W("a a"))
    aw = parity.admissible(w)
    assert str(aw) == "q1 alpha alpha q2 a a q3 delta delta q4 omega omega q5"
    assert validate_sigma_shape(parity_profile, aw) == Match(W("a a"))


def test_sigma_round_trip(sigma2):
    for u in all_reduced(["a1", "a2"], 8):
        uw = Word.parse(" ".join(u))
        s = sigma_word(sigma2, uw)
        assert len(s) == 5 + 4 * len(u)
        assert validate_sigma_shape(sigma2, s) == Match(uw)
