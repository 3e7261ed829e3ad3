"""Derivation checker: corpus, mutants, serialization, renaming."""

import json

import pytest

from corpus import FO_CORPUS, MODAL_CORPUS, MUTANTS
from onevar.proof import (
    CONFIGS, CheckError, check_derivation, dump, fuse, height, load,
    max_var_index, modal_depth, node, parse_sequent, rename_free, rules_used,
    safe_rename, sequent,
)
from onevar.syntax import Var, X, parse_fo, render

ALL_FO_RULES = {
    "id", "f=>", "=>e", "e=>", "=>f", "->=>", "=>->", "*=>", "=>*",
    "&=>1", "&=>2", "=>&", "|=>", "=>|1", "=>|2",
    "all=>", "=>all", "ex=>", "=>ex", "contract", "weak-l", "weak-r",
}
ALL_MODAL_RULES = {"box=>", "=>box", "dia=>", "=>dia", "cut"}


@pytest.mark.parametrize("name,cfg,d", FO_CORPUS, ids=[c[0] for c in FO_CORPUS])
def test_corpus_accepted(name, cfg, d):
    check_derivation(d, CONFIGS[cfg])


@pytest.mark.parametrize("name,cfg,d", MODAL_CORPUS,
                         ids=[c[0] for c in MODAL_CORPUS])
def test_modal_corpus_accepted(name, cfg, d):
    check_derivation(d, CONFIGS[cfg], modal=True)


def test_corpus_covers_every_rule():
    used = set()
    for _, _, d in FO_CORPUS + MODAL_CORPUS:
        used |= rules_used(d)
    assert ALL_FO_RULES <= used
    assert ALL_MODAL_RULES <= used


@pytest.mark.parametrize("name,cfg,d,modal,code", MUTANTS,
                         ids=[m[0] for m in MUTANTS])
def test_mutants_rejected(name, cfg, d, modal, code):
    with pytest.raises(CheckError) as e:
        check_derivation(d, CONFIGS[cfg], modal=modal)
    assert e.value.code == code


def test_sequent_parsing_and_fuse():
    s = parse_sequent("P0(x), P0(x) -> P1(x) |- P1(x)")
    assert len(s.ante) == 2 and s.succ == parse_fo("P1(x)")
    assert render(fuse(s)) == "P0(x) * (P0(x) -> P1(x)) -> P1(x)"
    empty = parse_sequent("f |-")
    assert empty.succ is None
    assert render(fuse(empty)) == "f -> f"


def test_json_round_trip():
    for _, _, d in FO_CORPUS:
        assert load(dump(d)) == d
    for _, _, d in MODAL_CORPUS:
        assert load(dump(d), modal=True) == d
    # byte determinism
    d = FO_CORPUS[7][2]
    assert dump(d) == dump(load(dump(d)))
    json.loads(dump(d))


def test_measures():
    dd = dict((n, d) for n, _, d in FO_CORPUS)
    assert height(dd["id"]) == 1
    assert height(dd["forall-right"]) == 3
    assert modal_depth(dd["forall-right"]) == 1
    assert modal_depth(dd["exists-left"]) == 1
    assert modal_depth(dd["modus-ponens"]) == 0


def test_rename_free():
    d = dict((n, d) for n, _, d in FO_CORPUS)["forall-left"]
    r = rename_free(d, Var(1), Var(5))
    check_derivation(r, CONFIGS["FLe"])
    assert "y5" in r.conclusion.render()
    with pytest.raises(CheckError) as e:
        rename_free(d, Var(1), Var(1))
    assert e.value.code == "E-NOT-FRESH"


def test_safe_rename_refreshes_eigenvariables():
    d = dict((n, d) for n, _, d in FO_CORPUS)["forall-right"]
    # y1 is the eigenvariable; renaming some other variable onto it must
    # first move the eigenvariable out of the way
    r = safe_rename(d, Var(7), Var(7))  # no-op path
    check_derivation(r, CONFIGS["FLe"])
    assert max_var_index(d) >= 1
