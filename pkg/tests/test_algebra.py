"""Finite algebras: validation, subalgebras, expansions, equations."""

import pytest

from onevar.algebra import (
    AlgebraError, BUILTIN_EQUATIONS, CATALOG_NAMES, box_image,
    catalog_mlattices, countermodel_search, enumerate_lattices, eval_equation,
    eval_term, expand_from_subalgebra, from_json, functional_power,
    load_catalog, parse_equation, relatively_complete_subalgebras,
    subuniverses, to_json, validate, validate_mlattice_fully,
)


def test_catalog_loads_and_validates():
    sizes = {"chain2": 2, "godel3": 3, "l3m": 3, "diamond": 4, "bool4": 4}
    for name in CATALOG_NAMES:
        A = load_catalog(name)
        assert A.size == sizes[name]


def test_validation_catches_broken_tables():
    A = load_catalog("chain2")
    obj = to_json(A)
    obj["tables"]["&"] = [[0, 1], [0, 1]]  # not commutative
    B = from_json(obj)
    with pytest.raises(AlgebraError) as e:
        validate(B, "LAT")
    assert e.value.code == "E-VIOLATION"
    assert e.value.witness is not None


def test_lukasiewicz_example():
    l3 = load_catalog("l3m")
    eq = parse_equation("<>v0 * <>v0 ~ <>(v0*v0)")
    # at the middle element: diamond lifts it to the top, squaring kills it
    assert eval_equation(l3, eq, {0: 1}) == (2, 0)
    hit = eval_equation(l3, eq)
    assert hit == {0: 1}
    assert eval_equation(l3, BUILTIN_EQUATIONS["constant-domain"]) is None


def test_builtin_axioms_hold_on_l3m():
    l3 = load_catalog("l3m")
    for name, eq in BUILTIN_EQUATIONS.items():
        if name == "dia-multiplicative":
            continue
        assert eval_equation(l3, eq) is None, name
    validate_mlattice_fully(l3, fle=True)


def test_subuniverses_and_relative_completeness():
    l3 = load_catalog("l3m")
    assert subuniverses(l3) == [[0, 1, 2], [0, 2]]
    assert relatively_complete_subalgebras(l3) == [[0, 1, 2], [0, 2]]
    diamond = load_catalog("diamond")
    subs = subuniverses(diamond)
    assert [0, 1, 2, 3] in subs and len(subs) == 12
    for sub in relatively_complete_subalgebras(diamond):
        M = expand_from_subalgebra(diamond, sub)
        assert box_image(M) == sub


def test_expand_box_image_inverse():
    for name in ("chain2", "godel3", "bool4"):
        A = load_catalog(name)
        for sub in relatively_complete_subalgebras(A):
            M = expand_from_subalgebra(A, sub)
            validate(M, "M-FLE")
            assert box_image(M) == sub


def test_expand_rejects_incomplete_subuniverse():
    diamond = load_catalog("diamond")
    bad = next(s for s in subuniverses(diamond)
               if s not in relatively_complete_subalgebras(diamond))
    with pytest.raises(AlgebraError) as e:
        expand_from_subalgebra(diamond, bad)
    assert e.value.code == "E-NOT-RELCOMPLETE"


def test_l3m_modalities_match_their_subalgebra():
    # the shipped box/dia come from the two-element Boolean subalgebra
    l3 = load_catalog("l3m")
    assert box_image(l3) == [0, 2]
    M = expand_from_subalgebra(l3, [0, 2])
    assert M.box == l3.box and M.dia == l3.dia


def test_functional_power():
    P = functional_power(load_catalog("chain2"), 2)
    assert P.size == 4
    validate(P, "M-FLE")
    # box is the constant meet, dia the constant join, encoded (a0, a1)
    assert P.box == (0, 0, 0, 3)
    assert P.dia == (0, 3, 3, 3)


def test_power_validates_fully():
    for name in ("chain2", "godel3", "l3m"):
        for w in (1, 2):
            P = functional_power(load_catalog(name), w)
            validate_mlattice_fully(P, fle=True)


def test_eval_term_scalar_matches_vectorized():
    l3 = load_catalog("l3m")
    eq = parse_equation("[](v0 -> []v1) ~ <>v0 -> []v1")
    for a in range(3):
        for b in range(3):
            lv, rv = eval_equation(l3, eq, {0: a, 1: b})
            assert lv == eval_term(l3, eq.lhs, {0: a, 1: b})
            assert lv == rv


def test_quasi_equation_premise_filtering():
    l3 = load_catalog("l3m")
    assert eval_equation(l3, BUILTIN_EQUATIONS["L5_box"]) is None
    assert eval_equation(l3, BUILTIN_EQUATIONS["L5_dia"]) is None


def test_countermodel_search_hits_l3m():
    eq = parse_equation("<>v0 * <>v0 ~ <>(v0*v0)")
    found = countermodel_search(eq)
    assert found is not None
    M, hit = found
    lv, rv = eval_equation(M, eq, hit)
    assert lv != rv


def test_countermodel_search_none_for_theorems():
    assert countermodel_search(parse_equation("v0 & v1 ~ v1 & v0")) is None
    assert countermodel_search(BUILTIN_EQUATIONS["L2_box"]) is None


def test_leq_sugar():
    eq = parse_equation("v0 & v1 <= v0")
    assert countermodel_search(eq) is None


def test_enumerate_lattices_counts():
    # chains are unique up to size 3; two order types at 4
    assert [len(enumerate_lattices(n)) for n in (1, 2, 3)] == [1, 1, 1]
    four = enumerate_lattices(4)
    assert len(four) >= 2
    for L in four:
        validate(L, "LAT")


def test_catalog_mlattices_all_validate():
    for M in catalog_mlattices():
        validate(M, "M-LAT" if not M.has("*") else "M-FLE")
