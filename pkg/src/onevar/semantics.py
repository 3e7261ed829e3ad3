"""Finite structures for one-variable first-order formulas.

A structure is a finite algebra together with an index set S = {0..m-1}
and an interpretation of each predicate as a function S -> A.  Formulas
with free variables among {x} evaluate to functions S -> A; quantifiers
produce constant functions (the meet or join over all of S, which exists
because finite lattices are complete, so evaluation is total).

`check_bridge` confirms that evaluating the modal translation of a formula
in the functional power A^|S| agrees with the first-order evaluation.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import algebra as alg
from .algebra import AlgebraError, FiniteAlgebra
from .syntax import (
    Atom, Bin, Const, FOFormula, Quant, atoms_of, star,
)


@dataclass(frozen=True)
class Structure:
    algebra: FiniteAlgebra
    S: int  # index set 0..S-1
    I: dict  # predicate index -> tuple of values, length S

    def interp(self, pred: int) -> tuple[int, ...]:
        if pred not in self.I:
            raise AlgebraError("E-UNINTERPRETED", f"P{pred} is not interpreted")
        return self.I[pred]


def structure(algebra: FiniteAlgebra, S: int, I: dict) -> Structure:
    frozen = {p: tuple(v) for p, v in I.items()}
    for p, v in frozen.items():
        if len(v) != S or not all(0 <= x < algebra.size for x in v):
            raise AlgebraError("E-UNINTERPRETED", f"interpretation of P{p} is not a map S->A")
    return Structure(algebra, S, frozen)


def from_json(obj: dict, base: Optional[str] = None) -> Structure:
    ref = obj["algebra"]
    if ref in alg.CATALOG_NAMES:
        A = alg.load_catalog(ref)
    else:
        path = ref if base is None else os.path.join(base, ref)
        A = alg.load_file(path)
    I = {}
    for key, values in obj.get("I", {}).items():
        if not key.startswith("P") or not key[1:].isdigit():
            raise AlgebraError("E-UNINTERPRETED", f"bad predicate key {key!r}")
        I[int(key[1:])] = tuple(values)
    return structure(A, obj["S"], I)


def load_file(path: str) -> Structure:
    with open(path) as fh:
        return from_json(json.load(fh), base=os.path.dirname(path))


# ---------------------------------------------------------------------------
# evaluation

def eval_fo(st: Structure, phi: FOFormula) -> tuple[int, ...]:
    """The inductive evaluation; the tuple is indexed by the value of x."""
    A = st.algebra
    match phi:
        case Atom(p, _):
            return st.interp(p)
        case Const(nm):
            return (A.app(nm),) * st.S
        case Bin(op, l, r):
            lv = eval_fo(st, l)
            rv = eval_fo(st, r)
            return tuple(A.app(op, a, b) for a, b in zip(lv, rv))
        case Quant(q, b):
            bv = eval_fo(st, b)
            fold = A.meet if q == "forall" else A.join
            acc = bv[0]
            for v in bv[1:]:
                acc = fold(acc, v)
            return (acc,) * st.S
    raise AlgebraError("E-UNINTERPRETED", f"not a first-order formula: {phi!r}")


def check_bridge(st: Structure, phi: FOFormula) -> bool:
    """Modal evaluation of the translation in A^|S| equals eval_fo."""
    P = alg.functional_power(st.algebra, st.S)
    n = st.algebra.size

    def encode(t):
        out = 0
        for v in t:
            out = out * n + v
        return out

    assignment = {p: encode(st.interp(p)) for p in atoms_of(phi)}
    modal_value = alg.eval_term(P, star(phi), assignment)
    return modal_value == encode(eval_fo(st, phi))


# ---------------------------------------------------------------------------
# first-order equations and countermodel search

@dataclass(frozen=True)
class FOEquation:
    lhs: FOFormula
    rhs: FOFormula

    def holds_in(self, st: Structure) -> bool:
        return eval_fo(st, self.lhs) == eval_fo(st, self.rhs)

    def atoms(self) -> set[int]:
        return atoms_of(self.lhs) | atoms_of(self.rhs)

    def symbols_ok(self, A: FiniteAlgebra) -> bool:
        return _symbols(self.lhs) | _symbols(self.rhs) <= {nm for nm, _ in A.signature}


def _symbols(phi: FOFormula) -> set[str]:
    match phi:
        case Const(nm):
            return {nm}
        case Bin(op, l, r):
            return {op} | _symbols(l) | _symbols(r)
        case Quant(_, b):
            return _symbols(b)
    return set()


def leq_fo(lhs: FOFormula, rhs: FOFormula) -> FOEquation:
    return FOEquation(Bin("&", lhs, rhs), lhs)


def parse_fo_equation(text: str) -> FOEquation:
    from .syntax import ParseError, parse_fo
    if "~" in text:
        l, _, r = text.partition("~")
        return FOEquation(parse_fo(l), parse_fo(r))
    if "<=" in text:
        l, _, r = text.partition("<=")
        return leq_fo(parse_fo(l), parse_fo(r))
    raise ParseError("E-SYNTAX", "equation must contain ~ or <=")


SEARCH_CAP = 2_000_000


def bounded_fo_countermodel(assumptions: list[FOEquation], goal: FOEquation,
                            max_S: int = 3,
                            scope: Optional[list[str]] = None) -> Optional[Structure]:
    """First catalog structure satisfying every assumption and refuting the
    goal, scanning algebras in catalog order, then |S| ascending, then
    interpretations lexicographically."""
    names = list(scope) if scope else list(alg.CATALOG_NAMES)
    preds = sorted(goal.atoms() | set().union(*(e.atoms() for e in assumptions))
                   if assumptions else goal.atoms())
    eqs = list(assumptions) + [goal]
    for name in names:
        A = alg.load_catalog(name)
        if not all(e.symbols_ok(A) for e in eqs):
            continue
        for m in range(1, max_S + 1):
            hit = _scan(A, m, preds, assumptions, goal)
            if hit is not None:
                return hit
    return None


def _scan(A: FiniteAlgebra, m: int, preds: list[int],
          assumptions: list[FOEquation], goal: FOEquation) -> Optional[Structure]:
    n = A.size
    k = len(preds)
    count = n ** (m * k)
    if count * max(m, 1) > SEARCH_CAP:
        raise AlgebraError("E-CAP", f"{count} interpretations exceed the search cap")
    if k == 0:
        st = structure(A, m, {})
        if all(e.holds_in(st) for e in assumptions) and not goal.holds_in(st):
            return st
        return None
    mask = _ok_mask(A, m, preds, assumptions, goal, count)
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return None
    return _decode(A, m, preds, int(idx[0]))


def _decode(A: FiniteAlgebra, m: int, preds: list[int], i: int) -> Structure:
    n = A.size
    k = len(preds)
    digits = []
    for pos in range(m * k):
        digits.append(i // n ** (m * k - 1 - pos) % n)
    I = {p: tuple(digits[j * m:(j + 1) * m]) for j, p in enumerate(preds)}
    return structure(A, m, I)


def _ok_mask(A, m, preds, assumptions, goal, count):
    cols = {p: j for j, p in enumerate(preds)}
    good = np.ones(count, dtype=bool)
    for e in assumptions:
        lv = _vec(A, e.lhs, cols, m, count)
        rv = _vec(A, e.rhs, cols, m, count)
        good &= np.all(lv == rv, axis=1)
    lv = _vec(A, goal.lhs, cols, m, count)
    rv = _vec(A, goal.rhs, cols, m, count)
    good &= ~np.all(lv == rv, axis=1)
    return good


def _vec(A: FiniteAlgebra, phi: FOFormula, cols: dict[int, int], m: int,
         count: int) -> np.ndarray:
    """Value of phi in every interpretation at once, shape (count, m)."""
    n = A.size
    k = len(cols)
    match phi:
        case Atom(p, _):
            j = cols[p]
            out = np.empty((count, m), dtype=np.int64)
            for s in range(m):
                pos = j * m + s
                out[:, s] = (np.arange(count) // n ** (m * k - 1 - pos)) % n
            return out
        case Const(nm):
            return np.full((count, m), A.app(nm), dtype=np.int64)
        case Bin(op, l, r):
            tab = np.array(A.table(op), dtype=np.int64)
            return tab[_vec(A, l, cols, m, count), _vec(A, r, cols, m, count)]
        case Quant(q, b):
            tab = np.array(A.table("&" if q == "forall" else "|"), dtype=np.int64)
            bv = _vec(A, b, cols, m, count)
            acc = bv[:, 0]
            for s in range(1, m):
                acc = tab[acc, bv[:, s]]
            return np.repeat(acc[:, None], m, axis=1)
    raise AlgebraError("E-UNINTERPRETED", f"not a first-order formula: {phi!r}")


def to_json(st: Structure) -> dict:
    return {
        "algebra": st.algebra.name or alg.to_json(st.algebra),
        "S": st.S,
        "I": {f"P{p}": list(v) for p, v in sorted(st.I.items())},
    }


# ---------------------------------------------------------------------------
# sequent validity over structures (used by the soundness cross-checks)

def sequent_holds(st: Structure, seq) -> bool:
    """Product of the antecedent <= succedent at every point of S."""
    from .proof import product
    A = st.algebra
    lv = eval_fo(st, product(seq.ante))
    rv = eval_fo(st, seq.succ) if seq.succ is not None else (A.app("f"),) * st.S
    return all(A.leq(a, b) for a, b in zip(lv, rv))


def modal_sequent_valid(P: FiniteAlgebra, seq) -> bool:
    """Fused modal sequent holds under every evaluation into P."""
    from .proof import product
    lhs = product(seq.ante)
    rhs = seq.succ if seq.succ is not None else Const("f")
    eq = alg.TermEquation(Bin("&", lhs, rhs), lhs)
    return alg.eval_equation(P, eq) is None
