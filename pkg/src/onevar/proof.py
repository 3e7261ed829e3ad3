"""Sequents, calculus configurations, derivations and checking.

A sequent is a pair (antecedent multiset, succedent) with at most one
succedent formula.  Derivations are trees of named rule applications.
`check_derivation` verifies a tree bottom-up against a configuration and
either returns quietly or raises CheckError with a machine-readable code
and the path of the offending node.

The base calculus has axioms id, (f=>), (=>e), the unit rules (e=>),
(=>f), introduction rules for -> * & | on both sides, and the four
quantifier rules.  Configurations may additionally enable contraction
(premise repeats a sub-multiset k times), left weakening and right
weakening.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Optional

from .syntax import (
    Atom, Bin, Const, E, F, FOFormula, Formula, Modal, ParseError, PropAtom,
    Quant, Var, X, free_vars, is_fo, is_modal, parse_fo, parse_modal, render,
    substitute,
)


class CheckError(ValueError):
    def __init__(self, code: str, path: tuple[int, ...], detail: str):
        super().__init__(f"{code} at {list(path)}: {detail}")
        self.code = code
        self.path = path
        self.detail = detail


# ---------------------------------------------------------------------------
# sequents

@dataclass(frozen=True)
class Sequent:
    """Antecedent multiset (canonically ordered tuple) and optional succedent."""

    ante: tuple[Formula, ...]
    succ: Optional[Formula]

    def render(self) -> str:
        left = ", ".join(render(a) for a in self.ante)
        right = render(self.succ) if self.succ is not None else ""
        return f"{left} |- {right}".strip() if left or right else "|-"

    def free_vars(self) -> set[Var]:
        out: set[Var] = set()
        for a in self.ante:
            out |= free_vars(a)
        if self.succ is not None:
            out |= free_vars(self.succ)
        return out

    def counter(self) -> Counter:
        return Counter(self.ante)

    def size(self) -> int:
        return sum(_fsize(a) for a in self.ante) + (
            _fsize(self.succ) if self.succ is not None else 0)


def _fsize(phi: Formula) -> int:
    match phi:
        case Bin(_, l, r):
            return 1 + _fsize(l) + _fsize(r)
        case Quant(_, b) | Modal(_, b):
            return 1 + _fsize(b)
    return 1


def sequent(ante, succ: Optional[Formula]) -> Sequent:
    """Build a sequent with the antecedent in canonical order."""
    return Sequent(tuple(sorted(ante, key=render)), succ)


def parse_sequent(text: str, modal: bool = False) -> Sequent:
    """Parse "G |- D" where G is comma-separated and D is empty or one formula."""
    if "|-" not in text:
        raise ParseError("E-SYNTAX", "sequent must contain |-")
    left, _, right = text.partition("|-")
    parse = parse_modal if modal else parse_fo
    ante = [parse(p) for p in left.split(",") if p.strip()]
    succ = parse(right) if right.strip() else None
    return sequent(ante, succ)


def fuse(s: Sequent) -> FOFormula:
    """The formula form of a sequent: product of antecedent |- succedent
    becomes product -> succedent, with e for the empty product and f for
    the empty succedent."""
    prod = product(s.ante)
    succ = s.succ if s.succ is not None else F
    return Bin("->", prod, succ)


def product(forms) -> Formula:
    forms = list(forms)
    if not forms:
        return E
    out = forms[0]
    for g in forms[1:]:
        out = Bin("*", out, g)
    return out


# ---------------------------------------------------------------------------
# configurations

@dataclass(frozen=True)
class CalculusConfig:
    """Enabled structural rules on top of the exchange-only base."""

    contraction: bool = False
    weak_left: bool = False
    weak_right: bool = False

    @property
    def name(self) -> str:
        return {
            (False, False, False): "FLe",
            (False, True, True): "FLew",
            (True, False, False): "FLec",
            (True, True, True): "FLewc",
        }.get((self.contraction, self.weak_left, self.weak_right), "custom")


CONFIGS = {
    "FLe": CalculusConfig(),
    "FLew": CalculusConfig(weak_left=True, weak_right=True),
    "FLec": CalculusConfig(contraction=True),
    "FLewc": CalculusConfig(contraction=True, weak_left=True, weak_right=True),
}


# ---------------------------------------------------------------------------
# derivations

@dataclass(frozen=True)
class Node:
    """One rule application; `premises` ordered left to right.

    Optional parameters: `u` instance variable for all=>/=>ex, `y`
    eigenvariable for =>all/ex=>, `split` antecedent context sent to the
    first premise of a two-premise rule, `pi` the multiset acted on by a
    structural rule, `k` the contraction exponent.
    """

    conclusion: Sequent
    rule: str
    premises: tuple["Node", ...] = ()
    u: Optional[Var] = None
    y: Optional[Var] = None
    split: Optional[tuple[Formula, ...]] = None
    pi: Optional[tuple[Formula, ...]] = None
    k: Optional[int] = None


def node(concl: Sequent, rule: str, *premises: Node, **kw) -> Node:
    return Node(concl, rule, tuple(premises), **kw)


FO_RULES = {
    "id", "f=>", "=>e", "e=>", "=>f",
    "->=>", "=>->", "*=>", "=>*", "&=>1", "&=>2", "=>&", "|=>", "=>|1", "=>|2",
    "all=>", "=>all", "ex=>", "=>ex",
    "contract", "weak-l", "weak-r",
}
MODAL_RULES = {
    "id", "f=>", "=>e", "e=>", "=>f",
    "->=>", "=>->", "*=>", "=>*", "&=>1", "&=>2", "=>&", "|=>", "=>|1", "=>|2",
    "box=>", "=>box", "dia=>", "=>dia", "cut",
    "contract", "weak-l", "weak-r",
}


# ---------------------------------------------------------------------------
# checking

@dataclass
class _Analysis:
    """How a node's premises relate to its conclusion, found during checking."""

    principal: Optional[Formula] = None
    # antecedent context going to each premise (for two-premise split rules)
    contexts: Optional[tuple[Counter, Counter]] = None


def check_derivation(d: Node, cfg: CalculusConfig, modal: bool = False) -> None:
    """Raise CheckError if the tree is not a valid derivation under cfg."""
    _check(d, cfg, modal, ())


def _err(code: str, path: tuple[int, ...], detail: str):
    raise CheckError(code, path, detail)


def _check(d: Node, cfg: CalculusConfig, modal: bool, path: tuple[int, ...]) -> None:
    analyze_node(d, cfg, modal, path)
    for i, p in enumerate(d.premises):
        _check(p, cfg, modal, path + (i,))


def analyze_node(d: Node, cfg: CalculusConfig, modal: bool,
                 path: tuple[int, ...] = ()) -> _Analysis:
    """Check one rule application (not its subtrees); return split info."""
    rules = MODAL_RULES if modal else FO_RULES
    if d.rule not in rules:
        _err("E-SCHEMA", path, f"unknown rule {d.rule!r}")
    if d.rule in ("contract",) and not cfg.contraction:
        _err("E-RULE-DISABLED", path, "contraction not enabled")
    if d.rule == "weak-l" and not cfg.weak_left:
        _err("E-RULE-DISABLED", path, "left weakening not enabled")
    if d.rule == "weak-r" and not cfg.weak_right:
        _err("E-RULE-DISABLED", path, "right weakening not enabled")
    lang_ok = is_modal if modal else is_fo
    for phi in d.conclusion.ante + ((d.conclusion.succ,) if d.conclusion.succ else ()):
        if not lang_ok(phi):
            _err("E-SCHEMA", path, f"formula {render(phi)} not in the "
                 f"{'modal' if modal else 'first-order'} language")
    try:
        return _analyze(d, cfg, modal, path)
    except CheckError:
        raise


def _expect_premises(d, n, path):
    if len(d.premises) != n:
        _err("E-SCHEMA", path, f"{d.rule} expects {n} premises, got {len(d.premises)}")


def _analyze(d: Node, cfg: CalculusConfig, modal: bool,
             path: tuple[int, ...]) -> _Analysis:
    s = d.conclusion
    c = s.counter()
    rule = d.rule

    # axioms
    if rule == "id":
        _expect_premises(d, 0, path)
        if len(s.ante) != 1 or s.succ != s.ante[0]:
            _err("E-SCHEMA", path, "id must be phi |- phi")
        return _Analysis()
    if rule == "f=>":
        _expect_premises(d, 0, path)
        if s.ante != (F,) or s.succ is not None:
            _err("E-SCHEMA", path, "f=> must be f |-")
        return _Analysis()
    if rule == "=>e":
        _expect_premises(d, 0, path)
        if s.ante or s.succ != E:
            _err("E-SCHEMA", path, "=>e must be |- e")
        return _Analysis()

    # unit rules
    if rule == "e=>":
        _expect_premises(d, 1, path)
        p = d.premises[0].conclusion
        if p.succ != s.succ or Counter(p.ante) + Counter([E]) != c:
            _err("E-SCHEMA", path, "e=> premise must drop one e from the antecedent")
        return _Analysis(principal=E)
    if rule == "=>f":
        _expect_premises(d, 1, path)
        p = d.premises[0].conclusion
        if s.succ != F or p.succ is not None or Counter(p.ante) != c:
            _err("E-SCHEMA", path, "=>f premise must have empty succedent and same antecedent")
        return _Analysis(principal=F)

    # structural rules
    if rule in ("contract", "weak-l", "weak-r"):
        return _analyze_structural(d, path)

    # two-premise context-splitting rules
    if rule == "->=>":
        _expect_premises(d, 2, path)
        return _analyze_imp_left(d, path)
    if rule == "=>*":
        _expect_premises(d, 2, path)
        return _analyze_fusion_right(d, path)

    # remaining one/two premise logical rules
    if rule == "=>->":
        _expect_premises(d, 1, path)
        if not isinstance(s.succ, Bin) or s.succ.op != "->":
            _err("E-SCHEMA", path, "=>-> needs an implication succedent")
        p = d.premises[0].conclusion
        if p.succ != s.succ.right or Counter(p.ante) != c + Counter([s.succ.left]):
            _err("E-SCHEMA", path, "=>-> premise mismatch")
        return _Analysis(principal=s.succ)
    if rule == "*=>":
        _expect_premises(d, 1, path)
        return _analyze_left_unary(
            d, path, lambda phi: isinstance(phi, Bin) and phi.op == "*",
            lambda phi: Counter([phi.left, phi.right]))
    if rule in ("&=>1", "&=>2"):
        _expect_premises(d, 1, path)
        pick = (lambda phi: Counter([phi.left])) if rule == "&=>1" else (
            lambda phi: Counter([phi.right]))
        return _analyze_left_unary(
            d, path, lambda phi: isinstance(phi, Bin) and phi.op == "&", pick)
    if rule == "=>&":
        _expect_premises(d, 2, path)
        if not isinstance(s.succ, Bin) or s.succ.op != "&":
            _err("E-SCHEMA", path, "=>& needs a conjunction succedent")
        for p, side in zip(d.premises, (s.succ.left, s.succ.right)):
            q = p.conclusion
            if q.succ != side or Counter(q.ante) != c:
                _err("E-SCHEMA", path, "=>& premise mismatch")
        return _Analysis(principal=s.succ)
    if rule == "|=>":
        _expect_premises(d, 2, path)
        return _analyze_or_left(d, path)
    if rule in ("=>|1", "=>|2"):
        _expect_premises(d, 1, path)
        if not isinstance(s.succ, Bin) or s.succ.op != "|":
            _err("E-SCHEMA", path, f"{rule} needs a disjunction succedent")
        side = s.succ.left if rule == "=>|1" else s.succ.right
        p = d.premises[0].conclusion
        if p.succ != side or Counter(p.ante) != c:
            _err("E-SCHEMA", path, f"{rule} premise mismatch")
        return _Analysis(principal=s.succ)

    if modal:
        return _analyze_modal(d, cfg, path)
    return _analyze_quant(d, path)


def _analyze_left_unary(d, path, test, premise_forms) -> _Analysis:
    """One-premise left rule replacing a principal formula by premise_forms."""
    s = d.conclusion
    c = s.counter()
    p = d.premises[0].conclusion
    if p.succ != s.succ:
        _err("E-SCHEMA", path, f"{d.rule} succedent mismatch")
    pc = Counter(p.ante)
    for phi in sorted(set(c), key=render):
        if not test(phi):
            continue
        if pc == c - Counter([phi]) + premise_forms(phi):
            return _Analysis(principal=phi)
    _err("E-SCHEMA", path, f"no principal formula fits {d.rule}")


def _analyze_or_left(d, path) -> _Analysis:
    s = d.conclusion
    c = s.counter()
    p1, p2 = (p.conclusion for p in d.premises)
    if p1.succ != s.succ or p2.succ != s.succ:
        _err("E-SCHEMA", path, "|=> succedent mismatch")
    for phi in sorted(set(c), key=render):
        if not (isinstance(phi, Bin) and phi.op == "|"):
            continue
        ctx = c - Counter([phi])
        if (Counter(p1.ante) == ctx + Counter([phi.left])
                and Counter(p2.ante) == ctx + Counter([phi.right])):
            return _Analysis(principal=phi)
    _err("E-SCHEMA", path, "no principal formula fits |=>")


def _match_split(ctx: Counter, declared, want1: Counter, path, rule) -> tuple[Counter, Counter]:
    """Verify ctx really splits as want1 + (ctx - want1); honor a declared split."""
    if declared is not None:
        decl = Counter(declared)
        if decl != want1:
            _err("E-SPLIT", path, f"declared split does not match {rule} premises")
    rest = ctx - want1
    if want1 + rest != ctx:
        _err("E-SPLIT", path, f"{rule} premises do not partition the context")
    return want1, rest


def _analyze_imp_left(d, path) -> _Analysis:
    s = d.conclusion
    c = s.counter()
    p1, p2 = (p.conclusion for p in d.premises)
    if p2.succ != s.succ:
        _err("E-SCHEMA", path, "->=> right premise succedent mismatch")
    for phi in sorted(set(c), key=render):
        if not (isinstance(phi, Bin) and phi.op == "->"):
            continue
        if p1.succ != phi.left:
            continue
        ctx = c - Counter([phi])
        g1 = Counter(p1.ante)
        g2 = Counter(p2.ante) - Counter([phi.right])
        if Counter([phi.right]) + g2 != Counter(p2.ante):
            continue
        if g1 + g2 == ctx:
            _match_split(ctx, d.split, g1, path, "->=>")
            return _Analysis(principal=phi, contexts=(g1, g2))
    _err("E-SPLIT" if any(isinstance(phi, Bin) and phi.op == "->" for phi in c)
         else "E-SCHEMA", path, "no principal formula fits ->=>")


def _analyze_fusion_right(d, path) -> _Analysis:
    s = d.conclusion
    c = s.counter()
    if not isinstance(s.succ, Bin) or s.succ.op != "*":
        _err("E-SCHEMA", path, "=>* needs a fusion succedent")
    p1, p2 = (p.conclusion for p in d.premises)
    if p1.succ != s.succ.left or p2.succ != s.succ.right:
        _err("E-SCHEMA", path, "=>* premise succedents mismatch")
    g1, g2 = Counter(p1.ante), Counter(p2.ante)
    if g1 + g2 != c:
        _err("E-SPLIT", path, "=>* premises do not partition the antecedent")
    _match_split(c, d.split, g1, path, "=>*")
    return _Analysis(principal=s.succ, contexts=(g1, g2))


def _analyze_structural(d, path) -> _Analysis:
    s = d.conclusion
    c = s.counter()
    _expect_premises(d, 1, path)
    p = d.premises[0].conclusion
    if p.succ != s.succ and d.rule != "weak-r":
        _err("E-SCHEMA", path, f"{d.rule} succedent mismatch")
    if d.rule == "weak-l":
        if p.succ != s.succ:
            _err("E-SCHEMA", path, "weak-l succedent mismatch")
        pi = Counter(d.pi) if d.pi else c - Counter(p.ante)
        if Counter(p.ante) + pi != c or not pi:
            _err("E-SCHEMA", path, "weak-l premise must drop a nonempty sub-multiset")
        return _Analysis()
    if d.rule == "weak-r":
        if s.succ is None or p.succ is not None or Counter(p.ante) != c:
            _err("E-SCHEMA", path, "weak-r premise must have empty succedent")
        return _Analysis()
    # contraction: premise replaces a sub-multiset Pi by Pi^k, k >= 2
    k = d.k if d.k else 2
    if k < 2:
        _err("E-SCHEMA", path, "contraction exponent must be at least 2")
    pc = Counter(p.ante)
    if d.pi is not None:
        pi = Counter(d.pi)
        if not pi or c - pi + _times(pi, k) != pc or pi + (c - pi) != c:
            _err("E-SCHEMA", path, "contraction premise mismatch with declared Pi")
        return _Analysis()
    extra = pc - c
    if not extra or c - _scale_down(extra, k) + _times(_scale_down(extra, k), k) != pc:
        # fall back: search single-formula Pi
        for phi in sorted(set(c), key=render):
            pi = Counter([phi])
            if c - pi + _times(pi, k) == pc:
                return _Analysis()
        _err("E-SCHEMA", path, "contraction premise mismatch")
    return _Analysis()


def _times(ms: Counter, k: int) -> Counter:
    return Counter({phi: n * k for phi, n in ms.items()})


def _scale_down(extra: Counter, k: int) -> Counter:
    # extra = Pi^(k-1), recover Pi if divisible
    out = Counter()
    for phi, n in extra.items():
        if n % (k - 1):
            return Counter({None: 1})  # cannot divide; caller will fail
        out[phi] = n // (k - 1)
    return out


def _analyze_quant(d, path) -> _Analysis:
    s = d.conclusion
    c = s.counter()
    rule = d.rule
    if rule == "all=>":
        _expect_premises(d, 1, path)
        p = d.premises[0].conclusion
        if p.succ != s.succ:
            _err("E-SCHEMA", path, "all=> succedent mismatch")
        for phi in sorted(set(c), key=render):
            if not (isinstance(phi, Quant) and phi.q == "forall"):
                continue
            for u in _inst_candidates(d.u, p, s):
                inst = substitute(phi.body, X, u)
                if Counter(p.ante) == c - Counter([phi]) + Counter([inst]):
                    # side condition: if the conclusion has any free variable,
                    # u must be free in the conclusion
                    if s.free_vars() and u not in s.free_vars():
                        _err("E-INSTVAR", path,
                             f"instance variable {u} not free in the conclusion")
                    return _Analysis(principal=phi)
        _err("E-SCHEMA", path, "no principal formula fits all=>")
    if rule == "=>ex":
        _expect_premises(d, 1, path)
        p = d.premises[0].conclusion
        if not (isinstance(s.succ, Quant) and s.succ.q == "exists"):
            _err("E-SCHEMA", path, "=>ex needs an existential succedent")
        if Counter(p.ante) != c:
            _err("E-SCHEMA", path, "=>ex antecedent mismatch")
        for u in _inst_candidates(d.u, p, s):
            if p.succ == substitute(s.succ.body, X, u):
                if s.free_vars() and u not in s.free_vars():
                    _err("E-INSTVAR", path,
                         f"instance variable {u} not free in the conclusion")
                return _Analysis(principal=s.succ)
        _err("E-SCHEMA", path, "=>ex premise is not an instance of the succedent body")
    if rule == "=>all":
        _expect_premises(d, 1, path)
        p = d.premises[0].conclusion
        if not (isinstance(s.succ, Quant) and s.succ.q == "forall"):
            _err("E-SCHEMA", path, "=>all needs a universal succedent")
        if Counter(p.ante) != c:
            _err("E-SCHEMA", path, "=>all antecedent mismatch")
        for y in _eigen_candidates(d.y, p.succ, s.succ.body):
            if p.succ == substitute(s.succ.body, X, y):
                if y in s.free_vars():
                    _err("E-EIGENVAR", path,
                         f"eigenvariable {y} occurs free in the conclusion")
                return _Analysis(principal=s.succ)
        _err("E-SCHEMA", path, "=>all premise is not an instance of the succedent body")
    if rule == "ex=>":
        _expect_premises(d, 1, path)
        p = d.premises[0].conclusion
        if p.succ != s.succ:
            _err("E-SCHEMA", path, "ex=> succedent mismatch")
        for phi in sorted(set(c), key=render):
            if not (isinstance(phi, Quant) and phi.q == "exists"):
                continue
            ctx = c - Counter([phi])
            for psi in sorted(set(Counter(p.ante) - ctx), key=render):
                for y in _eigen_candidates(d.y, psi, phi.body):
                    if (psi == substitute(phi.body, X, y)
                            and Counter(p.ante) == ctx + Counter([psi])):
                        if y in s.free_vars():
                            _err("E-EIGENVAR", path,
                                 f"eigenvariable {y} occurs free in the conclusion")
                        return _Analysis(principal=phi)
        _err("E-SCHEMA", path, "no principal formula fits ex=>")
    _err("E-SCHEMA", path, f"unknown quantifier rule {rule}")


def _inst_candidates(declared, premise: Sequent, concl: Sequent):
    if declared is not None:
        return [declared]
    cands = sorted(premise.free_vars() | concl.free_vars() | {X},
                   key=lambda v: v.sort_key())
    return cands


def _eigen_candidates(declared, inst_formula, body):
    if declared is not None:
        return [declared]
    if inst_formula is None:
        return []
    # the eigenvariable is a free variable of the instance, or x, or (when the
    # body is vacuous in x) any fresh variable at all
    cands = sorted(free_vars(inst_formula) | {X}, key=lambda v: v.sort_key())
    used = {v.index for v in free_vars(inst_formula) | free_vars(body)
            if v.index is not None}
    cands.append(Var(max(used, default=0) + 1))
    return cands


def _analyze_modal(d, cfg, path) -> _Analysis:
    from .syntax import is_modalized
    s = d.conclusion
    c = s.counter()
    rule = d.rule
    if rule == "box=>":
        _expect_premises(d, 1, path)
        p = d.premises[0].conclusion
        if p.succ != s.succ:
            _err("E-SCHEMA", path, "box=> succedent mismatch")
        for phi in sorted(set(c), key=render):
            if not (isinstance(phi, Modal) and phi.m == "box"):
                continue
            if Counter(p.ante) == c - Counter([phi]) + Counter([phi.body]):
                return _Analysis(principal=phi)
        _err("E-SCHEMA", path, "no principal formula fits box=>")
    if rule == "=>dia":
        _expect_premises(d, 1, path)
        p = d.premises[0].conclusion
        if not (isinstance(s.succ, Modal) and s.succ.m == "dia"):
            _err("E-SCHEMA", path, "=>dia needs a <> succedent")
        if p.succ != s.succ.body or Counter(p.ante) != c:
            _err("E-SCHEMA", path, "=>dia premise mismatch")
        return _Analysis(principal=s.succ)
    if rule == "=>box":
        _expect_premises(d, 1, path)
        p = d.premises[0].conclusion
        if not (isinstance(s.succ, Modal) and s.succ.m == "box"):
            _err("E-SCHEMA", path, "=>box needs a [] succedent")
        if p.succ != s.succ.body or Counter(p.ante) != c:
            _err("E-SCHEMA", path, "=>box premise mismatch")
        if not all(is_modalized(a) for a in s.ante):
            _err("E-MODALIZED", path, "=>box requires a fully modalized antecedent")
        return _Analysis(principal=s.succ)
    if rule == "dia=>":
        _expect_premises(d, 1, path)
        p = d.premises[0].conclusion
        if p.succ != s.succ:
            _err("E-SCHEMA", path, "dia=> succedent mismatch")
        if s.succ is not None and not is_modalized(s.succ):
            _err("E-MODALIZED", path, "dia=> requires a modalized succedent")
        for phi in sorted(set(c), key=render):
            if not (isinstance(phi, Modal) and phi.m == "dia"):
                continue
            if Counter(p.ante) == c - Counter([phi]) + Counter([phi.body]):
                if not all(is_modalized(a) for a in (c - Counter([phi])).elements()):
                    _err("E-MODALIZED", path, "dia=> requires a modalized context")
                return _Analysis(principal=phi)
        _err("E-SCHEMA", path, "no principal formula fits dia=>")
    if rule == "cut":
        _expect_premises(d, 2, path)
        p1, p2 = (p.conclusion for p in d.premises)
        if p1.succ is None:
            _err("E-SCHEMA", path, "cut left premise needs a succedent")
        cut_formula = p1.succ
        if p2.succ != s.succ:
            _err("E-SCHEMA", path, "cut right premise succedent mismatch")
        g2 = Counter(p2.ante) - Counter([cut_formula])
        if g2 + Counter([cut_formula]) != Counter(p2.ante):
            _err("E-SCHEMA", path, "cut formula missing from right premise")
        if Counter(p1.ante) + g2 != c:
            _err("E-SPLIT", path, "cut premises do not partition the antecedent")
        return _Analysis(principal=cut_formula, contexts=(Counter(p1.ante), g2))
    _err("E-SCHEMA", path, f"unknown modal rule {rule}")


# ---------------------------------------------------------------------------
# metrics

def height(d: Node) -> int:
    if not d.premises:
        return 1
    return 1 + max(height(p) for p in d.premises)


def modal_depth(d: Node) -> int:
    """Maximum number of =>all / ex=> applications along any branch."""
    here = 1 if d.rule in ("=>all", "ex=>") else 0
    if not d.premises:
        return here
    return here + max(modal_depth(p) for p in d.premises)


def rules_used(d: Node) -> set[str]:
    out = {d.rule}
    for p in d.premises:
        out |= rules_used(p)
    return out


# ---------------------------------------------------------------------------
# renaming

def rename_free(d: Node, frm: Var, to: Var) -> Node:
    """Rename a free variable throughout a derivation.

    Raises CheckError E-NOT-FRESH if `to` already occurs anywhere, since
    that could capture or break side conditions.
    """
    if _var_occurs(d, to):
        raise CheckError("E-NOT-FRESH", (), f"{to} already occurs in the derivation")
    return _rename(d, frm, to)


def _var_occurs(d: Node, v: Var) -> bool:
    if v in d.conclusion.free_vars() or d.u == v or d.y == v:
        return True
    return any(_var_occurs(p, v) for p in d.premises)


def _rename(d: Node, frm: Var, to: Var) -> Node:
    s = d.conclusion
    new_s = sequent((substitute(a, frm, to) for a in s.ante),
                    substitute(s.succ, frm, to) if s.succ is not None else None)
    return replace(
        d,
        conclusion=new_s,
        premises=tuple(_rename(p, frm, to) for p in d.premises),
        u=to if d.u == frm else d.u,
        y=to if d.y == frm else d.y,
        split=tuple(substitute(g, frm, to) for g in d.split) if d.split else d.split,
        pi=tuple(substitute(g, frm, to) for g in d.pi) if d.pi else d.pi,
    )


def max_var_index(d: Node) -> int:
    """Largest yN index occurring in the derivation, 0 if none."""
    out = 0
    for v in d.conclusion.free_vars() | {d.u, d.y} - {None}:
        if v is not None and v.index is not None:
            out = max(out, v.index)
    for p in d.premises:
        out = max(out, max_var_index(p))
    return out


def safe_rename(d: Node, frm: Var, to: Var) -> Node:
    """Rename frm to to, first refreshing any eigenvariable equal to `to`."""
    d = _refresh_eigen(d, to, Var(max(max_var_index(d), to.index or 0) + 1))
    return _rename(d, frm, to)


def _refresh_eigen(d: Node, avoid: Var, fresh: Var) -> Node:
    prems = tuple(_refresh_eigen(p, avoid, fresh) for p in d.premises)
    d = replace(d, premises=prems)
    if d.rule in ("=>all", "ex=>") and d.y == avoid:
        new_prem = _rename(d.premises[0], avoid, fresh)
        d = replace(d, premises=(new_prem,), y=fresh)
    return d


# ---------------------------------------------------------------------------
# serialization

def to_json(d: Node) -> dict:
    out: dict = {"rule": d.rule, "conclusion": d.conclusion.render()}
    params: dict = {}
    if d.u is not None:
        params["u"] = str(d.u)
    if d.y is not None:
        params["y"] = str(d.y)
    if d.split is not None:
        params["split"] = [render(g) for g in d.split]
    if d.pi is not None:
        params["pi"] = [render(g) for g in d.pi]
    if d.k is not None:
        params["k"] = d.k
    if params:
        out["params"] = params
    if d.premises:
        out["premises"] = [to_json(p) for p in d.premises]
    return out


def _parse_var_str(s: str) -> Var:
    if s == "x":
        return X
    m = s.strip()
    if m.startswith("y") and m[1:].isdigit():
        return Var(int(m[1:]))
    raise ParseError("E-SYNTAX", f"not a variable: {s!r}")


def from_json(obj: dict, modal: bool = False) -> Node:
    try:
        rule = obj["rule"]
        concl = parse_sequent(obj["conclusion"], modal=modal)
    except (KeyError, TypeError) as exc:
        raise CheckError("E-SCHEMA", (), f"malformed derivation object: {exc}")
    params = obj.get("params", {})
    parse = parse_modal if modal else parse_fo
    kw: dict = {}
    if "u" in params:
        kw["u"] = _parse_var_str(params["u"])
    if "y" in params:
        kw["y"] = _parse_var_str(params["y"])
    if "split" in params:
        kw["split"] = tuple(parse(g) for g in params["split"])
    if "pi" in params:
        kw["pi"] = tuple(parse(g) for g in params["pi"])
    if "k" in params:
        kw["k"] = int(params["k"])
    premises = tuple(from_json(p, modal=modal) for p in obj.get("premises", []))
    return Node(concl, rule, premises, **kw)


def dump(d: Node) -> str:
    return json.dumps(to_json(d), indent=2)


def load(text: str, modal: bool = False) -> Node:
    return from_json(json.loads(text), modal=modal)
