"""Variable elimination: one-variable derivations to modal certificates.

A derivation of a sequent whose formulas use only the variable x is
transformed into a derivation of its modal translation in a sequent
calculus over modal formulas.  Propositional and structural steps map rule
for rule.  A universal-left or existential-right step is normalized so its
instance variable is x and becomes a box-left or diamond-right step.  A
universal-right step whose context contains free x takes a detour: the
premise's free x is renamed to a fresh variable, an interpolant sentence
chi is extracted, both halves are recursively eliminated (the
interpolation md bound makes the induction on (md, height) go through),
box-right is applied over the modalized chi, and the halves are rejoined
with cut.  Existential-left is symmetric with diamond-left.
"""

from __future__ import annotations

from collections import Counter

from .interpolation import interpolate
from .proof import (
    CalculusConfig, CheckError, Node, Sequent, check_derivation, max_var_index,
    node, safe_rename, sequent,
)
from .syntax import Quant, Var, X, free_vars, render, star, substitute


def star_sequent(s: Sequent) -> Sequent:
    return sequent((star(a) for a in s.ante),
                   star(s.succ) if s.succ is not None else None)


def check_modal_derivation(d: Node, cfg: CalculusConfig) -> None:
    check_derivation(d, cfg, modal=True)


def eliminate(d: Node, cfg: CalculusConfig) -> Node:
    """Modal certificate concluding the translation of d's conclusion."""
    check_derivation(d, cfg)
    if not d.conclusion.free_vars() <= {X}:
        raise CheckError("E-NOT-ONEVAR", (),
                         "conclusion uses variables besides x")
    return _elim(d, cfg)


def _elim(d: Node, cfg: CalculusConfig) -> Node:
    if d.rule == "all=>" or d.rule == "=>ex":
        return _elim_instance(d, cfg)
    if d.rule == "=>all":
        return _elim_all_right(d, cfg)
    if d.rule == "ex=>":
        return _elim_ex_left(d, cfg)
    kw = {}
    if d.split is not None:
        kw["split"] = tuple(star(g) for g in d.split)
    if d.pi is not None:
        kw["pi"] = tuple(star(g) for g in d.pi)
    if d.k is not None:
        kw["k"] = d.k
    return node(star_sequent(d.conclusion), d.rule,
                *(_elim(p, cfg) for p in d.premises), **kw)


def _elim_instance(d: Node, cfg: CalculusConfig) -> Node:
    """all=> / =>ex with the instance variable normalized to x."""
    prem = d.premises[0]
    u = d.u
    if u is None:
        u = X if prem.conclusion.free_vars() <= {X} else _only_extra(prem)
    if u != X:
        # the conclusion must be closed here, so the premise's u is arbitrary
        prem = safe_rename(prem, u, X)
    inner = _elim(prem, cfg)
    rule = "box=>" if d.rule == "all=>" else "=>dia"
    return node(star_sequent(d.conclusion), rule, inner)


def _only_extra(prem: Node) -> Var:
    extra = prem.conclusion.free_vars() - {X}
    if len(extra) != 1:
        raise CheckError("E-NOT-ONEVAR", (), "cannot identify the instance variable")
    return next(iter(extra))


def _fresh_pair(d: Node) -> tuple[Var, Var]:
    n = max_var_index(d)
    return Var(n + 1), Var(n + 2)


def _elim_all_right(d: Node, cfg: CalculusConfig) -> Node:
    s = d.conclusion
    prem = d.premises[0]
    w = d.y
    if w is None:
        w = _recover_eigen(s.succ.body, prem.conclusion.succ)
    context_closed = all(not free_vars(a) for a in s.ante)
    if context_closed:
        if w != X:
            prem = safe_rename(prem, w, X)
        inner = _elim(prem, cfg)
        return node(star_sequent(s), "=>box", inner)
    # free x in the context: interpolate it away and rejoin with cut
    y, _ = _fresh_pair(d)
    renamed = safe_rename(prem, X, y)
    gamma = list(range(len(renamed.conclusion.ante)))
    res = interpolate(renamed, gamma, y, w, cfg)
    d1 = safe_rename(res.d1, y, X)
    d2 = safe_rename(res.d2, w, X)
    left = _elim(d1, cfg)
    boxed = node(sequent([star(res.chi)], star(s.succ)), "=>box", _elim(d2, cfg))
    return node(star_sequent(s), "cut", left, boxed)


def _elim_ex_left(d: Node, cfg: CalculusConfig) -> Node:
    s = d.conclusion
    prem = d.premises[0]
    principal, w = _ex_principal(d)
    inst = substitute(principal.body, X, w)
    ctx = s.counter() - Counter([principal])
    succ_free = free_vars(s.succ) if s.succ is not None else set()
    if not _free_of(ctx) | succ_free:
        if w != X:
            prem = safe_rename(prem, w, X)
        inner = _elim(prem, cfg)
        return node(star_sequent(s), "dia=>", inner)
    # free x in the context or succedent: interpolation detour
    y, _ = _fresh_pair(d)
    renamed = safe_rename(prem, X, y)
    gamma = [i for i, a in enumerate(renamed.conclusion.ante) if a == inst]
    res = interpolate(renamed, gamma[:1], w, y, cfg)
    d1 = safe_rename(res.d1, w, X)
    d2 = safe_rename(res.d2, y, X)
    dia = node(sequent([star(principal)], star(res.chi)), "dia=>", _elim(d1, cfg))
    right = _elim(d2, cfg)
    return node(star_sequent(s), "cut", dia, right)


def _free_of(ms: Counter):
    out = set()
    for phi in ms:
        out |= free_vars(phi)
    return out


def _ex_principal(d: Node):
    s = d.conclusion
    prem_c = d.premises[0].conclusion.counter()
    for phi in sorted(set(s.counter()), key=render):
        if not (isinstance(phi, Quant) and phi.q == "exists"):
            continue
        diff = prem_c - (s.counter() - Counter([phi]))
        if len(list(diff.elements())) != 1:
            continue
        inst = next(iter(diff))
        if d.y is not None:
            if substitute(phi.body, X, d.y) == inst:
                return phi, d.y
            continue
        try:
            return phi, _recover_eigen(phi.body, inst)
        except CheckError:
            continue
    raise CheckError("E-SCHEMA", (), "cannot identify the ex=> principal formula")


def _recover_eigen(body, inst) -> Var:
    for v in sorted(free_vars(inst) | {X}, key=lambda v: v.sort_key()):
        if substitute(body, X, v) == inst:
            return v
    raise CheckError("E-PARTITION", (), "could not recover the eigenvariable")
