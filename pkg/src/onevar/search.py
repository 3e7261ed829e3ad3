"""Backward proof search.

Without contraction every rule read bottom-up strictly shrinks the symbol
count, so depth-first search with failure memoization is a decision
procedure: exhaustion is a genuine refutation.  With contraction enabled
the premise of the duplication move grows, so the search caps formula
multiplicities and the path length; exhaustion then only reports unknown.

The search is deterministic: rule instances are tried in a fixed order and
all multiset enumerations follow the canonical antecedent order.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .proof import CalculusConfig, Node, Sequent, node, sequent
from .syntax import (
    Bin, Const, E, F, Quant, Var, X, free_vars, render, substitute,
)


@dataclass
class Budget:
    nodes: int = 200_000
    depth: int = 60
    copies: int = 3  # multiplicity cap per formula under contraction


@dataclass
class SearchResult:
    status: str  # "proved" | "refuted" | "unknown"
    derivation: Optional[Node] = None
    diagnostics: str = ""

    @property
    def proved(self) -> bool:
        return self.status == "proved"


class _Exhausted(Exception):
    pass


def prove(goal: Sequent, cfg: CalculusConfig,
          budget: Optional[Budget] = None) -> SearchResult:
    budget = budget or Budget()
    st = _State(cfg, budget)
    try:
        d = st.search(goal, (), 0)
    except _Exhausted:
        return SearchResult("unknown", diagnostics="E-BUDGET: node budget exhausted")
    if d is not None:
        return SearchResult("proved", d)
    if st.hit_limit:
        return SearchResult("unknown", diagnostics="E-BUDGET: depth or copy cap reached")
    if cfg.contraction:
        # exhaustion under the caps is not a complete search
        return SearchResult("unknown", diagnostics="E-BUDGET: capped search exhausted")
    return SearchResult("refuted", diagnostics="complete search exhausted")


class _State:
    def __init__(self, cfg: CalculusConfig, budget: Budget):
        self.cfg = cfg
        self.budget = budget
        self.nodes = 0
        self.hit_limit = False
        self.failed: set[Sequent] = set()
        self.proved: dict[Sequent, Node] = {}

    def search(self, s: Sequent, path: tuple[Sequent, ...], depth: int) -> Optional[Node]:
        self.nodes += 1
        if self.nodes > self.budget.nodes:
            raise _Exhausted()
        if s in self.proved:
            return self.proved[s]
        if s in self.failed:
            return None
        if depth > self.budget.depth:
            self.hit_limit = True
            return None
        if self.cfg.contraction and s in path:
            return None
        path = path + (s,)
        for rule, premises, kw in _moves(s, self.cfg, self.budget):
            subs = []
            ok = True
            for p in premises:
                d = self.search(p, path, depth + 1)
                if d is None:
                    ok = False
                    break
                subs.append(d)
            if ok:
                out = node(s, rule, *subs, **kw)
                self.proved[s] = out
                return out
        if not self.cfg.contraction:
            self.failed.add(s)
        return None


def _moves(s: Sequent, cfg: CalculusConfig, budget: Budget) -> Iterator[tuple]:
    """Applicable rule instances bottom-up, in a fixed order."""
    ante = s.ante
    c = Counter(ante)
    succ = s.succ

    # axioms
    if len(ante) == 1 and succ == ante[0]:
        yield "id", (), {}
        return
    if ante == (F,) and succ is None:
        yield "f=>", (), {}
    if not ante and succ == E:
        yield "=>e", (), {}

    # unit rules
    if E in c:
        yield "e=>", (sequent(_drop(c, E), succ),), {}
    if succ == F:
        yield "=>f", (sequent(ante, None),), {}

    # left logical rules, one instance per distinct antecedent formula
    for phi in sorted(set(c), key=render):
        ctx = _drop(c, phi)
        if isinstance(phi, Bin):
            if phi.op == "*":
                yield "*=>", (sequent(ctx + [phi.left, phi.right], succ),), {}
            elif phi.op == "&":
                yield "&=>1", (sequent(ctx + [phi.left], succ),), {}
                yield "&=>2", (sequent(ctx + [phi.right], succ),), {}
            elif phi.op == "|":
                yield "|=>", (sequent(ctx + [phi.left], succ),
                              sequent(ctx + [phi.right], succ)), {}
            elif phi.op == "->":
                for g1, g2 in _splits(ctx):
                    yield "->=>", (sequent(g1, phi.left),
                                   sequent(g2 + [phi.right], succ)), \
                        {"split": tuple(sorted(g1, key=render))}
        elif isinstance(phi, Quant) and phi.q == "forall":
            for u in _inst_vars(s):
                yield "all=>", (sequent(ctx + [substitute(phi.body, X, u)], succ),), \
                    {"u": u}
        elif isinstance(phi, Quant) and phi.q == "exists":
            y = _eigen_var(s)
            yield "ex=>", (sequent(ctx + [substitute(phi.body, X, y)], succ),), \
                {"y": y}

    # right logical rules
    if isinstance(succ, Bin):
        if succ.op == "->":
            yield "=>->", (sequent(list(ante) + [succ.left], succ.right),), {}
        elif succ.op == "&":
            yield "=>&", (sequent(ante, succ.left), sequent(ante, succ.right)), {}
        elif succ.op == "|":
            yield "=>|1", (sequent(ante, succ.left),), {}
            yield "=>|2", (sequent(ante, succ.right),), {}
        elif succ.op == "*":
            for g1, g2 in _splits(c):
                yield "=>*", (sequent(g1, succ.left), sequent(g2, succ.right)), \
                    {"split": tuple(sorted(g1, key=render))}
    elif isinstance(succ, Quant):
        if succ.q == "forall":
            y = _eigen_var(s)
            yield "=>all", (sequent(ante, substitute(succ.body, X, y)),), {"y": y}
        else:
            for u in _inst_vars(s):
                yield "=>ex", (sequent(ante, substitute(succ.body, X, u)),), {"u": u}

    # structural rules last
    if cfg.weak_left:
        for phi in sorted(set(c), key=render):
            yield "weak-l", (sequent(_drop(c, phi), succ),), {"pi": (phi,)}
    if cfg.weak_right and succ is not None:
        yield "weak-r", (sequent(ante, None),), {}
    if cfg.contraction:
        for phi in sorted(set(c), key=render):
            if c[phi] + 1 > budget.copies:
                continue
            yield "contract", (sequent(list(ante) + [phi], succ),), \
                {"pi": (phi,), "k": 2}


def _drop(c: Counter, phi) -> list:
    out = c.copy()
    out[phi] -= 1
    return list(out.elements())


def _splits(ctx: Counter | list) -> Iterator[tuple[list, list]]:
    """All ways to divide a multiset into an ordered pair of parts."""
    c = ctx if isinstance(ctx, Counter) else Counter(ctx)
    items = sorted(c.items(), key=lambda kv: render(kv[0]))
    ranges = [range(n + 1) for _, n in items]
    for take in itertools.product(*ranges):
        g1, g2 = [], []
        for (phi, n), t in zip(items, take):
            g1 += [phi] * t
            g2 += [phi] * (n - t)
        yield g1, g2


def _inst_vars(s: Sequent) -> list[Var]:
    """Instance variable candidates honoring the freeness side condition."""
    fv = s.free_vars()
    if fv:
        return sorted(fv, key=lambda v: v.sort_key())
    return [X]


def _eigen_var(s: Sequent) -> Var:
    """x when it is not free in the conclusion, else the lowest fresh yN."""
    fv = s.free_vars()
    if X not in fv:
        return X
    n = 1
    while Var(n) in fv:
        n += 1
    return Var(n)
