"""Constructive interpolant extraction.

Given a checked derivation of a partitioned sequent

    Gamma(w, y), Pi(w, z)  |-  Delta(w, z)

with y private to Gamma and z private to Pi and Delta, produce a formula
chi whose free variables lie in w together with derivations of
Gamma |- chi and Pi, chi |- Delta.  Neither output uses more
quantifier-introduction steps per branch than the input (the md bound),
which is what lets variable elimination recurse on the result.

The recursion follows the last rule of the derivation.  Two shortcuts
take precedence, in this order: if y is not free in Gamma then chi is the
product of Gamma; else if z is not free in Pi and Delta then chi is
product(Pi) -> sum(Delta).  Implication-left and the quantifier cases
sometimes need the mirrored statement (roles of the two sides exchanged);
the recursion supports both orientations, the public result is always in
the stated one.  All glue steps are emitted as explicit rule nodes so the
outputs are self-contained checkable derivations.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .proof import (
    CalculusConfig, CheckError, Node, Sequent, analyze_node, check_derivation,
    max_var_index, node, rename_free, sequent,
)
from .syntax import (
    Bin, E, F, FOFormula, Quant, Var, X, free_vars, render, substitute,
)


@dataclass(frozen=True)
class InterpolationResult:
    chi: FOFormula
    d1: Node  # Gamma |- chi
    d2: Node  # Pi, chi |- Delta


def interpolate(d: Node, gamma_indices: list[int], y: Var, z: Var,
                cfg: CalculusConfig) -> InterpolationResult:
    """Split d's antecedent by position (the Gamma part) and extract."""
    try:
        check_derivation(d, cfg)
    except CheckError as exc:
        raise CheckError("E-UNCHECKED", exc.path, str(exc))
    s = d.conclusion
    if any(i < 0 or i >= len(s.ante) for i in gamma_indices):
        raise CheckError("E-PARTITION", (), "gamma index out of range")
    if len(set(gamma_indices)) != len(gamma_indices):
        raise CheckError("E-PARTITION", (), "duplicate gamma index")
    left = Counter(s.ante[i] for i in gamma_indices)
    _validate_partition(s, left, y, z)
    chi, d1, d2 = _interp(d, left, y, z, cfg)
    return InterpolationResult(chi, d1, d2)


def _validate_partition(s: Sequent, left: Counter, y: Var, z: Var) -> None:
    if y == z or X in (y, z):
        raise CheckError("E-PARTITION", (), "need distinct non-x variables y, z")
    fv = s.free_vars()
    if X in fv:
        raise CheckError("E-PARTITION", (), "x free in the conclusion")
    wbar = fv - {y, z}
    rest = s.counter() - left
    succ_free = free_vars(s.succ) if s.succ is not None else set()
    if not _free(left) <= wbar | {y}:
        raise CheckError("E-PARTITION", (), f"{z} free in the gamma part")
    if not _free(rest) | succ_free <= wbar | {z}:
        raise CheckError("E-PARTITION", (), f"{y} free in the pi part or succedent")


def _free(ms: Counter) -> set[Var]:
    out: set[Var] = set()
    for phi in ms:
        out |= free_vars(phi)
    return out


# ---------------------------------------------------------------------------
# glue derivations

def _id(phi: FOFormula) -> Node:
    return node(sequent([phi], phi), "id")


def _canon(ms) -> list[FOFormula]:
    items = ms.elements() if isinstance(ms, Counter) else ms
    return sorted(items, key=render)


def prove_product(ms: Counter) -> tuple[FOFormula, Node]:
    """Derivation of Gamma |- product(Gamma), folding in canonical order."""
    forms = _canon(ms)
    if not forms:
        return E, node(sequent([], E), "=>e")
    d = _id(forms[0])
    acc = forms[0]
    for i, phi in enumerate(forms[1:], start=1):
        acc = Bin("*", acc, phi)
        d = node(sequent(forms[:i + 1], acc), "=>*", d, _id(phi),
                 split=tuple(_canon(forms[:i])))
    return acc, d


def _fuse_fold(d: Node, part: Counter) -> tuple[FOFormula, Node]:
    """Extend d so the sub-multiset `part` of its antecedent becomes the
    single formula product(part), or an added e when the part is empty."""
    s = d.conclusion
    rest = list((s.counter() - part).elements())
    forms = _canon(part)
    if not forms:
        return E, node(sequent(rest + [E], s.succ), "e=>", d)
    acc = forms[0]
    for i, phi in enumerate(forms[1:], start=2):
        acc = Bin("*", acc, phi)
        d = node(sequent(rest + forms[i:] + [acc], s.succ), "*=>", d)
    return acc, d


def _sum_intro(succ):
    """Derivation of sum(Delta) |- Delta, with sum(empty) = f."""
    if succ is None:
        return node(sequent([F], None), "f=>")
    return _id(succ)


# ---------------------------------------------------------------------------
# the recursion

def _interp(d: Node, left: Counter, y: Var, z: Var,
            cfg: CalculusConfig) -> tuple[FOFormula, Node, Node]:
    s = d.conclusion
    c = s.counter()
    right = c - left
    succ_free = free_vars(s.succ) if s.succ is not None else set()

    # shortcut 1: y absent from the gamma part
    if y not in _free(left):
        chi, d1 = prove_product(left)
        _, d2 = _fuse_fold(d, left)
        return chi, d1, d2
    # shortcut 2: z absent from the pi part and succedent
    if z not in _free(right) | succ_free:
        prod, dm = _fuse_fold(d, right)
        if s.succ is None:
            dm = node(sequent(dm.conclusion.ante, F), "=>f", dm)
        chi = Bin("->", prod, dm.conclusion.succ)
        gamma_ante = list((Counter(dm.conclusion.ante) - Counter([prod])).elements())
        d1 = node(sequent(gamma_ante, chi), "=>->", dm)
        _, dp = prove_product(right)
        d2 = node(sequent(list(right.elements()) + [chi], s.succ), "->=>",
                  dp, _sum_intro(s.succ), split=tuple(_canon(right)))
        return chi, d1, d2

    return _rule_case(d, left, y, z, cfg)


def _side_of(left: Counter, c: Counter, principal) -> str:
    # an occurrence outside the gamma part takes precedence
    return "R" if c[principal] - left[principal] > 0 else "L"


def _d2_seq(d: Node, left: Counter, chi: FOFormula) -> Sequent:
    right = d.conclusion.counter() - left
    return sequent(list(right.elements()) + [chi], d.conclusion.succ)


def _rule_case(d: Node, left: Counter, y: Var, z: Var,
               cfg: CalculusConfig) -> tuple[FOFormula, Node, Node]:
    rule = d.rule
    analysis = analyze_node(d, cfg, modal=False)
    principal = analysis.principal

    if rule in ("id", "f=>", "=>e"):
        # axioms always satisfy one of the shortcuts, so this is unreachable
        raise CheckError("E-PARTITION", (), "axiom reached past the shortcuts")

    if rule == "e=>":
        return _one_left(d, left, y, z, cfg, E, Counter())
    if rule == "*=>":
        return _one_left(d, left, y, z, cfg, principal,
                         Counter([principal.left, principal.right]))
    if rule == "&=>1":
        return _one_left(d, left, y, z, cfg, principal, Counter([principal.left]))
    if rule == "&=>2":
        return _one_left(d, left, y, z, cfg, principal, Counter([principal.right]))
    if rule in ("=>f", "=>->", "=>|1", "=>|2", "weak-r"):
        chi, d1, d2 = _interp(d.premises[0], left, y, z, cfg)
        return chi, d1, node(_d2_seq(d, left, chi), rule, d2)
    if rule == "|=>":
        return _or_left(d, left, y, z, cfg, principal)
    if rule == "=>&":
        return _and_right(d, left, y, z, cfg)
    if rule == "=>*":
        return _fusion_right(d, left, y, z, cfg, analysis)
    if rule == "->=>":
        return _imp_left(d, left, y, z, cfg, principal, analysis)
    if rule == "all=>":
        return _all_left(d, left, y, z, cfg, principal)
    if rule == "=>ex":
        return _ex_right(d, left, y, z, cfg)
    if rule == "=>all":
        return _all_right(d, left, y, z, cfg)
    if rule == "ex=>":
        return _ex_left(d, left, y, z, cfg, principal)
    if rule == "contract":
        return _contract(d, left, y, z, cfg)
    if rule == "weak-l":
        return _weaken_left(d, left, y, z, cfg)
    raise CheckError("E-PARTITION", (), f"unsupported rule {rule}")


def _one_left(d, left, y, z, cfg, principal, replacement):
    """Single-premise left rule replacing one `principal` by `replacement`."""
    side = _side_of(left, d.conclusion.counter(), principal)
    if side == "L":
        left2 = left - Counter([principal]) + replacement
        chi, d1, d2 = _interp(d.premises[0], left2, y, z, cfg)
        return chi, node(sequent(left.elements(), chi), d.rule, d1), d2
    chi, d1, d2 = _interp(d.premises[0], left, y, z, cfg)
    return chi, d1, node(_d2_seq(d, left, chi), d.rule, d2)


def _or_left(d, left, y, z, cfg, phi):
    s = d.conclusion
    c = s.counter()
    side = _side_of(left, c, phi)
    p1, p2 = d.premises
    if side == "L":
        la = left - Counter([phi]) + Counter([phi.left])
        lb = left - Counter([phi]) + Counter([phi.right])
        chi1, d11, d12 = _interp(p1, la, y, z, cfg)
        chi2, d21, d22 = _interp(p2, lb, y, z, cfg)
        chi = Bin("|", chi1, chi2)
        d1 = node(sequent(left.elements(), chi), "|=>",
                  node(sequent(la.elements(), chi), "=>|1", d11),
                  node(sequent(lb.elements(), chi), "=>|2", d21))
        return chi, d1, node(_d2_seq(d, left, chi), "|=>", d12, d22)
    chi1, d11, d12 = _interp(p1, left, y, z, cfg)
    chi2, d21, d22 = _interp(p2, left, y, z, cfg)
    chi = Bin("&", chi1, chi2)
    d1 = node(sequent(left.elements(), chi), "=>&", d11, d21)
    rctx = list((c - left - Counter([phi])).elements())
    w1 = node(sequent(rctx + [phi.left, chi], s.succ), "&=>1", d12)
    w2 = node(sequent(rctx + [phi.right, chi], s.succ), "&=>2", d22)
    return chi, d1, node(_d2_seq(d, left, chi), "|=>", w1, w2)


def _and_right(d, left, y, z, cfg):
    s = d.conclusion
    chi1, d11, d12 = _interp(d.premises[0], left, y, z, cfg)
    chi2, d21, d22 = _interp(d.premises[1], left, y, z, cfg)
    chi = Bin("&", chi1, chi2)
    d1 = node(sequent(left.elements(), chi), "=>&", d11, d21)
    base = list((s.counter() - left).elements())
    w1 = node(sequent(base + [chi], s.succ.left), "&=>1", d12)
    w2 = node(sequent(base + [chi], s.succ.right), "&=>2", d22)
    return chi, d1, node(_d2_seq(d, left, chi), "=>&", w1, w2)


def _split_gamma(lp: Counter, g1: Counter) -> tuple[Counter, Counter]:
    l1 = lp & g1
    return l1, lp - l1


def _fusion_right(d, left, y, z, cfg, analysis):
    s = d.conclusion
    g1, g2 = analysis.contexts
    l1, l2 = _split_gamma(left, g1)
    chi1, d11, d12 = _interp(d.premises[0], l1, y, z, cfg)
    chi2, d21, d22 = _interp(d.premises[1], l2, y, z, cfg)
    chi = Bin("*", chi1, chi2)
    d1 = node(sequent(left.elements(), chi), "=>*", d11, d21,
              split=tuple(_canon(l1)))
    r1, r2 = g1 - l1, g2 - l2
    inner = node(sequent(list((r1 + r2).elements()) + [chi1, chi2], s.succ), "=>*",
                 d12, d22, split=tuple(_canon(list(r1.elements()) + [chi1])))
    d2 = node(_d2_seq(d, left, chi), "*=>", inner)
    return chi, d1, d2


def _imp_left(d, left, y, z, cfg, phi, analysis):
    s = d.conclusion
    c = s.counter()
    g1, g2 = analysis.contexts
    side = _side_of(left, c, phi)
    lp = left - Counter([phi]) if side == "L" else left
    l1, l2 = _split_gamma(lp, g1)
    p1, p2 = d.premises
    if side == "R":
        chi1, d11, d12 = _interp(p1, l1, y, z, cfg)
        chi2, d21, d22 = _interp(p2, l2, y, z, cfg)
        chi = Bin("*", chi1, chi2)
        d1 = node(sequent(left.elements(), chi), "=>*", d11, d21,
                  split=tuple(_canon(l1)))
        r1, r2 = g1 - l1, g2 - l2
        inner = node(sequent(list((r1 + r2).elements()) + [phi, chi1, chi2], s.succ),
                     "->=>", d12, d22,
                     split=tuple(_canon(list(r1.elements()) + [chi1])))
        return chi, d1, node(_d2_seq(d, left, chi), "*=>", inner)
    # principal in the gamma part: premise 1 is handled with sides exchanged
    chi1, d11s, d12s = _interp(p1, g1 - l1, z, y, cfg)
    chi2, d21, d22 = _interp(p2, l2 + Counter([phi.right]), y, z, cfg)
    chi = Bin("->", chi1, chi2)
    inner1 = node(sequent(list((l1 + l2).elements()) + [phi, chi1], chi2), "->=>",
                  d12s, d21, split=tuple(_canon(list(l1.elements()) + [chi1])))
    d1 = node(sequent(left.elements(), chi), "=>->", inner1)
    d2 = node(_d2_seq(d, left, chi), "->=>", d11s, d22,
              split=tuple(_canon(g1 - l1)))
    return chi, d1, d2


def _find_inst_var(body, inst):
    for v in sorted(free_vars(inst) | {X}, key=lambda v: v.sort_key()):
        if substitute(body, X, v) == inst:
            return v
    raise CheckError("E-PARTITION", (), "could not recover the instance variable")


def _all_left(d, left, y, z, cfg, principal):
    s = d.conclusion
    c = s.counter()
    side = _side_of(left, c, principal)
    body = principal.body
    prem = d.premises[0]
    if d.u is not None:
        u = d.u
    else:
        diff = prem.conclusion.counter() - (c - Counter([principal]))
        u = _find_inst_var(body, next(iter(diff)))
    inst = substitute(body, X, u)
    if side == "L":
        if u == y or u in _free(left - Counter([principal])):
            left2 = left - Counter([principal]) + Counter([inst])
            chi, d1, d2 = _interp(prem, left2, y, z, cfg)
            return chi, node(sequent(left.elements(), chi), "all=>", d1, u=u), d2
        # u lives on the pi side: the instance is delegated there
        chi0, d1p, d2p = _interp(prem, left - Counter([principal]), y, z, cfg)
        chi = Bin("*", chi0, principal)
        gprime = left - Counter([principal])
        d1 = node(sequent(left.elements(), chi), "=>*", d1p, _id(principal),
                  split=tuple(_canon(gprime)))
        right = list((c - left).elements())
        inner = node(sequent(right + [chi0, principal], s.succ), "all=>", d2p, u=u)
        d2 = node(_d2_seq(d, left, chi), "*=>", inner)
        return chi, d1, d2
    # principal on the pi side
    rprime = c - left - Counter([principal])
    succ_free = free_vars(s.succ) if s.succ is not None else set()
    if u == z or u in _free(rprime) | succ_free:
        chi, d1, d2 = _interp(prem, left, y, z, cfg)
        return chi, d1, node(_d2_seq(d, left, chi), "all=>", d2, u=u)
    # u lives on the gamma side: the instance is delegated there
    chi0, d1p, d2p = _interp(prem, left + Counter([inst]), y, z, cfg)
    chi = Bin("->", principal, chi0)
    inner = node(sequent(list(left.elements()) + [principal], chi0), "all=>",
                 d1p, u=u)
    d1 = node(sequent(left.elements(), chi), "=>->", inner)
    d2 = node(_d2_seq(d, left, chi), "->=>", _id(principal), d2p,
              split=(principal,))
    return chi, d1, d2


def _ex_right(d, left, y, z, cfg):
    s = d.conclusion
    c = s.counter()
    right = c - left
    prem = d.premises[0]
    u = d.u if d.u is not None else _find_inst_var(s.succ.body, prem.conclusion.succ)
    if u == z or u in _free(right):
        chi, d1, d2 = _interp(prem, left, y, z, cfg)
        return chi, d1, node(_d2_seq(d, left, chi), "=>ex", d2, u=u)
    # u lives on the gamma side: recurse with the sides exchanged
    chi0, d1s, d2s = _interp(prem, right, z, y, cfg)
    chi = Bin("->", chi0, s.succ)
    inner = node(sequent(list(left.elements()) + [chi0], s.succ), "=>ex", d2s, u=u)
    d1 = node(sequent(left.elements(), chi), "=>->", inner)
    d2 = node(_d2_seq(d, left, chi), "->=>", d1s, _id(s.succ),
              split=tuple(_canon(right)))
    return chi, d1, d2


def _refresh_eigen(d: Node) -> tuple[Node, Var]:
    """Premise and eigenvariable of an eigenvariable rule, with x renamed to
    a fresh variable when it was used as the eigenvariable."""
    prem = d.premises[0]
    w = d.y
    if w is None:
        # recover it from the instance
        s = d.conclusion
        if d.rule == "=>all":
            w = _find_inst_var(s.succ.body, prem.conclusion.succ)
        else:
            for phi in sorted(set(s.counter()), key=render):
                if isinstance(phi, Quant) and phi.q == "exists":
                    diff = prem.conclusion.counter() - (s.counter() - Counter([phi]))
                    if diff:
                        try:
                            w = _find_inst_var(phi.body, next(iter(diff)))
                            break
                        except CheckError:
                            continue
            if w is None:
                raise CheckError("E-PARTITION", (), "could not recover the eigenvariable")
    if w == X:
        fresh = Var(max_var_index(d) + 1)
        prem = rename_free(prem, X, fresh)
        w = fresh
    return prem, w


def _glue_inst_var(w: Var, fallback: Var, *frees: set[Var]) -> Var:
    """Use the eigenvariable for the rebuilt instance when it actually occurs,
    else a variable known to be free in the rebuilt conclusion."""
    if any(w in f for f in frees):
        return w
    return fallback


def _all_right(d, left, y, z, cfg):
    s = d.conclusion
    right = s.counter() - left
    prem, w = _refresh_eigen(d)
    inst = prem.conclusion.succ
    chi0, d1p, d2p = _interp(prem, left, y, z, cfg)
    chi = Quant("forall", substitute(chi0, w, X))
    d1 = node(sequent(left.elements(), chi), "=>all", d1p, y=w)
    uu = _glue_inst_var(w, z, free_vars(chi0), free_vars(inst))
    inner = node(sequent(list(right.elements()) + [chi], inst), "all=>", d2p, u=uu)
    d2 = node(_d2_seq(d, left, chi), "=>all", inner, y=w)
    return chi, d1, d2


def _ex_left(d, left, y, z, cfg, principal):
    s = d.conclusion
    c = s.counter()
    side = _side_of(left, c, principal)
    prem, w = _refresh_eigen(d)
    inst = substitute(principal.body, X, w)
    if side == "L":
        left2 = left - Counter([principal]) + Counter([inst])
        chi0, d1p, d2p = _interp(prem, left2, y, z, cfg)
        chi = Quant("exists", substitute(chi0, w, X))
        uu = _glue_inst_var(w, y, free_vars(chi0), free_vars(inst))
        inner = node(sequent(left2.elements(), chi), "=>ex", d1p, u=uu)
        d1 = node(sequent(left.elements(), chi), "ex=>", inner, y=w)
        d2 = node(_d2_seq(d, left, chi), "ex=>", d2p, y=w)
        return chi, d1, d2
    # principal on the pi side: bind the interpolant universally
    chi0, d1p, d2p = _interp(prem, left, y, z, cfg)
    chi = Quant("forall", substitute(chi0, w, X))
    d1 = node(sequent(left.elements(), chi), "=>all", d1p, y=w)
    rprime = c - left - Counter([principal])
    uu = _glue_inst_var(w, z, free_vars(chi0), free_vars(inst))
    inner = node(sequent(list(rprime.elements()) + [inst, chi], s.succ), "all=>",
                 d2p, u=uu)
    d2 = node(_d2_seq(d, left, chi), "ex=>", inner, y=w)
    return chi, d1, d2


def _structural_pi(d: Node) -> Counter:
    if d.pi is not None:
        return Counter(d.pi)
    prem_c = d.premises[0].conclusion.counter()
    c = d.conclusion.counter()
    if d.rule == "weak-l":
        return c - prem_c
    k = d.k or 2
    extra = prem_c - c
    return Counter({phi: n // (k - 1) for phi, n in extra.items()})


def _contract(d, left, y, z, cfg):
    k = d.k or 2
    pi = _structural_pi(d)
    pi_l = pi & left
    pi_r = pi - pi_l
    left2 = left - pi_l + Counter({phi: n * k for phi, n in pi_l.items()})
    chi, d1, d2 = _interp(d.premises[0], left2, y, z, cfg)
    if pi_l:
        d1 = node(sequent(left.elements(), chi), "contract", d1,
                  pi=tuple(_canon(pi_l)), k=k)
    if pi_r:
        d2 = node(_d2_seq(d, left, chi), "contract", d2,
                  pi=tuple(_canon(pi_r)), k=k)
    return chi, d1, d2


def _weaken_left(d, left, y, z, cfg):
    pi = _structural_pi(d)
    pi_l = pi & left
    pi_r = pi - pi_l
    chi, d1, d2 = _interp(d.premises[0], left - pi_l, y, z, cfg)
    if pi_l:
        d1 = node(sequent(left.elements(), chi), "weak-l", d1,
                  pi=tuple(_canon(pi_l)))
    if pi_r:
        d2 = node(_d2_seq(d, left, chi), "weak-l", d2, pi=tuple(_canon(pi_r)))
    return chi, d1, d2
