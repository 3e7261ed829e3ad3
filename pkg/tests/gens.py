"""Seeded random generators: formulas, forward derivations, goal templates."""

import random
from collections import Counter

from onevar.proof import CONFIGS, check_derivation, node, sequent
from onevar.syntax import (
    Atom, Bin, E, F, Modal, PropAtom, Quant, Var, X, free_vars, substitute,
)

Y1, Y2, Y3 = Var(1), Var(2), Var(3)
OPS = ("&", "|", "*", "->")


def rand_fo(rng, depth, bank, atoms=(0, 1, 2), quant=True):
    """Random formula over the given free-variable bank; quantified
    subformulas are closed, as the language requires."""
    if depth <= 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.72 and bank:
            return Atom(rng.choice(atoms), rng.choice(bank))
        if r < 0.8:
            return E if rng.random() < 0.7 else F
        if quant:
            q = rng.choice(("forall", "exists"))
            return Quant(q, rand_fo(rng, depth - 1, [X], atoms, quant=False))
        return Atom(rng.choice(atoms), rng.choice(bank) if bank else X)
    op = rng.choice(OPS)
    return Bin(op, rand_fo(rng, depth - 1, bank, atoms, quant),
               rand_fo(rng, depth - 1, bank, atoms, quant))


def rand_modal(rng, depth, atoms=(0, 1, 2)):
    if depth <= 0 or rng.random() < 0.3:
        r = rng.random()
        if r < 0.75:
            return PropAtom(rng.choice(atoms))
        return E if rng.random() < 0.7 else F
    if rng.random() < 0.3:
        return Modal(rng.choice(("box", "dia")), rand_modal(rng, depth - 1, atoms))
    op = rng.choice(OPS)
    return Bin(op, rand_modal(rng, depth - 1, atoms),
               rand_modal(rng, depth - 1, atoms))


# ---------------------------------------------------------------------------
# forward derivation growth

def _id(phi):
    return node(sequent([phi], phi), "id")


class Forward:
    """Grows checked derivations from axioms downward."""

    def __init__(self, seed, bank, cfg_name="FLe", atoms=(0, 1, 2)):
        self.rng = random.Random(seed)
        self.bank = list(bank)
        self.cfg = CONFIGS[cfg_name]
        self.atoms = atoms

    def formula(self, depth=2, bank=None):
        bank = self.bank if bank is None else bank
        return rand_fo(self.rng, self.rng.randint(0, depth), bank, self.atoms)

    def leaf(self):
        r = self.rng.random()
        if r < 0.08:
            return node(sequent([F], None), "f=>")
        if r < 0.14:
            return node(sequent([], E), "=>e")
        return _id(self.formula())

    def grow(self, steps=5):
        pool = [self.leaf(), self.leaf()]
        for _ in range(steps):
            move = self.rng.choice(
                ["unary"] * 5 + ["combine"] * 2 + ["leaf"])
            if move == "leaf":
                pool.append(self.leaf())
            elif move == "combine" and len(pool) >= 2:
                i, j = self.rng.sample(range(len(pool)), 2)
                d = self._combine(pool[i], pool[j])
                if d is not None:
                    pool.append(d)
            else:
                i = self.rng.randrange(len(pool))
                d = self._unary(pool[i])
                if d is not None:
                    pool[i] = d
        out = pool[self.rng.randrange(len(pool))]
        check_derivation(out, self.cfg)
        return out

    # one-premise moves -----------------------------------------------------

    def _unary(self, d):
        moves = [self._m_eleft, self._m_andleft, self._m_fuseleft,
                 self._m_orright, self._m_impright, self._m_allleft,
                 self._m_exright, self._m_allright, self._m_exleft]
        if self.cfg.weak_left:
            moves.append(self._m_weakl)
        if self.cfg.weak_right:
            moves.append(self._m_weakr)
        if self.cfg.contraction:
            moves.append(self._m_contract)
        self.rng.shuffle(moves)
        for m in moves:
            out = m(d)
            if out is not None:
                return out
        return None

    def _m_eleft(self, d):
        s = d.conclusion
        return node(sequent(list(s.ante) + [E], s.succ), "e=>", d)

    def _m_andleft(self, d):
        s = d.conclusion
        if not s.ante:
            return None
        phi = self.rng.choice(s.ante)
        psi = self.formula()
        rest = list(s.ante)
        rest.remove(phi)
        if self.rng.random() < 0.5:
            return node(sequent(rest + [Bin("&", phi, psi)], s.succ), "&=>1", d)
        return node(sequent(rest + [Bin("&", psi, phi)], s.succ), "&=>2", d)

    def _m_fuseleft(self, d):
        s = d.conclusion
        if len(s.ante) < 2:
            return None
        phi, psi = self.rng.sample(list(s.ante), 2)
        rest = list(s.ante)
        rest.remove(phi)
        rest.remove(psi)
        return node(sequent(rest + [Bin("*", phi, psi)], s.succ), "*=>", d)

    def _m_orright(self, d):
        s = d.conclusion
        if s.succ is None:
            return None
        psi = self.formula()
        if self.rng.random() < 0.5:
            return node(sequent(s.ante, Bin("|", s.succ, psi)), "=>|1", d)
        return node(sequent(s.ante, Bin("|", psi, s.succ)), "=>|2", d)

    def _m_impright(self, d):
        s = d.conclusion
        if s.succ is None or not s.ante:
            return None
        phi = self.rng.choice(s.ante)
        rest = list(s.ante)
        rest.remove(phi)
        return node(sequent(rest, Bin("->", phi, s.succ)), "=>->", d)

    def _m_allleft(self, d):
        s = d.conclusion
        cands = [phi for phi in s.ante
                 if len(free_vars(phi)) == 1 or free_vars(phi) == {X}]
        cands = [phi for phi in cands if len(free_vars(phi)) == 1]
        if not cands:
            return None
        phi = self.rng.choice(cands)
        u = next(iter(free_vars(phi)))
        rest = list(s.ante)
        rest.remove(phi)
        q = Quant("forall", substitute(phi, u, X))
        return node(sequent(rest + [q], s.succ), "all=>", d, u=u)

    def _m_exright(self, d):
        s = d.conclusion
        if s.succ is None or len(free_vars(s.succ)) != 1:
            return None
        u = next(iter(free_vars(s.succ)))
        q = Quant("exists", substitute(s.succ, u, X))
        return node(sequent(s.ante, q), "=>ex", d, u=u)

    def _m_allright(self, d):
        s = d.conclusion
        if s.succ is None:
            return None
        fv = free_vars(s.succ)
        ctx_free = set().union(*(free_vars(a) for a in s.ante)) if s.ante else set()
        if len(fv) > 1:
            return None
        w = next(iter(fv)) if fv else self._fresh_for(ctx_free)
        if w in ctx_free:
            return None
        q = Quant("forall", substitute(s.succ, w, X))
        return node(sequent(s.ante, q), "=>all", d, y=w)

    def _m_exleft(self, d):
        s = d.conclusion
        other = lambda phi: (set().union(*(free_vars(a) for a in s.ante if a is not phi))
                             if len(s.ante) > 1 else set()) | (
            free_vars(s.succ) if s.succ is not None else set())
        cands = [phi for phi in s.ante
                 if len(free_vars(phi)) == 1
                 and next(iter(free_vars(phi))) not in other(phi)]
        if not cands:
            return None
        phi = self.rng.choice(cands)
        w = next(iter(free_vars(phi)))
        rest = list(s.ante)
        rest.remove(phi)
        q = Quant("exists", substitute(phi, w, X))
        return node(sequent(rest + [q], s.succ), "ex=>", d, y=w)

    def _m_weakl(self, d):
        s = d.conclusion
        pi = self.formula()
        return node(sequent(list(s.ante) + [pi], s.succ), "weak-l", d, pi=(pi,))

    def _m_weakr(self, d):
        s = d.conclusion
        if s.succ is not None:
            return None
        return node(sequent(s.ante, self.formula()), "weak-r", d)

    def _m_contract(self, d):
        s = d.conclusion
        c = Counter(s.ante)
        cands = [phi for phi, n in c.items() if n >= 2]
        if not cands:
            return None
        phi = self.rng.choice(cands)
        rest = list(s.ante)
        rest.remove(phi)
        return node(sequent(rest, s.succ), "contract", d, pi=(phi,), k=2)

    def _fresh_for(self, avoid):
        for v in self.bank:
            if v not in avoid and v != X:
                return v
        return Var(9)

    # two-premise moves -----------------------------------------------------

    def _combine(self, d1, d2):
        ops = [self._c_fusion, self._c_impleft, self._c_orleft_self,
               self._c_andright_self]
        self.rng.shuffle(ops)
        for op in ops:
            out = op(d1, d2)
            if out is not None:
                return out
        return None

    def _c_fusion(self, d1, d2):
        s1, s2 = d1.conclusion, d2.conclusion
        if s1.succ is None or s2.succ is None:
            return None
        return node(sequent(list(s1.ante) + list(s2.ante),
                            Bin("*", s1.succ, s2.succ)),
                    "=>*", d1, d2, split=tuple(s1.ante))

    def _c_impleft(self, d1, d2):
        s1, s2 = d1.conclusion, d2.conclusion
        if s1.succ is None or not s2.ante:
            return None
        psi = self.rng.choice(s2.ante)
        rest = list(s2.ante)
        rest.remove(psi)
        return node(sequent(list(s1.ante) + rest + [Bin("->", s1.succ, psi)],
                            s2.succ),
                    "->=>", d1, d2, split=tuple(s1.ante))

    def _c_orleft_self(self, d1, d2):
        s = d1.conclusion
        if not s.ante:
            return None
        phi = self.rng.choice(s.ante)
        rest = list(s.ante)
        rest.remove(phi)
        return node(sequent(rest + [Bin("|", phi, phi)], s.succ), "|=>", d1, d1)

    def _c_andright_self(self, d1, d2):
        s = d1.conclusion
        if s.succ is None:
            return None
        return node(sequent(s.ante, Bin("&", s.succ, s.succ)), "=>&", d1, d1)


# ---------------------------------------------------------------------------
# partitioned provable sequents (interpolation inputs)

def partitioned_samples(count, seed=0, cfg_name="FLe"):
    """(derivation, gamma indices, y, z) with a valid variable discipline:
    y1 only in the gamma part, y2 only in the rest, y3 shared."""
    out = []
    attempt = 0
    while len(out) < count and attempt < count * 60:
        attempt += 1
        g = Forward(seed * 100003 + attempt, [Y1, Y2, Y3], cfg_name)
        try:
            d = g.grow(g.rng.randint(2, 7))
        except Exception:
            continue
        s = d.conclusion
        if X in s.free_vars():
            continue
        succ_free = free_vars(s.succ) if s.succ is not None else set()
        if Y1 in succ_free:
            continue
        if any({Y1, Y2} <= free_vars(a) for a in s.ante):
            continue
        gamma = [i for i, a in enumerate(s.ante)
                 if Y1 in free_vars(a)
                 or (Y2 not in free_vars(a) and g.rng.random() < 0.5)]
        out.append((d, gamma, Y1, Y2))
    return out


# ---------------------------------------------------------------------------
# one-variable derivations (elimination inputs)

def _detour_all_right(g):
    """Forces the interpolation detour: x free in the context of =>all."""
    rng = g.rng
    phi = rand_fo(rng, rng.randint(0, 2), [Y1], quant=False)
    if free_vars(phi) != {Y1}:
        phi = Atom(rng.choice(g.atoms), Y1)
    q = Quant("forall", substitute(phi, Y1, X))
    d = node(sequent([q], phi), "all=>", _id(phi), u=Y1)
    for _ in range(rng.randint(1, 3)):
        s = d.conclusion
        psi = rand_fo(rng, rng.randint(0, 2), [X], quant=False)
        j = rng.randrange(len(s.ante))
        tgt = s.ante[j]
        rest = [a for i, a in enumerate(s.ante) if i != j]
        if rng.random() < 0.5:
            d = node(sequent(rest + [Bin("&", tgt, psi)], s.succ), "&=>1", d)
        else:
            d = node(sequent(rest + [Bin("&", psi, tgt)], s.succ), "&=>2", d)
    s = d.conclusion
    return node(sequent(s.ante, Quant("forall", substitute(s.succ, Y1, X))),
                "=>all", d, y=Y1)


def _detour_ex_left(g):
    """Forces the diamond detour: x free in the succedent of ex=>."""
    rng = g.rng
    phi = Atom(rng.choice(g.atoms), Y1)
    q = Quant("exists", substitute(phi, Y1, X))
    d = node(sequent([phi], q), "=>ex", _id(phi), u=Y1)
    psi = rand_fo(rng, rng.randint(0, 2), [X], quant=False)
    aux = _id(psi)
    s = d.conclusion
    d = node(sequent(list(s.ante) + [Bin("->", s.succ, psi)], psi),
             "->=>", d, aux, split=tuple(s.ante))
    s = d.conclusion
    rest = [a for a in s.ante if a != phi]
    return node(sequent(rest + [q], s.succ), "ex=>", d, y=Y1)


def one_variable_samples(count, seed=0, cfg_name="FLe"):
    """Checked derivations whose conclusions use no variable besides x."""
    out = []
    attempt = 0
    while len(out) < count and attempt < count * 60:
        attempt += 1
        g = Forward(seed * 99991 + attempt, [X], cfg_name)
        try:
            if attempt % 3 == 0:
                d = _detour_all_right(g)
            elif attempt % 3 == 1:
                d = _detour_ex_left(g)
            else:
                d = g.grow(g.rng.randint(2, 6))
            check_derivation(d, g.cfg)
        except Exception:
            continue
        if not d.conclusion.free_vars() <= {X}:
            continue
        out.append(d)
    return out


# ---------------------------------------------------------------------------
# one-variable goal templates for the prover

def goal_templates(count, seed=0):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        a = rand_fo(rng, rng.randint(0, 2), [X])
        b = rand_fo(rng, rng.randint(0, 2), [X])
        shape = rng.randrange(6)
        if shape == 0:
            out.append(sequent([a], a))
        elif shape == 1:
            out.append(sequent([Bin("&", a, b)], a))
        elif shape == 2:
            out.append(sequent([a], Bin("|", b, a)))
        elif shape == 3:
            out.append(sequent([a, Bin("->", a, b)], b))
        elif shape == 4:
            out.append(sequent([a, b], Bin("*", b, a)))
        else:
            out.append(sequent([Quant("forall", substitute(a, X, X))
                                if free_vars(a) <= {X} else a, b],
                               Bin("*", b, a)))
    return out
