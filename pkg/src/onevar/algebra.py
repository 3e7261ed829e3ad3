"""Finite lattice-ordered algebras with optional interior/closure modalities.

An algebra is a carrier 0..n-1 with one table per signature symbol; the
order is derived from the meet table (a <= b iff a & b = a).  Profiles:

* LAT    lattice for a signature containing & and |
* FLE    commutative pointed residuated lattice (adds * -> e f)
* M-LAT  LAT plus unary box/dia satisfying the interior-operator axioms
         L1 (box x & x = box x, dia x | x = dia x), L2 (box distributes
         over &, dia over |), L3 (box dia x = dia x, dia box x = box x)
         and the fixpoint law star: op applied to boxed arguments is boxed
* M-FLE  both of the above

Expansions of an algebra by modalities correspond bijectively to its
relatively complete subuniverses: box a = greatest subuniverse element
below a, dia a = least one above.  Powers A^w with box = constant meet
and dia = constant join give the functional models used by the semantics
module.

Equations are written over variables v0, v1, ... with the connective and
modality tokens of the modal formula language; `~` is equality and
`lhs <= rhs` abbreviates `lhs & rhs ~ lhs`.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from .syntax import (
    Bin, Const, Modal, ModalFormula, ParseError, PropAtom, parse_modal, render,
)

LAT_SIG = {"&": 2, "|": 2}
FLE_SIG = {"&": 2, "|": 2, "*": 2, "->": 2, "e": 0, "f": 0}

PROFILES = ("LAT", "FLE", "M-LAT", "M-FLE")


class AlgebraError(ValueError):
    def __init__(self, code: str, detail: str, witness=None):
        super().__init__(f"{code}: {detail}" + (f" witness {witness}" if witness else ""))
        self.code = code
        self.detail = detail
        self.witness = witness


@dataclass(frozen=True)
class FiniteAlgebra:
    """Operation tables over carrier 0..size-1; box/dia present iff modal."""

    signature: tuple[tuple[str, int], ...]  # (name, arity) pairs, fixed order
    size: int
    tables: tuple  # nested tuples aligned with signature
    box: Optional[tuple[int, ...]] = None
    dia: Optional[tuple[int, ...]] = None
    name: str = ""

    def table(self, op: str):
        for (nm, _), t in zip(self.signature, self.tables):
            if nm == op:
                return t
        raise AlgebraError("E-VIOLATION", f"operation {op!r} not in signature")

    def has(self, op: str) -> bool:
        return any(nm == op for nm, _ in self.signature)

    def app(self, op: str, *args: int) -> int:
        t = self.table(op)
        for a in args:
            t = t[a]
        return t

    def meet(self, a: int, b: int) -> int:
        return self.app("&", a, b)

    def join(self, a: int, b: int) -> int:
        return self.app("|", a, b)

    def leq(self, a: int, b: int) -> bool:
        return self.meet(a, b) == a

    @property
    def modal(self) -> bool:
        return self.box is not None and self.dia is not None


# ---------------------------------------------------------------------------
# construction and files

def make_algebra(signature: dict[str, int], size: int, tables: dict,
                 box=None, dia=None, name: str = "") -> FiniteAlgebra:
    sig = tuple(sorted(signature.items()))
    if "&" not in signature or "|" not in signature:
        raise AlgebraError("E-VIOLATION", "signature must contain & and |")
    tabs = tuple(_freeze(tables[nm], ar, size) for nm, ar in sig)
    b = tuple(box) if box is not None else None
    d = tuple(dia) if dia is not None else None
    return FiniteAlgebra(sig, size, tabs, b, d, name)


def _freeze(t, arity: int, size: int):
    if arity == 0:
        if not isinstance(t, int) or not 0 <= t < size:
            raise AlgebraError("E-VIOLATION", f"bad constant {t!r}")
        return t
    if len(t) != size:
        raise AlgebraError("E-VIOLATION", "table does not cover the carrier")
    if arity == 1:
        out = tuple(t)
        if not all(isinstance(v, int) and 0 <= v < size for v in out):
            raise AlgebraError("E-VIOLATION", "table entry out of range")
        return out
    return tuple(_freeze(row, arity - 1, size) for row in t)


def from_json(obj: dict, name: str = "") -> FiniteAlgebra:
    signature = {s["name"]: s["arity"] for s in obj["signature"]}
    return make_algebra(signature, obj["size"], obj["tables"],
                        obj.get("box"), obj.get("dia"), name or obj.get("name", ""))


def to_json(A: FiniteAlgebra) -> dict:
    def thaw(t, ar):
        if ar == 0:
            return t
        return [thaw(r, ar - 1) for r in t] if ar > 1 else list(t)

    out = {
        "signature": [{"name": nm, "arity": ar} for nm, ar in A.signature],
        "size": A.size,
        "tables": {nm: thaw(t, ar) for (nm, ar), t in zip(A.signature, A.tables)},
    }
    if A.box is not None:
        out["box"] = list(A.box)
    if A.dia is not None:
        out["dia"] = list(A.dia)
    return out


def load_file(path: str) -> FiniteAlgebra:
    with open(path) as fh:
        return from_json(json.load(fh))


# ---------------------------------------------------------------------------
# validation

def validate(A: FiniteAlgebra, profile: str) -> None:
    """Exhaustively check the profile's conditions; raise AlgebraError
    E-VIOLATION with the first violating tuple in canonical order."""
    if profile not in PROFILES:
        raise AlgebraError("E-VIOLATION", f"unknown profile {profile!r}")
    _check_lattice(A)
    if profile in ("FLE", "M-FLE"):
        _check_fle(A)
    if profile in ("M-LAT", "M-FLE"):
        _check_modal(A)


def _check_lattice(A: FiniteAlgebra) -> None:
    n = A.size
    for op in ("&", "|"):
        if not A.has(op):
            raise AlgebraError("E-VIOLATION", f"lattice profile requires {op}")
        for a in range(n):
            for b in range(n):
                if A.app(op, a, b) != A.app(op, b, a):
                    raise AlgebraError("E-VIOLATION", f"{op} not commutative", (a, b))
                for c in range(n):
                    if A.app(op, A.app(op, a, b), c) != A.app(op, a, A.app(op, b, c)):
                        raise AlgebraError("E-VIOLATION", f"{op} not associative", (a, b, c))
    for a in range(n):
        for b in range(n):
            if A.meet(a, A.join(a, b)) != a:
                raise AlgebraError("E-VIOLATION", "absorption &(a,|(a,b)) = a fails", (a, b))
            if A.join(a, A.meet(a, b)) != a:
                raise AlgebraError("E-VIOLATION", "absorption |(a,&(a,b)) = a fails", (a, b))


def _check_fle(A: FiniteAlgebra) -> None:
    n = A.size
    for op in ("*", "->", "e", "f"):
        if not A.has(op):
            raise AlgebraError("E-VIOLATION", f"residuated profile requires {op}")
    e = A.app("e")
    for a in range(n):
        if A.app("*", e, a) != a:
            raise AlgebraError("E-VIOLATION", "e is not a unit", (a,))
        for b in range(n):
            if A.app("*", a, b) != A.app("*", b, a):
                raise AlgebraError("E-VIOLATION", "* not commutative", (a, b))
            for c in range(n):
                if A.app("*", A.app("*", a, b), c) != A.app("*", a, A.app("*", b, c)):
                    raise AlgebraError("E-VIOLATION", "* not associative", (a, b, c))
                lhs = A.leq(A.app("*", a, b), c)
                rhs = A.leq(a, A.app("->", b, c))
                if lhs != rhs:
                    raise AlgebraError("E-VIOLATION", "residuation", (a, b, c))


def _check_modal(A: FiniteAlgebra) -> None:
    if A.box is None or A.dia is None:
        raise AlgebraError("E-VIOLATION", "modal profile requires box and dia tables")
    n = A.size
    bx, di = A.box, A.dia
    for a in range(n):
        if A.meet(bx[a], a) != bx[a]:
            raise AlgebraError("E-VIOLATION", "L1_box", (a,))
        if A.join(di[a], a) != di[a]:
            raise AlgebraError("E-VIOLATION", "L1_dia", (a,))
        if bx[di[a]] != di[a]:
            raise AlgebraError("E-VIOLATION", "L3_box", (a,))
        if di[bx[a]] != bx[a]:
            raise AlgebraError("E-VIOLATION", "L3_dia", (a,))
        for b in range(n):
            if bx[A.meet(a, b)] != A.meet(bx[a], bx[b]):
                raise AlgebraError("E-VIOLATION", "L2_box", (a, b))
            if di[A.join(a, b)] != A.join(di[a], di[b]):
                raise AlgebraError("E-VIOLATION", "L2_dia", (a, b))
    # fixpoint law per signature symbol: op of boxed args is boxed
    for nm, ar in A.signature:
        for args in itertools.product(range(n), repeat=ar):
            boxed = tuple(bx[a] for a in args)
            v = A.app(nm, *boxed)
            if bx[v] != v:
                raise AlgebraError("E-VIOLATION", f"star_box({nm})", args)


# ---------------------------------------------------------------------------
# modalities from subuniverses and back

def box_image(A: FiniteAlgebra) -> list[int]:
    """The image of box (equal to the image of dia), with its subalgebra and
    max-below/min-above characterizations verified."""
    if not A.modal:
        raise AlgebraError("E-VIOLATION", "algebra has no modalities")
    img = sorted(set(A.box))
    if sorted(set(A.dia)) != img:
        raise AlgebraError("E-VIOLATION", "box image differs from dia image")
    sub = set(img)
    for nm, ar in A.signature:
        for args in itertools.product(img, repeat=ar):
            if A.app(nm, *args) not in sub:
                raise AlgebraError("E-VIOLATION", f"image not closed under {nm}", args)
    for a in range(A.size):
        below = [b for b in img if A.leq(b, a)]
        above = [b for b in img if A.leq(a, b)]
        if not below or not all(A.leq(b, A.box[a]) for b in below) or A.box[a] not in below:
            raise AlgebraError("E-VIOLATION", "box is not max-below", (a,))
        if not above or not all(A.leq(A.dia[a], b) for b in above) or A.dia[a] not in above:
            raise AlgebraError("E-VIOLATION", "dia is not min-above", (a,))
    return img


def subuniverses(A: FiniteAlgebra) -> list[list[int]]:
    """All nonempty subsets closed under every operation, lexicographic."""
    consts = {A.app(nm) for nm, ar in A.signature if ar == 0}
    out = []
    n = A.size
    for bits in range(1, 1 << n):
        sub = [i for i in range(n) if bits >> i & 1]
        if not consts <= set(sub):
            continue
        ok = True
        s = set(sub)
        for nm, ar in A.signature:
            if ar == 0:
                continue
            for args in itertools.product(sub, repeat=ar):
                if A.app(nm, *args) not in s:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(sub)
    return sorted(out)


def relatively_complete_subalgebras(A: FiniteAlgebra) -> list[list[int]]:
    """Subuniverses where every carrier element has a greatest subuniverse
    element below it and a least one above it."""
    out = []
    for sub in subuniverses(A):
        if _rel_complete(A, sub):
            out.append(sub)
    return out


def _rel_complete(A: FiniteAlgebra, sub: list[int]) -> bool:
    for a in range(A.size):
        below = [b for b in sub if A.leq(b, a)]
        above = [b for b in sub if A.leq(a, b)]
        if not below or not above:
            return False
        if not any(all(A.leq(c, b) for c in below) for b in below):
            return False
        if not any(all(A.leq(b, c) for c in above) for b in above):
            return False
    return True


def expand_from_subalgebra(A: FiniteAlgebra, sub: list[int]) -> FiniteAlgebra:
    """Add box a = max below / dia a = min above relative to `sub`."""
    if not _rel_complete(A, sub) or sub not in subuniverses(A):
        raise AlgebraError("E-NOT-RELCOMPLETE",
                           f"{sub} is not a relatively complete subuniverse")
    box, dia = [], []
    for a in range(A.size):
        below = [b for b in sub if A.leq(b, a)]
        above = [b for b in sub if A.leq(a, b)]
        box.append(next(b for b in below if all(A.leq(c, b) for c in below)))
        dia.append(next(b for b in above if all(A.leq(b, c) for c in above)))
    return FiniteAlgebra(A.signature, A.size, A.tables, tuple(box), tuple(dia),
                         name=f"{A.name}+sub{sub}" if A.name else "")


def functional_power(A: FiniteAlgebra, w: int) -> FiniteAlgebra:
    """Power A^w with pointwise operations; box is the constant function at
    the meet of the entries, dia at the join.  Carrier tuples are numbered
    lexicographically (first coordinate most significant)."""
    if w < 1:
        raise AlgebraError("E-VIOLATION", "power exponent must be positive")
    n = A.size
    m = n ** w

    def decode(i):
        return tuple(i // n ** (w - 1 - j) % n for j in range(w))

    def encode(t):
        out = 0
        for v in t:
            out = out * n + v
        return out

    tabs = {}
    sig = dict(A.signature)
    for nm, ar in A.signature:
        if ar == 0:
            tabs[nm] = encode((A.app(nm),) * w)
        elif ar == 1:
            t = A.table(nm)
            tabs[nm] = [encode(tuple(t[v] for v in decode(i))) for i in range(m)]
        else:
            tabs[nm] = [[encode(tuple(A.app(nm, x, y) for x, y in
                                      zip(decode(i), decode(j))))
                         for j in range(m)] for i in range(m)]
    box, dia = [], []
    for i in range(m):
        t = decode(i)
        lo = t[0]
        hi = t[0]
        for v in t[1:]:
            lo = A.meet(lo, v)
            hi = A.join(hi, v)
        box.append(encode((lo,) * w))
        dia.append(encode((hi,) * w))
    return make_algebra(sig, m, tabs, box, dia,
                        name=f"{A.name}^{w}" if A.name else f"power^{w}")


# ---------------------------------------------------------------------------
# equations

@dataclass(frozen=True)
class TermEquation:
    """lhs ~ rhs, optionally guarded by a premise inequality p_lhs <= p_rhs.

    Terms are modal formulas whose atoms p_i stand for variables v_i.
    """

    lhs: ModalFormula
    rhs: ModalFormula
    premise: Optional[tuple[ModalFormula, ModalFormula]] = None
    name: str = ""

    def variables(self) -> list[int]:
        out: set[int] = set()
        terms = [self.lhs, self.rhs]
        if self.premise:
            terms += list(self.premise)
        for t in terms:
            out |= _term_vars(t)
        return sorted(out)

    def symbols(self) -> set[str]:
        out: set[str] = set()
        terms = [self.lhs, self.rhs]
        if self.premise:
            terms += list(self.premise)
        for t in terms:
            out |= _term_symbols(t)
        return out

    def render(self) -> str:
        s = f"{_render_term(self.lhs)} ~ {_render_term(self.rhs)}"
        if self.premise:
            s = f"{_render_term(self.premise[0])} <= {_render_term(self.premise[1])}  =>  {s}"
        return s


def _term_vars(t: ModalFormula) -> set[int]:
    match t:
        case PropAtom(i):
            return {i}
        case Bin(_, l, r):
            return _term_vars(l) | _term_vars(r)
        case Modal(_, b):
            return _term_vars(b)
    return set()


def _term_symbols(t: ModalFormula) -> set[str]:
    match t:
        case Const(nm):
            return {nm}
        case Bin(op, l, r):
            return {op} | _term_symbols(l) | _term_symbols(r)
        case Modal(m, b):
            return {"box" if m == "box" else "dia"} | _term_symbols(b)
    return set()


def parse_term(text: str) -> ModalFormula:
    """A term over v0, v1, ... with the modal connectives."""
    return parse_modal(re.sub(r"\bv([0-9]+)\b", r"p\1", text))


def _render_term(t: ModalFormula) -> str:
    return re.sub(r"\bp([0-9]+)\b", r"v\1", render(t))


def parse_equation(text: str) -> TermEquation:
    """`lhs ~ rhs`, or `lhs <= rhs` for lhs & rhs ~ lhs."""
    if "~" in text:
        l, _, r = text.partition("~")
        if "~" in r:
            raise ParseError("E-SYNTAX", "more than one ~ in equation")
        return TermEquation(parse_term(l), parse_term(r))
    if "<=" in text:
        l, _, r = text.partition("<=")
        lhs, rhs = parse_term(l), parse_term(r)
        return TermEquation(Bin("&", lhs, rhs), lhs)
    raise ParseError("E-SYNTAX", "equation must contain ~ or <=")


def leq_equation(lhs: ModalFormula, rhs: ModalFormula, name: str = "") -> TermEquation:
    return TermEquation(Bin("&", lhs, rhs), lhs, name=name)


def _t(text: str) -> ModalFormula:
    return parse_term(text)


BUILTIN_EQUATIONS: dict[str, TermEquation] = {
    "L1_box": TermEquation(_t("[]v0 & v0"), _t("[]v0"), name="L1_box"),
    "L1_dia": TermEquation(_t("<>v0 | v0"), _t("<>v0"), name="L1_dia"),
    "L2_box": TermEquation(_t("[](v0 & v1)"), _t("[]v0 & []v1"), name="L2_box"),
    "L2_dia": TermEquation(_t("<>(v0 | v1)"), _t("<>v0 | <>v1"), name="L2_dia"),
    "L3_box": TermEquation(_t("[]<>v0"), _t("<>v0"), name="L3_box"),
    "L3_dia": TermEquation(_t("<>[]v0"), _t("[]v0"), name="L3_dia"),
    "L4_box": TermEquation(_t("[][]v0"), _t("[]v0"), name="L4_box"),
    "L4_dia": TermEquation(_t("<><>v0"), _t("<>v0"), name="L4_dia"),
    "L5_box": TermEquation(_t("[]v0 & []v1"), _t("[]v0"),
                           premise=(_t("v0 & v1"), _t("v0")), name="L5_box"),
    "L5_dia": TermEquation(_t("<>v0 & <>v1"), _t("<>v0"),
                           premise=(_t("v0 & v1"), _t("v0")), name="L5_dia"),
    "L6_box": TermEquation(_t("[](v0 -> []v1)"), _t("<>v0 -> []v1"), name="L6_box"),
    "L6_dia": TermEquation(_t("[](([]v0) -> v1)"), _t("[]v0 -> []v1"), name="L6_dia"),
    "constant-domain": TermEquation(_t("[](([]v0) | v1)"), _t("[]v0 | []v1"),
                                    name="constant-domain"),
    "dia-multiplicative": TermEquation(_t("<>v0 * <>v0"), _t("<>(v0 * v0)"),
                                       name="dia-multiplicative"),
    "star_box_meet": TermEquation(_t("[](([]v0) & []v1)"), _t("[]v0 & []v1"),
                                  name="star_box_meet"),
    "star_dia_fuse": TermEquation(_t("<>((<>v0) * <>v1)"), _t("<>v0 * <>v1"),
                                  name="star_dia_fuse"),
}


def _star_equations(A: FiniteAlgebra, modality: str) -> list[TermEquation]:
    """The fixpoint law instances for every symbol of A's signature."""
    tok = "[]" if modality == "box" else "<>"
    out = []
    for nm, ar in A.signature:
        args = [f"{tok}v{i}" for i in range(ar)]
        if ar == 0:
            inner = nm
        elif ar == 1:
            inner = f"{nm}{args[0]}" if nm in ("[]", "<>") else f"{nm}({args[0]})"
        else:
            inner = f" {nm} ".join(f"({a})" for a in args)
        out.append(TermEquation(_t(f"{tok}({inner})"),
                                _t(inner) if ar else _t(nm),
                                name=f"star_{modality}({nm})"))
    return out


# evaluation ----------------------------------------------------------------

def eval_term(A: FiniteAlgebra, t: ModalFormula, assignment: dict[int, int]) -> int:
    match t:
        case PropAtom(i):
            return assignment[i]
        case Const(nm):
            return A.app(nm)
        case Bin(op, l, r):
            return A.app(op, eval_term(A, t.left, assignment),
                         eval_term(A, t.right, assignment))
        case Modal(m, b):
            tab = A.box if m == "box" else A.dia
            if tab is None:
                raise AlgebraError("E-VIOLATION", "term uses modalities but algebra has none")
            return tab[eval_term(A, b, assignment)]
    raise AlgebraError("E-VIOLATION", f"bad term {t!r}")


EVAL_CAP = 2_000_000


def _vectors(A: FiniteAlgebra, t: ModalFormula, cols: dict[int, int], m: int):
    """Evaluate t over all assignments at once; returns an int array of
    length m = n^k where variable i cycles with period n^(k-1-cols[i])."""
    n = A.size
    k = len(cols)
    match t:
        case PropAtom(i):
            period = n ** (k - 1 - cols[i])
            return (np.arange(m) // period) % n
        case Const(nm):
            return np.full(m, A.app(nm), dtype=np.int64)
        case Bin(op, l, r):
            tab = np.array(A.table(op), dtype=np.int64)
            return tab[_vectors(A, l, cols, m), _vectors(A, r, cols, m)]
        case Modal(md, b):
            tab = np.array(A.box if md == "box" else A.dia, dtype=np.int64)
            return tab[_vectors(A, b, cols, m)]
    raise AlgebraError("E-VIOLATION", f"bad term {t!r}")


def eval_equation(A: FiniteAlgebra, eq: TermEquation,
                  assignment: Optional[dict[int, int]] = None):
    """Single-assignment mode returns (lhs value, rhs value).  All mode
    (assignment None) returns None if the equation holds, else the first
    violating assignment in lexicographic order."""
    if assignment is not None:
        return (eval_term(A, eq.lhs, assignment), eval_term(A, eq.rhs, assignment))
    vs = eq.variables()
    n = A.size
    m = n ** len(vs)
    if m > EVAL_CAP:
        raise AlgebraError("E-CAP", f"{m} assignments exceed the evaluation cap")
    cols = {v: i for i, v in enumerate(vs)}
    lv = _vectors(A, eq.lhs, cols, m)
    rv = _vectors(A, eq.rhs, cols, m)
    bad = lv != rv
    if eq.premise is not None:
        pl = _vectors(A, eq.premise[0], cols, m)
        pr = _vectors(A, eq.premise[1], cols, m)
        bad &= pl == pr
    idx = np.flatnonzero(bad)
    if idx.size == 0:
        return None
    i = int(idx[0])
    k = len(vs)
    return {v: (i // n ** (k - 1 - cols[v])) % n for v in vs}


# ---------------------------------------------------------------------------
# catalog

CATALOG_NAMES = ("chain2", "godel3", "l3m", "diamond", "bool4")


def load_catalog(name: str) -> FiniteAlgebra:
    data = resources.files("onevar.catalog").joinpath(f"{name}.json").read_text()
    A = from_json(json.loads(data), name=name)
    profile = catalog_profile(name)
    validate(A, profile)
    return A


def catalog_profile(name: str) -> str:
    if name == "diamond":
        return "LAT"
    return "M-FLE" if name == "l3m" else "FLE"


def catalog() -> list[FiniteAlgebra]:
    return [load_catalog(n) for n in CATALOG_NAMES]


def catalog_mlattices() -> list[FiniteAlgebra]:
    """Every m-lattice derivable from the catalog: shipped modalities as-is,
    otherwise one expansion per relatively complete subuniverse."""
    out = []
    for name in CATALOG_NAMES:
        A = load_catalog(name)
        if A.modal:
            out.append(A)
        else:
            for sub in relatively_complete_subalgebras(A):
                out.append(expand_from_subalgebra(A, sub))
    return out


def countermodel_search(eq: TermEquation, scope: Optional[list[str]] = None):
    """Scan catalog m-lattices in canonical order; return (algebra,
    assignment) for the first failure or None."""
    names = list(scope) if scope else list(CATALOG_NAMES)
    needs_fle = eq.symbols() & {"*", "->", "e", "f"}
    for name in names:
        A = load_catalog(name)
        if needs_fle and not all(A.has(op) for op in ("*", "->", "e", "f")):
            continue
        mls = [A] if A.modal else [
            expand_from_subalgebra(A, sub)
            for sub in relatively_complete_subalgebras(A)]
        for M in mls:
            hit = eval_equation(M, eq)
            if hit is not None:
                return M, hit
    return None


# ---------------------------------------------------------------------------
# lattice enumeration (small sizes, for the correspondence checks)

def enumerate_lattices(n: int) -> list[FiniteAlgebra]:
    """All lattices on 0..n-1 whose order has 0 bottom, n-1 top, and is a
    linear extension of the index order.  Every finite lattice is isomorphic
    to one of these."""
    if n == 1:
        return [make_algebra(LAT_SIG, 1, {"&": [[0]], "|": [[0]]}, name="lat1-0")]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for bits in range(1 << len(pairs)):
        rel = [[i == j for j in range(n)] for i in range(n)]
        for idx, (i, j) in enumerate(pairs):
            if bits >> idx & 1:
                rel[i][j] = True
        if not all(rel[0][j] and rel[j][n - 1] for j in range(n)):
            continue
        if not _transitive(rel, n):
            continue
        tabs = _lattice_tables(rel, n)
        if tabs is None:
            continue
        out.append(make_algebra(LAT_SIG, n, {"&": tabs[0], "|": tabs[1]},
                                name=f"lat{n}-{bits}"))
    return out


def _transitive(rel, n) -> bool:
    for i in range(n):
        for j in range(n):
            if rel[i][j]:
                for k in range(n):
                    if rel[j][k] and not rel[i][k]:
                        return False
    return True


def _lattice_tables(rel, n):
    meet = [[None] * n for _ in range(n)]
    join = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            lower = [c for c in range(n) if rel[c][a] and rel[c][b]]
            upper = [c for c in range(n) if rel[a][c] and rel[b][c]]
            glb = [c for c in lower if all(rel[d][c] for d in lower)]
            lub = [c for c in upper if all(rel[c][d] for d in upper)]
            if len(glb) != 1 or len(lub) != 1:
                return None
            meet[a][b] = glb[0]
            join[a][b] = lub[0]
    return meet, join


def validate_mlattice_fully(M: FiniteAlgebra, fle: bool) -> None:
    """M-profile validation plus the derived laws L4, L5, the dia fixpoint
    law, and on residuated algebras both L6 equations."""
    validate(M, "M-FLE" if fle else "M-LAT")
    names = ["L4_box", "L4_dia", "L5_box", "L5_dia"]
    if fle:
        names += ["L6_box", "L6_dia"]
    for nm in names:
        bad = eval_equation(M, BUILTIN_EQUATIONS[nm])
        if bad is not None:
            raise AlgebraError("E-VIOLATION", f"derived law {nm} fails", bad)
    for eq in _star_equations(M, "box") + _star_equations(M, "dia"):
        bad = eval_equation(M, eq)
        if bad is not None:
            raise AlgebraError("E-VIOLATION", f"{eq.name} fails", bad)
