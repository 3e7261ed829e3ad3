"""Formula languages and translations.

Two term languages share most of their structure:

* first-order formulas over unary predicates ``P0, P1, ...``, a single
  bindable variable ``x``, free variables ``y1, y2, ...``, the connectives
  ``& | * ->``, constants ``e f`` and the quantifiers ``forall x`` /
  ``exists x``;
* modal formulas over propositional atoms ``p0, p1, ...`` with the same
  connectives and the unary modalities ``[]`` and ``<>``.

First-order formulas obey the restriction that no ``yN`` occurs inside the
scope of a quantifier, and quantifiers bind only ``x``.  A consequence used
throughout: every quantified subformula is a sentence.

The two standard translations map ``forall``/``exists`` to ``[]``/``<>``
and ``Pi(v)`` to ``pi``; they are mutually inverse on the one-variable
sublanguage (free variables all ``x``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union


class ParseError(ValueError):
    """Raised on malformed input; `code` is one of E-SYNTAX, E-BOUND-VAR, E-SCOPE."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


# ---------------------------------------------------------------------------
# variables

@dataclass(frozen=True)
class Var:
    """The bindable variable x (index None) or a free variable yN."""

    index: Optional[int] = None

    def __str__(self) -> str:
        return "x" if self.index is None else f"y{self.index}"

    def sort_key(self) -> tuple:
        return (0, 0) if self.index is None else (1, self.index)


X = Var()


def yvar(n: int) -> Var:
    return Var(n)


# ---------------------------------------------------------------------------
# formula trees

BIN_OPS = ("*", "&", "|", "->")


@dataclass(frozen=True)
class Atom:
    """First-order atom Pi(v)."""

    pred: int
    var: Var


@dataclass(frozen=True)
class PropAtom:
    """Modal atom pi."""

    index: int


@dataclass(frozen=True)
class Const:
    name: str  # "e" or "f"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quant:
    q: str  # "forall" or "exists"
    body: "FOFormula"


@dataclass(frozen=True)
class Modal:
    m: str  # "box" or "dia"
    body: "ModalFormula"


FOFormula = Union[Atom, Const, Bin, Quant]
ModalFormula = Union[PropAtom, Const, Bin, Modal]
Formula = Union[FOFormula, ModalFormula]

E = Const("e")
F = Const("f")


# ---------------------------------------------------------------------------
# basic queries

def free_vars(phi: FOFormula) -> set[Var]:
    """Free variables of a first-order formula (x is bound by quantifiers).

    Parsed formulas keep free variables out of quantifier scopes, but
    interpolant construction can rebind a variable under a new quantifier,
    so the general definition is used here.
    """
    match phi:
        case Atom(_, v):
            return {v}
        case Const(_):
            return set()
        case Bin(_, l, r):
            return free_vars(l) | free_vars(r)
        case Quant(_, b):
            return free_vars(b) - {X}
    raise TypeError(f"not a first-order formula: {phi!r}")


def substitute(phi: FOFormula, frm: Var, to: Var) -> FOFormula:
    """Replace every free occurrence of `frm` by `to`.

    Capture-free on this language: a free yN never sits under a quantifier
    in parsed input, so replacing yN by x cannot be captured; x itself is
    bound by every quantifier, so frm = x stops at quantifiers.
    """
    match phi:
        case Atom(p, v):
            return Atom(p, to) if v == frm else phi
        case Const(_):
            return phi
        case Bin(op, l, r):
            return Bin(op, substitute(l, frm, to), substitute(r, frm, to))
        case Quant(q, b):
            return phi if frm == X else Quant(q, substitute(b, frm, to))
    raise TypeError(f"not a first-order formula: {phi!r}")


def is_modalized(alpha: ModalFormula) -> bool:
    """True iff every atom occurrence lies under some modality."""
    match alpha:
        case PropAtom(_):
            return False
        case Const(_):
            return True
        case Bin(_, l, r):
            return is_modalized(l) and is_modalized(r)
        case Modal(_, _):
            return True
    raise TypeError(f"not a modal formula: {alpha!r}")


def is_closed(phi: Formula) -> bool:
    """Sentencehood: no free variables (FO) / fully modalized (modal)."""
    if isinstance(phi, (PropAtom, Modal)):
        return is_modalized(phi)
    if isinstance(phi, (Atom, Quant)):
        return not free_vars(phi)
    if isinstance(phi, Const):
        return True
    if isinstance(phi, Bin):
        return is_closed(phi.left) and is_closed(phi.right)
    raise TypeError(f"not a formula: {phi!r}")


def is_fo(phi: Formula) -> bool:
    match phi:
        case Atom(_, _):
            return True
        case Const(_):
            return True
        case Bin(_, l, r):
            return is_fo(l) and is_fo(r)
        case Quant(_, b):
            return is_fo(b)
    return False


def is_modal(phi: Formula) -> bool:
    match phi:
        case PropAtom(_):
            return True
        case Const(_):
            return True
        case Bin(_, l, r):
            return is_modal(l) and is_modal(r)
        case Modal(_, b):
            return is_modal(b)
    return False


def atoms_of(phi: Formula) -> set[int]:
    """Predicate / atom indices occurring in a formula."""
    match phi:
        case Atom(p, _):
            return {p}
        case PropAtom(i):
            return {i}
        case Const(_):
            return set()
        case Bin(_, l, r):
            return atoms_of(l) | atoms_of(r)
        case Quant(_, b) | Modal(_, b):
            return atoms_of(b)
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# translations

def star(phi: FOFormula) -> ModalFormula:
    """First-order to modal: forall -> [], exists -> <>, Pi(v) -> pi."""
    match phi:
        case Atom(p, _):
            return PropAtom(p)
        case Const(_):
            return phi
        case Bin(op, l, r):
            return Bin(op, star(l), star(r))
        case Quant(q, b):
            return Modal("box" if q == "forall" else "dia", star(b))
    raise TypeError(f"not a first-order formula: {phi!r}")


def circle(alpha: ModalFormula) -> FOFormula:
    """Modal to first-order: [] -> forall x, <> -> exists x, pi -> Pi(x)."""
    match alpha:
        case PropAtom(i):
            return Atom(i, X)
        case Const(_):
            return alpha
        case Bin(op, l, r):
            return Bin(op, circle(l), circle(r))
        case Modal(m, b):
            return Quant("forall" if m == "box" else "exists", circle(b))
    raise TypeError(f"not a modal formula: {alpha!r}")


# ---------------------------------------------------------------------------
# rendering

# precedence levels, tightest first: unary (4), * (3), & (2), | (1), -> (0)
_PREC = {"->": 0, "|": 1, "&": 2, "*": 3}


def render(phi: Formula) -> str:
    """Minimal-parenthesis text form; parse(render(phi)) == phi."""
    return _render(phi, -1)


def _render(phi: Formula, parent: int) -> str:
    match phi:
        case Atom(p, v):
            return f"P{p}({v})"
        case PropAtom(i):
            return f"p{i}"
        case Const(name):
            return name
        case Quant(q, b):
            s = f"{q} x {_render_tight(b)}"
            return f"({s})" if parent >= 4 else s
        case Modal(m, b):
            tok = "[]" if m == "box" else "<>"
            return f"{tok}{_render_tight(b)}"
        case Bin(op, l, r):
            p = _PREC[op]
            if op == "->":  # right-associative
                ls = _render(l, p + 1)
                rs = _render(r, p)
            else:  # left-associative
                ls = _render(l, p)
                rs = _render(r, p + 1)
            s = f"{ls} {op} {rs}"
            return f"({s})" if p < parent else s
    raise TypeError(f"not a formula: {phi!r}")


def _render_tight(phi: Formula) -> str:
    """Render a unary-operator body, parenthesising anything looser than unary."""
    if isinstance(phi, Bin):
        return f"({_render(phi, -1)})"
    return _render(phi, 4)


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<box>\[\])|(?P<dia><>)|(?P<sym>[()&|*])"
    r"|(?P<word>[A-Za-z]+[0-9]*))"
)


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ParseError("E-SYNTAX", f"unexpected character at {pos}: {text[pos:]!r}")
            break
        pos = m.end()
        tokens.append(next(g for g in m.groups() if g is not None))
    return tokens


class _Parser:
    def __init__(self, tokens: list[str], modal: bool):
        self.tokens = tokens
        self.pos = 0
        self.modal = modal
        self.depth = 0  # quantifier nesting depth

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("E-SYNTAX", "unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok: str):
        got = self.next()
        if got != tok:
            raise ParseError("E-SYNTAX", f"expected {tok!r}, got {got!r}")

    def parse(self) -> Formula:
        phi = self.parse_level(0)
        if self.peek() is not None:
            raise ParseError("E-SYNTAX", f"trailing input: {self.peek()!r}")
        return phi

    def parse_level(self, level: int) -> Formula:
        if level == 0:  # -> right-associative
            left = self.parse_level(1)
            if self.peek() == "->":
                self.next()
                return Bin("->", left, self.parse_level(0))
            return left
        if level <= 3:  # | & * left-associative
            op = {1: "|", 2: "&", 3: "*"}[level]
            left = self.parse_level(level + 1)
            while self.peek() == op:
                self.next()
                left = Bin(op, left, self.parse_level(level + 1))
            return left
        return self.parse_unary()

    def parse_unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("E-SYNTAX", "unexpected end of input")
        if tok in ("forall", "exists"):
            if self.modal:
                raise ParseError("E-SYNTAX", f"{tok} not allowed in modal formulas")
            self.next()
            v = self.parse_var()
            if v != X:
                raise ParseError("E-BOUND-VAR", f"quantifier may bind only x, not {v}")
            self.depth += 1
            body = self.parse_unary()
            self.depth -= 1
            return Quant(tok, body)
        if tok in ("[]", "<>"):
            if not self.modal:
                raise ParseError("E-SYNTAX", f"{tok} not allowed in first-order formulas")
            self.next()
            return Modal("box" if tok == "[]" else "dia", self.parse_unary())
        if tok == "(":
            self.next()
            phi = self.parse_level(0)
            self.expect(")")
            return phi
        return self.parse_atom()

    def parse_var(self) -> Var:
        tok = self.next()
        if tok == "x":
            return X
        m = re.fullmatch(r"y([0-9]+)", tok)
        if m:
            return Var(int(m.group(1)))
        raise ParseError("E-BOUND-VAR" if self.tokens[self.pos - 2] in ("forall", "exists")
                         else "E-SYNTAX", f"not a variable: {tok!r}")

    def parse_atom(self) -> Formula:
        tok = self.next()
        if tok in ("e", "f"):
            return Const(tok)
        if self.modal:
            m = re.fullmatch(r"p([0-9]+)", tok)
            if m:
                return PropAtom(int(m.group(1)))
            raise ParseError("E-SYNTAX", f"unexpected token {tok!r}")
        m = re.fullmatch(r"P([0-9]+)", tok)
        if m:
            self.expect("(")
            v = self.parse_var()
            self.expect(")")
            if self.depth > 0 and v != X:
                raise ParseError("E-SCOPE", f"free variable {v} inside quantifier scope")
            return Atom(int(m.group(1)), v)
        raise ParseError("E-SYNTAX", f"unexpected token {tok!r}")


def parse_fo(text: str) -> FOFormula:
    """Parse a first-order formula; rejects yN under quantifiers (E-SCOPE)."""
    return _Parser(_tokenize(text), modal=False).parse()


def parse_modal(text: str) -> ModalFormula:
    """Parse a modal formula."""
    return _Parser(_tokenize(text), modal=True).parse()


# ---------------------------------------------------------------------------
# helpers shared by proof modules

def fresh_var(used: set[Var], start: int = 1) -> Var:
    """Lowest yN not in `used`."""
    n = start
    while Var(n) in used:
        n += 1
    return Var(n)


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    if isinstance(phi, Bin):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, (Quant, Modal)):
        yield from subformulas(phi.body)
