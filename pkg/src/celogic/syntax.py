"""Formula and context-formula syntax: AST, parser, printers.

Concrete grammar (ASCII, with the listed unicode alternatives accepted on
input):

    formula := iff ;  iff := imp { "<->" imp } ;  imp := disj [ "->" imp ] ;
    disj := conj { "|" conj } ;  conj := unary { "&" unary } ;
    unary := "~" unary | "K" "{" ident ["," variant] "}" unary
           | "P" "{" ident ["," variant] "}" unary | primary ;
    primary := atom | group ;  group := "(" formula ")" { "^" ident } ;
    variant := "1.1" | "1.2" | "2.1" | "2.2" ;  atom, ident := [a-z][a-zA-Z0-9_]* ;
    context := "true" | "false" | lit { "&" lit } ;  lit := atom | "~" atom ;

A knowledge/possibility operator written without a variant tag parses as
"untagged" (variant None) unless a default variant is supplied; untagged
operators are rejected by the semantic layers, which need the tag to pick
the context interaction mode.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

VARIANTS = ("1.1", "1.2", "2.1", "2.2")

IDENT_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")


class FormulaSyntaxError(ValueError):
    """Raised on malformed formula or context input; carries the offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UntaggedOperatorError(ValueError):
    """An operation needed a variant tag on a K/P operator that has none."""


def agent_context(agent: str) -> str:
    """Name of the context assigned to an agent (agent ``j`` owns ``cj``)."""
    return "c" + agent


_VARIANT_CONTEXTS = {
    "1.1": ("current", "current"),
    "1.2": ("current", "agent"),
    "2.1": ("agent", "current"),
    "2.2": ("agent", "agent"),
}


def variant_contexts_names(
    variant: str | None, current: str, agent: str
) -> tuple[str, str]:
    """(condition, continuation) context names for a tagged knowledge operator
    relativized by ``current``: the first tag digit picks the condition
    context, the second the continuation context; 1 = the current context,
    2 = the agent's own."""
    if variant not in _VARIANT_CONTEXTS:
        raise UntaggedOperatorError(
            f"operator on agent {agent!r} under relativization needs a variant tag"
        )
    cond, cont = _VARIANT_CONTEXTS[variant]
    pick = {"current": current, "agent": agent_context(agent)}
    return pick[cond], pick[cont]


# ---------------------------------------------------------------------------
# Formula AST


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Know(Formula):
    agent: str
    variant: str | None
    body: Formula


@dataclass(frozen=True)
class Poss(Formula):
    agent: str
    variant: str | None
    body: Formula


@dataclass(frozen=True)
class Rel(Formula):
    """Context relativization: the body read against the named context."""

    body: Formula
    context: str


# ---------------------------------------------------------------------------
# Context formulas (conjunctions of literals, canonicalized)


@dataclass(frozen=True)
class ContextFormula:
    """Canonical conjunction of literals; () is top, contradictory is bottom.

    ``literals`` is a sorted, duplicate-free tuple of (atom, positive) pairs.
    A pair p/~p canonicalizes to the contradictory form.
    """

    literals: tuple[tuple[str, bool], ...] = ()
    contradictory: bool = False

    @property
    def is_top(self) -> bool:
        return not self.contradictory and not self.literals

    @property
    def is_bot(self) -> bool:
        return self.contradictory


TOP = ContextFormula()
BOT = ContextFormula(contradictory=True)


def make_context(literals) -> ContextFormula:
    """Canonicalize a literal list: dedupe, sort, collapse p & ~p to bottom."""
    seen = set(literals)
    for name, positive in seen:
        if (name, not positive) in seen:
            return BOT
    return ContextFormula(tuple(sorted(seen)))


def context_body_formula(cf: ContextFormula) -> Formula:
    """The literal conjunction as a Formula; top/bottom use a reserved atom."""
    if cf.is_top:
        a = Atom("_true")
        return Or(a, Not(a))
    if cf.is_bot:
        a = Atom("_true")
        return And(a, Not(a))
    parts: list[Formula] = [
        Atom(n) if positive else Not(Atom(n)) for n, positive in cf.literals
    ]
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_SPEC = [
    ("IFF", r"<->|↔"),
    ("IMP", r"->|→"),
    ("AND", r"&|∧"),
    ("OR", r"\||∨"),
    ("NOT", r"~|¬"),
    ("VARIANT", r"[12]\.[12]"),
    ("BADVARIANT", r"\d+\.\d+"),
    ("KOP", r"K"),
    ("POP", r"P"),
    ("LPAR", r"\("),
    ("RPAR", r"\)"),
    ("LBRACE", r"\{"),
    ("RBRACE", r"\}"),
    ("COMMA", r","),
    ("CARET", r"\^"),
    ("TRUE", r"⊤"),
    ("FALSE", r"⊥"),
    ("IDENT", r"[a-z][a-zA-Z0-9_]*"),
    ("WS", r"\s+"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in _TOKEN_SPEC))


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "WS":
            tokens.append(_Token(kind, m.group(), pos))
        pos = m.end()
    tokens.append(_Token("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, default_variant: str | None):
        self.tokens = _tokenize(text)
        self.i = 0
        self.default_variant = default_variant

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise FormulaSyntaxError(f"expected {what}", tok.pos)
        return self.next()

    # formula := iff
    def formula(self) -> Formula:
        out = self.imp()
        while self.peek().kind == "IFF":
            self.next()
            out = Iff(out, self.imp())
        return out

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek().kind == "IMP":
            self.next()
            return Imp(left, self.imp())
        return left

    def disj(self) -> Formula:
        out = self.conj()
        while self.peek().kind == "OR":
            self.next()
            out = Or(out, self.conj())
        return out

    def conj(self) -> Formula:
        out = self.unary()
        while self.peek().kind == "AND":
            self.next()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "NOT":
            self.next()
            return Not(self.unary())
        if tok.kind in ("KOP", "POP"):
            self.next()
            agent, variant = self._operator_tag()
            body = self.unary()
            cls = Know if tok.kind == "KOP" else Poss
            return cls(agent, variant, body)
        return self.primary()

    def _operator_tag(self) -> tuple[str, str | None]:
        self.expect("LBRACE", "'{' after modal operator")
        agent = self.expect("IDENT", "agent name").text
        variant = self.default_variant
        if self.peek().kind == "COMMA":
            self.next()
            tok = self.peek()
            if tok.kind == "BADVARIANT":
                raise FormulaSyntaxError(f"unknown variant tag {tok.text!r}", tok.pos)
            variant = self.expect("VARIANT", "variant tag").text
        self.expect("RBRACE", "'}'")
        return agent, variant

    def primary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "IDENT":
            self.next()
            return Atom(tok.text)
        if tok.kind == "LPAR":
            self.next()
            inner = self.formula()
            self.expect("RPAR", "')'")
            out = inner
            while self.peek().kind == "CARET":
                self.next()
                out = Rel(out, self.expect("IDENT", "context name").text)
            return out
        if tok.kind == "CARET":
            raise FormulaSyntaxError(
                "relativization applied to nothing (use '(...)^name')", tok.pos
            )
        raise FormulaSyntaxError("expected a formula", tok.pos)


def parse_formula(text: str, default_variant: str | None = None) -> Formula:
    """Parse concrete syntax into a Formula.

    ``default_variant`` fills operators written without a tag (``K{i} a``);
    with the default left as None such operators stay untagged.
    """
    if default_variant is not None and default_variant not in VARIANTS:
        raise ValueError(f"unknown default variant {default_variant!r}")
    if not text.strip():
        raise FormulaSyntaxError("empty input", 0)
    parser = _Parser(text, default_variant)
    out = parser.formula()
    tok = parser.peek()
    if tok.kind != "EOF":
        raise FormulaSyntaxError(f"unexpected trailing input {tok.text!r}", tok.pos)
    return out


def parse_context(text: str) -> ContextFormula:
    """Parse a context body: ``true``, ``false``, or a conjunction of literals."""
    if not text.strip():
        raise FormulaSyntaxError("empty input", 0)
    tokens = _tokenize(text)

    def _fail(tok: _Token):
        raise FormulaSyntaxError(
            "context bodies are conjunctions of literals (or true/false)", tok.pos
        )

    i = 0

    def peek() -> _Token:
        return tokens[i]

    first = peek()
    if first.kind == "TRUE" or (first.kind == "IDENT" and first.text == "true"):
        if tokens[1].kind != "EOF":
            _fail(tokens[1])
        return TOP
    if first.kind == "FALSE" or (first.kind == "IDENT" and first.text == "false"):
        if tokens[1].kind != "EOF":
            _fail(tokens[1])
        return BOT

    literals = []
    while True:
        tok = tokens[i]
        positive = True
        if tok.kind == "NOT":
            positive = False
            i += 1
            tok = tokens[i]
        if tok.kind != "IDENT" or tok.text in ("true", "false"):
            _fail(tok)
        literals.append((tok.text, positive))
        i += 1
        tok = tokens[i]
        if tok.kind == "EOF":
            break
        if tok.kind != "AND":
            _fail(tok)
        i += 1
    return make_context(literals)


# ---------------------------------------------------------------------------
# Printers

_LEVEL_IFF, _LEVEL_IMP, _LEVEL_OR, _LEVEL_AND, _LEVEL_UNARY, _LEVEL_ATOM = range(1, 7)


def _level(f: Formula) -> int:
    match f:
        case Iff():
            return _LEVEL_IFF
        case Imp():
            return _LEVEL_IMP
        case Or():
            return _LEVEL_OR
        case And():
            return _LEVEL_AND
        case Not() | Know() | Poss():
            return _LEVEL_UNARY
        case _:
            return _LEVEL_ATOM


def _tag(agent: str, variant: str | None) -> str:
    return f"{{{agent},{variant}}}" if variant else f"{{{agent}}}"


def render_formula(f: Formula) -> str:
    """Minimal-parenthesis concrete syntax; parses back to the same AST."""

    def wrap(g: Formula, minimum: int) -> str:
        s = render_formula(g)
        return f"({s})" if _level(g) < minimum else s

    match f:
        case Atom(name):
            return name
        case Not(body):
            return "~" + wrap(body, _LEVEL_UNARY)
        case And(l, r):
            return f"{wrap(l, _LEVEL_AND)} & {wrap(r, _LEVEL_AND + 1)}"
        case Or(l, r):
            return f"{wrap(l, _LEVEL_OR)} | {wrap(r, _LEVEL_OR + 1)}"
        case Imp(l, r):
            return f"{wrap(l, _LEVEL_IMP + 1)} -> {wrap(r, _LEVEL_IMP)}"
        case Iff(l, r):
            return f"{wrap(l, _LEVEL_IFF)} <-> {wrap(r, _LEVEL_IFF + 1)}"
        case Know(agent, variant, body):
            return f"K{_tag(agent, variant)} " + wrap(body, _LEVEL_UNARY)
        case Poss(agent, variant, body):
            return f"P{_tag(agent, variant)} " + wrap(body, _LEVEL_UNARY)
        case Rel(body, context):
            chain = [context]
            while isinstance(body, Rel):
                chain.append(body.context)
                body = body.body
            return f"({render_formula(body)})" + "".join(
                f"^{c}" for c in reversed(chain)
            )
    raise TypeError(f"not a formula: {f!r}")


def render_context(cf: ContextFormula) -> str:
    if cf.is_top:
        return "true"
    if cf.is_bot:
        return "false"
    return " & ".join(n if pos else f"~{n}" for n, pos in cf.literals)


# ---------------------------------------------------------------------------
# Structure report


@dataclass(frozen=True)
class FormulaInfo:
    atoms: frozenset[str]
    agents: frozenset[str]
    contexts: frozenset[str]
    modal_depth: int
    is_el: bool
    is_absolute: bool


def subformulas(f: Formula):
    """All subtrees of f, preorder."""
    yield f
    match f:
        case Not(body) | Know(_, _, body) | Poss(_, _, body) | Rel(body, _):
            yield from subformulas(body)
        case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
            yield from subformulas(l)
            yield from subformulas(r)


def node_count(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def modal_depth(f: Formula) -> int:
    match f:
        case Atom():
            return 0
        case Not(body) | Rel(body, _):
            return modal_depth(body)
        case Know(_, _, body) | Poss(_, _, body):
            return 1 + modal_depth(body)
        case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
            return max(modal_depth(l), modal_depth(r))
    raise TypeError(f"not a formula: {f!r}")


def formula_info(f: Formula) -> FormulaInfo:
    atoms: set[str] = set()
    agents: set[str] = set()
    contexts: set[str] = set()
    has_rel = False
    for g in subformulas(f):
        match g:
            case Atom(name):
                atoms.add(name)
            case Know(agent, _, _) | Poss(agent, _, _):
                agents.add(agent)
            case Rel(_, context):
                has_rel = True
                contexts.add(context)
    return FormulaInfo(
        atoms=frozenset(atoms),
        agents=frozenset(agents),
        contexts=frozenset(contexts),
        modal_depth=modal_depth(f),
        is_el=not has_rel,
        is_absolute=not has_rel,
    )
