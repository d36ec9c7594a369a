"""Kripke models over agent partitions, direct satisfaction, and the
brute-force enumeration oracle.

Relations are stored as partitions (one equivalence class list per agent), so
reflexivity, symmetry and transitivity hold by construction. Satisfaction is
evaluated by compiling a formula once into a truth-mask function: each world
is a bit, each subformula evaluates to an integer bitmask over the model's
worlds. That keeps bulk oracle sweeps (thousands of models per formula)
cheap without a second semantics.
"""

from __future__ import annotations

import json
from typing import Callable, Iterator

from .syntax import (
    And,
    Atom,
    ContextFormula,
    Formula,
    Iff,
    Imp,
    Know,
    Not,
    Or,
    Poss,
    Rel,
    formula_info,
    parse_context,
    render_context,
    variant_contexts_names,
)

FRESH_CONTEXT_PREFIX = "_ctx_"

DEFAULT_ENUMERATION_CEILING = 5_000_000


class ModelError(ValueError):
    """The model cannot support the requested evaluation."""


class UnresolvedContextError(KeyError):
    """A context name had no binding and auto-binding was disabled."""


class EnumerationCeilingError(RuntimeError):
    """The requested model space exceeds the configured ceiling."""


class KripkeModel:
    """Finite model: world ids, per-agent partitions, atomic valuation.

    Immutable after construction; invariant violations are reported by
    check_model rather than raised, so defective models can be inspected.
    """

    def __init__(self, worlds, relations, valuation):
        self.worlds: tuple[str, ...] = tuple(worlds)
        self.relations: dict[str, tuple[frozenset[str], ...]] = {
            agent: tuple(frozenset(c) for c in classes)
            for agent, classes in relations.items()
        }
        self.valuation: dict[str, frozenset[str]] = {
            atom: frozenset(ws) for atom, ws in valuation.items()
        }
        self._index = {w: i for i, w in enumerate(self.worlds)}

    def world_index(self, world: str) -> int:
        try:
            return self._index[world]
        except KeyError:
            raise ModelError(f"unknown world {world!r}") from None

    def __repr__(self):
        return f"KripkeModel(worlds={self.worlds!r})"

    def __eq__(self, other):
        return (
            isinstance(other, KripkeModel)
            and self.worlds == other.worlds
            and self.relations == other.relations
            and self.valuation == other.valuation
        )

    def to_json(self) -> dict:
        return {
            "worlds": list(self.worlds),
            "agents": {
                agent: [sorted(c, key=self._index.get) for c in classes]
                for agent, classes in self.relations.items()
            },
            "valuation": {
                atom: sorted(ws, key=self._index.get)
                for atom, ws in self.valuation.items()
            },
        }

    @classmethod
    def from_json(cls, data) -> "KripkeModel":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["worlds"], data.get("agents", {}), data.get("valuation", {}))

    def to_dot(self, highlight: str | None = None) -> str:
        """Graphviz export: worlds as nodes listing their atoms, one labeled
        edge per pair inside an agent class."""
        lines = ["graph model {", "  node [shape=box];"]
        for w in self.worlds:
            atoms = sorted(a for a, ws in self.valuation.items() if w in ws)
            label = w + r"\n" + "{" + ", ".join(atoms) + "}"
            extra = ' color="red"' if w == highlight else ""
            lines.append(f'  "{w}" [label="{label}"{extra}];')
        for agent, classes in sorted(self.relations.items()):
            for cl in classes:
                members = sorted(cl, key=self._index.get)
                for i, a in enumerate(members):
                    for b in members[i + 1 :]:
                        lines.append(f'  "{a}" -- "{b}" [label="{agent}"];')
        lines.append("}")
        return "\n".join(lines)


def check_model(model: KripkeModel) -> list[str]:
    """Invariant audit; empty list means the model is well-formed."""
    violations = []
    if not model.worlds:
        violations.append("model has no worlds")
    if len(set(model.worlds)) != len(model.worlds):
        violations.append("duplicate world ids")
    worlds = set(model.worlds)
    for agent, classes in model.relations.items():
        seen: set[str] = set()
        for cl in classes:
            if not cl:
                violations.append(f"agent {agent}: empty equivalence class")
            if cl & seen:
                violations.append(
                    f"agent {agent}: worlds {sorted(cl & seen)} in two classes"
                )
            seen |= cl
        if seen - worlds:
            violations.append(
                f"agent {agent}: classes mention unknown worlds {sorted(seen - worlds)}"
            )
        if worlds - seen:
            violations.append(
                f"agent {agent}: worlds {sorted(worlds - seen)} not covered by any class"
            )
    for atom, ws in model.valuation.items():
        if ws - worlds:
            violations.append(
                f"valuation of {atom}: unknown worlds {sorted(ws - worlds)}"
            )
    return violations


class ContextEnv:
    """Binding of context names to context formulas.

    Unbound names auto-resolve to a reserved fresh atom (``_ctx_<name>``)
    unless auto-binding is disabled. Validity of normal modal logics is
    closed under uniform substitution, so schema verdicts computed with an
    atomic stand-in agree with verdicts quantified over all literal
    conjunction instances.
    """

    def __init__(self, bindings=None, auto_bind: bool = True):
        self.bindings: dict[str, ContextFormula] = dict(bindings or {})
        self.auto_bind = auto_bind

    def binds(self, name: str) -> bool:
        return name in self.bindings

    def resolve(self, name: str) -> ContextFormula:
        if name in self.bindings:
            return self.bindings[name]
        if not self.auto_bind:
            raise UnresolvedContextError(name)
        return ContextFormula(((FRESH_CONTEXT_PREFIX + name, True),))

    def completed(self, names) -> "ContextEnv":
        """Explicit env binding every listed name (auto names get frozen in)."""
        bindings = dict(self.bindings)
        for name in names:
            bindings[name] = self.resolve(name)
        return ContextEnv(bindings, auto_bind=self.auto_bind)

    def to_json(self) -> dict:
        return {name: render_context(cf) for name, cf in sorted(self.bindings.items())}

    @classmethod
    def from_json(cls, data, auto_bind: bool = True) -> "ContextEnv":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            {name: parse_context(text) for name, text in data.items()},
            auto_bind=auto_bind,
        )

    def __repr__(self):
        return f"ContextEnv({self.to_json()!r}, auto_bind={self.auto_bind})"


def eval_context(model: KripkeModel, world: str, env: ContextEnv, name: str) -> bool:
    """Truth of the context body bound to ``name`` at ``world``."""
    cf = env.resolve(name)
    if cf.is_top:
        return True
    if cf.is_bot:
        return False
    return all(
        (world in model.valuation.get(atom, frozenset())) == positive
        for atom, positive in cf.literals
    )


# ---------------------------------------------------------------------------
# Mask-compiled satisfaction


class _ModelCtx:
    """Per-model evaluation tables: valuation masks and class masks."""

    def __init__(self, model: KripkeModel):
        self.model = model
        index = model._index
        self.full = (1 << len(model.worlds)) - 1
        self.val = {
            atom: _mask_of(ws, index) for atom, ws in model.valuation.items()
        }
        self.classes = {
            agent: [_mask_of(cl, index) for cl in classes]
            for agent, classes in model.relations.items()
        }


def _mask_of(worlds, index) -> int:
    m = 0
    for w in worlds:
        m |= 1 << index[w]
    return m


def _context_mask_fn(env: ContextEnv, name: str) -> Callable[[_ModelCtx], int]:
    cf = env.resolve(name)
    if cf.is_top:
        return lambda ctx: ctx.full
    if cf.is_bot:
        return lambda ctx: 0

    lits = cf.literals

    def run(ctx: _ModelCtx) -> int:
        m = ctx.full
        for atom, positive in lits:
            vm = ctx.val.get(atom, 0)
            m &= vm if positive else (ctx.full & ~vm)
        return m

    return run


def compile_formula(f: Formula, env: ContextEnv) -> Callable[[_ModelCtx], int]:
    """Compile a formula into a truth-mask function over model contexts.

    An atom whose name is explicitly bound in the environment denotes its
    context body (this is how context names surviving reduction keep their
    meaning); all other atoms read the valuation.
    """
    memo: dict[Formula, Callable[[_ModelCtx], int]] = {}

    def go(g: Formula) -> Callable[[_ModelCtx], int]:
        fn = memo.get(g)
        if fn is None:
            fn = build(g)
            memo[g] = fn
        return fn

    def build(g: Formula) -> Callable[[_ModelCtx], int]:
        match g:
            case Atom(name):
                if env.binds(name):
                    return _context_mask_fn(env, name)
                return lambda ctx: ctx.val.get(name, 0)
            case Not(body):
                b = go(body)
                return lambda ctx: ctx.full & ~b(ctx)
            case And(l, r):
                a, b = go(l), go(r)
                return lambda ctx: a(ctx) & b(ctx)
            case Or(l, r):
                a, b = go(l), go(r)
                return lambda ctx: a(ctx) | b(ctx)
            case Imp(l, r):
                a, b = go(l), go(r)
                return lambda ctx: (ctx.full & ~a(ctx)) | b(ctx)
            case Iff(l, r):
                a, b = go(l), go(r)
                return lambda ctx: ctx.full & ~(a(ctx) ^ b(ctx))
            case Know(agent, _, body):
                b = go(body)

                def know(ctx: _ModelCtx, agent=agent, b=b) -> int:
                    if agent not in ctx.classes:
                        raise ModelError(f"model lacks agent {agent!r}")
                    bm = b(ctx)
                    out = 0
                    for cm in ctx.classes[agent]:
                        if bm & cm == cm:
                            out |= cm
                    return out

                return know
            case Poss(agent, _, body):
                b = go(body)

                def poss(ctx: _ModelCtx, agent=agent, b=b) -> int:
                    if agent not in ctx.classes:
                        raise ModelError(f"model lacks agent {agent!r}")
                    bm = b(ctx)
                    out = 0
                    for cm in ctx.classes[agent]:
                        if bm & cm:
                            out |= cm
                    return out

                return poss
            case Rel(body, context):
                return build_rel(body, context)
        raise TypeError(f"not a formula: {g!r}")

    def build_rel(body: Formula, c: str) -> Callable[[_ModelCtx], int]:
        guard = _context_mask_fn(env, c)
        match body:
            case Atom(_):
                b = go(body)
                return lambda ctx: (ctx.full & ~guard(ctx)) | b(ctx)
            case Rel(_, _):
                b = go(body)
                return lambda ctx: (ctx.full & ~guard(ctx)) | b(ctx)
            case Not(inner):
                b = go(Rel(inner, c))
                return lambda ctx: (ctx.full & ~guard(ctx)) | (ctx.full & ~b(ctx))
            case And(l, r):
                # As in the satisfaction table: no guard on conjunction.
                a, b = go(Rel(l, c)), go(Rel(r, c))
                return lambda ctx: a(ctx) & b(ctx)
            case Or(l, r):
                a, b = go(Rel(l, c)), go(Rel(r, c))
                return lambda ctx: (ctx.full & ~guard(ctx)) | a(ctx) | b(ctx)
            case Imp(l, r):
                a, b = go(Rel(l, c)), go(Rel(r, c))
                return lambda ctx: (ctx.full & ~guard(ctx)) | (
                    (ctx.full & ~a(ctx)) | b(ctx)
                )
            case Iff(l, r):
                return go(Rel(And(Imp(l, r), Imp(r, l)), c))
            case Know(agent, variant, inner):
                cx, cy = variant_contexts_names(variant, c, agent)
                gx = _context_mask_fn(env, cx)
                k = go(Know(agent, variant, Rel(inner, cy)))
                return lambda ctx: (ctx.full & ~gx(ctx)) | k(ctx)
            case Poss(agent, variant, inner):
                return go(Rel(Not(Know(agent, variant, Not(inner))), c))
        raise TypeError(f"not a formula: {body!r}")

    return go(f)


def truth_mask(model: KripkeModel, env: ContextEnv, f: Formula) -> int:
    return compile_formula(f, env)(_ModelCtx(model))


def satisfies(model: KripkeModel, world: str, env: ContextEnv, f: Formula) -> bool:
    """Direct truth of ``f`` at ``world``.

    Preconditions: check_model(model) is empty and world is in the model.
    """
    return bool(truth_mask(model, env, f) >> model.world_index(world) & 1)


# ---------------------------------------------------------------------------
# Bounded enumeration


def bell_number(n: int) -> int:
    if n == 0:
        return 1
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[-1]


def model_space_size(max_worlds: int, n_agents: int, n_atoms: int) -> int:
    return sum(
        bell_number(n) ** n_agents * 2 ** (n * n_atoms)
        for n in range(1, max_worlds + 1)
    )


def set_partitions(items: tuple):
    """All partitions of items, in restricted-growth-string order."""
    n = len(items)
    rgs = [0] * n

    def rec(i: int, maxval: int):
        if i == n:
            k = maxval + 1
            classes = [[] for _ in range(k)]
            for j, v in enumerate(rgs):
                classes[v].append(items[j])
            yield tuple(frozenset(c) for c in classes)
            return
        for v in range(maxval + 2):
            rgs[i] = v
            yield from rec(i + 1, max(maxval, v))

    if n == 0:
        yield ()
        return
    yield from rec(1, 0)


def enumerate_models(
    max_worlds: int,
    agents,
    atoms,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
) -> Iterator[KripkeModel]:
    """Every model up to max_worlds worlds over the given agents and atoms.

    Deterministic order: world count ascending; per-agent partitions in
    restricted-growth-string order, agents cycling fastest on the right;
    valuations by bitmask, atoms cycling fastest on the right. No isomorphism
    reduction.
    """
    agents = list(agents)
    atoms = list(atoms)
    if max_worlds < 1:
        raise ValueError("max_worlds must be at least 1")
    total = model_space_size(max_worlds, len(agents), len(atoms))
    if total > ceiling:
        raise EnumerationCeilingError(
            f"{total} models exceed the ceiling of {ceiling}"
        )
    for n in range(1, max_worlds + 1):
        worlds = tuple(f"w{i + 1}" for i in range(n))
        partitions = list(set_partitions(worlds))
        yield from _models_for(worlds, agents, atoms, partitions)


def _models_for(worlds, agents, atoms, partitions):
    n = len(worlds)

    def rec_agents(i: int, chosen):
        if i == len(agents):
            yield from rec_atoms(dict(zip(agents, chosen)))
            return
        for p in partitions:
            yield from rec_agents(i + 1, chosen + [p])

    def rec_atoms(relations):
        def rec(i: int, val):
            if i == len(atoms):
                yield KripkeModel(worlds, relations, dict(val))
                return
            for mask in range(1 << n):
                ws = frozenset(w for j, w in enumerate(worlds) if mask >> j & 1)
                yield from rec(i + 1, val + [(atoms[i], ws)])

        yield from rec(0, [])

    yield from rec_agents(0, [])


def find_countermodel(
    f: Formula,
    env: ContextEnv | None = None,
    max_worlds: int = 3,
    agents=None,
    atoms=None,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
) -> tuple[KripkeModel, str] | None:
    """First (model, world) falsifying f, scanning the documented order.

    None means no counter-model within the bound; that does not certify
    validity. Agents and atoms default to those of the formula, plus the
    atoms needed to stand in for its (resolved) contexts.
    """
    from .reduction import needed_context_names

    env = env or ContextEnv()
    info = formula_info(f)
    if agents is None:
        agents = sorted(info.agents)
    if atoms is None:
        atom_set = set(info.atoms)
        for name in needed_context_names(f):
            atom_set |= {a for a, _ in env.resolve(name).literals}
        atoms = sorted(atom_set)
    full_env = env.completed(needed_context_names(f))
    fn = compile_formula(f, full_env)
    for model in enumerate_models(max_worlds, agents, atoms, ceiling=ceiling):
        mask = fn(_ModelCtx(model))
        full = (1 << len(model.worlds)) - 1
        if mask != full:
            for i, w in enumerate(model.worlds):
                if not mask >> i & 1:
                    return model, w
    return None
