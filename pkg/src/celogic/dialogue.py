"""Dialogical games: two players argue a thesis, the proponent P defending it
against the opponent O, over explicitly labeled worlds.

Move legality combines the particle rules (how each connective is attacked
and defended) with the structural rules:

- the thesis is asserted by P at world 1, moves alternate, and every later
  move attacks an earlier assertion or defends against an attack;
- a player with no legal move loses;
- every move must change the position: an attack places a demand not placed
  before, a defence answers a demand not answered that way before. Positions
  grow monotonically, so plays are finite and pure delay is impossible;
- repetition rights are asymmetric, in the style of repetition ranks: O
  attacks any given assertion at most once and answers any given attack at
  most once (one well-chosen instantiation refutes, and every choice gets
  its own play in the strategy search), while P may spend one right per
  distinct payload (P can need several instantiations of a single concession
  by O, and may return to an attack to defend it the other way);
- atoms are never attacked, and P may only state an atom at a world where O
  has already stated it;
- P may only use worlds already introduced, while O may introduce fresh
  successor worlds (bounded by a cap derived from the thesis's modal depth);
  within a cluster of worlds connected by one agent's steps, any given world
  may be chosen;
- P may only assert a context name at a world where O has asserted it first.

Context names behave like atoms for assertion bookkeeping but live under the
context formality rule rather than the atom rule; asserting a compound
context additionally grants its positive literals at that world.

Winning strategies are decided by AND-OR search over positions (sets of
assertions, attack records and defence records), memoized on the position.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from typing import Iterable

from .kripke import ContextEnv
from .syntax import (
    And,
    Atom,
    Formula,
    Iff,
    Imp,
    Know,
    Not,
    Or,
    Poss,
    Rel,
    UntaggedOperatorError,
    agent_context,
    formula_info,
    modal_depth,
    parse_formula,
    render_formula,
    variant_contexts_names,
)

P = "P"
O = "O"

Label = tuple[tuple[str, int], ...]

ROOT: Label = ()


class IllegalMoveError(ValueError):
    """A move violating a game rule; carries the rule's name."""

    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


class BudgetExhaustedError(RuntimeError):
    """Search budget ran out: the verdict is unknown, not false."""

    def __init__(self, nodes: int):
        super().__init__(f"search budget exhausted after {nodes} positions")
        self.nodes = nodes


def render_label(label: Label) -> str:
    return "1" + "".join(f"{agent}{index}" for agent, index in label)


def parse_label(text: str, agents: Iterable[str]) -> Label:
    """Parse a world name like ``1i1j2`` against the known agent names."""
    if not text.startswith("1"):
        raise ValueError(f"world name must start with 1: {text!r}")
    rest = text[1:]
    names = sorted(agents, key=len, reverse=True)
    steps = []
    while rest:
        for name in names:
            if rest.startswith(name):
                rest = rest[len(name):]
                digits = ""
                while rest and rest[0].isdigit():
                    digits += rest[0]
                    rest = rest[1:]
                if not digits:
                    raise ValueError(f"missing successor index in {text!r}")
                steps.append((name, int(digits)))
                break
        else:
            raise ValueError(f"cannot read world name {text!r}")
    return tuple(steps)


# ---------------------------------------------------------------------------
# Moves


@dataclass(frozen=True)
class AssertPayload:
    label: Label
    formula: Formula


@dataclass(frozen=True)
class RequestPayload:
    kind: str  # "?", "?_L", "?_R", "?_K", "?_P"
    agent: str | None = None
    label: Label | None = None  # world named by a "?_K" request


Payload = AssertPayload | RequestPayload


@dataclass(frozen=True)
class Move:
    actor: str
    kind: str  # "thesis" | "attack" | "defend"
    target: int | None
    payload: Payload


def render_payload(payload: Payload) -> str:
    if isinstance(payload, AssertPayload):
        return f"{render_label(payload.label)}: {render_formula(payload.formula)}"
    if payload.kind == "?_K":
        return f"?_K{{{payload.agent}}}/{render_label(payload.label)}"
    if payload.kind == "?_P":
        return f"?_P{{{payload.agent}}}"
    return payload.kind


def move_to_json(move: Move) -> dict:
    data: dict = {"actor": move.actor, "kind": move.kind}
    if move.target is not None:
        data["target"] = move.target
    if isinstance(move.payload, AssertPayload):
        data["payload"] = {
            "assert": {
                "label": render_label(move.payload.label),
                "formula": render_formula(move.payload.formula),
            }
        }
    else:
        req: dict = {"kind": move.payload.kind}
        if move.payload.agent is not None:
            req["agent"] = move.payload.agent
        if move.payload.label is not None:
            req["label"] = render_label(move.payload.label)
        data["payload"] = {"request": req}
    return data


def move_from_json(data: dict, agents: Iterable[str]) -> Move:
    payload_data = data["payload"]
    if "assert" in payload_data:
        a = payload_data["assert"]
        payload: Payload = AssertPayload(
            parse_label(a["label"], agents), parse_formula(a["formula"])
        )
    else:
        r = payload_data["request"]
        payload = RequestPayload(
            r["kind"],
            r.get("agent"),
            parse_label(r["label"], agents) if "label" in r else None,
        )
    return Move(data["actor"], data["kind"], data.get("target"), payload)


# ---------------------------------------------------------------------------
# Game formulas

# Equivalences are played as the conjunction of both implications, and a
# relativized possibility operator as its relativized knowledge dual; both
# match the compilation rules, so the game and the model semantics agree.


def game_form(f: Formula) -> Formula:
    match f:
        case Atom(_):
            return f
        case Not(body):
            return Not(game_form(body))
        case And(l, r):
            return And(game_form(l), game_form(r))
        case Or(l, r):
            return Or(game_form(l), game_form(r))
        case Imp(l, r):
            return Imp(game_form(l), game_form(r))
        case Iff(l, r):
            a, b = game_form(l), game_form(r)
            return And(Imp(a, b), Imp(b, a))
        case Know(agent, variant, body):
            return Know(agent, variant, game_form(body))
        case Poss(agent, variant, body):
            return Poss(agent, variant, game_form(body))
        case Rel(body, context):
            return _rel(game_form(body), context)
    raise TypeError(f"not a formula: {f!r}")


def _rel(body: Formula, context: str) -> Formula:
    if isinstance(body, Poss):
        return Rel(Not(Know(body.agent, body.variant, Not(body.body))), context)
    return Rel(body, context)


# ---------------------------------------------------------------------------
# Game state


@dataclass(frozen=True)
class GameRules:
    env_bindings: tuple  # frozen ContextEnv content: ((name, ContextFormula), ...)
    env_auto: bool
    ctx_names: frozenset[str]
    fresh_cap: int

    def env(self) -> ContextEnv:
        return ContextEnv(dict(self.env_bindings), auto_bind=self.env_auto)


Assertion = tuple[str, Label, Formula]  # actor, world, formula
AttackRecord = tuple[str, Assertion, Payload]  # attacker, target assertion, payload
DefenceRecord = tuple[AttackRecord, AssertPayload]


@dataclass(frozen=True)
class GameState:
    rules: GameRules
    moves: tuple[Move, ...]
    assertions: frozenset[Assertion]
    attacks: frozenset[AttackRecord]
    defences: frozenset[DefenceRecord]
    introduced: frozenset[Label]
    o_fresh: int
    turn: str

    def position_key(self):
        return (self.assertions, self.attacks, self.defences, self.turn)

    @property
    def thesis(self) -> Formula:
        return self.moves[0].payload.formula


def initial_state(
    thesis: Formula, env: ContextEnv | None = None, fresh_slack: int = 1
) -> GameState:
    env = env or ContextEnv()
    normalized = game_form(thesis)
    if _untagged_under_rel(normalized, False):
        raise UntaggedOperatorError(
            "dialogue theses need variant tags on operators under relativization"
        )
    info = formula_info(normalized)
    ctx_names = set(info.contexts) | {agent_context(a) for a in info.agents}
    ctx_names |= set(env.bindings)
    rules = GameRules(
        env_bindings=tuple(sorted(env.bindings.items())),
        env_auto=env.auto_bind,
        ctx_names=frozenset(ctx_names),
        fresh_cap=modal_depth(normalized) + fresh_slack,
    )
    move = Move(P, "thesis", None, AssertPayload(ROOT, normalized))
    return GameState(
        rules=rules,
        moves=(move,),
        assertions=frozenset({(P, ROOT, normalized)}),
        attacks=frozenset(),
        defences=frozenset(),
        introduced=frozenset({ROOT}),
        o_fresh=0,
        turn=O,
    )


def _untagged_under_rel(f: Formula, under: bool) -> bool:
    match f:
        case Atom(_):
            return False
        case Rel(body, _):
            return _untagged_under_rel(body, True)
        case Know(_, variant, body) | Poss(_, variant, body):
            if under and variant is None:
                return True
            return _untagged_under_rel(body, under)
        case Not(body):
            return _untagged_under_rel(body, under)
        case And(l, r) | Or(l, r) | Imp(l, r) | Iff(l, r):
            return _untagged_under_rel(l, under) or _untagged_under_rel(r, under)
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# World bookkeeping


def _cluster(introduced: frozenset[Label], agent: str, world: Label) -> set[Label]:
    """Worlds reachable from ``world`` through steps of this agent: the
    agent's equivalence class over the introduced labels."""
    seen = {world}
    frontier = [world]
    while frontier:
        w = frontier.pop()
        if w and w[-1][0] == agent and w[:-1] in introduced and w[:-1] not in seen:
            seen.add(w[:-1])
            frontier.append(w[:-1])
        for v in introduced:
            if len(v) == len(w) + 1 and v[:-1] == w and v[-1][0] == agent:
                if v not in seen:
                    seen.add(v)
                    frontier.append(v)
    return seen


def _fresh_successor(introduced: frozenset[Label], agent: str, world: Label) -> Label:
    used = {
        v[-1][1]
        for v in introduced
        if len(v) == len(world) + 1 and v[:-1] == world and v[-1][0] == agent
    }
    index = 1
    while index in used:
        index += 1
    return world + ((agent, index),)


def _world_options(state: GameState, actor: str, agent: str, world: Label):
    """Worlds available for an agent-indexed choice at ``world``: the
    introduced cluster, plus one fresh successor when O still may introduce."""
    options = sorted(_cluster(state.introduced, agent, world))
    if actor == O and state.o_fresh < state.rules.fresh_cap:
        options.append(_fresh_successor(state.introduced, agent, world))
    return options


def _granted_atoms(state: GameState, actor: str, world: Label) -> set[str]:
    """Atoms the actor stands committed to at ``world``: directly asserted
    atoms plus positive literals of contexts asserted there."""
    env = state.rules.env()
    granted: set[str] = set()
    for a, w, f in state.assertions:
        if a != actor or w != world or not isinstance(f, Atom):
            continue
        granted.add(f.name)
        if f.name in state.rules.ctx_names:
            for lit, positive in env.resolve(f.name).literals:
                if positive:
                    granted.add(lit)
    return granted


def _check_assertable(
    state: GameState, actor: str, world: Label, f: Formula
) -> tuple[str, str] | None:
    """None if the actor may assert f at world; else (rule, reason)."""
    if world not in state.introduced:
        if actor == P:
            return ("ML-frw", f"P cannot introduce world {render_label(world)}")
        # O introduces the world by asserting there (possibility defences);
        # candidate generation keeps such worlds within the fresh cap.
        if state.o_fresh >= state.rules.fresh_cap:
            return ("world cap", "O's fresh-world budget is spent")
        return None
    if isinstance(f, Atom):
        if f.name in state.rules.ctx_names:
            if actor == P and (O, world, f) not in state.assertions:
                return (
                    "ML-frc",
                    f"context {f.name} not introduced by O at {render_label(world)}",
                )
        elif actor == P and f.name not in _granted_atoms(state, O, world):
            return (
                "PL-3",
                f"atom {f.name} not stated by O at {render_label(world)}",
            )
    return None


# ---------------------------------------------------------------------------
# Particle rules


def _attack_payloads(state: GameState, actor: str, target: Assertion):
    """Payload candidates for attacking the target assertion (before the
    per-record and assertability filters)."""
    _, world, f = target
    match f:
        case Atom(name):
            if name in state.rules.ctx_names:
                body = state.rules.env().resolve(name)
                if len(body.literals) >= 2:
                    return [RequestPayload("?_L"), RequestPayload("?_R")]
            return []
        case Not(body):
            return [AssertPayload(world, body)]
        case And(_, _):
            return [RequestPayload("?_L"), RequestPayload("?_R")]
        case Or(_, _):
            return [RequestPayload("?")]
        case Imp(l, _):
            return [AssertPayload(world, l)]
        case Know(agent, _, _):
            return [
                RequestPayload("?_K", agent, w)
                for w in _world_options(state, actor, agent, world)
            ]
        case Poss(agent, _, _):
            return [RequestPayload("?_P", agent)]
        case Rel(body, c):
            match body:
                case And(_, _):
                    return [RequestPayload("?_L"), RequestPayload("?_R")]
                case Know(agent, variant, _):
                    cx, _ = variant_contexts_names(variant, c, agent)
                    return [AssertPayload(world, Atom(cx))]
                case _:
                    return [AssertPayload(world, Atom(c))]
    raise TypeError(f"not a formula: {f!r}")


def _context_literal_formulas(state: GameState, name: str) -> list[Formula]:
    body = state.rules.env().resolve(name)
    return [Atom(a) if positive else Not(Atom(a)) for a, positive in body.literals]


def _defence_payloads(state: GameState, actor: str, attack: AttackRecord):
    """Payload candidates for defending against the attack."""
    _, (_, world, f), payload = attack
    match f:
        case Atom(name):
            # compound context under ?_L / ?_R
            lits = _context_literal_formulas(state, name)
            if payload == RequestPayload("?_L"):
                return [AssertPayload(world, lits[0])]
            rest = lits[1]
            for extra in lits[2:]:
                rest = And(rest, extra)
            return [AssertPayload(world, rest)]
        case Not(_):
            return []
        case And(l, r):
            chosen = l if payload == RequestPayload("?_L") else r
            return [AssertPayload(world, chosen)]
        case Or(l, r):
            return [AssertPayload(world, l), AssertPayload(world, r)]
        case Imp(_, r):
            return [AssertPayload(world, r)]
        case Know(_, _, body):
            return [AssertPayload(payload.label, body)]
        case Poss(agent, _, body):
            return [
                AssertPayload(w, body)
                for w in _world_options(state, actor, agent, world)
            ]
        case Rel(body, c):
            match body:
                case Atom(_):
                    return [AssertPayload(world, body)]
                case Rel(_, _):
                    return [AssertPayload(world, body)]
                case Not(inner):
                    return [AssertPayload(world, Not(_rel(inner, c)))]
                case And(l, r):
                    chosen = l if payload == RequestPayload("?_L") else r
                    return [AssertPayload(world, _rel(chosen, c))]
                case Or(l, r):
                    return [AssertPayload(world, Or(_rel(l, c), _rel(r, c)))]
                case Imp(l, r):
                    return [AssertPayload(world, Imp(_rel(l, c), _rel(r, c)))]
                case Know(agent, variant, inner):
                    _, cy = variant_contexts_names(variant, c, agent)
                    return [
                        AssertPayload(world, Know(agent, variant, _rel(inner, cy)))
                    ]
    raise TypeError(f"unexpected attacked formula: {f!r}")


# ---------------------------------------------------------------------------
# Legality and application


def _attack_right_key(actor: str, payload: Payload):
    """Attack identity for the repetition bound: O attacks a given assertion
    once (whatever the payload), P once per distinct payload."""
    if actor == O:
        return None
    return payload


def _attack_rights_used(state: GameState) -> set:
    return {
        (attacker, target, _attack_right_key(attacker, payload))
        for attacker, target, payload in state.attacks
    }


def _defence_blocked(state: GameState, actor: str, attack: AttackRecord) -> bool:
    """O answers each attack at most once; P returns per new payload."""
    if actor != O:
        return False
    return any(rec == attack for rec, _ in state.defences)


def _reassertion_blocked(
    state: GameState, actor: str, payload: Payload
) -> bool:
    """P may not restate a complex formula already on P's record.

    Commitments are kept as sets, so a restatement would not open a fresh
    line of attack for O the way a fresh utterance does; letting P repeat
    complex content shields demands that are already pending. Atoms and
    context names are exempt (they cannot be attacked, so nothing is
    shielded, and P may genuinely have to point at a conceded atom twice:
    once per demand). O may always restate: answering a second projection
    of the same demand with the same content is legitimate.
    """
    if actor != P or not isinstance(payload, AssertPayload):
        return False
    f = payload.formula
    if isinstance(f, Atom):
        return False
    return (P, payload.label, f) in state.assertions


def _assertion_of_move(state: GameState, index: int) -> Assertion | None:
    move = state.moves[index]
    if isinstance(move.payload, AssertPayload):
        return (move.actor, move.payload.label, move.payload.formula)
    return None


def _attack_record_of_move(state: GameState, index: int) -> AttackRecord | None:
    move = state.moves[index]
    if move.kind != "attack":
        return None
    target = _assertion_of_move(state, move.target)
    return (move.actor, target, move.payload)


def _opponent(actor: str) -> str:
    return O if actor == P else P


def validate_move(state: GameState, move: Move) -> None:
    """Raise IllegalMoveError naming the violated rule if the move is not
    permitted in this state."""
    if move.actor != state.turn:
        raise IllegalMoveError("PL-0", f"it is {state.turn}'s turn")
    if move.kind == "thesis":
        raise IllegalMoveError("PL-0", "the thesis is only asserted once")
    if move.kind not in ("attack", "defend"):
        raise IllegalMoveError("PL-0", f"unknown move kind {move.kind!r}")
    if move.target is None or not 0 <= move.target < len(state.moves):
        raise IllegalMoveError("PL-0", "move must target an earlier move")

    if move.kind == "attack":
        target = _assertion_of_move(state, move.target)
        if target is None:
            raise IllegalMoveError(
                "particle mismatch", "only assertions can be attacked"
            )
        if target[0] == move.actor:
            raise IllegalMoveError(
                "PL-0", "players attack the other player's assertions"
            )
        candidates = _attack_payloads(state, move.actor, target)
        if isinstance(target[2], Atom) and not candidates:
            raise IllegalMoveError("PL-3", "atomic statements cannot be attacked")
        if move.payload not in candidates:
            self_describing = render_payload(move.payload)
            # A ?_K naming a non-introduced world is a world introduction.
            if (
                isinstance(move.payload, RequestPayload)
                and move.payload.kind == "?_K"
                and move.payload.label is not None
                and move.payload.label not in state.introduced
            ):
                if move.actor == P:
                    raise IllegalMoveError(
                        "ML-frw", f"P cannot introduce {self_describing}"
                    )
                if state.o_fresh >= state.rules.fresh_cap:
                    raise IllegalMoveError(
                        "world cap", "O's fresh-world budget is spent"
                    )
            raise IllegalMoveError(
                "particle mismatch",
                f"{self_describing} does not attack {render_formula(target[2])}",
            )
        right = (move.actor, target, _attack_right_key(move.actor, move.payload))
        if right in _attack_rights_used(state):
            raise IllegalMoveError("PL-2", "this attack was already made")
        if _reassertion_blocked(state, move.actor, move.payload):
            raise IllegalMoveError(
                "PL-2", "restating one's own assertion changes nothing for P"
            )
        if isinstance(move.payload, AssertPayload):
            problem = _check_assertable(
                state, move.actor, move.payload.label, move.payload.formula
            )
            if problem:
                raise IllegalMoveError(*problem)
        return

    # defence
    attack = _attack_record_of_move(state, move.target)
    if attack is None:
        raise IllegalMoveError("PL-0", "defences answer attacks")
    if attack[0] != _opponent(move.actor):
        raise IllegalMoveError("PL-0", "cannot defend against one's own attack")
    if attack[1][0] != move.actor:
        raise IllegalMoveError("PL-0", "that attack is not directed at this player")
    candidates = _defence_payloads(state, move.actor, attack)
    if not candidates:
        raise IllegalMoveError(
            "particle mismatch",
            f"{render_formula(attack[1][2])} admits no defence",
        )
    if move.payload not in candidates:
        raise IllegalMoveError(
            "particle mismatch",
            f"{render_payload(move.payload)} does not answer "
            f"{render_payload(attack[2])} on {render_formula(attack[1][2])}",
        )
    if (attack, move.payload) in state.defences:
        raise IllegalMoveError("PL-2", "this defence was already given")
    if _defence_blocked(state, move.actor, attack):
        raise IllegalMoveError("PL-2", "O has already answered this attack")
    if _reassertion_blocked(state, move.actor, move.payload):
        raise IllegalMoveError(
            "PL-2", "restating one's own assertion changes nothing for P"
        )
    problem = _check_assertable(
        state, move.actor, move.payload.label, move.payload.formula
    )
    if problem:
        raise IllegalMoveError(*problem)


def apply_move(state: GameState, move: Move) -> GameState:
    """Validate and append a move, updating commitments and ledgers."""
    validate_move(state, move)
    assertions = state.assertions
    attacks = state.attacks
    defences = state.defences
    introduced = state.introduced
    o_fresh = state.o_fresh

    if move.kind == "attack":
        target = _assertion_of_move(state, move.target)
        attacks = attacks | {(move.actor, target, move.payload)}
        if isinstance(move.payload, RequestPayload):
            if move.payload.label is not None and move.payload.label not in introduced:
                introduced = introduced | {move.payload.label}
                o_fresh += 1
    else:
        attack = _attack_record_of_move(state, move.target)
        defences = defences | {(attack, move.payload)}

    if isinstance(move.payload, AssertPayload):
        if move.payload.label not in introduced:
            introduced = introduced | {move.payload.label}
            o_fresh += 1
        assertions = assertions | {
            (move.actor, move.payload.label, move.payload.formula)
        }

    return GameState(
        rules=state.rules,
        moves=state.moves + (move,),
        assertions=assertions,
        attacks=attacks,
        defences=defences,
        introduced=introduced,
        o_fresh=o_fresh,
        turn=_opponent(state.turn),
    )


def _payload_sort_key(payload: Payload):
    if isinstance(payload, AssertPayload):
        return (0, render_label(payload.label), render_formula(payload.formula))
    return (1, payload.kind, payload.agent or "", render_label(payload.label or ()))


def legal_moves(state: GameState, recent_defence_only: bool = False) -> list[Move]:
    """Every move the player to move may make, in a canonical order.

    With ``recent_defence_only`` the defence options are narrowed to the most
    recent enemy attack that still admits some defence. That is a search
    discipline, not a game rule: it can only restrict the player, so a win
    found under it is a win under the full rules.
    """
    actor = state.turn
    moves: list[Move] = []

    first_move_of_assertion: dict[Assertion, int] = {}
    first_move_of_attack: dict[AttackRecord, int] = {}
    for i in range(len(state.moves)):
        a = _assertion_of_move(state, i)
        if a is not None and a not in first_move_of_assertion:
            first_move_of_assertion[a] = i
        r = _attack_record_of_move(state, i)
        if r is not None and r not in first_move_of_attack:
            first_move_of_attack[r] = i

    rights_used = _attack_rights_used(state)
    for target, index in first_move_of_assertion.items():
        if target[0] == actor:
            continue
        for payload in _attack_payloads(state, actor, target):
            if (actor, target, _attack_right_key(actor, payload)) in rights_used:
                continue
            if _reassertion_blocked(state, actor, payload):
                continue
            if isinstance(payload, AssertPayload) and _check_assertable(
                state, actor, payload.label, payload.formula
            ):
                continue
            moves.append(Move(actor, "attack", index, payload))

    defence_groups: list[tuple[int, list[Move]]] = []
    for attack, index in first_move_of_attack.items():
        if attack[0] != _opponent(actor) or attack[1][0] != actor:
            continue
        if _defence_blocked(state, actor, attack):
            continue
        group: list[Move] = []
        for payload in _defence_payloads(state, actor, attack):
            if (attack, payload) in state.defences:
                continue
            if _reassertion_blocked(state, actor, payload):
                continue
            if _check_assertable(state, actor, payload.label, payload.formula):
                continue
            group.append(Move(actor, "defend", index, payload))
        if group:
            defence_groups.append((index, group))

    if recent_defence_only and defence_groups:
        defence_groups = [max(defence_groups, key=lambda g: g[0])]
    for _, group in defence_groups:
        moves.extend(group)

    moves.sort(key=lambda m: (m.kind, m.target, _payload_sort_key(m.payload)))
    return moves


# ---------------------------------------------------------------------------
# Strategy search


@dataclass
class StrategyResult:
    verdict: bool
    strategy: dict | None
    refutation: tuple[Move, ...] | None
    positions: int


class _Search:
    def __init__(self, budget: int, disciplined: bool):
        self.budget = budget
        self.positions = 0
        self.disciplined = disciplined
        self.memo: dict = {}

    def moves(self, state: GameState) -> list[Move]:
        narrow = self.disciplined and state.turn == P
        return legal_moves(state, recent_defence_only=narrow)

    def win(self, state: GameState) -> bool:
        """True iff P has a winning strategy from this position."""
        key = state.position_key()
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        self.positions += 1
        if self.positions > self.budget:
            raise BudgetExhaustedError(self.positions)
        moves = self.moves(state)
        if not moves:
            result = state.turn == O
        elif state.turn == P:
            result = any(self.win(apply_move(state, m)) for m in moves)
        else:
            result = all(self.win(apply_move(state, m)) for m in moves)
        self.memo[key] = result
        return result

    def strategy_tree(self, state: GameState) -> dict:
        moves = self.moves(state)
        if not moves:
            return {"turn": state.turn, "end": "opponent cannot move"}
        if state.turn == P:
            for m in moves:
                child = apply_move(state, m)
                if self.win(child):
                    return {
                        "turn": P,
                        "move": move_to_json(m),
                        "next": self.strategy_tree(child),
                    }
            raise AssertionError("no winning move at a winning P position")
        return {
            "turn": O,
            "children": [
                {
                    "move": move_to_json(m),
                    "next": self.strategy_tree(apply_move(state, m)),
                }
                for m in moves
            ],
        }

    def refuting_play(self, state: GameState) -> tuple[Move, ...]:
        moves = self.moves(state)
        if not moves:
            return state.moves
        if state.turn == O:
            for m in moves:
                child = apply_move(state, m)
                if not self.win(child):
                    return self.refuting_play(child)
            raise AssertionError("no refuting move at a losing P position")
        return self.refuting_play(apply_move(state, moves[0]))


DEFAULT_SEARCH_BUDGET = 500_000


def has_winning_strategy(
    thesis: Formula,
    env: ContextEnv | None = None,
    budget: int = DEFAULT_SEARCH_BUDGET,
    fresh_slack: int = 1,
) -> StrategyResult:
    """AND-OR search: does P have a winning strategy for the thesis?

    Returns the strategy tree (P's choice at every reachable O history) on a
    win, or a play that O wins otherwise. Raises BudgetExhaustedError when the
    position budget runs out; that outcome is unknown, never false.

    Searches in two phases: first with P's defence options narrowed to the
    most recent open attack (a pure handicap on P, so a win stands), then,
    only if that fails, with P's full classical rights.
    """
    state = initial_state(thesis, env, fresh_slack)
    limit = sys.getrecursionlimit()
    if limit < 40_000:
        sys.setrecursionlimit(40_000)
    try:
        spent = 0
        for disciplined in (True, False):
            search = _Search(budget - spent, disciplined)
            try:
                verdict = search.win(state)
            except BudgetExhaustedError:
                raise BudgetExhaustedError(spent + search.positions) from None
            spent += search.positions
            if verdict:
                return StrategyResult(
                    True, search.strategy_tree(state), None, spent
                )
        return StrategyResult(False, None, search.refuting_play(state), spent)
    finally:
        sys.setrecursionlimit(limit)


# ---------------------------------------------------------------------------
# Transcripts


def replay(state: GameState, moves: Iterable[Move]) -> GameState:
    for move in moves:
        state = apply_move(state, move)
    return state


def replay_script(data: dict) -> GameState:
    """Run a JSON play script from its thesis; raises on any illegal move."""
    thesis = parse_formula(data["thesis"], data.get("default_variant"))
    env = ContextEnv.from_json(data.get("env", {}))
    state = initial_state(thesis, env)
    agents = formula_info(game_form(thesis)).agents
    for move_data in data["moves"]:
        state = apply_move(state, move_from_json(move_data, agents))
    return state


def _transcript_rows(moves) -> list[list[str]]:
    """Rows of (o_num, o_text, o_ref, p_ref, p_text, p_num); a defence sits on
    the row of the attack it answers, as in two-column play tables."""
    rows: list[list[str]] = []
    row_of_attack: dict[int, int] = {}
    for i, move in enumerate(moves):
        text = render_payload(move.payload)
        num = f"({i})"
        if move.kind == "thesis":
            rows.append(["", "", "", "", text, num])
            continue
        if move.kind == "attack":
            row = ["", "", "", "", "", ""]
            if move.actor == O:
                row[0], row[1], row[2] = num, text, str(move.target)
            else:
                row[3], row[4], row[5] = str(move.target), text, num
            row_of_attack[i] = len(rows)
            rows.append(row)
            continue
        # defence: fill the opposite side of its attack's row if free
        r = row_of_attack.get(move.target)
        if r is not None and (rows[r][1] == "" if move.actor == O else rows[r][4] == ""):
            if move.actor == O:
                rows[r][0], rows[r][1] = num, text
            else:
                rows[r][4], rows[r][5] = text, num
        else:
            row = ["", "", "", "", "", ""]
            if move.actor == O:
                row[0], row[1], row[2] = num, text, f"def {move.target}"
            else:
                row[3], row[4], row[5] = f"def {move.target}", text, num
            rows.append(row)
    return rows


def render_transcript(moves, winner: str | None = None) -> str:
    """Aligned two-column text table of a play."""
    if isinstance(moves, GameState):
        moves = moves.moves
    rows = _transcript_rows(moves)
    header = ["", "O", "", "", "P", ""]
    widths = [
        max(len(r[c]) for r in rows + [header]) for c in range(6)
    ]
    lines = []
    fmt = "  ".join("{:<%d}" % w for w in widths)
    lines.append(fmt.format(*header).rstrip())
    lines.append("-" * (sum(widths) + 10))
    for r in rows:
        lines.append(fmt.format(*r).rstrip())
    if winner:
        lines.append(f"{winner} wins the play")
    return "\n".join(lines)


def render_transcript_markdown(moves, winner: str | None = None) -> str:
    if isinstance(moves, GameState):
        moves = moves.moves
    rows = _transcript_rows(moves)
    lines = ["| | O | | | P | |", "|---|---|---|---|---|---|"]
    for r in rows:
        lines.append("| " + " | ".join(r) + " |")
    if winner:
        lines.append("")
        lines.append(f"**{winner} wins the play**")
    return "\n".join(lines)
