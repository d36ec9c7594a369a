"""Construct the canonical play scripts, verify they replay, and write them
to tests/data/plays/. Run from the repository root."""

from __future__ import annotations

import json
import pathlib
import sys

sys.path.insert(0, "src")

from celogic.dialogue import (
    AssertPayload,
    Move,
    RequestPayload,
    apply_move,
    has_winning_strategy,
    initial_state,
    legal_moves,
    move_to_json,
    parse_label,
    render_transcript,
)
from celogic.syntax import parse_formula


def A(actor, kind, target, label, formula, agents):
    return Move(
        actor, kind, target, AssertPayload(parse_label(label, agents), parse_formula(formula))
    )


def RK(actor, target, agent, label, agents):
    return Move(
        actor, "attack", target, RequestPayload("?_K", agent, parse_label(label, agents))
    )


def RLR(actor, target, kind):
    return Move(actor, "attack", target, RequestPayload(kind))


def build(name, thesis, winner, agents, movespec):
    moves = []
    for spec in movespec:
        kind = spec[0]
        if kind == "assert":
            _, actor, mkind, target, label, formula = spec
            moves.append(A(actor, mkind, target, label, formula, agents))
        elif kind == "k":
            _, actor, target, agent, label = spec
            moves.append(RK(actor, target, agent, label, agents))
        elif kind == "lr":
            _, actor, target, req = spec
            moves.append(RLR(actor, target, req))
        else:
            raise ValueError(spec)
    return {"name": name, "thesis": thesis, "winner": winner, "moves": moves}


PLAYS = []

# -- introspection, absolute (P wins) ---------------------------------------
PLAYS.append(
    build(
        "introspection-absolute",
        "K{i,1.1} a -> K{i,1.1} K{i,1.1} a",
        "P",
        ["i"],
        [
            ("assert", "O", "attack", 0, "1", "K{i,1.1} a"),
            ("assert", "P", "defend", 1, "1", "K{i,1.1} K{i,1.1} a"),
            ("k", "O", 2, "i", "1i1"),
            ("assert", "P", "defend", 3, "1i1", "K{i,1.1} a"),
            ("k", "O", 4, "i", "1i1i1"),
            ("k", "P", 1, "i", "1i1i1"),
            ("assert", "O", "defend", 6, "1i1i1", "a"),
            ("assert", "P", "defend", 5, "1i1i1", "a"),
        ],
    )
)

# -- distribution over two agents, left conjunct (P wins) --------------------
PLAYS.append(
    build(
        "distribution-left",
        "K{i,1.1} K{j,1.1} a -> (K{i,1.1} a & K{j,1.1} a)",
        "P",
        ["i", "j"],
        [
            ("assert", "O", "attack", 0, "1", "K{i,1.1} K{j,1.1} a"),
            ("assert", "P", "defend", 1, "1", "K{i,1.1} a & K{j,1.1} a"),
            ("lr", "O", 2, "?_L"),
            ("assert", "P", "defend", 3, "1", "K{i,1.1} a"),
            ("k", "O", 4, "i", "1i1"),
            ("k", "P", 1, "i", "1i1"),
            ("assert", "O", "defend", 6, "1i1", "K{j,1.1} a"),
            ("k", "P", 7, "j", "1i1"),
            ("assert", "O", "defend", 8, "1i1", "a"),
            ("assert", "P", "defend", 5, "1i1", "a"),
        ],
    )
)

# -- distribution over two agents, right conjunct (P wins) -------------------
PLAYS.append(
    build(
        "distribution-right",
        "K{i,1.1} K{j,1.1} a -> (K{i,1.1} a & K{j,1.1} a)",
        "P",
        ["i", "j"],
        [
            ("assert", "O", "attack", 0, "1", "K{i,1.1} K{j,1.1} a"),
            ("assert", "P", "defend", 1, "1", "K{i,1.1} a & K{j,1.1} a"),
            ("lr", "O", 2, "?_R"),
            ("assert", "P", "defend", 3, "1", "K{j,1.1} a"),
            ("k", "O", 4, "j", "1j1"),
            ("k", "P", 1, "i", "1"),
            ("assert", "O", "defend", 6, "1", "K{j,1.1} a"),
            ("k", "P", 7, "j", "1j1"),
            ("assert", "O", "defend", 8, "1j1", "a"),
            ("assert", "P", "defend", 5, "1j1", "a"),
        ],
    )
)

# -- cross-context introspection, contextualist (O wins) ---------------------
PLAYS.append(
    build(
        "cross-introspection-12",
        "(K{i,1.2} a)^ci -> (K{i,1.2} K{i,1.2} a)^cj",
        "O",
        ["i"],
        [
            ("assert", "O", "attack", 0, "1", "(K{i,1.2} a)^ci"),
            ("assert", "P", "defend", 1, "1", "(K{i,1.2} K{i,1.2} a)^cj"),
            ("assert", "O", "attack", 2, "1", "cj"),
            ("assert", "P", "defend", 3, "1", "K{i,1.2} (K{i,1.2} a)^ci"),
            ("k", "O", 4, "i", "1i1"),
            ("assert", "P", "defend", 5, "1i1", "(K{i,1.2} a)^ci"),
            ("assert", "O", "attack", 6, "1i1", "ci"),
            ("assert", "P", "defend", 7, "1i1", "K{i,1.2} (a)^ci"),
            ("k", "O", 8, "i", "1i1i1"),
            ("assert", "P", "defend", 9, "1i1i1", "(a)^ci"),
            ("assert", "O", "attack", 10, "1i1i1", "ci"),
        ],
    )
)

# -- cross-context introspection, subjectivist (P wins) ----------------------
PLAYS.append(
    build(
        "cross-introspection-22",
        "(K{i,2.2} a)^ci -> (K{i,2.2} K{i,2.2} a)^cj",
        "P",
        ["i"],
        [
            ("assert", "O", "attack", 0, "1", "(K{i,2.2} a)^ci"),
            ("assert", "P", "defend", 1, "1", "(K{i,2.2} K{i,2.2} a)^cj"),
            ("assert", "O", "attack", 2, "1", "ci"),
            ("assert", "P", "defend", 3, "1", "K{i,2.2} (K{i,2.2} a)^ci"),
            ("k", "O", 4, "i", "1i1"),
            ("assert", "P", "defend", 5, "1i1", "(K{i,2.2} a)^ci"),
            ("assert", "O", "attack", 6, "1i1", "ci"),
            ("assert", "P", "defend", 7, "1i1", "K{i,2.2} (a)^ci"),
            ("k", "O", 8, "i", "1i1i1"),
            ("assert", "P", "defend", 9, "1i1i1", "(a)^ci"),
            ("assert", "O", "attack", 10, "1i1i1", "ci"),
            ("assert", "P", "attack", 1, "1", "ci"),
            ("assert", "O", "defend", 12, "1", "K{i,2.2} (a)^ci"),
            ("k", "P", 13, "i", "1i1i1"),
            ("assert", "O", "defend", 14, "1i1i1", "(a)^ci"),
            ("assert", "P", "attack", 15, "1i1i1", "ci"),
            ("assert", "O", "defend", 16, "1i1i1", "a"),
            ("assert", "P", "defend", 11, "1i1i1", "a"),
        ],
    )
)

# -- factivity on epistemic content, 1.1 (P wins) ----------------------------
PLAYS.append(
    build(
        "factivity-11",
        "(K{j,1.1} K{k,1.1} p -> K{k,1.1} p)^ci",
        "P",
        ["j", "k"],
        [
            ("assert", "O", "attack", 0, "1", "ci"),
            (
                "assert",
                "P",
                "defend",
                1,
                "1",
                "(K{j,1.1} K{k,1.1} p)^ci -> (K{k,1.1} p)^ci",
            ),
            ("assert", "O", "attack", 2, "1", "(K{j,1.1} K{k,1.1} p)^ci"),
            ("assert", "P", "defend", 3, "1", "(K{k,1.1} p)^ci"),
            ("assert", "O", "attack", 4, "1", "ci"),
            ("assert", "P", "defend", 5, "1", "K{k,1.1} (p)^ci"),
            ("k", "O", 6, "k", "1k1"),
            ("assert", "P", "defend", 7, "1k1", "(p)^ci"),
            ("assert", "O", "attack", 8, "1k1", "ci"),
            ("assert", "P", "attack", 3, "1", "ci"),
            ("assert", "O", "defend", 10, "1", "K{j,1.1} (K{k,1.1} p)^ci"),
            ("k", "P", 11, "j", "1"),
            ("assert", "O", "defend", 12, "1", "(K{k,1.1} p)^ci"),
            ("assert", "P", "attack", 13, "1", "ci"),
            ("assert", "O", "defend", 14, "1", "K{k,1.1} (p)^ci"),
            ("k", "P", 15, "k", "1k1"),
            ("assert", "O", "defend", 16, "1k1", "(p)^ci"),
            ("assert", "P", "attack", 17, "1k1", "ci"),
            ("assert", "O", "defend", 18, "1k1", "p"),
            ("assert", "P", "defend", 9, "1k1", "p"),
        ],
    )
)

# -- factivity on epistemic content, 1.2 (O wins) ----------------------------
PLAYS.append(
    build(
        "factivity-12",
        "(K{j,1.2} K{k,1.2} p -> K{k,1.2} p)^ci",
        "O",
        ["j", "k"],
        [
            ("assert", "O", "attack", 0, "1", "ci"),
            (
                "assert",
                "P",
                "defend",
                1,
                "1",
                "(K{j,1.2} K{k,1.2} p)^ci -> (K{k,1.2} p)^ci",
            ),
            ("assert", "O", "attack", 2, "1", "(K{j,1.2} K{k,1.2} p)^ci"),
            ("assert", "P", "defend", 3, "1", "(K{k,1.2} p)^ci"),
            ("assert", "O", "attack", 4, "1", "ci"),
            ("assert", "P", "defend", 5, "1", "K{k,1.2} (p)^ck"),
            ("k", "O", 6, "k", "1k1"),
            ("assert", "P", "defend", 7, "1k1", "(p)^ck"),
            ("assert", "O", "attack", 8, "1k1", "ck"),
            ("assert", "P", "attack", 3, "1", "ci"),
            ("assert", "O", "defend", 10, "1", "K{j,1.2} (K{k,1.2} p)^cj"),
            ("k", "P", 11, "j", "1"),
            ("assert", "O", "defend", 12, "1", "(K{k,1.2} p)^cj"),
        ],
    )
)

# -- factivity on epistemic content, 2.2 (O wins) ----------------------------
PLAYS.append(
    build(
        "factivity-22",
        "(K{j,2.2} K{k,2.2} p -> K{k,2.2} p)^ci",
        "O",
        ["j", "k"],
        [
            ("assert", "O", "attack", 0, "1", "ci"),
            (
                "assert",
                "P",
                "defend",
                1,
                "1",
                "(K{j,2.2} K{k,2.2} p)^ci -> (K{k,2.2} p)^ci",
            ),
            ("assert", "O", "attack", 2, "1", "(K{j,2.2} K{k,2.2} p)^ci"),
            ("assert", "P", "defend", 3, "1", "(K{k,2.2} p)^ci"),
            ("assert", "O", "attack", 4, "1", "ck"),
            ("assert", "P", "defend", 5, "1", "K{k,2.2} (p)^ck"),
            ("k", "O", 6, "k", "1k1"),
            ("assert", "P", "defend", 7, "1k1", "(p)^ck"),
            ("assert", "O", "attack", 8, "1k1", "ck"),
        ],
    )
)

# -- mixed agents (O wins) ----------------------------------------------------
PLAYS.append(
    build(
        "mixed-agents",
        "(K{j,1.1} K{k,2.2} p)^ci -> (K{k,2.2} p)^ci",
        "O",
        ["j", "k"],
        [
            ("assert", "O", "attack", 0, "1", "(K{j,1.1} K{k,2.2} p)^ci"),
            ("assert", "P", "defend", 1, "1", "(K{k,2.2} p)^ci"),
            ("assert", "O", "attack", 2, "1", "ck"),
            ("assert", "P", "defend", 3, "1", "K{k,2.2} (p)^ck"),
            ("k", "O", 4, "k", "1k1"),
            ("assert", "P", "defend", 5, "1k1", "(p)^ck"),
            ("assert", "O", "attack", 6, "1k1", "ck"),
        ],
    )
)

# -- negation schema, forward direction (P wins) ------------------------------
PLAYS.append(
    build(
        "negation-forward",
        "(~q)^ci -> (ci -> ~(q)^ci)",
        "P",
        [],
        [
            ("assert", "O", "attack", 0, "1", "(~q)^ci"),
            ("assert", "P", "defend", 1, "1", "ci -> ~(q)^ci"),
            ("assert", "O", "attack", 2, "1", "ci"),
            ("assert", "P", "defend", 3, "1", "~(q)^ci"),
            ("assert", "O", "attack", 4, "1", "(q)^ci"),
            ("assert", "P", "attack", 5, "1", "ci"),
            ("assert", "O", "defend", 6, "1", "q"),
            ("assert", "P", "attack", 1, "1", "ci"),
            ("assert", "O", "defend", 8, "1", "~(q)^ci"),
            ("assert", "P", "attack", 9, "1", "(q)^ci"),
            ("assert", "O", "attack", 10, "1", "ci"),
            ("assert", "P", "defend", 11, "1", "q"),
        ],
    )
)

# -- negation schema, backward direction (P wins) -----------------------------
PLAYS.append(
    build(
        "negation-backward",
        "(ci -> ~(q)^ci) -> (~q)^ci",
        "P",
        [],
        [
            ("assert", "O", "attack", 0, "1", "ci -> ~(q)^ci"),
            ("assert", "P", "defend", 1, "1", "(~q)^ci"),
            ("assert", "O", "attack", 2, "1", "ci"),
            ("assert", "P", "defend", 3, "1", "~(q)^ci"),
            ("assert", "O", "attack", 4, "1", "(q)^ci"),
            ("assert", "P", "attack", 5, "1", "ci"),
            ("assert", "O", "defend", 6, "1", "q"),
            ("assert", "P", "attack", 1, "1", "ci"),
            ("assert", "O", "defend", 8, "1", "~(q)^ci"),
            ("assert", "P", "attack", 9, "1", "(q)^ci"),
            ("assert", "O", "attack", 10, "1", "ci"),
            ("assert", "P", "defend", 11, "1", "q"),
        ],
    )
)


def main():
    out_dir = pathlib.Path("tests/data/plays")
    out_dir.mkdir(parents=True, exist_ok=True)
    for play in PLAYS:
        thesis = parse_formula(play["thesis"])
        state = initial_state(thesis)
        for k, move in enumerate(play["moves"], start=1):
            try:
                state = apply_move(state, move)
            except Exception as exc:
                print(f"{play['name']}: move ({k}) rejected: {exc}")
                raise SystemExit(1)
        result = has_winning_strategy(thesis)
        winner = "P" if result.verdict else "O"
        status = "ok" if winner == play["winner"] else "WINNER MISMATCH"
        if play["winner"] == "O":
            stuck = "P stuck" if not legal_moves(state) else "P NOT STUCK"
        else:
            stuck = f"{len(legal_moves(state))} O moves left"
        print(f"{play['name']}: replayed {len(play['moves'])} moves, winner {winner} ({status}; {stuck})")
        data = {
            "name": play["name"],
            "thesis": play["thesis"],
            "winner": play["winner"],
            "moves": [move_to_json(m) for m in play["moves"]],
        }
        (out_dir / f"{play['name']}.json").write_text(json.dumps(data, indent=1))
        print(render_transcript(state, winner=play["winner"]))
        print()


if __name__ == "__main__":
    main()
