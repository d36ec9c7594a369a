import itertools
import json

import pytest

from celogic.kripke import (
    ContextEnv,
    EnumerationCeilingError,
    KripkeModel,
    UnresolvedContextError,
    bell_number,
    check_model,
    enumerate_models,
    eval_context,
    find_countermodel,
    model_space_size,
    satisfies,
    set_partitions,
)
from celogic.syntax import (
    Atom,
    BOT,
    Imp,
    Know,
    Not,
    Poss,
    TOP,
    parse_context,
    parse_formula,
)

from corpus import random_formula
import random


def single_world_model():
    return KripkeModel(["w1"], {"i": [["w1"]]}, {"a": ["w1"]})


class TestCheckModel:
    def test_minimal_model_ok(self):
        assert check_model(single_world_model()) == []

    def test_unknown_world_in_valuation(self):
        m = KripkeModel(["w1"], {"i": [["w1"]]}, {"p": ["w9"]})
        violations = check_model(m)
        assert len(violations) == 1
        assert "w9" in violations[0]

    def test_world_in_two_classes(self):
        m = KripkeModel(["w1", "w2"], {"i": [["w1", "w2"], ["w2"]]}, {})
        assert any("two classes" in v for v in check_model(m))

    def test_uncovered_world(self):
        m = KripkeModel(["w1", "w2"], {"i": [["w1"]]}, {})
        assert any("not covered" in v for v in check_model(m))

    def test_enumerated_models_always_pass(self):
        for m in enumerate_models(3, ["i"], ["p"]):
            assert check_model(m) == []

    def test_json_round_trip(self):
        m = KripkeModel(
            ["w1", "w2"], {"i": [["w1", "w2"]], "j": [["w1"], ["w2"]]}, {"p": ["w1"]}
        )
        assert KripkeModel.from_json(json.dumps(m.to_json())) == m

    def test_dot_export(self):
        dot = single_world_model().to_dot(highlight="w1")
        assert dot.startswith("graph model")
        assert '"w1"' in dot


class TestEvalContext:
    def test_top_anywhere(self):
        env = ContextEnv({"ci": TOP})
        assert eval_context(single_world_model(), "w1", env, "ci")

    def test_literal_conjunction(self):
        m = KripkeModel(["w1"], {"i": [["w1"]]}, {"p": ["w1"], "q": []})
        env = ContextEnv({"ci": parse_context("p & ~q")})
        assert eval_context(m, "w1", env, "ci")
        env2 = ContextEnv({"ci": parse_context("p & q")})
        assert not eval_context(m, "w1", env2, "ci")

    def test_bot_nowhere(self):
        env = ContextEnv({"ci": BOT})
        assert not eval_context(single_world_model(), "w1", env, "ci")

    def test_unresolved_without_auto_bind(self):
        env = ContextEnv(auto_bind=False)
        with pytest.raises(UnresolvedContextError):
            eval_context(single_world_model(), "w1", env, "cx")

    def test_auto_bind_fresh_atom(self):
        m = KripkeModel(["w1"], {"i": [["w1"]]}, {"_ctx_ci": ["w1"]})
        assert eval_context(m, "w1", ContextEnv(), "ci")


class TestSatisfies:
    def test_reflexive_singleton_knowledge(self):
        f = Know("i", "1.1", Atom("a"))
        assert satisfies(single_world_model(), "w1", ContextEnv(), f)

    def test_bottom_context_makes_relativization_vacuous(self):
        env = ContextEnv({"ci": BOT})
        m = single_world_model()
        for text in ["(~a)^ci", "(K{i,1.1} a & ~a)^ci -> (a)^ci", "(a -> ~a)^ci"]:
            inner = parse_formula(text)
            assert satisfies(m, "w1", env, inner)

    def test_relativized_factivity_22_fails_within_three_worlds(self):
        f = parse_formula("(K{j,2.2} K{k,2.2} p -> K{k,2.2} p)^ci")
        found = find_countermodel(f, ContextEnv(), max_worlds=3)
        assert found is not None
        model, world = found
        assert not satisfies(
            model, world, ContextEnv().completed(["ci", "cj", "ck"]), f
        )

    def test_duality_on_enumerated_models(self):
        env = ContextEnv()
        body = parse_formula("a -> K{i,1.1} a")
        know = Know("i", "1.1", Not(body))
        poss = Poss("i", "1.1", body)
        for m in enumerate_models(2, ["i"], ["a"]):
            for w in m.worlds:
                assert satisfies(m, w, env, poss) == satisfies(
                    m, w, env, Not(know)
                )

    def test_s5_axioms_hold_on_all_enumerated_models(self):
        env = ContextEnv()
        phi = parse_formula("a -> b")
        k = Know("i", "1.1", phi)
        axioms = [
            Imp(k, phi),  # truth
            Imp(k, Know("i", "1.1", k)),  # positive introspection
            Imp(Not(k), Know("i", "1.1", Not(k))),  # negative introspection
        ]
        for m in enumerate_models(3, ["i"], ["a", "b"]):
            for w in m.worlds:
                for ax in axioms:
                    assert satisfies(m, w, env, ax)


class TestEnumeration:
    def test_counts_one_world(self):
        models = list(enumerate_models(1, ["i"], ["p"]))
        assert len(models) == 2

    def test_counts_two_worlds_stratum(self):
        # hand count: partitions of {w1,w2} are {{w1,w2}} and {{w1},{w2}};
        # valuations of one atom over two worlds: 4; stratum = 2*4 = 8
        models = list(enumerate_models(2, ["i"], ["p"]))
        stratum = [m for m in models if len(m.worlds) == 2]
        assert len(stratum) == 8
        assert len(models) == 10

    def test_counts_three_world_stratum_two_agents_two_atoms(self):
        assert bell_number(3) == 5
        models = list(enumerate_models(3, ["i", "j"], ["p", "q"]))
        stratum = [m for m in models if len(m.worlds) == 3]
        assert len(stratum) == 5 * 5 * 2**6
        assert len(models) == model_space_size(3, 2, 2) == 1668

    def test_no_duplicate_models(self):
        models = list(enumerate_models(2, ["i"], ["p"]))
        keys = {
            (m.worlds, tuple(m.relations["i"]), tuple(sorted(m.valuation.items())))
            for m in models
        }
        assert len(keys) == len(models)

    def test_partitions_cover_all(self):
        parts = list(set_partitions(("a", "b", "c")))
        assert len(parts) == 5
        for p in parts:
            assert set().union(*p) == {"a", "b", "c"}

    def test_ceiling_guard(self):
        with pytest.raises(EnumerationCeilingError):
            list(enumerate_models(4, ["i", "j"], ["p", "q", "r"], ceiling=1000))


class TestFindCountermodel:
    def test_tautology_has_none(self):
        assert find_countermodel(parse_formula("a -> a"), max_worlds=3) is None

    def test_contextual_factivity_12_fails_small(self):
        f = parse_formula("(K{j,1.2} K{k,1.2} p -> K{k,1.2} p)^ci")
        found = find_countermodel(f, ContextEnv(), max_worlds=3)
        assert found is not None
        assert len(found[0].worlds) <= 3

    def test_subjectivist_introspection_has_none_up_to_four_worlds(self):
        f = parse_formula("(K{i,2.2} a)^ci -> (K{i,2.2} K{i,2.2} a)^cj")
        assert find_countermodel(f, ContextEnv(), max_worlds=4) is None

    def test_deterministic(self):
        f = parse_formula("a -> K{i,1.1} a")
        first = find_countermodel(f, max_worlds=3)
        second = find_countermodel(f, max_worlds=3)
        assert first == second
        assert len(first[0].worlds) == 2

    def test_concrete_context_bodies_enter_the_atom_set(self):
        f = parse_formula("(p)^ci")
        env = ContextEnv({"ci": parse_context("r")})
        model, world = find_countermodel(f, env, max_worlds=2)
        assert not satisfies(model, world, env, f)


def test_cross_semantics_spot_sample():
    """Reduced formulas evaluate identically (full sweep in acceptance)."""
    from celogic.reduction import reduce_full

    rng = random.Random(9)
    env = ContextEnv(
        {"ci": parse_context("p"), "cj": parse_context("q & ~p")}
    )
    models = list(enumerate_models(2, ["i", "j"], ["p", "q"]))
    for _ in range(25):
        f = random_formula(rng, 3)
        g = reduce_full(f).result
        for m in models:
            for w in m.worlds:
                assert satisfies(m, w, env, f) == satisfies(m, w, env, g)
