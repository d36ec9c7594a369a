import pytest

from celogic.kripke import ContextEnv, check_model, find_countermodel, satisfies
from celogic.prove import (
    Invalid,
    NonEpistemicFragmentError,
    Valid,
    prove_cel,
    prove_el,
    verdict_to_json,
)
from celogic.reduction import needed_context_names
from celogic.syntax import parse_context, parse_formula


class TestProveEl:
    def test_positive_introspection(self):
        v = prove_el(parse_formula("K{i,1.1} a -> K{i,1.1} K{i,1.1} a"))
        assert isinstance(v, Valid)

    def test_distribution_over_agents(self):
        v = prove_el(
            parse_formula("K{i,1.1} K{j,1.1} a -> (K{i,1.1} a & K{j,1.1} a)")
        )
        assert isinstance(v, Valid)

    def test_truth_axiom(self):
        assert isinstance(prove_el(parse_formula("K{i,1.1} a -> a")), Valid)

    def test_converse_of_truth_fails_with_two_worlds(self):
        f = parse_formula("a -> K{i,1.1} a")
        v = prove_el(f)
        assert isinstance(v, Invalid)
        assert len(v.model.worlds) == 2
        assert check_model(v.model) == []
        assert not satisfies(v.model, v.world, ContextEnv(), f)
        # independent bounded search agrees that two worlds suffice
        oracle = find_countermodel(f, max_worlds=2)
        assert oracle is not None and len(oracle[0].worlds) == 2

    def test_negative_introspection(self):
        v = prove_el(parse_formula("~K{i,1.1} a -> K{i,1.1} ~K{i,1.1} a"))
        assert isinstance(v, Valid)

    def test_rejects_relativized_input(self):
        with pytest.raises(NonEpistemicFragmentError):
            prove_el(parse_formula("(p)^ci"))

    def test_untagged_operators_are_fine_without_contexts(self):
        assert isinstance(prove_el(parse_formula("K{i} a -> a")), Valid)

    def test_propositional_classics(self):
        assert isinstance(prove_el(parse_formula("p | ~p")), Valid)
        assert isinstance(prove_el(parse_formula("((p -> q) -> p) -> p")), Valid)
        assert isinstance(prove_el(parse_formula("p -> q")), Invalid)

    def test_valid_proof_is_closed_tableau(self):
        v = prove_el(parse_formula("p | ~p"))
        data = verdict_to_json(v)
        assert data["valid"] and "tableau" in data["proof"]

    def test_context_bodies_expand(self):
        ctx = {"ci": parse_context("p & ~q")}
        assert isinstance(
            prove_el(parse_formula("ci -> p"), ctx), Valid
        )
        assert isinstance(
            prove_el(parse_formula("ci -> q"), ctx), Invalid
        )


class TestProveCel:
    def test_contextualist_introspection_invalid(self):
        f = parse_formula("(K{i,1.2} a)^ci -> (K{i,1.2} K{i,1.2} a)^cj")
        v = prove_cel(f)
        assert isinstance(v, Invalid)

    def test_subjectivist_introspection_valid(self):
        f = parse_formula("(K{i,2.2} a)^ci -> (K{i,2.2} K{i,2.2} a)^cj")
        assert isinstance(prove_cel(f), Valid)

    @pytest.mark.parametrize("variant", ["1.1", "1.2", "2.1", "2.2"])
    def test_closure_under_known_implication(self, variant):
        k = f"K{{j,{variant}}}"
        f = parse_formula(f"(({k} p & {k} (p -> q)) -> {k} q)^ci")
        assert isinstance(prove_cel(f), Valid)

    def test_invalid_witness_falsifies_original(self):
        f = parse_formula("(K{j,2.2} K{k,2.2} p -> K{k,2.2} p)^ci")
        v = prove_cel(f)
        assert isinstance(v, Invalid)
        env = ContextEnv().completed(needed_context_names(f))
        assert not satisfies(v.model, v.world, env, f)

    def test_explicit_bindings_shape_the_verdict(self):
        f = parse_formula("(p)^ci")
        # a trivial context makes the relativization collapse to its body
        top = ContextEnv({"ci": parse_context("true")})
        assert isinstance(prove_cel(parse_formula("(p)^ci <-> p"), top), Valid)
        # an impossible context makes any relativization hold
        bot = ContextEnv({"ci": parse_context("false")})
        assert isinstance(prove_cel(f, bot), Valid)
        # with the schema reading the same formula is refutable
        assert isinstance(prove_cel(f, ContextEnv()), Invalid)

    def test_context_names_used_as_atoms_resolve_through_bindings(self):
        env = ContextEnv({"ci": parse_context("p & q")})
        assert isinstance(prove_cel(parse_formula("ci -> p"), env), Valid)
        assert isinstance(prove_cel(parse_formula("p -> ci"), env), Invalid)

    def test_verdict_json_round_trip(self):
        f = parse_formula("(K{i,1.2} a)^ci -> (K{i,1.2} K{i,1.2} a)^cj")
        data = verdict_to_json(prove_cel(f))
        assert data["valid"] is False
        from celogic.kripke import KripkeModel

        model = KripkeModel.from_json(data["model"])
        assert data["world"] in model.worlds
