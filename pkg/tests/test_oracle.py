from itertools import combinations

import pytest
from hypothesis import given, settings

from controllers.equiv_controller import EquivController
from controllers.unify_controller import UnifyController
from models.context import Context
from models.errors import NonGround
from models.syntax import Atom, Signature, Symbol, Theory, Variable
from models.term import Substitution, atoms_of, vars_of
from tests.strategies import SIGNATURE, ground_terms, problems
from utils.oracle import (
    enumerate_ground_terms,
    extend_signature,
    free_names,
    grounding_substitution,
    ground_alpha_c_equal,
    ground_instance,
    ground_unifiers,
)
from utils.problem_parser import ProblemParser

X = Variable("X")
a, b, c, d = (Atom(name) for name in "abcd")
SMALL = Signature([Symbol("f", 1), Symbol("g", 2, Theory.C)])


def term(text, signature=SIGNATURE):
    return ProblemParser.parse_term(text, signature)


def has_fix_part(solution):
    return any(not constraint.perm.domain & solution.nu_names for constraint in solution.context.constraints)


class TestGroundEquality:
    def test_free_names(self):
        assert free_names(term("[a]f(a, b)")) == {b}
        assert free_names(term("h([a]a, [b]d)")) == {d}

    def test_examples(self):
        assert ground_alpha_c_equal(term("[a]h(a, b)"), term("[d]h(b, d)"))
        assert not ground_alpha_c_equal(term("[a]f(a, b)"), term("[d]f(b, d)"))
        assert not ground_alpha_c_equal(term("[a]b"), term("[b]a"))

    def test_rejects_suspensions(self):
        with pytest.raises(NonGround):
            ground_alpha_c_equal(term("X"), term("a"))
        with pytest.raises(NonGround):
            free_names(term("g((a b).X)"))

    def test_enumeration_size(self):
        assert len(list(enumerate_ground_terms(SMALL, [a, b, c], 3))) == 675
        assert len(list(enumerate_ground_terms(SMALL, [a, b, c], 1))) == 3

    def test_checker_agrees_on_every_small_pair(self):
        checker = EquivController()
        found = list(enumerate_ground_terms(SMALL, [a, b, c], 3))
        for left, right in combinations(found, 2):
            assert checker.check(Context(), left, right) == ground_alpha_c_equal(left, right), (
                f"{left} vs {right}"
            )

    @given(ground_terms(), ground_terms())
    @settings(max_examples=500, deadline=None)
    def test_checker_agrees_on_random_pairs(self, left, right):
        assert EquivController().check(Context(), left, right) == ground_alpha_c_equal(left, right)


class TestGrounding:
    def test_commutative_binder_example(self):
        problem = ProblemParser.parse_text("sig and:2 comm; [a]and(X, Y) =? [b]and(Y, X)")
        solutions = UnifyController().solve(problem.problem())
        for solution in solutions:
            assert self._grounded_sides_agree(solution, problem.problem().equations)

    def test_grounding_symbols(self):
        context = ProblemParser.parse_context("new c1. {(a c1) fix X}")
        grounding = grounding_substitution(context.normalize(), [X], [a, b])
        assert str(grounding) == "[X -> d_x(b)]"
        signature = extend_signature(SIGNATURE, grounding)
        assert "d_x" in signature
        assert signature.lookup("d_x").arity == 1

    def test_ground_instance_needs_every_variable(self):
        grounding = Substitution({X: term("a")})
        assert ground_instance(term("f(X, b)"), grounding) == term("f(a, b)")
        with pytest.raises(NonGround):
            ground_instance(term("f(X, Y)"), grounding)

    def test_ground_unifiers(self):
        lhs, rhs = term("h(X, a)"), term("h(b, a)")
        found = list(ground_unifiers([(lhs, rhs)], [X], [term("a"), term("b")]))
        assert found == [Substitution({X: term("b")})]

    @given(problems())
    @settings(max_examples=300, deadline=None)
    def test_solutions_without_fix_parts_survive_grounding(self, problem):
        for solution in UnifyController().solve(problem):
            if has_fix_part(solution):
                continue
            assert self._grounded_sides_agree(solution, problem.equations)

    @staticmethod
    def _grounded_sides_agree(solution, equations):
        sides = [
            (solution.substitution.apply(eq.lhs), solution.substitution.apply(eq.rhs))
            for eq in equations
        ]
        variables = solution.context.variables() | vars_of(*(t for pair in sides for t in pair))
        grounding = grounding_substitution(
            solution.context.normalize(), variables, atoms_of(*(t for pair in sides for t in pair))
        )
        for lhs, rhs in sides:
            grounded = (ground_instance(lhs, grounding), ground_instance(rhs, grounding))
            if not ground_alpha_c_equal(*grounded):
                return False
        return True
