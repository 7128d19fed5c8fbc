import pytest
from hypothesis import given, settings

from models.context import Context, FixConstraint
from models.errors import NotNormalized
from models.permutation import IDENTITY
from models.syntax import Atom, Variable
from models.term import atoms_of
from tests.strategies import contexts
from utils.groups import group_closure
from utils.oracle import grounding_substitution
from utils.problem_parser import ProblemParser

a, b, c, d, e = (Atom(name) for name in "abcde")
c1 = Atom("c", 1)
X, Y, Z = Variable("X"), Variable("Y"), Variable("Z")


def ctx(text):
    return ProblemParser.parse_context(text)


def perm(text):
    return ProblemParser.parse_permutation(text)


def generated(group):
    return group_closure(tuple(group.fix_generators))


class TestRestrict:
    def test_keeps_names_and_variable(self):
        context = ctx("new c. {(d e c) fix X, (a b) fix Y}")
        assert context.restrict(Y) == ctx("new c. {(a b) fix Y}")

    def test_empty(self):
        assert Context().restrict(X) == Context()

    def test_idempotent(self):
        context = ctx("new c. {(d e c) fix X, (a b) fix Y}")
        assert context.restrict(X).restrict(X) == context.restrict(X)


class TestNormalize:
    def test_splits_quantified_cycles(self):
        assert ctx("new c. {(a c)(d e) fix Z}").normalize() == ctx("new c. {(a c) fix Z, (d e) fix Z}")

    def test_absorbs_overlapping_cycle(self):
        context = ctx("new c. {(a c) fix X, (a b)(d e) fix X}")
        assert context.normalize() == ctx("new c. {(a b c) fix X, (d e) fix X}")

    def test_absorbing_never_loses_atoms(self):
        # (a c b) after (a b) alone would be (b c)
        normal = ctx("new c. {(a c b) fix X, (a b) fix X}").normalize()
        assert normal.membership_group(X).fresh_atoms == {a, b, c}

    def test_normal_form_is_stable(self):
        normal = ctx("new c. {(a c) fix X, (a b)(d e) fix X}").normalize()
        assert normal.is_normalized()
        assert Context(normal.nu_names, normal.constraints).normalize() == normal

    def test_unnormalized_context_is_detected(self):
        assert not ctx("new c. {(a c)(d e) fix Z}").is_normalized()
        assert ctx("{(a b) fix X}").is_normalized()

    def test_identity_constraints_vanish(self):
        assert Context.of([FixConstraint(IDENTITY, X)]) == Context()

    @given(contexts())
    @settings(max_examples=300, deadline=None)
    def test_merge_orders_induce_the_same_groups(self, context):
        forward = context.normalize()
        backward = context.normalize(reverse=True)
        for var in context.variables():
            left, right = forward.membership_group(var), backward.membership_group(var)
            assert left.fresh_atoms == right.fresh_atoms
            assert generated(left) == generated(right)

    @given(contexts())
    @settings(max_examples=300, deadline=None)
    def test_normal_form_shape(self, context):
        normal = context.normalize()
        for var in normal.variables():
            parts = normal.fresh_fix_split(var)
            fresh_atoms = {atom for p in parts.fresh for atom in p.domain}
            for p in parts.fresh:
                assert all(set(cycle) & normal.nu_names for cycle in p.cycles)
            for p in parts.fixed:
                assert not p.domain & normal.nu_names
                assert not p.domain & fresh_atoms

    @given(contexts())
    @settings(max_examples=300, deadline=None)
    def test_normalizing_keeps_atoms(self, context):
        assert atoms_of(context.normalize()) == atoms_of(context)


class TestFreshFixSplit:
    def test_partition(self):
        parts = ctx("new c. {(a b c) fix X, (d e) fix X}").fresh_fix_split(X)
        assert parts.fresh == (perm("(a b c)"),)
        assert parts.fixed == (perm("(d e)"),)

    def test_empty(self):
        parts = Context().fresh_fix_split(X)
        assert parts.fresh == () and parts.fixed == ()

    def test_only_quantified(self):
        parts = ctx("new c. {(a c) fix X}").fresh_fix_split(X)
        assert parts.fixed == ()

    def test_requires_normal_form(self):
        context = ctx("new c. {(a c)(d e) fix X}")
        with pytest.raises(NotNormalized):
            context.fresh_fix_split(X)
        assert context.normalize().fresh_fix_split(X).fixed == (perm("(d e)"),)


class TestMembershipGroup:
    def test_fresh_atoms_and_generators(self):
        context = ctx("new c. {(c d e) fix X, (a b) fix Y}").normalize()
        x_group = context.membership_group(X)
        y_group = context.membership_group(Y)
        assert x_group.fresh_atoms == {c, d, e}
        assert x_group.fix_generators == ()
        assert y_group.fresh_atoms == {c}
        assert y_group.fix_generators == (perm("(a b)"),)

    def test_unconstrained_variable(self):
        group = Context().membership_group(X)
        assert group.fresh_atoms == frozenset() and group.fix_generators == ()

    def test_requires_normal_form(self):
        context = ctx("new c. {(a c)(d e) fix X}")
        with pytest.raises(NotNormalized):
            context.membership_group(X)
        group = context.normalize().membership_group(X)
        assert group.fresh_atoms == {a, c}
        assert group.fix_generators == (perm("(d e)"),)


class TestNames:
    def test_atoms_include_unused_names(self):
        context = ctx("new c c1. {(a c) fix X}")
        assert context.atoms() == {a, c, c1}

    def test_with_unused_names_stays_normalized(self):
        normal = ctx("new c. {(a c) fix X}").normalize()
        assert normal.with_names({c1}).normalized
        assert not normal.with_names({a}).normalized

    def test_str(self):
        assert str(ctx("new c. {(d e c) fix X, (a b) fix Y}")) == "new c. {(c d e) fix X, (a b) fix Y}"


class TestGrounding:
    def test_excludes_fresh_atoms_and_names(self):
        context = ctx("new c. {(a c) fix X}").normalize()
        grounding = grounding_substitution(context, [X], {a, b})
        assert str(grounding.image(X)) == "d_x(b)"

    def test_unconstrained_variable_sees_everything(self):
        grounding = grounding_substitution(Context().normalize(), [X], {a})
        assert str(grounding.image(X)) == "d_x(a)"

    def test_distinct_symbols(self):
        grounding = grounding_substitution(Context().normalize(), [X, Y], {a})
        assert grounding.image(X).symbol != grounding.image(Y).symbol

    def test_requires_normal_form(self):
        with pytest.raises(NotNormalized):
            grounding_substitution(ctx("new c. {(a c)(d e) fix Z}"), [Z])
