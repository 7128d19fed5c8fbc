from hypothesis import strategies as st

from models.context import Context, FixConstraint
from models.permutation import Permutation
from models.problem import UnificationProblem
from models.syntax import Atom, Signature, Symbol, Theory, Variable
from models.term import Abs, App, AtomTerm, Substitution, Suspension, atoms_of, permute

PAIR = Symbol("f", 2)
UNARY = Symbol("g", 1)
COMM = Symbol("h", 2, Theory.C)
SIGNATURE = Signature([PAIR, UNARY, COMM])

PLAIN_ATOMS = [Atom("a"), Atom("b"), Atom("d"), Atom("e")]
NEW_ATOMS = [Atom("c"), Atom("c", 5)]
ALL_ATOMS = PLAIN_ATOMS + NEW_ATOMS
VARIABLES = [Variable("X"), Variable("Y"), Variable("Z")]


def permutations(atoms=tuple(PLAIN_ATOMS), max_size=None):
    """Random permutations whose domain lies within atoms."""
    return st.lists(st.sampled_from(list(atoms)), unique=True, max_size=max_size).flatmap(
        lambda domain: st.permutations(domain).map(
            lambda image: Permutation.from_mapping(dict(zip(domain, image)))
        )
    )


@st.composite
def terms(draw, atoms=tuple(PLAIN_ATOMS), variables=tuple(VARIABLES), depth=3):
    kinds = ["atom"] + (["var"] if variables else [])
    if depth > 1:
        kinds += ["pair", "unary", "comm", "abs"]
    kind = draw(st.sampled_from(kinds))
    if kind == "atom":
        return AtomTerm(draw(st.sampled_from(list(atoms))))
    if kind == "var":
        return Suspension(draw(permutations(atoms, 3)), draw(st.sampled_from(list(variables))))
    if kind == "abs":
        return Abs(draw(st.sampled_from(list(atoms))), draw(terms(atoms, variables, depth - 1)))
    symbol = {"pair": PAIR, "unary": UNARY, "comm": COMM}[kind]
    return App(symbol, tuple(draw(terms(atoms, variables, depth - 1)) for _ in range(symbol.arity)))


def ground_terms(depth=3):
    return terms(variables=(), depth=depth)


def substitutions(depth=2):
    return st.dictionaries(st.sampled_from(VARIABLES), terms(depth=depth), max_size=3).map(Substitution)


@st.composite
def contexts(draw, max_constraints=3):
    nu_names = draw(st.sets(st.sampled_from(NEW_ATOMS)))
    pool = PLAIN_ATOMS + sorted(nu_names)
    constraints = draw(
        st.lists(
            st.builds(FixConstraint, permutations(pool, 4), st.sampled_from(VARIABLES)),
            max_size=max_constraints,
        )
    )
    return Context(frozenset(nu_names), frozenset(constraints))


@st.composite
def variants(draw, term, variables=tuple(VARIABLES)):
    """Perturb a term so that unifying it with the original is often, not always, solvable."""
    if variables and draw(st.integers(0, 5)) == 0:
        return Suspension(draw(permutations(max_size=2)), draw(st.sampled_from(list(variables))))
    if isinstance(term, App):
        args = [draw(variants(arg, variables)) for arg in term.args]
        if term.symbol.is_commutative and draw(st.booleans()):
            args.reverse()
        return App(term.symbol, tuple(args))
    if isinstance(term, Abs):
        binder = draw(st.sampled_from([term.binder] + PLAIN_ATOMS))
        return Abs(binder, draw(variants(term.body, variables)))
    return term


@st.composite
def problems(draw, depth=3):
    """Problems with at most three variables, six atoms and one commutative symbol."""
    count = draw(st.integers(1, 2))
    pairs = []
    for _ in range(count):
        lhs = draw(terms(depth=depth))
        rhs = draw(st.one_of(terms(depth=depth), variants(lhs)))
        pairs.append((lhs, rhs))
    return UnificationProblem.of(pairs)


@st.composite
def equivalent_variants(draw, context, term):
    """A term the context makes equivalent to term.

    Commutative arguments may be swapped, binders renamed to unused new names and
    suspensions multiplied by an element of their variable's group.
    """
    if isinstance(term, Suspension):
        group = context.membership_group(term.var)
        fresh = sorted(group.fresh_atoms)
        choices = list(group.fix_generators)
        choices += [Permutation.swap(a, b) for a in fresh for b in fresh if a < b]
        if not choices:
            return term
        element = draw(st.sampled_from(choices))
        return Suspension(term.perm.compose(element), term.var)
    if isinstance(term, App):
        args = [draw(equivalent_variants(context, arg)) for arg in term.args]
        if term.symbol.is_commutative and draw(st.booleans()):
            args.reverse()
        return App(term.symbol, tuple(args))
    if isinstance(term, Abs):
        body = draw(equivalent_variants(context, term.body))
        unused = [atom for atom in sorted(context.nu_names) if atom not in atoms_of(term, body)]
        if unused and draw(st.booleans()):
            name = draw(st.sampled_from(unused))
            return Abs(name, permute(Permutation.swap(term.binder, name), body))
        return Abs(term.binder, body)
    return term


@st.composite
def derivable_judgements(draw, depth=3):
    """A normalized context with two terms it makes equivalent; terms avoid new names."""
    context = draw(contexts()).normalize()
    lhs = draw(terms(depth=depth))
    rhs = draw(equivalent_variants(context, lhs))
    return context, lhs, rhs
