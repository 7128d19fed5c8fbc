"""
This module provides reference procedures used to cross-check the checker and the unifier.

Everything here works on ground terms or enumerates groups outright, trading speed for
independence from the derivation machinery.
"""

import logging
from functools import lru_cache
from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple

from models.context import Context
from models.errors import NonGround, NotNormalized
from models.permutation import Permutation
from models.syntax import Atom, Signature, Symbol, Variable
from models.term import Abs, App, AtomTerm, Substitution, Term, is_ground, vars_of
from utils.groups import DEFAULT_CAP, GroupSpec, group_closure, symmetric_group

logger = logging.getLogger(__name__)

ORACLE_FAMILY = "z"


def _require_ground(*terms: Term) -> None:
    for term in terms:
        if not is_ground(term):
            raise NonGround(f"Expected a ground term, got {term}")


def _swap(term: Term, a: Atom, b: Atom) -> Term:
    def rename(atom: Atom) -> Atom:
        return b if atom == a else a if atom == b else atom

    if isinstance(term, AtomTerm):
        return AtomTerm(rename(term.atom))
    if isinstance(term, App):
        return App(term.symbol, tuple(_swap(arg, a, b) for arg in term.args))
    if isinstance(term, Abs):
        return Abs(rename(term.binder), _swap(term.body, a, b))
    raise NonGround(f"Expected a ground term, got {term}")


def _all_atoms(term: Term) -> FrozenSet[Atom]:
    if isinstance(term, AtomTerm):
        return frozenset({term.atom})
    if isinstance(term, App):
        return frozenset().union(*(_all_atoms(arg) for arg in term.args))
    if isinstance(term, Abs):
        return _all_atoms(term.body) | {term.binder}
    raise NonGround(f"Expected a ground term, got {term}")


def free_names(term: Term) -> FrozenSet[Atom]:
    """Atoms occurring free in a ground term."""
    _require_ground(term)
    if isinstance(term, AtomTerm):
        return frozenset({term.atom})
    if isinstance(term, App):
        return frozenset().union(*(free_names(arg) for arg in term.args))
    return free_names(term.body) - {term.binder}


def ground_alpha_c_equal(left: Term, right: Term) -> bool:
    """Decide alpha-equivalence modulo commutativity of two ground terms.

    Raises:
        NonGround: If either term contains a suspension.
    """
    _require_ground(left, right)
    return _equal(left, right)


def _equal(left: Term, right: Term) -> bool:
    if isinstance(left, AtomTerm) and isinstance(right, AtomTerm):
        return left.atom == right.atom
    if isinstance(left, App) and isinstance(right, App):
        if left.symbol != right.symbol:
            return False
        if all(_equal(l, r) for l, r in zip(left.args, right.args)):
            return True
        if left.symbol.is_commutative:
            return _equal(left.args[0], right.args[1]) and _equal(left.args[1], right.args[0])
        return False
    if isinstance(left, Abs) and isinstance(right, Abs):
        if left.binder == right.binder:
            return _equal(left.body, right.body)
        used = _all_atoms(left) | _all_atoms(right)
        fresh = Atom(ORACLE_FAMILY, max((a.index for a in used if a.family == ORACLE_FAMILY), default=0) + 1)
        return _equal(_swap(left.body, left.binder, fresh), _swap(right.body, right.binder, fresh))
    return False


def grounding_symbol(var: Variable, arity: int) -> Symbol:
    return Symbol(f"d_{var.name.lower()}", arity)


def grounding_substitution(
    context: Context, variables: Iterable[Variable], query_atoms: Iterable[Atom] = ()
) -> Substitution:
    """Map each variable to a fresh symbol applied to the atoms the context lets it mention.

    A variable may mention every atom of the context and the query except the new names
    and the atoms its new-mentioning constraints make fresh.

    Raises:
        NotNormalized: If the context is not normalized.
    """
    if not context.is_normalized():
        raise NotNormalized(f"Grounding needs a normalized context, got {context}")
    available = context.atoms() | frozenset(query_atoms)
    bindings: Dict[Variable, Term] = {}
    for var in sorted(set(variables)):
        fresh = context.membership_group(var).fresh_atoms
        args = tuple(AtomTerm(atom) for atom in sorted(available - fresh - context.nu_names))
        bindings[var] = App(grounding_symbol(var, len(args)), args)
    return Substitution(bindings)


def extend_signature(signature: Signature, grounding: Substitution) -> Signature:
    """Declare the symbols a grounding substitution introduces."""
    symbols = [term.symbol for term in grounding.bindings.values() if isinstance(term, App)]
    return signature.extended(s for s in symbols if s.name not in signature)


@lru_cache(maxsize=64)
def coset_product_elements(spec: GroupSpec, cap: int = DEFAULT_CAP) -> FrozenSet[Permutation]:
    """Every product h after k with h permuting the fresh atoms and k generated."""
    fresh_group = symmetric_group(spec.fresh_atoms)
    generated = group_closure(tuple(g for g in spec.fix_generators if not g.is_identity), cap)
    return frozenset(h.compose(k) for h in fresh_group for k in generated)


def brute_force_coset_product(perm: Permutation, spec: GroupSpec, cap: int = DEFAULT_CAP) -> bool:
    """Decide membership by enumerating the whole product set."""
    return perm in coset_product_elements(spec, cap)


def enumerate_ground_terms(signature: Signature, atoms: Sequence[Atom], depth: int) -> Iterator[Term]:
    """Yield every ground term whose depth is at most depth, a leaf having depth 1."""
    yield from _ground_terms_by_depth(tuple(signature.symbols), tuple(sorted(set(atoms))), depth)


def _ground_terms_by_depth(symbols: Tuple[Symbol, ...], atoms: Tuple[Atom, ...], depth: int) -> List[Term]:
    if depth < 1:
        return []
    leaves: List[Term] = [AtomTerm(a) for a in atoms]
    leaves += [App(symbol) for symbol in symbols if symbol.arity == 0]
    terms = list(leaves)
    for _ in range(depth - 1):
        below = terms
        terms = list(leaves)
        for symbol in symbols:
            if symbol.arity:
                terms.extend(App(symbol, args) for args in product(below, repeat=symbol.arity))
        terms.extend(Abs(atom, body) for atom in atoms for body in below)
    logger.debug(f"Enumerated {len(terms)} ground terms of depth <= {depth}")
    return terms


def ground_unifiers(
    equations: Sequence[Tuple[Term, Term]],
    variables: Sequence[Variable],
    candidates: Sequence[Term],
) -> Iterator[Substitution]:
    """Yield every assignment of candidate ground terms that equates all equations."""
    variables = sorted(set(variables))
    for images in product(candidates, repeat=len(variables)):
        grounding = Substitution(dict(zip(variables, images)))
        instances = [(grounding.apply(s), grounding.apply(t)) for s, t in equations]
        if all(is_ground(s) and is_ground(t) for s, t in instances) and all(
            _equal(s, t) for s, t in instances
        ):
            yield grounding


def ground_instance(term: Term, grounding: Substitution) -> Term:
    """Apply a grounding, insisting the result has no suspension left."""
    result = grounding.apply(term)
    if not is_ground(result):
        missing = ", ".join(sorted(var.name for var in vars_of(result)))
        raise NonGround(f"Grounding leaves {missing} in {result}")
    return result
