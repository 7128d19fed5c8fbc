"""
This module defines unification problems, their solutions and the measure that bounds the
length of simplification.
"""

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterable, Optional, Tuple

from models.context import Context
from models.syntax import Atom, Signature, Variable
from models.term import Suspension, Substitution, Term, atoms_of, term_size, vars_of


@dataclass(frozen=True)
class Equation:
    """A unification constraint s =? t."""

    lhs: Term
    rhs: Term

    @property
    def is_fixed_point(self) -> bool:
        """True for pi.X =? X, including X =? X."""
        return (
            isinstance(self.lhs, Suspension)
            and isinstance(self.rhs, Suspension)
            and self.lhs.var == self.rhs.var
            and self.rhs.perm.is_identity
        )

    def size(self) -> int:
        return term_size(self.lhs) + term_size(self.rhs)

    def substitute(self, subst: Substitution) -> "Equation":
        return Equation(subst.apply(self.lhs), subst.apply(self.rhs))

    def variables(self) -> FrozenSet[Variable]:
        return vars_of(self.lhs, self.rhs)

    def atoms(self) -> FrozenSet[Atom]:
        return atoms_of(self.lhs, self.rhs)

    def __str__(self) -> str:
        return f"{self.lhs} =? {self.rhs}"


@dataclass(frozen=True)
class UnificationProblem:
    """A set of equations under new-quantified names, with the bindings made so far.

    Bindings are kept in the order they were made; applying them left to right gives the
    pending substitution.
    """

    nu_names: FrozenSet[Atom] = frozenset()
    equations: Tuple[Equation, ...] = ()
    bindings: Tuple[Tuple[Variable, Term], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nu_names", frozenset(self.nu_names))
        object.__setattr__(self, "equations", tuple(self.equations))
        object.__setattr__(self, "bindings", tuple(self.bindings))

    @classmethod
    def of(cls, pairs: Iterable[Tuple[Term, Term]], nu_names: Iterable[Atom] = ()) -> "UnificationProblem":
        return cls(frozenset(nu_names), tuple(Equation(s, t) for s, t in pairs))

    def pending_substitution(self) -> Substitution:
        result = Substitution(nu_names=self.nu_names)
        for var, term in self.bindings:
            result = result.compose(Substitution.single(var, term))
        return result

    def variables(self) -> FrozenSet[Variable]:
        return frozenset(var for eq in self.equations for var in eq.variables())

    def atoms(self) -> FrozenSet[Atom]:
        result = set(self.nu_names)
        for eq in self.equations:
            result.update(eq.atoms())
        for _, term in self.bindings:
            result.update(atoms_of(term))
        return frozenset(result)

    def __str__(self) -> str:
        body = ", ".join(str(eq) for eq in self.equations) or "{}"
        if not self.nu_names:
            return body
        names = " ".join(str(atom) for atom in sorted(self.nu_names))
        return f"new {names}. {body}"


@dataclass(frozen=True)
class ExtendedProblem:
    """A disjunction of problems produced by branching on commutative symbols."""

    problems: Tuple[UnificationProblem, ...] = ()

    def __iter__(self):
        return iter(self.problems)

    def __len__(self) -> int:
        return len(self.problems)

    def __getitem__(self, index: int) -> UnificationProblem:
        return self.problems[index]


@dataclass(frozen=True)
class Solution:
    """A pair of a normalized context and a substitution, new-quantified together."""

    context: Context
    substitution: Substitution

    @property
    def nu_names(self) -> FrozenSet[Atom]:
        return self.context.nu_names

    def variables(self) -> FrozenSet[Variable]:
        return self.context.variables() | self.substitution.variables()

    def atoms(self) -> FrozenSet[Atom]:
        return self.context.atoms() | self.substitution.atoms()

    def key(self) -> Tuple:
        """Canonical key used to deduplicate solutions."""
        constraints = tuple(
            (c.var.name, str(c.perm)) for c in self.context.sorted_constraints()
        )
        return (tuple(sorted(self.nu_names)), constraints, self.substitution.sort_key())

    def __str__(self) -> str:
        names = " ".join(str(atom) for atom in sorted(self.nu_names))
        prefix = f"new {names}. " if names else ""
        constraints = ", ".join(str(c) for c in self.context.sorted_constraints())
        return f"{prefix}<{{{constraints}}}, {self.substitution}>"


class Verdict(Enum):
    """Classification of an equation no simplification rule applies to.

    UNVERIFIED marks a goal equation that a candidate solution fails to solve.
    """

    CONSISTENT = "ConsistentFixedPoint"
    ATOM_CLASH = "AtomClash"
    HEAD_CLASH = "SymbolClash"
    CONSTRUCTOR_CLASH = "ConstructorClash"
    OCCURS = "Occurs"
    UNVERIFIED = "NameEscape"

    @property
    def consistent(self) -> bool:
        return self is Verdict.CONSISTENT


def _multiset_greater(left: Counter, right: Counter) -> bool:
    # Dershowitz-Manna: every element right gains over left is dominated by one left loses
    if left == right:
        return False
    gained = right - left
    lost = left - right
    if not lost:
        return False
    return all(any(big > small for big in lost) for small in gained)


@dataclass(frozen=True)
class ProblemMeasure:
    """Variable count and the multiset of sizes of equations that are not fixed points.

    Measures compare lexicographically, the multiset part by the multiset extension of
    the ordering on naturals.
    """

    var_count: int
    sizes: Tuple[int, ...] = field(default=())

    @classmethod
    def of(cls, problem: UnificationProblem) -> "ProblemMeasure":
        sizes = sorted((eq.size() for eq in problem.equations if not eq.is_fixed_point), reverse=True)
        return cls(len(problem.variables()), tuple(sizes))

    def __gt__(self, other: "ProblemMeasure") -> bool:
        if self.var_count != other.var_count:
            return self.var_count > other.var_count
        return _multiset_greater(Counter(self.sizes), Counter(other.sizes))

    def __lt__(self, other: "ProblemMeasure") -> bool:
        return other > self

    def __str__(self) -> str:
        return f"({self.var_count}, {{{', '.join(str(size) for size in self.sizes)}}})"


@dataclass(frozen=True)
class ProblemFile:
    """A parsed problem file: either a judgement or a unification goal."""

    signature: Signature
    nu_names: FrozenSet[Atom] = frozenset()
    context: Optional[Context] = None
    lhs: Optional[Term] = None
    rhs: Optional[Term] = None
    equations: Tuple[Equation, ...] = ()

    @property
    def is_judgement(self) -> bool:
        return self.context is not None

    def problem(self) -> UnificationProblem:
        return UnificationProblem(self.nu_names, self.equations)
