"""
This module defines fixed-point contexts: finite sets of constraints "pi fixes X" under a
block of new-quantified names, together with their normalization.
"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Optional, Tuple

from models.errors import NotNormalized
from models.permutation import Permutation
from models.syntax import Atom, Variable
from utils.groups import GroupSpec, split

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixConstraint:
    """The primitive constraint that perm fixes whatever var is instantiated with."""

    perm: Permutation
    var: Variable

    def sort_key(self) -> Tuple:
        return (self.var, self.perm.sort_key())

    def __str__(self) -> str:
        return f"{self.perm} fix {self.var}"


@dataclass(frozen=True)
class FreshFixSplit:
    """The constraints on one variable, separated by whether they mention new names."""

    fresh: Tuple[Permutation, ...]
    fixed: Tuple[Permutation, ...]


@dataclass(frozen=True)
class Context:
    """A set of fixed-point constraints with the names new-quantified over them.

    The normalized flag only records that normalize() produced this value; it takes no
    part in equality.
    """

    nu_names: FrozenSet[Atom] = frozenset()
    constraints: FrozenSet[FixConstraint] = frozenset()
    normalized: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nu_names", frozenset(self.nu_names))
        object.__setattr__(
            self,
            "constraints",
            frozenset(c for c in self.constraints if not c.perm.is_identity),
        )

    @classmethod
    def of(cls, constraints: Iterable[FixConstraint], nu_names: Iterable[Atom] = ()) -> "Context":
        return cls(frozenset(nu_names), frozenset(constraints))

    def sorted_constraints(self) -> List[FixConstraint]:
        return sorted(self.constraints, key=FixConstraint.sort_key)

    def variables(self) -> FrozenSet[Variable]:
        return frozenset(c.var for c in self.constraints)

    def atoms(self) -> FrozenSet[Atom]:
        """Atoms of all constraints together with the new-quantified names."""
        result = set(self.nu_names)
        for constraint in self.constraints:
            result.update(constraint.perm.domain)
        return frozenset(result)

    def restrict(self, var: Variable) -> "Context":
        """The constraints on var, keeping every new-quantified name."""
        return Context(self.nu_names, frozenset(c for c in self.constraints if c.var == var))

    def add(self, *constraints: FixConstraint) -> "Context":
        return Context(self.nu_names, self.constraints | frozenset(constraints))

    def remove(self, constraint: FixConstraint) -> "Context":
        return Context(self.nu_names, self.constraints - {constraint})

    def with_names(self, names: Iterable[Atom]) -> "Context":
        """Extend the new-quantified names.

        Names that occur nowhere in the context keep a normalized context normalized.
        """
        names = frozenset(names)
        still_normal = self.normalized and not (names - self.nu_names) & self.atoms()
        return Context(self.nu_names | names, self.constraints, normalized=still_normal)

    def fresh_fix_split(self, var: Variable) -> FreshFixSplit:
        """Partition the permutations constraining var by whether they meet a new name.

        Raises:
            NotNormalized: If the context is not normalized.
        """
        if not self.is_normalized():
            raise NotNormalized(f"Splitting needs a normalized context, got {self}")
        fresh, fixed = [], []
        for constraint in self.restrict(var).sorted_constraints():
            target = fresh if constraint.perm.domain & self.nu_names else fixed
            target.append(constraint.perm)
        return FreshFixSplit(tuple(fresh), tuple(fixed))

    def membership_group(self, var: Variable) -> GroupSpec:
        """The group of permutations that this context lets act trivially on var.

        Every new-quantified name is fresh for var, together with every atom its
        new-mentioning constraints touch. The remaining constraints generate the rest.

        Raises:
            NotNormalized: If the context is not normalized.
        """
        parts = self.fresh_fix_split(var)
        fresh_atoms = set(self.nu_names)
        for perm in parts.fresh:
            fresh_atoms.update(perm.domain)
        return GroupSpec(frozenset(fresh_atoms), parts.fixed)

    def normalize(self, reverse: bool = False) -> "Context":
        """Bring the context into normal form.

        Each constraint is first cut into the cycles that meet a new name and the cycles
        that do not. Then, while a new-free cycle shares atoms with a new-mentioning
        constraint on the same variable, the cycle is absorbed into that constraint so the
        atoms it moves become fresh as well.

        Args:
            reverse: Scan candidates in reverse order. Normal forms are not unique, and
                this gives a second strategy that generates the same groups.

        Returns:
            Context: An equivalent normalized context.
        """
        if self.normalized and not reverse:
            return self
        result = set()
        for var in sorted(self.variables()):
            fresh, fixed = [], []
            for constraint in self.restrict(var).sorted_constraints():
                parts = split(constraint.perm, self.nu_names)
                if not parts.quantified.is_identity:
                    fresh.append(parts.quantified)
                if not parts.unquantified.is_identity:
                    fixed.append(parts.unquantified)
            fresh, fixed = _absorb_cycles(fresh, fixed, reverse)
            result.update(FixConstraint(perm, var) for perm in fresh + fixed)
        normal = Context(self.nu_names, frozenset(result), normalized=True)
        if normal != self:
            logger.debug(f"Normalized {self} to {normal}")
        return normal

    def is_normalized(self) -> bool:
        return self.normalized or self.normalize() == self

    def __str__(self) -> str:
        body = "{" + ", ".join(str(c) for c in self.sorted_constraints()) + "}"
        if not self.nu_names:
            return body
        names = " ".join(str(atom) for atom in sorted(self.nu_names))
        return f"new {names}. {body}"


def _find_absorption(
    fresh: List[Permutation], fixed: List[Permutation], reverse: bool
) -> Optional[Tuple[int, int, Tuple[Atom, ...]]]:
    fixed_order = range(len(fixed) - 1, -1, -1) if reverse else range(len(fixed))
    for j in fixed_order:
        cycles = fixed[j].cycles[::-1] if reverse else fixed[j].cycles
        for cycle in cycles:
            for i, perm in enumerate(fresh):
                if perm.domain.intersection(cycle):
                    return i, j, cycle
    return None


def _absorb(perm: Permutation, cycle: Tuple[Atom, ...]) -> Permutation:
    shared = perm.domain.intersection(cycle)
    if len(shared) == 1:
        return perm.compose(Permutation((cycle,)))
    added = tuple(atom for atom in cycle if atom not in perm.domain)
    if not added:
        return perm
    # a cycle through one shared atom keeps every atom of perm moved
    return perm.compose(Permutation(((min(shared),) + added,)))


def _absorb_cycles(
    fresh: List[Permutation], fixed: List[Permutation], reverse: bool
) -> Tuple[List[Permutation], List[Permutation]]:
    while True:
        found = _find_absorption(fresh, fixed, reverse)
        if found is None:
            return fresh, fixed
        i, j, cycle = found
        fresh[i] = _absorb(fresh[i], cycle)
        rest = Permutation(tuple(c for c in fixed[j].cycles if c != cycle))
        if rest.is_identity:
            del fixed[j]
        else:
            fixed[j] = rest
