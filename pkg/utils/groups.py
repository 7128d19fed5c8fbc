"""
This module answers membership questions for the permutation groups that fixed-point
contexts generate.

A context describes, for each variable, the product of two groups: all permutations of a
finite set of fresh atoms, and the subgroup generated by its fixed-point permutations.
Membership in that product is decided per cycle, with a cached breadth-first closure for
the generated part.
"""

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations as orderings
from typing import FrozenSet, Iterable, Tuple

from models.errors import CapExceeded, SpecInvalid
from models.permutation import IDENTITY, Permutation
from models.syntax import Atom

logger = logging.getLogger(__name__)

DEFAULT_CAP = 1_000_000


@dataclass(frozen=True)
class CycleSplit:
    """A permutation cut into the cycles touching a name set and the remaining cycles."""

    quantified: Permutation
    unquantified: Permutation


@dataclass(frozen=True)
class GroupSpec:
    """The product of Perm(fresh_atoms) with the group generated by fix_generators."""

    fresh_atoms: FrozenSet[Atom]
    fix_generators: Tuple[Permutation, ...]

    def __post_init__(self):
        object.__setattr__(self, "fresh_atoms", frozenset(self.fresh_atoms))
        object.__setattr__(
            self,
            "fix_generators",
            tuple(sorted(set(self.fix_generators), key=Permutation.sort_key)),
        )

    def validate(self) -> None:
        """Check that no generator moves a fresh atom.

        Raises:
            SpecInvalid: If a generator's domain meets the fresh atoms.
        """
        for generator in self.fix_generators:
            overlap = generator.domain & self.fresh_atoms
            if overlap:
                names = ", ".join(str(atom) for atom in sorted(overlap))
                raise SpecInvalid(f"Generator {generator} moves fresh atoms {names}")

    def __str__(self) -> str:
        fresh = ", ".join(str(atom) for atom in sorted(self.fresh_atoms))
        generators = ", ".join(str(g) for g in self.fix_generators)
        return f"Perm{{{fresh}}} x <{generators}>"


def split(perm: Permutation, names: Iterable[Atom]) -> CycleSplit:
    """Split a permutation into cycles that meet the names and cycles that do not.

    The two parts have disjoint domains, so composing them in either order gives perm back.
    """
    names = frozenset(names)
    quantified = tuple(cycle for cycle in perm.cycles if names.intersection(cycle))
    unquantified = tuple(cycle for cycle in perm.cycles if not names.intersection(cycle))
    return CycleSplit(Permutation(quantified), Permutation(unquantified))


def support(generators: Iterable[Permutation]) -> FrozenSet[Atom]:
    return frozenset(atom for generator in generators for atom in generator.domain)


@lru_cache(maxsize=256)
def group_closure(generators: Tuple[Permutation, ...], cap: int = DEFAULT_CAP) -> FrozenSet[Permutation]:
    """Enumerate the finite group generated by the given permutations.

    Args:
        generators: Generators, sorted so equal generator sets share a cache entry.
        cap: Largest group size to enumerate.

    Returns:
        FrozenSet[Permutation]: Every element of the generated group.

    Raises:
        CapExceeded: If the group has more than cap elements.
    """
    elements = {IDENTITY}
    frontier = deque([IDENTITY])
    while frontier:
        current = frontier.popleft()
        for generator in generators:
            candidate = generator.compose(current)
            if candidate in elements:
                continue
            elements.add(candidate)
            if len(elements) > cap:
                logger.warning(f"Closure of {len(generators)} generators passed {cap} elements")
                raise CapExceeded(cap)
            frontier.append(candidate)
    logger.debug(f"Closure of {len(generators)} generators has {len(elements)} elements")
    return frozenset(elements)


def _normalized_generators(generators: Iterable[Permutation]) -> Tuple[Permutation, ...]:
    return tuple(sorted({g for g in generators if not g.is_identity}, key=Permutation.sort_key))


def subgroup_member(perm: Permutation, generators: Iterable[Permutation], cap: int = DEFAULT_CAP) -> bool:
    """Decide whether perm lies in the group generated by generators."""
    if perm.is_identity:
        return True
    generators = _normalized_generators(generators)
    if not perm.domain <= support(generators):
        return False
    return perm in group_closure(generators, cap)


def coset_product_member(perm: Permutation, spec: GroupSpec, cap: int = DEFAULT_CAP) -> bool:
    """Decide whether perm lies in Perm(spec.fresh_atoms) times the generated group.

    A cycle that lies inside the fresh atoms is absorbed by the first factor. A cycle that
    only partly meets them cannot be produced, because the generators never move a fresh
    atom. The cycles left over must form an element of the generated group.

    Raises:
        SpecInvalid: If spec fails validation.
        CapExceeded: If the generated group is larger than cap.
    """
    spec.validate()
    outside = []
    for cycle in perm.cycles:
        inside = spec.fresh_atoms.intersection(cycle)
        if inside and len(inside) < len(cycle):
            return False
        if not inside:
            outside.append(cycle)
    return subgroup_member(Permutation(tuple(outside)), spec.fix_generators, cap)


def symmetric_group(atoms: Iterable[Atom]) -> FrozenSet[Permutation]:
    """All permutations of a finite atom set."""
    atoms = sorted(set(atoms))
    return frozenset(
        Permutation.from_mapping(dict(zip(atoms, image))) for image in orderings(atoms)
    )
