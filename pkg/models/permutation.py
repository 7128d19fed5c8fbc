"""
This module defines finite permutations of atoms in canonical disjoint-cycle form.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Mapping, Sequence, Tuple

from models.syntax import Atom

Cycle = Tuple[Atom, ...]


def _rotate(cycle: Sequence[Atom]) -> Cycle:
    start = cycle.index(min(cycle))
    return tuple(cycle[start:]) + tuple(cycle[:start])


@dataclass(frozen=True)
class Permutation:
    """A bijection on atoms that moves finitely many of them.

    The cycles are kept disjoint, each rotated so its least atom comes first, sorted by
    that atom, with fixed points omitted. Two permutations are therefore equal exactly
    when their cycle tuples are equal.
    """

    cycles: Tuple[Cycle, ...] = ()

    def __post_init__(self):
        cycles = [_rotate(tuple(cycle)) for cycle in self.cycles if len(cycle) > 1]
        seen = set()
        for cycle in cycles:
            if seen.intersection(cycle) or len(set(cycle)) != len(cycle):
                raise ValueError(f"Cycles are not disjoint: {self.cycles!r}")
            seen.update(cycle)
        object.__setattr__(self, "cycles", tuple(sorted(cycles)))

    @classmethod
    def identity(cls) -> "Permutation":
        return IDENTITY

    @classmethod
    def swap(cls, a: Atom, b: Atom) -> "Permutation":
        """The swapping (a b); the identity when a equals b."""
        return IDENTITY if a == b else cls(((a, b),))

    @classmethod
    def from_mapping(cls, mapping: Mapping[Atom, Atom]) -> "Permutation":
        """Build a permutation from an explicit atom-to-atom mapping.

        Raises:
            ValueError: If the mapping is not a bijection on its keys.
        """
        moved = {a: b for a, b in mapping.items() if a != b}
        if set(moved) != set(moved.values()):
            raise ValueError(f"Mapping is not a permutation: {dict(mapping)!r}")
        cycles = []
        seen = set()
        for start in sorted(moved):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            current = moved[start]
            while current != start:
                cycle.append(current)
                seen.add(current)
                current = moved[current]
            cycles.append(tuple(cycle))
        return cls(tuple(cycles))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[Atom]]) -> "Permutation":
        """Compose possibly overlapping cycles, the rightmost applied first."""
        result = IDENTITY
        for cycle in cycles:
            cycle = tuple(cycle)
            if len(set(cycle)) != len(cycle):
                raise ValueError(f"Cycle repeats an atom: {cycle!r}")
            result = result.compose(cls((cycle,)))
        return result

    @cached_property
    def mapping(self) -> Dict[Atom, Atom]:
        result = {}
        for cycle in self.cycles:
            for position, atom in enumerate(cycle):
                result[atom] = cycle[(position + 1) % len(cycle)]
        return result

    @cached_property
    def domain(self) -> FrozenSet[Atom]:
        """The atoms this permutation moves."""
        return frozenset(self.mapping)

    @property
    def is_identity(self) -> bool:
        return not self.cycles

    def __call__(self, atom: Atom) -> Atom:
        return self.mapping.get(atom, atom)

    def compose(self, other: "Permutation") -> "Permutation":
        """Return self after other, so other is applied first."""
        if other.is_identity:
            return self
        if self.is_identity:
            return other
        return Permutation.from_mapping(
            {atom: self(other(atom)) for atom in self.domain | other.domain}
        )

    def inverse(self) -> "Permutation":
        return Permutation(tuple(tuple(reversed(cycle)) for cycle in self.cycles))

    def conjugate(self, rho: "Permutation") -> "Permutation":
        """Return rho after self after the inverse of rho."""
        return Permutation(tuple(tuple(rho(atom) for atom in cycle) for cycle in self.cycles))

    def sort_key(self) -> Tuple[Cycle, ...]:
        return self.cycles

    def __str__(self) -> str:
        if self.is_identity:
            return "id"
        return "".join("(" + " ".join(str(atom) for atom in cycle) + ")" for cycle in self.cycles)


IDENTITY = Permutation()
