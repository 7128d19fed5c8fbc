"""
This module defines derivation trees for alpha-equivalence judgements modulo commutativity.
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Tuple

from models.context import Context
from models.permutation import Permutation
from models.syntax import Atom
from models.term import Term
from utils.groups import GroupSpec


class Rule(Enum):
    ATOM_REFL = "AtomRefl"
    VAR = "Var"
    FUN = "Fun"
    FUN_C = "FunC"
    ABS_SAME = "AbsSame"
    ABS_DIFF = "AbsDiff"


@dataclass(frozen=True)
class Judgement:
    """context |- lhs = rhs."""

    context: Context
    lhs: Term
    rhs: Term

    def __str__(self) -> str:
        return f"{self.context} |- {self.lhs} = {self.rhs}"


@dataclass(frozen=True)
class ProofTree:
    """One rule application with the derivations of its premises.

    Attributes:
        branch: "aligned" or "swapped" for the commutative rule.
        fresh: The new name introduced by the different-binder abstraction rule.
        residual: For the variable rule, the permutation checked for membership.
        group: For the variable rule, the group it was checked against.
    """

    rule: Rule
    conclusion: Judgement
    premises: Tuple["ProofTree", ...] = ()
    branch: Optional[str] = None
    fresh: Optional[Atom] = None
    residual: Optional[Permutation] = None
    group: Optional[GroupSpec] = None

    def walk(self) -> Iterator["ProofTree"]:
        yield self
        for premise in self.premises:
            yield from premise.walk()

    def rules(self) -> Counter:
        """How many times each rule is used."""
        return Counter(node.rule for node in self.walk())

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def label(self) -> str:
        if self.rule is Rule.FUN_C:
            return f"{self.rule.value}({self.branch})"
        if self.rule is Rule.ABS_DIFF:
            return f"{self.rule.value}(new {self.fresh})"
        if self.rule is Rule.VAR:
            return f"{self.rule.value}({self.residual} in {self.group})"
        return self.rule.value

    def format(self, indent: int = 0) -> str:
        """Render the tree as indented text, conclusion first."""
        lines = [f"{'  ' * indent}{self.label()}: {self.conclusion}"]
        lines.extend(premise.format(indent + 1) for premise in self.premises)
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.format()
