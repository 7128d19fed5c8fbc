"""
This module defines the name-level building blocks of nominal syntax: atoms, variables,
function symbols and signatures.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional

from models.errors import SignatureError

logger = logging.getLogger(__name__)

ATOM_PATTERN = re.compile(r"^([a-z]+)([0-9]*)$")
VARIABLE_PATTERN = re.compile(r"^[A-Z][A-Za-z0-9_]*$")
SYMBOL_PATTERN = re.compile(r"^[a-z][A-Za-z0-9_]*$")


@dataclass(frozen=True, order=True)
class Atom:
    """An object-level name such as a, b or c1.

    Atoms are ordered by family first and index second. Index 0 prints as the bare family.
    """

    family: str
    index: int = 0

    @classmethod
    def parse(cls, text: str) -> "Atom":
        """Build an atom from its printed form.

        Args:
            text: Lowercase letters followed by optional digits.

        Returns:
            Atom: The parsed atom.

        Raises:
            ValueError: If the text is not in the atom lexical class.
        """
        match = ATOM_PATTERN.match(text)
        if not match:
            raise ValueError(f"Not an atom: {text!r}")
        family, digits = match.groups()
        return cls(family, int(digits) if digits else 0)

    @classmethod
    def fresh(cls, avoid: Iterable["Atom"], family: str = "c") -> "Atom":
        """Return the least atom of the family above every index of that family in avoid."""
        indices = [atom.index for atom in avoid if atom.family == family]
        return cls(family, max(indices, default=0) + 1)

    def __str__(self) -> str:
        return f"{self.family}{self.index}" if self.index else self.family


@dataclass(frozen=True, order=True)
class Variable:
    """A meta-level unknown such as X or Y."""

    name: str

    def __str__(self) -> str:
        return self.name


class Theory(Enum):
    """Equational theory attached to a function symbol."""

    EMPTY = "empty"
    C = "comm"


@dataclass(frozen=True, order=True)
class Symbol:
    """A term-former with a fixed arity and theory."""

    name: str
    arity: int
    theory: Theory = Theory.EMPTY

    def __post_init__(self):
        if self.arity < 0:
            raise SignatureError(f"Symbol {self.name} has negative arity")
        if self.theory is Theory.C and self.arity != 2:
            raise SignatureError(
                f"Commutative symbol {self.name} must have arity 2, got {self.arity}"
            )

    @property
    def is_commutative(self) -> bool:
        return self.theory is Theory.C

    def __str__(self) -> str:
        return self.name


class Signature:
    """A finite set of declared function symbols, looked up by name."""

    def __init__(self, symbols: Iterable[Symbol] = ()):
        """Initialize the signature, declaring every given symbol."""
        self._symbols: Dict[str, Symbol] = {}
        for symbol in symbols:
            self.add(symbol)

    def add(self, symbol: Symbol) -> Symbol:
        """Add a symbol, rejecting names outside the symbol class and clashing redeclarations.

        Args:
            symbol: The symbol to register.

        Returns:
            Symbol: The registered symbol.

        Raises:
            SignatureError: If the name is malformed or already declared differently.
        """
        if not SYMBOL_PATTERN.match(symbol.name):
            raise SignatureError(f"Invalid symbol name: {symbol.name!r}")
        existing = self._symbols.get(symbol.name)
        if existing is not None and existing != symbol:
            raise SignatureError(
                f"Symbol {symbol.name} already declared with arity {existing.arity}"
            )
        self._symbols[symbol.name] = symbol
        logger.debug(f"Declared symbol {symbol.name}:{symbol.arity} ({symbol.theory.value})")
        return symbol

    def declare(self, name: str, arity: int, commutative: bool = False) -> Symbol:
        """Declare a symbol by name and arity."""
        theory = Theory.C if commutative else Theory.EMPTY
        return self.add(Symbol(name, arity, theory))

    def lookup(self, name: str) -> Symbol:
        """Return the symbol with the given name.

        Raises:
            SignatureError: If the name is not declared.
        """
        try:
            return self._symbols[name]
        except KeyError:
            raise SignatureError(f"Undeclared symbol: {name}") from None

    def get(self, name: str) -> Optional[Symbol]:
        return self._symbols.get(name)

    def extended(self, symbols: Iterable[Symbol]) -> "Signature":
        """Return a copy of this signature with extra symbols declared."""
        return Signature(list(self) + list(symbols))

    @property
    def symbols(self) -> List[Symbol]:
        """Declared symbols sorted by name."""
        return sorted(self._symbols.values())

    def __contains__(self, name: object) -> bool:
        return name in self._symbols

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self._symbols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signature):
            return False
        return self._symbols == other._symbols

    def __repr__(self) -> str:
        return f"Signature({self.symbols!r})"
