"""
This module defines nominal terms, substitutions and the structural operations on them.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple

from models.errors import SignatureError
from models.permutation import IDENTITY, Permutation
from models.syntax import Atom, Signature, Symbol, Variable


class Term:
    """Base class of the four term forms."""

    __slots__ = ()


@dataclass(frozen=True)
class AtomTerm(Term):
    atom: Atom

    def __str__(self) -> str:
        return str(self.atom)


@dataclass(frozen=True)
class Suspension(Term):
    """A permutation waiting to act on whatever a variable is instantiated with."""

    perm: Permutation
    var: Variable

    @classmethod
    def of(cls, var: Variable) -> "Suspension":
        return cls(IDENTITY, var)

    def __str__(self) -> str:
        return str(self.var) if self.perm.is_identity else f"{self.perm}.{self.var}"


@dataclass(frozen=True)
class App(Term):
    symbol: Symbol
    args: Tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.symbol.arity:
            raise SignatureError(
                f"{self.symbol.name} expects {self.symbol.arity} arguments, got {len(self.args)}"
            )

    def __str__(self) -> str:
        if not self.args:
            return self.symbol.name
        return f"{self.symbol.name}({', '.join(str(arg) for arg in self.args)})"


@dataclass(frozen=True)
class Abs(Term):
    binder: Atom
    body: Term

    def __str__(self) -> str:
        return f"[{self.binder}]{self.body}"


def permute(perm: Permutation, term: Term) -> Term:
    """Apply a permutation to a term; on suspensions it composes on the left."""
    if perm.is_identity:
        return term
    if isinstance(term, AtomTerm):
        return AtomTerm(perm(term.atom))
    if isinstance(term, Suspension):
        return Suspension(perm.compose(term.perm), term.var)
    if isinstance(term, App):
        return App(term.symbol, tuple(permute(perm, arg) for arg in term.args))
    if isinstance(term, Abs):
        return Abs(perm(term.binder), permute(perm, term.body))
    raise TypeError(f"Not a term: {term!r}")


def term_size(term: Term) -> int:
    """Count nodes; atoms and suspensions have size 1."""
    if isinstance(term, App):
        return 1 + sum(term_size(arg) for arg in term.args)
    if isinstance(term, Abs):
        return 1 + term_size(term.body)
    return 1


def term_depth(term: Term) -> int:
    """Height of the term tree, counting a leaf as depth 1."""
    if isinstance(term, App):
        return 1 + max((term_depth(arg) for arg in term.args), default=0)
    if isinstance(term, Abs):
        return 1 + term_depth(term.body)
    return 1


def subterms(term: Term) -> Iterator[Term]:
    """Yield the term and all its subterms in pre-order."""
    yield term
    if isinstance(term, App):
        for arg in term.args:
            yield from subterms(arg)
    elif isinstance(term, Abs):
        yield from subterms(term.body)


def atoms_of(*objects) -> FrozenSet[Atom]:
    """Collect every atom occurring in terms, permutations, contexts and solutions.

    Atoms in binders, inside suspended permutations and in contexts all count.
    """
    result = set()
    for obj in objects:
        if isinstance(obj, Term):
            for sub in subterms(obj):
                if isinstance(sub, AtomTerm):
                    result.add(sub.atom)
                elif isinstance(sub, Suspension):
                    result.update(sub.perm.domain)
                elif isinstance(sub, Abs):
                    result.add(sub.binder)
        elif isinstance(obj, Permutation):
            result.update(obj.domain)
        elif isinstance(obj, Atom):
            result.add(obj)
        elif hasattr(obj, "atoms"):
            result.update(obj.atoms())
        else:
            result.update(atoms_of(*obj))
    return frozenset(result)


def vars_of(*objects) -> FrozenSet[Variable]:
    """Collect every variable occurring in terms or in objects exposing variables()."""
    result = set()
    for obj in objects:
        if isinstance(obj, Term):
            result.update(sub.var for sub in subterms(obj) if isinstance(sub, Suspension))
        elif hasattr(obj, "variables"):
            result.update(obj.variables())
        else:
            result.update(vars_of(*obj))
    return frozenset(result)


def symbols_of(*terms: Term) -> FrozenSet[Symbol]:
    return frozenset(
        sub.symbol for term in terms for sub in subterms(term) if isinstance(sub, App)
    )


def is_ground(term: Term) -> bool:
    return not any(isinstance(sub, Suspension) for sub in subterms(term))


def check_signature(term: Term, signature: Signature) -> None:
    """Ensure every symbol in the term is the one the signature declares under its name.

    Raises:
        SignatureError: If a symbol is undeclared or declared differently.
    """
    for symbol in symbols_of(term):
        if signature.lookup(symbol.name) != symbol:
            raise SignatureError(f"Symbol {symbol.name} does not match its declaration")


@dataclass(frozen=True)
class Substitution:
    """A finite mapping from variables to terms, plus the names it is quantified over.

    Identity bindings X -> X are dropped on construction.
    """

    bindings: Mapping[Variable, Term] = field(default_factory=dict)
    nu_names: FrozenSet[Atom] = frozenset()

    def __post_init__(self):
        cleaned = {
            var: term for var, term in dict(self.bindings).items() if term != Suspension.of(var)
        }
        object.__setattr__(self, "bindings", cleaned)
        object.__setattr__(self, "nu_names", frozenset(self.nu_names))

    @classmethod
    def identity(cls) -> "Substitution":
        return cls()

    @classmethod
    def single(cls, var: Variable, term: Term) -> "Substitution":
        return cls({var: term})

    @property
    def domain(self) -> FrozenSet[Variable]:
        return frozenset(self.bindings)

    def get(self, var: Variable) -> Optional[Term]:
        return self.bindings.get(var)

    def image(self, var: Variable) -> Term:
        """The term bound to var, or var itself."""
        return self.bindings.get(var, Suspension.of(var))

    def apply(self, term: Term) -> Term:
        return substitute(term, self)

    def compose(self, other: "Substitution") -> "Substitution":
        """Return the substitution that applies self first and then other."""
        combined: Dict[Variable, Term] = {
            var: substitute(term, other) for var, term in self.bindings.items()
        }
        for var, term in other.bindings.items():
            combined.setdefault(var, term)
        return Substitution(combined, self.nu_names | other.nu_names)

    def restrict(self, variables: Iterable[Variable]) -> "Substitution":
        keep = set(variables)
        return Substitution(
            {var: term for var, term in self.bindings.items() if var in keep}, self.nu_names
        )

    def with_names(self, names: Iterable[Atom]) -> "Substitution":
        return Substitution(self.bindings, self.nu_names | frozenset(names))

    def variables(self) -> FrozenSet[Variable]:
        """Domain variables together with the variables of the images."""
        return self.domain | vars_of(*self.bindings.values())

    def atoms(self) -> FrozenSet[Atom]:
        return atoms_of(*self.bindings.values())

    def sort_key(self) -> Tuple:
        return tuple(sorted((var.name, str(term)) for var, term in self.bindings.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Substitution):
            return NotImplemented
        return self.bindings == other.bindings and self.nu_names == other.nu_names

    def __hash__(self) -> int:
        return hash((frozenset(self.bindings.items()), self.nu_names))

    def __str__(self) -> str:
        if not self.bindings:
            return "Id"
        entries = ", ".join(f"{var} -> {self.bindings[var]}" for var in sorted(self.bindings))
        return f"[{entries}]"


def substitute(term: Term, subst: Substitution) -> Term:
    """Replace variables by their images; a suspension pi.X becomes pi applied to X's image."""
    if not subst.bindings:
        return term
    if isinstance(term, Suspension):
        image = subst.get(term.var)
        return term if image is None else permute(term.perm, image)
    if isinstance(term, App):
        return App(term.symbol, tuple(substitute(arg, subst) for arg in term.args))
    if isinstance(term, Abs):
        return Abs(term.binder, substitute(term.body, subst))
    return term


