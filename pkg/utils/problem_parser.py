"""
This module contains the ProblemParser class for reading problem files.

A problem file holds an optional signature followed by either a judgement to check or a
unification goal:

    sig f:1; g:2 comm;
    new c. {(d e c) fix X, (a b) fix Y} |- g([d]X, (a b).Y) = g(Y, [e]X)

    sig g:2 comm;
    [a]g(X, Y) =? [b]g(Y, X)
"""

import logging
from pathlib import Path
from typing import List, Optional, Union

from lark import Lark, Token, Transformer, Tree
from lark.exceptions import UnexpectedInput, VisitError

from models.context import Context, FixConstraint
from models.errors import NominalError, ProblemSyntaxError, SignatureError
from models.permutation import IDENTITY, Permutation
from models.problem import Equation, ProblemFile
from models.syntax import Atom, Signature, Variable
from models.term import Abs, App, AtomTerm, Suspension, Term

logger = logging.getLogger(__name__)

GRAMMAR = r"""
start: signature? statement

signature: "sig" decl*
decl: NAME ":" INT COMM? ";"

?statement: judgement | goal
judgement: binder? context "|-" term "=" term
goal: binder? equation ("," equation)*
equation: term "=?" term

binder: "new" NAME+ "."
context: "{" [fix ("," fix)*] "}"
fix: perm "fix" VAR

perm: cycle+ -> cycles
    | "id" -> identity
cycle: "(" NAME NAME+ ")"

?term: NAME -> name
     | VAR -> variable
     | perm "." VAR -> suspension
     | NAME "(" [term ("," term)*] ")" -> application
     | "[" NAME "]" term -> abstraction

term_only: term
perm_only: perm
context_only: binder? context

COMM: "comm"
NAME: /(?!(new|fix|id|sig|comm)\b)[a-z][A-Za-z0-9_]*/
VAR: /[A-Z][A-Za-z0-9_]*/
COMMENT: /#[^\n]*/

%import common.INT
%import common.WS
%ignore WS
%ignore COMMENT
"""

_PARSER = Lark(
    GRAMMAR,
    start=["start", "term_only", "perm_only", "context_only"],
    parser="earley",
    propagate_positions=True,
)


def _atom(token: Token) -> Atom:
    try:
        return Atom.parse(str(token))
    except ValueError:
        raise ProblemSyntaxError(
            f"{token} is not an atom", getattr(token, "line", None), getattr(token, "column", None)
        ) from None


class ProblemTransformer(Transformer):
    """Turns a parse tree into terms, resolving bare names through the signature."""

    def __init__(self, signature: Signature):
        super().__init__()
        self.signature = signature

    def name(self, children):
        token = children[0]
        symbol = self.signature.get(str(token))
        if symbol is None:
            return AtomTerm(_atom(token))
        if symbol.arity:
            raise SignatureError(f"{symbol.name} expects {symbol.arity} arguments, got 0")
        return App(symbol)

    def variable(self, children):
        return Suspension.of(Variable(str(children[0])))

    def suspension(self, children):
        perm, token = children
        return Suspension(perm, Variable(str(token)))

    def application(self, children):
        token, *args = children
        symbol = self.signature.lookup(str(token))
        return App(symbol, tuple(arg for arg in args if arg is not None))

    def abstraction(self, children):
        token, body = children
        return Abs(_atom(token), body)

    def cycle(self, children):
        atoms = [_atom(token) for token in children]
        if len(set(atoms)) != len(atoms):
            raise ProblemSyntaxError(f"Cycle repeats an atom: {' '.join(map(str, atoms))}")
        return tuple(atoms)

    def cycles(self, children):
        return Permutation.from_cycles(children)

    def identity(self, _children):
        return IDENTITY

    def fix(self, children):
        perm, token = children
        return FixConstraint(perm, Variable(str(token)))

    def context(self, children):
        return [c for c in children if c is not None]

    def binder(self, children):
        return frozenset(_atom(token) for token in children)

    def equation(self, children):
        return Equation(*children)

    def judgement(self, children):
        nu_names = children[0] if isinstance(children[0], frozenset) else frozenset()
        constraints, lhs, rhs = children[-3:]
        return ProblemFile(
            self.signature,
            nu_names,
            context=Context(nu_names, frozenset(constraints)),
            lhs=lhs,
            rhs=rhs,
        )

    def goal(self, children):
        nu_names = children[0] if isinstance(children[0], frozenset) else frozenset()
        equations = tuple(c for c in children if isinstance(c, Equation))
        return ProblemFile(self.signature, nu_names, equations=equations)

    def term_only(self, children):
        return children[0]

    def perm_only(self, children):
        return children[0]

    def context_only(self, children):
        nu_names = children[0] if isinstance(children[0], frozenset) else frozenset()
        return Context(nu_names, frozenset(children[-1]))


class ProblemParser:
    """Parser for problem files, terms, permutations and contexts."""

    @staticmethod
    def parse_file(file_path: Union[str, Path]) -> ProblemFile:
        """Parse a problem file.

        Args:
            file_path: Path to the problem file.

        Returns:
            ProblemFile: The parsed signature and statement.

        Raises:
            FileNotFoundError: If the file does not exist.
            ProblemSyntaxError: If the file is malformed or not UTF-8.
            SignatureError: If a symbol is undeclared or misused.
        """
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"Problem file not found: {path}")
        logger.info(f"Parsing problem file: {path}")
        try:
            text = path.read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            logger.warning(f"UTF-8 decode failed for {path}")
            raise ProblemSyntaxError(f"{path} is not valid UTF-8 (byte {e.start})") from e
        return ProblemParser.parse_text(text)

    @staticmethod
    def parse_text(text: str) -> ProblemFile:
        """Parse the contents of a problem file."""
        tree = ProblemParser._parse(text, "start")
        signature = Signature()
        statement = tree.children[-1]
        for child in tree.children[:-1]:
            if isinstance(child, Tree) and child.data == "signature":
                signature = ProblemParser._signature(child)
        problem = ProblemParser._transform(statement, signature)
        logger.debug(f"Parsed {'judgement' if problem.is_judgement else 'goal'} over {len(signature)} symbols")
        return problem

    @staticmethod
    def parse_term(text: str, signature: Optional[Signature] = None) -> Term:
        return ProblemParser._transform(
            ProblemParser._parse(text, "term_only"), signature or Signature()
        )

    @staticmethod
    def parse_permutation(text: str) -> Permutation:
        return ProblemParser._transform(ProblemParser._parse(text, "perm_only"), Signature())

    @staticmethod
    def parse_context(text: str) -> Context:
        return ProblemParser._transform(ProblemParser._parse(text, "context_only"), Signature())

    @staticmethod
    def _parse(text: str, start: str) -> Tree:
        try:
            return _PARSER.parse(text, start=start)
        except UnexpectedInput as e:
            line = e.line if e.line and e.line > 0 else None
            column = e.column if e.column and e.column > 0 else None
            raise ProblemSyntaxError(_describe(e), line, column) from e

    @staticmethod
    def _signature(tree: Tree) -> Signature:
        signature = Signature()
        for decl in tree.children:
            name, arity, *flags = decl.children
            try:
                signature.declare(str(name), int(arity), commutative=bool(flags))
            except SignatureError as e:
                raise SignatureError(f"line {name.line}: {e}") from e
        return signature

    @staticmethod
    def _transform(tree: Tree, signature: Signature):
        try:
            return ProblemTransformer(signature).transform(tree)
        except VisitError as e:
            if isinstance(e.orig_exc, NominalError):
                raise e.orig_exc from e
            raise ProblemSyntaxError(str(e.orig_exc)) from e


def _describe(error: UnexpectedInput) -> str:
    expected: List[str] = sorted(getattr(error, "expected", None) or [])
    if expected:
        return f"unexpected input, expected one of: {', '.join(expected)}"
    return "unexpected input"
