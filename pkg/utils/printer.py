"""
This module renders problem files and solver results as text the parser reads back.
"""

from typing import Iterable, List

from models.problem import ProblemFile, Solution
from models.syntax import Signature


def format_signature(signature: Signature) -> str:
    decls = [
        f"{symbol.name}:{symbol.arity}{' comm' if symbol.is_commutative else ''};"
        for symbol in signature
    ]
    return "sig " + " ".join(decls) if decls else ""


def format_problem_file(problem: ProblemFile) -> str:
    """Render a problem file; parsing the result gives back an equal problem."""
    lines: List[str] = []
    header = format_signature(problem.signature)
    if header:
        lines.append(header)
    if problem.is_judgement:
        lines.append(f"{problem.context} |- {problem.lhs} = {problem.rhs}")
    else:
        lines.append(str(problem.problem()))
    return "\n".join(lines) + "\n"


def format_solutions(solutions: Iterable[Solution]) -> str:
    solutions = list(solutions)
    lines = [f"{len(solutions)} solution{'' if len(solutions) == 1 else 's'}"]
    lines.extend(str(solution) for solution in solutions)
    return "\n".join(lines)
