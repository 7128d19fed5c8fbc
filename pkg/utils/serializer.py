"""
This module converts contexts, solutions and derivations into JSON-ready dictionaries.

The shapes follow schemas/solution.schema.json and schemas/proof.schema.json.
"""

import json
from typing import Any, Dict, Iterable, List

from models.context import Context
from models.permutation import Permutation
from models.problem import Solution, Verdict
from models.proof import ProofTree


def _names(atoms) -> List[str]:
    return [str(atom) for atom in sorted(atoms)]


def perm_to_list(perm: Permutation) -> List[List[str]]:
    """Write a permutation as its disjoint cycles, the identity as an empty list."""
    return [[str(atom) for atom in cycle] for cycle in perm.cycles]


def _constraints(context: Context) -> List[Dict[str, Any]]:
    return [{"perm": perm_to_list(c.perm), "var": c.var.name} for c in context.sorted_constraints()]


def context_to_dict(context: Context) -> Dict[str, Any]:
    return {
        "new": _names(context.nu_names),
        "constraints": _constraints(context),
    }


def solution_to_dict(solution: Solution) -> Dict[str, Any]:
    bindings = solution.substitution.bindings
    return {
        "new": _names(solution.nu_names),
        "context": _constraints(solution.context),
        "subst": {var.name: str(bindings[var]) for var in sorted(bindings)},
    }


def unify_result_to_dict(solutions: Iterable[Solution], reasons: Iterable[Verdict] = ()) -> Dict[str, Any]:
    solutions = [solution_to_dict(s) for s in solutions]
    return {
        "solvable": bool(solutions),
        "solutions": solutions,
        "reasons": sorted({reason.value for reason in reasons}) if not solutions else [],
    }


def proof_to_dict(proof: ProofTree) -> Dict[str, Any]:
    node: Dict[str, Any] = {
        "rule": proof.rule.value,
        "conclusion": {
            "context": context_to_dict(proof.conclusion.context),
            "lhs": str(proof.conclusion.lhs),
            "rhs": str(proof.conclusion.rhs),
        },
        "premises": [proof_to_dict(premise) for premise in proof.premises],
    }
    if proof.branch is not None:
        node["branch"] = proof.branch
    if proof.fresh is not None:
        node["fresh"] = str(proof.fresh)
    if proof.residual is not None:
        node["membership"] = {
            "residual": perm_to_list(proof.residual),
            "fresh_atoms": _names(proof.group.fresh_atoms),
            "generators": [perm_to_list(g) for g in proof.group.fix_generators],
        }
    return node


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True)
