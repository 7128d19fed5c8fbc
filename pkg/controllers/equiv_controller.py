"""
This module contains the EquivController class, which decides alpha-equivalence modulo
commutativity under a fixed-point context and builds the derivations behind its answers.
"""

import logging
from typing import Optional

from controllers.base_controller import BaseController
from models.context import Context
from models.errors import SignatureError
from models.permutation import Permutation
from models.proof import Judgement, ProofTree, Rule
from models.syntax import Atom
from models.term import Abs, App, AtomTerm, Suspension, Term, atoms_of, permute
from utils.groups import coset_product_member, group_closure

logger = logging.getLogger(__name__)


class EquivController(BaseController):
    """Checks judgements context |- s = t by syntax-directed derivation.

    The context is normalized on entry; every rule is decided on the head constructors
    of the two terms, trying the aligned argument order before the swapped one for
    commutative symbols.
    """

    def check(self, context: Context, lhs: Term, rhs: Term) -> bool:
        """Decide whether the judgement is derivable.

        Args:
            context: Fixed-point context, normalized here if needed.
            lhs: Left-hand term.
            rhs: Right-hand term.

        Returns:
            bool: True if context |- lhs = rhs has a derivation.

        Raises:
            SignatureError: If the terms use one symbol name with two declarations.
            CapExceeded: If a membership test needs a group larger than max_group_order.
        """
        return self.prove(context, lhs, rhs) is not None

    def prove(self, context: Context, lhs: Term, rhs: Term) -> Optional[ProofTree]:
        """Return a derivation of the judgement, or None if there is none."""
        normal = context.normalize()
        proof = self._derive(normal, lhs, rhs)
        logger.debug(
            f"{'Derived' if proof else 'No derivation for'} {normal} |- {lhs} = {rhs}"
        )
        return proof

    def check_equivariant(self, context: Context, rho: Permutation, lhs: Term, rhs: Term) -> bool:
        """Check the judgement after applying rho to both sides."""
        return self.check(context, permute(rho, lhs), permute(rho, rhs))

    def entails(self, context: Context, perm: Permutation, term: Term) -> bool:
        """Decide whether the context makes perm fix term, that is perm.term = term."""
        return self.check(context, permute(perm, term), term)

    def reset(self):
        """Drop cached group closures, which depend on max_group_order."""
        group_closure.cache_clear()
        super().reset()

    def _fresh_atom(self, context: Context, *terms: Term) -> Atom:
        return Atom.fresh(context.atoms() | atoms_of(*terms), self.config.fresh_family)

    def _derive(self, context: Context, lhs: Term, rhs: Term) -> Optional[ProofTree]:
        judgement = Judgement(context, lhs, rhs)

        if isinstance(lhs, AtomTerm) and isinstance(rhs, AtomTerm):
            return ProofTree(Rule.ATOM_REFL, judgement) if lhs.atom == rhs.atom else None

        if isinstance(lhs, Suspension) and isinstance(rhs, Suspension):
            if lhs.var != rhs.var:
                return None
            residual = rhs.perm.inverse().compose(lhs.perm)
            group = context.membership_group(lhs.var)
            if not coset_product_member(residual, group, self.config.max_group_order):
                return None
            return ProofTree(Rule.VAR, judgement, residual=residual, group=group)

        if isinstance(lhs, App) and isinstance(rhs, App):
            if lhs.symbol.name != rhs.symbol.name:
                return None
            if lhs.symbol != rhs.symbol:
                raise SignatureError(f"Symbol {lhs.symbol.name} is used with two declarations")
            if lhs.symbol.is_commutative:
                return self._derive_commutative(judgement)
            premises = []
            for left, right in zip(lhs.args, rhs.args):
                premise = self._derive(context, left, right)
                if premise is None:
                    return None
                premises.append(premise)
            return ProofTree(Rule.FUN, judgement, tuple(premises))

        if isinstance(lhs, Abs) and isinstance(rhs, Abs):
            if lhs.binder == rhs.binder:
                premise = self._derive(context, lhs.body, rhs.body)
                return None if premise is None else ProofTree(Rule.ABS_SAME, judgement, (premise,))
            fresh = self._fresh_atom(context, lhs, rhs)
            premise = self._derive(
                context.with_names({fresh}),
                permute(Permutation.swap(lhs.binder, fresh), lhs.body),
                permute(Permutation.swap(rhs.binder, fresh), rhs.body),
            )
            if premise is None:
                return None
            return ProofTree(Rule.ABS_DIFF, judgement, (premise,), fresh=fresh)

        return None

    def _derive_commutative(self, judgement: Judgement) -> Optional[ProofTree]:
        (l0, l1), (r0, r1) = judgement.lhs.args, judgement.rhs.args
        for branch, pairs in (("aligned", ((l0, r0), (l1, r1))), ("swapped", ((l0, r1), (l1, r0)))):
            first = self._derive(judgement.context, *pairs[0])
            if first is None:
                continue
            second = self._derive(judgement.context, *pairs[1])
            if second is None:
                continue
            return ProofTree(Rule.FUN_C, judgement, (first, second), branch=branch)
        return None
