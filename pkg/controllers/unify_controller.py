"""
This module contains the UnifyController class, which solves nominal unification problems
modulo commutativity and compares the solutions it finds.
"""

import logging
from dataclasses import dataclass, field
from itertools import chain, product
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from controllers.base_controller import BaseController
from controllers.equiv_controller import EquivController
from models.context import Context, FixConstraint
from models.errors import NotReduced, SignatureError
from models.permutation import IDENTITY, Permutation
from models.problem import Equation, ExtendedProblem, ProblemMeasure, Solution, UnificationProblem, Verdict
from models.syntax import Atom, Symbol, Variable
from models.term import (
    Abs,
    App,
    AtomTerm,
    Substitution,
    Suspension,
    Term,
    atoms_of,
    permute,
    subterms,
    symbols_of,
    vars_of,
)
from utils.config import Config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Step:
    """One simplification step: the rule applied and the problems it leaves."""

    rule: str
    equation: Equation
    branches: ExtendedProblem


@dataclass(frozen=True)
class TraceEvent:
    """A step as reported to a trace callback, with the measures around it."""

    problem: UnificationProblem
    step: Step
    before: ProblemMeasure
    after: Tuple[ProblemMeasure, ...]


@dataclass
class SolveReport:
    """Everything a solve run produced.

    Attributes:
        solutions: Deduplicated solutions in the order they were found.
        failures: Each failed branch with its inconsistent equations, or the goal equations
            its candidate solution does not solve.
        steps: Number of simplification steps taken.
    """

    solutions: List[Solution] = field(default_factory=list)
    failures: List[Tuple[UnificationProblem, Tuple[Tuple[Equation, Verdict], ...]]] = field(
        default_factory=list
    )
    steps: int = 0

    @property
    def reasons(self) -> Set[Verdict]:
        return {verdict for _, found in self.failures for _, verdict in found}


class FreshNameSupply:
    """Hands out new names that no branch of the search has used before."""

    def __init__(self, family: str, taken: Iterable[Atom] = ()):
        self.family = family
        self.taken: Set[Atom] = set(taken)

    def take(self, avoid: Iterable[Atom]) -> Atom:
        atom = Atom.fresh(self.taken | set(avoid), self.family)
        self.taken.add(atom)
        return atom


TraceCallback = Callable[[TraceEvent], None]


class UnifyController(BaseController):
    """Simplifies unification problems to normal form and reads solutions off them.

    Equations are kept as an ordered worklist and the last equation a rule applies to is
    simplified first. Commutative symbols split a problem into an aligned and a swapped
    branch; branches are explored depth first, aligned first.
    """

    def __init__(self, config: Optional[Config] = None):
        super().__init__(config)
        self.equiv = EquivController(self.config)

    def reset(self):
        self.equiv.config = self.config
        self.equiv.reset()
        super().reset()

    def measure(self, problem: UnificationProblem) -> ProblemMeasure:
        return ProblemMeasure.of(problem)

    def step(self, problem: UnificationProblem, names: Optional[FreshNameSupply] = None) -> Optional[Step]:
        """Apply one simplification rule.

        Args:
            problem: The problem to simplify.
            names: Supply for names introduced by the abstraction rule; a supply avoiding
                the problem's own atoms is used when omitted.

        Returns:
            Optional[Step]: The step taken, or None if the problem is in normal form.

        Raises:
            SignatureError: If one symbol name appears with two declarations.
        """
        for index in range(len(problem.equations) - 1, -1, -1):
            equation = problem.equations[index]
            rule = self._rule_for(equation)
            if rule is not None:
                break
        else:
            return None

        names = names or FreshNameSupply(self.config.fresh_family, problem.atoms())
        rest = problem.equations[:index] + problem.equations[index + 1 :]
        lhs, rhs = equation.lhs, equation.rhs

        def keep(*equations: Equation, nu_names=problem.nu_names) -> UnificationProblem:
            return UnificationProblem(nu_names, rest + equations, problem.bindings)

        if rule == "del":
            branches = (keep(),)
        elif rule == "fun":
            branches = (keep(*(Equation(l, r) for l, r in zip(lhs.args, rhs.args))),)
        elif rule == "fun-c":
            (l0, l1), (r0, r1) = lhs.args, rhs.args
            branches = (
                keep(Equation(l0, r0), Equation(l1, r1)),
                keep(Equation(l0, r1), Equation(l1, r0)),
            )
        elif rule == "abs-same":
            branches = (keep(Equation(lhs.body, rhs.body)),)
        elif rule == "abs-diff":
            fresh = names.take(problem.atoms())
            branches = (
                keep(
                    Equation(
                        permute(Permutation.swap(lhs.binder, fresh), lhs.body),
                        permute(Permutation.swap(rhs.binder, fresh), rhs.body),
                    ),
                    nu_names=problem.nu_names | {fresh},
                ),
            )
        elif rule == "var":
            residual = rhs.perm.inverse().compose(lhs.perm)
            branches = (keep(Equation(Suspension(residual, lhs.var), Suspension.of(lhs.var))),)
        elif rule == "inst-left":
            branches = (self._instantiate(problem, rest, lhs, rhs),)
        else:
            branches = (self._instantiate(problem, rest, rhs, lhs),)

        logger.debug(f"{rule} on {equation}: {len(branches)} branch(es)")
        return Step(rule, equation, ExtendedProblem(branches))

    def classify_reduced(self, equation: Equation) -> Verdict:
        """Classify an equation that no rule applies to.

        Raises:
            NotReduced: If a simplification rule still applies.
        """
        if self._rule_for(equation) is not None:
            raise NotReduced(f"A rule still applies to {equation}")
        lhs, rhs = equation.lhs, equation.rhs
        if equation.is_fixed_point:
            return Verdict.CONSISTENT
        if isinstance(lhs, Suspension) or isinstance(rhs, Suspension):
            return Verdict.OCCURS
        if isinstance(lhs, AtomTerm) and isinstance(rhs, AtomTerm):
            return Verdict.ATOM_CLASH
        if isinstance(lhs, App) and isinstance(rhs, App):
            return Verdict.HEAD_CLASH
        return Verdict.CONSTRUCTOR_CLASH

    def solve(self, problem: UnificationProblem, trace: Optional[TraceCallback] = None) -> List[Solution]:
        """Return the solutions of a problem, one per consistent normal form."""
        return self.solve_report(problem, trace).solutions

    def solve_report(self, problem: UnificationProblem, trace: Optional[TraceCallback] = None) -> SolveReport:
        """Solve a problem and keep the failed branches alongside the solutions.

        Args:
            problem: The problem to solve.
            trace: Called with every step taken.

        Returns:
            SolveReport: Solutions, failures and the number of steps.

        Raises:
            SignatureError: If one symbol name appears with two declarations.
            CapExceeded: If normalizing a solution context needs too large a group.
        """
        variables = problem.variables()
        names = FreshNameSupply(self.config.fresh_family, problem.atoms())
        report = SolveReport()
        seen = set()
        stack = [problem]
        while stack:
            current = stack.pop()
            step = self.step(current, names)
            if step is None:
                self._collect(current, problem.equations, variables, report, seen)
                continue
            report.steps += 1
            if self.config.check_measure or trace is not None:
                before = self.measure(current)
                after = tuple(self.measure(branch) for branch in step.branches)
                if self.config.check_measure:
                    assert all(m < before for m in after), f"{step.rule} did not decrease {before}"
                if trace is not None:
                    trace(TraceEvent(current, step, before, after))
            stack.extend(reversed(step.branches))
        logger.info(
            f"Solved {problem} in {report.steps} steps: "
            f"{len(report.solutions)} solution(s), {len(report.failures)} failed branch(es)"
        )
        return report

    def check_instance(self, general: Solution, specific: Solution, delta: Substitution) -> bool:
        """Decide whether delta shows that specific is an instance of general.

        The names of general must be among those of specific, the context of specific must
        entail every constraint of general after delta, and for every variable specific's
        image must be equivalent to general's image followed by delta.
        """
        if not general.nu_names <= specific.nu_names:
            return False
        context = specific.context.normalize()
        for constraint in general.context.constraints:
            if not self.equiv.entails(context, constraint.perm, delta.image(constraint.var)):
                return False
        variables = general.variables() | specific.variables() | delta.domain
        for var in sorted(variables):
            expected = specific.substitution.image(var)
            actual = delta.apply(general.substitution.image(var))
            if not self.equiv.check(context, expected, actual):
                return False
        return True

    def find_instance_witness(
        self, general: Solution, specific: Solution, bound: Optional[int] = None
    ) -> Optional[Substitution]:
        """Search for a substitution delta accepted by check_instance.

        Candidates for each variable are tried in order: the variable itself, the other
        variables of specific, terms read off by matching the two solutions' images, and
        finally every term up to the depth bound over the symbols and atoms in play.

        Args:
            general: The solution that should be more general.
            specific: The solution that should be an instance.
            bound: Depth of enumerated candidate terms; config.witness_depth if omitted.

        Returns:
            Optional[Substitution]: A witness, or None if the bounded search finds none.
        """
        bound = self.config.witness_depth if bound is None else bound
        if not general.nu_names <= specific.nu_names:
            return None
        context = specific.context.normalize()
        sigma1, sigma2 = general.substitution, specific.substitution
        variables = general.variables() | specific.variables()
        search = sorted(
            general.context.variables()
            | vars_of(*sigma1.bindings.values())
            | (sigma2.domain - sigma1.domain)
        )
        position = {var: i for i, var in enumerate(search)}

        checks: Dict[int, List[Callable[[Substitution], bool]]] = {i: [] for i in range(-1, len(search))}
        for constraint in general.context.constraints:
            stage = position.get(constraint.var, -1)
            checks[stage].append(
                lambda delta, c=constraint: self.equiv.entails(context, c.perm, delta.image(c.var))
            )
        for var in variables:
            image = sigma1.image(var)
            stage = max((position[v] for v in vars_of(image) if v in position), default=-1)
            checks[stage].append(
                lambda delta, v=var, i=image: self.equiv.check(
                    context, sigma2.image(v), delta.apply(i)
                )
            )

        if not all(check(Substitution()) for check in checks[-1]):
            return None

        def extend(i: int, bindings: Dict[Variable, Term]) -> Optional[Substitution]:
            if i == len(search):
                return Substitution(dict(bindings))
            var = search[i]
            for candidate in self._candidates(var, general, specific, bound):
                bindings[var] = candidate
                delta = Substitution(dict(bindings))
                if all(check(delta) for check in checks[i]):
                    found = extend(i + 1, bindings)
                    if found is not None:
                        return found
                del bindings[var]
            return None

        witness = extend(0, {})
        logger.debug(f"Instance witness for {specific} from {general}: {witness}")
        return witness

    def is_more_general(self, general: Solution, specific: Solution, bound: Optional[int] = None) -> bool:
        return self.find_instance_witness(general, specific, bound) is not None

    def _rule_for(self, equation: Equation) -> Optional[str]:
        lhs, rhs = equation.lhs, equation.rhs
        # pi.X =? X is reduced, X =? X included
        if equation.is_fixed_point:
            return None
        if lhs == rhs:
            return "del"
        if isinstance(lhs, App) and isinstance(rhs, App):
            if lhs.symbol.name != rhs.symbol.name:
                return None
            if lhs.symbol != rhs.symbol:
                raise SignatureError(f"Symbol {lhs.symbol.name} is used with two declarations")
            return "fun-c" if lhs.symbol.is_commutative else "fun"
        if isinstance(lhs, Abs) and isinstance(rhs, Abs):
            return "abs-same" if lhs.binder == rhs.binder else "abs-diff"
        if isinstance(lhs, Suspension) and isinstance(rhs, Suspension) and lhs.var == rhs.var:
            return "var"
        if isinstance(lhs, Suspension) and lhs.var not in vars_of(rhs):
            return "inst-left"
        if isinstance(rhs, Suspension) and rhs.var not in vars_of(lhs):
            return "inst-right"
        return None

    def _instantiate(
        self,
        problem: UnificationProblem,
        rest: Tuple[Equation, ...],
        suspension: Suspension,
        term: Term,
    ) -> UnificationProblem:
        image = permute(suspension.perm.inverse(), term)
        binding = Substitution.single(suspension.var, image)
        return UnificationProblem(
            problem.nu_names,
            tuple(eq.substitute(binding) for eq in rest),
            problem.bindings + ((suspension.var, image),),
        )

    def _collect(
        self,
        problem: UnificationProblem,
        goal: Tuple[Equation, ...],
        variables: FrozenSet[Variable],
        report: SolveReport,
        seen: Set[Tuple],
    ) -> None:
        verdicts = tuple((eq, self.classify_reduced(eq)) for eq in problem.equations)
        failed = tuple((eq, verdict) for eq, verdict in verdicts if not verdict.consistent)
        if failed:
            logger.debug(f"Branch failed: {', '.join(f'{eq} ({v.value})' for eq, v in failed)}")
            report.failures.append((problem, failed))
            return
        context = Context(
            problem.nu_names,
            frozenset(
                FixConstraint(eq.lhs.perm, eq.lhs.var)
                for eq in problem.equations
            ),
        ).normalize()
        substitution = problem.pending_substitution().restrict(variables)
        solution = Solution(context, substitution)
        rejected = self._rejected(solution, goal)
        if rejected:
            logger.debug(f"Branch failed: {solution} does not solve {rejected[0][0]}")
            report.failures.append((problem, rejected))
            return
        key = solution.key()
        if key in seen:
            logger.debug(f"Duplicate solution {solution}")
            return
        seen.add(key)
        report.solutions.append(solution)

    def _rejected(
        self, solution: Solution, goal: Tuple[Equation, ...]
    ) -> Tuple[Tuple[Equation, Verdict], ...]:
        # a name made up by abs-diff can reach a binding, e.g. [b]X =? [a]b gives X -> c1
        sigma = solution.substitution
        return tuple(
            (eq, Verdict.UNVERIFIED)
            for eq in goal
            if not self.equiv.check(solution.context, sigma.apply(eq.lhs), sigma.apply(eq.rhs))
        )

    def _candidates(self, var: Variable, general: Solution, specific: Solution, bound: int) -> Iterator[Term]:
        sigma1, sigma2 = general.substitution, specific.substitution
        hints = (
            term
            for image_var in sorted(general.variables() | specific.variables())
            for hinted, term in _match_hints(sigma1.image(image_var), sigma2.image(image_var))
            if hinted == var
        )
        enumerated = enumerate_terms(
            symbols_of(*sigma1.bindings.values(), *sigma2.bindings.values()),
            atoms_of(general, specific),
            sorted(specific.variables()),
            _context_perms(general.context, specific.context),
            bound,
        )
        seen = set()
        for term in chain(
            [Suspension.of(var)],
            (Suspension.of(other) for other in sorted(specific.variables())),
            hints,
            enumerated,
        ):
            if term not in seen:
                seen.add(term)
                yield term


def _context_perms(*contexts: Context) -> List[Permutation]:
    perms = {IDENTITY}
    for context in contexts:
        perms.update(c.perm for c in context.constraints)
    return sorted(perms, key=Permutation.sort_key)


def _match_hints(pattern: Term, target: Term) -> Iterator[Tuple[Variable, Term]]:
    """Yield (X, u) where pattern has pi.X at a position that target fills with pi^-1 u."""
    if isinstance(pattern, Suspension):
        yield pattern.var, permute(pattern.perm.inverse(), target)
    elif isinstance(pattern, App) and isinstance(target, App):
        if pattern.symbol.name != target.symbol.name or len(pattern.args) != len(target.args):
            return
        for left, right in zip(pattern.args, target.args):
            yield from _match_hints(left, right)
        if pattern.symbol.is_commutative:
            for left, right in zip(pattern.args, reversed(target.args)):
                yield from _match_hints(left, right)
    elif isinstance(pattern, Abs) and isinstance(target, Abs):
        if pattern.binder == target.binder:
            yield from _match_hints(pattern.body, target.body)
        else:
            swapped = permute(Permutation.swap(pattern.binder, target.binder), target.body)
            yield from _match_hints(pattern.body, swapped)


def enumerate_terms(
    symbols: Iterable[Symbol],
    atoms: Iterable[Atom],
    variables: Sequence[Variable],
    perms: Sequence[Permutation],
    depth: int,
) -> Iterator[Term]:
    """Yield every term of depth at most depth over the given material, shallowest first.

    Depth 0 gives atoms and suspensions; each further level adds applications and
    abstractions over the levels below.
    """
    symbols = sorted(set(symbols))
    atoms = sorted(set(atoms))
    levels: List[Term] = [AtomTerm(a) for a in atoms]
    levels += [Suspension(perm, var) for var in variables for perm in perms]
    levels += [App(symbol) for symbol in symbols if symbol.arity == 0]
    yield from levels
    known = list(levels)
    for _ in range(depth):
        new: List[Term] = []
        seen = set(known)
        for symbol in symbols:
            if symbol.arity == 0:
                continue
            for args in product(known, repeat=symbol.arity):
                term = App(symbol, args)
                if term not in seen:
                    seen.add(term)
                    new.append(term)
        for atom in atoms:
            for body in known:
                term = Abs(atom, body)
                if term not in seen:
                    seen.add(term)
                    new.append(term)
        yield from new
        known += new


def count_commutative_occurrences(problem: UnificationProblem) -> int:
    return sum(
        1
        for eq in problem.equations
        for side in (eq.lhs, eq.rhs)
        for sub in subterms(side)
        if isinstance(sub, App) and sub.symbol.is_commutative
    )
