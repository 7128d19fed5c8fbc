"""
This module contains the Config class, which manages the limits and defaults used by the
checker and the unifier.
"""

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Config:
    """Configuration settings for equivalence checking and unification.

    Attributes:
        max_group_order: Largest permutation group the membership test will enumerate.
        fresh_family: Atom family used for names introduced during a derivation.
        check_measure: Assert that every simplification step decreases the problem measure.
        witness_depth: Term depth explored when searching for an instance witness.
        debug_logging: Log at DEBUG instead of WARNING when the CLI sets up logging.
    """

    max_group_order: int = 1_000_000
    fresh_family: str = "c"
    check_measure: bool = True
    witness_depth: int = 2
    debug_logging: bool = False

    def __post_init__(self):
        if self.max_group_order < 1:
            raise ValueError(f"max_group_order must be positive, got {self.max_group_order}")
        if not self.fresh_family.isalpha() or not self.fresh_family.islower():
            raise ValueError(f"fresh_family must be lowercase letters, got {self.fresh_family!r}")
        if self.witness_depth < 0:
            raise ValueError(f"witness_depth must not be negative, got {self.witness_depth}")

    @classmethod
    def from_options(cls, **overrides) -> "Config":
        """Build a config from keyword options, ignoring those left as None.

        Raises:
            ValueError: If an option is unknown or out of range.
        """
        known = {f.name for f in fields(cls)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"Unknown config options: {', '.join(sorted(unknown))}")
        return replace(cls(), **{k: v for k, v in overrides.items() if v is not None})
