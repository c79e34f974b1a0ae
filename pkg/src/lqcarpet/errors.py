"""Exception types shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class FormatError(ValueError):
    """The input description is structurally malformed (bad JSON shape,
    unknown kind, non-numeric field, dangling vertex reference...)."""


@dataclass(frozen=True)
class Violation:
    """One validation failure with a stable machine-readable code."""

    code: str        # NonContraction | ProbabilityRange | ProbabilityRowSum
                     # | DanglingVertex | NotStronglyConnected
    where: str       # offending edge or vertex label, "" for global
    message: str

    def __str__(self):
        return f"{self.code}({self.where}): {self.message}" if self.where \
            else f"{self.code}: {self.message}"


class GifsValidationError(ValueError):
    """Raised by validate_gifs; carries the full structured violation list."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NotAdmissible(ValueError):
    """Word is empty or its consecutive edges do not chain."""


class NotDiagonalSystem(ValueError):
    """Operation requires every linear part to be diagonal."""


class NotSingleVertex(ValueError):
    """Operation requires the degenerate single-vertex (IFS) case."""


class NotIrreducible(ValueError):
    """Matrix positivity pattern is not strongly connected."""


class MalformedPattern(RuntimeError):
    """A reducible hat-edge matrix violates the expected two-block
    mirror structure; indicates a construction bug upstream."""


class NotAtRhoOne(ValueError):
    """Stationary vector requested away from the rho = 1 curve."""


class BracketFailure(RuntimeError):
    """Monotone root solve could not bracket a sign change."""


class RegimeAmbiguous(RuntimeError):
    """The two spectrum candidates straddle t(q) beyond tolerance,
    violating the regime dichotomy; indicates an upstream bug."""


class CrossCheckError(RuntimeError):
    """Closed-form branch value and grid-refined minimum disagree."""


class BudgetExceeded(RuntimeError):
    """A brute-force oracle exceeded its enumeration/state budget."""
