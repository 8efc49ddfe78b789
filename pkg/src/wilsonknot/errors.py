"""Exception hierarchy shared by all wilsonknot modules.

Every error carries a short machine-readable ``code`` used by the CLI
to emit ``{"error": code, "detail": ...}`` on stderr.
"""


class WilsonKnotError(Exception):
    code = "error"

    @property
    def detail(self):
        return str(self)


# --- diagram codec ---------------------------------------------------------

class MalformedSyntax(WilsonKnotError):
    code = "malformed-syntax"


class ArcCountError(WilsonKnotError):
    code = "arc-count"


class DisconnectedArcCycle(WilsonKnotError):
    code = "disconnected-arc-cycle"


class IndexOutOfRange(WilsonKnotError):
    code = "index-out-of-range"


# --- wilson word / rewrite engine ------------------------------------------

class MultiComponentInput(WilsonKnotError):
    code = "multi-component-input"


class PatternMismatch(WilsonKnotError):
    code = "pattern-mismatch"


class BudgetExceeded(WilsonKnotError):
    code = "budget-exceeded"


class NonWilsonInput(WilsonKnotError):
    code = "non-wilson-input"


class InvalidSite(WilsonKnotError):
    code = "invalid-site"


# --- jones oracle -----------------------------------------------------------

class TooManyCrossings(WilsonKnotError):
    code = "too-many-crossings"


class InvalidCrossing(WilsonKnotError):
    code = "invalid-crossing"


# --- kz monodromy ------------------------------------------------------------

class InvalidParams(WilsonKnotError):
    code = "invalid-params"


class SingularityTooClose(WilsonKnotError):
    code = "singularity-too-close"


class StepUnderflow(WilsonKnotError):
    code = "step-underflow"


class DegeneratePoints(WilsonKnotError):
    code = "degenerate-points"


# --- catalog -----------------------------------------------------------------

class LinkOperand(WilsonKnotError):
    code = "link-operand"
