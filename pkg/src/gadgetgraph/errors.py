"""Exception types shared across the package.

Two failure classes matter to callers (and to the CLI's exit codes): bad
input, and a certified inequality failing beyond tolerance. The latter is a
bug signal — every asserted bound holds mathematically whenever its
hypotheses do — so it gets its own type rather than a generic AssertionError.
"""


class ValidationError(ValueError):
    """Input fails a precondition: malformed file, bad index, broken PVM."""


class BoundViolation(ArithmeticError):
    """A certified inequality came out with slack below -1e-9.

    Raised only when the hypotheses of the inequality were verified first,
    so this indicates an implementation defect, not bad input.
    """
