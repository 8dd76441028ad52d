"""Exception types shared across the package.

The CLI maps these onto process exit codes: parse/validation failures -> 2,
unsupported Newton strata -> 3, blown enumeration budgets -> 4.
"""


class RmisogError(Exception):
    pass


class ParseError(RmisogError, ValueError):
    """Malformed polynomial text or non-integer coefficient."""


class WeilValidationError(RmisogError, ValueError):
    """Input fails the Weil q-polynomial tests (functional equation, root
    bound, mixed irreducible factors, bad prime power)."""


class UnsupportedStratumError(RmisogError):
    """Newton slopes outside {0, 1/2, 1}, p = 2, or p not totally split in
    the real field."""


class DegenerateError(RmisogError):
    """The power n is degenerate: char poly of alpha^n not squarefree, or
    alpha^n = +/- q^(n/2)."""


class PrecisionError(RmisogError):
    """p-adic working precision too small; caller may retry with larger M."""


class BudgetError(RmisogError):
    """Enumeration exceeded its configured cap."""
