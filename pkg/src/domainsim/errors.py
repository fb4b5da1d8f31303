"""Exception types shared across the package."""


class InputError(Exception):
    """Bad user input: malformed files, missing inputs, out-of-range arguments.

    The CLI maps this to exit code 1. Anything else that escapes is treated
    as an internal error (exit code 2).
    """


class UnrankablePairError(Exception):
    """A domain pair for which a metric has no defined value.

    Raised when a pairwise metric cannot be computed, e.g. no common polar
    words for the divergence metrics, or zero baseline entropy for the
    entropy-change metric. Callers ranking many pairs catch this and record
    the pair as having no value.
    """
