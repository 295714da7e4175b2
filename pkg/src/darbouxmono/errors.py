"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed polynomial text. ``position`` is a 0-based character offset."""

    def __init__(self, message, position, text=""):
        self.position = position
        self.text = text
        super().__init__(f"{message} (at position {position})")


class UnknownVariable(ValueError):
    pass


class RosterMismatch(ValueError):
    pass


class NotAUnit(ValueError):
    pass


class InvalidCenter(ValueError):
    pass


class DepthExceeded(RuntimeError):
    """The blow-up heuristic ran out of depth budget. Not a proof that no resolution exists."""

    def __init__(self, max_depth, leaf_ids):
        self.max_depth = max_depth
        self.leaf_ids = tuple(leaf_ids)
        super().__init__(
            f"max_depth={max_depth} exceeded in chart(s) {', '.join(self.leaf_ids)}"
        )


class ManualScriptExhausted(RuntimeError):
    def __init__(self, leaf_ids):
        self.leaf_ids = tuple(leaf_ids)
        super().__init__(
            "manual script exhausted; not normal crossings in chart(s) "
            + ", ".join(self.leaf_ids)
        )


class StabilityViolation(AssertionError):
    pass


class RankDeficient(ValueError):
    pass


class NonGeneric(ValueError):
    """Exponent matrix is not of maximal rank: the resonant case, left open."""


class VerificationSkipped(Exception):
    """A check cannot be run on this input (e.g. non-integer exponents)."""
