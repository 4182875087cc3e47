"""Exception types shared across the library."""


class ContractViolation(ValueError):
    """An input violates a documented precondition or invariant."""


class AncillaTooSmallError(ContractViolation):
    """The requested ancilla cannot hold the purifying system."""

    def __init__(self, requested: int, required: int):
        self.requested = requested
        self.required = required
        super().__init__(
            f"ancilla dimension {requested} is too small: the purifying system "
            f"needs at least {required}"
        )


class DimensionCapExceededError(RuntimeError):
    """A computation would exceed the configured total-dimension cap."""

    def __init__(self, needed: int, cap: int):
        self.needed = needed
        self.cap = cap
        super().__init__(
            f"total dimension {needed} exceeds the cap {cap} "
            f"(override with PURECORR_MAX_DIM or the config field)"
        )
