"""Exception hierarchy. Every error raised on bad input derives from NetNLError."""


class NetNLError(ValueError):
    pass


class InvalidDensity(NetNLError):
    pass


class InvalidChannel(NetNLError):
    pass


class NormViolation(NetNLError):
    pass


class DomainError(NetNLError):
    pass


class PatternMismatch(NetNLError):
    pass


class TopologyError(NetNLError):
    pass


class DimensionError(NetNLError):
    pass


class CaseMismatch(NetNLError):
    pass


class FormulaMismatch(NetNLError):
    def __init__(self, message: str, max_deviation: float):
        super().__init__(f"{message} (max deviation {max_deviation:.3e})")
        self.max_deviation = max_deviation
