"""Exception hierarchy shared by every layer of the engine."""


class SMCError(Exception):
    """Base class for all errors raised by smcstats."""


class ConfigurationError(SMCError, ValueError):
    """Invalid parameters, mismatched fields or incompatible secret handles."""


class RangeOverflowError(SMCError, OverflowError):
    """A value or a declared bitlength does not fit the configured range."""


class InsufficientSharesError(SMCError, ValueError):
    pass


class IntegrityError(SMCError):
    """Shares of one secret do not lie on a single degree-t polynomial."""


class SchedulingError(SMCError):
    """Gates submitted as one batch depend on each other."""


class SimulationError(SMCError):
    """The simulated network broke one of its own rules (synchrony, lockstep)."""


class DomainError(SMCError, ValueError):
    """Input outside the domain of a statistical program."""


class InputParseError(SMCError, ValueError):
    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        super().__init__(f"{self.path}:{line}: {message}")
