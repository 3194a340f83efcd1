"""Exception types shared across jewelkit."""


class JewelkitError(Exception):
    """Base class for all jewelkit errors."""


class PreconditionError(JewelkitError, ValueError):
    """An input violates a documented precondition.

    ``clause`` names the violated condition so that callers (and the CLI)
    can report it without parsing the message.
    """

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause or "precondition"


class CertificationError(JewelkitError):
    """A computed certificate failed to verify."""
