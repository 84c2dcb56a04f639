"""Exception types raised by the library.

Every domain failure derives from :class:`CGRRError`; the CLI maps those to
exit code 1.
"""


class CGRRError(Exception):
    """Base class for domain errors."""


class GraphError(CGRRError, ValueError):
    pass


class PayoffError(CGRRError, ValueError):
    pass


class ProfileError(CGRRError, ValueError):
    pass


class PreconditionError(CGRRError):
    """A constructor or verifier was called outside its hypothesis."""


class SpaceTooLarge(CGRRError):
    def __init__(self, size, cap):
        super().__init__(f"profile space has {size} profiles, cap is {cap}")
        self.size = size
        self.cap = cap


class UnsupportedDiagnostic(CGRRError):
    pass


class ImprovementViolation(CGRRError):
    """A scripted move that does not strictly improve the mover's payoff."""

    def __init__(self, step, user, resource=None, old_payoff=None, new_payoff=None):
        if resource is None:
            msg = f"step {step}: user {user} has no improving move"
        else:
            msg = (f"step {step}: user {user} -> resource {resource} is not improving "
                   f"({old_payoff} -> {new_payoff})")
        super().__init__(msg)
        self.step = step
        self.user = user
        self.resource = resource
        self.old_payoff = old_payoff
        self.new_payoff = new_payoff

    def as_dict(self):
        return {"step": self.step, "user": self.user, "resource": self.resource,
                "old_payoff": self.old_payoff, "new_payoff": self.new_payoff}


class ConstructionError(CGRRError):
    """Internal verification of a constructed object failed (a bug, not bad input)."""
