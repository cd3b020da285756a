"""Exception types shared across the package."""


class FracDemandError(Exception):
    """Base class for all package errors."""


class SizeCapExceeded(FracDemandError):
    """An instance is larger than a configured enumeration or search cap."""


class InvalidInput(FracDemandError, ValueError):
    """Malformed graph, demand, list, witness or parameter."""


class HypothesisViolated(FracDemandError):
    """A precondition of a lemma-style construction does not hold."""


class CertificateError(FracDemandError):
    """A certificate failed exact re-verification."""
