"""Exception hierarchy shared by every module."""


class BlabError(Exception):
    """Base class for library errors."""


class DomainError(BlabError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class DegenerateRegionError(DomainError):
    pass


class CertificateError(BlabError):
    """A numerical certificate could not be established.

    ``witness`` carries whatever locates the failure (an index, an
    ``(n, t)`` pair, a sampled ``y``...).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
