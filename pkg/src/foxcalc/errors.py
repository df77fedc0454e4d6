"""Exception types shared across the package.

``DomainError`` covers every bad-input condition (the CLI maps it to exit
code 2); ``BoundExceeded`` signals that a bounded search or a radius-limited
table ran out of room before it could answer (exit code 3).
"""


class DomainError(ValueError):
    pass


class UnknownFactorError(DomainError):
    pass


class NotInKernelError(DomainError):
    pass


class UnsupportedTorsionError(DomainError):
    pass


class RewriteError(DomainError):
    pass


class BoundExceeded(RuntimeError):
    pass
