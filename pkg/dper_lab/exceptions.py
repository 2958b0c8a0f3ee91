# -*- coding: utf-8 -*-
from __future__ import absolute_import, print_function, unicode_literals


class DperLabError(Exception):
    """
    Base exception for all errors raised by ``dper_lab``.

    Attributes
    ----------
    details : dict
        Machine-readable context about the failure.
        The CLI emits it together with the error message.
    """

    def __init__(self, message="", details=None):
        super(DperLabError, self).__init__(message)
        self.details = details or {}


class ContractViolation(DperLabError, ValueError):
    """
    Exception used when a caller breaks a precondition
    of a public operation.

    Possible reasons:

    * shape mismatch between a matrix and the network it is fed to
    * a forward cache reused after the parameters changed
    * negative standard deviation or priority
    * non-finite action given to an environment
    """


class NumericError(DperLabError, ArithmeticError):
    """
    Exception used when a computation produced NaN or infinity.
    """


class NonFiniteGradient(NumericError):
    """
    Exception used when an optimizer receives a gradient
    with NaN or infinite entries.

    Attributes
    ----------
    tensor : str
        Name of the offending gradient tensor (e.g. ``critic2.W3``).
    """

    def __init__(self, tensor, message=None):
        super(NonFiniteGradient, self).__init__(
            message or "Gradient {} has non-finite entries.".format(tensor),
            {"tensor": tensor},
        )
        self.tensor = tensor


class NumericDegeneracyError(NumericError):
    """
    Exception used when a covariance matrix is not positive definite
    even after jitter was added.
    """


class DegenerateBatchError(DperLabError):
    """
    Exception used when a batch is too small to estimate
    a sample covariance.
    """


class InsufficientDataError(DperLabError):
    """
    Exception used when sampling is attempted from an empty replay buffer.
    """


class DegeneratePrioritiesError(DperLabError):
    """
    Exception used when prioritized sampling is attempted
    while the total priority mass is zero.
    """


class DivergenceError(NumericError):
    """
    Exception used when a training loss becomes non-finite.
    The run it occurs in is aborted and marked as failed.
    """


class ConfigError(DperLabError):
    """
    Exception used when experiment configuration does not validate.

    Attributes
    ----------
    errors : dict
        Mapping of field name to list of error messages.
    """

    def __init__(self, errors):
        message = "; ".join(
            "{}: {}".format(k, " ".join(v)) for k, v in sorted(errors.items())
        )
        super(ConfigError, self).__init__(message, {"errors": errors})
        self.errors = errors


class CheckpointError(DperLabError):
    """
    Exception used when a checkpoint or buffer snapshot cannot be read back.
    """


class OutputError(DperLabError):
    """
    Exception used when result files cannot be written or read.

    The offending path is always part of ``details``.
    """
