# SPDX-License-Identifier: Apache-2.0

"""
A collection of all Error Types used in the simulator
"""


class Error(Exception):
    """Base class for exceptions in this module."""


class ValidationError(Error):
    """
    Base class for invalid caller input. The command line maps these to
    exit code 2.
    """


class InvalidDirectionError(ValidationError):
    """
    Raised when a direction is not a unit vector within tolerance, or an
    object that is not a Direction is passed where one is required.
    """


class InvalidDistributionError(ValidationError):
    """
    Raised when joint probabilities fall outside [0, 1] or do not sum to 1
    """


class InvalidModelSpecError(ValidationError):
    """
    Raised when a model specification carries parameters that do not
    belong to its kind, misses required ones, or names an unknown kind
    """


class StateMismatchError(ValidationError):
    """
    Raised when a hidden state is missing or was prepared by another model
    """


class InvalidStreamSpecError(ValidationError):
    """
    Raised when a stream seed is not a 64-bit unsigned integer or the
    stream index is negative
    """


class ZeroTrialsError(ValidationError):
    """
    Raised when an estimator is asked to work on an empty sample
    """


class InsufficientTrialsError(ValidationError):
    """
    Raised when an experiment is requested with fewer trials than the
    normal approximation of its tests supports
    """


class InvalidGridError(ValidationError):
    """
    Raised when an angle grid is empty, not strictly increasing or leaves
    the [0, pi] range
    """


class InvalidEpsilonError(ValidationError):
    """
    Raised when the finite difference step of the kink slope is outside
    (0, 0.1]
    """


class InvalidSettingError(ValidationError):
    """
    Raised when an experiment receives measurement settings it cannot use,
    for example a mixed assignment in the inequality experiment
    """


class InvalidConfigError(ValidationError):
    """
    Used for invalid configuration(s) within eprsimconfig.yml and the
    resolved run configuration
    """
