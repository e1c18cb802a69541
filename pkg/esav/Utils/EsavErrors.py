#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#

"""
Exception types raised by the esav integrators.
Every numerical failure derives from NumericalError, which the command line maps to exit code 3.
"""


class EsavError(Exception):
    """
    Base class of all esav errors
    """


class NumericalError(EsavError):
    """
    Base class of errors raised when a computation cannot be carried out on the given numbers
    """


class DimensionError(NumericalError, ValueError):
    """
    Shapes of the operands do not fit (e.g., a non-square matrix where a square one is required)
    """


class SymmetryError(NumericalError, ValueError):
    """
    A matrix that must be symmetric is not
    """


class NotPsdError(NumericalError, ValueError):
    """
    A matrix that must be positive semi-definite has a negative eigenvalue
    """


class SingularDenominatorError(NumericalError):
    """
    The scalar denominator 1 + F^T gamma of a rank-1 solve is not positive
    """


class InvalidShiftError(NumericalError, ValueError):
    """
    The radicand V(q) + C0 of a scalar auxiliary variable is not positive at lift time
    """


class SingularPotentialError(NumericalError):
    """
    The radicand U(x) + C0 became nonpositive (or non-finite) during a step
    """

    def __init__(self, msg, t=None, point=None):
        super().__init__(msg)
        self.t = t
        self.point = point


class StageError(NumericalError):
    """
    A subflow of a splitting composition failed; the stage index is kept for diagnostics
    """

    def __init__(self, msg, stage_index):
        super().__init__(msg)
        self.stage_index = stage_index


class DivergenceError(NumericalError):
    """
    A fixed-point iterate became NaN or infinite
    """


class StepSizeUnderflowError(NumericalError):
    """
    The adaptive reference integrator needed a step below its minimal step size
    """

    def __init__(self, msg, t=None):
        super().__init__(msg)
        self.t = t


class DomainError(NumericalError):
    """
    A right-hand side evaluated to NaN or infinity
    """


class DegenerateReferenceError(NumericalError):
    """
    A relative error was requested against a reference of zero norm
    """


class ModulusError(EsavError, ValueError):
    """
    An elliptic modulus is outside its valid range
    """


class QuadratureOrderError(EsavError, ValueError):
    """
    A quadrature rule of an unsupported number of points was requested
    """
