#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
import numpy as np
from scipy import linalg

from esav.CoreDS.SpectralDecomp import SpectralDecomp
from esav.Utils.EsavErrors import DimensionError, DomainError, NotPsdError, SingularDenominatorError


class MatrixFunctions:
    """
    A stateless class with only static functions for the dense matrix functions used by the integrators:
    the even functions of h*sqrt(A)/eps, exp and phi of a general matrix, the rank-1 solve of the SAV schemes
    and the exponential of the cross-product matrix of a magnetic field
    """

    even_functions = ('cos', 'sinc', 'g1', 'g2m')
    small_argument = 1e-4
    psd_tolerance = 1e-10
    denominator_floor = 1e-14

    # Taylor coefficients in w = z**2, through z**6
    _even_taylor = {'cos': (1.0, -1 / 2, 1 / 24, -1 / 720),
                    'sinc': (1.0, -1 / 6, 1 / 120, -1 / 5040),
                    'g1': (1 / 2, -1 / 24, 1 / 720, -1 / 40320),
                    'g2m': (0.0, -1 / 2, 1 / 24, -1 / 720)}

    @staticmethod
    def even_function(z, which):
        """
        Evaluates one of cos(z), sin(z)/z, (1-cos(z))/z**2, cos(z)-1 elementwise, switching to the
        Taylor series for |z| < small_argument
        :param z: real scalar or array
        :param str which: one of 'cos', 'sinc', 'g1', 'g2m'
        :return: the function values, same shape as z
        """
        if which not in MatrixFunctions.even_functions:
            raise ValueError(f'unknown even function {which}, expected one of {MatrixFunctions.even_functions}')
        z = np.asarray(z, dtype=float)
        small = np.abs(z) < MatrixFunctions.small_argument
        w = z * z
        c0, c1, c2, c3 = MatrixFunctions._even_taylor[which]
        series = c0 + w * (c1 + w * (c2 + w * c3))
        z_safe = np.where(small, 1.0, z)
        if which == 'cos':
            closed = np.cos(z_safe)
        elif which == 'sinc':
            closed = np.sin(z_safe) / z_safe
        elif which == 'g1':
            closed = 2.0 * np.sin(0.5 * z_safe) ** 2 / (z_safe * z_safe)
        else:
            closed = -2.0 * np.sin(0.5 * z_safe) ** 2
        return np.where(small, series, closed)

    @staticmethod
    def frequencies(decomp, h, eps):
        """
        :param SpectralDecomp decomp: decomposition of a symmetric PSD matrix A
        :param float h: step size
        :param float eps: the stiffness scale
        :return: the eigenvalues of h*sqrt(A)/eps
        :rtype: np.ndarray
        :raises NotPsdError: if A has an eigenvalue below -psd_tolerance*||A||
        """
        eigenvalues = decomp.eigenvalues
        scale = max(np.max(np.abs(eigenvalues)), 1.0) if len(eigenvalues) else 1.0
        if len(eigenvalues) and eigenvalues[0] < -MatrixFunctions.psd_tolerance * scale:
            raise NotPsdError(f'matrix is not positive semi-definite: smallest eigenvalue {eigenvalues[0]:.3e}')
        return h * np.sqrt(np.clip(eigenvalues, 0.0, None)) / eps

    @staticmethod
    def even_matrix_function(matrix, h, eps, which, decomp=None):
        """
        Evaluates f(h*Omega) for Omega = sqrt(A)/eps through the eigendecomposition of A
        :param np.ndarray matrix: symmetric PSD matrix A
        :param float h: step size (> 0)
        :param float eps: the stiffness scale (> 0)
        :param str which: one of 'cos', 'sinc', 'g1', 'g2m'
        :param SpectralDecomp decomp: an already computed decomposition of A (optional)
        :return: the symmetric matrix f(h*Omega)
        :rtype: np.ndarray
        """
        if decomp is None:
            decomp = SpectralDecomp.from_symmetric(matrix)
        z = MatrixFunctions.frequencies(decomp, h, eps)
        return decomp.apply(MatrixFunctions.even_function(z, which))

    @staticmethod
    def _check_square(matrix):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f'expected a square matrix, got shape {matrix.shape}')
        if not np.all(np.isfinite(matrix)):
            raise DomainError('matrix has non-finite entries')
        return matrix

    @staticmethod
    def dense_exp(matrix):
        """
        :param np.ndarray matrix: a square matrix M
        :return: exp(M), by scaling and squaring with a Pade approximant
        :rtype: np.ndarray
        """
        return linalg.expm(MatrixFunctions._check_square(matrix))

    @staticmethod
    def dense_phi(matrix):
        """
        phi(M) = (exp(M) - I) / M, defined for singular M as well.
        It is the top-right block of exp([[M, I], [0, 0]])
        :param np.ndarray matrix: a square matrix M
        :return: phi(M)
        :rtype: np.ndarray
        """
        matrix = MatrixFunctions._check_square(matrix)
        dim = matrix.shape[0]
        augmented = np.zeros((2 * dim, 2 * dim))
        augmented[:dim, :dim] = matrix
        augmented[:dim, dim:] = np.eye(dim)
        return linalg.expm(augmented)[:dim, dim:]

    @staticmethod
    def rank1_solve(gamma, force, rhs):
        """
        Solves (I + gamma * force^T) q = rhs by the scalar reduction
        force^T q = force^T rhs / (1 + force^T gamma), q = rhs - gamma * (force^T q)
        :param np.ndarray gamma: the rank-1 column
        :param np.ndarray force: the rank-1 row
        :param np.ndarray rhs: the right-hand side
        :return: the solution q
        :rtype: np.ndarray
        :raises SingularDenominatorError: if 1 + force^T gamma <= denominator_floor
        """
        denominator = 1.0 + force @ gamma
        if not denominator > MatrixFunctions.denominator_floor:
            raise SingularDenominatorError(f'rank-1 system is singular: 1 + F^T gamma = {denominator:.3e}')
        return rhs - gamma * ((force @ rhs) / denominator)

    @staticmethod
    def hat_matrix(field):
        """
        :param np.ndarray field: a 3-vector b
        :return: the matrix B with B v = v x b
        :rtype: np.ndarray
        """
        b1, b2, b3 = field
        return np.array([[0.0, b3, -b2],
                         [-b3, 0.0, b1],
                         [b2, -b1, 0.0]])

    @staticmethod
    def rodrigues_exp(field, t):
        """
        exp(t*B) for B v = v x b, in closed form I + t*sinc(theta)*B + t**2*g1(theta)*B**2 with theta = t*|b|.
        The even functions switch to their Taylor series for small theta
        :param np.ndarray field: the 3-vector b
        :param float t: the time
        :return: a rotation matrix about b
        :rtype: np.ndarray
        """
        field = np.asarray(field, dtype=float)
        hat = MatrixFunctions.hat_matrix(field)
        theta = t * np.linalg.norm(field)
        return np.eye(3) + (t * MatrixFunctions.even_function(theta, 'sinc')) * hat + \
            (t * t * MatrixFunctions.even_function(theta, 'g1')) * (hat @ hat)
