#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
import numpy as np

from esav.Utils.EsavErrors import DimensionError, SymmetryError


@dataclass(frozen=True)
class SpectralDecomp:
    """
    The eigendecomposition A = basis * diag(eigenvalues) * basis^T of a real symmetric matrix.
    eigenvalues are sorted in ascending order and the columns of basis are orthonormal.
    Matrix functions f(A) are evaluated through it as basis * diag(f(eigenvalues)) * basis^T
    """
    eigenvalues: np.ndarray
    basis: np.ndarray

    symmetry_tolerance = 1e-12

    @staticmethod
    def check_symmetric(matrix):
        """
        :param np.ndarray matrix: the matrix to check
        :return: the matrix as a float array
        :rtype: np.ndarray
        :raises DimensionError: if the matrix is not square
        :raises SymmetryError: if the relative asymmetry exceeds symmetry_tolerance
        """
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f'expected a square matrix, got shape {matrix.shape}')
        norm = np.linalg.norm(matrix)
        if np.linalg.norm(matrix - matrix.T) > SpectralDecomp.symmetry_tolerance * max(norm, 1.0):
            raise SymmetryError('matrix is not symmetric')
        return matrix

    @classmethod
    def from_symmetric(cls, matrix):
        """
        Computes the eigendecomposition of a symmetric matrix (the sym_eig operation)
        :param np.ndarray matrix: a real symmetric matrix
        :return: the decomposition, eigenvalues ascending
        :rtype: SpectralDecomp
        """
        matrix = cls.check_symmetric(matrix)
        # eigh reads one triangle only, so feed it the exactly symmetric part
        eigenvalues, basis = np.linalg.eigh(0.5 * (matrix + matrix.T))
        return cls(eigenvalues, basis)

    def __len__(self):
        return len(self.eigenvalues)

    def apply(self, values):
        """
        :param np.ndarray values: one value per eigenvalue
        :return: basis * diag(values) * basis^T
        :rtype: np.ndarray
        """
        return (self.basis * np.asarray(values, dtype=float)) @ self.basis.T

    def reconstruct(self):
        """
        :return: the decomposed matrix
        :rtype: np.ndarray
        """
        return self.apply(self.eigenvalues)


def sym_eig(matrix):
    return SpectralDecomp.from_symmetric(matrix)
