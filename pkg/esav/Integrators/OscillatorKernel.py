#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass
import numpy as np

from esav.CoreDS.SpectralDecomp import SpectralDecomp
from esav.CoreDS.MatrixFunctions import MatrixFunctions


@dataclass(frozen=True, eq=False)
class OscillatorKernel:
    """
    The matrix functions of h*Omega, Omega = sqrt(A)/eps, that make up exp(hR) and phi(hR) for the
    oscillatory system. exp(hR) = [[cos, h sinc], [-Omega sin, cos]] and the parts of phi(hR) that
    multiply the force are h*sinc and h**2*g1. The block h^-1*g2 of phi(hR) multiplies the zero
    position component of J g and is therefore never formed
    """
    h: float
    cosM: np.ndarray
    sincM: np.ndarray
    g1M: np.ndarray
    g2mM: np.ndarray
    omegaSin: np.ndarray

    @classmethod
    def build(cls, problem, h):
        """
        :param OsdeProblem problem: the oscillatory problem
        :param float h: the step size
        :return: the kernel of the problem for step size h
        :rtype: OscillatorKernel
        :raises NotPsdError: if A is not positive semi-definite
        """
        if not h > 0:
            raise ValueError(f'step size must be positive, got {h}')
        decomp = SpectralDecomp.from_symmetric(problem.A)
        z = MatrixFunctions.frequencies(decomp, h, problem.eps)
        blocks = {which: decomp.apply(MatrixFunctions.even_function(z, which))
                  for which in MatrixFunctions.even_functions}
        # Omega sin(h Omega) = (h Omega)**2 sinc(h Omega) / h
        omega_sin = decomp.apply(z * z * MatrixFunctions.even_function(z, 'sinc') / h)
        return cls(h, blocks['cos'], blocks['sinc'], blocks['g1'], blocks['g2m'], omega_sin)

    def propagate(self, q, p):
        """
        :return: exp(hR) applied to (q, p)
        :rtype: tuple(np.ndarray, np.ndarray)
        """
        return self.cosM @ q + self.h * (self.sincM @ p), -self.omegaSin @ q + self.cosM @ p


def build_kernel(problem, h):
    return OscillatorKernel.build(problem, h)
