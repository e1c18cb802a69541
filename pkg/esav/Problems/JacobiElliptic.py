#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from scipy import special

from esav.Utils.EsavErrors import ModulusError


class JacobiElliptic:
    """
    Jacobi elliptic functions parameterized by the modulus kappa (scipy uses the parameter m = kappa**2)
    """

    @staticmethod
    def _parameter(modulus):
        if not 0 <= modulus <= 1:
            raise ModulusError(f'the elliptic modulus must lie in [0, 1], got {modulus}')
        return modulus ** 2

    @staticmethod
    def sn(u, modulus):
        """
        :param u: argument (scalar or array)
        :param float modulus: kappa in [0, 1]
        :return: sn(u; kappa)
        """
        return special.ellipj(u, JacobiElliptic._parameter(modulus))[0]

    @staticmethod
    def sn_cn_dn(u, modulus):
        sn, cn, dn, _ = special.ellipj(u, JacobiElliptic._parameter(modulus))
        return sn, cn, dn


def jacobi_sn(u, modulus):
    return JacobiElliptic.sn(u, modulus)
