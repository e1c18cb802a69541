#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
from dataclasses import dataclass


@dataclass(frozen=True)
class SplitScheme:
    """
    A composition of the magnetic subflow 'L' and the SAV subflow 'NL'.
    stages lists (subflow, fraction of h) in the order of application
    """
    name: str
    stages: tuple
    order: int

    subflows = ('L', 'NL')
    fraction_tolerance = 1e-14

    def __post_init__(self):
        for tag, _ in self.stages:
            if tag not in self.subflows:
                raise ValueError(f'unknown subflow {tag} in scheme {self.name}')
        for tag in self.subflows:
            total = sum(fraction for stage_tag, fraction in self.stages if stage_tag == tag)
            if abs(total - 1.0) > self.fraction_tolerance * 10:
                raise ValueError(f'{tag} fractions of scheme {self.name} sum to {total}, expected 1')

    @staticmethod
    def triple_jump_weights(inner_order):
        """
        :param int inner_order: the (even) order p of the symmetric scheme being composed
        :return: the weights (w1, w2, w1) raising the order to p + 2
        :rtype: tuple(float, float, float)
        """
        root = 2.0 ** (1.0 / (inner_order + 1))
        outer = 1.0 / (2.0 - root)
        return outer, -root * outer, outer

    @classmethod
    def lie(cls):
        return cls('s1sav', (('L', 1.0), ('NL', 1.0)), 1)

    @classmethod
    def strang(cls):
        return cls('s2sav', (('L', 0.5), ('NL', 1.0), ('L', 0.5)), 2)

    @classmethod
    def triple_jump(cls, inner, name):
        weights = cls.triple_jump_weights(inner.order)
        stages = tuple((tag, weight * fraction) for weight in weights for tag, fraction in inner.stages)
        return cls(name, stages, inner.order + 2)

    @classmethod
    def by_name(cls, name):
        """
        :param str name: one of s1sav, s2sav, s4sav, s6sav
        :rtype: SplitScheme
        """
        if name == 's1sav':
            return cls.lie()
        if name == 's2sav':
            return cls.strang()
        if name == 's4sav':
            return cls.triple_jump(cls.strang(), 's4sav')
        if name == 's6sav':
            return cls.triple_jump(cls.triple_jump(cls.strang(), 's4sav'), 's6sav')
        raise ValueError(f'unknown splitting scheme {name}')

    def fused(self):
        """
        :return: the same scheme with adjacent magnetic stages merged (they commute, x being fixed)
        :rtype: SplitScheme
        """
        merged = []
        for tag, fraction in self.stages:
            if merged and tag == 'L' and merged[-1][0] == 'L':
                merged[-1] = ('L', merged[-1][1] + fraction)
            else:
                merged.append((tag, fraction))
        return SplitScheme(self.name, tuple(merged), self.order)
