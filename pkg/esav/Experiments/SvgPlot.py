#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
import math
from bs4 import BeautifulSoup


class SvgPlot:
    """
    A static line chart with optionally logarithmic axes, written as an SVG document
    """
    width = 640
    height = 480
    margin = 60
    palette = ('#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#ff7f0e', '#8c564b', '#e377c2', '#17becf')

    def __init__(self, title, x_label, y_label, log_x=False, log_y=True):
        self.title = title
        self.x_label = x_label
        self.y_label = y_label
        self.log_x = log_x
        self.log_y = log_y
        self.series = []

    def add_series(self, name, xs, ys):
        """
        Adds a curve; points that cannot be drawn on the axes (non-finite, or non-positive on a log axis) are skipped
        """
        points = [(x, y) for x, y in zip(xs, ys) if self._drawable(x, self.log_x) and self._drawable(y, self.log_y)]
        self.series.append((name, points))

    @staticmethod
    def _drawable(value, log_axis):
        return math.isfinite(value) and (value > 0 or not log_axis)

    @staticmethod
    def _transform(value, log_axis):
        return math.log10(value) if log_axis else value

    def _bounds(self, index, log_axis):
        values = [self._transform(point[index], log_axis) for _, points in self.series for point in points]
        if not values:
            return 0.0, 1.0
        low, high = min(values), max(values)
        if high - low < 1e-12:
            low, high = low - 0.5, high + 0.5
        return low, high

    def to_svg(self):
        """
        :return: the SVG document
        :rtype: str
        """
        soup = BeautifulSoup(features='xml')
        svg = soup.new_tag('svg', attrs={'xmlns': 'http://www.w3.org/2000/svg', 'width': str(self.width),
                                         'height': str(self.height)})
        soup.append(svg)
        x_low, x_high = self._bounds(0, self.log_x)
        y_low, y_high = self._bounds(1, self.log_y)
        inner_w = self.width - 2 * self.margin
        inner_h = self.height - 2 * self.margin

        def to_px(x, y):
            px = self.margin + inner_w * (self._transform(x, self.log_x) - x_low) / (x_high - x_low)
            py = self.height - self.margin - inner_h * (self._transform(y, self.log_y) - y_low) / (y_high - y_low)
            return f'{px:.2f},{py:.2f}'

        svg.append(soup.new_tag('rect', attrs={'x': str(self.margin), 'y': str(self.margin), 'width': str(inner_w),
                                               'height': str(inner_h), 'fill': 'none', 'stroke': 'black'}))
        self._add_text(soup, svg, self.title, self.width / 2, self.margin / 2)
        self._add_text(soup, svg, self.x_label, self.width / 2, self.height - self.margin / 4)
        self._add_text(soup, svg, self.y_label, self.margin / 4, self.height / 2, rotate=True)
        for low, high, is_x, log_axis in ((x_low, x_high, True, self.log_x), (y_low, y_high, False, self.log_y)):
            for end, value in (('low', low), ('high', high)):
                label = f'1e{value:.1f}' if log_axis else f'{value:.3g}'
                if is_x:
                    self._add_text(soup, svg, label, self.margin if end == 'low' else self.width - self.margin,
                                   self.height - self.margin + 16)
                else:
                    self._add_text(soup, svg, label, self.margin - 30,
                                   self.height - self.margin if end == 'low' else self.margin)

        for index, (name, points) in enumerate(self.series):
            color = self.palette[index % len(self.palette)]
            group = soup.new_tag('g', attrs={'class': 'series', 'id': name})
            if points:
                group.append(soup.new_tag('polyline', attrs={'points': ' '.join(to_px(x, y) for x, y in points),
                                                             'fill': 'none', 'stroke': color}))
            self._add_text(soup, group, name, self.width - self.margin + 5, self.margin + 15 * (index + 1),
                           anchor='start', color=color)
            svg.append(group)
        return soup.prettify()

    @staticmethod
    def _add_text(soup, parent, text, x, y, rotate=False, anchor='middle', color='black'):
        attrs = {'x': f'{x:.2f}', 'y': f'{y:.2f}', 'text-anchor': anchor, 'fill': color, 'font-size': '12'}
        if rotate:
            attrs['transform'] = f'rotate(-90 {x:.2f} {y:.2f})'
        text_elem = soup.new_tag('text', attrs=attrs)
        text_elem.string = text
        parent.append(text_elem)
