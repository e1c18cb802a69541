#
# Copyright 2024 - IBM Inc. All rights reserved
# SPDX-License-Identifier: Apache2.0
#
import csv
import io
from dataclasses import dataclass, fields, astuple


def _format_value(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_bool(text):
    if text not in ('true', 'false'):
        raise ValueError(f'expected true or false, got {text}')
    return text == 'true'


class CsvRecord:
    """
    Rows serialized as CSV with a fixed header, LF line endings and floats in shortest round-trip form
    """

    @classmethod
    def header(cls):
        return [field.name for field in fields(cls)]

    @classmethod
    def to_csv(cls, rows):
        """
        :param rows: the rows to serialize
        :return: the CSV text, header included
        :rtype: str
        """
        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(cls.header())
        for row in rows:
            writer.writerow([_format_value(value) for value in astuple(row)])
        return out.getvalue()

    @classmethod
    def from_csv(cls, text):
        """
        :param str text: CSV text as written by to_csv
        :return: the rows
        :rtype: list
        """
        reader = csv.reader(io.StringIO(text))
        header = next(reader, None)
        if header != cls.header():
            raise ValueError(f'unexpected CSV header {header}')
        converters = [float if field.type in (float, 'float') else _parse_bool if field.type in (bool, 'bool') else str
                      for field in fields(cls)]
        return [cls(*(convert(value) for convert, value in zip(converters, record))) for record in reader if record]


@dataclass(frozen=True)
class ResultRow(CsvRecord):
    """
    The outcome of one (method, step size) cell of an experiment
    """
    problem: str
    method: str
    param_name: str
    param_value: float
    h: float
    T: float
    global_error: float
    max_energy_error: float
    cpu_seconds: float
    converged: bool

    def sort_key(self):
        return self.problem, self.method, self.param_value, -self.h


@dataclass(frozen=True)
class EnergySample(CsvRecord):
    """
    One sample of an energy-error series
    """
    problem: str
    method: str
    param_name: str
    param_value: float
    h: float
    t: float
    energy_error: float
    absolute: bool
