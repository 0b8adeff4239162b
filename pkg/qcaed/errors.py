#!/usr/bin/env python
#
# This file is part of qcaed.
#
# qcaed is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# qcaed is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with qcaed.  If not, see <http://www.gnu.org/licenses/>.

class QcAedError(Exception):
    pass


class AlistError(QcAedError, ValueError):
    def __init__(self, msg, lineno=None):
        if lineno is not None:
            msg = "line {}: {}".format(lineno, msg)
        super(AlistError, self).__init__(msg)
        self.lineno = lineno


class BaseMatrixError(QcAedError, ValueError):
    pass


class DimensionError(QcAedError, ValueError):
    pass


class CodeConstructionError(QcAedError):
    pass


class EncoderError(QcAedError):
    pass


class PermutationError(QcAedError, ValueError):
    pass


class SymmetryBreakError(QcAedError, ValueError):
    pass


class ConfigError(QcAedError):
    pass


class SimulationError(QcAedError):
    pass
