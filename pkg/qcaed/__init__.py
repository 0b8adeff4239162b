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

import logging
import logging.handlers
import os

qcaed_name = "qcaed"
qcaed_version = 10

log = logging.getLogger(__name__)
_sessionmaker = None

import qcaed.db
from qcaed.gf2 import BinaryMatrix
from qcaed.qccode import QcCode, load_standard_code, list_standard_codes
from qcaed.autom import Permutation, qc_perm, qc_group
from qcaed.bpdec import DecoderConfig, DecodeOutcome, BPDecoder
from qcaed.aed import EnsembleConfig, EnsembleOutcome, aed_decode
from qcaed.baseline import sbp_decode
from qcaed.sim import RunConfig, PointResult, run_point, run_sweep


def init(
        loglevel='info',
        debug=False,
        logger=None,
        db_url=None):

    if logger is None:
        logger = logging.getLogger(__name__)
        logger.setLevel(loglevel.upper())
        if debug:
            logger.setLevel(logging.DEBUG)
        if not logger.handlers:
            lh = logging.StreamHandler()
            lh.setFormatter(logging.Formatter(
                '%(asctime)s %(levelname)s %(filename)s:%(lineno)d - %(message)s'))
            logger.addHandler(lh)
            if os.path.exists('/dev/log'):
                lh = logging.handlers.SysLogHandler(address='/dev/log')
                lh.setFormatter(logging.Formatter(
                    'qcaed %(filename)s/%(funcName)s:%(lineno)d - %(message)s'))
                logger.addHandler(lh)

    global log, _sessionmaker
    log = logger
    _sessionmaker = qcaed.db.init_db(db_url) if db_url else None


def get_session():
    if _sessionmaker is None:
        return None
    return _sessionmaker()


def close_session(session):
    if session is not None:
        session.close()
