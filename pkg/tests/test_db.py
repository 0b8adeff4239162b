import datetime

import pytest
import sqlalchemy.exc

import qcaed.db
from qcaed.db import SimPointTable


@pytest.fixture
def session():
    s = qcaed.db.init_db('sqlite://')()
    yield s
    s.close()


def point(**kw):
    values = dict(config_key='a' * 40, code='ccsds_128_64', decoder='aed', ebno_db=3.0,
                  max_frames=1000, min_block_errors=100, frames=1000, block_errors=12, bit_errors=80,
                  sum_iterations=3000.0, sum_max_iterations=5000.0, sum_converged=15000.0,
                  updated=datetime.datetime(2026, 1, 1))
    values.update(kw)
    return SimPointTable(**values)


def test_store_and_query(session):
    session.add(point())
    session.commit()
    row = session.query(SimPointTable).filter_by(config_key='a' * 40, ebno_db=3.0).one()
    assert row.block_errors == 12
    assert row.decoder == 'aed'
    assert 'ccsds_128_64' in repr(row)


def test_update(session):
    session.add(point())
    session.commit()
    row = session.query(SimPointTable).one()
    row.update(frames=2000, block_errors=30)
    session.commit()
    row = session.query(SimPointTable).one()
    assert (row.frames, row.block_errors) == (2000, 30)


def test_one_row_per_point(session):
    session.add(point())
    session.commit()
    session.add(point(frames=5))
    with pytest.raises(sqlalchemy.exc.IntegrityError):
        session.commit()
    session.rollback()
    session.add(point(ebno_db=3.5))
    session.commit()
    assert session.query(SimPointTable).count() == 2
