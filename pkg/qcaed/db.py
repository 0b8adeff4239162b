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

from sqlalchemy import (
    BigInteger, Column, DateTime, Enum, Float, Integer, String, UniqueConstraint, create_engine)
from sqlalchemy.orm import declarative_base, sessionmaker

Base = declarative_base()


def init_db(url):
    engine = create_engine(url, pool_recycle=300)
    Base.metadata.create_all(engine)
    session = sessionmaker(bind=engine, expire_on_commit=False)
    return session


class SimPointTable(Base):
    __tablename__ = 'sim_point'
    __table_args__ = (UniqueConstraint('config_key', 'ebno_db'),)

    pk = Column(BigInteger().with_variant(Integer, "sqlite"), primary_key=True)
    config_key = Column(String(40), nullable=False, index=True)
    code = Column(String(32), nullable=False)
    decoder = Column(
        Enum(
            'bp',
            'layered',
            'aed',
            'sbp',
            name='decoder_kind'),
        nullable=False)
    ebno_db = Column(Float, nullable=False)

    max_frames = Column(BigInteger().with_variant(Integer, "sqlite"), nullable=False)
    min_block_errors = Column(Integer, nullable=False)

    frames = Column(BigInteger().with_variant(Integer, "sqlite"), nullable=False)
    block_errors = Column(BigInteger().with_variant(Integer, "sqlite"), nullable=False)
    bit_errors = Column(BigInteger().with_variant(Integer, "sqlite"), nullable=False)
    sum_iterations = Column(Float, nullable=False)
    sum_max_iterations = Column(Float, nullable=False)
    sum_converged = Column(Float, nullable=False)

    updated = Column(DateTime(timezone=True), nullable=False)

    def update(self, **kwargs):
        for key, attr in kwargs.items():
            setattr(self, key, attr)

    def __repr__(self):
        return '<SimPointTable(pk={pk}, code={code}, decoder={decoder}, ' \
               'ebno_db={ebno}, frames={frames}, block_errors={errors}, ' \
               'updated={updated})>'.format(
                pk=self.pk,
                code=self.code,
                decoder=self.decoder,
                ebno=self.ebno_db,
                frames=self.frames,
                errors=self.block_errors,
                updated=self.updated)
