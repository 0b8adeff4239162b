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

import collections
import concurrent.futures
import csv
import dataclasses
import datetime
import hashlib
import io
import math

import numpy as np
import scipy.stats
import sqlalchemy.exc

import qcaed
import qcaed.db
from qcaed import autom, channel
from qcaed.aed import EnsembleConfig, aed_decode
from qcaed.baseline import sbp_decode
from qcaed.bpdec import DecoderConfig
from qcaed.errors import ConfigError, SimulationError
from qcaed.qccode import load_standard_code
from qcaed.symbreak import make_decoding_matrix, methods as break_methods

decoder_kinds = ('bp', 'layered', 'aed', 'sbp')
payloads = ('all_zero', 'random_encoded')

csv_header = ['ebno_db', 'frames', 'block_errors', 'bit_errors', 'bler', 'ber',
              'avg_iter', 'avg_max_iter', 'ci_low', 'ci_high']

# sigma used when the channel is switched off
_noiseless_sigma = 1e-6


def parse_ebno_grid(text):
    """"start:step:stop" (inclusive) or a comma separated list of dB values."""
    if isinstance(text, (list, tuple)):
        return tuple(float(x) for x in text)
    text = str(text).strip()
    try:
        if ':' in text:
            start, step, stop = (float(x) for x in text.split(':'))
            if step <= 0 or stop < start:
                raise ConfigError("bad Eb/N0 range '{}'".format(text))
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return tuple(round(start + k * step, 10) for k in range(count))
        return tuple(float(x) for x in text.split(',') if x.strip())
    except ValueError:
        raise ConfigError("bad Eb/N0 grid '{}'".format(text))


def _parse_bool(text):
    if isinstance(text, bool):
        return text
    text = str(text).strip().lower()
    if text in ('1', 'true', 'yes', 'on'):
        return True
    if text in ('0', 'false', 'no', 'off'):
        return False
    raise ConfigError("not a boolean: '{}'".format(text))


def _parse_int(text):
    try:
        return int(str(text).strip(), 0)
    except ValueError:
        raise ConfigError("not an integer: '{}'".format(text))


def _parse_float(text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError("not a number: '{}'".format(text))


def parse_break_params(text):
    """"idx=0", "src=0;dst=1" or "checks=51,53,58,71" into a dict."""
    params = {}
    if isinstance(text, dict):
        return dict(text)
    for item in str(text or '').split(';'):
        item = item.strip()
        if not item:
            continue
        if '=' not in item:
            raise ConfigError("break parameter '{}' is not key=value".format(item))
        key, value = (x.strip() for x in item.split('=', 1))
        try:
            if ',' in value:
                params[key] = [int(v) for v in value.split(',') if v.strip()]
            else:
                params[key] = int(value)
        except ValueError:
            params[key] = value
    return params


@dataclasses.dataclass(frozen=True)
class RunConfig:
    code: str
    decoder: str = 'bp'
    break_method: str = 'none'
    break_params: str = ''
    ensemble: int = 0
    ensemble_s: int = 4
    max_iter: int = 32
    schedule: str = 'flooding'
    early_stop: bool = True
    llr_clip: float = 64.0
    sbp_sat: float = 0.0
    sbp_stop_after: int = 3
    ebno: tuple = (2.0,)
    min_block_errors: int = 100
    max_frames: int = 10 ** 7
    seed: int = 1
    payload: str = 'all_zero'
    noiseless: bool = False
    workers: int = 1
    chunk: int = 64

    def __post_init__(self):
        if self.decoder not in decoder_kinds:
            raise ConfigError("unknown decoder '{}', expected one of {}".format(self.decoder, decoder_kinds))
        if self.break_method not in break_methods:
            raise ConfigError("unknown break method '{}', expected one of {}".format(
                self.break_method, break_methods))
        if self.payload not in payloads:
            raise ConfigError("unknown payload '{}', expected one of {}".format(self.payload, payloads))
        if self.schedule not in ('flooding', 'layered'):
            raise ConfigError("unknown schedule '{}'".format(self.schedule))
        if not self.ebno:
            raise ConfigError("Eb/N0 grid is empty")
        if self.min_block_errors < 1:
            raise ConfigError("min_block_errors must be at least 1")
        if self.max_frames < 1 or self.chunk < 1 or self.workers < 1:
            raise ConfigError("max_frames, chunk and workers must be positive")
        if self.max_iter < 1:
            raise ConfigError("max_iter must be at least 1")
        if self.decoder == 'sbp' and self.break_method != 'none':
            raise ConfigError("saturated BP decodes on the original matrix, use break_method=none")

    @property
    def decoder_cfg(self):
        schedule = 'layered' if self.decoder == 'layered' else self.schedule
        return DecoderConfig(self.max_iter, schedule, self.llr_clip, self.early_stop)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_text(self, skip=()):
        lines = []
        for f in dataclasses.fields(self):
            if f.name in skip:
                continue
            value = getattr(self, f.name)
            if f.name == 'ebno':
                value = ','.join(repr(float(x)) for x in value)
            lines.append("{}={}".format(f.name, value))
        return '\n'.join(lines) + '\n'

    def cache_key(self):
        # the frame budget is stored next to each point and compared on lookup
        text = self.to_text(skip=('ebno', 'workers', 'chunk', 'max_frames', 'min_block_errors'))
        return hashlib.sha1(text.encode('utf-8')).hexdigest()


run_config_converters = {
    'code': str,
    'decoder': str,
    'break_method': str,
    'break_params': str,
    'ensemble': _parse_int,
    'ensemble_s': _parse_int,
    'max_iter': _parse_int,
    'schedule': str,
    'early_stop': _parse_bool,
    'llr_clip': _parse_float,
    'sbp_sat': _parse_float,
    'sbp_stop_after': _parse_int,
    'ebno': parse_ebno_grid,
    'min_block_errors': _parse_int,
    'max_frames': _parse_int,
    'seed': _parse_int,
    'payload': str,
    'noiseless': _parse_bool,
    'workers': _parse_int,
    'chunk': _parse_int,
}


def parse_run_config_text(text):
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError("line {}: expected key=value".format(lineno))
        key, value = (x.strip() for x in line.split('=', 1))
        if key not in run_config_converters:
            raise ConfigError("line {}: unknown key '{}'".format(lineno, key))
        values[key] = run_config_converters[key](value)
    return values


def make_run_config(values):
    if 'code' not in values or not values['code']:
        raise ConfigError("no code given")
    try:
        return RunConfig(**values)
    except TypeError as e:
        raise ConfigError(str(e))


def read_run_config_values(path):
    try:
        with open(path, 'r') as f:
            return parse_run_config_text(f.read())
    except (IOError, OSError) as e:
        raise ConfigError("cannot read run configuration {}: {}".format(path, e))


def load_run_config(path, overrides=None):
    values = read_run_config_values(path)
    values.update(overrides or {})
    return make_run_config(values)


@dataclasses.dataclass
class PointResult:
    ebno_db: float
    frames: int
    block_errors: int
    bit_errors: int
    bler: float
    ber: float
    avg_iterations: float
    avg_max_iterations: float
    ci_low: float
    ci_high: float
    avg_converged: float = 0.0

    @classmethod
    def from_counts(cls, ebno_db, frames, block_errors, bit_errors, N,
                    sum_iterations, sum_max_iterations, sum_converged=0.0):
        if frames < 1:
            raise SimulationError("no frames simulated")
        low, high = wilson_interval(block_errors, frames)
        return cls(
            ebno_db=float(ebno_db),
            frames=int(frames),
            block_errors=int(block_errors),
            bit_errors=int(bit_errors),
            bler=float(block_errors) / frames,
            ber=float(bit_errors) / (frames * N),
            avg_iterations=float(sum_iterations) / frames,
            avg_max_iterations=float(sum_max_iterations) / frames,
            ci_low=low,
            ci_high=high,
            avg_converged=float(sum_converged) / frames)

    def csv_row(self):
        return ['{:.4f}'.format(self.ebno_db),
                str(self.frames),
                str(self.block_errors),
                str(self.bit_errors),
                '{:.5e}'.format(self.bler),
                '{:.5e}'.format(self.ber),
                '{:.4f}'.format(self.avg_iterations),
                '{:.4f}'.format(self.avg_max_iterations),
                '{:.5e}'.format(self.ci_low),
                '{:.5e}'.format(self.ci_high)]


def wilson_interval(errors, frames, confidence=0.95):
    if frames <= 0:
        return 0.0, 1.0
    z = scipy.stats.norm.ppf(0.5 + confidence / 2.0)
    p = float(errors) / frames
    denom = 1.0 + z * z / frames
    center = (p + z * z / (2.0 * frames)) / denom
    half = z / denom * math.sqrt(p * (1.0 - p) / frames + z * z / (4.0 * frames * frames))
    return max(0.0, center - half), min(1.0, center + half)


FrameResult = collections.namedtuple(
    'FrameResult', ['block_error', 'bit_errors', 'avg_iterations', 'max_iterations', 'converged'])


class FrameSimulator(object):
    """Everything needed to simulate frames of one (RunConfig, Eb/N0) point."""

    def __init__(self, cfg, ebno_db):
        self.cfg = cfg
        self.code = load_standard_code(cfg.code)
        self.broken = make_decoding_matrix(self.code.H, cfg.break_method, parse_break_params(cfg.break_params))
        if cfg.noiseless:
            self.params = channel.ChannelParams(ebno_db, self.code.rate, sigma=_noiseless_sigma)
        else:
            self.params = channel.ChannelParams(ebno_db, self.code.rate)

        dcfg = cfg.decoder_cfg
        if cfg.decoder == 'aed':
            L = cfg.ensemble or self.code.Z
            if L > self.code.Z:
                raise ConfigError("ensemble size L={} exceeds Z={} quasi-cyclic shifts".format(L, self.code.Z))
            self.ensemble = EnsembleConfig.quasi_cyclic(self.code, self.broken.H, dcfg, L)
        elif cfg.decoder in ('bp', 'layered'):
            self.ensemble = EnsembleConfig([autom.identity(self.code.N)], dcfg, self.broken.H, self.code.H)
        else:
            if not 1 <= cfg.ensemble_s < 16:
                raise ConfigError("SBP with S={} is not feasible".format(cfg.ensemble_s))
            self.ensemble = None
        qcaed.log.debug("Frame simulator for {} at {}: {}".format(self.code, self.params, self.broken))

    def transmitted(self, data_rng):
        if self.cfg.payload == 'random_encoded':
            return self.code.encode(data_rng.integers(0, 2, self.code.K, dtype=np.uint8))
        return np.zeros(self.code.N, dtype=np.uint8)

    def decode(self, y, lch):
        if self.ensemble is not None:
            return aed_decode(self.ensemble, y, lch)
        cfg = self.cfg
        return sbp_decode(
            self.code.H, lch, cfg.ensemble_s,
            sat=cfg.sbp_sat or None,
            cfg=cfg.decoder_cfg,
            stop_after=cfg.sbp_stop_after,
            y=y)

    def frame(self, k):
        data_rng, noise_rng = channel.frame_rngs(self.cfg.seed, k)
        c = self.transmitted(data_rng)
        y = channel.transmit(channel.modulate(c), self.params, noise_rng)
        res = self.decode(y, channel.llr(y, self.params))
        errors = int(np.count_nonzero(res.selected.hard_bits != c))
        return FrameResult(errors > 0, errors, res.avg_iterations, res.max_iterations, res.converged_count)

    def frames(self, start, count):
        return [self.frame(k) for k in range(start, start + count)]


_worker_sim = None


def _init_worker(cfg, ebno_db):
    global _worker_sim
    _worker_sim = FrameSimulator(cfg, ebno_db)


def _worker_frames(start, count):
    return _worker_sim.frames(start, count)


def _chunks(cfg):
    start = 0
    while start < cfg.max_frames:
        count = min(cfg.chunk, cfg.max_frames - start)
        yield start, count
        start += count


def _chunk_results(cfg, ebno_db):
    """Frame results in frame order, computed chunk by chunk."""
    if cfg.workers <= 1:
        sim = FrameSimulator(cfg, ebno_db)
        for start, count in _chunks(cfg):
            yield sim.frames(start, count)
        return

    # fail early on configuration errors before starting workers
    FrameSimulator(cfg, ebno_db)
    with concurrent.futures.ProcessPoolExecutor(
            max_workers=cfg.workers,
            initializer=_init_worker,
            initargs=(cfg, ebno_db)) as pool:
        chunks = _chunks(cfg)
        pending = collections.deque()
        try:
            for start, count in chunks:
                pending.append(pool.submit(_worker_frames, start, count))
                if len(pending) >= 2 * cfg.workers:
                    yield pending.popleft().result()
            while pending:
                yield pending.popleft().result()
        finally:
            for fut in pending:
                fut.cancel()


def run_point(cfg, ebno_db):
    """Simulate until min_block_errors block errors or max_frames frames."""
    N = load_standard_code(cfg.code).N
    frames = block_errors = bit_errors = 0
    sum_it = sum_max = sum_conv = 0.0
    done = False
    for chunk in _chunk_results(cfg, ebno_db):
        for r in chunk:
            frames += 1
            block_errors += r.block_error
            bit_errors += r.bit_errors
            sum_it += r.avg_iterations
            sum_max += r.max_iterations
            sum_conv += r.converged
            if block_errors >= cfg.min_block_errors or frames >= cfg.max_frames:
                done = True
                break
        if done:
            break
    res = PointResult.from_counts(ebno_db, frames, block_errors, bit_errors, N, sum_it, sum_max, sum_conv)
    qcaed.log.info("{} {} at {:.2f} dB: {} frames, {} errors, BLER {:.3e}, avg it {:.2f}, avg max it {:.2f}".format(
        cfg.code, cfg.decoder, ebno_db, res.frames, res.block_errors, res.bler,
        res.avg_iterations, res.avg_max_iterations))
    return res


def _cached_point(session, cfg, key, ebno_db):
    row = session.query(qcaed.db.SimPointTable).filter_by(config_key=key, ebno_db=float(ebno_db)).first()
    if row is None:
        return None
    if row.max_frames != cfg.max_frames or row.min_block_errors != cfg.min_block_errors:
        qcaed.log.debug("Cached point {} has another frame budget, ignoring".format(row))
        return None
    N = load_standard_code(cfg.code).N
    qcaed.log.info("Using cached result {}".format(row))
    return PointResult.from_counts(
        row.ebno_db, row.frames, row.block_errors, row.bit_errors, N,
        row.sum_iterations, row.sum_max_iterations, row.sum_converged)


def _store_point(session, cfg, key, res):
    row = session.query(qcaed.db.SimPointTable).filter_by(config_key=key, ebno_db=res.ebno_db).first()
    data = dict(
        config_key=key,
        code=cfg.code,
        decoder=cfg.decoder,
        ebno_db=res.ebno_db,
        max_frames=cfg.max_frames,
        min_block_errors=cfg.min_block_errors,
        frames=res.frames,
        block_errors=res.block_errors,
        bit_errors=res.bit_errors,
        sum_iterations=res.avg_iterations * res.frames,
        sum_max_iterations=res.avg_max_iterations * res.frames,
        sum_converged=res.avg_converged * res.frames,
        updated=datetime.datetime.now(datetime.timezone.utc))
    if row is None:
        session.add(qcaed.db.SimPointTable(**data))
    else:
        row.update(**data)
    try:
        session.commit()
    except sqlalchemy.exc.DBAPIError as e:
        qcaed.log.warning("Failed to store result for {:.2f} dB: {}".format(res.ebno_db, e))
        session.rollback()


def run_sweep(cfg, session=None):
    if not cfg.ebno:
        raise ConfigError("Eb/N0 grid is empty")
    key = cfg.cache_key()
    results = []
    for ebno_db in cfg.ebno:
        res = _cached_point(session, cfg, key, ebno_db) if session is not None else None
        if res is None:
            res = run_point(cfg, ebno_db)
            if session is not None:
                _store_point(session, cfg, key, res)
        results.append(res)
    return results


def write_csv(results, destination):
    """Write results to a path or an open text stream."""
    if isinstance(destination, str):
        try:
            with open(destination, 'w', newline='') as f:
                return write_csv(results, f)
        except (IOError, OSError) as e:
            raise SimulationError("cannot write {}: {}".format(destination, e))
    writer = csv.writer(destination, lineterminator='\n')
    writer.writerow(csv_header)
    for res in results:
        writer.writerow(res.csv_row())


def read_csv(source):
    if isinstance(source, str) and '\n' not in source:
        with open(source, 'r', newline='') as f:
            return read_csv(f)
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.DictReader(source)
    if reader.fieldnames != csv_header:
        raise SimulationError("unexpected CSV header {}".format(reader.fieldnames))
    out = []
    for row in reader:
        out.append(PointResult(
            ebno_db=float(row['ebno_db']),
            frames=int(row['frames']),
            block_errors=int(row['block_errors']),
            bit_errors=int(row['bit_errors']),
            bler=float(row['bler']),
            ber=float(row['ber']),
            avg_iterations=float(row['avg_iter']),
            avg_max_iterations=float(row['avg_max_iter']),
            ci_low=float(row['ci_low']),
            ci_high=float(row['ci_high'])))
    return out
