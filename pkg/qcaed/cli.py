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

import argparse
import glob
import os
import sys

import qcaed
from qcaed import gf2, sim
from qcaed.errors import ConfigError, QcAedError
from qcaed.qccode import list_standard_codes, load_standard_code
from qcaed.symbreak import equivariant_shifts, make_decoding_matrix, methods as break_methods

# simulate flag -> RunConfig field
simulate_flags = {
    'code': 'code',
    'decoder': 'decoder',
    'break_method': 'break_method',
    'break_params': 'break_params',
    'ensemble': 'ensemble',
    'ensemble_s': 'ensemble_s',
    'iters': 'max_iter',
    'schedule': 'schedule',
    'ebno': 'ebno',
    'seed': 'seed',
    'min_errors': 'min_block_errors',
    'max_frames': 'max_frames',
    'payload': 'payload',
    'workers': 'workers',
    'llr_clip': 'llr_clip',
    'sbp_stop_after': 'sbp_stop_after',
}


def default_workers():
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _ebno_arg(text):
    try:
        return sim.parse_ebno_grid(text)
    except ConfigError as e:
        raise argparse.ArgumentTypeError(str(e))


def _add_code_arg(p, required=True):
    p.add_argument('--code', required=required, choices=list_standard_codes(),
                   help="standard code name")


def build_parser():
    parser = argparse.ArgumentParser(
        prog='qcaed',
        description="Automorphism ensemble decoding of quasi-cyclic LDPC codes.")
    parser.add_argument('--loglevel', default='info', help="log level (default: info)")
    parser.add_argument('--debug', action='store_true', help="enable debug logging")
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    p = sub.add_parser('simulate', help="run a BLER/BER sweep and write CSV")
    p.add_argument('--config', help="run configuration file (key=value)")
    p.add_argument('--code', help="standard code name: {}".format(', '.join(list_standard_codes())))
    p.add_argument('--decoder', choices=sim.decoder_kinds)
    p.add_argument('--break', dest='break_method', choices=break_methods)
    p.add_argument('--break-params', dest='break_params', help="e.g. idx=0, src=0;dst=1 or checks=1,5,9")
    p.add_argument('--ensemble', type=int, help="AED ensemble size L (default: Z)")
    p.add_argument('--ensemble-S', dest='ensemble_s', type=int, help="SBP saturated positions S")
    p.add_argument('--iters', type=int, help="BP iterations per decoder")
    p.add_argument('--schedule', choices=('flooding', 'layered'))
    p.add_argument('--ebno', type=_ebno_arg, help="start:step:stop or a comma list, dB")
    p.add_argument('--seed', type=int)
    p.add_argument('--min-errors', dest='min_errors', type=int)
    p.add_argument('--max-frames', dest='max_frames', type=int)
    p.add_argument('--payload', choices=sim.payloads)
    p.add_argument('--llr-clip', dest='llr_clip', type=float)
    p.add_argument('--sbp-stop-after', dest='sbp_stop_after', type=int)
    p.add_argument('--workers', type=int, help="parallel frame workers (default: available CPUs)")
    p.add_argument('--db', help="sqlalchemy URL of the result cache")
    p.add_argument('--out', default='-', help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('matrix', help="inspect and transform parity-check matrices")
    p.add_argument('action', choices=('info', 'rank', 'break', 'equivariance', 'export'))
    _add_code_arg(p, required=False)
    p.add_argument('--alist', help="read the matrix from an alist file (rank only)")
    p.add_argument('--break', '--method', dest='break_method', choices=break_methods, default=None)
    p.add_argument('--break-params', dest='break_params', default='')
    p.add_argument('--idx', type=int, help="check removed by the undercomplete method")
    p.add_argument('--out', default='-', help="alist output path (default: stdout)")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser('recipe', help="run every recipes/NAME_*.conf")
    p.add_argument('name', nargs='?', help="recipe prefix, e.g. breaking")
    p.add_argument('--list', action='store_true', help="list available recipes")
    p.add_argument('--dir', default=None, help="recipe directory (default: ./recipes)")
    p.add_argument('--out-dir', default='results', help="CSV output directory")
    p.add_argument('--workers', type=int)
    p.add_argument('--max-frames', dest='max_frames', type=int, help="override the frame budget")
    p.add_argument('--db', help="sqlalchemy URL of the result cache")
    p.set_defaults(func=cmd_recipe)
    return parser


def _run_and_write(cfg, out):
    session = qcaed.get_session()
    try:
        results = sim.run_sweep(cfg, session)
    finally:
        qcaed.close_session(session)
    if out == '-':
        sim.write_csv(results, sys.stdout)
    else:
        sim.write_csv(results, out)
    return results


def cmd_simulate(args, parser):
    values = {}
    if args.config:
        values = sim.read_run_config_values(args.config)
    for flag, field in simulate_flags.items():
        value = getattr(args, flag)
        if value is not None:
            values[field] = value
    if not values.get('code'):
        parser.error("--code is required (on the command line or in --config)")
    if values['code'] not in list_standard_codes():
        parser.error("unknown code '{}', known codes: {}".format(values['code'], ', '.join(list_standard_codes())))
    values.setdefault('workers', default_workers())
    cfg = sim.make_run_config(values)
    qcaed.log.info("Simulating {}".format(cfg))
    _run_and_write(cfg, args.out)
    return 0


def _write_matrix(H, out):
    if out == '-':
        sys.stdout.write(gf2.to_alist(H))
    else:
        gf2.write_alist(H, out)


def cmd_matrix(args, parser):
    if args.action == 'rank' and args.alist:
        H = gf2.read_alist(args.alist)
        print("rank={}".format(gf2.rank(H)))
        return 0
    if not args.code:
        parser.error("matrix {} needs --code".format(args.action))
    code = load_standard_code(args.code)

    if args.action == 'info':
        print("N={} K={} Z={} rank={}".format(code.N, code.K, code.Z, code.rank))
    elif args.action == 'rank':
        print("rank={}".format(code.rank))
    elif args.action == 'export':
        _write_matrix(code.H, args.out)
    else:
        method = args.break_method
        if method is None:
            method = 'undercomplete' if args.action == 'break' else 'none'
        params = sim.parse_break_params(args.break_params)
        if args.idx is not None:
            params['idx'] = args.idx
        broken = make_decoding_matrix(code.H, method, params)
        if args.action == 'break':
            _write_matrix(broken.H, args.out)
        else:
            shifts = equivariant_shifts(broken, code.Z)
            for d in range(code.Z):
                print("d={} {}".format(d, 'equivariant' if d in shifts else 'broken'))
            print("equivariant {}/{}: {}".format(len(shifts), code.Z, ' '.join(str(d) for d in shifts)))
    return 0


def recipe_dir(path=None):
    if path:
        return path
    here = os.path.join(os.getcwd(), 'recipes')
    if os.path.isdir(here):
        return here
    return os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'recipes')


def list_recipes(path=None):
    names = set()
    for fn in glob.glob(os.path.join(recipe_dir(path), '*.conf')):
        names.add(os.path.basename(fn).split('_', 1)[0])
    return sorted(names)


def cmd_recipe(args, parser):
    if args.list or not args.name:
        for name in list_recipes(args.dir):
            print(name)
        return 0
    files = sorted(glob.glob(os.path.join(recipe_dir(args.dir), '{}_*.conf'.format(args.name))))
    if not files:
        parser.error("no recipe named '{}', known: {}".format(args.name, ', '.join(list_recipes(args.dir))))
    os.makedirs(args.out_dir, exist_ok=True)
    overrides = {'workers': args.workers or default_workers()}
    if args.max_frames:
        overrides['max_frames'] = args.max_frames
    for fn in files:
        cfg = sim.load_run_config(fn, overrides)
        out = os.path.join(args.out_dir, os.path.splitext(os.path.basename(fn))[0] + '.csv')
        qcaed.log.info("Running recipe {} -> {}".format(fn, out))
        _run_and_write(cfg, out)
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    qcaed.init(loglevel=args.loglevel, debug=args.debug, db_url=getattr(args, 'db', None))
    try:
        return args.func(args, parser)
    except ConfigError as e:
        parser.print_usage(sys.stderr)
        print("{}: error: {}".format(parser.prog, e), file=sys.stderr)
        return 2
    except (QcAedError, IOError, OSError) as e:
        qcaed.log.error("{}".format(e))
        return 1


if __name__ == '__main__':
    sys.exit(main())
