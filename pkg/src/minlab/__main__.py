import argparse
import json
import logging
import sys
import numpy as np
import sympy

from .classify import (vc_min, witness_chain, verify_chain, ChainWitness, PreconditionError,
    GOLDEN_CORPUS, random_descriptor, classify_corpus, summand_transfer_check, dp_min_structural,
    dp_min_lattice, upwardly_coherent, vc_min_structural)
from .config import RunConfig, ConfigError
from .directed import (read_family, is_directed, convex_order, count_components, exhaustive_minimum,
    random_directed_family, dense_codense_demo, FamilyError)
from .lrparser import ParsingError
from .oracle import cross_check_all, OracleBoundError
from .ordered import (make_model, classify_ordered, dpn_witnesses, field_root_verdict, RationalField,
    RealClosedStub, OrderedModelError)
from .ppcalc import parse_subgroup, SubgroupSyntaxError
from .report import render_verdict, verdict_payload, render_corpus, render_oracle, document, dumps
from .szmielew import parse_descriptor, direct_sum, DescriptorError
from .valued import exhaustive_greedy, random_greedy, quasi_verdict, convex_verdict, ParameterError, PrecisionError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2

_input_errors = (ParsingError, DescriptorError, PreconditionError, ConfigError, OracleBoundError,
    FamilyError, OrderedModelError, ParameterError, PrecisionError, SubgroupSyntaxError, OSError, ValueError)

def _emit(args, config, command, payload, text):
    if config.format == 'json':
        print(dumps(document(command, payload, config)))
    else:
        print(text, end='' if text.endswith('\n') else '\n')

def _verdict_ok(v):
    return v.route_agreement and (v.check is None or v.check.ok)

def cmd_classify(args, config):
    ds = [parse_descriptor(text, filename='<argument %d>' % i) for i, text in enumerate(args.descriptors, 1)]
    verdicts = classify_corpus(ds, config)
    _emit(args, config, 'classify', [verdict_payload(v) for v in verdicts],
        '\n'.join(render_verdict(v) for v in verdicts))
    return EXIT_OK if all(_verdict_ok(v) for v in verdicts) else EXIT_VIOLATION

def cmd_witness(args, config):
    d = parse_descriptor(args.descriptor, filename='<argument>')
    v = vc_min(d, config)
    if args.require_chain and not isinstance(v.evidence, ChainWitness):
        raise PreconditionError('%s is not VC-minimal, no generating chain exists' % d)
    _emit(args, config, 'witness', verdict_payload(v), render_verdict(v))
    return EXIT_OK if _verdict_ok(v) else EXIT_VIOLATION

def cmd_verify_chain(args, config):
    if args.report:
        with open(args.report, 'r') as fin:
            doc = json.load(fin)
        result = doc['result']
        entries = result if isinstance(result, list) else [result]
        checks = []
        for entry in entries:
            if entry['evidence'].get('kind') != 'chain':
                continue
            d = parse_descriptor(entry['descriptor'])
            chain = tuple(parse_subgroup(d, text) for text in entry['evidence']['chain'])
            w = ChainWitness(chain, (config.k_max, config.m_max), entry['evidence']['depth'])
            checks.append((d, verify_chain(d, w, config.k_max, config.m_max)))
    else:
        d = parse_descriptor(args.descriptor, filename='<argument>')
        w = witness_chain(d, config.depth, (config.k_max, config.m_max))
        if args.drop is not None:
            w = ChainWitness(w.chain[:args.drop] + w.chain[args.drop + 1:], w.coverage_bound, w.depth)
        checks = [(d, verify_chain(d, w, config.k_max, config.m_max))]

    payload = [dict(descriptor=str(d), ok=c.ok, failing_cell=c.failing_cell, failing_pair=c.failing_pair,
        message=c.message) for d, c in checks]
    text = '\n'.join('%s: %s' % (d, 'verified up to k<=%d, m<=%d' % (config.k_max, config.m_max) if c.ok else c.message)
        for d, c in checks)
    _emit(args, config, 'verify-chain', payload, text or 'no chain witnesses found')
    return EXIT_OK if all(c.ok for _, c in checks) else EXIT_VIOLATION

def cmd_oracle_diff(args, config):
    k_max = args.k_max or 12
    m_max = args.m_max or 12
    groups, mismatches = cross_check_all(args.max_order, k_max, m_max, config.workers, config.oracle_bound)
    payload = dict(groups=groups, max_order=args.max_order, k_max=k_max, m_max=m_max,
        mismatches=[str(mm) for mm in mismatches])
    _emit(args, config, 'oracle-diff', payload, render_oracle(groups, mismatches, args.max_order, k_max, m_max))
    return EXIT_OK if not mismatches else EXIT_VIOLATION

def _check_family(f, exhaustive, workers):
    directed, pair = is_directed(f)
    res = dict(points=len(f.universe), members=len(f.members), directed=directed)
    if not directed:
        res['violating_pair'] = [sorted(pair[0]), sorted(pair[1])]
    else:
        order = convex_order(f)
        res['order'] = list(order.points)
        res['max_components'] = max((count_components(order, m) for m in f.members), default=0)
    if exhaustive:
        res['exhaustive_minimum'] = exhaustive_minimum(f, workers).best
    return res

def cmd_directed(args, config):
    if args.demo:
        counts = dense_codense_demo(args.points or 20)
        text = '\n'.join('%-16s %d' % item for item in counts.items())
        _emit(args, config, 'directed', counts, text)
        return EXIT_OK if max(counts.values()) <= 2 else EXIT_VIOLATION

    if args.random:
        rng = np.random.default_rng(config.seed)
        results = [_check_family(random_directed_family(rng, args.points or 1000, args.members or 2000), False, 1)
            for _ in range(args.random)]
    else:
        if not args.file:
            raise FamilyError('a family file, --random or --demo is required')
        with open(args.file, 'r') as fin:
            results = [_check_family(read_family(fin, args.file), args.exhaustive, config.workers)]

    bad = [r for r in results if not r['directed'] or r['max_components'] != 1]
    lines = []
    for r in results if not args.random else []:
        if r['directed']:
            lines.append('order: %s' % ' '.join(map(str, r['order'])))
            lines.append('largest member component count: %d' % r['max_components'])
        else:
            lines.append('not directed: %s and %s overlap' % tuple(r['violating_pair']))
        if 'exhaustive_minimum' in r:
            lines.append('least achievable component bound: %d' % r['exhaustive_minimum'])
    if args.random:
        lines.append('%d random families, %d with a member split into several pieces' % (len(results), len(bad)))
    _emit(args, config, 'directed', results if not args.random else dict(families=len(results), failures=len(bad)),
        '\n'.join(lines))
    return EXIT_OK if not bad else EXIT_VIOLATION

def cmd_ordered(args, config):
    if args.field:
        fld = RationalField() if args.field == 'rationals' else RealClosedStub()
        samples = [sympy.Rational(s) for s in args.samples.split(',')]
        v = field_root_verdict(fld, samples, args.n_max)
        text = '%s: %s' % (fld.name, v.status)
        if v.counterexample:
            text += ' (%s has no %d-th root)' % v.counterexample
        _emit(args, config, 'ordered', dict(field=fld.name, status=v.status,
            counterexample=None if v.counterexample is None else [str(c) for c in v.counterexample]), text)
        return EXIT_OK

    primes = [int(p) for p in args.primes.split(',')] if args.primes else []
    model = make_model(args.model, primes, args.rank)
    verdict = classify_ordered(model.profile())
    lines = ['%s: o-minimal=%s vc-minimal=%s convexly orderable=%s' % (model.name, verdict.o_minimal,
        verdict.vc_minimal, verdict.convexly_orderable)]
    if verdict.annotation:
        lines.append('note: %s' % verdict.annotation)
    payload = dict(model=model.name, verdict=verdict.__dict__)
    ok = True
    if verdict.witness_prime is not None:
        p = args.prime or verdict.witness_prime
        lines.append('not convexly orderable: %d does not divide every element' % p)
        rep = dpn_witnesses(model, p, list(range(1, args.n_max + 1)), args.bound)
        for n in rep.members:
            elems = rep.elements(n)
            lines.append('D_{%d,%d}: %s%s cofinal=%s' % (p, n, ', '.join(map(str, elems[:8])),
                ', ...' if len(elems) > 8 else '', rep.cofinal[n]))
        lines.append('pairwise disjoint: %s' % rep.disjoint)
        ok = rep.disjoint and all(rep.cofinal.values())
        payload['dpn'] = dict(p=p, bound=args.bound, disjoint=rep.disjoint, cofinal=rep.cofinal,
            windows=rep.windows, sizes={n: len(idx) for n, idx in rep.members.items()})
    _emit(args, config, 'ordered', payload, '\n'.join(lines))
    return EXIT_OK if ok else EXIT_VIOLATION

def cmd_valued(args, config):
    if args.value_group:
        primes = [int(p) for p in args.primes.split(',')] if args.primes else []
        profile = make_model(args.value_group, primes).profile()
        verdicts = [quasi_verdict(profile, args.label), convex_verdict(profile, args.label)]
        _emit(args, config, 'valued', [v.__dict__ for v in verdicts],
            '\n'.join('%s: %s%s' % (v.label, v.status, ' (prime %d)' % v.prime if v.prime else '') for v in verdicts))
        return EXIT_OK

    if args.mode == 'exhaustive':
        summary = exhaustive_greedy(args.p, args.gamma1, args.n, config.workers, config.precision)
    else:
        summary = random_greedy(args.p, args.gamma1, args.n, args.trials, np.random.default_rng(config.seed),
            config.precision)
    payload = dict(p=args.p, gamma1=args.gamma1, n=args.n, mode=args.mode, orders=summary.orders,
        min_components=summary.min_components, failures=[list(f) for f in summary.failures[:20]])
    text = '%d orders tried, minimum component count %s, %s' % (summary.orders, summary.min_components,
        'all conditions verified' if summary.ok else '%d FAILURES' % len(summary.failures))
    _emit(args, config, 'valued', payload, text)
    return EXIT_OK if summary.ok else EXIT_VIOLATION

def cmd_report(args, config):
    rows = []
    ds = [parse_descriptor(e.text) for e in GOLDEN_CORPUS]
    for entry, v in zip(GOLDEN_CORPUS, classify_corpus(ds, config)):
        rows.append(dict(name=entry.name, dp=v.dp_minimal, vc=v.vc_minimal,
            ok=_verdict_ok(v) and (v.dp_minimal, v.vc_minimal) == (entry.dp_minimal, entry.vc_minimal)))

    rng = np.random.default_rng(config.seed)
    randoms = [random_descriptor(rng) for _ in range(args.random)]
    for d in randoms:
        dp_l, _ = dp_min_lattice(d)
        coherent, _ = upwardly_coherent(d)
        dp_s, vc_s = dp_min_structural(d), vc_min_structural(d)
        rows.append(dict(name=str(d), dp=dp_s, vc=vc_s, ok=dp_s == dp_l and vc_s == (dp_l and coherent)))
    for a, b in zip(randoms[::2], randoms[1::2]):
        try:
            direct_sum(a, b)
        except DescriptorError:
            continue
        check = summand_transfer_check(a, b)
        rows.append(dict(name='%s | %s' % (a, b), dp='-', vc='-', ok=check.ok))

    _emit(args, config, 'report', rows, render_corpus(rows, config.seed))
    return EXIT_OK if all(r['ok'] for r in rows) else EXIT_VIOLATION

def _make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--kmax', dest='k_max', type=int, help='largest k of phi_{k,m} to verify')
    common.add_argument('--mmax', dest='m_max', type=int, help='largest m of phi_{k,m} to verify')
    common.add_argument('--depth', type=int, help='chain depth')
    common.add_argument('--precision', type=int, help='series precision')
    common.add_argument('--seed', type=int, help='random seed')
    common.add_argument('--workers', type=int, help='worker processes')
    common.add_argument('--format', choices=['text', 'json'], help='output format')
    common.add_argument('-v', '--verbose', action='store_true', default=False, help='log debug messages')

    opts = argparse.ArgumentParser(prog='minlab', description='Classifies abelian groups and checks convex orderability.')
    sub = opts.add_subparsers(dest='command')

    p = sub.add_parser('classify', parents=[common], help='decide dp-minimality and VC-minimality')
    p.add_argument('descriptors', nargs='+')
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser('witness', parents=[common], help='print the evidence for a verdict')
    p.add_argument('descriptor')
    p.add_argument('--require-chain', action='store_true', default=False)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser('verify-chain', parents=[common], help='verify a generating chain')
    p.add_argument('descriptor', nargs='?')
    p.add_argument('--report', help='JSON report whose chains are re-checked')
    p.add_argument('--drop', type=int, help='drop the chain element at this position first')
    p.set_defaults(func=cmd_verify_chain)

    p = sub.add_parser('oracle-diff', parents=[common], help='compare phi_{k,m} with brute force')
    p.add_argument('--max-order', type=int, default=256)
    p.set_defaults(func=cmd_oracle_diff)

    p = sub.add_parser('directed', parents=[common], help='build convex orders for set families')
    p.add_argument('file', nargs='?')
    p.add_argument('--random', type=int, default=0, help='check this many random directed families')
    p.add_argument('--points', type=int)
    p.add_argument('--members', type=int)
    p.add_argument('--exhaustive', action='store_true', default=False, help='search all orders (at most 8 points)')
    p.add_argument('--demo', action='store_true', default=False, help='the dense/codense two-part order')
    p.set_defaults(func=cmd_directed)

    p = sub.add_parser('ordered', parents=[common], help='ordered abelian groups and fields')
    p.add_argument('model', nargs='?', default='integers', choices=['integers', 'scaled-rationals', 'lex-power'])
    p.add_argument('--primes', help='comma separated primes inverted by scaled-rationals')
    p.add_argument('--rank', type=int, default=2)
    p.add_argument('--prime', type=int)
    p.add_argument('--n-max', type=int, default=3)
    p.add_argument('--bound', type=int, default=1000)
    p.add_argument('--field', choices=['rationals', 'real-closed'])
    p.add_argument('--samples', default='2')
    p.set_defaults(func=cmd_ordered)

    p = sub.add_parser('valued', parents=[common], help='run the greedy refutation')
    p.add_argument('--p', type=int, default=2)
    p.add_argument('--gamma1', type=int, default=1)
    p.add_argument('--n', type=int, default=1)
    p.add_argument('--mode', choices=['exhaustive', 'random'], default='exhaustive')
    p.add_argument('--trials', type=int, default=1000)
    p.add_argument('--value-group', choices=['integers', 'scaled-rationals', 'lex-power'],
        help='report verdicts for a field with this value group instead')
    p.add_argument('--primes', help='comma separated primes inverted by scaled-rationals')
    p.add_argument('--label', default='K', help='name of the valued field')
    p.set_defaults(func=cmd_valued)

    p = sub.add_parser('report', parents=[common], help='run the golden corpus')
    p.add_argument('--random', type=int, default=0, help='also check this many random descriptors')
    p.set_defaults(func=cmd_report)

    return opts

def _main(argv=None):
    opts = _make_parser()
    argv = sys.argv[1:] if argv is None else argv
    if not argv:
        opts.print_help()
        return EXIT_OK

    args = opts.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(name)s: %(levelname)s: %(message)s', stream=sys.stderr)

    try:
        config = RunConfig.from_args(args)
        return args.func(args, config)
    except ParsingError as e:
        print(e.format() if hasattr(e, 'format') else e, file=sys.stderr)
        return EXIT_INPUT
    except _input_errors as e:
        print('error: %s' % e, file=sys.stderr)
        return EXIT_INPUT

if __name__ == '__main__':
    sys.exit(_main())
