"""Command-line front end.

    python -m asymlam reduce --calculus prob-cbv --relation llfull TERM
    python -m asymlam check obs-diamond --calculus prob-cbv --gen size=8
    python -m asymlam bohm --depth 3 TERM

Exit codes: 0 success, 1 a check failed, 2 parse error, 3 bad
configuration (including operators given to ``bohm``), 4 the entry budget
of a multi-distribution was exceeded.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from asymlam import bohm, effects, prob
from asymlam.generate import corpus, parse_gen_spec
from asymlam.qars import (EXACT, INF, LOWER_BOUND, NO_LUB, LimitApprox,
                          MonotonicityError, Policy, Mode, Report,
                          StateBudgetExceeded, check_asymptotic_completeness,
                          check_monotonicity, check_neutrality,
                          check_obs_diamond, check_rd_diamond, Difference,
                          iterate, obs_nf, obs_normal, obs_value, rational)
from asymlam.reduction import (BETA_FULL, BETAV_FULL, HEAD_BETA, LEFT_BETAV,
                               RIGHT_BETAV, WEAK_BETAV, Ctx, Rule)
from asymlam.strategy import check_factorization, unbiased
from asymlam.syntax import (DEFAULT_OPERATORS, PURE, Operators, ParseError,
                            parse, pretty)
from asymlam.terms import Term

__all__ = ['ConfigError', 'RunConfig', 'cmd_reduce', 'cmd_check',
           'cmd_bohm', 'main', 'CALCULI', 'RELATIONS', 'CHECKS']

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CONFIG, EXIT_BUDGET = 0, 1, 2, 3, 4

CALCULI = ('pure-cbn', 'pure-cbv', 'prob-cbn', 'prob-cbv', 'payoff',
           'output')
RELATIONS = ('full', 'surface', 'left', 'right', 'u', 'pd', 'll', 'llfull',
             'pw')
CHECKS = ('rd-diamond', 'obs-diamond', 'neutrality', 'monotonicity',
          'factorization', 'completeness', 'mass')


class ConfigError(ValueError):
    """An inconsistent combination of options."""


@dataclass(frozen=True)
class RunConfig:
    calculus: str = 'pure-cbn'
    relation: str | None = None
    policy: str = 'leftmost'
    fuel: int = 20
    seed: int | None = None
    obs: str | None = None
    format: str = 'text'
    surface: str | None = None
    depth: int = 3

    def scheduler(self):
        try:
            mode = Mode(self.policy)
        except ValueError:
            raise ConfigError('unknown policy %r' % self.policy) from None
        seed = self.seed
        if mode is Mode.RANDOM and seed is None:
            seed = 0
        return Policy(mode, seed, _surface(self.surface))


def _surface(name):
    if name is None:
        return None
    try:
        ctx = Ctx(name)
    except ValueError:
        raise ConfigError('unknown surface %r' % name) from None
    if ctx not in (Ctx.WEAK, Ctx.LEFT, Ctx.RIGHT):
        raise ConfigError('surface must be weak, left or right')
    return ctx


# ----------------------------------------------------------------------------
# Calculi: how to build states, relations and observations

_FLAVOR = {'prob-cbv': prob.CBV, 'prob-cbn': prob.CBN}
_EFFECT_CTX = {'full': Ctx.FULL, 'surface': Ctx.WEAK, 'left': Ctx.LEFT,
               'right': Ctx.RIGHT}
_DEFAULT_RELATION = {'pure-cbn': 'u', 'pure-cbv': 'u', 'prob-cbn': 'llfull',
                     'prob-cbv': 'llfull', 'payoff': 'surface',
                     'output': 'surface'}
_DEFAULT_OBS = {'pure-cbn': 'nf', 'pure-cbv': 'nf', 'prob-cbn': 'pn',
                'prob-cbv': 'pn', 'payoff': 'payoff', 'output': 'buffer'}


def operators_for(calculus):
    if calculus.startswith('pure'):
        return PURE
    if calculus.startswith('prob'):
        return Operators(oplus=True, tick=False, alphabet='')
    if calculus == 'payoff':
        return Operators(oplus=False, tick=True, alphabet='')
    return Operators(oplus=False, tick=False)


def _check_calculus(calculus):
    if calculus not in CALCULI:
        raise ConfigError('unknown calculus %r' % calculus)


def make_state(calculus, t):
    if calculus in _FLAVOR:
        return prob.MultiDist.point(t)
    if calculus == 'payoff':
        return effects.PayoffState(0, t)
    if calculus == 'output':
        return effects.OutputState('', t)
    return t


def make_relation(calculus, name, surface=None):
    """The relation called ``name`` in ``calculus``."""
    _check_calculus(calculus)
    name = name or _DEFAULT_RELATION[calculus]
    if calculus == 'pure-cbn':
        table = {'full': BETA_FULL, 'surface': HEAD_BETA}
        if name in ('u', 'pd'):
            return unbiased(Rule.BETA)
    elif calculus == 'pure-cbv':
        table = {'full': BETAV_FULL, 'surface': WEAK_BETAV,
                 'left': LEFT_BETAV, 'right': RIGHT_BETAV}
        if name in ('u', 'pd'):
            return unbiased(Rule.BETAV, surface)
    elif calculus in _FLAVOR:
        fl = _FLAVOR[calculus]
        table = {'full': prob.prob_relation(fl),
                 'surface': prob.surface_relation(fl),
                 'll': prob.ll_relation(fl, prob.LiftMode.LIFT),
                 'llfull': prob.ll_relation(fl)}
    else:
        kind = (effects.payoff_relation if calculus == 'payoff'
                else effects.output_relation)
        table = {k: kind(ctx) for k, ctx in _EFFECT_CTX.items()}
        if calculus == 'payoff':
            table['pw'] = effects.ParallelWeak()
    if name not in table:
        raise ConfigError('relation %r is not available for %s'
                          % (name, calculus))
    return table[name]


def internal_for(calculus, essential):
    """The internal steps complementing ``essential``."""
    if calculus in _FLAVOR:
        return prob.internal_relation(_FLAVOR[calculus])
    return Difference(make_relation(calculus, 'full'), essential)


def observations(calculus):
    """Name -> Observation for every observation shipped with
    ``calculus``."""
    _check_calculus(calculus)
    if calculus in _FLAVOR:
        fl = _FLAVOR[calculus]
        return {'N': prob.OBS_N(fl), 'pn': prob.OBS_PN(fl)}
    if calculus == 'payoff':
        return {'payoff': effects.OBS_PAYOFF}
    if calculus == 'output':
        return {'buffer': effects.OBS_BUFFER, 'length': effects.OBS_LENGTH}
    full = make_relation(calculus, 'full')
    out = {'n': obs_normal(full), 'nf': obs_nf(full)}
    if calculus == 'pure-cbv':
        out['v'] = obs_value()
    else:
        out['omega'] = bohm.OBS_OMEGA
    return out


def make_obs(calculus, name):
    table = observations(calculus)
    name = name or _DEFAULT_OBS[calculus]
    if name not in table:
        raise ConfigError('observation %r is not available for %s (use %s)'
                          % (name, calculus, ', '.join(sorted(table))))
    return table[name]


# ----------------------------------------------------------------------------
# Rendering

def jsonable(v):
    """A JSON-ready rendering of an observation value or state."""
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, Fraction):
        return rational(v)
    if v is INF:
        return 'inf'
    if v is NO_LUB:
        return 'no-lub'
    if isinstance(v, Term):
        return pretty(v)
    if isinstance(v, prob.SubDist):
        return v.to_dict()
    if isinstance(v, prob.MultiDist):
        return [{'w': rational(w), 'term': pretty(t)} for w, t in v.entries]
    if isinstance(v, effects.PayoffState):
        return {'counter': v.counter, 'term': pretty(v.term)}
    if isinstance(v, effects.OutputState):
        return {'buffer': v.buffer, 'term': pretty(v.term)}
    if isinstance(v, (bohm.Omega, bohm.Head)):
        return bohm.pnf_pretty(v)
    raise TypeError('cannot serialize %r' % (v,))


def _dump(obj):
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _limit(prefix, cpo, terminated):
    value = cpo.lub_chain(prefix)
    exact = terminated or cpo.is_maximal(value)
    return LimitApprox(value, len(prefix) - 1,
                       EXACT if exact else LOWER_BOUND)


# ----------------------------------------------------------------------------
# Commands

def run_reduce(config, src):
    """Run ``config`` on ``src``; returns the JSON-ready result."""
    cal = config.calculus
    _check_calculus(cal)
    rel = make_relation(cal, config.relation, _surface(config.surface))
    obs = make_obs(cal, config.obs)
    policy = config.scheduler()
    if config.relation == 'pd':
        policy = Policy(Mode.PARALLEL, None, policy.surface)
    if config.fuel < 0:
        raise ConfigError('fuel must be >= 0')
    t = parse(src, operators_for(cal))
    state = make_state(cal, t)
    try:
        if cal in _FLAVOR:
            trace = prob.llfull_run(state, _FLAVOR[cal], policy, config.fuel,
                                    relation=rel)
            states, terminated = trace.dists, trace.terminated
        else:
            _, states, terminated = iterate(state, rel, policy, config.fuel)
    except prob.FreezeError as exc:
        raise ConfigError(str(exc)) from None
    prefix = []
    for s in states:
        v = obs(s)
        if prefix and not obs.codomain.leq(prefix[-1], v):
            raise MonotonicityError('%s decreased along the run' % obs.name)
        prefix.append(v)
    lim = _limit(prefix, obs.codomain, terminated)
    if cal in _FLAVOR:
        out = trace.to_dict()
        for row, v in zip(out['steps'], prefix):
            row['obs'] = jsonable(v)
    else:
        out = {'steps': [{'i': i, 'state': jsonable(s), 'obs': jsonable(v)}
                         for i, (s, v) in enumerate(zip(states, prefix))],
               'status': 'terminated' if terminated else 'fuel-exhausted'}
    out.update(calculus=cal, relation=rel.name, obs=obs.name,
               limit={'value': jsonable(lim.value), 'depth': lim.depth,
                      'status': lim.status})
    return out


def _text_reduce(res, states_key='state'):
    lines = []
    for row in res['steps']:
        if 'dist' in row:
            state = '[%s]' % ', '.join('%s %s' % (e['w'], e['term'])
                                       for e in row['dist'])
        else:
            state = row[states_key]
            if isinstance(state, dict):
                state = '<%s : %s>' % (_text_value(
                    state.get('counter', state.get('buffer'))),
                    state['term'])
        lines.append('%3d  %s    %s=%s' % (row['i'], state, res['obs'],
                                           _text_value(row['obs'])))
    lim = res['limit']
    lines.append('%s after %d steps; limit %s (%s)'
                 % (res['status'], len(res['steps']) - 1,
                    _text_value(lim['value']), lim['status']))
    return '\n'.join(lines)


def _text_value(v):
    if v is None:
        return '_|_'
    if v == '':
        return '""'
    if isinstance(v, dict):
        return '{%s}' % ', '.join('%s: %s' % kv for kv in sorted(v.items()))
    return str(v)


def cmd_reduce(config, src, out=None):
    out = out or sys.stdout
    res = run_reduce(config, src)
    if config.format == 'json':
        out.write(_dump(res) + '\n')
    else:
        out.write(_text_reduce(res) + '\n')
    return EXIT_OK


def _corpus_terms(config, gen=None, file=None):
    cal = config.calculus
    if file is not None:
        ops = operators_for(cal)
        return [parse(line, ops) for line in file.read().splitlines()
                if line.strip() and not line.lstrip().startswith('#')]
    spec = parse_gen_spec(gen or '')
    return corpus(cal, spec['size'], spec['count'], spec['seed'])


def _mass_check(cal, states):
    rep = Report('mass', len(states))
    fl = _FLAVOR[cal]
    rels = [make_relation(cal, r) for r in ('full', 'surface', 'll',
                                             'llfull')]
    rels.append(prob.internal_relation(fl))
    steps = 0
    for m in states:
        for rel in rels:
            for n in rel.successors(m):
                steps += 1
                if n.mass() != m.mass():
                    rep.violation(m, '%s changed the mass to %s'
                                  % (rel.name, rational(n.mass())))
    rep.stats['steps'] = steps
    return rep


def _merge(name, reports, size):
    rep = Report(name, size)
    for r in reports:
        rep.violations.extend(r.violations)
        rep.inconclusive.extend(r.inconclusive)
        for k, v in r.stats.items():
            if isinstance(v, int):
                rep.stats[k] = rep.stats.get(k, 0) + v
    return rep


def run_check(name, config, terms):
    """Run check ``name`` on ``terms``; returns a :class:`Report`."""
    cal = config.calculus
    _check_calculus(cal)
    if name not in CHECKS:
        raise ConfigError('unknown check %r' % name)
    states = [make_state(cal, t) for t in terms]
    surf = _surface(config.surface)
    if name == 'mass':
        if cal not in _FLAVOR:
            raise ConfigError('the mass check applies to prob-* calculi')
        return _mass_check(cal, states)
    if name == 'monotonicity':
        rel = make_relation(cal, config.relation or 'full', surf)
        obs_list = ([make_obs(cal, config.obs)] if config.obs
                    else list(observations(cal).values()))
        return _merge('monotonicity',
                      [check_monotonicity(rel, o, states) for o in obs_list],
                      len(states))
    rel = make_relation(cal, config.relation, surf)
    if name == 'rd-diamond':
        return check_rd_diamond(rel, states)
    obs = make_obs(cal, config.obs)
    if name == 'obs-diamond':
        return check_obs_diamond(rel, obs, states)
    if name == 'neutrality':
        return check_neutrality(internal_for(cal, rel), obs, states)
    if name == 'factorization':
        if cal in _FLAVOR and (config.relation or 'llfull') == 'llfull':
            rel = make_relation(cal, 'll')
        internal = internal_for(cal, rel)
        big = make_relation(cal, 'full')
        return _merge('factorization',
                      [check_factorization(s, rel, internal, config.depth,
                                           big=big) for s in states],
                      len(states))
    big = make_relation(cal, 'full')
    reps = []
    for s in states:
        try:
            reps.append(check_asymptotic_completeness(s, big, rel, obs,
                                                      config.depth))
        except StateBudgetExceeded as exc:
            r = Report('completeness', 1)
            r.undecided(s, str(exc))
            reps.append(r)
    return _merge('asymptotic-completeness', reps, len(states))


def cmd_check(name, config, gen=None, file=None, allow_inconclusive=False,
              out=None):
    out = out or sys.stdout
    rep = run_check(name, config, _corpus_terms(config, gen, file))
    if config.format == 'json':
        out.write(rep.to_json() + '\n')
    else:
        out.write('%s on %d states: %s (%d violations, %d inconclusive)\n'
                  % (rep.check, rep.corpus_size, rep.status,
                     len(rep.violations), len(rep.inconclusive)))
        for v in rep.violations[:20]:
            out.write('  violation: %s: %s\n' % (v['state'], v['detail']))
        for v in rep.inconclusive[:20]:
            out.write('  inconclusive: %s: %s\n' % (v['state'], v['detail']))
    if rep.violations or (rep.inconclusive and not allow_inconclusive):
        return EXIT_FAIL
    return EXIT_OK


def cmd_bohm(src, depth, fmt='text', unicode=False, out=None):
    out = out or sys.stdout
    if depth < 0:
        raise ConfigError('depth must be >= 0')
    t = parse(src, DEFAULT_OPERATORS)
    try:
        chain = bohm.bt_approx(t, depth)
    except bohm.ImpureTermError as exc:
        raise ConfigError(str(exc)) from None
    if fmt == 'json':
        out.write(_dump({
            'depth': depth,
            'chain': [bohm.pnf_pretty(p) for p in chain],
            'trees': [bohm.pnf_tree(p) for p in chain]}) + '\n')
    else:
        for i, p in enumerate(chain):
            out.write('%3d  %s\n' % (i, bohm.pnf_pretty(p, unicode)))
    return EXIT_OK


# ----------------------------------------------------------------------------
# Argument parsing

def _source(args):
    if args.file is not None:
        with open(args.file, encoding='utf-8') as fh:
            return fh.read()
    if args.term is None:
        raise ConfigError('give a term or --file')
    return args.term


def build_parser():
    p = argparse.ArgumentParser(
        prog='asymlam',
        description='Reduce, observe and check lambda-calculus strategies.')
    sub = p.add_subparsers(dest='command', required=True)

    def common(sp, fuel=True):
        sp.add_argument('--calculus', default='pure-cbn', choices=CALCULI)
        sp.add_argument('--relation', choices=RELATIONS)
        sp.add_argument('--obs')
        sp.add_argument('--surface', choices=('weak', 'left', 'right'))
        sp.add_argument('--format', default='text', choices=('text', 'json'))
        sp.add_argument('--policy', default='leftmost',
                        choices=tuple(m.value for m in Mode))
        sp.add_argument('--seed', type=int)
        if fuel:
            sp.add_argument('--fuel', type=int, default=20)

    r = sub.add_parser('reduce', help='run a relation and observe it')
    common(r)
    r.add_argument('term', nargs='?')
    r.add_argument('--file')

    c = sub.add_parser('check', help='run a checker over a corpus')
    common(c, fuel=False)
    c.add_argument('check', choices=CHECKS)
    c.add_argument('--gen', help='size=N,count=N,seed=N')
    c.add_argument('--file', help='file with one term per line')
    c.add_argument('--depth', type=int, default=3)
    c.add_argument('--allow-inconclusive', action='store_true',
                   help='exit 0 when only inconclusive cases remain')

    b = sub.add_parser('bohm', help='Böhm-tree approximants')
    b.add_argument('term', nargs='?')
    b.add_argument('--file')
    b.add_argument('--depth', type=int, default=5)
    b.add_argument('--format', default='text', choices=('text', 'json'))
    b.add_argument('--unicode', action='store_true')
    return p


def _config(args):
    return RunConfig(calculus=args.calculus, relation=args.relation,
                     policy=args.policy, fuel=getattr(args, 'fuel', 20),
                     seed=args.seed, obs=args.obs, format=args.format,
                     surface=args.surface, depth=getattr(args, 'depth', 3))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == 'reduce':
            return cmd_reduce(_config(args), _source(args))
        if args.command == 'check':
            if args.file is not None:
                with open(args.file, encoding='utf-8') as fh:
                    return cmd_check(args.check, _config(args), file=fh,
                                     allow_inconclusive=args.
                                     allow_inconclusive)
            return cmd_check(args.check, _config(args), gen=args.gen,
                             allow_inconclusive=args.allow_inconclusive)
        return cmd_bohm(_source(args), args.depth, args.format, args.unicode)
    except ParseError as exc:
        print('parse error: %s' % exc, file=sys.stderr)
        return EXIT_PARSE
    except (ConfigError, ValueError) as exc:
        print('configuration error: %s' % exc, file=sys.stderr)
        return EXIT_CONFIG
    except prob.EntryBudgetExceeded as exc:
        print('entry budget exceeded: %s' % exc, file=sys.stderr)
        return EXIT_BUDGET
