import json
from jinja2 import Template

from . import __version__
from .classify import ChainWitness, FailureWitness, NonDpWitness

verdict_templ = Template(r"""
{{descriptor}}
  dp-minimal:          {{dp_minimal}}
  VC-minimal:          {{vc_minimal}}
  convexly orderable:  {{convexly_orderable}}
  routes:              {% for name, value in routes %}{{name}}={{value}}{% if not loop.last %} {% endif %}{% endfor %}
  route agreement:     {{route_agreement}}
{%- if kind == 'chain' %}
  chain (bottom first, depth {{depth}}, verified up to k<={{bound[0]}}, m<={{bound[1]}}):
  {%- for h in chain %}
    {{h}}
  {%- endfor %}
{%- elif kind == 'failure' %}
  failure witness ({{recipe}}, depth {{depth}}):
    B = {{b_group}}
  {%- for a in chain %}
    A_{{loop.index0}} = {{a}}
  {%- endfor %}
{%- elif kind == 'non-dp' %}
  incomparable: {{h1}} and {{h2}}
{%- endif %}
{%- if check is not none %}
  evidence check:      {{'passed' if check.ok else 'FAILED: ' ~ check.message}}
{%- endif %}
{%- if failing_class is not none %}
  failing class:       {{failing_class}}
{%- endif %}
""".lstrip('\n'))

corpus_templ = Template(r"""
{%- for row in rows %}
{{'%-48s'|format(row.name)}} dp={{row.dp}} vc={{row.vc}} {{'ok' if row.ok else 'MISMATCH'}}
{%- endfor %}
{{passed}}/{{rows|length}} descriptors as expected, seed {{seed}}
""".lstrip('\n'))

oracle_templ = Template(r"""
{%- for mm in mismatches %}
{{mm}}
{%- endfor %}
{{groups}} groups up to order {{max_order}}, k<={{k_max}}, m<={{m_max}}: {{mismatches|length}} mismatches
""".lstrip('\n'))

def _evidence_params(evidence):
    if isinstance(evidence, ChainWitness):
        return dict(kind='chain', chain=[str(h) for h in evidence.chain],
            bound=list(evidence.coverage_bound), depth=evidence.depth)
    if isinstance(evidence, FailureWitness):
        return dict(kind='failure', chain=[str(a) for a in evidence.chain_a],
            b_group=str(evidence.b_group), depth=evidence.depth, recipe=evidence.recipe)
    if isinstance(evidence, NonDpWitness):
        return dict(kind='non-dp', h1=str(evidence.h1), h2=str(evidence.h2))
    return dict(kind=None)

def verdict_payload(v):
    check = None
    if v.check is not None:
        check = dict(ok=v.check.ok, message=v.check.message,
            failing_cell=v.check.failing_cell, failing_pair=v.check.failing_pair)
    return dict(
        descriptor=str(v.descriptor),
        dp_minimal=v.dp_minimal,
        vc_minimal=v.vc_minimal,
        convexly_orderable=v.convexly_orderable,
        route_agreement=v.route_agreement,
        routes=v.routes,
        evidence=_evidence_params(v.evidence),
        check=check,
        failing_class=None if v.failing_class is None else str(v.failing_class),
        )

def render_verdict(v):
    p = verdict_payload(v)
    params = dict(p, routes=sorted(p['routes'].items()), **p['evidence'])
    params['check'] = v.check
    return verdict_templ.render(**params)

def render_corpus(rows, seed):
    return corpus_templ.render(rows=rows, passed=sum(1 for r in rows if r['ok']), seed=seed)

def render_oracle(groups, mismatches, max_order, k_max, m_max):
    return oracle_templ.render(groups=groups, mismatches=mismatches, max_order=max_order, k_max=k_max, m_max=m_max)

def document(command, payload, config):
    """A self-describing report: tool version, run configuration and seed."""
    return dict(tool='minlab', version=__version__, command=command,
        config=config.as_dict(), seed=config.seed, result=payload)

def _default(obj):
    if hasattr(obj, 'item'):
        return obj.item()
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    return str(obj)

def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True, default=_default)
