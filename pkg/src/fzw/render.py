"""Graphviz export.  Layout is left to dot; only the connectivity is meaningful."""
from __future__ import annotations

from itertools import count

from .dsl import format_complex
from .terms import Id, Kind, Par, Seq, Term

_STYLE = {
    Kind.BLACK2: 'shape=circle, style=filled, fillcolor=black, label="", width=0.15',
    Kind.BLACK3: 'shape=circle, style=filled, fillcolor=black, label="", width=0.15',
    Kind.SWAP: 'shape=none, label="", width=0.05',
    Kind.FSWAP: 'shape=diamond, style=filled, fillcolor=red, label="", width=0.12, height=0.12',
    Kind.DUAL: 'shape=point, width=0.03',
    Kind.DUAL_DAGGER: 'shape=point, width=0.03',
}


class _Graph:
    def __init__(self):
        self.nodes: list[str] = []
        self.edges: list[str] = []
        self.ids = count()

    def node(self, attrs: str) -> str:
        name = f"n{next(self.ids)}"
        self.nodes.append(f"  {name} [{attrs}];")
        return name

    def wire(self, a: str, b: str) -> None:
        self.edges.append(f"  {a} -- {b};")


def _walk(g: _Graph, t: Term, ends: list[str]) -> list[str]:
    if isinstance(t, Id):
        return ends
    if isinstance(t, Seq):
        return _walk(g, t.second, _walk(g, t.first, ends))
    if isinstance(t, Par):
        k = t.left.n_in
        return _walk(g, t.left, ends[:k]) + _walk(g, t.right, ends[k:])
    kind = t.gen.kind
    if kind is Kind.WHITE:
        attrs = f'shape=circle, label="{format_complex(t.gen.z)}", fontsize=9'
    else:
        attrs = _STYLE[kind]
    v = g.node(attrs)
    for e in ends:
        g.wire(e, v)
    return [v] * t.n_out


def to_dot(t: Term, name: str = "diagram") -> str:
    g = _Graph()
    ins = [g.node(f'shape=none, label="in{k}"') for k in range(t.n_in)]
    outs = _walk(g, t, ins)
    for k, e in enumerate(outs):
        g.wire(e, g.node(f'shape=none, label="out{k}"'))
    body = "\n".join(g.nodes + g.edges)
    return f"graph {name} {{\n  rankdir=BT;\n{body}\n}}\n"
