"""Figures for product and order graphs (matplotlib, Agg backend).

matplotlib is imported only when a plot is requested.
"""
from __future__ import annotations

import math

from .model import format_atom_set


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _layers(keys, layer_of):
    layers = {}
    for k in keys:
        layers.setdefault(layer_of(k), []).append(k)
    pos = {}
    for x, members in sorted(layers.items()):
        for y, k in enumerate(members):
            pos[k] = (x, -y + (len(members) - 1) / 2)
    return pos


def _finite_sum(vec) -> int:
    return sum(int(x) for x in vec if x != math.inf)


def _draw(nodes, edges, pos, labels, highlight, path: str, title: str):
    plt = _pyplot()
    width = max(4.0, 2.0 * (2 + max(p[0] for p in pos.values()) - min(p[0] for p in pos.values())))
    height = max(3.0, 1.0 * (2 + max(p[1] for p in pos.values()) - min(p[1] for p in pos.values())))
    fig, ax = plt.subplots(figsize=(min(width, 24), min(height, 24)))
    for a, b, style in edges:
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.annotate(
            "",
            xy=(x1, y1),
            xytext=(x0, y0),
            arrowprops=dict(arrowstyle="->", color="0.45", linestyle=style, shrinkA=14, shrinkB=14),
        )
    for k in nodes:
        x, y = pos[k]
        face = "#f4d35e" if k in highlight else "white"
        ax.text(x, y, labels[k], ha="center", va="center", fontsize=7,
                bbox=dict(boxstyle="round", facecolor=face, edgecolor="0.3"))
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    ax.set_xlim(min(xs) - 0.7, max(xs) + 0.7)
    ax.set_ylim(min(ys) - 0.7, max(ys) + 0.7)
    ax.set_title(title, fontsize=9)
    ax.set_axis_off()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_product(prod, path: str):
    """Draw a product graph; separating nodes are highlighted."""
    pos = _layers(prod.nodes, lambda v: sum(v.n))
    labels = {
        v: f"{v.coords()}\n" + ";".join(format_atom_set(r) for r in prod.windows[v]) for v in prod.nodes
    }
    edges = [(a, b, "solid") for a, b in prod.edges()]
    seps = set(prod.separating_nodes())
    _draw(prod.nodes, edges, pos, labels, seps, path, f"product graph ({prod.mode.value})")


def plot_order(og, path: str):
    """Draw an order graph; squiggle edges are dashed."""
    from .sepgraphs import ORDER_ROOT, _fmt_vec

    keys = [ORDER_ROOT] + list(og.nodes)
    pos = _layers(keys, lambda p: -1 if p == ORDER_ROOT else _finite_sum(p[: og.c_pos]))
    labels = {ORDER_ROOT: "root"}
    for p in og.nodes:
        labels[p] = _fmt_vec(p[: og.c_pos], p[og.c_pos:]) + "\n" + format_atom_set(og.label[p])
    edges = []
    for src in keys:
        for e in og.out(src):
            edges.append((src, e.target, "solid" if e.kind == "hook" else "dashed"))
    seps = {p for p in og.nodes if og.is_separating(p)}
    _draw(keys, edges, pos, labels, seps, path, "order graph")
