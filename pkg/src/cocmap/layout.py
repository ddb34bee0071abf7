"""Graph construction and Kamada-Kawai spring embedding.

Graphs come from thresholding a co-occurrence matrix: any count at or above
the threshold draws an edge, and the raw count is kept as the edge weight.
The embedding itself works on the *binarized* adjacency only -- weights feed
line thickness in the rendered output, never the geometry -- so rescaling
all weights leaves positions bit-identical.

The spring energy is ``sum_{i<j} k_ij (|x_i - x_j| - L d_ij)^2`` with
graph-theoretic distances ``d_ij`` and stiffness ``k_ij = K / d_ij^2``.
Minimization follows the original scheme: repeatedly pick the vertex with
the largest energy gradient and relax it with damped 2x2 Newton steps.
Steps are only accepted when they lower the energy, so the energy at
termination never exceeds the energy at the circular start layout.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedGraph
from .matrices import CooccurrenceMatrix


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with positive edge weights; edges stored as (i, j, w), i < j."""

    node_labels: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.node_labels)
        if len(set(labels)) != len(labels):
            raise ValueError("node labels contain duplicates")
        n = len(labels)
        seen = set()
        norm = []
        for i, j, w in self.edges:
            i, j, w = int(i), int(j), float(w)
            if i == j:
                raise ValueError("self-loops are not allowed")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) references an unknown node")
            if i > j:
                i, j = j, i
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            if w <= 0:
                raise ValueError("edge weights must be positive")
            seen.add((i, j))
            norm.append((i, j, w))
        object.__setattr__(self, "node_labels", labels)
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def n(self) -> int:
        return len(self.node_labels)


@dataclass(frozen=True)
class LayoutConfig:
    """Spring-embedding knobs; the defaults match the documented method guide."""

    edge_length: float = 1.0
    spring_constant: float = 1.0
    gradient_tol: float = 1e-4
    max_passes: int = 500
    newton_steps: int = 50
    pack_components: bool = True


@dataclass(frozen=True, eq=False)
class LayoutResult:
    """Final 2-D positions with the energy and vertex passes spent.

    ``initial_energy`` is the spring energy of the circular start layout;
    accepted relaxation steps only ever lower it.
    """

    positions: np.ndarray
    final_energy: float
    iterations: int
    initial_energy: float = 0.0

    def __post_init__(self):
        pos = np.ascontiguousarray(np.asarray(self.positions, dtype=float))
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        pos.flags.writeable = False
        object.__setattr__(self, "positions", pos)


def graph_from_cooccurrence(M: CooccurrenceMatrix, threshold: int = 1) -> WeightedGraph:
    """Threshold a co-occurrence matrix into a weighted graph.

    An edge (i, j) exists when ``M[i][j] >= threshold``; its weight is the
    raw count (used for line widths only).  Isolated nodes stay in the node
    list.
    """
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    data = np.asarray(M.data)
    edges = []
    for i in range(M.n):
        for j in range(i + 1, M.n):
            if data[i, j] >= threshold:
                edges.append((i, j, float(data[i, j])))
    return WeightedGraph(M.labels, tuple(edges))


def shortest_path_lengths(G: WeightedGraph) -> np.ndarray:
    """All-pairs BFS hop counts on the binarized graph; unreachable pairs are inf."""
    n = G.n
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j, _ in G.edges:
        adj[i].append(j)
        adj[j].append(i)
    dist = np.full((n, n), np.inf)
    for start in range(n):
        dist[start, start] = 0.0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if dist[start, v] == np.inf:
                    dist[start, v] = dist[start, u] + 1.0
                    queue.append(v)
    return dist


def _components(G: WeightedGraph) -> list[list[int]]:
    dist = shortest_path_lengths(G)
    remaining = set(range(G.n))
    comps = []
    while remaining:
        seed = min(remaining)
        comp = sorted(i for i in remaining if dist[seed, i] < np.inf)
        comps.append(comp)
        remaining -= set(comp)
    return comps


def _energy(X: np.ndarray, K: np.ndarray, L: np.ndarray) -> float:
    n = X.shape[0]
    e = 0.0
    for i in range(n - 1):
        d = np.sqrt(((X[i + 1:] - X[i]) ** 2).sum(axis=1))
        e += float((K[i, i + 1:] * (d - L[i, i + 1:]) ** 2).sum())
    return e


def _vertex_energy(X, K, L, m) -> float:
    d = np.sqrt(((X - X[m]) ** 2).sum(axis=1))
    d[m] = 0.0
    terms = K[m] * (d - L[m]) ** 2
    terms[m] = 0.0
    return float(terms.sum())


def _gradient(X, K, L, m):
    diff = X[m] - X
    d = np.sqrt((diff**2).sum(axis=1))
    d[m] = 1.0
    factor = K[m] * (1.0 - L[m] / np.maximum(d, 1e-300))
    factor[m] = 0.0
    g = 2.0 * (factor[:, None] * diff).sum(axis=0)
    return g


def _hessian(X, K, L, m):
    diff = X[m] - X
    d2 = (diff**2).sum(axis=1)
    d = np.sqrt(d2)
    d[m] = 1.0
    d3 = np.maximum(d * d * d, 1e-300)
    k = K[m].copy()
    k[m] = 0.0
    dx, dy = diff[:, 0], diff[:, 1]
    hxx = 2.0 * (k * (1.0 - L[m] * dy * dy / d3)).sum()
    hyy = 2.0 * (k * (1.0 - L[m] * dx * dx / d3)).sum()
    hxy = 2.0 * (k * L[m] * dx * dy / d3).sum()
    return hxx, hyy, hxy


def _relax_component(X: np.ndarray, K: np.ndarray, L: np.ndarray, cfg: LayoutConfig):
    """Worst-gradient vertex relaxation; returns (positions, energy, passes)."""
    n = X.shape[0]
    passes = 0
    for _ in range(cfg.max_passes):
        grads = [np.sqrt((_gradient(X, K, L, m) ** 2).sum()) for m in range(n)]
        m = int(np.argmax(grads))
        if grads[m] < cfg.gradient_tol:
            break
        passes += 1
        improved = False
        for _ in range(cfg.newton_steps):
            g = _gradient(X, K, L, m)
            if np.sqrt((g**2).sum()) < cfg.gradient_tol:
                break
            hxx, hyy, hxy = _hessian(X, K, L, m)
            det = hxx * hyy - hxy * hxy
            if abs(det) < 1e-12:
                step = -g * 0.1
            else:
                step = np.array(
                    [(-g[0] * hyy + g[1] * hxy) / det,
                     (g[0] * hxy - g[1] * hxx) / det]
                )
            before = _vertex_energy(X, K, L, m)
            scale = 1.0
            moved = False
            for _ in range(30):
                candidate = X[m] + scale * step
                old = X[m].copy()
                X[m] = candidate
                after = _vertex_energy(X, K, L, m)
                if after < before:
                    moved = True
                    improved = True
                    break
                X[m] = old
                scale *= 0.5
            if not moved:
                break
        if not improved:
            break  # worst vertex cannot be improved; a local minimum
    return X, _energy(X, K, L), passes


def kamada_kawai(G: WeightedGraph, cfg: LayoutConfig = LayoutConfig()) -> LayoutResult:
    """Spring embedding of a graph in the plane.

    Disconnected graphs are laid out per component and the components packed
    on a grid (padding one edge length) unless ``cfg.pack_components`` is
    false, in which case :class:`DisconnectedGraph` is raised.  The start
    layout places vertices on a circle in label order, so runs are
    deterministic.
    """
    n = G.n
    if n < 2:
        raise ValueError("layout needs at least two nodes")
    comps = _components(G)
    if len(comps) > 1 and not cfg.pack_components:
        raise DisconnectedGraph(f"graph has {len(comps)} components")
    hops = shortest_path_lengths(G)
    positions = np.zeros((n, 2))
    total_energy = 0.0
    initial_energy = 0.0
    total_passes = 0
    placed: list[tuple[list[int], np.ndarray]] = []
    for comp in comps:
        k = len(comp)
        if k == 1:
            placed.append((comp, np.zeros((1, 2))))
            continue
        d = hops[np.ix_(comp, comp)]
        L = cfg.edge_length * d
        with np.errstate(divide="ignore"):
            K = cfg.spring_constant / np.maximum(d, 1e-300) ** 2
        np.fill_diagonal(K, 0.0)
        # circular start in label order, scaled to the component diameter
        radius = cfg.edge_length * max(float(d.max()), 1.0) / 2.0
        angles = 2.0 * np.pi * np.arange(k) / k
        X = radius * np.column_stack([np.cos(angles), np.sin(angles)])
        initial_energy += _energy(X, K, L)
        X, energy, passes = _relax_component(X, K, L, cfg)
        total_energy += energy
        total_passes += passes
        placed.append((comp, X - X.mean(axis=0)))
    # pack component bounding boxes on a grid with one edge length of padding
    pad = cfg.edge_length
    cols = int(np.ceil(np.sqrt(len(placed))))
    x_cursor, y_cursor, row_height = 0.0, 0.0, 0.0
    for idx, (comp, X) in enumerate(placed):
        lo = X.min(axis=0)
        hi = X.max(axis=0)
        size = hi - lo
        if idx and idx % cols == 0:
            x_cursor = 0.0
            y_cursor += row_height + pad
            row_height = 0.0
        offset = np.array([x_cursor - lo[0], y_cursor - lo[1]])
        positions[comp] = X + offset
        x_cursor += size[0] + pad
        row_height = max(row_height, float(size[1]))
    return LayoutResult(positions, total_energy, total_passes, initial_energy)


# ---------------------------------------------------------------------------
# Pajek .net format
# ---------------------------------------------------------------------------

def _format_weight(w: float) -> str:
    if w == int(w) and abs(w) < 1e15:
        return str(int(w))
    return repr(float(w))


def export_pajek(G: WeightedGraph, layout: LayoutResult | None = None) -> str:
    """Serialize a graph (optionally with coordinates) to Pajek .net text.

    Vertex ids are 1-based, labels double-quoted, lines ``\\n``-terminated.
    When a layout is given, coordinates are normalized into [0, 1] and
    appended to the vertex lines.  Double quotes inside labels are replaced
    with apostrophes (the format cannot carry them).
    """
    lines = [f"*Vertices {G.n}"]
    coords = None
    if layout is not None:
        pos = np.asarray(layout.positions, dtype=float)
        span = pos.max(axis=0) - pos.min(axis=0)
        span = np.where(span > 0, span, 1.0)
        coords = (pos - pos.min(axis=0)) / span
    for idx, label in enumerate(G.node_labels):
        quoted = '"' + label.replace('"', "'") + '"'
        if coords is None:
            lines.append(f"{idx + 1} {quoted}")
        else:
            lines.append(f"{idx + 1} {quoted} {coords[idx, 0]:.6f} {coords[idx, 1]:.6f}")
    lines.append("*Edges")
    for i, j, w in G.edges:
        lines.append(f"{i + 1} {j + 1} {_format_weight(w)}")
    return "\n".join(lines) + "\n"


def import_pajek(text: str):
    """Parse Pajek .net text; returns (graph, positions or None)."""
    lines = [ln.rstrip("\r") for ln in text.splitlines()]
    labels: list[str] = []
    coords: list[tuple[float, float]] = []
    edges: list[tuple[int, int, float]] = []
    section = None
    n_declared = 0
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        low = line.lower()
        if low.startswith("*vertices"):
            section = "vertices"
            parts = line.split()
            n_declared = int(parts[1]) if len(parts) > 1 else 0
            continue
        if low.startswith("*edges") or low.startswith("*arcs"):
            section = "edges"
            continue
        if line.startswith("*"):
            section = None
            continue
        if section == "vertices":
            rest = line.split(None, 1)[1] if " " in line else ""
            if rest.startswith('"'):
                end = rest.index('"', 1)
                label = rest[1:end]
                tail = rest[end + 1:].split()
            else:
                parts = rest.split()
                label = parts[0] if parts else ""
                tail = parts[1:]
            labels.append(label)
            if len(tail) >= 2:
                coords.append((float(tail[0]), float(tail[1])))
        elif section == "edges":
            parts = line.split()
            i, j = int(parts[0]) - 1, int(parts[1]) - 1
            w = float(parts[2]) if len(parts) > 2 else 1.0
            edges.append((i, j, w))
    if n_declared and len(labels) != n_declared:
        raise ValueError(
            f"vertex count {n_declared} does not match {len(labels)} vertex lines"
        )
    graph = WeightedGraph(tuple(labels), tuple(edges))
    positions = np.array(coords) if len(coords) == len(labels) and coords else None
    return graph, positions


# ---------------------------------------------------------------------------
# SVG rendering
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SvgStyle:
    width: int = 800
    height: int = 600
    margin: float = 50.0
    min_stroke: float = 0.5
    max_stroke: float = 4.0
    node_radius: float = 4.0
    font_size: int = 12


def export_svg(G: WeightedGraph, layout: LayoutResult, style: SvgStyle = SvgStyle()) -> str:
    """Render a laid-out graph as an SVG document.

    Edge stroke widths interpolate linearly between ``min_stroke`` and
    ``max_stroke`` over the weight range; equal weights all get the midpoint
    width.
    """
    pos = np.asarray(layout.positions, dtype=float)
    lo = pos.min(axis=0)
    span = pos.max(axis=0) - lo
    span = np.where(span > 0, span, 1.0)
    inner_w = style.width - 2 * style.margin
    inner_h = style.height - 2 * style.margin
    scaled = np.empty_like(pos)
    scaled[:, 0] = style.margin + (pos[:, 0] - lo[0]) / span[0] * inner_w
    scaled[:, 1] = style.margin + (pos[:, 1] - lo[1]) / span[1] * inner_h

    weights = [w for _, _, w in G.edges]
    if weights:
        w_min, w_max = min(weights), max(weights)
    else:
        w_min = w_max = 1.0

    def stroke(w: float) -> float:
        if w_max == w_min:
            return (style.min_stroke + style.max_stroke) / 2.0
        return style.min_stroke + (w - w_min) / (w_max - w_min) * (style.max_stroke - style.min_stroke)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{style.width}" height="{style.height}" '
        f'viewBox="0 0 {style.width} {style.height}">',
    ]
    for i, j, w in G.edges:
        parts.append(
            f'<line x1="{scaled[i, 0]:.2f}" y1="{scaled[i, 1]:.2f}" '
            f'x2="{scaled[j, 0]:.2f}" y2="{scaled[j, 1]:.2f}" '
            f'stroke="#777777" stroke-width="{stroke(w):.3f}"/>'
        )
    for idx, label in enumerate(G.node_labels):
        x, y = scaled[idx]
        parts.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{style.node_radius}" fill="#1f3c88"/>'
        )
        safe = label.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        parts.append(
            f'<text x="{x + style.node_radius + 2:.2f}" y="{y - 2:.2f}" '
            f'font-size="{style.font_size}" font-family="sans-serif">{safe}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
