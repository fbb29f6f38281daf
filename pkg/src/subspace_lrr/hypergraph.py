"""Locality structures on point clouds.

Builds epsilon-ball hypergraphs with density-dependent edge weights, plus
the classic kNN graph / kNN hypergraph Laplacians, and reduces each to a
symmetric PSD operator whose quadratic form tr(Z L Z^T) penalizes spread
of coefficient columns over each neighborhood.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, InvalidParameterError

# Pairwise-distance sums below this are clamped before inversion so that
# coincident points do not produce infinite edge weights.
WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True)
class ObservationMatrix:
    """M x N data matrix whose columns are the observed points."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise InvalidInputError("observations must be a 2-D matrix")
        if not np.all(np.isfinite(data)):
            raise InvalidInputError("observations contain non-finite entries")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def m(self):
        return self.data.shape[0]

    @property
    def n(self):
        return self.data.shape[1]

    def pairwise_distances(self):
        """Dense N x N Euclidean distance matrix between columns."""
        g = self.data.T @ self.data
        sq = np.diag(g)
        d2 = sq[:, None] + sq[None, :] - 2.0 * g
        np.maximum(d2, 0.0, out=d2)
        return np.sqrt(d2)


@dataclass(frozen=True)
class Hyperedge:
    """A weighted set of at least two vertices."""

    vertices: tuple
    weight: float

    def __post_init__(self):
        verts = tuple(int(v) for v in self.vertices)
        if len(verts) < 2:
            raise InvalidInputError("hyperedge needs at least two vertices")
        if any(b <= a for a, b in zip(verts, verts[1:])):
            raise InvalidInputError("hyperedge vertices must be strictly increasing")
        if not (self.weight > 0 and np.isfinite(self.weight)):
            raise InvalidInputError("hyperedge weight must be positive and finite")
        object.__setattr__(self, "vertices", verts)

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True)
class Hypergraph:
    """Vertex count plus a deduplicated list of weighted hyperedges."""

    n: int
    edges: tuple

    def __post_init__(self):
        edges = tuple(self.edges)
        seen = set()
        for e in edges:
            if e.vertices[-1] >= self.n:
                raise InvalidInputError("hyperedge vertex out of range")
            if e.vertices in seen:
                raise InvalidInputError("duplicate hyperedge vertex sets")
            seen.add(e.vertices)
        object.__setattr__(self, "edges", edges)

    @property
    def p(self):
        """Maximum hyperedge cardinality (0 for an edgeless hypergraph)."""
        return max_cardinality(self)


def max_cardinality(graph):
    return max((len(e) for e in graph.edges), default=0)


@dataclass(frozen=True)
class LocalityOperator:
    """Symmetric PSD matrix realizing a neighborhood-spread penalty."""

    matrix: np.ndarray
    spectral_norm: float = field(init=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvalidInputError("locality operator must be square")
        scale = np.abs(mat).max() if mat.size else 0.0
        if scale > 0 and np.abs(mat - mat.T).max() > 1e-12 * scale:
            raise InvalidInputError("locality operator must be symmetric")
        mat = 0.5 * (mat + mat.T)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(
            self, "spectral_norm", float(np.linalg.norm(mat, 2)) if mat.size else 0.0
        )

    @property
    def n(self):
        return self.matrix.shape[0]

    @classmethod
    def zero(cls, n):
        return cls(np.zeros((n, n)))

    def quadratic_form(self, z):
        """tr(Z L Z^T) for a coefficient matrix Z with columns z_i."""
        return float(np.trace(z @ self.matrix @ z.T))


def hyperedge_weight(vertices, observations):
    """Density weight of an edge: (1/c) over the summed squared pair distances.

    Degenerate (near-coincident) vertex sets are clamped to WEIGHT_FLOOR
    before inversion.
    """
    verts = list(vertices)
    c = len(verts)
    if c < 2:
        raise InvalidInputError("hyperedge weight needs at least two vertices")
    pts = observations.data[:, verts]
    total = 0.0
    for a in range(c):
        diff = pts[:, a + 1 :] - pts[:, a : a + 1]
        total += float(np.sum(diff * diff))
    total = max(total, WEIGHT_FLOOR)
    return (1.0 / c) / total


def epsilon_ball_hyperedges(observations, eps, mode="absolute"):
    """Hyperedges from epsilon-ball neighborhoods of each point.

    Each point spawns a candidate edge consisting of itself plus every point
    strictly within the radius. In "quantile" mode `eps` is read as a
    quantile q in (0, 1) of all pairwise distances, yielding a
    scale-independent threshold. Singleton candidates are dropped and
    identical vertex sets merged.
    """
    n = observations.n
    if n < 2:
        raise InvalidInputError("need at least two observations")
    dist = observations.pairwise_distances()
    if mode == "absolute":
        if not (eps > 0 and np.isfinite(eps)):
            raise InvalidParameterError("eps must be positive and finite")
        threshold = float(eps)
    elif mode == "quantile":
        if not (0.0 < eps < 1.0):
            raise InvalidParameterError("quantile must lie in (0, 1)")
        iu = np.triu_indices(n, k=1)
        threshold = float(np.quantile(dist[iu], eps))
    else:
        raise InvalidParameterError(f"unknown eps mode: {mode!r}")

    vertex_sets = set()
    for i in range(n):
        members = np.flatnonzero(dist[i] < threshold)
        members = set(members.tolist()) | {i}
        if len(members) >= 2:
            vertex_sets.add(tuple(sorted(members)))

    edges = tuple(
        Hyperedge(verts, hyperedge_weight(verts, observations))
        for verts in sorted(vertex_sets)
    )
    return Hypergraph(n=n, edges=edges)


def locality_operator_from_hypergraph(graph):
    """Clique-expansion reduction of a hypergraph to a locality operator.

    Each edge e contributes a(e) * (|e| * diag(1_e) - 1_e 1_e^T), the unique
    symmetric matrix whose quadratic form sums a(e) ||z_i - z_j||^2 over all
    vertex pairs of e.
    """
    if graph.n < 2:
        raise InvalidInputError("need at least two vertices")
    mat = np.zeros((graph.n, graph.n))
    for e in graph.edges:
        idx = np.array(e.vertices)
        c = len(idx)
        mat[np.ix_(idx, idx)] -= e.weight
        mat[idx, idx] += e.weight * c
    return LocalityOperator(mat)


def _knn_sets(observations, k):
    """k nearest neighbors of each point, ties broken by lower index."""
    n = observations.n
    if not (1 <= k <= n - 1):
        raise InvalidParameterError(f"k must be in [1, {n - 1}]")
    dist = observations.pairwise_distances()
    neighbors = []
    for i in range(n):
        order = sorted(j for j in range(n) if j != i)
        order.sort(key=lambda j: dist[i, j])
        neighbors.append(order[:k])
    return neighbors


def knn_graph_laplacian(observations, k):
    """Unnormalized Laplacian of the OR-symmetrized binary kNN graph."""
    n = observations.n
    neighbors = _knn_sets(observations, k)
    w = np.zeros((n, n))
    for i, nbrs in enumerate(neighbors):
        for j in nbrs:
            w[i, j] = 1.0
            w[j, i] = 1.0
    lap = np.diag(w.sum(axis=1)) - w
    return LocalityOperator(lap)


def knn_hypergraph_laplacian(observations, k):
    """Hypergraph Laplacian with one unit-weight edge per vertex.

    Edge i joins vertex i with its k nearest neighbors. Duplicated vertex
    sets are kept (one incidence column per vertex), matching the standard
    star-of-neighborhoods construction: L = D_v - H W D_e^{-1} H^T.
    """
    n = observations.n
    neighbors = _knn_sets(observations, k)
    h = np.zeros((n, n))  # rows: vertices, columns: one edge per vertex
    for i, nbrs in enumerate(neighbors):
        h[i, i] = 1.0
        h[nbrs, i] = 1.0
    d_v = h.sum(axis=1)  # unit edge weights
    d_e = h.sum(axis=0)
    lap = np.diag(d_v) - (h / d_e) @ h.T
    return LocalityOperator(lap)
