"""Finite multigraphs with involutive directed edges.

A graph is stored with both directions of every undirected edge: undirected
edge number k yields directed edges 2k (the declared direction) and 2k+1
(its reverse), so the involution is ``e ^ 1``.  Loops and parallel edges are
allowed; a loop at v contributes two directed edges at v and counts twice in
the valency.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Sequence

from .errors import DisconnectedError, ValidationError

VertexId = Hashable
EdgeId = Hashable


@dataclass(frozen=True)
class Multigraph:
    vertices: tuple
    edge_ids: tuple                 # one id per undirected edge
    origin: tuple                   # origin[d] = vertex index, d a directed edge index
    terminus: tuple
    _vertex_index: dict = field(repr=False)
    _out_edges: tuple = field(repr=False)   # out_edges[i] = directed edges with origin i

    # -- basic accessors -------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def undirected_edge_count(self) -> int:
        return len(self.edge_ids)

    @property
    def directed_edge_count(self) -> int:
        return 2 * len(self.edge_ids)

    def vertex_index(self, v: VertexId) -> int:
        try:
            return self._vertex_index[v]
        except KeyError:
            raise ValidationError(f"unknown vertex {v!r}") from None

    def inv(self, d: int) -> int:
        """The involution e -> e-bar on directed edge indices."""
        return d ^ 1

    def out_edges(self, i: int) -> tuple:
        """Directed edges with origin at vertex index i (the star of v_i)."""
        return self._out_edges[i]

    def valency(self, i: int) -> int:
        return len(self._out_edges[i])

    def undirected_of(self, d: int) -> int:
        return d >> 1

    def directed_of(self, k: int, reverse: bool = False) -> int:
        return 2 * k + (1 if reverse else 0)

    def endpoints(self, d: int) -> tuple:
        return self.origin[d], self.terminus[d]

    def edge_label(self, d: int) -> str:
        """Readable name for a directed edge: 'id' or '~id' for the reverse."""
        eid = self.edge_ids[d >> 1]
        return f"~{eid}" if d & 1 else str(eid)

    def default_orientation(self) -> "Orientation":
        return Orientation(tuple(2 * k for k in range(len(self.edge_ids))))

    def undirected_edges(self) -> Iterable[tuple]:
        """Yield (edge id, origin index, terminus index) in declared direction."""
        for k, eid in enumerate(self.edge_ids):
            yield eid, self.origin[2 * k], self.terminus[2 * k]


@dataclass(frozen=True)
class Orientation:
    """One directed representative per undirected edge."""

    edges: tuple  # directed edge indices

    def __iter__(self):
        return iter(self.edges)

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True)
class Pi1Basis:
    """Free generators of the fundamental group from a spanning tree.

    Each loop is a closed edge path at the base vertex, stored as a tuple of
    directed edge indices, indexed by the non-tree orientation edge it uses.
    """

    base_vertex: int
    tree_undirected: frozenset      # undirected edge numbers in the spanning tree
    loops: tuple                    # tuple of (orientation edge s, path tuple)


def build_multigraph(vertices: Sequence[VertexId], edges: Sequence) -> Multigraph:
    """Assemble a multigraph from a vertex list and undirected edge list.

    Each edge is (u, v) or (u, v, id); ids default to "e1", "e2", ...
    Both directions of every edge are materialized and the involution pairs
    them.  Unknown endpoints raise a validation error naming the edge.
    """
    verts = tuple(vertices)
    vindex = {}
    for i, v in enumerate(verts):
        if v in vindex:
            raise ValidationError(f"duplicate vertex {v!r}")
        vindex[v] = i
    ids = []
    seen_ids = set()
    origin = []
    terminus = []
    for pos, spec in enumerate(edges):
        spec = tuple(spec)
        if len(spec) == 2:
            u, v = spec
            eid = f"e{pos + 1}"
        elif len(spec) == 3:
            u, v, eid = spec
        else:
            raise ValidationError(f"edge #{pos + 1}: expected (u, v) or (u, v, id)")
        if eid in seen_ids:
            raise ValidationError(f"duplicate edge id {eid!r}")
        seen_ids.add(eid)
        for w in (u, v):
            if w not in vindex:
                raise ValidationError(
                    f"edge {eid!r} references undeclared vertex {w!r}")
        ids.append(eid)
        origin.extend((vindex[u], vindex[v]))
        terminus.extend((vindex[v], vindex[u]))
    out = [[] for _ in verts]
    for d, o in enumerate(origin):
        out[o].append(d)
    return Multigraph(
        vertices=verts,
        edge_ids=tuple(ids),
        origin=tuple(origin),
        terminus=tuple(terminus),
        _vertex_index=vindex,
        _out_edges=tuple(tuple(x) for x in out),
    )


def components(graph: Multigraph) -> list:
    """Vertex index sets of the connected components."""
    seen = [False] * graph.vertex_count
    comps = []
    for start in range(graph.vertex_count):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for d in graph.out_edges(i):
                j = graph.terminus[d]
                if not seen[j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def is_connected(graph: Multigraph) -> bool:
    """True iff the graph has exactly one component; the empty graph is not connected."""
    if graph.vertex_count == 0:
        return False
    return len(components(graph)) == 1


def euler_characteristic(graph: Multigraph) -> int:
    """b0 - b1, which for any finite graph equals |V| - |E|."""
    return graph.vertex_count - graph.undirected_edge_count


def matrices(graph: Multigraph) -> tuple:
    """Degree matrix D, adjacency matrix A, and Laplacian Q = D - A.

    Diagonal adjacency entries count each undirected loop twice; the vertex
    order fixed at construction is the labeling used for rows and columns.
    """
    g = graph.vertex_count
    D = [[0] * g for _ in range(g)]
    A = [[0] * g for _ in range(g)]
    for i in range(g):
        D[i][i] = graph.valency(i)
    for _, i, j in graph.undirected_edges():
        if i == j:
            A[i][i] += 2
        else:
            A[i][j] += 1
            A[j][i] += 1
    Q = [[D[i][j] - A[i][j] for j in range(g)] for i in range(g)]
    return D, A, Q


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination.

    Every division in the Bareiss recurrence is exact over the integers, so
    the result is exact for arbitrary-precision entries; O(n^3) ring ops.
    """
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    for row in a:
        if len(row) != n:
            raise ValidationError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def laplacian_cofactor(graph: Multigraph, delete: int = -1) -> int:
    """Cofactor of the Laplacian obtained by deleting one row/column (default: last)."""
    _, _, Q = matrices(graph)
    g = graph.vertex_count
    if g == 0:
        raise ValidationError("cofactor of an empty Laplacian")
    delete %= g
    M = [[Q[i][j] for j in range(g) if j != delete] for i in range(g) if i != delete]
    return bareiss_determinant(M)


def spanning_tree_count(graph: Multigraph) -> int:
    """Number of spanning trees via the matrix-tree theorem.

    Equals any cofactor of the Laplacian; computed from the last one.
    Disconnected input is an error rather than a silent zero.
    """
    if not is_connected(graph):
        raise DisconnectedError("spanning tree count requires a connected graph")
    if graph.vertex_count == 1:
        return 1
    return laplacian_cofactor(graph)


def count_spanning_trees_bruteforce(graph: Multigraph) -> int:
    """Independent oracle: enumerate all (|V|-1)-subsets of undirected edges.

    Intended for small graphs only; loops can never occur in a tree and are
    skipped.  Parallel edges are distinct candidates.
    """
    g = graph.vertex_count
    if g == 0:
        raise ValidationError("empty graph")
    if g == 1:
        return 1
    nonloops = [k for k in range(graph.undirected_edge_count)
                if graph.origin[2 * k] != graph.terminus[2 * k]]
    count = 0
    for subset in combinations(nonloops, g - 1):
        parent = list(range(g))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        for k in subset:
            a, b = find(graph.origin[2 * k]), find(graph.terminus[2 * k])
            if a == b:
                acyclic = False
                break
            parent[a] = b
        if acyclic:
            count += 1
    return count


def _tree_from_edges(graph: Multigraph, v0: int, tree_undirected: set) -> list:
    """Parent directed edge for each vertex, searching only inside the tree edges."""
    parent_edge = [None] * graph.vertex_count
    seen = [False] * graph.vertex_count
    seen[v0] = True
    queue = [v0]
    while queue:
        i = queue.pop(0)
        for d in graph.out_edges(i):
            if (d >> 1) not in tree_undirected:
                continue
            j = graph.terminus[d]
            if not seen[j]:
                seen[j] = True
                parent_edge[j] = d
                queue.append(j)
    if not all(seen):
        raise ValidationError("given edge set is not a spanning tree")
    return parent_edge


def pi1_basis(graph: Multigraph, v0: VertexId, orientation: Orientation | None = None,
              tree_edge_ids: Iterable[EdgeId] | None = None) -> Pi1Basis:
    """Free basis of the fundamental group at v0.

    A spanning tree is found by breadth-first search from v0 with edges taken
    in declaration order (or may be supplied explicitly by edge ids).  For
    each orientation edge s outside the tree the loop is: tree geodesic from
    v0 to o(s), then s, then tree geodesic from t(s) back to v0.
    """
    if not is_connected(graph):
        raise DisconnectedError("pi1 basis requires a connected graph")
    if orientation is None:
        orientation = graph.default_orientation()
    base = graph.vertex_index(v0)

    if tree_edge_ids is not None:
        wanted = set(tree_edge_ids)
        tree = {k for k, eid in enumerate(graph.edge_ids) if eid in wanted}
        missing = wanted - {graph.edge_ids[k] for k in tree}
        if missing:
            raise ValidationError(f"unknown tree edge ids {sorted(map(str, missing))}")
        if len(tree) != graph.vertex_count - 1:
            raise ValidationError("spanning tree must have |V| - 1 edges")
        parent_edge = _tree_from_edges(graph, base, tree)
    else:
        parent_edge = [None] * graph.vertex_count
        seen = [False] * graph.vertex_count
        seen[base] = True
        queue = [base]
        tree = set()
        while queue:
            i = queue.pop(0)
            for d in graph.out_edges(i):
                j = graph.terminus[d]
                if not seen[j]:
                    seen[j] = True
                    parent_edge[j] = d
                    tree.add(d >> 1)
                    queue.append(j)

    def path_from_base(i: int) -> list:
        rev = []
        while i != base:
            d = parent_edge[i]
            rev.append(d)
            i = graph.origin[d]
        return rev[::-1]

    loops = []
    for s in orientation:
        if (s >> 1) in tree:
            continue
        head = path_from_base(graph.origin[s])
        tail = [graph.inv(d) for d in reversed(path_from_base(graph.terminus[s]))]
        loops.append((s, tuple(head + [s] + tail)))
    return Pi1Basis(base_vertex=base, tree_undirected=frozenset(tree),
                    loops=tuple(loops))


def path_is_closed_at(graph: Multigraph, path: Sequence[int], v: int) -> bool:
    """Check a directed edge path starts and ends at vertex index v and chains up."""
    if not path:
        return True
    if graph.origin[path[0]] != v or graph.terminus[path[-1]] != v:
        return False
    return all(graph.terminus[path[i]] == graph.origin[path[i + 1]]
               for i in range(len(path) - 1))


def bouquet(loops: int, vertex: VertexId = "v") -> Multigraph:
    """Single vertex with the given number of loops."""
    return build_multigraph([vertex], [(vertex, vertex, f"s{i + 1}") for i in range(loops)])


def cycle_graph(g: int) -> Multigraph:
    """Cycle on g >= 1 vertices (a single loop when g = 1)."""
    verts = [f"v{i + 1}" for i in range(g)]
    edges = [(verts[i], verts[(i + 1) % g], f"s{i + 1}") for i in range(g)]
    return build_multigraph(verts, edges)
