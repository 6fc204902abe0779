"""Clusters in the coset complex and their cube fillings.

A cluster is the subgraph spanned by all subset-products of a sorted list of
pairwise independent special forms over a basepoint.  Clusters fill to cubes,
possibly subdivided along diagonal hyperplanes, one per consecutive junction
of the parameter list.
"""

import itertools

from .rewrite import GNormal, normalize, inverse_word
from .special import (
    check_special,
    coset_vertex,
    from_letters,
    independent,
    is_special,
    pair_consecutive,
    parity_of,
    to_letters,
    type_of,
)

FACE = "Face"
DIAGONAL = "Diagonal"
DIAGONAL_OF_FACE = "DiagonalOfFace"


def vertex_of(word):
    """Canonical coset representative of a word: the base vertex map of the
    complex."""
    return coset_vertex(word)


def quotient_form(u, v):
    """The y-part of u * v^-1 for two coset representatives."""
    return normalize(list(u) + inverse_word(list(v))).ys


def is_one_cell(u, v):
    """Whether two cosets are joined by an edge: their quotient must be a
    special form."""
    if u == v:
        return False
    return is_special(from_letters(quotient_form(u, v)))


def _flip(form):
    return tuple((s, -t) for s, t in form)


def _corner_edge(params, a, b):
    """Edge test between two corners of a cluster, done on subscripts alone.

    The quotient of the two corner cosets is the product of the parameters
    indexed by the symmetric difference (inverted on one side), taken in
    subscript order.  Over pairwise-independent parameters that product is
    sorted and cancellation-free, and contractions neither create nor destroy
    specialness, so it is special exactly when every junction joins
    consecutive leaves with alternating signs."""
    diff = sorted(a ^ b)
    if not diff:
        return False
    prev = None
    for i in diff:
        form = params[i] if i in a else _flip(params[i])
        if prev is not None and (
            not pair_consecutive(prev[0], form[0][0])
            or prev[1] == form[0][1]
        ):
            return False
        prev = form[-1]
    return True


def _concat_forms(forms):
    return [lt for f in forms for lt in to_letters(f)]


def check_sorted_params(params):
    params = tuple(check_special(f) for f in params)
    for a, b in zip(params, params[1:]):
        if a[-1][0] >= b[0][0]:
            raise ValueError("parameter list is not sorted")
    for i, a in enumerate(params):
        for b in params[i + 1:]:
            if not independent(a, b):
                raise ValueError("parameters are not pairwise independent")
    return params


class Cluster:
    """The subgraph with vertices F(prod_{i in A} lambda_i) tau over all
    subsets A, together with every edge of the ambient complex among them."""

    def __init__(self, base, params):
        if not isinstance(base, GNormal):
            base = normalize(list(base))
        self.base = base
        self.params = check_sorted_params(params)
        self.n = len(self.params)
        self._by_subset = {}
        for bits in itertools.product((0, 1), repeat=self.n):
            chosen = frozenset(i for i, b in enumerate(bits) if b)
            word = _concat_forms(
                self.params[i] for i in sorted(chosen)
            ) + base.to_items()
            self._by_subset[chosen] = vertex_of(word)
        if len(set(self._by_subset.values())) != 2 ** self.n:
            raise ValueError("cluster vertices are not pairwise distinct")
        self._subset_of = {v: a for a, v in self._by_subset.items()}
        self.vertices = frozenset(self._by_subset.values())
        self.edges = frozenset(
            frozenset((self._by_subset[a], self._by_subset[b]))
            for a, b in itertools.combinations(self._by_subset, 2)
            if _corner_edge(self.params, a, b)
        )

    def vertex(self, subset):
        return self._by_subset[frozenset(subset)]

    def subset_of(self, vertex):
        return self._subset_of.get(vertex)

    @property
    def base_vertex(self):
        return self._by_subset[frozenset()]

    def __eq__(self, other):
        return isinstance(other, Cluster) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"Cluster({self.n} params, {len(self.vertices)} vertices)"

    def reparametrized(self, subset):
        """The same cluster based at the corner indexed by `subset`, with the
        chosen parameters inverted."""
        subset = frozenset(subset)
        word = _concat_forms(
            self.params[i] for i in sorted(subset)
        ) + self.base.to_items()
        params = tuple(
            _flip(f) if i in subset else f for i, f in enumerate(self.params)
        )
        out = Cluster(normalize(word), params)
        if out.vertices != self.vertices:
            raise AssertionError("reparametrization changed the vertex set")
        return out

    def facial_edges_at(self, vertex):
        """Edges of the cluster at a vertex along a single parameter."""
        a = self.subset_of(vertex)
        if a is None:
            raise ValueError("not a vertex of the cluster")
        out = set()
        for i in range(self.n):
            b = a ^ {i}
            e = frozenset((vertex, self.vertex(b)))
            if e in self.edges:
                out.add(e)
        return out


def is_balanced(params):
    """Whether the parameter list has alternating signs across junctions."""
    return all(
        a[-1][1] == -b[0][1] for a, b in zip(params, params[1:])
    )


def is_proper(params):
    """Consecutive junctions must alternate in sign."""
    return all(
        a[-1][1] == -b[0][1]
        for a, b in zip(params, params[1:])
        if pair_consecutive(a[-1][0], b[0][0])
    )


def balanced_parametrizations(cluster):
    """The two balanced parametrizations, at the type-1 and type-2 corner
    basepoints respectively."""
    if cluster.n == 0:
        return cluster, cluster
    params = cluster.params
    signs = [1]
    for a, b in zip(params, params[1:]):
        signs.append(-signs[-1] * a[-1][1] * b[0][1])
    subset = frozenset(i for i, l in enumerate(signs) if l < 0)
    first = cluster.reparametrized(subset)
    second = cluster.reparametrized(frozenset(range(cluster.n)) - subset)
    if type_of(first.params[0]) == 1:
        return first, second
    return second, first


def a_delta(cluster):
    """The index intervals of chained equalities: singletons plus every
    interval of consecutive parameters; independent of the proper
    parametrization used."""
    params = balanced_parametrizations(cluster)[0].params
    n = len(params)
    out = {frozenset((i,)) for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if all(
                pair_consecutive(params[k][-1][0], params[k + 1][0][0])
                for k in range(i, j)
            ):
                out.add(frozenset(range(i, j + 1)))
    return frozenset(out)


def subcluster_type(sub, sup):
    """Classify a subcluster as Face, Diagonal, or DiagonalOfFace via the
    blocks of parent parameters its edges span."""
    if not isinstance(sub, Cluster) or not isinstance(sup, Cluster):
        raise TypeError("subcluster_type takes clusters")
    if not sub.vertices <= sup.vertices or not sub.edges <= sup.edges:
        raise ValueError("first argument is not a subcluster of the second")
    base = sup.subset_of(sub.base_vertex)
    blocks = []
    for j in range(sub.n):
        corner = sup.subset_of(sub.vertex({j}))
        blocks.append(corner ^ base)
    union = frozenset().union(*blocks) if blocks else frozenset()
    if union == frozenset(range(sup.n)):
        return DIAGONAL
    if all(len(c) == 1 for c in blocks):
        return FACE
    return DIAGONAL_OF_FACE


def intersect_clusters(c1, c2):
    """The intersection of two clusters, as a cluster, or None when they
    share no vertex.  Follows the constructive argument: re-base both at a
    common vertex, collect the shared edges there, and parametrize by the
    minimal shared-edge blocks."""
    common = c1.vertices & c2.vertices
    if not common:
        return None
    pivot = min(common)
    r1 = c1.reparametrized(c1.subset_of(pivot))
    r2 = c2.reparametrized(c2.subset_of(pivot))
    shared = [
        e for e in r1.edges & r2.edges if pivot in e
    ]
    if not shared:
        return Cluster(r1.base, ())
    blocks = []
    for e in shared:
        other = next(v for v in e if v != pivot)
        blocks.append((r1.subset_of(other), r2.subset_of(other)))
    minimal = [
        (ca, da)
        for ca, da in blocks
        if not any(cb < ca for cb, _ in blocks)
    ]
    params = []
    for ca, _ in minimal:
        form = from_letters(
            _concat_forms(r1.params[i] for i in sorted(ca))
        )
        params.append(check_special(form))
    params.sort(key=lambda f: f[0][0])
    return Cluster(r1.base, tuple(params))


def brute_intersection(c1, c2):
    """Vertex and edge sets of the plain graph intersection."""
    return c1.vertices & c2.vertices, c1.edges & c2.edges


# ---------------------------------------------------------------------------
# cube fillings via the junction hyperplane arrangement


class CellComplexPiece:
    """The filled cluster: cells of the unit cube subdivided by the
    hyperplanes z_i = z_{i+1}, one per consecutive junction.  Cells are
    signatures: a 0/1/interior status per coordinate and an order relation
    per cut junction."""

    def __init__(self, n, cut_junctions):
        self.n = n
        self.cuts = tuple(sorted(cut_junctions))
        self.cells = [
            sig
            for sig in itertools.product(
                *(["01*"] * n + ["<=>"] * len(self.cuts))
            )
            if self._feasible(sig)
        ]
        self._dims = {sig: self._dimension(sig) for sig in self.cells}

    def _classes(self, sig):
        # union-find over coordinates joined by '=' at cut junctions
        parent = list(range(self.n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for j, rel in zip(self.cuts, sig[self.n:]):
            if rel == "=":
                parent[find(j)] = find(j + 1)
        return find

    def _feasible(self, sig):
        find = self._classes(sig)
        pin = {}
        for i, st in enumerate(sig[: self.n]):
            root = find(i)
            if st in "01":
                if pin.get(root, st) != st:
                    return False
                pin[root] = st
            else:
                if pin.get(root) in ("0", "1"):
                    return False
                pin[root] = None
        # strict order digraph over class roots plus the constants
        edges = set()
        roots = {find(i) for i in range(self.n)}
        for r in roots:
            if pin.get(r) is None:
                edges.add(("0", r))
                edges.add((r, "1"))
        edges.add(("0", "1"))
        for j, rel in zip(self.cuts, sig[self.n:]):
            if rel == "=":
                continue
            a, b = find(j), find(j + 1)
            if rel == ">":
                a, b = b, a
            a = pin[a] if pin.get(a) is not None else a
            b = pin[b] if pin.get(b) is not None else b
            if a == b:
                return False
            edges.add((a, b))
        # cycle detection
        nodes = {x for e in edges for x in e}
        succ = {x: [] for x in nodes}
        for a, b in edges:
            succ[a].append(b)
        state = {}

        def cyclic(x):
            state[x] = 1
            for y in succ[x]:
                if state.get(y) == 1:
                    return True
                if y not in state and cyclic(y):
                    return True
            state[x] = 2
            return False

        return not any(x not in state and cyclic(x) for x in nodes)

    def _dimension(self, sig):
        find = self._classes(sig)
        free = set()
        for i, st in enumerate(sig[: self.n]):
            if st == "*":
                free.add(find(i))
        return len(free)

    def dim(self, cell):
        return self._dims[cell]

    def f_vector(self):
        top = max(self._dims.values(), default=0)
        return tuple(
            sum(1 for d in self._dims.values() if d == k)
            for k in range(top + 1)
        )

    def euler_characteristic(self):
        return sum((-1) ** d for d in self._dims.values())

    def is_face(self, c1, c2):
        """Whether cell c1 lies in the closure of cell c2."""
        for i in range(self.n):
            if c2[i] in "01" and c1[i] != c2[i]:
                return False
        for k in range(len(self.cuts)):
            r2 = c2[self.n + k]
            r1 = c1[self.n + k]
            if r2 == "=" and r1 != "=":
                return False
            if r2 in "<>" and r1 not in (r2, "="):
                return False
        return True

    def faces_of(self, cell):
        return [c for c in self.cells if c != cell and self.is_face(c, cell)]

    def vertex_subset(self, cell):
        """The corner subset of a 0-cell."""
        if self.dim(cell) != 0:
            raise ValueError("not a vertex cell")
        find = self._classes(cell)
        pin = {}
        for i, st in enumerate(cell[: self.n]):
            if st in "01":
                pin[find(i)] = st
        return frozenset(
            i for i in range(self.n) if pin[find(i)] == "1"
        )

    def check_incidence(self):
        """Grading sanity of the face poset: each edge has two vertex ends,
        each k-cell has at least two codimension-one faces for k >= 1."""
        for cell in self.cells:
            d = self.dim(cell)
            faces = self.faces_of(cell)
            if d >= 1:
                ends = [c for c in faces if self.dim(c) == 0]
                if d == 1 and len(ends) != 2:
                    return False
                if len([c for c in faces if self.dim(c) == d - 1]) < 2:
                    return False
        return True


def enumerate_cells(cluster, max_dim=4):
    """Fill the cluster: the cellular decomposition of the n-cube subdivided
    along its consecutive junctions."""
    if cluster.n > max_dim:
        raise ValueError("cluster dimension exceeds the configured bound")
    params = balanced_parametrizations(cluster)[0].params
    cuts = [
        j
        for j in range(len(params) - 1)
        if pair_consecutive(params[j][-1][0], params[j + 1][0][0])
    ]
    return CellComplexPiece(cluster.n, cuts)


def skeleton_matches(piece, cluster):
    """Whether the 1-skeleton of a filling agrees with the cluster graph."""
    ref = balanced_parametrizations(cluster)[0]
    verts = {c: ref.vertex(piece.vertex_subset(c))
             for c in piece.cells if piece.dim(c) == 0}
    if set(verts.values()) != cluster.vertices:
        return False
    edge_cells = [c for c in piece.cells if piece.dim(c) == 1]
    if len(edge_cells) != len(cluster.edges):
        return False
    seen = set()
    for c in edge_cells:
        ends = [verts[f] for f in piece.faces_of(c) if piece.dim(f) == 0]
        if len(ends) != 2:
            return False
        seen.add(frozenset(ends))
    return seen == set(cluster.edges)


def cluster_orbit_invariant(cluster):
    """Orbit invariant under the group action: computed at the type-1
    balanced basepoint as (leading type, parities, junction consecutiveness).
    Two clusters lie in one orbit exactly when the invariants agree."""
    params = balanced_parametrizations(cluster)[0].params
    return (
        type_of(params[0]) if params else 0,
        tuple(parity_of(f) for f in params),
        tuple(
            pair_consecutive(a[-1][0], b[0][0])
            for a, b in zip(params, params[1:])
        ),
    )


def link_flag_check(clusters, vertex):
    """Gromov flag condition at a vertex of a union of filled clusters:
    every pairwise-filled set of corner edges must itself span a cluster
    corner in the piece.  Returns (True, None) or (False, witness edges)."""
    clusters = list(clusters)
    corners = []
    for c in clusters:
        if vertex in c.vertices:
            corners.append(frozenset(c.facial_edges_at(vertex)))
    nodes = sorted(set().union(*corners)) if corners else []

    def filled(subset):
        return any(subset <= corner for corner in corners)

    for size in range(2, len(nodes) + 1):
        for combo in itertools.combinations(nodes, size):
            subset = frozenset(combo)
            if filled(subset):
                continue
            if all(
                filled(frozenset(p))
                for p in itertools.combinations(combo, 2)
            ):
                return False, subset
    return True, None
