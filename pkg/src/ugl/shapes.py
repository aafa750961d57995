"""Graph shapes: recognizers, certificates, and obstruction catalogs.

Two hereditary graph classes ("shapes") are supported:

* ``tree``: comparability graphs of rooted forests, equivalently the
  graphs satisfying Wolk's diagonal condition (every path x0-x1-x2-x3
  has a chord x0-x2 or x1-x3), equivalently the graphs with no induced
  4-cycle and no induced 4-path.  The three characterizations are
  implemented independently and tested against each other.
* ``interval``: intersection graphs of open intervals on the line.  A
  graph is a member iff it has no chordless cycle of length >= 4 and no
  asteroidal triple (Lekkerkerker-Boland); non-membership certificates
  are a chordless cycle or an asteroidal triple, and membership
  certificates are explicit interval models found by backtracking over
  interleavings of the 2n endpoints.

The minimal forbidden induced subgraphs of the interval shape form the
classical catalog: the two fixed seven-vertex graphs (here families
``I`` and ``II``), the holes ``III(k)`` for k >= 4, and two one-parameter
families ``IV(m)`` (m >= 2; ``IV(2)`` is the net) and ``V(n)`` (n >= 1;
``V(1)`` is the 3-sun).  ``family_graph`` builds each with a fixed,
documented labeling so that downstream edge data can refer to concrete
vertices.
"""

from itertools import combinations

from .errors import CapabilityError, InputError
from .graphs import (INDUCED, Embedding, Graph, canonical_key, effective_cap,
                     enumerate_graphs, find_embedding,
                     graph_from_canonical_key, induced_subgraph)

TREE = "tree"
INTERVAL = "interval"
SHAPES = (TREE, INTERVAL)

OBSTRUCTION_CAP = 7


def check_shape(shape):
    if shape not in SHAPES:
        raise InputError("unknown shape %r (expected 'tree' or 'interval')" % shape)


# ---------------------------------------------------------------------------
# the family catalog
# ---------------------------------------------------------------------------

FIXED_FAMILIES = ("C4", "L4", "I", "II")
PARAMETRIC_FAMILIES = ("III", "IV", "V")


def family_graph(kind, param=None):
    """Build a catalog family member with its fixed labeling.

    ``C4``: the 4-cycle 0-1-2-3-0.  ``L4``: the 4-path 0-1-2-3.

    ``I``: hub 0 with three length-two arms; arm k (k = 0, 1, 2) has
    inner vertex 2k+1 adjacent to the hub and tip 2k+2 adjacent to the
    inner vertex.

    ``II``: apex 0 adjacent to 1..5, induced path 1-2-3-4-5, pendant 6
    attached to 3.

    ``III(k)``, k >= 4: the k-cycle 0-1-..-(k-1)-0.

    ``IV(m)``, m >= 2: apex 0 adjacent only to hub 1; hub adjacent to
    every base vertex 4..m+3; base path 4-5-..-(m+3); guard 2 adjacent
    to the first base vertex, guard 3 to the last.  2m+2 edges; IV(2)
    is the net.

    ``V(n)``, n >= 1: hubs 0 and 1 adjacent to each other and to every
    base vertex 5..n+4; base path; outer 2 adjacent to hub 0 and the
    first base vertex; outer 3 adjacent to both hubs; outer 4 adjacent
    to hub 1 and the last base vertex.  3n+6 edges; V(1) is the 3-sun.
    """
    if kind in ("C4", "L4"):
        if param is not None:
            raise InputError("family %s takes no parameter" % kind)
        edges = [(0, 1), (1, 2), (2, 3)]
        if kind == "C4":
            edges.append((0, 3))
        return Graph(4, edges)
    if kind == "I":
        if param is not None:
            raise InputError("family I takes no parameter")
        return Graph(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)])
    if kind == "II":
        if param is not None:
            raise InputError("family II takes no parameter")
        edges = [(0, k) for k in range(1, 6)]
        edges += [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)]
        return Graph(7, edges)
    if kind == "III":
        if param is None or param < 4:
            raise InputError("family III needs a cycle length >= 4")
        return Graph(param, [(i, (i + 1) % param) for i in range(param)])
    if kind == "IV":
        if param is None or param < 2:
            raise InputError("family IV needs a base length >= 2")
        m = param
        edges = [(0, 1)]
        edges += [(1, 4 + i) for i in range(m)]
        edges += [(2, 4), (3, m + 3)]
        edges += [(4 + i, 5 + i) for i in range(m - 1)]
        return Graph(m + 4, edges)
    if kind == "V":
        if param is None or param < 1:
            raise InputError("family V needs a base length >= 1")
        n = param
        edges = [(0, 1)]
        edges += [(0, 5 + i) for i in range(n)]
        edges += [(1, 5 + i) for i in range(n)]
        edges += [(5 + i, 6 + i) for i in range(n - 1)]
        edges += [(2, 0), (2, 5), (3, 0), (3, 1), (4, 1), (4, n + 4)]
        return Graph(n + 5, edges)
    raise InputError("unknown family kind %r" % (kind,))


def family_str(kind, param=None):
    return kind if param is None else "%s(%d)" % (kind, param)


def parse_family(token):
    """Parse a family token like ``C4`` or ``III(5)``."""
    if token in FIXED_FAMILIES:
        return token, None
    if "(" in token and token.endswith(")"):
        kind, _, rest = token.partition("(")
        if kind in PARAMETRIC_FAMILIES:
            try:
                param = int(rest[:-1])
            except ValueError:
                raise InputError("malformed family parameter in %r" % token)
            family_graph(kind, param)
            return kind, param
    raise InputError("unknown family token %r" % token)


def shape_families(shape, max_vertices):
    """Catalog families for ``shape`` with at most ``max_vertices`` vertices,
    in deterministic order."""
    check_shape(shape)
    out = []
    if shape == TREE:
        if max_vertices >= 4:
            out = [("C4", None), ("L4", None)]
        return out
    if max_vertices >= 7:
        out += [("I", None), ("II", None)]
    out += [("III", k) for k in range(4, max_vertices + 1)]
    out += [("IV", m) for m in range(2, max_vertices - 3)]
    out += [("V", n) for n in range(1, max_vertices - 4)]
    return out


# ---------------------------------------------------------------------------
# the diagonal condition
# ---------------------------------------------------------------------------

def diagonal_violation(g):
    """First quadruple x0-x1-x2-x3 (a walk of three edges on distinct
    vertices) with neither diagonal x0-x2 nor x1-x3, or None."""
    n = g.n
    for x0 in range(n):
        for x1 in range(n):
            if x1 == x0 or not g.has_edge(x0, x1):
                continue
            for x2 in range(n):
                if x2 in (x0, x1) or not g.has_edge(x1, x2):
                    continue
                if g.has_edge(x0, x2):
                    continue
                for x3 in range(n):
                    if x3 in (x0, x1, x2) or not g.has_edge(x2, x3):
                        continue
                    if not g.has_edge(x1, x3):
                        return (x0, x1, x2, x3)
    return None


def is_diagonal(g):
    return diagonal_violation(g) is None


# ---------------------------------------------------------------------------
# interval obstructions: chordless cycles and asteroidal triples
# ---------------------------------------------------------------------------

def find_chordless_cycle(g, min_len=4):
    """First chordless cycle of length >= min_len as a vertex list, or None.

    The search grows induced paths whose start is their minimum vertex
    and closes them when the tail sees the start and nothing else, so the
    first hit is deterministic.
    """
    n = g.n
    rows = g.rows

    def grow(path, blocked):
        tail = path[-1]
        m = rows[tail] & ~blocked
        while m:
            w = (m & -m).bit_length() - 1
            m &= m - 1
            back = rows[w]
            inner = False
            sees_start = len(path) >= 2 and bool(back >> path[0] & 1)
            for p in path[1:-1]:
                if back >> p & 1:
                    inner = True
                    break
            if inner:
                continue
            if sees_start:
                if len(path) + 1 >= min_len:
                    return path + [w]
                continue
            got = grow(path + [w], blocked | (1 << w))
            if got:
                return got
        return None

    for v0 in range(n):
        low = (1 << (v0 + 1)) - 1
        got = grow([v0], low | (1 << v0))
        if got:
            return got
    return None


def _avoid_components(g, v):
    """Component id of each vertex in g minus the closed neighborhood of v
    (-1 inside the neighborhood)."""
    n = g.n
    comp = [-1] * n
    banned = g.rows[v] | (1 << v)
    cid = 0
    for s in range(n):
        if comp[s] != -1 or banned >> s & 1:
            continue
        stack = [s]
        comp[s] = cid
        while stack:
            u = stack.pop()
            m = g.rows[u] & ~banned
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                if comp[w] == -1:
                    comp[w] = cid
                    stack.append(w)
        cid += 1
    return comp


def find_asteroidal_triple(g):
    """First asteroidal triple (a, b, c) in lexicographic order, or None."""
    n = g.n
    comps = [_avoid_components(g, v) for v in range(n)]
    for a, b, c in combinations(range(n), 3):
        if g.has_edge(a, b) or g.has_edge(a, c) or g.has_edge(b, c):
            continue
        if (comps[c][a] == comps[c][b] != -1
                and comps[b][a] == comps[b][c] != -1
                and comps[a][b] == comps[a][c] != -1):
            return (a, b, c)
    return None


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

IRREDUCIBLE_CYCLE = "irreducible-cycle"
ASTEROIDAL_TRIPLE = "asteroidal-triple"
FORBIDDEN_FAMILY = "forbidden-family"
WITNESS_KINDS = (IRREDUCIBLE_CYCLE, ASTEROIDAL_TRIPLE, FORBIDDEN_FAMILY)


class ObstructionWitness:
    """A checkable certificate of non-membership."""

    __slots__ = ("kind", "vertices", "family")

    def __init__(self, kind, vertices, family=None):
        if kind not in WITNESS_KINDS:
            raise InputError("unknown witness kind %r" % kind)
        if kind == FORBIDDEN_FAMILY:
            if family is None:
                raise InputError("forbidden-family witness needs a family")
            family_graph(*family)
        elif family is not None:
            raise InputError("%s witness takes no family" % kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "vertices", tuple(vertices))
        object.__setattr__(self, "family", family)

    def __setattr__(self, name, value):
        raise AttributeError("ObstructionWitness is immutable")

    def __eq__(self, other):
        return (isinstance(other, ObstructionWitness)
                and (self.kind, self.vertices, self.family)
                == (other.kind, other.vertices, other.family))

    def __hash__(self):
        return hash((self.kind, self.vertices, self.family))

    def __repr__(self):
        return "ObstructionWitness(%r, %r, %r)" % (self.kind, self.vertices, self.family)

    def checks(self, g):
        """Re-verify this certificate against g from scratch."""
        vs = self.vertices
        if len(set(vs)) != len(vs) or any(not 0 <= v < g.n for v in vs):
            return False
        if self.kind == IRREDUCIBLE_CYCLE:
            k = len(vs)
            if k < 4:
                return False
            for i, j in combinations(range(k), 2):
                adjacent = g.has_edge(vs[i], vs[j])
                consecutive = j - i == 1 or (i == 0 and j == k - 1)
                if adjacent != consecutive:
                    return False
            return True
        if self.kind == ASTEROIDAL_TRIPLE:
            if len(vs) != 3:
                return False
            a, b, c = vs
            if g.has_edge(a, b) or g.has_edge(a, c) or g.has_edge(b, c):
                return False
            for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
                comp = _avoid_components(g, z)
                if comp[x] == -1 or comp[x] != comp[y]:
                    return False
            return True
        fg = family_graph(*self.family)
        return Embedding(vs, INDUCED).checks(fg, g)


def format_witness(w):
    parts = ["w", w.kind]
    if w.kind == FORBIDDEN_FAMILY:
        parts.append(family_str(*w.family))
    parts.extend(str(v) for v in w.vertices)
    return " ".join(parts) + "\n"


def parse_witness(text):
    parts = text.split()
    if len(parts) < 2 or parts[0] != "w":
        raise InputError("malformed witness line %r" % text)
    kind = parts[1]
    if kind not in WITNESS_KINDS:
        raise InputError("unknown witness kind %r" % kind)
    rest = parts[2:]
    family = None
    if kind == FORBIDDEN_FAMILY:
        if not rest:
            raise InputError("forbidden-family witness needs a family token")
        family = parse_family(rest[0])
        rest = rest[1:]
    try:
        vertices = [int(t) for t in rest]
    except ValueError:
        raise InputError("malformed witness vertices in %r" % text)
    return ObstructionWitness(kind, vertices, family)


# ---------------------------------------------------------------------------
# recognition
# ---------------------------------------------------------------------------

def recognize(shape, g):
    """None for members, otherwise a deterministic ObstructionWitness."""
    check_shape(shape)
    if shape == TREE:
        for kind in ("C4", "L4"):
            emb = find_embedding(family_graph(kind), g, INDUCED)
            if emb is not None:
                return ObstructionWitness(FORBIDDEN_FAMILY, emb.mapping, (kind, None))
        return None
    cycle = find_chordless_cycle(g)
    if cycle is not None:
        return ObstructionWitness(IRREDUCIBLE_CYCLE, cycle)
    triple = find_asteroidal_triple(g)
    if triple is not None:
        return ObstructionWitness(ASTEROIDAL_TRIPLE, triple)
    return None


_MEMBER_CACHE = {TREE: {}, INTERVAL: {}}


def is_member(shape, g):
    """Membership with a per-shape cache keyed by canonical form."""
    check_shape(shape)
    cache = _MEMBER_CACHE[shape]
    key = canonical_key(g)
    if key not in cache:
        cache[key] = recognize(shape, g) is None
    return cache[key]


# ---------------------------------------------------------------------------
# interval models
# ---------------------------------------------------------------------------

class IntervalModel:
    """Open intervals (a_v, b_v) with integer endpoints, one per vertex."""

    __slots__ = ("n", "intervals", "distinct")

    def __init__(self, n, intervals, distinct=False):
        intervals = tuple((int(a), int(b)) for a, b in intervals)
        if len(intervals) != n:
            raise InputError("expected %d intervals, got %d" % (n, len(intervals)))
        for a, b in intervals:
            if a >= b:
                raise InputError("empty interval (%d, %d)" % (a, b))
        if distinct:
            ends = [e for ab in intervals for e in ab]
            if len(set(ends)) != len(ends):
                raise InputError("distinct-endpoint model has a repeated endpoint")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "intervals", intervals)
        object.__setattr__(self, "distinct", distinct)

    def __setattr__(self, name, value):
        raise AttributeError("IntervalModel is immutable")

    def __eq__(self, other):
        return (isinstance(other, IntervalModel)
                and (self.n, self.intervals, self.distinct)
                == (other.n, other.intervals, other.distinct))

    def __repr__(self):
        return "IntervalModel(%d, %r)" % (self.n, self.intervals)

    def checks(self, g):
        """True iff intersection of the open intervals matches adjacency."""
        if self.n != g.n:
            return False
        iv = self.intervals
        for u, v in combinations(range(g.n), 2):
            meets = max(iv[u][0], iv[v][0]) < min(iv[u][1], iv[v][1])
            if meets != g.has_edge(u, v):
                return False
        return True


def format_interval_model(m):
    return "".join("i %d %d %d\n" % (v, *m.intervals[v]) for v in range(m.n))


def parse_interval_model(text, distinct=False):
    rows = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] != "i" or len(parts) != 4:
            raise InputError("malformed interval line %r" % line)
        try:
            v, a, b = int(parts[1]), int(parts[2]), int(parts[3])
        except ValueError:
            raise InputError("malformed interval line %r" % line)
        if v in rows:
            raise InputError("duplicate interval for vertex %d" % v)
        rows[v] = (a, b)
    n = len(rows)
    if set(rows) != set(range(n)):
        raise InputError("interval model must cover vertices 0..n-1")
    return IntervalModel(n, [rows[v] for v in range(n)], distinct)


def realize_intervals(g, distinct_endpoints=False):
    """An IntervalModel for g, or an ObstructionWitness if none exists.

    Backtracks over interleavings of the 2n endpoints: at each slot the
    next unplaced left endpoint or pending right endpoint is chosen, in
    ascending vertex order.  Opening a vertex next to an active
    non-neighbor, or closing one before all its neighbors were met,
    prunes the branch.  Endpoints land on 0..2n-1, so the model is
    normalized and all endpoints are pairwise distinct in either mode.
    """
    n = g.n
    if n == 0:
        return IntervalModel(0, (), distinct_endpoints)
    rows = g.rows
    left = [None] * n
    right = [None] * n
    met = [0] * n

    def rec(pos, active):
        if pos == 2 * n:
            return True
        for v in range(n):
            bit = 1 << v
            if left[v] is None:
                if active & ~rows[v]:
                    continue
                left[v] = pos
                met[v] |= active
                m = active
                while m:
                    u = (m & -m).bit_length() - 1
                    met[u] |= bit
                    m &= m - 1
                if rec(pos + 1, active | bit):
                    return True
                m = active
                while m:
                    u = (m & -m).bit_length() - 1
                    met[u] &= ~bit
                    m &= m - 1
                met[v] = 0
                left[v] = None
            elif right[v] is None and active & bit:
                if met[v] != rows[v]:
                    continue
                right[v] = pos
                if rec(pos + 1, active & ~bit):
                    return True
                right[v] = None
        return False

    if rec(0, 0):
        return IntervalModel(n, [(left[v], right[v]) for v in range(n)],
                             distinct_endpoints)
    witness = recognize(INTERVAL, g)
    assert witness is not None, "realization failed on an interval graph"
    return witness


# ---------------------------------------------------------------------------
# minimal obstructions
# ---------------------------------------------------------------------------

def minimal_obstructions(shape, max_n, jobs=1):
    """Canonical representatives of every minimal non-member with at most
    ``max_n`` vertices, in enumeration order.  Bounded to max_n <= 7."""
    check_shape(shape)
    cap = effective_cap(OBSTRUCTION_CAP)
    if max_n > cap:
        raise CapabilityError("minimal obstruction search bounded to n <= %d" % cap)
    out = []
    member_at = {}
    for n in range(0, max_n + 1):
        reps = enumerate_graphs(n, jobs=jobs)
        level = {}
        if jobs > 1 and len(reps) > 50:
            from multiprocessing import Pool
            chunks = [reps[i::jobs] for i in range(jobs) if reps[i::jobs]]
            with Pool(len(chunks)) as pool:
                parts = pool.starmap(_member_chunk, [(shape, c) for c in chunks])
            for part in parts:
                level.update(part)
        else:
            level = _member_chunk(shape, reps)
        for g in reps:
            if level[canonical_key(g)]:
                continue
            minimal = True
            for v in range(n):
                sub = induced_subgraph(g, [u for u in range(n) if u != v])
                if not member_at[canonical_key(sub)]:
                    minimal = False
                    break
            if minimal:
                out.append(g)
        member_at.update(level)
    return out


def _member_chunk(shape, graphs):
    return {canonical_key(g): recognize(shape, g) is None for g in graphs}


# ---------------------------------------------------------------------------
# rooted forests and their comparability graphs
# ---------------------------------------------------------------------------

def _rooted_trees(max_size):
    """Rooted trees as canonical nested tuples, per size; a tree is the
    sorted tuple of its child subtrees."""
    trees = {1: [()]}
    sizes = {(): 1}
    for s in range(2, max_size + 1):
        found = set()

        def fill(remaining, pool_index, chosen, pool):
            if remaining == 0:
                found.add(tuple(sorted(chosen)))
                return
            for i in range(pool_index, len(pool)):
                t = pool[i]
                if sizes[t] <= remaining:
                    fill(remaining - sizes[t], i, chosen + [t], pool)

        pool = [t for size in range(1, s) for t in trees[size]]
        fill(s - 1, 0, [], pool)
        trees[s] = sorted(found)
        for t in trees[s]:
            sizes[t] = s
    return trees, sizes


def _forest_graph(forest, sizes):
    """Comparability graph of a forest (ancestor pairs are edges)."""
    total = sum(sizes[t] for t in forest)
    edges = []
    next_id = 0

    def walk(tree, ancestors):
        nonlocal next_id
        me = next_id
        next_id += 1
        edges.extend((a, me) for a in ancestors)
        for child in tree:
            walk(child, ancestors + [me])

    for tree in forest:
        walk(tree, [])
    return Graph(total, edges)


def forest_comparability_classes(max_n):
    """Canonical forms of comparability graphs of all rooted forests with
    at most ``max_n`` nodes, sorted.  Bounded to max_n <= 7."""
    cap = effective_cap(OBSTRUCTION_CAP)
    if max_n > cap:
        raise CapabilityError("forest enumeration bounded to n <= %d" % cap)
    trees, sizes = _rooted_trees(max_n) if max_n >= 1 else ({}, {})
    pool = [t for s in range(1, max_n + 1) for t in trees[s]]
    forests = []

    def fill(remaining, pool_index, chosen):
        forests.append(list(chosen))
        for i in range(pool_index, len(pool)):
            t = pool[i]
            if sizes[t] <= remaining:
                fill(remaining - sizes[t], i, chosen + [t])

    fill(max_n, 0, [])
    keys = {canonical_key(_forest_graph(f, sizes)) for f in forests}
    return [graph_from_canonical_key(n, key) for n, key in sorted(keys)]
