"""Integer homology of a closed oriented surface given as a 2-complex.

The complex is a set of vertices, directed edges, and polygonal faces whose
boundary words are sequences of (edge id, +1/-1) letters.  Two independent
computations are run and compared:

* Smith normal form of the boundary matrices gives the rank of H_1 and
  detects torsion (there must be none for a closed orientable surface).
* Contracting a spanning tree and merging all faces into a single polygon
  gives an explicit basis of H_1 carrying the intersection form, read off
  from how letter pairs interleave around the polygon.

The form is then normalized to the standard symplectic matrix by an exact
integer change of basis, so every cycle class lands in the same coordinates
that the twist-action code uses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .symplectic import H1Vector, Matrix, SymplecticSpace

Letter = tuple[str, int]  # (edge id, +1 or -1)


class HomologyRankError(ValueError):
    """Computed H_1 does not look like a closed orientable surface."""


@dataclass(frozen=True)
class CellComplex:
    """Vertices, directed edges (id -> (tail, head)), and face boundary words."""

    vertices: tuple[str, ...]
    edges: dict[str, tuple[str, str]]
    faces: tuple[tuple[Letter, ...], ...]

    def __post_init__(self) -> None:
        vertex_set = set(self.vertices)
        if len(vertex_set) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        for eid, (tail, head) in self.edges.items():
            if tail not in vertex_set or head not in vertex_set:
                raise ValueError(f"edge {eid!r} has endpoints outside the vertex set")
        counts: dict[str, list[int]] = {eid: [0, 0] for eid in self.edges}
        for word in self.faces:
            at = None
            for eid, sign in word:
                if eid not in self.edges:
                    raise ValueError(f"face word uses unknown edge {eid!r}")
                if sign not in (1, -1):
                    raise ValueError(f"face letter sign must be +1 or -1, got {sign}")
                counts[eid][0 if sign == 1 else 1] += 1
                tail, head = self.edges[eid]
                start, end = (tail, head) if sign == 1 else (head, tail)
                if at is not None and at != start:
                    raise ValueError(f"face word breaks at edge {eid!r}: {at} != {start}")
                at = end
            if word:
                eid, sign = word[0]
                tail, head = self.edges[eid]
                start = tail if sign == 1 else head
                if at != start:
                    raise ValueError("face word does not close up")
        for eid, (pos, neg) in counts.items():
            if (pos, neg) != (1, 1):
                raise ValueError(
                    f"edge {eid!r} appears {pos} times positively and {neg} negatively; "
                    "a coherently oriented closed surface needs exactly one of each"
                )

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        parent = {v: v for v in self.vertices}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for tail, head in self.edges.values():
            ra, rb = find(tail), find(head)
            if ra != rb:
                parent[ra] = rb
        return len({find(v) for v in self.vertices}) == 1


def smith_invariant_factors(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix (Smith normal form)."""
    a = [list(map(int, row)) for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    factors: list[int] = []
    t = 0
    while t < m and t < n:
        piv = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(a[i][j])
                if v and (best is None or v < best):
                    best, piv = v, (i, j)
        if piv is None:
            break
        i0, j0 = piv
        a[t], a[i0] = a[i0], a[t]
        for row in a:
            row[t], row[j0] = row[j0], row[t]
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    if q:
                        for j in range(t, n):
                            a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    if q:
                        for i in range(t, m):
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for i in range(t, m):
                            a[i][t], a[i][j] = a[i][j], a[i][t]
                        dirty = True
            if not dirty:
                break
        d = a[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % d != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(t, n):
                a[t][j] += a[offender][j]
            continue
        factors.append(abs(d))
        t += 1
    return factors


def _skew_form(a: list[list[int]], i: int, j: int) -> int:
    return a[i][j]


def symplectic_change_of_basis(form: Sequence[Sequence[int]]) -> Matrix:
    """Integer U with U^T A U equal to the standard block-diagonal J.

    Raises HomologyRankError when A is degenerate or not unimodular, both of
    which mean the input was not the intersection form of a closed oriented
    surface basis.
    """
    k = len(form)
    if k % 2 != 0:
        raise HomologyRankError(f"odd-dimensional form of size {k}")
    a = [list(map(int, row)) for row in form]
    for i in range(k):
        for j in range(k):
            if a[i][j] != -a[j][i]:
                raise HomologyRankError("form is not skew-symmetric")
    u = [[1 if i == j else 0 for j in range(k)] for i in range(k)]

    def colop(j: int, i: int, lam: int) -> None:
        # basis change new_j = old_j + lam*old_i, applied as congruence
        for r in range(k):
            a[r][j] += lam * a[r][i]
        for r in range(k):
            a[j][r] += lam * a[i][r]
        for r in range(k):
            u[r][j] += lam * u[r][i]

    def colswap(i: int, j: int) -> None:
        for r in range(k):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        a[i], a[j] = a[j], a[i]
        for r in range(k):
            u[r][i], u[r][j] = u[r][j], u[r][i]

    def colneg(i: int) -> None:
        for r in range(k):
            a[r][i] = -a[r][i]
        for r in range(k):
            a[i][r] = -a[i][r]
        for r in range(k):
            u[r][i] = -u[r][i]

    for t in range(0, k, 2):
        while True:
            entries = [(j, a[t][j]) for j in range(t + 1, k) if a[t][j] != 0]
            if not entries:
                raise HomologyRankError("degenerate intersection form")
            if len(entries) == 1:
                j0, v = entries[0]
                if abs(v) != 1:
                    raise HomologyRankError("intersection form is not unimodular")
                if j0 != t + 1:
                    colswap(j0, t + 1)
                if a[t][t + 1] == -1:
                    colneg(t + 1)
                break
            jmin = min(entries, key=lambda p: abs(p[1]))[0]
            for j, _ in entries:
                if j == jmin:
                    continue
                q = a[t][j] // a[t][jmin]
                if q:
                    colop(j, jmin, -q)
        for j in range(t + 2, k):
            v = a[t + 1][j]
            if v:
                colop(j, t, v)
            v = a[t][j]
            if v:
                colop(j, t + 1, -v)

    expected = SymplecticSpace(k // 2).pairing_matrix
    if tuple(tuple(row) for row in a) != expected:
        raise HomologyRankError("symplectic normalization did not reach the standard form")
    return tuple(tuple(row) for row in u)


class SurfaceHomology:
    """H_1 of a CellComplex with its intersection form in standard coordinates.

    Attributes
    ----------
    rank : int
        Rank of H_1; twice the genus.
    space : SymplecticSpace
        Standard symplectic space of the surface's genus.
    polygon_edges : tuple of str
        Edge ids surviving as the polygon basis before normalization.
    polygon_form : Matrix
        Intersection form on that basis (skew, unimodular).
    """

    def __init__(self, complex_: CellComplex):
        self.complex = complex_
        if not complex_.is_connected():
            raise ValueError("complex is not connected")

        edge_ids = list(complex_.edges)
        edge_index = {eid: i for i, eid in enumerate(edge_ids)}
        v_index = {v: i for i, v in enumerate(complex_.vertices)}

        d1 = [[0] * len(edge_ids) for _ in complex_.vertices]
        for eid, (tail, head) in complex_.edges.items():
            d1[v_index[head]][edge_index[eid]] += 1
            d1[v_index[tail]][edge_index[eid]] -= 1
        d2 = [[0] * len(complex_.faces) for _ in edge_ids]
        for fi, word in enumerate(complex_.faces):
            for eid, sign in word:
                d2[edge_index[eid]][fi] += sign

        rank_d1 = len(smith_invariant_factors(d1))
        d2_factors = smith_invariant_factors(d2)
        rank_d2 = len(d2_factors)
        torsion = [d for d in d2_factors if d not in (0, 1)]
        if torsion:
            raise HomologyRankError(f"H_1 has torsion with invariant factors {torsion}")
        self.rank = (len(edge_ids) - rank_d1) - rank_d2
        if self.rank % 2 != 0 or self.rank < 2:
            raise HomologyRankError(f"H_1 rank {self.rank} is not that of a surface of genus >= 1")

        self._tree = self._spanning_tree()
        self._substitutions: list[tuple[str, dict[str, int]]] = []
        word = self._merge_faces()
        self.polygon_edges, self.polygon_form = self._interleaving_form(word)
        if len(self.polygon_edges) != self.rank:
            raise HomologyRankError(
                f"polygon has {len(self.polygon_edges)} letters but H_1 rank is {self.rank}"
            )
        self._u = symplectic_change_of_basis(self.polygon_form)
        self._u_inv = self._inverse_from_form(self._u, self.polygon_form)
        self.space = SymplecticSpace(self.rank // 2)

    # -- construction steps -------------------------------------------------

    def _spanning_tree(self) -> set[str]:
        adj: dict[str, list[tuple[str, str]]] = {v: [] for v in self.complex.vertices}
        for eid, (tail, head) in self.complex.edges.items():
            if tail != head:
                adj[tail].append((eid, head))
                adj[head].append((eid, tail))
        tree: set[str] = set()
        seen = {self.complex.vertices[0]}
        frontier = [self.complex.vertices[0]]
        while frontier:
            v = frontier.pop()
            for eid, other in adj[v]:
                if other not in seen:
                    seen.add(other)
                    tree.add(eid)
                    frontier.append(other)
        return tree

    def _merge_faces(self) -> list[Letter]:
        faces: list[list[Letter]] = [
            [(eid, sign) for eid, sign in word if eid not in self._tree]
            for word in self.complex.faces
        ]
        while len(faces) > 1:
            shared = self._find_shared_edge(faces)
            if shared is None:
                raise HomologyRankError("faces cannot be merged along a common edge")
            fi, fj, eid = shared
            merged = self._glue(faces[fi], faces[fj], eid)
            keep = [f for idx, f in enumerate(faces) if idx not in (fi, fj)]
            keep.append(merged)
            faces = keep
        return faces[0] if faces else []

    @staticmethod
    def _find_shared_edge(faces: list[list[Letter]]):
        location: dict[str, int] = {}
        for idx, face in enumerate(faces):
            for eid, _ in face:
                if eid in location and location[eid] != idx:
                    return (location[eid], idx, eid)
                location[eid] = idx
        return None

    def _glue(self, f1: list[Letter], f2: list[Letter], eid: str) -> list[Letter]:
        s1 = next(sign for e, sign in f1 if e == eid)
        s2 = next(sign for e, sign in f2 if e == eid)
        if s1 == s2:
            raise HomologyRankError(f"edge {eid!r} occurs with equal signs in two faces")
        p1 = next(i for i, (e, _) in enumerate(f1) if e == eid)
        p2 = next(i for i, (e, _) in enumerate(f2) if e == eid)
        # rotate each word so the shared letter sits last, then drop it
        r1 = f1[p1 + 1:] + f1[:p1]
        r2 = f2[p2 + 1:] + f2[:p2]
        # the face relation makes the dropped letter a word in the rest
        repl: dict[str, int] = {}
        for e, sign in r1:
            repl[e] = repl.get(e, 0) - s1 * sign
        self._substitutions.append((eid, repl))
        return r1 + r2

    @staticmethod
    def _interleaving_form(word: list[Letter]) -> tuple[tuple[str, ...], Matrix]:
        occurrences: dict[str, dict[int, int]] = {}
        for pos, (eid, sign) in enumerate(word):
            occurrences.setdefault(eid, {})[sign] = pos
        for eid, occ in occurrences.items():
            if set(occ) != {1, -1}:
                raise HomologyRankError(f"edge {eid!r} does not occur once with each sign")
        edge_ids = tuple(sorted(occurrences))
        length = len(word)
        form = []
        for e in edge_ids:
            row = []
            pe, ne = occurrences[e][1], occurrences[e][-1]
            span = (ne - pe) % length
            for f in edge_ids:
                if f == e:
                    row.append(0)
                    continue
                pf = (occurrences[f][1] - pe) % length
                nf = (occurrences[f][-1] - pe) % length
                inside_pos = 0 < pf < span
                inside_neg = 0 < nf < span
                if inside_pos == inside_neg:
                    row.append(0)
                elif inside_pos:
                    row.append(1)
                else:
                    row.append(-1)
            form.append(tuple(row))
        return edge_ids, tuple(form)

    @staticmethod
    def _inverse_from_form(u: Matrix, form: Matrix) -> Matrix:
        # U^T A U = J implies U^{-1} = -J U^T A
        k = len(u)
        ut = tuple(zip(*u))
        uta = tuple(
            tuple(sum(ut[i][t] * form[t][j] for t in range(k)) for j in range(k))
            for i in range(k)
        )
        out: list[tuple[int, ...]] = []
        for r in range(0, k, 2):
            out.append(tuple(-x for x in uta[r + 1]))
            out.append(uta[r])
        return tuple(out)

    # -- queries ------------------------------------------------------------

    def class_of_cycle(self, chain: Mapping[str, int]) -> H1Vector:
        """Homology class of an integer 1-cycle, in standard symplectic coords."""
        balance: dict[str, int] = {}
        for eid, coeff in chain.items():
            if eid not in self.complex.edges:
                raise ValueError(f"cycle uses unknown edge {eid!r}")
            tail, head = self.complex.edges[eid]
            balance[head] = balance.get(head, 0) + coeff
            balance[tail] = balance.get(tail, 0) - coeff
        if any(v != 0 for v in balance.values()):
            raise ValueError("chain is not a cycle")
        reduced = {eid: c for eid, c in chain.items() if eid not in self._tree and c != 0}
        for eid, repl in self._substitutions:
            coeff = reduced.pop(eid, 0)
            if coeff:
                for e2, c2 in repl.items():
                    reduced[e2] = reduced.get(e2, 0) + coeff * c2
        index = {eid: i for i, eid in enumerate(self.polygon_edges)}
        x = [0] * self.rank
        for eid, coeff in reduced.items():
            if coeff == 0:
                continue
            if eid not in index:
                raise HomologyRankError(f"cycle reduction left non-basis edge {eid!r}")
            x[index[eid]] = coeff
        y = tuple(sum(self._u_inv[i][j] * x[j] for j in range(self.rank)) for i in range(self.rank))
        return H1Vector(y)

    def basis_cycle(self, index: int) -> dict[str, int]:
        """A genuine 1-cycle representing the standard basis vector.

        The polygon-edge combination is closed up through spanning-tree
        edges; tree edges are homologically invisible, so the class is
        exactly class_of_cycle of the result.
        """
        chain = {
            self.polygon_edges[j]: self._u[j][index]
            for j in range(self.rank)
            if self._u[j][index] != 0
        }
        balance: dict[str, int] = {}
        for eid, coeff in chain.items():
            tail, head = self.complex.edges[eid]
            balance[head] = balance.get(head, 0) + coeff
            balance[tail] = balance.get(tail, 0) - coeff

        # push each vertex's surplus toward the root along the tree,
        # leaves first, so the chain boundary cancels
        root = self.complex.vertices[0]
        parent_link: dict[str, tuple[str, str]] = {}
        order = [root]
        seen = {root}
        adj: dict[str, list[tuple[str, str]]] = {v: [] for v in self.complex.vertices}
        for eid in self._tree:
            tail, head = self.complex.edges[eid]
            adj[tail].append((eid, head))
            adj[head].append((eid, tail))
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            for eid, other in adj[v]:
                if other not in seen:
                    seen.add(other)
                    parent_link[other] = (eid, v)
                    order.append(other)
        for v in reversed(order[1:]):
            surplus = balance.get(v, 0)
            if surplus == 0:
                continue
            eid, parent = parent_link[v]
            tail, _ = self.complex.edges[eid]
            coeff = surplus if tail == v else -surplus
            chain[eid] = chain.get(eid, 0) + coeff
            balance[v] = 0
            balance[parent] = balance.get(parent, 0) + surplus
        return {eid: c for eid, c in chain.items() if c != 0}
