"""Ribbon-graph certificates that two multicurves fill a surface.

A crossing of a c-curve with a d-curve is a 4-valent vertex whose cyclic slot
order alternates d, c, d, c (slots 0..3, counterclockwise).  Edges join slots
of consecutive crossings along a strand.  Faces are traced with the usual
next-half-edge permutation (rotate one slot after flipping to the other end
of the edge); the complement of the two multicurves is all disks exactly when
the traced surface is connected and has the expected genus.

Text format, parsed strictly with line numbers in every diagnostic:

    # comments and blank lines are ignored
    c: c1 c2 c3
    d: d1
    v<id>: <h0> <h1> <h2> <h3>     four distinct half-edge ids, cyclic order
    e<id>: v<i>.<slot> v<j>.<slot> <curve_id>
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional

Dart = tuple[str, int]  # (vertex id, slot 0..3)


class MalformedRibbon(ValueError):
    """The ribbon data violates a structural invariant."""


@dataclass(frozen=True)
class RibbonEdge:
    id: str
    end0: Dart
    end1: Dart
    curve: str

    def other(self, dart: Dart) -> Dart:
        if dart == self.end0:
            return self.end1
        if dart == self.end1:
            return self.end0
        raise MalformedRibbon(f"dart {dart} is not an endpoint of edge {self.id}")


@dataclass(frozen=True)
class RibbonConfig:
    """Crossing pattern of two multicurve families.

    vertices maps a vertex id to its 4 half-edge labels in cyclic order;
    edges pair up (vertex, slot) darts and carry the curve they belong to.
    """

    c_family: tuple[str, ...]
    d_family: tuple[str, ...]
    vertices: dict[str, tuple[str, str, str, str]]
    edges: tuple[RibbonEdge, ...]

    def __post_init__(self) -> None:
        self.validate()

    # Dict access keeps insertion order, so traces are deterministic.

    def validate(self) -> None:
        families = set(self.c_family) | set(self.d_family)
        if len(families) != len(self.c_family) + len(self.d_family):
            raise MalformedRibbon("curve ids repeat across or within families")
        half_edges: dict[str, Dart] = {}
        for vid, slots in self.vertices.items():
            if len(slots) != 4:
                raise MalformedRibbon(f"vertex {vid} must list exactly 4 half-edge slots")
            for slot, label in enumerate(slots):
                if label in half_edges:
                    raise MalformedRibbon(f"half-edge id {label!r} appears more than once")
                half_edges[label] = (vid, slot)

        seen_darts: set[Dart] = set()
        slot_curve: dict[Dart, str] = {}
        for edge in self.edges:
            if edge.curve not in families:
                raise MalformedRibbon(f"edge {edge.id} names unknown curve {edge.curve!r}")
            for dart in (edge.end0, edge.end1):
                vid, slot = dart
                if vid not in self.vertices:
                    raise MalformedRibbon(f"edge {edge.id} references unknown vertex {vid!r}")
                if not 0 <= slot <= 3:
                    raise MalformedRibbon(f"edge {edge.id} references slot {slot}, must be 0..3")
                if dart in seen_darts:
                    raise MalformedRibbon(f"slot {vid}.{slot} is matched by more than one edge")
                seen_darts.add(dart)
                slot_curve[dart] = edge.curve
        for vid, slots in self.vertices.items():
            for slot in range(4):
                if (vid, slot) not in seen_darts:
                    raise MalformedRibbon(f"slot {vid}.{slot} is not matched by any edge")

        c_set = set(self.c_family)
        for vid in self.vertices:
            fams = [slot_curve[(vid, slot)] in c_set for slot in range(4)]
            if not (fams[0] == fams[2] and fams[1] == fams[3] and fams[0] != fams[1]):
                raise MalformedRibbon(
                    f"vertex {vid} does not alternate c/d strands around its slots"
                )

        self._check_strand_cycles()

    def _check_strand_cycles(self) -> None:
        # A strand enters a crossing at one slot and leaves at the opposite
        # one; each curve id must close into a single cycle.
        by_dart: dict[Dart, RibbonEdge] = {}
        by_curve: dict[str, list[RibbonEdge]] = {}
        for edge in self.edges:
            by_dart[edge.end0] = edge
            by_dart[edge.end1] = edge
            by_curve.setdefault(edge.curve, []).append(edge)
        for curve in (*self.c_family, *self.d_family):
            edges = by_curve.get(curve, [])
            if not edges:
                if self.vertices:
                    raise MalformedRibbon(f"curve {curve!r} has no strand edges")
                continue
            start = edges[0].end0
            dart = start
            visited = 0
            while True:
                edge = by_dart[dart]
                if edge.curve != curve:
                    raise MalformedRibbon(
                        f"strand of {curve!r} runs into edge {edge.id} of {edge.curve!r}"
                    )
                visited += 1
                vid, slot = edge.other(dart)
                dart = (vid, (slot + 2) % 4)
                if dart == start:
                    break
                if visited > 2 * len(self.edges):
                    raise MalformedRibbon(f"strand of {curve!r} does not close")
            if visited != len(edges):
                raise MalformedRibbon(f"curve {curve!r} splits into more than one strand cycle")

    # -- counting -----------------------------------------------------------

    def crossing_matrix(self) -> list[list[int]]:
        """N[i][j] = number of crossings of c_family[i] with d_family[j]."""
        slot_curve: dict[Dart, str] = {}
        for edge in self.edges:
            slot_curve[edge.end0] = edge.curve
            slot_curve[edge.end1] = edge.curve
        index_c = {c: i for i, c in enumerate(self.c_family)}
        index_d = {d: j for j, d in enumerate(self.d_family)}
        n = [[0] * len(self.d_family) for _ in self.c_family]
        for vid, slots in self.vertices.items():
            curves = {slot_curve[(vid, slot)] for slot in range(4)}
            c_here = [c for c in curves if c in index_c]
            d_here = [d for d in curves if d in index_d]
            if len(c_here) != 1 or len(d_here) != 1:
                raise MalformedRibbon(f"vertex {vid} is not a c/d crossing")
            n[index_c[c_here[0]]][index_d[d_here[0]]] += 1
        return n


@dataclass(frozen=True)
class FillingReport:
    vertices: int
    edges: int
    faces: int
    face_lengths: tuple[int, ...]
    connected: bool
    euler: int
    inferred_genus: Optional[int]
    target_genus: int
    filling: bool


def verify_filling(ribbon: RibbonConfig, target_genus: int) -> FillingReport:
    """Trace faces and report whether the configuration fills.

    filling = connected and inferred genus equals the target.  An empty
    ribbon (no crossings) never fills: the complement contains the whole
    surface, which is not a disk.
    """
    ribbon.validate()
    v = len(ribbon.vertices)
    e = len(ribbon.edges)
    if v == 0:
        return FillingReport(
            vertices=0, edges=0, faces=0, face_lengths=(),
            connected=False, euler=0, inferred_genus=None,
            target_genus=target_genus, filling=False,
        )

    by_dart: dict[Dart, RibbonEdge] = {}
    for edge in ribbon.edges:
        by_dart[edge.end0] = edge
        by_dart[edge.end1] = edge

    # next dart on the face boundary: cross the edge, rotate one slot
    def face_next(dart: Dart) -> Dart:
        vid, slot = by_dart[dart].other(dart)
        return (vid, (slot + 1) % 4)

    all_darts = [(vid, slot) for vid in ribbon.vertices for slot in range(4)]
    unvisited = set(all_darts)
    face_lengths = []
    while unvisited:
        start = next(d for d in all_darts if d in unvisited)
        length = 0
        dart = start
        while True:
            unvisited.discard(dart)
            length += 1
            dart = face_next(dart)
            if dart == start:
                break
        face_lengths.append(length)

    parent = {vid: vid for vid in ribbon.vertices}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for edge in ribbon.edges:
        ra, rb = find(edge.end0[0]), find(edge.end1[0])
        if ra != rb:
            parent[ra] = rb
    connected = len({find(vid) for vid in ribbon.vertices}) == 1

    f = len(face_lengths)
    euler = v - e + f
    inferred = (2 - euler) // 2 if (2 - euler) % 2 == 0 else None
    filling = connected and inferred == target_genus
    return FillingReport(
        vertices=v, edges=e, faces=f, face_lengths=tuple(sorted(face_lengths)),
        connected=connected, euler=euler, inferred_genus=inferred,
        target_genus=target_genus, filling=filling,
    )


# -- text format -------------------------------------------------------------


def parse_ribbon(text: str) -> RibbonConfig:
    """Parse the ribbon text format; every diagnostic cites its line number."""
    c_family: Optional[tuple[str, ...]] = None
    d_family: Optional[tuple[str, ...]] = None
    vertices: dict[str, tuple[str, str, str, str]] = {}
    edge_rows: list[tuple[int, str, Dart, Dart, str]] = []

    def fail(lineno: int, message: str) -> None:
        raise MalformedRibbon(f"line {lineno}: {message}")

    def parse_dart(lineno: int, token: str) -> Dart:
        if "." not in token:
            fail(lineno, f"expected vertex.slot, got {token!r}")
        vid, _, slot_text = token.partition(".")
        if not slot_text.isdigit():
            fail(lineno, f"slot in {token!r} must be a digit")
        slot = int(slot_text)
        if not 0 <= slot <= 3:
            fail(lineno, f"slot in {token!r} must be 0..3")
        return (vid, slot)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(":")
        head = head.strip()
        tokens = rest.split()
        if head == "c":
            if c_family is not None:
                fail(lineno, "duplicate c family line")
            c_family = tuple(tokens)
        elif head == "d":
            if d_family is not None:
                fail(lineno, "duplicate d family line")
            d_family = tuple(tokens)
        elif head.startswith("v"):
            if head in vertices:
                fail(lineno, f"duplicate vertex {head!r}")
            if len(tokens) != 4:
                fail(lineno, f"vertex {head!r} must list exactly 4 half-edge ids")
            vertices[head] = (tokens[0], tokens[1], tokens[2], tokens[3])
        elif head.startswith("e"):
            if len(tokens) != 3:
                fail(lineno, f"edge {head!r} needs two endpoints and a curve id")
            end0 = parse_dart(lineno, tokens[0])
            end1 = parse_dart(lineno, tokens[1])
            edge_rows.append((lineno, head, end0, end1, tokens[2]))
        else:
            fail(lineno, f"unrecognized line {line!r}")

    if c_family is None:
        raise MalformedRibbon("missing 'c:' family line")
    if d_family is None:
        raise MalformedRibbon("missing 'd:' family line")

    seen_edge_ids = set()
    edges = []
    for lineno, eid, end0, end1, curve in edge_rows:
        if eid in seen_edge_ids:
            fail(lineno, f"duplicate edge {eid!r}")
        seen_edge_ids.add(eid)
        for vid, slot in (end0, end1):
            if vid not in vertices:
                fail(lineno, f"edge {eid!r} references unknown vertex {vid!r}")
        edges.append(RibbonEdge(id=eid, end0=end0, end1=end1, curve=curve))

    try:
        return RibbonConfig(
            c_family=c_family, d_family=d_family,
            vertices=vertices, edges=tuple(edges),
        )
    except MalformedRibbon as exc:
        raise MalformedRibbon(f"{exc} (while assembling parsed ribbon)") from exc


def format_ribbon(ribbon: RibbonConfig) -> str:
    lines = [
        "c: " + " ".join(ribbon.c_family),
        "d: " + " ".join(ribbon.d_family),
    ]
    for vid, slots in ribbon.vertices.items():
        lines.append(f"{vid}: " + " ".join(slots))
    for edge in ribbon.edges:
        lines.append(
            f"{edge.id}: {edge.end0[0]}.{edge.end0[1]} {edge.end1[0]}.{edge.end1[1]} {edge.curve}"
        )
    return "\n".join(lines) + "\n"


def random_ribbon(n_vertices: int, rng: random.Random) -> RibbonConfig:
    """Random valid configuration on n_vertices crossings.

    Strands are built from two random vertex permutations; each permutation
    cycle becomes one curve, so every strand closes by construction.  The
    c-strand of a vertex leaves slot 1 and enters the next vertex at slot 3;
    the d-strand leaves slot 0 and enters at slot 2.
    """
    if n_vertices < 1:
        raise ValueError("need at least one crossing")
    vids = [f"v{i}" for i in range(n_vertices)]
    perm_c = list(range(n_vertices))
    perm_d = list(range(n_vertices))
    rng.shuffle(perm_c)
    rng.shuffle(perm_d)

    def cycles(perm: list[int]) -> list[list[int]]:
        seen = [False] * len(perm)
        out = []
        for i in range(len(perm)):
            if seen[i]:
                continue
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = perm[j]
            out.append(cyc)
        return out

    c_cycles = cycles(perm_c)
    d_cycles = cycles(perm_d)
    c_family = tuple(f"c{k + 1}" for k in range(len(c_cycles)))
    d_family = tuple(f"d{k + 1}" for k in range(len(d_cycles)))

    curve_of_c = {}
    for name, cyc in zip(c_family, c_cycles):
        for v in cyc:
            curve_of_c[v] = name
    curve_of_d = {}
    for name, cyc in zip(d_family, d_cycles):
        for v in cyc:
            curve_of_d[v] = name

    edges = []
    half_labels: dict[Dart, str] = {}
    counter = 0

    def label(dart: Dart) -> str:
        nonlocal counter
        if dart not in half_labels:
            half_labels[dart] = f"h{counter}"
            counter += 1
        return half_labels[dart]

    for i in range(n_vertices):
        edges.append(
            RibbonEdge(
                id=f"ec{i}",
                end0=(vids[i], 1),
                end1=(vids[perm_c[i]], 3),
                curve=curve_of_c[i],
            )
        )
        edges.append(
            RibbonEdge(
                id=f"ed{i}",
                end0=(vids[i], 0),
                end1=(vids[perm_d[i]], 2),
                curve=curve_of_d[i],
            )
        )
    vertices = {}
    for vid in vids:
        vertices[vid] = tuple(label((vid, slot)) for slot in range(4))
    return RibbonConfig(
        c_family=c_family, d_family=d_family,
        vertices=vertices, edges=tuple(edges),
    )


def empty_ribbon(c_family: Iterable[str], d_family: Iterable[str]) -> RibbonConfig:
    """Configuration with no crossings at all; never fills anything."""
    return RibbonConfig(
        c_family=tuple(c_family), d_family=tuple(d_family),
        vertices={}, edges=(),
    )
