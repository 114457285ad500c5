"""Colorability search for orthogonality graphs, plus independent oracles.

The coloring rules: every full triad carries exactly one ray valued 1, and
no orthogonal pair may be doubly valued 1.  Orthogonal pairs that are not
part of any complete triad in the set get only the not-both-1 rule.

check_colorability is a complete deterministic backtracking search with
unit propagation; enumerate_all_colorings is a deliberately dumb exhaustive
scan used as ground truth against it.  forcing_chain_check re-derives the
uncolorability of the chained ray set by a route independent of the search:
per-link exhaustive gadget enumeration plus the cyclic propagation argument
through the coordinate axes.
"""

from __future__ import annotations

import hashlib
import json
import math
import zlib
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .gadget import (
    APEX,
    C3,
    GADGET_EDGES,
    GADGET_ROLES,
    AdmissiblePairSet,
    GadgetSet,
    enumerate_gadget_assignments,
)
from .ksgraph import OrthogonalityGraph, RaySet
from .linalg import X_AXIS, Y_AXIS, Z_AXIS

LINK_ORTHO_TOL = 1e-9


class IncompleteAssignmentError(ValueError):
    """An operation requiring a total assignment got a partial one."""


class SizeLimitError(ValueError):
    """Exhaustive enumeration refused: instance above the node cap."""


class ChainIntegrityError(ValueError):
    """Consecutive gadget copies do not share the required chaining ray."""


@dataclass(frozen=True)
class ValueAssignment:
    """Partial or total map node index -> {0, 1}."""

    values: dict[int, int]

    @classmethod
    def from_bits(cls, mask: int, n: int) -> "ValueAssignment":
        return cls({i: (mask >> i) & 1 for i in range(n)})

    def is_total(self, node_count: int) -> bool:
        return all(i in self.values for i in range(node_count))

    def __getitem__(self, node: int) -> int:
        return self.values[node]


@dataclass(frozen=True)
class Violation:
    kind: Literal["triad", "edge"]
    members: tuple[int, ...]
    detail: str


def verify_assignment(g: OrthogonalityGraph, a: ValueAssignment) -> list[Violation]:
    """Empty list iff both coloring rules hold on every triad and edge.

    Raises IncompleteAssignmentError on partial assignments.
    """
    if not a.is_total(g.node_count):
        missing = [i for i in range(g.node_count) if i not in a.values]
        raise IncompleteAssignmentError(f"assignment missing nodes {missing[:8]}")
    out: list[Violation] = []
    for t in g.triads:
        total = sum(a[v] for v in t)
        if total != 1:
            out.append(Violation("triad", t, f"triad {t} sums to {total}, not 1"))
    for i, j in g.edges:
        if a[i] == 1 and a[j] == 1:
            out.append(Violation("edge", (i, j), f"orthogonal pair {(i, j)} both valued 1"))
    return out


@dataclass(frozen=True)
class SolverStats:
    nodes_explored: int
    propagations: int
    max_depth: int


@dataclass(frozen=True)
class SolverVerdict:
    """Search outcome with a re-verifiable witness or exhaustion certificate.

    The certificate is the complete decision trail (zlib-compressed JSON of
    (depth, node, value) triples in exploration order); its digest is the
    sha256 of the uncompressed JSON.
    """

    outcome: Literal["SAT", "UNSAT"]
    witness: ValueAssignment | None
    stats: SolverStats
    certificate: bytes | None = None
    certificate_digest: str | None = None
    degenerate: bool = False

    def to_dict(self) -> dict:
        d = {
            "outcome": self.outcome,
            "stats": {
                "nodes_explored": self.stats.nodes_explored,
                "propagations": self.stats.propagations,
                "max_depth": self.stats.max_depth,
            },
            "certificate_digest": self.certificate_digest,
        }
        if self.witness is not None:
            d["witness"] = {str(k): v for k, v in sorted(self.witness.values.items())}
        if self.degenerate:
            d["degenerate"] = True
        return d


def check_colorability(g: OrthogonalityGraph) -> SolverVerdict:
    """Complete backtracking search under the two coloring rules.

    Propagation: a 1 forces 0 on all neighbors; a triad with two 0s forces 1
    on the third; a triad with three 0s, or an orthogonal pair with two 1s,
    is a conflict.  Decisions take the most-constrained node first (largest
    triad-membership plus degree count, ties by node index) and try value 1
    before 0, so verdicts, witnesses, and certificates are deterministic.

    A triad-free graph is trivially satisfied by the all-0 assignment and is
    flagged degenerate.
    """
    n = g.node_count
    if not g.triads:
        witness = ValueAssignment({i: 0 for i in range(n)})
        return SolverVerdict(
            outcome="SAT",
            witness=witness,
            stats=SolverStats(0, 0, 0),
            degenerate=True,
        )

    adj = [sorted(s) for s in g.adjacency()]
    triads_of: list[list[int]] = [[] for _ in range(n)]
    for ti, t in enumerate(g.triads):
        for v in t:
            triads_of[v].append(ti)
    order = sorted(range(n), key=lambda v: (-(len(triads_of[v]) + len(adj[v])), v))

    value = [-1] * n
    stats = {"decisions": 0, "propagations": 0, "max_depth": 0}
    trail: list[tuple[int, int, int]] = []

    def propagate(assigned: list[int]) -> bool:
        head = len(assigned) - 1
        while head < len(assigned):
            v = assigned[head]
            head += 1
            if value[v] == 1:
                for u in adj[v]:
                    if value[u] == 1:
                        return False
                    if value[u] == -1:
                        value[u] = 0
                        assigned.append(u)
                        stats["propagations"] += 1
            for ti in triads_of[v]:
                a, b, c = g.triads[ti]
                va, vb, vc = value[a], value[b], value[c]
                ones = (va == 1) + (vb == 1) + (vc == 1)
                zeros = (va == 0) + (vb == 0) + (vc == 0)
                if ones > 1 or zeros == 3:
                    return False
                if ones == 1:
                    for u in (a, b, c):
                        if value[u] == -1:
                            value[u] = 0
                            assigned.append(u)
                            stats["propagations"] += 1
                elif zeros == 2:
                    for u in (a, b, c):
                        if value[u] == -1:
                            value[u] = 1
                            assigned.append(u)
                            stats["propagations"] += 1
        return True

    def search(depth: int) -> bool:
        stats["max_depth"] = max(stats["max_depth"], depth)
        decision = next((v for v in order if value[v] == -1), None)
        if decision is None:
            return True
        for val in (1, 0):
            stats["decisions"] += 1
            trail.append((depth, decision, val))
            value[decision] = val
            assigned = [decision]
            if propagate(assigned) and search(depth + 1):
                return True
            for u in assigned:
                value[u] = -1
        return False

    sat = search(0)
    solver_stats = SolverStats(
        nodes_explored=stats["decisions"],
        propagations=stats["propagations"],
        max_depth=stats["max_depth"],
    )
    if sat:
        witness = ValueAssignment({i: value[i] for i in range(n)})
        assert not verify_assignment(g, witness)
        return SolverVerdict(outcome="SAT", witness=witness, stats=solver_stats)
    payload = json.dumps(trail, separators=(",", ":")).encode()
    return SolverVerdict(
        outcome="UNSAT",
        witness=None,
        stats=solver_stats,
        certificate=zlib.compress(payload),
        certificate_digest=hashlib.sha256(payload).hexdigest(),
    )


def _scan_masks(g: OrthogonalityGraph) -> list[int]:
    """Vectorized exhaustive 2^n scan; returns satisfying bitmasks."""
    n = g.node_count
    survivors: list[int] = []
    chunk = 1 << 20
    for start in range(0, 1 << n, chunk):
        masks = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        ok = np.ones(masks.shape, dtype=bool)
        for i, j in g.edges:
            ok &= ((masks >> i) & 1) * ((masks >> j) & 1) == 0
        for a, b, c in g.triads:
            ok &= ((masks >> a) & 1) + ((masks >> b) & 1) + ((masks >> c) & 1) == 1
        survivors.extend(int(m) for m in masks[ok])
    return survivors


def enumerate_all_colorings(
    g: OrthogonalityGraph, cap: int | None = None
) -> list[ValueAssignment]:
    """All satisfying assignments by exhaustive 2^n scan, each confirmed
    through verify_assignment.  Ground-truth oracle for check_colorability;
    shares no search machinery with it.

    Refuses instances above the node cap (default 25).
    """
    limit = 25 if cap is None else cap
    n = g.node_count
    if n > limit:
        raise SizeLimitError(f"{n} nodes exceeds enumeration cap {limit}")
    out = []
    for mask in _scan_masks(g):
        a = ValueAssignment.from_bits(mask, n)
        if not verify_assignment(g, a):
            out.append(a)
    return out


@dataclass(frozen=True)
class LinkReport:
    """One gadget copy of the chain, viewed as an apex -> c3 forcing link."""

    index: int
    pair_set: AdmissiblePairSet
    max_edge_residual: float
    angle: float

    @property
    def forced(self) -> bool:
        return self.pair_set.forced_one_way


@dataclass(frozen=True)
class ChainReport:
    """Forcing audit of the swept gadget chain.

    contradiction_confirmed means: every link forces value(apex) = 1 to
    propagate to its c3, the links close into a cycle whose shared rays
    include all three coordinate axes, and those axes are mutually
    orthogonal -- so any admissible assignment gives the axes equal values,
    which no exactly-one-of-three triad can absorb.
    """

    links: tuple[LinkReport, ...]
    cyclic: bool
    axis_nodes: tuple[int, int, int] | None
    axes_on_chain: bool
    contradiction_confirmed: bool

    @property
    def all_links_forced(self) -> bool:
        return all(link.forced for link in self.links)

    def summary(self) -> list[str]:
        lines = [
            f"links: {len(self.links)}, forced: {sum(l.forced for l in self.links)}",
            f"cyclic closure: {self.cyclic}",
        ]
        if self.axis_nodes is not None:
            lines.append(
                f"coordinate axes at nodes {self.axis_nodes}, on chain: {self.axes_on_chain}"
            )
        else:
            lines.append("coordinate axes not all present")
        if self.contradiction_confirmed:
            lines.append(
                "contradiction: equal values forced on a mutually orthogonal triple"
            )
        else:
            lines.append("no contradiction from the chain alone")
        return lines


def forcing_chain_check(gadget_angle: float, chain: RaySet) -> ChainReport:
    """Audit the chain of gadget copies in a swept RaySet.

    Checks that consecutive copies share the required ray (each copy's c3 is
    the next copy's apex; ChainIntegrityError names the first broken link),
    re-verifies each copy's fifteen orthogonality relations and its apex-c3
    angle on the deduplicated rays, and runs the exhaustive per-link
    enumeration to confirm the forced-pair property rather than assume it.
    """
    copies = chain.copies
    if not copies:
        raise ValueError("ray set carries no gadget copies")
    for k in range(len(copies) - 1):
        if copies[k]["c3"] != copies[k + 1]["apex"]:
            raise ChainIntegrityError(
                f"link {k}->{k + 1}: copy {k} c3 (node {copies[k]['c3']}) is not "
                f"copy {k + 1} apex (node {copies[k + 1]['apex']})"
            )
    cyclic = len(copies) > 1 and copies[-1]["c3"] == copies[0]["apex"]

    links = []
    for k, cp in enumerate(copies):
        rays = [chain.rays[cp[role]] for role in GADGET_ROLES]
        residual = max(abs(rays[i].dot(rays[j])) for i, j in GADGET_EDGES)
        if residual > LINK_ORTHO_TOL:
            raise ChainIntegrityError(
                f"link {k}: orthogonality residual {residual} exceeds {LINK_ORTHO_TOL}"
            )
        angle = rays[APEX].angle_to(rays[C3])
        if abs(angle - gadget_angle) > 1e-9:
            raise ChainIntegrityError(
                f"link {k}: apex-c3 angle {angle} differs from {gadget_angle}"
            )
        view = GadgetSet(
            x=float(chain.provenance.get("gadget_x", math.nan)),
            y=float(chain.provenance.get("gadget_y", math.nan)),
            rays=tuple(rays),
        )
        links.append(
            LinkReport(
                index=k,
                pair_set=enumerate_gadget_assignments(view),
                max_edge_residual=residual,
                angle=angle,
            )
        )

    axis_nodes = tuple(chain.index_of(ax) for ax in (X_AXIS, Y_AXIS, Z_AXIS))
    axes_present = all(i is not None for i in axis_nodes)
    chain_nodes = {cp["apex"] for cp in copies} | {cp["c3"] for cp in copies}
    axes_on_chain = axes_present and all(i in chain_nodes for i in axis_nodes)
    axes_orthogonal = axes_present and all(
        abs(chain.rays[a].dot(chain.rays[b])) <= LINK_ORTHO_TOL
        for a in axis_nodes
        for b in axis_nodes
        if a < b
    )
    contradiction = (
        bool(links)
        and all(l.forced for l in links)
        and cyclic
        and axes_on_chain
        and axes_orthogonal
    )
    return ChainReport(
        links=tuple(links),
        cyclic=cyclic,
        axis_nodes=axis_nodes if axes_present else None,
        axes_on_chain=axes_on_chain,
        contradiction_confirmed=contradiction,
    )
