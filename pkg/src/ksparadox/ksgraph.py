"""Assembly of the full chained ray set and its orthogonality graph.

The construction sweeps a ten-ray gadget around the first octant in three
legs of 18-degree steps.  The seed gadget is aligned so that its c2 ray
points along +y and its apex along +z; leg one rotates it four times about
c2 (the apex walks from z toward x, each copy's c3 landing on the next
copy's apex), a 90-degree pivot about the current c3 starts leg two about
the new c2 (= z), and a second pivot starts leg three (about x), closing a
cycle of fifteen copies whose apex sequence passes through all three
coordinate axes.  At an 18-degree step the 135 labeled triad rays collapse
to 117 distinct rays: the three coordinate axes each occur seven times
(five as c2 of one leg, once as a c3, once as a c1); every other ray is
unique to its copy.

Distinct rays of the construction are separated by at least ~1e-3 radians
while true coincidences land at ~1e-16, so the 1e-7 dedup tolerance has
several decades of guard band on both sides; the orthogonality graph's edge
set is stable across tolerances 1e-6 .. 1e-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np

from .gadget import (
    APEX,
    C3,
    GADGET_ROLES,
    MAX_GADGET_ANGLE,
    AngleRangeError,
    GadgetSet,
    build_gadget,
    gadget_angle,
    offdiagonal_parameters_for_angle,
)
from .linalg import Context, Ray3, verify_completion

DEFAULT_STEP_ANGLE = math.radians(18.0)
DEDUP_TOL = 1e-7
ORTHO_TOL = 1e-7
TRIAD_COMPLETION_TOL = 1e-6


class ScheduleError(ValueError):
    """A rotation schedule referenced a missing axis or broke the sweep."""


def rotation_matrix(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix about a unit axis."""
    x, y, z = axis
    c, s = math.cos(angle), math.sin(angle)
    k = 1.0 - c
    return np.array(
        [
            [c + x * x * k, x * y * k - z * s, x * z * k + y * s],
            [y * x * k + z * s, c + y * y * k, y * z * k - x * s],
            [z * x * k - y * s, z * y * k + x * s, c + z * z * k],
        ]
    )


def rotate_ray(r: Ray3, axis: Ray3, angle: float) -> Ray3:
    """Rotate a ray about an axis ray; norms and pairwise angles are
    preserved to 1e-12 (the result is re-canonicalized)."""
    return Ray3.from_vector(rotation_matrix(axis.vec, angle) @ r.vec, r.label)


@dataclass(frozen=True)
class RotationStep:
    """One schedule step: rotate the current copy about one of its own rays.

    axis_role names a gadget role ("c2", "c3", ...), resolved against the
    current copy each time the step is applied.  Steps with emit=False are
    intermediate re-orientations (the pivots between sweep legs) whose
    result is not itself kept as a copy.
    """

    axis_role: str
    angle: float
    repetitions: int = 1
    emit: bool = True


def default_schedule(step_angle: float = DEFAULT_STEP_ANGLE) -> tuple[RotationStep, ...]:
    """The three-leg first-octant sweep: four steps about c2, a 90-degree
    pivot about c3 then five steps about the new c2, and once more."""
    return (
        RotationStep("c2", step_angle, 4),
        RotationStep("c3", math.pi / 2.0, 1, emit=False),
        RotationStep("c2", step_angle, 5),
        RotationStep("c3", math.pi / 2.0, 1, emit=False),
        RotationStep("c2", step_angle, 5),
    )


@dataclass(frozen=True)
class RaySet:
    """Deduplicated canonical rays with full label provenance.

    rays holds one Ray3 per distinct direction, labeled by first occurrence.
    label_to_index maps every original label (all ten roles of every copy)
    to its distinct-ray index; merges records (absorbed label, representative
    label) pairs; copies maps each gadget copy's roles to ray indices, in
    sweep order.
    """

    rays: tuple[Ray3, ...]
    label_to_index: Mapping[str, int]
    merges: tuple[tuple[str, str], ...]
    copies: tuple[Mapping[str, int], ...] = ()
    provenance: Mapping[str, Any] = field(default_factory=dict)

    @property
    def triad_label_count(self) -> int:
        """Number of input labels excluding the apex role (nine per copy)."""
        return sum(1 for lb in self.label_to_index if not lb.endswith("apex"))

    def index_of(self, r: Ray3, tol: float = DEDUP_TOL) -> int | None:
        for i, u in enumerate(self.rays):
            if u.angle_to(r) <= tol:
                return i
        return None

    def to_dict(self) -> dict:
        return {
            "rays": [{"label": r.label, "xyz": [r.x, r.y, r.z]} for r in self.rays],
            "copies": [dict(c) for c in self.copies],
            "merges": [list(m) for m in self.merges],
            "provenance": dict(self.provenance),
        }


def _dedup_labeled(
    labeled: Sequence[tuple[str, Ray3]], tol: float
) -> tuple[list[Ray3], dict[str, int], list[tuple[str, str]]]:
    """First-occurrence dedup by angular proximity."""
    uniq: list[Ray3] = []
    label_to_index: dict[str, int] = {}
    merges: list[tuple[str, str]] = []
    for label, ray in labeled:
        for k, u in enumerate(uniq):
            if u.angle_to(ray) <= tol:
                label_to_index[label] = k
                merges.append((label, u.label))
                break
        else:
            label_to_index[label] = len(uniq)
            uniq.append(ray.relabel(label))
    return uniq, label_to_index, merges


def dedupe_rays(rays: Sequence[Ray3], tol: float = DEDUP_TOL) -> RaySet:
    """Merge rays within angular tolerance; representative = first occurrence.

    Unlabeled rays are labeled by input position.
    """
    labeled = [
        (r.label if r.label else f"r{idx}", r) for idx, r in enumerate(rays)
    ]
    uniq, label_to_index, merges = _dedup_labeled(labeled, tol)
    return RaySet(
        rays=tuple(uniq),
        label_to_index=label_to_index,
        merges=tuple(merges),
    )


def _align_gadget(g: GadgetSet) -> list[Ray3]:
    """Rotate the gadget so c2 lies on the +y axis and the apex on +z, with
    c3 in the x > 0 half of the x-z plane."""
    w = g.rays[APEX].vec
    u = g.rays[GADGET_ROLES.index("c2")].vec
    rot = np.stack([np.cross(u, w), u, w])  # maps u x w -> x, u -> y, w -> z
    rays = [Ray3.from_vector(rot @ r.vec, r.label) for r in g.rays]
    if rays[C3].x < 0.0:
        flip = np.diag([-1.0, -1.0, 1.0])  # half turn about z; same rays for axis images
        rays = [Ray3.from_vector(flip @ r.vec, r.label) for r in rays]
    return rays


def _rotate_copy(rays: Sequence[Ray3], axis: Ray3, angle: float) -> list[Ray3]:
    rot = rotation_matrix(axis.vec, angle)
    return [Ray3.from_vector(rot @ r.vec, r.label) for r in rays]


def assemble_ks_set(
    step_angle: float = DEFAULT_STEP_ANGLE,
    schedule: Sequence[RotationStep] | None = None,
    gadget_params: tuple[float, float] | None = None,
    dedup_tol: float = DEDUP_TOL,
) -> RaySet:
    """Sweep the gadget per the schedule and dedupe into a RaySet.

    With default arguments this is the 18-degree three-leg sweep over an
    off-diagonal gadget realization (x fixed at 1, y solved for the step
    angle) and yields exactly 117 distinct rays from 135 labeled triad rays.
    Explicit gadget_params must realize step_angle (checked to 1e-9).

    Rotation step signs are resolved so each emitted copy's apex lands on
    the previously emitted copy's c3 whenever one of the two signs achieves
    it; schedules for which neither sign chains simply keep the positive
    sense.
    """
    if gadget_params is None:
        if not (0.0 < step_angle < MAX_GADGET_ANGLE):
            raise AngleRangeError(
                f"step angle {step_angle} outside (0, {MAX_GADGET_ANGLE})"
            )
        gadget_params = offdiagonal_parameters_for_angle(step_angle)
    x, y = gadget_params
    if abs(gadget_angle(x, y) - step_angle) > 1e-9:
        raise AngleRangeError(
            f"gadget at ({x}, {y}) realizes angle {gadget_angle(x, y)}, not {step_angle}"
        )
    gadget = build_gadget(x, y)
    if schedule is None:
        schedule = default_schedule(step_angle)

    copies: list[list[Ray3]] = [_align_gadget(gadget)]
    current = copies[0]
    for step in schedule:
        if step.axis_role not in GADGET_ROLES:
            raise ScheduleError(f"schedule references unknown axis role {step.axis_role!r}")
        axis_index = GADGET_ROLES.index(step.axis_role)
        sign = 0
        for _ in range(step.repetitions):
            axis = current[axis_index]
            if not step.emit:
                current = _rotate_copy(current, axis, step.angle)
                continue
            tail = copies[-1][C3]
            if sign == 0:
                for cand_sign in (+1, -1):
                    cand = _rotate_copy(current, axis, cand_sign * step.angle)
                    if cand[APEX].angle_to(tail) <= dedup_tol:
                        sign, current = cand_sign, cand
                        break
                else:
                    sign, current = +1, _rotate_copy(current, axis, step.angle)
            else:
                current = _rotate_copy(current, axis, sign * step.angle)
            copies.append(current)

    # triad labels first, apex labels last: in a chained sweep every apex ray
    # already occurs as some copy's c3 (or c1), so representatives stay triad
    # labels and the merge census counts triad-label overlaps directly
    labeled = [
        (f"g{ci + 1:02d}:{GADGET_ROLES[ri]}", cp[ri])
        for ci, cp in enumerate(copies)
        for ri in range(1, len(GADGET_ROLES))
    ] + [(f"g{ci + 1:02d}:apex", cp[APEX]) for ci, cp in enumerate(copies)]
    uniq, label_to_index, merges = _dedup_labeled(labeled, dedup_tol)
    copy_maps = tuple(
        {
            role: label_to_index[f"g{ci + 1:02d}:{role}"]
            for role in GADGET_ROLES
        }
        for ci in range(len(copies))
    )
    return RaySet(
        rays=tuple(uniq),
        label_to_index=label_to_index,
        merges=tuple(merges),
        copies=copy_maps,
        provenance={
            "step_angle": step_angle,
            "gadget_x": x,
            "gadget_y": y,
            "schedule": [
                [s.axis_role, s.angle, s.repetitions, s.emit] for s in schedule
            ],
            "dedup_tol": dedup_tol,
        },
    )


@dataclass(frozen=True)
class OrthogonalityGraph:
    """Rays, orthogonal-pair edges, and triads (all triangles).

    Edges are sorted index pairs; the relation is symmetric and irreflexive
    by construction.  For graphs built from rays, every triangle is verified
    to be a genuine mutually orthogonal triple via the completion check.
    """

    node_count: int
    edges: tuple[tuple[int, int], ...]
    triads: tuple[tuple[int, int, int], ...]
    rays: tuple[Ray3, ...] | None = None

    @classmethod
    def from_structure(
        cls,
        node_count: int,
        edges: Sequence[tuple[int, int]],
        triads: Sequence[tuple[int, int, int]] | None = None,
    ) -> "OrthogonalityGraph":
        """Abstract graph (no geometry); triads default to all triangles."""
        norm_edges = tuple(sorted(tuple(sorted(e)) for e in edges))
        if triads is None:
            triads = _triangles(node_count, norm_edges)
        return cls(
            node_count=node_count,
            edges=norm_edges,
            triads=tuple(sorted(tuple(sorted(t)) for t in triads)),
        )

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.node_count)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def to_dict(self) -> dict:
        d = {
            "node_count": self.node_count,
            "edges": [list(e) for e in self.edges],
            "triads": [list(t) for t in self.triads],
        }
        if self.rays is not None:
            d["rays"] = [{"label": r.label, "xyz": [r.x, r.y, r.z]} for r in self.rays]
        return d


def _triangles(
    node_count: int, edges: Sequence[tuple[int, int]]
) -> tuple[tuple[int, int, int], ...]:
    adj: list[set[int]] = [set() for _ in range(node_count)]
    for i, j in edges:
        adj[i].add(j)
        adj[j].add(i)
    out = []
    for i, j in edges:
        for k in sorted(adj[i] & adj[j]):
            if k > j:
                out.append((i, j, k))
    return tuple(out)


def build_orthogonality_graph(
    source: RaySet | Sequence[Ray3], tol: float = ORTHO_TOL
) -> OrthogonalityGraph:
    """Edges = all ray pairs with |dot| <= tol; triads = all triangles.

    Every triangle is asserted to pass the completion check within 1e-6.
    """
    rays = tuple(source.rays if isinstance(source, RaySet) else source)
    n = len(rays)
    mat = np.array([r.vec for r in rays]) if n else np.zeros((0, 3))
    dots = np.abs(mat @ mat.T)
    edges = tuple(
        (i, j) for i in range(n) for j in range(i + 1, n) if dots[i, j] <= tol
    )
    triads = _triangles(n, edges)
    for a, b, c in triads:
        ctx = Context.spin1((rays[a], rays[b], rays[c]))
        residual = verify_completion(ctx)
        if residual > TRIAD_COMPLETION_TOL:
            raise AssertionError(
                f"triangle ({a}, {b}, {c}) fails completion: residual {residual}"
            )
    return OrthogonalityGraph(node_count=n, edges=edges, triads=triads, rays=rays)
