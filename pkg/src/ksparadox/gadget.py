"""The parametrized ten-ray forcing gadget.

For arbitrary finite parameters (x, y) the family

    apex = -xy i + x j - k
    a1 = j + x k          a2 = i                 a3 = -x j + k
    b1 = y i - j          b2 = i + y j           b3 = k
    c1 = -i - y j - xy k
    c2 = -y(1+x^2) i + (1-x^2 y^2) j + x(1+y^2) k
    c3 = -x y^3 (1+x^2) i + x(1+2y^2+x^2 y^2) j - (1+y^2) k

forms three mutually orthogonal triads {a1,a2,a3}, {b1,b2,b3}, {c1,c2,c3}
plus six extra orthogonal pairs:

    apex _|_ a1, b2, c2        c1 _|_ a3, b1        a2 _|_ b3

The angle between apex and c3 obeys

    cos(angle) = [1 + x^2 + y^2 + x^2 y^2 (2 + x^2 + y^2 + x^2 y^2)]
                 / (|apex| |c3|)

which is minimized at sqrt(8)/3 for x = y = +-1, so the apex-to-c3 angle
never exceeds arccos(sqrt(8)/3) ~ 19.47 degrees.  Under the coloring rules
(exactly one ray of each triad valued 1, never two orthogonal rays both 1)
exhaustive enumeration of all 2^10 assignments shows the pair
(value(apex), value(c3)) = (1, 0) is impossible: a 1 on the apex forces a 1
on c3.  That one-way forcing is the engine of the chained ray-set
construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .linalg import Ray3

GADGET_ROLES = ("apex", "a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3")
APEX, C3 = 0, 9

# index triples into GADGET_ROLES order
GADGET_TRIADS = ((1, 2, 3), (4, 5, 6), (7, 8, 9))
# the six extra orthogonal pairs listed in the module docstring
GADGET_EXTRA_PAIRS = ((0, 1), (0, 5), (0, 8), (7, 3), (7, 4), (2, 6))
GADGET_EDGES = tuple(
    (t[i], t[j]) for t in GADGET_TRIADS for i in range(3) for j in range(i + 1, 3)
) + GADGET_EXTRA_PAIRS

#: largest achievable apex-to-c3 angle, arccos(sqrt(8)/3)
MAX_GADGET_ANGLE = math.acos(math.sqrt(8.0) / 3.0)


class DegenerateParameterError(ValueError):
    """Gadget parameters produced a ray that cannot be normalized."""


class AngleRangeError(ValueError):
    """A requested gadget angle lies outside (0, arccos(sqrt(8)/3)]."""


def raw_gadget_vectors(x: float, y: float) -> tuple[np.ndarray, ...]:
    """The ten construction vectors before normalization, in role order."""
    return (
        np.array([-x * y, x, -1.0]),
        np.array([0.0, 1.0, x]),
        np.array([1.0, 0.0, 0.0]),
        np.array([0.0, -x, 1.0]),
        np.array([y, -1.0, 0.0]),
        np.array([1.0, y, 0.0]),
        np.array([0.0, 0.0, 1.0]),
        np.array([-1.0, -y, -x * y]),
        np.array([-y * (1 + x * x), 1 - x * x * y * y, x * (1 + y * y)]),
        np.array([-x * y**3 * (1 + x * x), x * (1 + 2 * y * y + x * x * y * y), -(1 + y * y)]),
    )


@dataclass(frozen=True)
class GadgetSet:
    """Ten labeled rays plus their fifteen orthogonality edges."""

    x: float
    y: float
    rays: tuple[Ray3, ...]
    ortho_edges: tuple[tuple[int, int], ...] = GADGET_EDGES

    def ray(self, role: str) -> Ray3:
        return self.rays[GADGET_ROLES.index(role)]

    def max_edge_residual(self) -> float:
        return max(abs(self.rays[i].dot(self.rays[j])) for i, j in self.ortho_edges)

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "y": self.y,
            "rays": [
                {"label": r.label, "xyz": [r.x, r.y, r.z]} for r in self.rays
            ],
            "edges": [list(e) for e in self.ortho_edges],
        }


def build_gadget(x: float, y: float) -> GadgetSet:
    """Construct the ten-ray gadget at parameters (x, y).

    Rays come back unit-normalized and sign-canonical, labeled by role.
    Raises DegenerateParameterError if any construction vector is too short
    to normalize (non-finite or extreme parameters).
    """
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DegenerateParameterError(f"parameters must be finite, got ({x}, {y})")
    rays = []
    for role, v in zip(GADGET_ROLES, raw_gadget_vectors(x, y)):
        if float(np.linalg.norm(v)) <= 1e-9:
            raise DegenerateParameterError(f"ray {role} degenerates at (x, y) = ({x}, {y})")
        rays.append(Ray3.from_vector(v, role))
    return GadgetSet(x=x, y=y, rays=tuple(rays))


def gadget_cosine(x, y):
    """Cosine of the apex-to-c3 angle from the closed form (vectorizes)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x2, y2 = x * x, y * y
    num = 1 + x2 + y2 + x2 * y2 * (2 + x2 + y2 + x2 * y2)
    n_apex = np.sqrt(x2 * y2 + x2 + 1)
    n_c3 = np.sqrt(
        (x * y**3 * (1 + x2)) ** 2 + (x * (1 + 2 * y2 + x2 * y2)) ** 2 + (1 + y2) ** 2
    )
    return num / (n_apex * n_c3)


def gadget_angle(x: float, y: float) -> float:
    """Apex-to-c3 angle in [0, pi/2], from the closed form.

    Agrees with the angle recomputed from the constructed rays to 1e-9.
    """
    if not (math.isfinite(x) and math.isfinite(y)):
        raise DegenerateParameterError(f"parameters must be finite, got ({x}, {y})")
    return float(np.arccos(np.clip(gadget_cosine(x, y), -1.0, 1.0)))


def _bisect_monotone(f, lo: float, hi: float, target: float, iters: int = 200) -> float:
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def solve_parameter_for_angle(target: float) -> float:
    """Diagonal parameter t with gadget_angle(t, t) = target, by bisection.

    Valid targets lie in (0, arccos(sqrt(8)/3)].  Monotonicity of the angle
    in t is verified on a 1e-3 grid before searching.
    """
    if not (0.0 < target <= MAX_GADGET_ANGLE + 1e-12):
        raise AngleRangeError(
            f"target angle {target} outside (0, {MAX_GADGET_ANGLE}]"
        )
    ts = np.arange(1e-3, 1.0 + 1e-9, 1e-3)
    angles = np.arccos(np.clip(gadget_cosine(ts, ts), -1.0, 1.0))
    if np.any(np.diff(angles) < -1e-12):
        raise RuntimeError("diagonal gadget angle is not monotone on (0, 1]")
    return _bisect_monotone(lambda t: gadget_angle(t, t), 0.0, 1.0, target)


def offdiagonal_parameters_for_angle(target: float, x: float = 1.0) -> tuple[float, float]:
    """Parameters (x, y) with gadget_angle(x, y) = target, solving for y.

    Same-angle alternative to the diagonal solver.  The diagonal family has
    an internal symmetry (within a gadget, several rays sit at equal polar
    angle from c2 with azimuths commensurate with the apex-to-c3 step), which
    makes swept copies of a diagonal gadget share more rays than the chained
    construction expects; fixing x away from y breaks it.  y is searched on
    the rising branch below the fixed-x peak angle.
    """
    if not (0.0 < target <= MAX_GADGET_ANGLE + 1e-12):
        raise AngleRangeError(
            f"target angle {target} outside (0, {MAX_GADGET_ANGLE}]"
        )
    ys = np.arange(1e-3, 4.0, 1e-3)
    angles = np.arccos(np.clip(gadget_cosine(np.full_like(ys, x), ys), -1.0, 1.0))
    peak = int(np.argmax(angles))
    if angles[peak] + 1e-12 < target:
        raise AngleRangeError(
            f"angle {target} is not reachable with x = {x} (peak {angles[peak]})"
        )
    if np.any(np.diff(angles[: peak + 1]) < -1e-12):
        raise RuntimeError(f"gadget angle is not monotone in y below the x = {x} peak")
    y = _bisect_monotone(lambda yy: gadget_angle(x, yy), 0.0, float(ys[peak]), target)
    return x, y


@dataclass(frozen=True)
class AdmissiblePairSet:
    """Surviving (value(apex), value(c3)) pairs of the exhaustive enumeration."""

    pairs: frozenset[tuple[int, int]]
    assignment_count: int

    @property
    def forced_one_way(self) -> bool:
        """True when apex = 1 forces c3 = 1, i.e. (1, 0) is excluded."""
        return (1, 0) not in self.pairs

    @property
    def forced_symmetric(self) -> bool:
        """True when apex and c3 are forced to the same value."""
        return (1, 0) not in self.pairs and (0, 1) not in self.pairs


def _admissible_assignments() -> Iterator[tuple[int, ...]]:
    """All 0/1 assignments of the ten roles satisfying both coloring rules:
    exactly one 1 per triad, never two orthogonal rays both 1."""
    for m in range(1 << len(GADGET_ROLES)):
        v = tuple((m >> k) & 1 for k in range(len(GADGET_ROLES)))
        if any(v[a] + v[b] + v[c] != 1 for a, b, c in GADGET_TRIADS):
            continue
        if any(v[i] and v[j] for i, j in GADGET_EDGES):
            continue
        yield v


def enumerate_gadget_assignments(g: GadgetSet) -> AdmissiblePairSet:
    """Exhaustively enumerate all 2^10 value maps over the gadget's rays.

    Keeps assignments where each triad has exactly one ray valued 1 and no
    orthogonal pair is doubly valued 1, and reports which (apex, c3) value
    pairs survive together with the survivor count.  The forcing property is
    read off the result, never asserted a priori.
    """
    pairs = set()
    count = 0
    for v in _admissible_assignments():
        pairs.add((v[APEX], v[C3]))
        count += 1
    return AdmissiblePairSet(pairs=frozenset(pairs), assignment_count=count)


@dataclass(frozen=True)
class BoundReport:
    """Grid + refinement minimization of the apex-to-c3 cosine."""

    min_cosine: float
    argmin: tuple[float, float]
    grid_minima: tuple[tuple[float, float], ...]
    angle: float


def minimize_gadget_cosine(grid_n: int = 401, refine_iters: int = 6) -> BoundReport:
    """Minimize the apex-to-c3 cosine over (x, y) in [-2, 2]^2.

    Coarse grid scan followed by local grid refinement (zoom factor 5 per
    iteration) around the best point.
    """
    xs = np.linspace(-2.0, 2.0, grid_n)
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    cos = gadget_cosine(gx, gy)
    best = float(np.min(cos))
    hits = np.argwhere(cos <= best + 1e-12)
    grid_minima = tuple((float(xs[i]), float(xs[j])) for i, j in hits)
    bi, bj = hits[0]
    cx, cy = float(xs[bi]), float(xs[bj])
    half = float(xs[1] - xs[0])
    for _ in range(refine_iters):
        lx = np.linspace(cx - half, cx + half, 21)
        ly = np.linspace(cy - half, cy + half, 21)
        rx, ry = np.meshgrid(lx, ly, indexing="ij")
        rc = gadget_cosine(rx, ry)
        k = np.unravel_index(np.argmin(rc), rc.shape)
        cx, cy = float(rx[k]), float(ry[k])
        best = min(best, float(rc[k]))
        half /= 5.0
    return BoundReport(
        min_cosine=best,
        argmin=(cx, cy),
        grid_minima=grid_minima,
        angle=float(np.arccos(np.clip(best, -1.0, 1.0))),
    )
