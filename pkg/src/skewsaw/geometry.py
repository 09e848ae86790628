"""Geometry of the skewed square lattice.

Vertices sit at ``i*e1 + j*e2`` with ``e1 = (1, 0)`` and
``e2 = (cos(theta), sin(theta))``.  Every face is a rhombus with angles
``theta`` (at its SW and NE corners) and ``pi - theta`` (at SE and NW).
Walks live on mid-edges: they start, end and turn at edge midpoints and
cross every edge at a right angle.

Conventions fixed here and relied on everywhere else:

* ``MidEdge(i, j, 'H')`` is the midpoint of the edge from vertex (i, j)
  to (i+1, j); ``'V'`` the edge from (i, j) to (i, j+1).
* ``Rhombus(i, j)`` has corners (i, j), (i+1, j), (i+1, j+1), (i, j+1)
  and mid-edges bottom H(i,j), right V(i+1,j), top H(i,j+1), left V(i,j).
* Crossing signs: ``+1`` crosses an H edge upward (toward +e2) and a V
  edge rightward (toward +e1).
* Turns are counter-clockwise positive.  An arc around a theta-corner
  turns by +-theta, around a (pi-theta)-corner by +-(pi-theta), and a
  straight passage turns by 0.  Turn totals are tracked exactly as
  integer multiples (n_theta, n_pi_minus_theta).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

THETA_MIN = math.pi / 3
THETA_MAX = 2 * math.pi / 3

_RANGE_SLACK = 1e-12


@dataclass(frozen=True)
class LatticeAngle:
    """Rhombus angle restricted to [pi/3, 2pi/3].

    Outside this window one of the double-arc weights of the critical
    family goes negative, so domain-level code refuses such angles.
    """

    theta: float

    def __post_init__(self) -> None:
        if not (THETA_MIN - _RANGE_SLACK <= self.theta <= THETA_MAX + _RANGE_SLACK):
            raise ValueError(
                f"lattice angle {self.theta!r} outside [pi/3, 2pi/3]"
            )

    @property
    def complement(self) -> float:
        return math.pi - self.theta


def as_theta(theta) -> float:
    """Coerce a float or LatticeAngle to a validated angle value."""
    if isinstance(theta, LatticeAngle):
        return theta.theta
    return LatticeAngle(float(theta)).theta


def basis(theta: float) -> tuple[complex, complex]:
    """Embedding basis (e1, e2) as complex numbers."""
    return 1.0 + 0.0j, cmath.exp(1j * theta)


@dataclass(frozen=True, order=True)
class MidEdge:
    """Midpoint of a lattice edge, addressed by exact integer coordinates."""

    i: int
    j: int
    orient: str  # 'H' or 'V'

    def __post_init__(self) -> None:
        if self.orient not in ("H", "V"):
            raise ValueError(f"orient must be 'H' or 'V', got {self.orient!r}")

    def embed(self, theta: float) -> complex:
        e1, e2 = basis(theta)
        if self.orient == "H":
            return (self.i + 0.5) * e1 + self.j * e2
        return self.i * e1 + (self.j + 0.5) * e2

    def rhombi(self) -> tuple["Rhombus", "Rhombus"]:
        """The two faces sharing this edge, (+1)-side first.

        For an H edge the +1 crossing direction points into the first
        rhombus returned; for a V edge likewise.
        """
        if self.orient == "H":
            return Rhombus(self.i, self.j), Rhombus(self.i, self.j - 1)
        return Rhombus(self.i, self.j), Rhombus(self.i - 1, self.j)

    def normal(self, theta: float, sign: int = 1) -> complex:
        """Unit crossing direction for the given sign."""
        if self.orient == "H":
            return sign * 1j
        return sign * cmath.exp(1j * (theta - math.pi / 2))


def nearest_midedge(point: complex, theta: float) -> MidEdge:
    """Invert the embedding: closest mid-edge to an arbitrary point."""
    e1, e2 = basis(theta)
    # Solve point = a*e1 + b*e2 for real a, b.
    det = e1.real * e2.imag - e1.imag * e2.real
    a = (point.real * e2.imag - point.imag * e2.real) / det
    b = (e1.real * point.imag - e1.imag * point.real) / det
    best = None
    best_d2 = math.inf
    for i in range(math.floor(a) - 1, math.floor(a) + 3):
        for j in range(math.floor(b) - 1, math.floor(b) + 3):
            for orient in ("H", "V"):
                m = MidEdge(i, j, orient)
                d = abs(m.embed(theta) - point)
                if d < best_d2:
                    best, best_d2 = m, d
    return best


@dataclass(frozen=True, order=True)
class Rhombus:
    """Face with corners (i,j), (i+1,j), (i+1,j+1), (i,j+1)."""

    i: int
    j: int

    def mid_edges(self) -> tuple[MidEdge, MidEdge, MidEdge, MidEdge]:
        """(bottom, right, top, left) mid-edges."""
        return (
            MidEdge(self.i, self.j, "H"),
            MidEdge(self.i + 1, self.j, "V"),
            MidEdge(self.i, self.j + 1, "H"),
            MidEdge(self.i, self.j, "V"),
        )

    def corners(self) -> tuple[tuple[int, int], ...]:
        """(SW, SE, NE, NW) vertex coordinates, counter-clockwise."""
        return (
            (self.i, self.j),
            (self.i + 1, self.j),
            (self.i + 1, self.j + 1),
            (self.i, self.j + 1),
        )

    def theta_corners(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """The two corners carrying the angle theta (SW and NE)."""
        return (self.i, self.j), (self.i + 1, self.j + 1)

    def contains_midedge(self, m: MidEdge) -> bool:
        return m in self.mid_edges()

    def center(self, theta: float) -> complex:
        e1, e2 = basis(theta)
        return (self.i + 0.5) * e1 + (self.j + 0.5) * e2


def _side_position(r: Rhombus, m: MidEdge) -> str:
    b, rt, t, lf = r.mid_edges()
    if m == b:
        return "B"
    if m == rt:
        return "R"
    if m == t:
        return "T"
    if m == lf:
        return "L"
    raise ValueError(f"{m} is not a mid-edge of {r}")


# For each (src-side, dst-side) pair: the traversed component and the
# exact turn in units of (theta, pi - theta), CCW positive.  Components
# name the corner an arc surrounds; 'bt'/'lr' are the two straights.
_PASSAGE = {
    ("B", "L"): ("sw", 1, 0),
    ("L", "B"): ("sw", -1, 0),
    ("T", "R"): ("ne", 1, 0),
    ("R", "T"): ("ne", -1, 0),
    ("L", "T"): ("nw", 0, 1),
    ("T", "L"): ("nw", 0, -1),
    ("R", "B"): ("se", 0, 1),
    ("B", "R"): ("se", 0, -1),
    ("B", "T"): ("bt", 0, 0),
    ("T", "B"): ("bt", 0, 0),
    ("L", "R"): ("lr", 0, 0),
    ("R", "L"): ("lr", 0, 0),
}

ARC_THETA_COMPONENTS = ("sw", "ne")
ARC_PMT_COMPONENTS = ("se", "nw")
STRAIGHT_COMPONENTS = ("bt", "lr")


@dataclass(frozen=True, order=True)
class Step:
    """One passage of a rhombus, from one of its mid-edges to another."""

    rhombus: Rhombus
    src: MidEdge
    dst: MidEdge

    def __post_init__(self) -> None:
        if self.src == self.dst:
            raise ValueError("step endpoints must differ")
        # Raises if either endpoint does not belong to the rhombus.
        _side_position(self.rhombus, self.src)
        _side_position(self.rhombus, self.dst)

    @property
    def component(self) -> str:
        a = _side_position(self.rhombus, self.src)
        b = _side_position(self.rhombus, self.dst)
        return _PASSAGE[(a, b)][0]

    @property
    def kind(self) -> str:
        c = self.component
        if c in ARC_THETA_COMPONENTS:
            return "arc_theta"
        if c in ARC_PMT_COMPONENTS:
            return "arc_pi_minus_theta"
        return "straight"

    @property
    def turn_units(self) -> tuple[int, int]:
        a = _side_position(self.rhombus, self.src)
        b = _side_position(self.rhombus, self.dst)
        _, dt, dp = _PASSAGE[(a, b)]
        return dt, dp

    def turn(self, theta: float) -> float:
        dt, dp = self.turn_units
        return dt * theta + dp * (math.pi - theta)

    @property
    def entry_sign(self) -> int:
        """Crossing sign at src that enters this step's rhombus."""
        return 1 if self.src.rhombi()[0] == self.rhombus else -1

    @property
    def exit_sign(self) -> int:
        """Crossing sign at dst that leaves this step's rhombus."""
        return -1 if self.dst.rhombi()[0] == self.rhombus else 1


def step_candidates(src: MidEdge, domain: "ParallelogramDomain | None" = None,
                    sign: int | None = None) -> list[Step]:
    """All steps leaving a mid-edge.

    Six on the free lattice (three through each adjacent rhombus); fewer
    when a domain clips a side or the crossing sign is pinned.
    """
    out = []
    plus, minus = src.rhombi()
    for s, r in ((1, plus), (-1, minus)):
        if sign is not None and s != sign:
            continue
        if domain is not None and not domain.contains_rhombus(r):
            continue
        for dst in r.mid_edges():
            if dst != src:
                out.append(Step(r, src, dst))
    out.sort(key=lambda st: (st.rhombus, st.dst))
    return out


def winding_increment(prev_direction: complex, step: Step, theta: float) -> float:
    """Signed turn contributed by one step, given the crossing direction
    at its source edge.

    ``prev_direction`` must equal the inward normal of the step's
    rhombus at ``step.src`` (the walk has to enter the face it passes);
    anything else signals a bookkeeping bug upstream.
    """
    entry = step.src.normal(theta, step.entry_sign)
    if abs(prev_direction - entry) > 1e-9:
        raise ValueError(
            f"direction {prev_direction} does not enter {step.rhombus} "
            f"through {step.src}"
        )
    turn = step.turn(theta)
    # Cross-check against the embedded normals; a mismatch means the
    # passage table and the embedding disagree.
    exit_dir = step.dst.normal(theta, step.exit_sign)
    expected = cmath.phase(exit_dir / entry)
    if abs(_wrap_angle(turn) - expected) > 1e-9:
        raise ValueError(f"inconsistent turn for step {step}")
    return turn


def _wrap_angle(x: float) -> float:
    while x <= -math.pi:
        x += 2 * math.pi
    while x > math.pi:
        x -= 2 * math.pi
    return x


@dataclass(frozen=True)
class ParallelogramDomain:
    """Finite parallelogram of T columns by 2L+1 rows of rhombi.

    Rhombi are R(i, j) with 0 <= i < T and -L <= j <= L.  The origin
    mid-edge ``a = V(0, 0)`` sits in the middle of the left side; walks
    launched from it enter the domain crossing rightward (sign +1).

    Sides (as sets of boundary mid-edges):

    * alpha   -- left,   V(0, j),   2L+1 edges, contains the origin
    * beta    -- right,  V(T, j),   2L+1 edges
    * delta   -- bottom, H(i, -L),  T edges
    * epsilon -- top,    H(i, L+1), T edges
    """

    T: int
    L: int
    theta: float

    def __post_init__(self) -> None:
        if self.T < 1:
            raise ValueError("T must be a positive integer")
        if self.L < 0:
            raise ValueError("L must be a non-negative integer")
        as_theta(self.theta)

    @property
    def origin(self) -> MidEdge:
        return MidEdge(0, 0, "V")

    @property
    def origin_sign(self) -> int:
        return 1

    @property
    def n_rhombi(self) -> int:
        return (2 * self.L + 1) * self.T

    def contains_rhombus(self, r: Rhombus) -> bool:
        return 0 <= r.i < self.T and -self.L <= r.j <= self.L

    def rhombi(self):
        for i in range(self.T):
            for j in range(-self.L, self.L + 1):
                yield Rhombus(i, j)

    def mid_edges(self) -> set[MidEdge]:
        out: set[MidEdge] = set()
        for r in self.rhombi():
            out.update(r.mid_edges())
        return out

    def side_of(self, m: MidEdge) -> str | None:
        """'alpha' | 'beta' | 'delta' | 'epsilon' | 'interior' | None."""
        if m.orient == "V":
            if -self.L <= m.j <= self.L:
                if m.i == 0:
                    return "alpha"
                if m.i == self.T:
                    return "beta"
                if 0 < m.i < self.T:
                    return "interior"
            return None
        if 0 <= m.i < self.T:
            if m.j == -self.L:
                return "delta"
            if m.j == self.L + 1:
                return "epsilon"
            if -self.L < m.j < self.L + 1:
                return "interior"
        return None
