"""Resolvable block designs with constant cross-class intersections.

A design here is a ground set X = {1, ..., mu * b**m} together with m
parallel classes of b blocks each.  Every parallel class partitions X, and
any m blocks picked from m distinct classes meet in exactly ``mu`` points
(a maximal cross resolvable design, MCRD).  These designs drive the cache
placement and the XOR delivery schedule in :mod:`macc.engine`: blocks index
subfiles, and the m-wise intersections are the subfiles a single
transmission serves.

Blocks and points are 1-based throughout, matching the usual design-theory
convention.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

DEFAULT_POINT_BUDGET = 10**6


class PointBudgetError(Exception):
    """Requested design is larger than the configured point budget."""


@dataclass(frozen=True)
class Design:
    """m parallel classes of b blocks over {1, ..., mu * b**m}.

    ``blocks[i-1][j-1]`` is block j of class i as a sorted tuple of points.
    ``mu`` is the declared cross intersection number; :func:`verify_mcrd`
    checks whether the blocks actually realize it.
    """

    m: int
    b: int
    mu: int
    blocks: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.m < 1 or self.b < 1 or self.mu < 1:
            raise ValueError("m, b, mu must be positive")
        if len(self.blocks) != self.m or any(len(cls) != self.b for cls in self.blocks):
            raise ValueError("blocks must be an m x b family")
        n = self.num_points
        for cls in self.blocks:
            for blk in cls:
                if any(p < 1 or p > n for p in blk):
                    raise ValueError(f"point out of range 1..{n}")

    @property
    def num_points(self) -> int:
        return self.mu * self.b**self.m

    def block(self, i: int, j: int) -> tuple[int, ...]:
        """Block j of parallel class i (both 1-based)."""
        if not (1 <= i <= self.m and 1 <= j <= self.b):
            raise ValueError(f"block index ({i},{j}) out of range")
        return self.blocks[i - 1][j - 1]

    def parallel_class(self, i: int) -> tuple[tuple[int, ...], ...]:
        if not 1 <= i <= self.m:
            raise ValueError(f"class index {i} out of range")
        return self.blocks[i - 1]

    def point_class_index(self, i: int) -> dict[int, int]:
        """Map point -> index of the class-i block containing it (first wins)."""
        out: dict[int, int] = {}
        for j in range(self.b, 0, -1):
            for p in self.blocks[i - 1][j - 1]:
                out[p] = j
        return out

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "b": self.b,
            "mu": self.mu,
            "blocks": [[list(blk) for blk in cls] for cls in self.blocks],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Design":
        blocks = tuple(
            tuple(tuple(sorted(blk)) for blk in klass) for klass in doc["blocks"]
        )
        return cls(m=int(doc["m"]), b=int(doc["b"]), mu=int(doc["mu"]), blocks=blocks)

    @classmethod
    def from_blocks(cls, block_lists, mu: int) -> "Design":
        """Build from nested lists; blocks are sorted, shape inferred."""
        blocks = tuple(tuple(tuple(sorted(blk)) for blk in klass) for klass in block_lists)
        return cls(m=len(blocks), b=len(blocks[0]), mu=mu, blocks=blocks)


def construct_mcrd(m: int, b: int, mu: int, point_budget: int = DEFAULT_POINT_BUDGET) -> Design:
    """Construct an MCRD with m classes, b blocks per class, intersection mu.

    Points are the columns of the m x (mu * b**m) matrix whose columns run
    through all length-m residue vectors mod b in lexicographic order (row 1
    most significant), each vector repeated mu times contiguously.  Block
    (i, l+1) collects the columns whose row-i entry equals l.
    """
    if m < 1 or b < 1 or mu < 1:
        raise ValueError("m, b, mu must be positive")
    n = mu * b**m
    if n > point_budget:
        raise PointBudgetError(f"{n} points exceeds budget {point_budget}")

    classes = [[[] for _ in range(b)] for _ in range(m)]
    for col in range(n):
        vec = col // mu
        for i in range(m - 1, -1, -1):
            classes[i][vec % b].append(col + 1)
            vec //= b
    blocks = tuple(tuple(tuple(blk) for blk in cls) for cls in classes)
    return Design(m=m, b=b, mu=mu, blocks=blocks)


@dataclass(frozen=True)
class DesignReport:
    """Outcome of the exhaustive design check; failures are entries, not faults."""

    classes_partition: tuple[bool, ...]
    block_size_ok: bool
    block_size: int | None
    intersection_sizes: tuple[int, ...]
    measured_mu: int | None
    mu_matches_declared: bool
    passed: bool

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        mu = self.measured_mu if self.measured_mu is not None else "non-constant"
        return (
            f"{status}: partitions={all(self.classes_partition)} "
            f"uniform_block_size={self.block_size_ok} measured_mu={mu}"
        )


def verify_mcrd(design: Design) -> DesignReport:
    """Exhaustively check the MCRD properties of ``design``.

    Every cross-class block tuple (all b**m of them) is intersected; the
    design passes iff each class partitions the point set, block sizes are
    uniform, and the measured intersection is constant and equals the
    declared mu.  This is the ground-truth oracle: O(b**m * m * blocksize).
    """
    points = set(range(1, design.num_points + 1))
    classes_partition = []
    for cls in design.blocks:
        seen: set[int] = set()
        total = 0
        for blk in cls:
            seen.update(blk)
            total += len(blk)
        classes_partition.append(seen == points and total == len(points))

    sizes = {len(blk) for cls in design.blocks for blk in cls}
    block_size_ok = len(sizes) == 1
    block_size = sizes.pop() if block_size_ok else None

    block_sets = [[frozenset(blk) for blk in cls] for cls in design.blocks]
    observed: set[int] = set()
    for combo in itertools.product(*block_sets):
        observed.add(len(frozenset.intersection(*combo)))

    measured_mu = observed.pop() if len(observed) == 1 else None
    if measured_mu is not None:
        observed = {measured_mu}
    mu_matches = measured_mu == design.mu
    passed = all(classes_partition) and block_size_ok and mu_matches
    return DesignReport(
        classes_partition=tuple(classes_partition),
        block_size_ok=block_size_ok,
        block_size=block_size,
        intersection_sizes=tuple(sorted(observed)),
        measured_mu=measured_mu,
        mu_matches_declared=mu_matches,
        passed=passed,
    )


def point_at(design: Design, coords) -> tuple[int, ...]:
    """Intersection of blocks (1, coords[0]), ..., (m, coords[m-1]).

    For a valid MCRD this has exactly mu points.
    """
    coords = tuple(coords)
    if len(coords) != design.m:
        raise ValueError(f"need {design.m} coordinates, got {len(coords)}")
    if any(not 1 <= c <= design.b for c in coords):
        raise ValueError(f"coordinates {coords} out of range 1..{design.b}")
    acc = set(design.block(1, coords[0]))
    for i, c in enumerate(coords[1:], start=2):
        acc.intersection_update(design.block(i, c))
    return tuple(sorted(acc))


def block_cover_check(design: Design, i: int, j: int) -> bool:
    """True iff block (i,j) equals the union of all cross intersections through it."""
    covered: set[int] = set()
    free = [range(1, design.b + 1)] * (design.m - 1)
    for rest in itertools.product(*free):
        coords = rest[: i - 1] + (j,) + rest[i - 1 :]
        covered.update(point_at(design, coords))
    return covered == set(design.block(i, j))
