"""User-to-cache association graphs for grouped multi-access caching.

The K = m*b users and caches split into m groups of b.  A valid topology
satisfies three conditions:

  C1  edges stay inside a group: user k(i,j) only reads caches c(i, .)
  C2  the b caches of a group split into z contiguous cells (the first z-1
      of size floor(b/z), the last of size b - (z-1)*floor(b/z)) and every
      user reads exactly one cache per cell, hence exactly z caches
  C3  every group graph has a perfect matching

Users and caches are addressed either as (group i, slot j), both 1-based,
or as global ids (i-1)*b + j; the JSON form uses global ids, row-major.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass


class MatchingError(Exception):
    """No perfect matching exists in some group (condition C3 fails)."""


class GenerationError(Exception):
    """Random generation failed to satisfy C3 within the retry budget."""


def cache_cell(j: int, b: int, z: int) -> int:
    """Cell index (1..z) of cache slot j under the contiguous cell layout."""
    if not 1 <= z <= b:
        raise ValueError(f"need 1 <= z <= b, got z={z}, b={b}")
    if not 1 <= j <= b:
        raise ValueError(f"cache slot {j} out of range 1..{b}")
    x = b // z
    return min(-(-j // x), z)


def cell_sizes(b: int, z: int) -> list[int]:
    """Sizes of the z cells: floor(b/z) for cells 1..z-1, remainder for cell z."""
    if not 1 <= z <= b:
        raise ValueError(f"need 1 <= z <= b, got z={z}, b={b}")
    x = b // z
    return [x] * (z - 1) + [b - (z - 1) * x]


def cell_slots(b: int, z: int, l: int) -> range:
    """Cache slots belonging to cell l (1-based, contiguous layout)."""
    x = b // z
    if l < z:
        return range((l - 1) * x + 1, l * x + 1)
    return range((z - 1) * x + 1, b + 1)


@dataclass(frozen=True)
class Topology:
    """Access lists for all m*b users; entry u is a sorted tuple of global cache ids."""

    m: int
    b: int
    z: int
    access: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.m < 1 or not 1 <= self.z <= self.b:
            raise ValueError("need m >= 1 and 1 <= z <= b")
        k = self.m * self.b
        if len(self.access) != k:
            raise ValueError(f"need {k} access lists, got {len(self.access)}")
        for caches in self.access:
            if any(not 1 <= c <= k for c in caches):
                raise ValueError("cache id out of range")

    @property
    def num_users(self) -> int:
        return self.m * self.b

    def user_id(self, i: int, j: int) -> int:
        return (i - 1) * self.b + j

    def user_coords(self, user: int) -> tuple[int, int]:
        return (user - 1) // self.b + 1, (user - 1) % self.b + 1

    def cache_coords(self, cache: int) -> tuple[int, int]:
        return (cache - 1) // self.b + 1, (cache - 1) % self.b + 1

    def user_access(self, i: int, j: int) -> tuple[int, ...]:
        """Global cache ids read by user k(i,j)."""
        return self.access[(i - 1) * self.b + j - 1]

    def group_slots(self, i: int, j: int) -> list[int]:
        """Within-group cache slots read by k(i,j); requires C1 to hold for the user."""
        slots = []
        for c in self.user_access(i, j):
            gi, slot = self.cache_coords(c)
            if gi != i:
                raise ValueError(f"user k({i},{j}) reads cache of group {gi}")
            slots.append(slot)
        return slots

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "b": self.b,
            "z": self.z,
            "access": [list(caches) for caches in self.access],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Topology":
        access = tuple(tuple(sorted(set(map(int, row)))) for row in doc["access"])
        return cls(m=int(doc["m"]), b=int(doc["b"]), z=int(doc["z"]), access=access)

    @classmethod
    def from_group_slots(cls, m: int, b: int, z: int, slots) -> "Topology":
        """Build from per-group, per-user lists of within-group cache slots."""
        access = []
        for i in range(1, m + 1):
            for user_slots in slots[i - 1]:
                access.append(tuple(sorted((i - 1) * b + s for s in user_slots)))
        return cls(m=m, b=b, z=z, access=tuple(access))


@dataclass(frozen=True)
class MatchingAssignment:
    """Per group, a bijection user slot -> cache slot drawn from the access sets."""

    m: int
    b: int
    to_cache: tuple[tuple[int, ...], ...]

    def cache_for(self, i: int, j: int) -> int:
        return self.to_cache[i - 1][j - 1]

    def user_for(self, i: int, cache_slot: int) -> int:
        return self.to_cache[i - 1].index(cache_slot) + 1

    def inverse(self, i: int) -> list[int]:
        """inverse(i)[cache_slot - 1] = user slot matched to that cache."""
        inv = [0] * self.b
        for j, c in enumerate(self.to_cache[i - 1], start=1):
            inv[c - 1] = j
        return inv

    def is_valid_for(self, topology: Topology) -> bool:
        for i in range(1, self.m + 1):
            row = self.to_cache[i - 1]
            if sorted(row) != list(range(1, self.b + 1)):
                return False
            for j, c in enumerate(row, start=1):
                if (i - 1) * self.b + c not in topology.user_access(i, j):
                    return False
        return True


def _max_matching(adj: list[list[int]], n_right: int) -> list[int]:
    """Kuhn augmenting-path matching; returns right-side owner per left vertex (0 = none).

    A greedy seeding pass hands every left vertex its lowest free neighbour,
    then augmenting passes (in ascending left order, neighbours ascending)
    match the rest, so the result is deterministic with lowest-index
    tie-breaking and greedy assignments are kept whenever possible.
    """
    match_right = [0] * (n_right + 1)
    seeded = [False] * len(adj)
    for u in range(1, len(adj)):
        for v in adj[u]:
            if match_right[v] == 0:
                match_right[v] = u
                seeded[u] = True
                break

    def try_augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                if match_right[v] == 0 or try_augment(match_right[v], seen):
                    match_right[v] = u
                    return True
        return False

    for u in range(1, len(adj)):
        if not seeded[u]:
            try_augment(u, [False] * (n_right + 1))

    match_left = [0] * len(adj)
    for v in range(1, n_right + 1):
        if match_right[v]:
            match_left[match_right[v]] = v
    return match_left


def _group_adj(topology: Topology, i: int) -> list[list[int]]:
    """Within-group adjacency for group i, ignoring any cross-group edges."""
    adj: list[list[int]] = [[]]
    for j in range(1, topology.b + 1):
        slots = []
        for c in topology.user_access(i, j):
            gi, slot = topology.cache_coords(c)
            if gi == i:
                slots.append(slot)
        adj.append(sorted(slots))
    return adj


@dataclass(frozen=True)
class TopologyReport:
    c1_ok: bool
    c2_ok: bool
    c2_at_most_ok: bool
    c3_ok: bool
    passed: bool
    violations: tuple[str, ...]
    warnings: tuple[str, ...]

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}: C1={self.c1_ok} C2={self.c2_ok} C3={self.c3_ok}"


def validate(topology: Topology) -> TopologyReport:
    """Check C1, C2 (exactly one cache per cell), and C3 independently.

    A user that reads at most one cache per cell but misses some cell meets
    the looser reading of C2; that is reported as a warning, distinct from a
    user that reads two caches in one cell.
    """
    m, b, z = topology.m, topology.b, topology.z
    violations: list[str] = []
    warnings: list[str] = []

    c1_ok = True
    for i in range(1, m + 1):
        for j in range(1, b + 1):
            for c in topology.user_access(i, j):
                gi, _ = topology.cache_coords(c)
                if gi != i:
                    c1_ok = False
                    violations.append(f"C1: user k({i},{j}) reads cache {c} of group {gi}")

    c2_ok = True
    c2_at_most_ok = True
    for i in range(1, m + 1):
        for j in range(1, b + 1):
            per_cell = [0] * z
            for c in topology.user_access(i, j):
                gi, slot = topology.cache_coords(c)
                if gi != i:
                    continue
                per_cell[cache_cell(slot, b, z) - 1] += 1
            if any(n > 1 for n in per_cell):
                c2_ok = False
                c2_at_most_ok = False
                violations.append(f"C2: user k({i},{j}) reads several caches in one cell")
            elif any(n == 0 for n in per_cell):
                c2_ok = False
                warnings.append(f"C2: user k({i},{j}) misses a cell (at-most-but-not-exactly)")

    c3_ok = True
    for i in range(1, m + 1):
        match = _max_matching(_group_adj(topology, i), b)
        size = sum(1 for v in match[1:] if v)
        if size != b:
            c3_ok = False
            violations.append(f"C3: group {i} has maximum matching {size} < {b}")

    passed = c1_ok and c2_ok and c3_ok
    return TopologyReport(
        c1_ok=c1_ok,
        c2_ok=c2_ok,
        c2_at_most_ok=c2_at_most_ok,
        c3_ok=c3_ok,
        passed=passed,
        violations=tuple(violations),
        warnings=tuple(warnings),
    )


def extract_matchings(topology: Topology) -> MatchingAssignment:
    """Deterministic perfect matching per group (lowest-index tie-breaking)."""
    rows = []
    for i in range(1, topology.m + 1):
        match = _max_matching(_group_adj(topology, i), topology.b)
        if any(v == 0 for v in match[1:]):
            raise MatchingError(f"group {i} admits no perfect matching (C3)")
        rows.append(tuple(match[1:]))
    return MatchingAssignment(m=topology.m, b=topology.b, to_cache=tuple(rows))


def canonical_topology(m: int, b: int, z: int) -> Topology:
    """Fixed valid topology: in each cell, user j reads the cache at offset (j-1) mod cellsize."""
    sizes = cell_sizes(b, z)
    slots = []
    for _ in range(m):
        group = []
        for j in range(1, b + 1):
            user_slots = []
            start = 0
            for s in sizes:
                user_slots.append(start + (j - 1) % s + 1)
                start += s
            group.append(user_slots)
        slots.append(group)
    return Topology.from_group_slots(m, b, z, slots)


def random_topology(m: int, b: int, z: int, seed: int, max_retries: int = 1000) -> Topology:
    """Seeded uniform choice of one cache per cell per user; groups resampled until C3 holds."""
    rng = random.Random(seed)
    sizes = cell_sizes(b, z)
    starts = [sum(sizes[:l]) for l in range(z)]
    slots = []
    for _ in range(m):
        for attempt in range(max_retries):
            group = [
                [starts[l] + rng.randrange(sizes[l]) + 1 for l in range(z)]
                for _ in range(b)
            ]
            adj = [[]] + [sorted(user_slots) for user_slots in group]
            match = _max_matching(adj, b)
            if all(v != 0 for v in match[1:]):
                slots.append(group)
                break
        else:
            raise GenerationError(f"no C3-satisfying group found in {max_retries} tries")
    return Topology.from_group_slots(m, b, z, slots)


def count_topologies(m: int, b: int, z: int) -> int:
    """Number of graphs satisfying C1 and C2 (C3 not filtered); exact."""
    if m < 1 or not 1 <= z <= b:
        raise ValueError("need m >= 1 and 1 <= z <= b")
    x = b // z
    per_user = x ** (z - 1) * (b - (z - 1) * x)
    return per_user ** (b * m)
