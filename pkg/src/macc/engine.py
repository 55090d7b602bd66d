"""Placement, XOR broadcast delivery, and decode verification.

Pipeline: an intersection-1 design from :mod:`macc.designs` plus a validated
topology from :mod:`macc.topology` yield a placement (each cache stores whole
blocks of subfile indices from its cell), a demand graph (which blocks each
matched user still misses), and a delivery schedule of XOR transmissions.
Every transmission combines one needed subfile per group, so each serves m
users at once.  Rates are exact rationals; no floats on correctness paths.

File indices run 1..N, subfile indices 1..b**m, users and caches are
addressed as in :mod:`macc.topology`.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple

from .designs import Design
from .topology import (
    MatchingAssignment,
    Topology,
    cache_cell,
    cell_slots,
    extract_matchings,
    validate,
)

DEFAULT_PAYLOAD_SIZE = 64


class UnsupportedDesignError(Exception):
    """Delivery needs singleton cross intersections (mu = 1)."""


def cell_quotas(t: int, b: int, z: int) -> tuple[int, int]:
    """Blocks a cache may store: (quota for cells 1..z-1, quota for cell z).

    Equals (min(t, floor(b/z)), min(t, b - (z-1)*floor(b/z))).
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if not 1 <= z <= b:
        raise ValueError(f"need 1 <= z <= b, got z={z}, b={b}")
    x = b // z
    return min(t, x), min(t, b - (z - 1) * x)


def achievable_rate(b: int, m: int, z: int, t: int) -> Fraction:
    """Broadcast rate in file units for the given parameters; exact.

    Three regimes: b - t*z while t <= floor(b/z); then the last cell drains
    linearly; zero once every user covers all blocks of its group.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    t_prime, t_z = cell_quotas(t, b, z)
    x = b // z
    if t <= x:
        rate = b - t * z
    elif t < b - (z - 1) * x:
        rate = b - (z - 1) * x - t
    else:
        rate = 0
    assert rate == b - t_prime * (z - 1) - t_z
    return Fraction(rate)


@dataclass(frozen=True)
class SchemeParams:
    """Problem parameters: m*b users/caches, access degree z, memory t*N/b, N files."""

    m: int
    b: int
    z: int
    t: int
    n_files: int

    def __post_init__(self):
        if self.m < 1 or self.n_files < 1:
            raise ValueError("m and n_files must be >= 1")
        cell_quotas(self.t, self.b, self.z)

    @property
    def t_prime(self) -> int:
        return cell_quotas(self.t, self.b, self.z)[0]

    @property
    def t_z(self) -> int:
        return cell_quotas(self.t, self.b, self.z)[1]

    @property
    def subpacketization(self) -> int:
        return self.b**self.m

    @property
    def missing_count(self) -> int:
        """Blocks per group no user covers via its caches; also the rate in files."""
        return self.b - self.t_prime * (self.z - 1) - self.t_z

    @property
    def memory_fraction(self) -> Fraction:
        return Fraction(self.t, self.b)

    @property
    def num_users(self) -> int:
        return self.m * self.b


class Summand(NamedTuple):
    user: int  # global user id the term is addressed to
    file: int  # that user's demanded file
    subfile: int  # subfile index of the term


@dataclass(frozen=True)
class Transmission:
    """One XOR broadcast: schedule coordinates plus the m combined subfiles."""

    n: int
    coords: tuple[int, ...]
    summands: tuple[Summand, ...]
    payload: bytes | None = None

    def to_json_dict(self) -> dict:
        doc = {
            "n": self.n,
            "coords": list(self.coords),
            "summands": [
                {"user": s.user, "file": s.file, "subfile": s.subfile}
                for s in self.summands
            ],
        }
        if self.payload is not None:
            doc["payload_hex"] = self.payload.hex()
        return doc


@dataclass(frozen=True)
class Placement:
    """Block slots stored per cache and the derived per-user coverage.

    ``cache_blocks[i-1][j-1]`` lists the class-i block slots cache c(i,j)
    stores; ``user_blocks[i-1][j-1]`` is the union over the caches user
    k(i,j) reads.  Caches in different cells of a group never share blocks.
    """

    design: Design
    topology: Topology
    params: SchemeParams
    cache_blocks: tuple[tuple[tuple[int, ...], ...], ...]
    user_blocks: tuple[tuple[tuple[int, ...], ...], ...]

    def user_block_set(self, i: int, j: int) -> frozenset[int]:
        return frozenset(self.user_blocks[i - 1][j - 1])

    def cached_subfiles(self, i: int, j: int) -> set[int]:
        """Subfile indices user k(i,j) reads from its caches (any file)."""
        out: set[int] = set()
        for slot in self.user_blocks[i - 1][j - 1]:
            out.update(self.design.block(i, slot))
        return out


def place(design: Design, topology: Topology, params: SchemeParams,
          seed: int | None = None) -> Placement:
    """Fill caches: c(i,j) keeps block (i,j) plus quota-1 more from its cell.

    Deterministic mode (seed None) picks the lowest-indexed extra blocks;
    seeded mode samples them reproducibly.  Requires a mu = 1 design shaped
    like the topology, and a topology that passes validation.
    """
    if (design.m, design.b) != (topology.m, topology.b):
        raise ValueError("design and topology shapes differ")
    if (params.m, params.b, params.z) != (topology.m, topology.b, topology.z):
        raise ValueError("params and topology shapes differ")
    if design.mu != 1:
        raise ValueError("placement needs a design with mu = 1")
    report = validate(topology)
    if not report.passed:
        raise ValueError(f"topology invalid: {report.summary()}")

    rng = None if seed is None else random.Random(seed)
    m, b, z = params.m, params.b, params.z
    t_prime, t_z = params.t_prime, params.t_z

    cache_rows = []
    for i in range(1, m + 1):
        row = []
        for j in range(1, b + 1):
            l = cache_cell(j, b, z)
            quota = t_prime if l < z else t_z
            pool = [s for s in cell_slots(b, z, l) if s != j]
            if rng is None:
                extra = pool[: quota - 1]
            else:
                extra = sorted(rng.sample(pool, quota - 1))
            row.append(tuple(sorted([j] + extra)))
        cache_rows.append(tuple(row))

    user_rows = []
    for i in range(1, m + 1):
        row = []
        for j in range(1, b + 1):
            covered: set[int] = set()
            for slot in topology.group_slots(i, j):
                covered.update(cache_rows[i - 1][slot - 1])
            row.append(tuple(sorted(covered)))
        user_rows.append(tuple(row))

    return Placement(
        design=design,
        topology=topology,
        params=params,
        cache_blocks=tuple(cache_rows),
        user_blocks=tuple(user_rows),
    )


@dataclass(frozen=True)
class DemandGraph:
    """Bipartite cache/block graph: cache c(i,j) connects to the class-i blocks
    its matched user does not cover.  ``missing[i-1][j-1]`` lists those block
    slots ascending; the left degree is uniform at the missing-block count."""

    m: int
    b: int
    missing: tuple[tuple[tuple[int, ...], ...], ...]

    def degree(self, i: int, j: int) -> int:
        return len(self.missing[i - 1][j - 1])


def build_demand_graph(placement: Placement, matchings: MatchingAssignment) -> DemandGraph:
    m, b = placement.params.m, placement.params.b
    rows = []
    for i in range(1, m + 1):
        inv = matchings.inverse(i)
        row = []
        for j in range(1, b + 1):
            user_slot = inv[j - 1]
            covered = placement.user_block_set(i, user_slot)
            row.append(tuple(s for s in range(1, b + 1) if s not in covered))
        rows.append(tuple(row))
    return DemandGraph(m=m, b=b, missing=tuple(rows))


def _point_lookup(design: Design) -> dict[tuple[int, ...], int]:
    """Map each full coordinate tuple (block slot per class) to its point; mu = 1."""
    per_class = [design.point_class_index(i) for i in range(1, design.m + 1)]
    table: dict[tuple[int, ...], int] = {}
    for p in range(1, design.num_points + 1):
        table[tuple(cls[p] for cls in per_class)] = p
    return table


def _check_demands(demands, params: SchemeParams) -> tuple[int, ...]:
    demands = tuple(int(d) for d in demands)
    if len(demands) != params.num_users:
        raise ValueError(f"need {params.num_users} demands, got {len(demands)}")
    if any(not 1 <= d <= params.n_files for d in demands):
        raise ValueError("demand out of range 1..N")
    return demands


def deliver(placement: Placement, matchings: MatchingAssignment, demands) -> list[Transmission]:
    """Enumerate all transmissions in canonical (n, coords) lexicographic order.

    For each round n and each coordinate tuple, group i contributes the
    subfile at the intersection of the chosen blocks with coordinate i
    swapped for the n-th block its matched user misses.  Repeated demands
    are allowed; the schedule never inspects them.
    """
    design, params = placement.design, placement.params
    if design.mu != 1:
        raise UnsupportedDesignError("delivery needs singleton intersections (mu = 1)")
    if not matchings.is_valid_for(placement.topology):
        raise ValueError("matchings do not fit the placement's topology")
    demands = _check_demands(demands, params)

    m, b = params.m, params.b
    r = params.missing_count
    if r == 0:
        return []

    inv = [matchings.inverse(i) for i in range(1, m + 1)]
    missing = []
    for i in range(1, m + 1):
        per_user = []
        for j in range(1, b + 1):
            covered = placement.user_block_set(i, j)
            gaps = [s for s in range(1, b + 1) if s not in covered]
            assert len(gaps) == r
            per_user.append(gaps)
        missing.append(per_user)

    lookup = _point_lookup(design)
    out: list[Transmission] = []
    for n in range(1, r + 1):
        for coords in itertools.product(range(1, b + 1), repeat=m):
            summands = []
            for i in range(1, m + 1):
                user_slot = inv[i - 1][coords[i - 1] - 1]
                swap = missing[i - 1][user_slot - 1][n - 1]
                key = coords[: i - 1] + (swap,) + coords[i:]
                user = (i - 1) * b + user_slot
                summands.append(Summand(user, demands[user - 1], lookup[key]))
            out.append(Transmission(n=n, coords=coords, summands=tuple(summands)))
    return out


def decode(user: int, placement: Placement, transmissions, demand: int) -> set[int]:
    """Subfile indices of ``demand`` user ``user`` recovers from the broadcasts.

    A transmission is useful when the user can cancel all summands but one
    (their subfiles sit in blocks it covers) and the leftover is a subfile
    of its demanded file.
    """
    i, j = placement.topology.user_coords(user)
    covered = placement.user_block_set(i, j)
    in_class = placement.design.point_class_index(i)
    recovered: set[int] = set()
    for tx in transmissions:
        unknown = [s for s in tx.summands if in_class[s.subfile] not in covered]
        if len(unknown) == 1 and unknown[0].file == demand:
            recovered.add(unknown[0].subfile)
    return recovered


def subfile_bytes(seed: int, file: int, subfile: int, size: int = DEFAULT_PAYLOAD_SIZE) -> bytes:
    """Deterministic content of a subfile; the ground truth for the byte oracle."""
    if size < 1:
        raise ValueError("payload size must be >= 1")
    key = seed.to_bytes(8, "big", signed=True)
    out = b""
    counter = 0
    while len(out) < size:
        data = b"%d:%d:%d" % (file, subfile, counter)
        out += hashlib.blake2b(data, key=key, digest_size=64).digest()
        counter += 1
    return out[:size]


@dataclass(frozen=True)
class SimulationReport:
    m: int
    b: int
    z: int
    t: int
    n_files: int
    subpacketization: int
    transmission_count: int
    rate: Fraction
    expected_rate: Fraction
    users_complete: tuple[bool, ...]
    beneficiary_counts: tuple[int, ...]
    byte_oracle_ok: bool | None
    transmissions: tuple[Transmission, ...] | None = None

    def all_complete(self) -> bool:
        return all(self.users_complete)

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "b": self.b,
            "z": self.z,
            "t": self.t,
            "n_files": self.n_files,
            "subpacketization": self.subpacketization,
            "transmission_count": self.transmission_count,
            "rate": {"num": self.rate.numerator, "den": self.rate.denominator},
            "expected_rate": {
                "num": self.expected_rate.numerator,
                "den": self.expected_rate.denominator,
            },
            "users_complete": list(self.users_complete),
            "beneficiary_counts": list(self.beneficiary_counts),
            "byte_oracle_ok": self.byte_oracle_ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def simulate(design: Design, topology: Topology, params: SchemeParams, demands=None,
             payload_size: int | None = None, seed: int = 0,
             placement_seed: int | None = None,
             keep_transmissions: bool = False) -> SimulationReport:
    """Run placement, delivery, and per-user decode; report rate and completeness.

    ``demands`` defaults to user u demanding file u (needs N >= K).  With
    ``payload_size`` set, subfiles get seeded byte contents, transmissions
    carry XOR payloads, and every recovery is re-checked at byte level
    against the ground-truth generator.
    """
    if demands is None:
        if params.n_files < params.num_users:
            raise ValueError("default distinct demands need N >= K")
        demands = range(1, params.num_users + 1)
    demands = _check_demands(demands, params)

    placement = place(design, topology, params, seed=placement_seed)
    matchings = extract_matchings(topology)
    transmissions = deliver(placement, matchings, demands)

    if payload_size is not None:
        transmissions = [
            replace(
                tx,
                payload=_xor_all(
                    subfile_bytes(seed, s.file, s.subfile, payload_size)
                    for s in tx.summands
                ),
            )
            for tx in transmissions
        ]

    m, b = params.m, params.b
    in_class = [design.point_class_index(i) for i in range(1, m + 1)]
    covered = [
        [placement.user_block_set(i, j) for j in range(1, b + 1)]
        for i in range(1, m + 1)
    ]
    users_by_file: dict[int, list[int]] = {}
    for user, d in enumerate(demands, start=1):
        users_by_file.setdefault(d, []).append(user)

    def knows(user: int, subfile: int) -> bool:
        gi, gj = (user - 1) // b, (user - 1) % b
        return in_class[gi][subfile] in covered[gi][gj]

    recovered: list[set[int]] = [set() for _ in range(params.num_users + 1)]
    beneficiary_counts = []
    byte_ok: bool | None = None if payload_size is None else True
    for tx in transmissions:
        count = 0
        for s in tx.summands:
            for user in users_by_file.get(s.file, ()):
                if knows(user, s.subfile):
                    continue
                if all(o is s or knows(user, o.subfile) for o in tx.summands):
                    count += 1
                    recovered[user].add(s.subfile)
                    if payload_size is not None:
                        rest = _xor_all(
                            subfile_bytes(seed, o.file, o.subfile, payload_size)
                            for o in tx.summands
                            if o is not s
                        )
                        got = _xor(tx.payload, rest) if rest else tx.payload
                        if got != subfile_bytes(seed, s.file, s.subfile, payload_size):
                            byte_ok = False
        beneficiary_counts.append(count)

    f = params.subpacketization
    block_size = b ** (m - 1)
    users_complete = []
    for user in range(1, params.num_users + 1):
        gi, gj = (user - 1) // b, (user - 1) % b
        cached = len(covered[gi][gj]) * block_size
        users_complete.append(cached + len(recovered[user]) == f)

    return SimulationReport(
        m=m,
        b=b,
        z=params.z,
        t=params.t,
        n_files=params.n_files,
        subpacketization=f,
        transmission_count=len(transmissions),
        rate=Fraction(len(transmissions), f),
        expected_rate=achievable_rate(b, m, params.z, params.t),
        users_complete=tuple(users_complete),
        beneficiary_counts=tuple(beneficiary_counts),
        byte_oracle_ok=byte_ok,
        transmissions=tuple(transmissions) if keep_transmissions else None,
    )


def _xor(a: bytes, b: bytes) -> bytes:
    return (int.from_bytes(a, "big") ^ int.from_bytes(b, "big")).to_bytes(len(a), "big")


def _xor_all(chunks) -> bytes | None:
    out: bytes | None = None
    for c in chunks:
        out = c if out is None else _xor(out, c)
    return out
