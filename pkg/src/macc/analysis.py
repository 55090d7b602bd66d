"""Rate/memory trade-off analysis and comparisons against rival schemes.

Every scheme is reduced to a set of exactly-achievable (M/N, rate) corner
points; intermediate memory sizes are served by memory sharing, i.e. the
lower convex envelope of the corners.  All arithmetic is exact (Fraction /
big int); floats appear only in CSV/log10 output.

Rival schemes are keyed RK, NT, SICPS, SPE, SR1, SR2, MR.  SPE and SICPS
rates come from outside formulas and are emitted as "external"; their
subpacketizations are computed here.  SR1's subpacketization is only known
to lie in [K, K**2] and is reported as that interval.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from .engine import achievable_rate

SCHEME_ORDER = ("ours", "RK", "NT", "SICPS", "SPE", "SR1", "SR2", "MR")
RATE_SCHEMES = ("RK", "NT", "SR1", "SR2", "MR")


class ApplicabilityError(Exception):
    """Scheme formula does not apply at the requested parameters."""


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def divisors(n: int) -> list[int]:
    out = [d for d in range(1, int(math.isqrt(n)) + 1) if n % d == 0]
    return sorted(set(out + [n // d for d in out]))


@dataclass(frozen=True)
class RatePoint:
    """An exactly-achievable (memory fraction, rate) pair with provenance."""

    memory: Fraction
    rate: Fraction
    scheme: str
    params: tuple = ()

    def __post_init__(self):
        if not 0 <= self.memory <= 1:
            raise ValueError("memory fraction must lie in [0, 1]")
        if self.rate < 0:
            raise ValueError("rate must be >= 0")


@dataclass(frozen=True)
class Curve:
    """Lower convex envelope of corner points; evaluation by interpolation."""

    points: tuple[RatePoint, ...]

    def rate_at(self, memory) -> Fraction:
        x = Fraction(memory)
        pts = self.points
        if x < pts[0].memory:
            raise ValueError(f"memory {x} below curve domain start {pts[0].memory}")
        if x >= pts[-1].memory:
            return pts[-1].rate
        lo, hi = 0, len(pts) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if pts[mid].memory <= x:
                lo = mid
            else:
                hi = mid
        a, c = pts[lo], pts[hi]
        return a.rate + (c.rate - a.rate) * (x - a.memory) / (c.memory - a.memory)

    def vertices(self) -> list[tuple[Fraction, Fraction]]:
        return [(p.memory, p.rate) for p in self.points]


def envelope(points) -> Curve:
    """Lower convex hull in the memory/rate plane; collinear points dropped."""
    best: dict[Fraction, RatePoint] = {}
    for p in sorted(points, key=lambda p: (p.memory, p.rate)):
        if p.memory not in best:
            best[p.memory] = p
    pts = list(best.values())
    if not pts:
        raise ValueError("need at least one point")
    hull: list[RatePoint] = []
    for p in pts:
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            if (b.rate - a.rate) * (p.memory - b.memory) >= (p.rate - b.rate) * (
                b.memory - a.memory
            ):
                hull.pop()
            else:
                break
        hull.append(p)
    return Curve(points=tuple(hull))


def corner_points(k_users: int, z: int) -> list[RatePoint]:
    """All corners our scheme achieves for K users: every group shape (m, b)
    with m*b = K and b >= z, every integer t up to the zero-rate threshold.
    Duplicate memories keep the lowest rate.  Includes the trivial (0, K)."""
    if z < 1:
        raise ValueError("z must be >= 1")
    pts = [RatePoint(Fraction(0), Fraction(k_users), "ours", (("t", 0),))]
    best: dict[Fraction, RatePoint] = {}
    for b in divisors(k_users):
        if b < z:
            continue
        m = k_users // b
        t_stop = b - (z - 1) * (b // z)
        for t in range(1, t_stop + 1):
            mem = Fraction(t, b)
            p = RatePoint(mem, achievable_rate(b, m, z, t), "ours",
                          (("m", m), ("b", b), ("t", t)))
            cur = best.get(mem)
            if cur is None or p.rate < cur.rate:
                best[mem] = p
    pts.extend(sorted(best.values(), key=lambda p: p.memory))
    return pts


def our_envelope(k_users: int, z: int) -> Curve:
    return envelope(corner_points(k_users, z))


def rival_rate(scheme: str, k_users: int, z: int, tparam: int) -> Fraction:
    """Exact rate of a rival scheme at its own corner point M/N = tparam/K."""
    k = k_users
    if scheme == "RK":
        _require(1 <= tparam <= k // z, "RK needs 1 <= t' <= floor(K/z)")
        return Fraction((k - tparam * z) ** 2, k)
    if scheme == "NT":
        _require(1 <= tparam <= k // z, "NT needs 1 <= t' <= floor(K/z)")
        return Fraction(k - tparam * z, tparam + 1)
    if scheme == "SR1":
        _require(gcd(tparam, k) == 1, "SR1 needs gcd(t'', K) = 1")
        _require(1 <= tparam <= k, "SR1 needs 1 <= t'' <= K")
        return _sr1_sum(k, z, tparam)
    if scheme == "SR2":
        _require(tparam >= 1 and k % tparam == 0, "SR2 needs t'' dividing K")
        rem = k - tparam * z + tparam
        _require(rem > 0 and k % rem == 0, "SR2 needs (K - t''z + t'') dividing K")
        if k - tparam * z < 0:
            return Fraction(0)
        return Fraction((k - tparam * z) * rem, 2 * k)
    if scheme == "MR":
        _require(tparam == 1, "MR is fixed at M/N = 1/K")
        denom = 2 + z // (k - z + 1) + (z - 1) // (k - z + 1)
        return Fraction(_ceil_div(k * (k - z), denom), k)
    raise ApplicabilityError(f"no rate formula for scheme {scheme!r}")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ApplicabilityError(msg)


def _sr1_sum(k: int, z: int, tpp: int) -> Fraction:
    """SR1 rate: exact half-range sum with ceilings; zero once memory covers all."""
    g = k - tpp * z
    if g <= 0:
        return Fraction(0)
    if g % 2 == 0:
        return sum(
            (Fraction(2, 1 + _ceil_div(tpp * z, r)) for r in range((g + 2) // 2, g + 1)),
            Fraction(0),
        )
    head = Fraction(1, 1 + _ceil_div(2 * tpp * z, g + 1))
    return head + sum(
        (Fraction(2, 1 + _ceil_div(tpp * z, r)) for r in range((g + 3) // 2, g + 1)),
        Fraction(0),
    )


def sr1_lower_bound(k_users: int, z: int, tparam: int) -> Fraction:
    """Closed-form lower bound on the SR1 rate, valid for K - t''z > 1.

    Bounding each of the (K - t''z)/2 sum terms below by the first one gives
    (K - t''z)(K - t''z + 2) / (2(K + 2)).
    """
    g = k_users - tparam * z
    return Fraction(g * (g + 2), 2 * (k_users + 2))


def rival_subpacketization(scheme: str, k_users: int, z: int, tparam: int):
    """Subpacketization at the scheme's corner; int/Fraction, or interval for SR1.

    For scheme "ours", ``tparam`` is the group count m (must divide K)."""
    k = k_users
    if scheme == "ours":
        _require(tparam >= 1 and k % tparam == 0, "ours needs m dividing K")
        return (k // tparam) ** tparam
    if scheme in ("RK", "SICPS"):
        _require(1 <= tparam <= k // z, f"{scheme} needs 1 <= t' <= floor(K/z)")
        val = Fraction(k, tparam) * comb(k - tparam * z + tparam - 1, tparam - 1)
        return int(val) if val.denominator == 1 else val
    if scheme == "NT":
        _require(1 <= tparam <= k // z, "NT needs 1 <= t' <= floor(K/z)")
        return k * comb(k - tparam * z + tparam, tparam)
    if scheme == "SPE":
        _require(tparam == 2, "SPE is fixed at M/N = 2/K")
        val = Fraction(k * (k - 2 * z + 2), 4)
        return int(val) if val.denominator == 1 else val
    if scheme == "SR1":
        _require(gcd(tparam, k) == 1, "SR1 needs gcd(t'', K) = 1")
        return (k, k * k)
    if scheme == "SR2":
        rival_rate("SR2", k, z, tparam)
        return k
    if scheme == "MR":
        _require(tparam == 1, "MR is fixed at M/N = 1/K")
        return k
    raise ApplicabilityError(f"unknown scheme {scheme!r}")


def _zero_point(k: int, z: int, scheme: str) -> RatePoint:
    # full local coverage: every scheme reaches rate 0 by M/N = ceil(K/z)/K
    return RatePoint(Fraction(_ceil_div(k, z), k), Fraction(0), scheme, (("zero", 1),))


def rival_corner_points(scheme: str, k_users: int, z: int) -> list[RatePoint]:
    """Applicable corners of a rival scheme plus the trivial endpoints."""
    k = k_users
    pts = [RatePoint(Fraction(0), Fraction(k), scheme, (("t", 0),))]
    if scheme in ("RK", "NT"):
        candidates = range(1, k // z + 1)
    elif scheme == "SR1":
        candidates = [t for t in range(1, k // z + 1) if gcd(t, k) == 1]
    elif scheme == "SR2":
        candidates = []
        for t in range(1, k // z + 1):
            rem = k - t * z + t
            if k % t == 0 and rem > 0 and k % rem == 0:
                candidates.append(t)
    elif scheme == "MR":
        candidates = [1]
    else:
        raise ApplicabilityError(f"no rate corners for scheme {scheme!r}")
    for t in candidates:
        pts.append(
            RatePoint(Fraction(t, k), rival_rate(scheme, k, z, t), scheme, (("t", t),))
        )
    pts.append(_zero_point(k, z, scheme))
    return pts


def rival_envelope(scheme: str, k_users: int, z: int) -> Curve:
    return envelope(rival_corner_points(scheme, k_users, z))


@dataclass(frozen=True)
class ComparisonCheck:
    """One claimed rate/subpacketization advantage, evaluated exactly.

    ``applicable``: the claim's parameter preconditions hold.
    ``satisfied``: its threshold inequality holds (None when not applicable).
    ``ours`` / ``rival``: the two compared values.
    ``confirmed``: direct comparison of the two values agrees with the claim.
    """

    name: str
    applicable: bool
    satisfied: bool | None = None
    ours: Fraction | None = None
    rival: Fraction | None = None
    confirmed: bool | None = None
    note: str = ""


def check_rk_rate(k_users: int, z: int, m: int, b: int, t: int) -> ComparisonCheck:
    """Ours beats RK on rate when M/N = t/b = t'/K is below all three thresholds."""
    k = k_users
    applicable = k == m * b and b >= z >= 1 and t >= 1 and 1 <= m * t <= k // z
    if not applicable:
        return ComparisonCheck("rk_rate", False)
    mem = Fraction(t, b)
    satisfied = mem < min(
        Fraction(b // z, b), Fraction(k // z, k), Fraction(k - b, k * z)
    )
    ours = achievable_rate(b, m, z, t)
    rk = rival_rate("RK", k, z, m * t)
    return ComparisonCheck(
        "rk_rate", True, satisfied, ours, rk, confirmed=ours < rk if satisfied else None
    )


def check_subpacketization(k_users: int, z: int, m: int, b: int) -> ComparisonCheck:
    """At M/N = 1/b, ours needs fewer subfiles than RK/NT/SICPS once b is large
    enough ((b-1)^2 >= K(z-1), b > z, m <= floor(K/z)).  Needs m >= 2: with a
    single group both sides equal K."""
    k = k_users
    applicable = k == m * b and b > z >= 1 and 2 <= m <= k // z
    if not applicable:
        return ComparisonCheck("subpacketization", False)
    satisfied = (b - 1) ** 2 >= k * (z - 1)
    ours = Fraction(b**m)
    rk = Fraction(rival_subpacketization("RK", k, z, m))
    nt = Fraction(rival_subpacketization("NT", k, z, m))
    confirmed = (ours < rk and ours < nt) if satisfied else None
    return ComparisonCheck(
        "subpacketization", True, satisfied, ours, min(rk, nt),
        confirmed=confirmed, note=f"RK/SICPS={rk}, NT={nt}",
    )


def check_sr1_rate(k_users: int, z: int, tpp: int, pair=None) -> ComparisonCheck:
    """Memory-sharing two of our corners (1/b1, 1/b2) beats SR1 at M/N = t''/K
    whenever the shared rate is at most SR1's closed-form lower bound."""
    k = k_users
    if gcd(tpp, k) != 1 or tpp * z == k - 1 or not 1 <= tpp * z <= k:
        return ComparisonCheck("sr1_rate", False)
    if pair is not None:
        pairs = [tuple(pair)]
    else:
        divs = [m for m in divisors(k) if k // m >= z]
        pairs = [
            (m1, m2)
            for m1 in divs
            for m2 in divs
            if m1 < m2 and m1 <= tpp <= m2
        ]
    best = None
    for m1, m2 in pairs:
        if k % m1 or k % m2 or m1 >= m2 or not m1 <= tpp <= m2:
            continue
        b1, b2 = k // m1, k // m2
        if b1 < z or b2 < z:
            continue
        lam = Fraction(tpp - m1, m2 - m1)
        shared = b1 + lam * (b2 - b1)
        if best is None or shared < best[0]:
            best = (shared, m1, m2)
    if best is None:
        return ComparisonCheck("sr1_rate", False)
    shared, m1, m2 = best
    bound = sr1_lower_bound(k, z, tpp) + z
    satisfied = shared <= bound
    ours = shared - z
    sr1 = rival_rate("SR1", k, z, tpp)
    return ComparisonCheck(
        "sr1_rate", True, satisfied, ours, sr1,
        confirmed=ours <= sr1 if satisfied else None,
        note=f"pair m1={m1}, m2={m2}",
    )


def check_sr2_rate(k_users: int, z: int, m: int, b: int, t: int) -> ComparisonCheck:
    """Ours beats SR2 at matching corners when M/N <= (m-2)/(m(z-1))."""
    k = k_users
    applicable = (
        k == m * b
        and z >= 2
        and t >= 1
        and t <= b // z
        and b % t == 0
        and (b - t * z + t) > 0
        and b % (b - t * z + t) == 0
    )
    if not applicable:
        return ComparisonCheck("sr2_rate", False)
    satisfied = Fraction(t, b) <= Fraction(m - 2, m * (z - 1))
    ours = achievable_rate(b, m, z, t)
    sr2 = rival_rate("SR2", k, z, m * t)
    return ComparisonCheck(
        "sr2_rate", True, satisfied, ours, sr2,
        confirmed=ours <= sr2 if satisfied else None,
    )


def check_mr_rate(k_users: int, z: int, m: int, b: int) -> ComparisonCheck:
    """Ours beats MR's memory-shared curve at M/N = 1/b for three or more
    groups.  Needs b > z: at b = z both schemes already sit at rate zero."""
    k = k_users
    applicable = k == m * b and b > z >= 1 and m >= 3
    if not applicable:
        note = "rates coincide at m = 2" if k == m * b and m == 2 else ""
        return ComparisonCheck("mr_rate", False, note=note)
    ours = achievable_rate(b, m, z, 1)
    mr = rival_envelope("MR", k, z).rate_at(Fraction(1, b))
    return ComparisonCheck("mr_rate", True, True, ours, mr, confirmed=ours < mr)


def comparison_checks(k_users: int, z: int, m: int | None = None, b: int | None = None,
                      t: int | None = None, tpp: int | None = None,
                      sr1_pair=None) -> dict[str, ComparisonCheck]:
    """Evaluate every comparison claim that the given parameters can feed."""
    out: dict[str, ComparisonCheck] = {}
    if m is not None and b is not None:
        if t is not None:
            out["rk_rate"] = check_rk_rate(k_users, z, m, b, t)
            out["sr2_rate"] = check_sr2_rate(k_users, z, m, b, t)
        out["subpacketization"] = check_subpacketization(k_users, z, m, b)
        out["mr_rate"] = check_mr_rate(k_users, z, m, b)
    if tpp is not None:
        out["sr1_rate"] = check_sr1_rate(k_users, z, tpp, pair=sr1_pair)
    return out


@dataclass(frozen=True)
class TableRow:
    memory: Fraction
    scheme: str
    rate: Fraction | None
    kind: str  # corner | interpolated | external
    subpacketization: object | None = None  # int | Fraction | (lo, hi) interval

    def log10_subpacketization(self) -> float | None:
        s = self.subpacketization
        if s is None or isinstance(s, tuple):
            return None
        return log10_of(s)

    def to_json_dict(self) -> dict:
        doc = {
            "mn": {"num": self.memory.numerator, "den": self.memory.denominator},
            "scheme": self.scheme,
            "kind": self.kind,
            "rate": None
            if self.rate is None
            else {"num": self.rate.numerator, "den": self.rate.denominator},
        }
        s = self.subpacketization
        if isinstance(s, tuple):
            doc["subpacketization_interval"] = [s[0], s[1]]
            doc["subpacketization"] = None
        elif isinstance(s, Fraction) and s.denominator != 1:
            doc["subpacketization"] = {"num": s.numerator, "den": s.denominator}
        elif s is not None:
            doc["subpacketization"] = int(s)
        else:
            doc["subpacketization"] = None
        doc["log10_subpacketization"] = self.log10_subpacketization()
        return doc


def log10_of(x) -> float:
    """log10 of a positive int/Fraction of any size."""
    num, den = (x.numerator, x.denominator) if isinstance(x, Fraction) else (int(x), 1)
    return _log10_int(num) - _log10_int(den)


def _log10_int(n: int) -> float:
    if n <= 0:
        raise ValueError("log10 needs a positive value")
    s = str(n)
    if len(s) <= 15:
        return math.log10(n)
    return math.log10(int(s[:15])) + (len(s) - 15)


def _our_corner_at(k: int, z: int, mem: Fraction) -> tuple[Fraction, int] | None:
    """(rate, b**m) of the lowest-rate corner of ours sitting exactly at ``mem``."""
    best = None
    for b in divisors(k):
        if b < z:
            continue
        t = mem * b
        if t.denominator != 1 or not 1 <= t <= b - (z - 1) * (b // z):
            continue
        rate = achievable_rate(b, k // b, z, int(t))
        if best is None or rate < best[0]:
            best = (rate, b ** (k // b))
    return best


def comparison_table(k_users: int, z: int, grid) -> list[TableRow]:
    """One row per (memory, scheme): envelope rate plus corner subpacketization.

    Rates for RK/NT/SR1/SR2/MR and ours come from their envelopes
    (memory-shared between corners); SPE and SICPS rates are external.  The
    subpacketization column is filled only where the scheme has an exact
    corner at that memory; a row's kind is "corner" when the envelope rate
    coincides with that exact corner's rate."""
    k = k_users
    curves = {"ours": our_envelope(k, z)}
    for scheme in RATE_SCHEMES:
        curves[scheme] = rival_envelope(scheme, k, z)

    rows: list[TableRow] = []
    for mem in grid:
        mem = Fraction(mem)
        tp = mem * k  # rival corner parameter when integral
        tp_int = int(tp) if tp.denominator == 1 else None
        for scheme in SCHEME_ORDER:
            rate = None
            kind = "external"
            sub = None
            corner_rate = None
            if scheme == "ours":
                rate = curves["ours"].rate_at(mem)
                corner = _our_corner_at(k, z, mem)
                if corner is not None:
                    corner_rate, sub = corner
            elif scheme in RATE_SCHEMES:
                rate = curves[scheme].rate_at(mem)
                if tp_int is not None:
                    try:
                        corner_rate = rival_rate(scheme, k, z, tp_int)
                    except ApplicabilityError:
                        corner_rate = None
            if scheme != "ours" and tp_int is not None:
                try:
                    sub = rival_subpacketization(scheme, k, z, tp_int)
                except ApplicabilityError:
                    sub = None
            if rate is not None:
                kind = "corner" if corner_rate == rate else "interpolated"
            rows.append(TableRow(memory=mem, scheme=scheme, rate=rate, kind=kind,
                                 subpacketization=sub))
    return rows


CSV_HEADER = "mn_num,mn_den,scheme,rate,log10_subpacketization"


def rows_to_csv(rows) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        rate = "" if r.rate is None else f"{float(r.rate):.6f}"
        log_s = r.log10_subpacketization()
        lines.append(
            f"{r.memory.numerator},{r.memory.denominator},{r.scheme},{rate},"
            + ("" if log_s is None else f"{log_s:.6f}")
        )
    return "\n".join(lines) + "\n"


def rows_to_json(rows) -> str:
    return json.dumps([r.to_json_dict() for r in rows], sort_keys=True)
