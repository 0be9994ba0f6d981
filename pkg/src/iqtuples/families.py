"""Construction and certification of tuples of imaginary quadratic fields.

For an odd n >= 3 and k >= 2 set ell = 4*k^n - 1 and d = 4*(1 - 4*k^n)^n.
The radicands d, d + 1, d + 4, and d + 4*p^2 (p an odd prime passing the
hypothesis checks) then satisfy the exact identities

    d + 1     = 1 - 4*ell^n
    d + 4     = 4*(1 - ell^n)
    d + 4*p^2 = 4*(p^2 - ell^n)

and every member's field class number is divisible by n. Constructors
populate radicands and square-free parts; verify_tuple computes the class
numbers and the divisibility verdicts. Records serialize to a versioned
JSON-lines schema and a flat CSV layout.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from math import gcd

from . import arith, classno
from .errors import DomainError, HypothesisCheck, HypothesisRejection

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# Members whose square-free part exceeds this are reported unverified
# instead of attempting an unbounded class-number computation.
DEFAULT_SF_BUDGET = 10**12

STATUS_PENDING = "pending"
STATUS_VERIFIED = "verified"
STATUS_BUDGET = "unverified (budget)"

CSV_FIELDS = [
    "kind", "n", "k", "ell", "d", "offset", "radicand",
    "squarefree_part", "cofactor", "class_number", "divisible", "status",
]


@dataclass
class FamilyMember:
    offset: int
    radicand: int
    squarefree_part: int
    cofactor: int
    class_number: int | None = None
    divisible: bool | None = None
    status: str = STATUS_PENDING


@dataclass
class FamilyTuple:
    kind: str  # "quadruple", "quintuple", or "pi_tuple"
    n: int
    k: int
    p_list: list[int]
    ell: int
    d: int
    members: list[FamilyMember]
    hypotheses: list[HypothesisCheck] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def offsets(self) -> list[int]:
        return [m.offset for m in self.members]

    # U (the d + 1 identity) and V (the d + 4 identity) both equal ell
    @property
    def U(self) -> int:
        return self.ell

    @property
    def V(self) -> int:
        return self.ell

    @property
    def all_divisible(self) -> bool | None:
        """Conjunction over members; None while any member is unverified."""
        if any(m.status != STATUS_VERIFIED for m in self.members):
            return None
        return all(m.divisible for m in self.members)


def _check_nk(n: int, k: int) -> None:
    if n < 3 or n % 2 == 0:
        raise DomainError(f"n must be an odd integer >= 3, got {n}")
    if k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k}")


def _identities_hold(n: int, k: int, d: int, p_list: list[int]) -> bool:
    ell = 4 * k**n - 1
    if d != 4 * (1 - 4 * k**n) ** n:
        return False
    if d + 1 != 1 - 4 * ell**n:
        return False
    if d + 4 != 4 * (1 - ell**n):
        return False
    return all(d + 4 * p * p == 4 * (p * p - ell**n) for p in p_list)


def _member(offset: int, d: int) -> FamilyMember:
    rad = d + offset
    dec = arith.squarefree_decompose(rad)
    return FamilyMember(offset, rad, dec.s, dec.f)


def _prime_hypotheses(n: int, k: int, p: int) -> list[HypothesisCheck]:
    """Checks attached to the member at offset 4*p^2."""
    ell = 4 * k**n - 1
    checks = []
    g = gcd(ell, p)
    checks.append(HypothesisCheck(f"gcd(ell, {p}) = 1", g == 1, f"gcd({ell}, {p}) = {g}"))
    if g != 1:
        return checks
    ok = p * p < ell**n
    checks.append(HypothesisCheck(f"{p}^2 < ell^n", ok, f"{p * p} < {ell**n}"))
    if not ok:
        return checks
    if p in (3, 5):
        ok = (ell, n) != (3, 3)
        checks.append(
            HypothesisCheck(
                f"(ell, n) != (3, 3) for p = {p}", ok,
                "congruence condition waived for p in {3, 5}",
            )
        )
    else:
        dprime = arith.squarefree_decompose(ell**n - p * p).s
        ok = p % dprime not in (1, dprime - 1)
        checks.append(
            HypothesisCheck(
                f"{p} != +-1 (mod d')", ok,
                f"d' = {dprime}, {p} = {p % dprime} (mod d')",
            )
        )
    return checks


def _theorem_b_check(n: int, k: int) -> HypothesisCheck:
    # the d + 4 member needs (n, V) != (5, 3) with V = ell; vacuous for k >= 2
    ell = 4 * k**n - 1
    return HypothesisCheck("(n, V) != (5, 3)", (n, ell) != (5, 3), f"V = {ell}")


def n_membership(n: int, k: int) -> bool:
    """True iff n divides the class number of Q(sqrt(1 - 4*k^n)).

    Expected true for every odd n >= 3 and k >= 2; a False return is
    logged as an anomaly since it would contradict proven theory.
    """
    _check_nk(n, k)
    dec = arith.squarefree_decompose(1 - 4 * k**n)
    h = classno.field_class_number(dec.s).h
    if h % n != 0:
        log.error(
            "membership anomaly: h(Q(sqrt(%d))) = %d is not divisible by %d "
            "(k = %d); this contradicts proven theory", dec.s, h, n, k,
        )
        return False
    return True


def quadruple(n: int, p: int, k: int) -> FamilyTuple:
    """Tuple with offsets {0, 1, 4, 4*p^2} for an odd prime p.

    Raises HypothesisRejection (naming the failed check) when p shares a
    factor with ell, p^2 >= ell^n, or the congruence condition on p fails;
    for p in {3, 5} the congruence condition is waived unless
    (ell, n) = (3, 3).
    """
    _check_nk(n, k)
    if p % 2 == 0 or not arith.is_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")
    checks = _prime_hypotheses(n, k, p) + [_theorem_b_check(n, k)]
    for c in checks:
        if not c.ok:
            raise HypothesisRejection(c.check, c.detail)
    ell = 4 * k**n - 1
    d = 4 * (1 - 4 * k**n) ** n
    if not _identities_hold(n, k, d, [p]):
        raise ArithmeticError(f"construction identities failed for n={n}, k={k}")
    members = [_member(off, d) for off in (0, 1, 4, 4 * p * p)]
    return FamilyTuple("quadruple", n, k, [p], ell, d, members, checks)


def quintuple(n: int, k: int) -> FamilyTuple:
    """Tuple with offsets {0, 1, 4, 36, 100}: the quadruples for p = 3 and p = 5 merged."""
    _check_nk(n, k)
    checks = _prime_hypotheses(n, k, 3) + _prime_hypotheses(n, k, 5) + [_theorem_b_check(n, k)]
    for c in checks:
        if not c.ok:
            raise HypothesisRejection(c.check, c.detail)
    ell = 4 * k**n - 1
    d = 4 * (1 - 4 * k**n) ** n
    if not _identities_hold(n, k, d, [3, 5]):
        raise ArithmeticError(f"construction identities failed for n={n}, k={k}")
    members = [_member(off, d) for off in (0, 1, 4, 36, 100)]
    return FamilyTuple("quintuple", n, k, [3, 5], ell, d, members, checks)


def pi_tuple(n: int, m: int, k: int, mode: str = "strict") -> FamilyTuple:
    """Tuple with offsets {0, 1, 4} and 4*p^2 for every odd prime p <= m.

    The prime 2 contributes no offset. In strict mode the first per-prime
    hypothesis failure raises HypothesisRejection; in lenient mode the
    offending prime is dropped with a warning. The member count is
    pi(m) + 2 when every odd prime passes.
    """
    _check_nk(n, k)
    if m < 2:
        raise DomainError(f"m must be an integer >= 2, got {m}")
    if mode not in ("strict", "lenient"):
        raise DomainError(f"mode must be 'strict' or 'lenient', got {mode!r}")
    odd_primes = [p for p in arith.primes_up_to(m) if p != 2]
    checks = [_theorem_b_check(n, k)]
    if not checks[0].ok:
        raise HypothesisRejection(checks[0].check, checks[0].detail)
    warnings = []
    kept = []
    for p in odd_primes:
        pchecks = _prime_hypotheses(n, k, p)
        bad = next((c for c in pchecks if not c.ok), None)
        if bad is not None and mode == "strict":
            raise HypothesisRejection(bad.check, bad.detail)
        checks.extend(pchecks)
        if bad is not None:
            warnings.append(f"dropped p = {p}: {bad.check} ({bad.detail})")
            log.warning("pi_tuple(%d, %d, %d): %s", n, m, k, warnings[-1])
        else:
            kept.append(p)
    ell = 4 * k**n - 1
    d = 4 * (1 - 4 * k**n) ** n
    if not _identities_hold(n, k, d, kept):
        raise ArithmeticError(f"construction identities failed for n={n}, k={k}")
    offsets = [0, 1, 4] + [4 * p * p for p in kept]
    members = [_member(off, d) for off in offsets]
    return FamilyTuple("pi_tuple", n, k, kept, ell, d, members, checks, warnings)


def verify_tuple(t: FamilyTuple, sf_budget: int = DEFAULT_SF_BUDGET,
                 threads: int = 1) -> FamilyTuple:
    """Fill in class numbers and divisibility verdicts for every member.

    Re-checks the construction identities first, then verifies members in
    offset order. Members whose |square-free part| exceeds sf_budget are
    marked unverified instead of attempted. Returns the same tuple with
    members completed.
    """
    if not _identities_hold(t.n, t.k, t.d, t.p_list):
        raise ArithmeticError(f"tuple fails its construction identities: {t.kind} n={t.n} k={t.k}")
    for m in sorted(t.members, key=lambda m: m.offset):
        if m.radicand != m.squarefree_part * m.cofactor**2:
            raise ArithmeticError(f"member at offset {m.offset} has a broken decomposition")
        if abs(m.squarefree_part) > sf_budget:
            m.status = STATUS_BUDGET
            m.class_number = None
            m.divisible = None
            log.warning(
                "offset %d: |square-free part| = %d exceeds budget %d, not verified",
                m.offset, abs(m.squarefree_part), sf_budget,
            )
            continue
        m.class_number = classno.field_class_number(m.squarefree_part, threads=threads).h
        m.divisible = m.class_number % t.n == 0
        m.status = STATUS_VERIFIED
        if not m.divisible:
            log.error(
                "divisibility anomaly: offset %d, h(%d) = %d not divisible by %d",
                m.offset, m.squarefree_part, m.class_number, t.n,
            )
    return t


def to_json_dict(t: FamilyTuple) -> dict:
    """Schema-stable dict for one tuple (one JSON line per tuple)."""
    return {
        "schema": SCHEMA_VERSION,
        "kind": t.kind,
        "n": t.n,
        "k": t.k,
        "ell": t.ell,
        "d": t.d,
        "p_list": list(t.p_list),
        "hypotheses": [
            {"check": c.check, "ok": c.ok, "detail": c.detail} for c in t.hypotheses
        ],
        "warnings": list(t.warnings),
        "members": [
            {
                "offset": m.offset,
                "radicand": m.radicand,
                "squarefree_part": m.squarefree_part,
                "cofactor": m.cofactor,
                "class_number": m.class_number,
                "divisible": m.divisible,
                "status": m.status,
            }
            for m in t.members
        ],
        "all_divisible": t.all_divisible,
    }


def to_json_line(t: FamilyTuple) -> str:
    return json.dumps(to_json_dict(t), separators=(",", ":"), sort_keys=False)


def from_json_dict(rec: dict) -> FamilyTuple:
    """Rebuild a FamilyTuple from its JSON record."""
    if rec.get("schema") != SCHEMA_VERSION:
        raise DomainError(f"unsupported schema version {rec.get('schema')!r}")
    members = [
        FamilyMember(
            m["offset"], m["radicand"], m["squarefree_part"], m["cofactor"],
            m.get("class_number"), m.get("divisible"), m.get("status", STATUS_PENDING),
        )
        for m in rec["members"]
    ]
    checks = [
        HypothesisCheck(c["check"], c["ok"], c.get("detail", ""))
        for c in rec.get("hypotheses", [])
    ]
    return FamilyTuple(
        rec["kind"], rec["n"], rec["k"], list(rec["p_list"]), rec["ell"], rec["d"],
        members, checks, list(rec.get("warnings", [])),
    )


def to_csv_rows(t: FamilyTuple) -> list[list]:
    """One row per member, columns CSV_FIELDS."""
    return [
        [
            t.kind, t.n, t.k, t.ell, t.d, m.offset, m.radicand,
            m.squarefree_part, m.cofactor,
            "" if m.class_number is None else m.class_number,
            "" if m.divisible is None else m.divisible,
            m.status,
        ]
        for m in t.members
    ]
