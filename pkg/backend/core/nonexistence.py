"""
Nonexistence Filters
====================

Decidable necessary conditions on (G, |S|, |T|) for a primitive formally
dual pair. Each rule either passes or rules the parameters out with a tag;
no candidate sets are enumerated here.

Provides:
1. PairParams with the divisibility invariants a_S, b_S, a_T, b_T
2. Basic rules: size product, shared prime, generator count, element
   exponent, size two, odd prime size, and the cyclic-group rules
3. Order, weight, character-divisibility and self-conjugacy filters
4. run_all_filters(): the full ledger of verdicts for one parameter set
5. scan_cyclic(): survivors among cyclic groups Z_N, N <= n_max

Rule tags:
- size-product, coprime-sizes, generator-bound, exponent-bound, size-two,
  odd-prime-size, cyclic-prime-power, cyclic-two-primes,
  cyclic-two-primes-generator-weight
- order-bound, weight, character-divisibility, self-conjugacy
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Tuple

from sympy import divisors, factorint, is_primitive_root, multiplicity, totient

from core.abelian import (
    GroupSpec,
    is_cyclic,
    is_isomorphic,
    minimal_generator_count,
    sylow_exponents,
    sylow_is_cyclic,
)
from observability import StructuredLogger, metrics, track_job
from performance_optimizer import perf_monitor, run_parallel

logger = logging.getLogger(__name__)

Triple = Tuple[int, int, int]

# Cyclic parameters where a primitive pair is known to exist; the scan reports these apart from open cases
KNOWN_CYCLIC: Dict[Triple, str] = {(4, 2, 2): "tito"}

RULES = (
    'size-product',
    'coprime-sizes',
    'generator-bound',
    'exponent-bound',
    'size-two',
    'odd-prime-size',
    'cyclic-prime-power',
    'cyclic-two-primes',
    'cyclic-two-primes-generator-weight',
    'order-bound',
    'weight',
    'character-divisibility',
    'self-conjugacy',
)


# ===========================================
# PARAMETERS AND VERDICTS
# ===========================================

@dataclass(frozen=True)
class PairParams:
    """Group and the two set sizes of a putative formally dual pair."""
    group: GroupSpec
    ssize: int
    tsize: int

    def __post_init__(self):
        self._validate_inputs()

    def _validate_inputs(self):
        if self.ssize < 1 or self.tsize < 1:
            raise ValueError(f"Set sizes must be positive, got ({self.ssize}, {self.tsize})")

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def a_s(self) -> int:
        """|S|^2 / (|S|^2, |T|): divides every |chi(S)|^2."""
        k2 = self.ssize ** 2
        return k2 // gcd(k2, self.tsize)

    @property
    def a_t(self) -> int:
        l2 = self.tsize ** 2
        return l2 // gcd(l2, self.ssize)

    @property
    def b_s(self) -> int:
        """|S| / (|S|, |T|^2): divides every nu_S(y)."""
        return self.ssize // gcd(self.ssize, self.tsize ** 2)

    @property
    def b_t(self) -> int:
        return self.tsize // gcd(self.tsize, self.ssize ** 2)

    def swapped(self) -> 'PairParams':
        return PairParams(self.group, self.tsize, self.ssize)

    def as_triple(self) -> Triple:
        return (self.order, self.ssize, self.tsize)

    def to_dict(self) -> dict:
        return {'group': self.group.to_dict(), 'ssize': self.ssize, 'tsize': self.tsize}


@dataclass(frozen=True)
class FilterVerdict:
    """Outcome of one rule; a ruled-out verdict always names its rule."""
    ruled_out: bool
    rule: Optional[str] = None
    reason: str = ""

    def __post_init__(self):
        self._validate_inputs()

    def _validate_inputs(self):
        if self.ruled_out and not self.rule:
            raise ValueError("A ruled-out verdict needs a rule tag")

    @classmethod
    def passed(cls, rule: str, reason: str = "") -> 'FilterVerdict':
        return cls(False, rule, reason)

    @classmethod
    def killed(cls, rule: str, reason: str) -> 'FilterVerdict':
        return cls(True, rule, reason)

    def to_dict(self) -> dict:
        return {'ruled_out': self.ruled_out, 'rule': self.rule, 'reason': self.reason}


def _primes(n: int) -> List[int]:
    return sorted(factorint(n)) if n > 1 else []


def _sides(params: PairParams):
    """(label, params) for the S side and the T side."""
    return (('S', params), ('T', params.swapped()))


# ===========================================
# ARITHMETIC HELPERS
# ===========================================

def self_conjugate(p: int, n: int) -> bool:
    """
    True when some power of p is -1 modulo the p-free part n' of n.

    n' <= 2 counts as self-conjugate (-1 == 1 there).
    """
    if n < 1:
        raise ValueError(f"Modulus must be >= 1, got {n}")
    m = n // p ** multiplicity(p, n)
    if m <= 2:
        return True
    if gcd(p, m) != 1:
        return False
    x = p % m
    seen = set()
    while x not in seen:
        if x == m - 1:
            return True
        seen.add(x)
        x = (x * p) % m
    return False


def feasible_partner_weights(params: PairParams, p: int) -> List[int]:
    """
    Admissible nu_T(y) for y of order p, seen from the S side.

    nu_T(y) is a multiple b_T * i with 0 <= i < g, g = (|S|^2, |T|), and
    (|S|^2 / p) * (1 - nu_T(y) / |T|) must be a positive integer.
    """
    k2 = params.ssize ** 2
    g = gcd(k2, params.tsize)
    return [params.b_t * i for i in range(g) if (k2 * (g - i)) % (p * g) == 0]


def _forced_square_divisor(a: int, p: int) -> int:
    """
    Smallest D with a | D that must divide |chi_y(S)|^2 for y of order p.

    chi_y(S) lies in Z[zeta_p]; a prime q != p that is a primitive root mod p
    stays prime there, so it divides |chi_y(S)|^2 to an even power. For p = 2
    the character sum is a rational integer and every prime qualifies, 2
    included; an odd p ramifies in Z[zeta_p] and forces nothing.
    """
    d = a
    for q, v in factorint(a).items():
        if v % 2 == 0:
            continue
        if p == 2 or (q != p and is_primitive_root(q % p, p)):
            d *= q
    return d


# ===========================================
# BASIC RULES
# ===========================================

def _cyclic_rules(params: PairParams) -> List[FilterVerdict]:
    spec = params.group
    n = params.order
    k, l = params.ssize, params.tsize
    exps = factorint(n)
    verdicts = []

    if len(exps) == 1:
        ruled = not is_isomorphic(spec, GroupSpec((4,)))
        verdicts.append(FilterVerdict(
            ruled, 'cyclic-prime-power',
            f"Z_{n} has prime-power order" + ("" if ruled else "; Z_4 carries the TITO pair")))

    if len(exps) == 2:
        a, b = sorted(exps.values())
        if a == 1:
            reason = f"Z_{n} = Z_(p^a q)"
        elif a == 2 and b == 2:
            reason = f"Z_{n} = Z_(p^2 q^2)"
        elif a == 2 and b % 2 == 1:
            reason = f"Z_{n} = Z_(p^a q^2) with a odd"
        else:
            reason = ""
        verdicts.append(FilterVerdict(bool(reason), 'cyclic-two-primes', reason or "exponents allow a pair"))

        phi = int(totient(n))
        short = [label for label, size in (('S', k), ('T', l)) if size * size - size < phi]
        verdicts.append(FilterVerdict(
            bool(short), 'cyclic-two-primes-generator-weight',
            f"|{short[0]}|^2 - |{short[0]}| < phi({n}) = {phi}" if short
            else "generators can be covered by differences"))
    return verdicts


def basic_filter_pipeline(params: PairParams) -> List[FilterVerdict]:
    """One verdict per applicable basic rule, violated or not."""
    spec = params.group
    n = params.order
    k, l = params.ssize, params.tsize
    verdicts = []

    verdicts.append(FilterVerdict(
        n != k * l, 'size-product',
        f"|G| = {n} but |S||T| = {k * l}" if n != k * l else "|G| = |S||T|"))

    if n > 1:
        verdicts.append(FilterVerdict(
            gcd(k, l) == 1, 'coprime-sizes',
            f"gcd({k}, {l}) = 1" if gcd(k, l) == 1 else f"gcd({k}, {l}) = {gcd(k, l)}"))

    s = minimal_generator_count(spec)
    low = [label for label, size in (('S', k), ('T', l)) if size < s + 1]
    verdicts.append(FilterVerdict(
        bool(low), 'generator-bound',
        f"|{low[0]}| < {s + 1} for a group needing {s} generators" if low
        else f"both sizes >= {s + 1}"))

    for p in _primes(n):
        e = max(sylow_exponents(spec, p))
        need = p ** (e - 1) * (p - 1)
        low = [label for label, size in (('S', k), ('T', l)) if size * size - size < need]
        if low:
            verdicts.append(FilterVerdict.killed(
                'exponent-bound', f"|{low[0]}|^2 - |{low[0]}| < {need} for elements of order {p ** e}"))
            break
    else:
        verdicts.append(FilterVerdict.passed('exponent-bound'))

    if 2 in (k, l):
        ruled = not is_isomorphic(spec, GroupSpec((4,)))
        verdicts.append(FilterVerdict(
            ruled, 'size-two',
            f"a 2-element formally dual set lives only in Z_4, not {spec.name}" if ruled else "Z_4"))

    for label, size in (('S', k), ('T', l)):
        factors = factorint(size)
        if size > 2 and size % 2 and len(factors) == 1 and list(factors.values())[0] == 1:
            exps = sylow_exponents(spec, size)
            ruled = not (len(exps) >= 2 and max(exps) == 1)
            verdicts.append(FilterVerdict(
                ruled, 'odd-prime-size',
                f"|{label}| = {size} needs an elementary abelian Sylow {size}-subgroup of rank >= 2"
                if ruled else f"Sylow {size}-subgroup elementary abelian"))

    if n > 1 and is_cyclic(spec):
        verdicts.extend(_cyclic_rules(params))

    return verdicts


# ===========================================
# PARAMETER FILTERS
# ===========================================

def thm_order_filter(params: PairParams) -> FilterVerdict:
    """
    For p with cyclic Sylow subgroup and p^r || a_S (r >= 1):
    floor(|S| / p^r) >= b_S / (b_S, p^r); symmetrically for T.
    """
    for label, side in _sides(params):
        a, b, size = side.a_s, side.b_s, side.ssize
        for p in _primes(params.order):
            if not sylow_is_cyclic(params.group, p):
                continue
            r = multiplicity(p, a)
            if r == 0:
                continue
            pr = p ** r
            need = b // gcd(b, pr)
            if size // pr < need:
                return FilterVerdict.killed(
                    'order-bound', f"floor(|{label}|/{pr}) = {size // pr} < {need}")
    return FilterVerdict.passed('order-bound')


def thm_weight_filter(params: PairParams) -> FilterVerdict:
    """
    If p does not divide |S| then (|S|^2, |T|) > p; and nu_T on elements of
    order p must admit an integral value of (|S|^2/p)(1 - nu_T/|T|).
    """
    for label, side in _sides(params):
        other = 'T' if label == 'S' else 'S'
        k, l = side.ssize, side.tsize
        for p in _primes(params.order):
            g = gcd(k * k, l)
            if k % p and g <= p:
                return FilterVerdict.killed(
                    'weight', f"{p} does not divide |{label}| and (|{label}|^2, |{other}|) = {g} <= {p}")
            if not feasible_partner_weights(side, p):
                return FilterVerdict.killed(
                    'weight', f"no admissible nu_{other} on elements of order {p}")
    return FilterVerdict.passed('weight')


def char_div_filter(params: PairParams) -> FilterVerdict:
    """
    For y of order p, |chi_y(S)|^2 = |S|^2 nu_T(y) / |T| must be divisible by
    the forced square divisor of a_S for some admissible nu_T(y).
    """
    for label, side in _sides(params):
        other = 'T' if label == 'S' else 'S'
        k, l = side.ssize, side.tsize
        for p in _primes(params.order):
            weights = feasible_partner_weights(side, p)
            if not weights:
                continue
            d = _forced_square_divisor(side.a_s, p)
            if not any((k * k * nu // l) % d == 0 for nu in weights):
                values = sorted({k * k * nu // l for nu in weights})
                return FilterVerdict.killed(
                    'character-divisibility',
                    f"elements of order {p}: nu_{other} in {weights} gives |chi({label})|^2 in {values}, "
                    f"none divisible by {d}")
    return FilterVerdict.passed('character-divisibility')


def selfconj_filter(params: PairParams) -> FilterVerdict:
    """p with cyclic Sylow subgroup, self-conjugate mod exp(G): v_p(|S|) = v_p(|T|) = 1."""
    spec = params.group
    for p in _primes(params.order):
        if not sylow_is_cyclic(spec, p) or not self_conjugate(p, spec.exponent):
            continue
        l1, l2 = multiplicity(p, params.ssize), multiplicity(p, params.tsize)
        if (l1, l2) != (1, 1):
            return FilterVerdict.killed(
                'self-conjugacy',
                f"{p} is self-conjugate mod {spec.exponent} with cyclic Sylow subgroup, "
                f"but v_{p}(|S|) = {l1}, v_{p}(|T|) = {l2}")
    return FilterVerdict.passed('self-conjugacy')


# ===========================================
# AGGREGATION
# ===========================================

@perf_monitor.track_operation("run_all_filters")
def run_all_filters(params: PairParams) -> List[FilterVerdict]:
    """Every verdict, basic rules first; callers read kills from the list."""
    verdicts = basic_filter_pipeline(params)
    verdicts.append(thm_order_filter(params))
    verdicts.append(thm_weight_filter(params))
    verdicts.append(char_div_filter(params))
    verdicts.append(selfconj_filter(params))
    kills = [v for v in verdicts if v.ruled_out]
    if kills:
        metrics.increment('filter_kills')
        logger.debug(f"{params.group.name} ({params.ssize},{params.tsize}) ruled out by {[v.rule for v in kills]}")
    return verdicts


def kills(verdicts: List[FilterVerdict]) -> List[FilterVerdict]:
    return [v for v in verdicts if v.ruled_out]


def is_ruled_out(params: PairParams) -> bool:
    return bool(kills(run_all_filters(params)))


# ===========================================
# CYCLIC SCAN
# ===========================================

@dataclass
class ScanReport:
    """Open survivors of the cyclic scan, known pairs, and the rule tags that killed the rest."""
    n_max: int
    survivors: List[Triple] = field(default_factory=list)
    known: List[Triple] = field(default_factory=list)
    ledger: Dict[Triple, List[str]] = field(default_factory=dict)

    def rule_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for tags in self.ledger.values():
            for tag in tags:
                counts[tag] = counts.get(tag, 0) + 1
        return dict(sorted(counts.items()))

    def to_dict(self, include_ledger: bool = False) -> dict:
        out = {
            'n_max': self.n_max,
            'survivors': [list(t) for t in self.survivors],
            'known': [{'triple': list(t), 'family': KNOWN_CYCLIC[t]} for t in self.known],
            'rule_counts': self.rule_counts(),
        }
        if include_ledger:
            out['ledger'] = [
                {'triple': list(t), 'rules': tags} for t, tags in sorted(self.ledger.items())
            ]
        return out


def _is_square_free(n: int) -> bool:
    return all(v == 1 for v in factorint(n).values())


def _scan_order(n: int) -> List[Tuple[Triple, List[str]]]:
    """(triple, kill tags) for every k | n with k <= n / k."""
    spec = GroupSpec((n,)) if n > 1 else GroupSpec(())
    out = []
    for k in divisors(n):
        if k * k > n:
            break
        params = PairParams(spec, k, n // k)
        out.append((params.as_triple(), [v.rule for v in kills(run_all_filters(params))]))
    return out


@track_job("scan_cyclic")
def scan_cyclic_report(n_max: int, threads: int = 1) -> ScanReport:
    """Run every filter over Z_N, N <= n_max not square-free; survivors sorted."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    orders = [n for n in range(2, n_max + 1) if not _is_square_free(n)]
    job_logger = StructuredLogger(__name__)
    job_logger.info("Cyclic scan", n_max=n_max, orders=len(orders), threads=threads)

    report = ScanReport(n_max)
    for rows in run_parallel(_scan_order, orders, max_workers=threads):
        for triple, tags in rows:
            if tags:
                report.ledger[triple] = tags
            elif triple in KNOWN_CYCLIC:
                report.known.append(triple)
            else:
                report.survivors.append(triple)
    report.survivors.sort()
    report.known.sort()
    logger.info(f"✓ Cyclic scan to {n_max}: {len(report.survivors)} survivors, {len(report.ledger)} triples ruled out")
    return report


def scan_cyclic(n_max: int, threads: int = 1) -> List[Triple]:
    return scan_cyclic_report(n_max, threads).survivors
