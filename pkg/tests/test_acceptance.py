"""The eleven acceptance criteria, each timed against its limit.

Every test prints one line "criterion N: PASS|FAIL ..." to the terminal,
also when pytest captures output.
"""
import random
import time
from fractions import Fraction
from math import gcd

import pytest

from chatelet.counting import count_nb, local_density, recover_parametrization
from chatelet.intarith import is_prime
from chatelet.lattice import matvec
from chatelet.multiquad import BasisError, MQElement, MQLinearForm, pluecker_residue
from chatelet.picard import alpha, beta_report, fixed_rank, lattice_from_degrees
from chatelet.quadfield import (
    Representable,
    field_info,
    inert_parity_ok,
    is_norm,
    negative_pell_solvable,
    r_a_count,
    r_a_divisor_formula,
)
from chatelet.torsors import partition_check, torsor_classes

from specs import SPECS

PARTITION_SPECS = ["q1q2", "split_quartic"]
REQUIRED_PATTERNS = [(2, 2), (1, 1, 2), (1, 3), (4,), (2, 2, 2), (1, 1, 1, 1)]
PATTERNS = REQUIRED_PATTERNS + [(2,), (1, 1), (6,), (2, 4), (3, 3), (1, 5), (1, 1, 2, 2), (2, 2, 2, 2)]


@pytest.fixture
def verdict(capsys):
    def record(number, ok, detail, elapsed, limit):
        in_time = elapsed < limit
        status = "PASS" if ok and in_time else "FAIL"
        with capsys.disabled():
            print(f"\ncriterion {number}: {status} ({detail}; {elapsed:.2f}s of {limit}s)")
        assert ok, detail
        assert in_time, f"took {elapsed:.2f}s, limit {limit}s"

    return record


def test_criterion_01_alpha(verdict):
    start = time.perf_counter()
    bad = []
    degrees_seen = set()
    for name, spec in SPECS.items():
        degrees_seen.add(spec.n)
        if alpha(spec) != Fraction(2, spec.n):
            bad.append(name)
    elapsed = time.perf_counter() - start
    ok = not bad and degrees_seen >= {4, 6, 8} and len(SPECS) >= 6
    verdict(1, ok, f"{len(SPECS)} specs, n in {sorted(degrees_seen)}, mismatches {bad}", elapsed, 1)


def test_criterion_02_beta(verdict):
    start = time.perf_counter()
    bad = [d for d in PATTERNS if not beta_report(d).agree]
    elapsed = time.perf_counter() - start
    verdict(2, not bad, f"{len(PATTERNS)} degree patterns, disagreements {bad}", elapsed, 5)


def test_criterion_03_picard_ranks(verdict):
    start = time.perf_counter()
    bad = []
    for d in PATTERNS:
        lat = lattice_from_degrees(d)
        ranks = (fixed_rank(lat, False, False), fixed_rank(lat, False, True), fixed_rank(lat))
        if ranks != (lat.n + 2, len(d) + 2, 2):
            bad.append((d, ranks))
    elapsed = time.perf_counter() - start
    verdict(3, not bad, f"{len(PATTERNS)} degree patterns, wrong ranks {bad}", elapsed, 5)


def test_criterion_04_r_a_oracle(verdict):
    start = time.perf_counter()
    mismatches = {}
    for a in (-1, -2, -3, -7, -11):
        bad = [n for n in range(1, 5001) if r_a_divisor_formula(n, a) != r_a_count(n, a)]
        if bad:
            mismatches[a] = (len(bad), bad[0])
    elapsed = time.perf_counter() - start
    detail = "mismatches (count, first n) per a: " + (str(mismatches) if mismatches else "none")
    verdict(4, not mismatches, detail, elapsed, 30)


def test_criterion_05_negative_pell(verdict):
    start = time.perf_counter()
    checked, failures = 0, []
    for p in range(5, 200, 4):
        if not is_prime(p) or field_info(p).h != 1:
            continue
        ok, witness = negative_pell_solvable(p)
        if not ok or witness[0] ** 2 - p * witness[1] ** 2 != -1:
            failures.append(p)
        checked += 1
    elapsed = time.perf_counter() - start
    verdict(5, not failures and checked > 0, f"{checked} primes, failures {failures}", elapsed, 10)


def test_criterion_06_one_sign(verdict):
    start = time.perf_counter()
    checked, failures = 0, []
    for m in range(1, 501):
        if not inert_parity_ok(m, 3):
            continue
        signs = [s for s in (1, -1) if isinstance(is_norm(s * m, 3), Representable)]
        if len(signs) != 1:
            failures.append((m, signs))
        checked += 1
    elapsed = time.perf_counter() - start
    verdict(6, not failures, f"{checked} values of |m|, failures {failures[:5]}", elapsed, 30)


def test_criterion_07_partition(verdict):
    start = time.perf_counter()
    parts, ok = [], True
    for name in PARTITION_SPECS:
        rep = partition_check(SPECS[name], 50)
        good = rep.ok and not rep.unknowns and sum(rep.per_label.values()) == rep.points
        ok = ok and good and rep.points > 0
        parts.append(f"{name}: {rep.points} points, {len(rep.violations)} violations, {len(rep.unknowns)} unknown")
    elapsed = time.perf_counter() - start
    verdict(7, ok, "; ".join(parts), elapsed, 120)


def test_criterion_08_count_consistency(verdict):
    start = time.perf_counter()
    parts, ok = [], True
    for name in PARTITION_SPECS:
        rep = count_nb(SPECS[name], 50)
        ok = ok and rep.consistent
        parts.append(f"{name}: total {rep.total} = {sum(rep.per_label.values())} + {rep.screened}")
    elapsed = time.perf_counter() - start
    verdict(8, ok, "; ".join(parts), elapsed, 120)


def _random_element(rng, basis):
    return MQElement(basis, {m: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for m in range(4)})


def test_criterion_09_pluecker(verdict):
    rng = random.Random(20261018)
    pool = [-1, -2, -3, -5, -6, -7, 2, 3, 5, 6, 7, 10, 11, 13, 15]
    start = time.perf_counter()
    nonzero = 0
    for _ in range(1000):
        while True:
            try:
                basis = tuple(rng.sample(pool, 2))
                MQElement(basis, {})
                break
            except BasisError:
                pass
        forms = []
        while len(forms) < 3:
            al, be = _random_element(rng, basis), _random_element(rng, basis)
            if not (al.is_zero() and be.is_zero()):
                forms.append(MQLinearForm(al, be))
        if not pluecker_residue(*forms, rng.randint(-99, 99), rng.randint(-99, 99)).is_zero():
            nonzero += 1
    elapsed = time.perf_counter() - start
    verdict(9, nonzero == 0, f"1000 triples, nonzero residues {nonzero}", elapsed, 5)


def test_criterion_10_recovery(verdict):
    rng = random.Random(7)
    start = time.perf_counter()
    bad, done = [], 0
    while done < 1000:
        m = rng.randint(1, 4)
        t, u, v = rng.randint(1, 99), rng.randint(-99, 99), rng.randint(-99, 99)
        if gcd(u, v) != 1:
            continue
        x = [t * u ** (m - k) * v**k for k in range(m + 1)]
        pre = recover_parametrization(x)
        expected = {(t, u, v), ((-1) ** m * t, -u, -v)}
        if set(pre) != expected or len(pre) != 2:
            bad.append((t, u, v, m))
        done += 1
    elapsed = time.perf_counter() - start
    verdict(10, not bad, f"1000 round trips, failures {bad[:3]}", elapsed, 5)


def test_criterion_11_local_density(verdict):
    spec = SPECS["q1q2"]
    p = 3
    start = time.perf_counter()
    ok, parts = True, []
    for label in torsor_classes(spec):
        vals = local_density(spec, label, p, 3)
        exact = all(v.exact and isinstance(v.value, Fraction) for v in vals)
        dens = all(p ** (4 * n) % v.value.denominator == 0 for n, v in enumerate(vals, 1))
        diffs = [abs(b.value - a.value) for a, b in zip(vals, vals[1:])]
        shrink = all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:]))
        ok = ok and exact and dens and shrink
        parts.append(f"{label}: {[str(v.value) for v in vals]}")
    elapsed = time.perf_counter() - start
    verdict(11, ok, "; ".join(parts), elapsed, 60)
