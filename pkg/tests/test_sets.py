import math

import numpy as np
import pytest

from conftest import trial_factor
from prodsets.analytic import density_omega_threshold
from prodsets.errors import DomainError, OutOfRangeError
from prodsets.sets import (
    Composites,
    CoprimeTo,
    Explicit,
    FullSet,
    OmegaThreshold,
    RoughComplement,
    WindowSet,
    coprime_sieve_check,
    density_trace,
    materialize,
    membership,
    parse_rule,
)


def test_membership_examples(table):
    assert membership(OmegaThreshold(2, 3), 24, table)
    assert not membership(OmegaThreshold(2, 3, (5,)), 40, table)
    assert membership(Composites(), 9, table)
    assert not membership(Composites(), 7, table)
    assert not membership(Composites(), 1, table)


def test_omega_threshold_rejects_small_primes():
    with pytest.raises(DomainError):
        OmegaThreshold(10, 2, (7,))
    with pytest.raises(DomainError):
        OmegaThreshold(10, -1)


def test_materialize_examples():
    w = materialize(FullSet(), 10)
    assert w.count == 10 and w.members().tolist() == list(range(1, 11))
    w = materialize(CoprimeTo((2, 3)), 12)
    assert w.members().tolist() == [1, 5, 7, 11] and w.count == 4


def test_materialize_omega_large(table):
    rule = OmegaThreshold(100, 2)
    w = materialize(rule, 10**6)
    # per-element oracle on a strided sample plus the exact count on a prefix
    for n in range(1, 10**6 + 1, 997):
        assert (n in w) == membership(rule, n, table)
    prefix = sum(membership(rule, n, table) for n in range(1, 20001))
    assert int(np.count_nonzero(w.bits[:20001])) == prefix


def _rough_oracle(a, n):
    if n < 2:
        return False
    p = trial_factor(n)[0][0]
    return math.log(p) <= math.log(n) ** a


RULES = [
    FullSet(),
    Composites(),
    CoprimeTo(()),
    CoprimeTo((2, 3, 7)),
    OmegaThreshold(1, 0),
    OmegaThreshold(1, 1),
    OmegaThreshold(2, 1),
    OmegaThreshold(10, 3, (11, 13)),
    OmegaThreshold(30.5, 2, (37, 41)),
    RoughComplement(0.3),
    RoughComplement(0.5),
    RoughComplement(0.9),
]


@pytest.mark.parametrize("rule", RULES, ids=lambda r: r.describe())
def test_materialize_membership_agree(rule, table):
    x = 10**4
    w = materialize(rule, x)
    for n in range(1, x + 1):
        assert (n in w) == membership(rule, n, table), n
    assert w.count == int(np.count_nonzero(w.bits))
    assert not w.bits[0]


@pytest.mark.parametrize("a", [0.3, 0.5, 0.9])
def test_rough_complement_definition(a, table):
    rule = RoughComplement(a)
    for n in range(1, 5000):
        assert membership(rule, n, table) == _rough_oracle(a, n), n


def test_explicit_rule(table):
    w = WindowSet.from_members([2, 3, 5], 10)
    rule = Explicit(w)
    assert membership(rule, 3, table) and not membership(rule, 4, table)
    with pytest.raises(OutOfRangeError):
        membership(rule, 11, table)
    with pytest.raises(OutOfRangeError):
        materialize(rule, 11)
    assert materialize(rule, 5).members().tolist() == [2, 3, 5]


def test_composites_is_omega_at_least_two(table):
    w = materialize(Composites(), 10**4)
    for n in range(1, 10**4 + 1):
        assert (n in w) == (table.omega(n) >= 2)


def test_omega_threshold_subset_relations():
    x = 50_000
    for y in (2, 10, 100):
        for k in range(0, 5):
            a = materialize(OmegaThreshold(y, k), x)
            assert materialize(OmegaThreshold(y, k + 1), x).issubset(a)
            assert materialize(OmegaThreshold(y, k, (101,)), x).issubset(a)
            assert materialize(OmegaThreshold(y, k, (101, 103)), x).issubset(
                materialize(OmegaThreshold(y, k, (101,)), x))


def test_density_trace_examples():
    t = density_trace(FullSet(), [10, 100])
    assert [r[2] for r in t.checkpoints] == [1.0, 1.0]
    t = density_trace(CoprimeTo((2,)), [10, 1000])
    assert [r[2] for r in t.checkpoints] == [0.5, 0.5]
    with pytest.raises(DomainError):
        density_trace(FullSet(), [100, 10])


def test_density_trace_invariants():
    t = density_trace(OmegaThreshold(50, 2))
    xs = [r[0] for r in t.checkpoints]
    counts = [r[1] for r in t.checkpoints]
    assert xs == [10, 100, 1000, 10**4, 10**5, 10**6]
    assert all(b >= a for a, b in zip(counts, counts[1:]))
    assert all(c <= x for x, c in zip(xs, counts))


def test_density_trace_converges():
    rule = OmegaThreshold(10**4, 3)
    t = density_trace(rule, [10**4, 10**5, 10**6, 10**7])
    assert abs(t.checkpoints[-1][2] - density_omega_threshold(10**4, 3)) <= 0.01


def test_coprime_sieve_check_examples():
    r = coprime_sieve_check((2,), 1000)
    assert (r.empirical, r.exact, r.gap) == (0.5, 0.5, 0.0)
    r = coprime_sieve_check((), 10)
    assert (r.empirical, r.exact, r.gap) == (1.0, 1.0, 0.0)
    assert coprime_sieve_check((3, 5, 7), 10**5 * 105).gap == 0.0


@pytest.mark.parametrize("P", [(2,), (3, 5), (2, 3, 5, 7), (11, 13, 17)])
def test_coprime_sieve_gap_bound(P):
    for x in (1, 7, 100, 999, 12345):
        r = coprime_sieve_check(P, x)
        assert r.gap <= 2 ** len(P) * len(P) / x


def test_window_dump_round_trip(tmp_path):
    w = materialize(OmegaThreshold(10, 2, (11,)), 12_347)
    raw = w.to_bytes()
    assert raw[:4] == b"PSWS"
    assert int.from_bytes(raw[4:8], "little") == 1
    assert int.from_bytes(raw[8:16], "little") == 12_347
    # bit for n = 4 is bit 3 of the first body byte
    assert (raw[16] >> 3) & 1 == (4 in w)
    path = tmp_path / "w.bin"
    w.save(path)
    assert WindowSet.load(path) == w
    with pytest.raises(DomainError):
        WindowSet.from_bytes(b"XXXX" + raw[4:])


@pytest.mark.parametrize("rule", RULES[:-3] + [RoughComplement(0.5)], ids=lambda r: r.describe())
def test_parse_rule_round_trip(rule):
    assert parse_rule(rule.describe()) == rule


@pytest.mark.parametrize("text", ["bogus", "omega:y=10", "rough:a=2", "omega:y=10,k=2,P=5",
                                  "full:x=3", "coprime:P=4"])
def test_parse_rule_errors(text):
    with pytest.raises(DomainError):
        parse_rule(text)
