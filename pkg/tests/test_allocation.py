import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from dqc.allocation import (Allocation, canonical_labels, canonical_partition, count_balanced_allocations,
                            default_epsilon, enumerate_balanced_allocations)
from dqc.errors import ConfigError, ValidationError


@pytest.mark.parametrize("n,k,text", [(6, 3, "112233"), (8, 4, "11223344"), (9, 3, "111222333")])
def test_canonical_partition(n, k, text):
    a = canonical_partition(n, k)
    assert str(a) == text
    assert a.sizes == [n // k] * k


def test_canonical_partition_needs_divisor():
    with pytest.raises(ConfigError):
        canonical_partition(7, 3)


def test_enumeration_small_cases():
    assert [str(a) for a in enumerate_balanced_allocations(4, 2)] == ["1122", "1212", "1221"]
    assert len(list(enumerate_balanced_allocations(2, 2))) == 1
    assert len(list(enumerate_balanced_allocations(6, 3))) == 15


@pytest.mark.parametrize("n,k", [(4, 2), (6, 2), (6, 3), (8, 4), (9, 3), (8, 2), (10, 5)])
def test_enumeration_count_and_uniqueness(n, k):
    m = n // k
    expected = math.factorial(n) // (math.factorial(m) ** k * math.factorial(k))
    allocs = list(enumerate_balanced_allocations(n, k))
    assert len(allocs) == count_balanced_allocations(n, k) == expected
    keys = {a.map for a in allocs}
    assert len(keys) == expected
    assert all(a.canonical() == a for a in allocs)
    assert all(a.sizes == [m] * k for a in allocs)
    assert canonical_partition(n, k) in allocs


@given(st.permutations(range(3)), st.integers(0, 14))
def test_relabelled_allocation_has_same_canonical_form(perm, idx):
    a = list(enumerate_balanced_allocations(6, 3))[idx]
    assert a.relabel(perm).canonical() == a


def test_balance_and_json(tmp_path):
    a = Allocation([0, 0, 1, 1, 2, 2], 3, Fraction(0))
    assert a.to_dict() == {"k": 3, "map": [0, 0, 1, 1, 2, 2]}
    a.save(tmp_path / "a.json")
    assert Allocation.load(tmp_path / "a.json") == a
    with pytest.raises(ValidationError):
        Allocation([0, 0, 0, 1, 2, 2], 3, Fraction(0))
    with pytest.raises(ValidationError):
        Allocation([0, 3], 3)
    assert Allocation([0, 0, 0, 1, 2, 2], 3).epsilon == Fraction(1, 2)


def test_string_forms():
    assert Allocation.from_string("122331").map == (0, 1, 1, 2, 2, 0)
    big = Allocation(list(range(10)), 10)
    assert Allocation.from_string(str(big)) == big
    assert canonical_labels([2, 2, 0, 1]) == (0, 0, 1, 2)


def test_default_epsilon():
    assert default_epsilon(6, 3) == 0
    assert default_epsilon(7, 3) == Fraction(2, 7)
