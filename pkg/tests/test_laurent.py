import pytest
from hypothesis import given

from btembed.errors import PrecisionExhausted
from btembed.laurent import INFINITY, Field, scalar_from_json, valuation

from helpers import F, laurent, scalars, units


def test_valuation_reads_leading_term():
    assert valuation(F.t(2) + F.t(3)) == 2
    assert valuation(F.t(-1)) == -1
    assert valuation(F.zero) == INFINITY


def test_characteristic_three():
    assert F.scalar(3).is_exact_zero
    assert F.scalar(2) + F.scalar(1) == F.zero
    assert F.scalar(-1) == F.scalar(2)


def test_geometric_series_inverse():
    x = (F.one + F.t()).inverse()
    assert x.valuation() == 0
    rem = x * (F.one + F.t()) - F.one
    assert rem.val_at_least(F.precision)
    with pytest.raises(PrecisionExhausted):
        rem.is_zero()
    assert x.coeffs[:4] == (1, 2, 1, 2)


def test_indeterminate_valuation_raises():
    tail = F.laurent([], 0, prec=5)  # O(t^5)
    assert not tail.is_determinate
    with pytest.raises(PrecisionExhausted):
        tail.valuation()
    assert tail.val_at_least(5)


def test_field_rejects_even_or_composite_q():
    for q in (2, 4, 9):
        with pytest.raises(ValueError):
            Field(q)


def test_precision_env_override(monkeypatch):
    monkeypatch.setenv("BTEMBED_PRECISION", "12")
    assert Field(3).precision == 12


def test_json_round_trip():
    x = laurent([1, 0, 2], -1)
    assert scalar_from_json(F, x.to_json()) == x
    assert scalar_from_json(F, 5) == F.scalar(2)


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(scalars, scalars)
def test_valuation_of_products(a, b):
    if a.is_zero() or b.is_zero():
        return
    assert (a * b).valuation() == a.valuation() + b.valuation()


@given(units)
def test_unit_inverse(u):
    assert (u * u.inverse() - F.one).val_at_least(F.precision)
    assert u.inverse().valuation() == 0
