import math
import random
from fractions import Fraction

import pytest

from crnrelay.errors import MixedExtensions
from crnrelay.scalars import (ExactScalar, exact, quadext_sign, sqrt_fraction,
                              square_free_split)


def as_float(x: ExactScalar) -> float:
    return float(x.a) + float(x.b) * math.sqrt(x.d)


def test_normalisation_rules():
    assert ExactScalar(Fraction(3), Fraction(0), 5).d == 1
    with pytest.raises(ValueError):
        ExactScalar(Fraction(0), Fraction(1), 1)
    with pytest.raises(ValueError):
        ExactScalar(Fraction(0), Fraction(1), -3)


def test_square_free_split_small():
    assert square_free_split(1) == (1, 1)
    assert square_free_split(4) == (2, 1)
    assert square_free_split(12) == (2, 3)
    assert square_free_split(360) == (6, 10)
    with pytest.raises(ValueError):
        square_free_split(0)


def test_square_free_split_random():
    rng = random.Random(20240811)
    for _ in range(300):
        n = rng.randint(1, 10**9)
        s, d = square_free_split(n)
        assert s * s * d == n
        # d square-free: no prime square divides it
        for p in (2, 3, 5, 7, 11, 13):
            assert d % (p * p) != 0 or d == 0


def test_sqrt_fraction_exact_and_ext():
    assert sqrt_fraction(Fraction(9, 4)) == exact(Fraction(3, 2))
    r = sqrt_fraction(Fraction(8))
    assert (r.a, r.b, r.d) == (0, 2, 2)
    r = sqrt_fraction(Fraction(3, 2))
    assert r * r == exact(Fraction(3, 2))
    with pytest.raises(ValueError):
        sqrt_fraction(Fraction(-1))


def test_arithmetic_matches_float_oracle():
    rng = random.Random(99)
    for _ in range(400):
        d = rng.choice([2, 3, 5, 7, 6])
        x = ExactScalar(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                        Fraction(rng.randint(-9, 9), rng.randint(1, 9)) or Fraction(1), d)
        y = ExactScalar(Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
                        Fraction(rng.randint(-9, 9), rng.randint(1, 9)) or Fraction(1), d)
        assert abs(as_float(x + y) - (as_float(x) + as_float(y))) < 1e-9
        assert abs(as_float(x - y) - (as_float(x) - as_float(y))) < 1e-9
        assert abs(as_float(x * y) - as_float(x) * as_float(y)) < 1e-9
        if not y.is_zero:
            assert abs(as_float(x / y) - as_float(x) / as_float(y)) < 1e-9


def test_sign_agrees_with_float():
    rng = random.Random(4242)
    for _ in range(400):
        d = rng.choice([2, 3, 5, 7, 10])
        x = ExactScalar(Fraction(rng.randint(-20, 20), rng.randint(1, 10)),
                        Fraction(rng.randint(-20, 20), rng.randint(1, 10)) or Fraction(1), d)
        f = as_float(x)
        if abs(f) < 1e-9:
            continue
        assert x.sign() == (1 if f > 0 else -1)
        assert quadext_sign(x) == x.sign()


def test_sign_near_zero_exact():
    # 3 - 2*sqrt(2) is about 0.17; 17 - 12*sqrt(2) is about 0.03; both positive
    assert quadext_sign(ExactScalar(Fraction(3), Fraction(-2), 2)) == 1
    assert quadext_sign(ExactScalar(Fraction(17), Fraction(-12), 2)) == 1
    assert quadext_sign(ExactScalar(Fraction(-17), Fraction(12), 2)) == -1
    assert quadext_sign(exact(0)) == 0


def test_mixed_extensions_rejected():
    x = ExactScalar(Fraction(1), Fraction(1), 2)
    y = ExactScalar(Fraction(1), Fraction(1), 3)
    with pytest.raises(MixedExtensions):
        _ = x + y
    # rational operands join any extension
    assert (exact(2) * x).d == 2


def test_division_and_inverse():
    x = ExactScalar(Fraction(3), Fraction(1), 5)
    inv = exact(1) / x
    assert x * inv == exact(1)
    with pytest.raises(ZeroDivisionError):
        _ = x / exact(0)


def test_to_fraction():
    assert exact(Fraction(7, 3)).to_fraction() == Fraction(7, 3)
    with pytest.raises(ValueError):
        ExactScalar(Fraction(0), Fraction(1), 2).to_fraction()
