import random
from fractions import Fraction

import numpy as np
import pytest

from crnrelay.errors import NotMetzler, SingularMatrix
from crnrelay.linalg import (UniPoly, char_poly, det, hurwitz_test, identity,
                             inverse, is_metzler, mat, mat_mul, metzler_sign,
                             quad_solve)
from crnrelay.scalars import exact


def rand_matrix(rng, n, lo=-5, hi=5):
    return mat([[Fraction(rng.randint(lo, hi), rng.randint(1, 3))
                 for _ in range(n)] for _ in range(n)])


def to_numpy(m):
    return np.array([[float(x.a) for x in row] for row in m], dtype=float)


def test_det_matches_numpy():
    rng = random.Random(11)
    for _ in range(120):
        n = rng.randint(1, 5)
        m = rand_matrix(rng, n)
        got = float(det(m).a)
        want = np.linalg.det(to_numpy(m))
        assert abs(got - want) < 1e-6 * max(1.0, abs(want))


def test_inverse_exact():
    rng = random.Random(12)
    done = 0
    while done < 60:
        n = rng.randint(1, 5)
        m = rand_matrix(rng, n)
        if det(m).is_zero:
            continue
        done += 1
        prod = mat_mul(m, inverse(m))
        expect = identity(n)
        assert all(prod[i][j] == expect[i][j] for i in range(n) for j in range(n))
    with pytest.raises(SingularMatrix):
        inverse(mat([[1, 2], [2, 4]]))


def test_char_poly_matches_numpy():
    rng = random.Random(13)
    for _ in range(80):
        n = rng.randint(1, 5)
        m = rand_matrix(rng, n)
        p = char_poly(m)
        assert p.degree == n
        assert p.coeffs[-1] == exact(1)
        # numpy returns leading-first coefficients of det(xI - M)
        want = np.poly(to_numpy(m))[::-1]
        for k in range(n + 1):
            assert abs(float(p.coeffs[k].a) - want[k]) < 1e-6 * max(1.0, abs(want[k]))


def test_char_poly_roots_are_eigenvalues():
    m = mat([[0, 1], [-2, -3]])
    p = char_poly(m)
    for lam in np.linalg.eigvals(to_numpy(m)):
        val = sum(float(c.a) * lam ** k for k, c in enumerate(p.coeffs))
        assert abs(val) < 1e-9


def test_hurwitz_known_cases():
    # lambda^3 + 2 lambda^2 + (5/4) lambda + 1/2 has determinants 2, 2, 1
    p = UniPoly.make([Fraction(1, 2), Fraction(5, 4), 2, 1])
    rep = hurwitz_test(p)
    assert rep.verdict == "Hurwitz"
    assert [x.to_fraction() for x in rep.determinants] == [2, 2, 1]
    assert hurwitz_test(UniPoly.make([-1, 0, 1])).verdict != "Hurwitz"
    assert hurwitz_test(UniPoly.make([0, 1, 1])).verdict == "Boundary"


def test_hurwitz_matches_numpy_eigenvalues():
    rng = random.Random(14)
    agree = 0
    for _ in range(150):
        n = rng.randint(1, 5)
        m = rand_matrix(rng, n)
        alpha = max(np.linalg.eigvals(to_numpy(m)).real)
        if abs(alpha) < 1e-6:
            continue
        rep = hurwitz_test(char_poly(m))
        if alpha < 0:
            assert rep.verdict == "Hurwitz"
        else:
            assert rep.verdict != "Hurwitz"
        agree += 1
    assert agree > 100


def rand_metzler(rng, n):
    rows = [[Fraction(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(n)]
            for _ in range(n)]
    for i in range(n):
        rows[i][i] = Fraction(-rng.randint(0, 12), rng.randint(1, 2))
    return mat(rows)


def test_metzler_sign_matches_numpy():
    rng = random.Random(15)
    checked = 0
    for _ in range(200):
        n = rng.randint(1, 5)
        m = rand_metzler(rng, n)
        alpha = max(np.linalg.eigvals(to_numpy(m)).real)
        if abs(alpha) < 1e-6:
            continue
        verdict = metzler_sign(m).verdict
        assert verdict == ("Positive" if alpha > 0 else "Negative")
        checked += 1
    assert checked > 120


def test_metzler_sign_rejects_non_metzler():
    with pytest.raises(NotMetzler):
        metzler_sign(mat([[0, -1], [1, 0]]))
    assert is_metzler(mat([[-3, 0], [2, -1]]))


def test_quad_solve_classification():
    two = quad_solve(UniPoly.make([2, -3, 1]))       # (x-1)(x-2)
    assert two.kind == "TwoRational"
    assert [r.to_fraction() for r in two.roots] == [1, 2]

    double = quad_solve(UniPoly.make([1, -2, 1]))
    assert double.kind == "DoubleRoot" and len(double.roots) == 1

    ext = quad_solve(UniPoly.make([Fraction(-1, 2), 2, 1]))
    assert ext.kind == "QuadExt" and ext.d == 6
    assert [(r.a, r.b) for r in ext.roots] == [(-1, Fraction(-1, 2)), (-1, Fraction(1, 2))]

    none = quad_solve(UniPoly.make([1, 0, 1]))
    assert none.kind == "NoRealRoot" and none.roots == ()

    lin = quad_solve(UniPoly.make([3, -2]))
    assert lin.kind == "LinearRoot"
    assert lin.roots[0].to_fraction() == Fraction(3, 2)


def test_quad_solve_random_verified_by_substitution():
    rng = random.Random(16)
    for _ in range(200):
        c = [Fraction(rng.randint(-8, 8), rng.randint(1, 4)) for _ in range(3)]
        if c[2] == 0:
            c[2] = Fraction(1)
        p = UniPoly.make(c)
        for r in quad_solve(p).roots:
            assert p(r).is_zero
