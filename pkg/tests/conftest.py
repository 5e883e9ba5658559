import numpy as np
import pytest

from confga.algebra import Multivector, algebra


@pytest.fixture
def cga():
    return algebra(4, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20260817)


def random_mv(alg, rng, scale=1.0, grade=None) -> Multivector:
    coeffs = rng.uniform(-scale, scale, alg.dim)
    if grade is not None:
        coeffs = np.where(alg.grades == grade, coeffs, 0.0)
    return alg.mv(coeffs)


def max_err(a: Multivector, b: Multivector) -> float:
    return float(np.max(np.abs(a.coeffs - b.coeffs)))


def assert_mv_close(a: Multivector, b: Multivector, tol=1e-12, scale=None):
    if scale is None:
        scale = max(1.0, a.max_abs(), b.max_abs())
    err = max_err(a, b)
    assert err <= tol * scale, f"multivectors differ by {err:.3e} (allowed {tol * scale:.3e})\n  {a}\n  {b}"


def assert_proportional(a: Multivector, b: Multivector, tol=1e-9):
    """a == lambda * b for some nonzero lambda."""
    k = int(np.argmax(np.abs(b.coeffs)))
    assert b.coeffs[k] != 0.0, "reference multivector is zero"
    lam = a.coeffs[k] / b.coeffs[k]
    assert abs(lam) > 0.0, f"not proportional (zero factor)\n  {a}\n  {b}"
    assert_mv_close(a, b * lam, tol=tol)
