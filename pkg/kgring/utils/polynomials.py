"""Dense polynomial helpers, coefficients stored lowest degree first."""
import numpy as np
from numpy.polynomial import polynomial as P

REL_TOL = 1e-12


def as_poly(coeffs, max_degree=None):
    """
    Normalize a coefficient sequence to a float array with trailing zeros removed.

    Args:
        coeffs: Coefficients, lowest degree first
        max_degree: Reject polynomials of higher degree when given

    Returns:
        numpy array of length >= 1
    """
    arr = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if arr.ndim != 1:
        raise ValueError("Polynomial coefficients must be one-dimensional")
    arr = trim(arr)
    if max_degree is not None and degree(arr) > max_degree:
        raise ValueError(f"Polynomial degree {degree(arr)} exceeds {max_degree}")
    return arr


def trim(coeffs, tol=0.0):
    """Drop trailing coefficients with magnitude <= tol, keeping at least one."""
    arr = np.asarray(coeffs, dtype=float)
    if arr.size == 0:
        return np.zeros(1)
    return P.polytrim(arr, tol) if np.any(np.abs(arr) > tol) else np.zeros(1)


def degree(coeffs):
    """Degree of a trimmed polynomial; the zero polynomial has degree -1."""
    arr = trim(coeffs)
    if arr.size == 1 and arr[0] == 0.0:
        return -1
    return arr.size - 1


def padded(coeffs, size=3):
    """Coefficient array zero-padded to `size` entries."""
    arr = np.zeros(max(size, len(coeffs)))
    arr[:len(coeffs)] = coeffs
    return arr


def add(a, b):
    return P.polyadd(a, b)


def scale(a, factor):
    return np.asarray(a, dtype=float) * factor


def mul(a, b):
    return P.polymul(a, b)


def derivative(a, order=1):
    arr = np.asarray(a, dtype=float)
    if arr.size <= order:
        return np.zeros(1)
    return P.polyder(arr, order)


def coefficient(a, power):
    """Coefficient of s**power, zero beyond the stored length."""
    return float(a[power]) if power < len(a) else 0.0


def allclose(a, b, rel_tol=REL_TOL):
    """Coefficient-wise equality relative to the largest magnitude involved."""
    size = max(len(a), len(b))
    pa, pb = padded(a, size), padded(b, size)
    scale_ = max(np.max(np.abs(pa)), np.max(np.abs(pb)), 1.0)
    return bool(np.all(np.abs(pa - pb) <= rel_tol * scale_))
