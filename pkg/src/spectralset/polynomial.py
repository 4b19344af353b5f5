"""Polynomials expanded about a centre: p(z) = sum_j c_j (z - center)^j."""
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _kernels
from .core import as_operator
from .errors import InputError


@dataclass(frozen=True, eq=False)
class Polynomial:
    coeffs: np.ndarray
    center: complex = 0j

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=np.complex128)).copy()
        if c.ndim != 1 or c.size == 0:
            raise InputError("coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(c)):
            raise InputError("polynomial coefficients must be finite")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "center", complex(self.center))

    @classmethod
    def monomial(cls, k, center=0j):
        c = np.zeros(k + 1, dtype=np.complex128)
        c[k] = 1.0
        return cls(c, center)

    @property
    def degree(self):
        return self.coeffs.size - 1

    def is_zero(self):
        return not np.any(self.coeffs)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return npoly.polyval(z - self.center, self.coeffs)

    def of_matrix(self, A):
        """Direct evaluation of p(A) by matrix Horner."""
        A = as_operator(A)
        n = A.shape[0]
        S = A - self.center * np.eye(n)
        P = self.coeffs[-1] * np.eye(n, dtype=np.complex128)
        for c in self.coeffs[-2::-1]:
            P = P @ S + c * np.eye(n)
        return P

    def matrix_norm_and_moduli(self, A, sigmas):
        return _kernels.poly_eval(as_operator(A), self.center, self.coeffs, sigmas)

    def scaled(self, factor):
        return Polynomial(self.coeffs * factor, self.center)

    def to_monomial(self):
        """Coefficients in powers of z."""
        shift = np.array([-self.center, 1.0], dtype=np.complex128)
        out = np.zeros(1, dtype=np.complex128)
        power = np.ones(1, dtype=np.complex128)
        for c in self.coeffs:
            out = npoly.polyadd(out, c * power)
            power = npoly.polymul(power, shift)
        return out
