"""Principal-branch logarithms and powers.

numpy follows the sign of a zero imaginary part when picking the branch of
``log`` on the negative real axis (``log(-1-0j) == -i*pi``).  Every routine
here first replaces ``-0.0`` by ``+0.0`` so the argument always lies in
``(-pi, pi]``.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError


def canonical(w):
    """Return ``w`` as complex with any negative-zero imaginary part cleared."""
    w = np.array(w, dtype=complex)
    w.imag += 0.0
    return w


def principal_log(w):
    return np.log(canonical(w))


def principal_pow(w, e):
    """``exp(e * Log w)`` on the principal branch.

    ``w == 0`` is accepted only when ``Re e > 0`` and yields 0.
    """
    w = canonical(w)
    e = complex(e)
    zero = w == 0
    if np.any(zero):
        if e.real <= 0:
            raise DomainError(f"0 raised to a power with Re(e) = {e.real} <= 0")
        safe = np.where(zero, 1.0, w)
        out = np.where(zero, 0.0, np.exp(e * np.log(safe)))
    else:
        out = np.exp(e * np.log(w))
    return out[()] if out.ndim == 0 else out


def real_pow_complex(r, e):
    """``exp(e * ln r)`` for a positive real base and complex exponent."""
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError("real_pow_complex requires a positive real base")
    out = np.exp(complex(e) * np.log(r))
    return out[()] if out.ndim == 0 else out
