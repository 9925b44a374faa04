"""Small exact linear and exterior algebra on E^4 and its bivector space.

Vectors are numpy arrays of shape ``(4,)``; bivectors are arrays of shape
``(6,)`` in the fixed basis

    e1^e2, e1^e3, e1^e4, e2^e3, e2^e4, e3^e4

which is orthonormal for the induced inner product. Every module of the
package shares this ordering.
"""

import numpy as np

from .errors import DegenerateVector

BIVECTOR_BASIS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
_I = np.array([i for i, _ in BIVECTOR_BASIS])
_J = np.array([j for _, j in BIVECTOR_BASIS])

E1, E2, E3, E4 = np.eye(4)


def vec4(*components):
    """Build a finite Vector4 from four numbers or one length-4 sequence."""
    if len(components) == 1:
        components = components[0]
    v = np.asarray(components, dtype=float).reshape(-1)
    if v.shape != (4,):
        raise ValueError(f"expected 4 components, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise DegenerateVector("non-finite component in Vector4")
    return v


def bivec(*components):
    """Build a finite Bivector4 from six numbers or one length-6 sequence."""
    if len(components) == 1:
        components = components[0]
    b = np.asarray(components, dtype=float).reshape(-1)
    if b.shape != (6,):
        raise ValueError(f"expected 6 components, got {b.shape[0]}")
    if not np.all(np.isfinite(b)):
        raise ValueError("non-finite component in Bivector4")
    return b


def wedge(a, b):
    """Exterior product a ^ b; component k is the minor a_i b_j - a_j b_i."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., _I] * b[..., _J] - a[..., _J] * b[..., _I]


def biv_inner(A, B):
    """Inner product of bivectors (Euclidean dot of the 6 components)."""
    return float(np.dot(A, B))


def biv_norm(A):
    return float(np.linalg.norm(A))


def dot4(a, b):
    return float(np.dot(a, b))


def norm4(a):
    return float(np.linalg.norm(a))


def normalize4(a):
    n = norm4(a)
    if not np.isfinite(n) or n == 0.0:
        raise DegenerateVector("cannot normalize a zero vector")
    return np.asarray(a, dtype=float) / n


def scale(s, a):
    return float(s) * np.asarray(a, dtype=float)


def add(a, b):
    return np.asarray(a, dtype=float) + np.asarray(b, dtype=float)


def commutator(A, B):
    """Matrix commutator [A, B] = AB - BA of two 2x2 shape operators."""
    return A @ B - B @ A


def gram(vectors):
    """Gram matrix of a sequence of vectors."""
    M = np.asarray(vectors, dtype=float)
    return M @ M.T
