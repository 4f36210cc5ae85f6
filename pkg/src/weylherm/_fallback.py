"""Pure numpy implementations of the hot kernels.

Signatures mirror the compiled ``_kernels`` module exactly.  Fields are
C-contiguous complex arrays of shape ``(N + 1, nx)``.
"""
import numpy as np


def advect(R, E, dx, periodic, out):
    """``out = -i (sqrt(k/2) D R_{k-1} + sqrt((k+1)/2) D* R_{k+1})``."""
    n = R.shape[0]
    C = np.empty_like(R)
    C[:, 1:-1] = R[:, 2:] - R[:, :-2]
    if periodic:
        C[:, 0] = R[:, 1] - R[:, -1]
        C[:, -1] = R[:, 0] - R[:, -2]
    else:
        C[:, 0] = R[:, 1]
        C[:, -1] = -R[:, -2]
    C *= 1.0 / (2.0 * dx)
    ER = E * R
    k = np.arange(n, dtype=float)[:, None]
    out[...] = 0.0
    if n > 1:
        out[1:] = np.sqrt(k[1:] / 2.0) * (C[:-1] - ER[:-1])
        out[:-1] -= np.sqrt((k[:-1] + 1.0) / 2.0) * (C[1:] + ER[1:])
    out *= -1j
    return out


def add_full_coupling(blocks, R, out, scale):
    """``out += scale * M R`` with ``M`` given by its even/odd block."""
    nx, ne, no = blocks.shape
    if no == 0:
        return out
    r_odd = np.ascontiguousarray(R[1::2].T).view(np.float64).reshape(nx, no, 2)
    r_even = np.ascontiguousarray(R[0::2].T).view(np.float64).reshape(nx, ne, 2)
    to_even = np.matmul(blocks, r_odd).view(np.complex128)[..., 0]
    to_odd = np.matmul(blocks.transpose(0, 2, 1), r_even).view(np.complex128)[..., 0]
    out[0::2] += scale * to_even.T
    out[1::2] += scale * to_odd.T
    return out


def add_band_coupling(weight, R, out, scale):
    """``out += scale * weight_j * (y^3 band applied to R)``."""
    n = R.shape[0]
    k = np.arange(n, dtype=float)[:, None]
    acc = np.zeros_like(R)
    if n > 1:
        acc[1:] += 1.5 * k[1:] * np.sqrt(k[1:] / 2.0) * R[:-1]
        acc[:-1] += 1.5 * (k[:-1] + 1) * np.sqrt((k[:-1] + 1) / 2.0) * R[1:]
    if n > 3:
        kk = k[3:]
        acc[3:] += np.sqrt(kk * (kk - 1) * (kk - 2) / 8.0) * R[:-3]
        kk = k[:-3]
        acc[:-3] += np.sqrt((kk + 1) * (kk + 2) * (kk + 3) / 8.0) * R[3:]
    out += scale * (weight * acc)
    return out
