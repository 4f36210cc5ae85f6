# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels.  Same signatures as ``weylherm._fallback``."""
from libc.math cimport sqrt
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_blas cimport dgemm


def advect(double complex[:, ::1] R, double[::1] E, double dx, bint periodic,
           double complex[:, ::1] out):
    cdef Py_ssize_t n = R.shape[0], nx = R.shape[1]
    cdef Py_ssize_t k, j
    cdef double h = 1.0 / (2.0 * dx)
    cdef double *r = <double *> &R[0, 0]
    cdef double *o = <double *> &out[0, 0]
    cdef double *lo
    cdef double *hi
    cdef double *ok
    cdef double s_lo, s_hi, re, im
    cdef double zl_re, zl_im, zr_re, zr_im
    if nx < 2:
        raise ValueError("advect needs at least two cells")
    for k in range(n):
        s_lo = sqrt(k / 2.0)
        s_hi = sqrt((k + 1) / 2.0) if k + 1 < n else 0.0
        # rows k-1 and k+1 as interleaved re/im; a missing row is scaled by zero
        lo = r + 2 * nx * (k - 1 if k > 0 else 0)
        hi = r + 2 * nx * (k + 1 if k + 1 < n else k)
        ok = o + 2 * nx * k
        for j in range(1, nx - 1):
            # D R_{k-1} = c - E R ;  D* R_{k+1} = -c - E R
            re = s_lo * ((lo[2 * j + 2] - lo[2 * j - 2]) * h - E[j] * lo[2 * j]) \
                - s_hi * ((hi[2 * j + 2] - hi[2 * j - 2]) * h + E[j] * hi[2 * j])
            im = s_lo * ((lo[2 * j + 3] - lo[2 * j - 1]) * h - E[j] * lo[2 * j + 1]) \
                - s_hi * ((hi[2 * j + 3] - hi[2 * j - 1]) * h + E[j] * hi[2 * j + 1])
            # multiply by -i
            ok[2 * j] = im
            ok[2 * j + 1] = -re
        for j in (0, nx - 1):
            if j == 0:
                zl_re = lo[2 * nx - 2] if periodic else 0.0
                zl_im = lo[2 * nx - 1] if periodic else 0.0
                zr_re = lo[2]
                zr_im = lo[3]
            else:
                zl_re = lo[2 * nx - 4]
                zl_im = lo[2 * nx - 3]
                zr_re = lo[0] if periodic else 0.0
                zr_im = lo[1] if periodic else 0.0
            re = s_lo * ((zr_re - zl_re) * h - E[j] * lo[2 * j])
            im = s_lo * ((zr_im - zl_im) * h - E[j] * lo[2 * j + 1])
            if j == 0:
                zl_re = hi[2 * nx - 2] if periodic else 0.0
                zl_im = hi[2 * nx - 1] if periodic else 0.0
                zr_re = hi[2]
                zr_im = hi[3]
            else:
                zl_re = hi[2 * nx - 4]
                zl_im = hi[2 * nx - 3]
                zr_re = hi[0] if periodic else 0.0
                zr_im = hi[1] if periodic else 0.0
            re -= s_hi * ((zr_re - zl_re) * h + E[j] * hi[2 * j])
            im -= s_hi * ((zr_im - zl_im) * h + E[j] * hi[2 * j + 1])
            ok[2 * j] = im
            ok[2 * j + 1] = -re
    return out


def add_full_coupling(double[:, :, ::1] blocks, double complex[:, ::1] R,
                      double complex[:, ::1] out, double complex scale):
    """``out += scale * M_j R[:, j]`` with only the even-row/odd-column block stored.

    Per cell the even rows (re, im) form a 2 x ne column-major matrix with
    leading dimension ``4 nx`` straight inside ``R``, so two dgemm calls do the
    work without copying.
    """
    cdef Py_ssize_t nx = blocks.shape[0], ne = blocks.shape[1], no = blocks.shape[2]
    cdef Py_ssize_t j, a
    cdef int m2 = 2, ine = <int> ne, ino = <int> no, ld = <int> (4 * nx)
    cdef double one = 1.0, zero = 0.0
    cdef double *base = <double *> &R[0, 0]
    cdef double *ye
    cdef double *yo
    cdef double complex z
    if no == 0 or ne == 0:
        return out
    ye = <double *> malloc(2 * ne * sizeof(double))
    yo = <double *> malloc(2 * no * sizeof(double))
    try:
        for j in range(nx):
            # blocks[j] row-major (ne x no) is the column-major (no x ne) matrix B^T
            # even rows:  Y_e (2 x ne) = X_o (2 x no) . B^T
            dgemm("N", "N", &m2, &ine, &ino, &one, base + 2 * nx + 2 * j, &ld,
                  &blocks[j, 0, 0], &ino, &zero, ye, &m2)
            # odd rows:   Y_o (2 x no) = X_e (2 x ne) . B
            dgemm("N", "T", &m2, &ino, &ine, &one, base + 2 * j, &ld,
                  &blocks[j, 0, 0], &ino, &zero, yo, &m2)
            for a in range(ne):
                z = ye[2 * a] + 1j * ye[2 * a + 1]
                out[2 * a, j] = out[2 * a, j] + scale * z
            for a in range(no):
                z = yo[2 * a] + 1j * yo[2 * a + 1]
                out[2 * a + 1, j] = out[2 * a + 1, j] + scale * z
    finally:
        free(ye)
        free(yo)
    return out


def add_band_coupling(double[::1] weight, double complex[:, ::1] R,
                      double complex[:, ::1] out, double complex scale):
    cdef Py_ssize_t n = R.shape[0], nx = R.shape[1]
    cdef Py_ssize_t k, j, q
    cdef double c[4]
    cdef double *rows[4]
    cdef double *r = <double *> &R[0, 0]
    cdef double *o
    cdef double sr = scale.real, si = scale.imag, re, im, w
    cdef int m
    for k in range(n):
        # neighbours k-3, k-1, k+1, k+3 that exist
        m = 0
        if k >= 3:
            c[m] = sqrt(k * (k - 1.0) * (k - 2.0) / 8.0)
            rows[m] = r + 2 * nx * (k - 3)
            m += 1
        if k >= 1:
            c[m] = 1.5 * k * sqrt(k / 2.0)
            rows[m] = r + 2 * nx * (k - 1)
            m += 1
        if k + 1 < n:
            c[m] = 1.5 * (k + 1) * sqrt((k + 1) / 2.0)
            rows[m] = r + 2 * nx * (k + 1)
            m += 1
        if k + 3 < n:
            c[m] = sqrt((k + 1.0) * (k + 2.0) * (k + 3.0) / 8.0)
            rows[m] = r + 2 * nx * (k + 3)
            m += 1
        o = <double *> &out[k, 0]
        for j in range(nx):
            re = 0.0
            im = 0.0
            for q in range(m):
                re = re + c[q] * rows[q][2 * j]
                im = im + c[q] * rows[q][2 * j + 1]
            w = weight[j]
            o[2 * j] += w * (sr * re - si * im)
            o[2 * j + 1] += w * (sr * im + si * re)
    return out
