# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled face rasterizer; op-for-op mirror of render_np.

Single pass over the pixel grid with all feature math inlined. Must stay in
lockstep with render_np.render_geometry: same layer order, same formulas,
same hash. The equivalence tests compare the two backends pixelwise.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, floor, sqrt

cnp.import_array()

BACKEND_NAME = "cython"

cdef unsigned long long M1 = 0x9E3779B97F4A7C15ULL
cdef unsigned long long M2 = 0xBF58476D1CE4E5B9ULL
cdef unsigned long long M3 = 0x94D049BB133111EBULL

cdef double MOUTH_THICK = 0.05
cdef double BROW_THICK = 0.022
cdef double NOISE_OFF_X = 31.7
cdef double NOISE_OFF_Y = 17.3


cdef inline unsigned long long _mix64(unsigned long long z) nogil:
    z = z ^ (z >> 30)
    z = z * M2
    z = z ^ (z >> 27)
    z = z * M3
    return z ^ (z >> 31)


cdef inline double _hash01(long long ix, long long iy, unsigned long long term) nogil:
    cdef unsigned long long ux = (<unsigned long long> ix) * M1
    cdef unsigned long long uy = (<unsigned long long> iy) * M2
    cdef unsigned long long h = _mix64(ux ^ uy ^ term)
    return <double> (h >> 40) * (1.0 / 16777216.0)


cdef inline double _value_noise(double x, double y, unsigned long long term) nogil:
    cdef double fix = floor(x)
    cdef double fiy = floor(y)
    cdef long long ix = <long long> fix
    cdef long long iy = <long long> fiy
    cdef double fx = x - fix
    cdef double fy = y - fiy
    cdef double sx = fx * fx * (3.0 - 2.0 * fx)
    cdef double sy = fy * fy * (3.0 - 2.0 * fy)
    cdef double h00 = _hash01(ix, iy, term)
    cdef double h10 = _hash01(ix + 1, iy, term)
    cdef double h01 = _hash01(ix, iy + 1, term)
    cdef double h11 = _hash01(ix + 1, iy + 1, term)
    cdef double top = h00 * (1.0 - sx) + h10 * sx
    cdef double bot = h01 * (1.0 - sx) + h11 * sx
    return top * (1.0 - sy) + bot * sy


cdef inline double _coverage(double signed_dist, double aa) nogil:
    cdef double c = 0.5 - signed_dist / (2.0 * aa)
    if c < 0.0:
        return 0.0
    if c > 1.0:
        return 1.0
    return c


cdef inline double _clip01(double x) nogil:
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


def render_geometry(geom, int size, term):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = np.ascontiguousarray(geom, dtype=np.float64)
    cdef unsigned long long useed = <unsigned long long> (<object> term)
    cdef int s = size
    cdef double aa = 1.5 / s
    cdef double half = 2.0 / s

    cdef double ax = g[0], ay = g[1], eye_dx = g[2], eye_r = g[3], nose_w = g[4]
    cdef double curve = g[5], mw = g[6], brow_h = g[7], brow_tilt = g[8]
    cdef double skin = g[9], wrinkle = g[10], hue = g[11]
    cdef double eye_y = g[12], mouth_y = g[13], bg = g[14], freq = g[15]

    cdef double skin_r = skin * (1.12 + hue)
    cdef double skin_g = skin * 0.94
    cdef double skin_b = skin * (0.78 - hue)
    cdef double minax = ax if ax < ay else ay
    cdef double y0 = eye_y + 0.16
    cdef double y1 = mouth_y - 0.14
    cdef double pup_r = 0.45 * eye_r
    cdef double brow_w = 1.45 * eye_r
    cdef double brow_y = eye_y - brow_h

    cdef cnp.ndarray[cnp.float32_t, ndim=3] out = np.empty((s, s, 3), dtype=np.float32)

    cdef int r, c
    cdef double u, v, q, face_cov, noise, tex, t_nose, wn, band, nose_cov, shade
    cdef double d_l, d_r, sclera, pupil, t_l, t_r, yc_l, yc_r, in_l, in_r, cov_l, cov_r, brow
    cdef double rel, vc, mouth, o0, o1, o2, tn

    with nogil:
        for r in range(s):
            v = (r + 0.5) * half - 1.0
            for c in range(s):
                u = (c + 0.5) * half - 1.0

                o0 = bg
                o1 = bg
                o2 = bg

                # head with textured skin
                q = sqrt((u / ax) * (u / ax) + (v / ay) * (v / ay))
                face_cov = _coverage((q - 1.0) * minax, aa)
                noise = _value_noise(u * freq + NOISE_OFF_X, v * freq + NOISE_OFF_Y, useed)
                tex = 1.0 - wrinkle * noise
                o0 = o0 * (1.0 - face_cov) + skin_r * tex * face_cov
                o1 = o1 * (1.0 - face_cov) + skin_g * tex * face_cov
                o2 = o2 * (1.0 - face_cov) + skin_b * tex * face_cov

                # nose shadow
                tn = (v - y0) / (y1 - y0)
                if tn < 0.0:
                    tn = 0.0
                elif tn > 1.0:
                    tn = 1.0
                wn = nose_w * tn
                band = _coverage(y0 - v, aa) * _coverage(v - y1, aa)
                nose_cov = _coverage(fabs(u) - wn, aa) * band
                shade = 1.0 - 0.18 * nose_cov
                o0 = o0 * shade
                o1 = o1 * shade
                o2 = o2 * shade

                # eyes
                d_l = sqrt((u + eye_dx) * (u + eye_dx) + (v - eye_y) * (v - eye_y))
                d_r = sqrt((u - eye_dx) * (u - eye_dx) + (v - eye_y) * (v - eye_y))
                sclera = _clip01(_coverage(d_l - eye_r, aa) + _coverage(d_r - eye_r, aa))
                o0 = o0 * (1.0 - sclera) + 0.95 * sclera
                o1 = o1 * (1.0 - sclera) + 0.95 * sclera
                o2 = o2 * (1.0 - sclera) + 0.93 * sclera
                pupil = _clip01(_coverage(d_l - pup_r, aa) + _coverage(d_r - pup_r, aa))
                o0 = o0 * (1.0 - pupil) + 0.09 * pupil
                o1 = o1 * (1.0 - pupil) + 0.06 * pupil
                o2 = o2 * (1.0 - pupil) + 0.05 * pupil

                # brows
                t_l = (u + eye_dx) / brow_w
                t_r = (u - eye_dx) / brow_w
                yc_l = brow_y - brow_tilt * t_l
                yc_r = brow_y + brow_tilt * t_r
                in_l = _coverage(fabs(t_l) - 1.0, aa / brow_w)
                in_r = _coverage(fabs(t_r) - 1.0, aa / brow_w)
                cov_l = _coverage(fabs(v - yc_l) - BROW_THICK, aa) * in_l
                cov_r = _coverage(fabs(v - yc_r) - BROW_THICK, aa) * in_r
                brow = _clip01(cov_l + cov_r)
                o0 = o0 * (1.0 - brow) + 0.16 * brow
                o1 = o1 * (1.0 - brow) + 0.11 * brow
                o2 = o2 * (1.0 - brow) + 0.08 * brow

                # mouth
                rel = u / mw
                vc = mouth_y - curve * (rel * rel - 0.5)
                mouth = _coverage(fabs(v - vc) - MOUTH_THICK, aa) * _coverage(fabs(u) - mw, aa)
                o0 = o0 * (1.0 - mouth) + 0.62 * mouth
                o1 = o1 * (1.0 - mouth) + 0.29 * mouth
                o2 = o2 * (1.0 - mouth) + 0.30 * mouth

                out[r, c, 0] = <float> _clip01(o0)
                out[r, c, 1] = <float> _clip01(o1)
                out[r, c, 2] = <float> _clip01(o2)

    return out
