"""Pure-numpy face rasterizer.

Reference implementation of the render kernel. The Cython module
``render_cy`` mirrors this math op-for-op; both consume a 16-slot geometry
vector (see ``synthgen.GEOM_BOUNDS`` for the slot order) plus a texture-seed
term and emit an H x W x 3 float32 grid in [0, 1].

Every operation here is a pure function of its arguments, so repeated calls
are bit-identical within one backend.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"

# splitmix64 constants, shared with the compiled kernel
_M1 = 0x9E3779B97F4A7C15
_M2 = 0xBF58476D1CE4E5B9
_M3 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1

# geometry slot indices
_FACE_AX, _FACE_AY, _EYE_DX, _EYE_R, _NOSE_W, _MOUTH_CURVE, _MOUTH_W, \
    _BROW_H, _BROW_TILT, _SKIN, _WRINKLE, _HUE, _EYE_Y, _MOUTH_Y, _BG, _FREQ = range(16)

_MOUTH_THICK = 0.05
_BROW_THICK = 0.022
_NOISE_OFF_X = 31.7
_NOISE_OFF_Y = 17.3


def seed_term(texture_seed: int) -> int:
    """Fold a texture seed into the 64-bit hash term used by the noise field."""
    return (int(texture_seed) * _M3) & _MASK


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> np.uint64(30))
    z = (z * np.uint64(_M2)) & np.uint64(_MASK)
    z = z ^ (z >> np.uint64(27))
    z = (z * np.uint64(_M3)) & np.uint64(_MASK)
    return z ^ (z >> np.uint64(31))


def _hash01(ix: np.ndarray, iy: np.ndarray, term: int) -> np.ndarray:
    """Lattice hash -> float64 in [0, 1); identical across backends."""
    ux = ix.astype(np.int64).astype(np.uint64) * np.uint64(_M1)
    uy = iy.astype(np.int64).astype(np.uint64) * np.uint64(_M2)
    h = _mix64(ux ^ uy ^ np.uint64(term))
    return (h >> np.uint64(40)).astype(np.float64) * (1.0 / 16777216.0)


def _value_noise(x: np.ndarray, y: np.ndarray, term: int) -> np.ndarray:
    ix = np.floor(x)
    iy = np.floor(y)
    fx = x - ix
    fy = y - iy
    sx = fx * fx * (3.0 - 2.0 * fx)
    sy = fy * fy * (3.0 - 2.0 * fy)
    h00 = _hash01(ix, iy, term)
    h10 = _hash01(ix + 1, iy, term)
    h01 = _hash01(ix, iy + 1, term)
    h11 = _hash01(ix + 1, iy + 1, term)
    top = h00 * (1.0 - sx) + h10 * sx
    bot = h01 * (1.0 - sx) + h11 * sx
    return top * (1.0 - sy) + bot * sy


def _coverage(signed_dist: np.ndarray, aa: float) -> np.ndarray:
    """Antialiased inside-coverage of an edge at signed distance 0."""
    return np.clip(0.5 - signed_dist / (2.0 * aa), 0.0, 1.0)


def render_geometry(geom, size: int, term: int) -> np.ndarray:
    """Rasterize one face from a mapped geometry vector.

    geom: float64 vector of 16 mapped geometry values.
    size: output height and width in pixels.
    term: precomputed texture-seed hash term (see :func:`seed_term`).
    """
    g = np.asarray(geom, dtype=np.float64)
    s = int(size)
    aa = 1.5 / s

    half = 2.0 / s
    coords = (np.arange(s, dtype=np.float64) + 0.5) * half - 1.0
    u = coords[None, :]
    v = coords[:, None]

    out = np.empty((s, s, 3), dtype=np.float64)
    out[:] = g[_BG]

    # head: antialiased ellipse filled with textured skin
    ax, ay = g[_FACE_AX], g[_FACE_AY]
    q = np.sqrt((u / ax) ** 2 + (v / ay) ** 2)
    face_cov = _coverage((q - 1.0) * min(ax, ay), aa)
    skin, hue = g[_SKIN], g[_HUE]
    skin_rgb = np.array([skin * (1.12 + hue), skin * 0.94, skin * (0.78 - hue)])
    noise = _value_noise(u * g[_FREQ] + _NOISE_OFF_X, v * g[_FREQ] + _NOISE_OFF_Y, term)
    tex = 1.0 - g[_WRINKLE] * noise
    for c in range(3):
        out[:, :, c] = out[:, :, c] * (1.0 - face_cov) + skin_rgb[c] * tex * face_cov

    # nose: darkening wedge between eye line and mouth
    eye_y, mouth_y = g[_EYE_Y], g[_MOUTH_Y]
    y0 = eye_y + 0.16
    y1 = mouth_y - 0.14
    t_nose = np.clip((v - y0) / (y1 - y0), 0.0, 1.0)
    w_nose = g[_NOSE_W] * t_nose
    band = _coverage(y0 - v, aa) * _coverage(v - y1, aa)
    nose_cov = _coverage(np.abs(u) - w_nose, aa) * band
    shade = 1.0 - 0.18 * nose_cov
    out *= shade[:, :, None]

    # eyes: sclera discs plus pupils, mirrored
    eye_dx, eye_r = g[_EYE_DX], g[_EYE_R]
    d_l = np.sqrt((u + eye_dx) ** 2 + (v - eye_y) ** 2)
    d_r = np.sqrt((u - eye_dx) ** 2 + (v - eye_y) ** 2)
    sclera = np.clip(_coverage(d_l - eye_r, aa) + _coverage(d_r - eye_r, aa), 0.0, 1.0)
    for c, col in enumerate((0.95, 0.95, 0.93)):
        out[:, :, c] = out[:, :, c] * (1.0 - sclera) + col * sclera
    pup_r = 0.45 * eye_r
    pupil = np.clip(_coverage(d_l - pup_r, aa) + _coverage(d_r - pup_r, aa), 0.0, 1.0)
    for c, col in enumerate((0.09, 0.06, 0.05)):
        out[:, :, c] = out[:, :, c] * (1.0 - pupil) + col * pupil

    # brows: tilted bands above the eyes; positive tilt lowers the outer end
    brow_w = 1.45 * eye_r
    brow_y = eye_y - g[_BROW_H]
    t_l = (u + eye_dx) / brow_w
    t_r = (u - eye_dx) / brow_w
    yc_l = brow_y - g[_BROW_TILT] * t_l
    yc_r = brow_y + g[_BROW_TILT] * t_r
    in_l = _coverage(np.abs(t_l) - 1.0, aa / brow_w)
    in_r = _coverage(np.abs(t_r) - 1.0, aa / brow_w)
    cov_l = _coverage(np.abs(v - yc_l) - _BROW_THICK, aa) * in_l
    cov_r = _coverage(np.abs(v - yc_r) - _BROW_THICK, aa) * in_r
    brow = np.clip(cov_l + cov_r, 0.0, 1.0)
    for c, col in enumerate((0.16, 0.11, 0.08)):
        out[:, :, c] = out[:, :, c] * (1.0 - brow) + col * brow

    # mouth: parabolic band; positive curvature raises the corners
    mw, curve = g[_MOUTH_W], g[_MOUTH_CURVE]
    rel = u / mw
    vc = mouth_y - curve * (rel * rel - 0.5)
    mouth = _coverage(np.abs(v - vc) - _MOUTH_THICK, aa) * _coverage(np.abs(u) - mw, aa)
    for c, col in enumerate((0.62, 0.29, 0.30)):
        out[:, :, c] = out[:, :, c] * (1.0 - mouth) + col * mouth

    return np.clip(out, 0.0, 1.0).astype(np.float32)
