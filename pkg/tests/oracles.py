"""Independent high-precision references built on mpmath quadrature."""
import math

import mpmath as mp

mp.mp.dps = 30


def _tail_breaks(z):
    h = 1 / mp.sqrt(abs(z))
    return [k * h for k in (0, 0.5, 1, 2, 4, 8, 16, 32, 64)] + [mp.inf]


def _ray_tail(f, z):
    """int_z^inf f(t) dt along the ray z + s z/|z|, s >= 0."""
    d = z / abs(z)
    return mp.quad(lambda s: f(z + s * d), _tail_breaks(z)) * d


def _use_tail(z):
    return abs(z) > 2 and abs(mp.arg(z)) < math.pi / 4


def _from_origin(f, z):
    n = int(1.5 * abs(z)) + 2
    return mp.quad(f, [z * k / n for k in range(n + 1)])


def ai1(z):
    z = mp.mpc(z)
    if _use_tail(z):
        return -_ray_tail(mp.airyai, z)
    return _from_origin(mp.airyai, z) - mp.mpf(1) / 3


def ai2(z):
    z = mp.mpc(z)
    if _use_tail(z):
        d = z / abs(z)
        return mp.quad(lambda s: s * mp.airyai(z + s * d), _tail_breaks(z)) * d * d
    return z * ai1(z) - mp.airyai(z, 1)


def bi1(z):
    z = mp.mpc(z)
    return _from_origin(mp.airybi, z)


def bi2(z):
    z = mp.mpc(z)
    return z * bi1(z) - (mp.airybi(z, 1) - mp.airybi(0, 1))


def tietjens(z):
    w = mp.mpf(z) * mp.exp(-5j * mp.pi / 6)
    return complex(ai2(w) / (w * ai1(w)))
