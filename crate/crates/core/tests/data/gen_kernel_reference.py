"""Arbitrary-precision evaluation of the lossy interface coefficients.

Prints the values frozen into the em kernel unit tests. Uses the
e^{+jwt} convention with eps = eps' - j eps'' and principal square roots.
"""
import mpmath

mpmath.mp.dps = 40
c = mpmath.mpf(299792458)
mu0 = mpmath.mpf("1.25663706212e-6")
eta0 = mu0 * c


def cos2(theta, eps):
    return mpmath.sqrt(1 - (1 / eps) * mpmath.sin(theta) ** 2)


def t_pair(theta, eps):
    c1 = mpmath.cos(theta)
    c2 = cos2(theta, eps)
    eta1 = eta0 / mpmath.sqrt(eps)
    t_in = 2 * eta1 * c1 / (eta0 * c1 + eta1 * c2)
    t_out = 2 * eta0 * c2 / (eta1 * c2 + eta0 * c1)
    return t_in, t_out


def reflection(theta, eps):
    c1 = mpmath.cos(theta)
    s = mpmath.sqrt(eps) * cos2(theta, eps)
    return (c1 - s) / (c1 + s)


def slab_phase(theta, eps, l, f):
    k_obs = 2 * mpmath.pi * f / c * mpmath.sqrt(eps)
    return k_obs * l * (1 / mpmath.cos(theta) - mpmath.sqrt(eps) / cos2(theta, eps))


mdf = mpmath.mpc("1.99", "-1.12")
th30 = mpmath.radians(30)
f79 = mpmath.mpf("79e9")
print("k(79GHz, mdf)      ", 2 * mpmath.pi * f79 / c * mpmath.sqrt(mdf))
print("eta(mdf)           ", eta0 / mpmath.sqrt(mdf))
ti, to = t_pair(th30, mdf)
print("T_in(30, mdf)      ", ti)
print("T_out(30, mdf)     ", to)
print("|T_in T_out|       ", abs(ti * to))
print("R(30, mdf)         ", reflection(th30, mdf))
print("phi(30, mdf, 9mm)  ", slab_phase(th30, mdf, mpmath.mpf("0.009"), f79))
# lossless two-interface bound for eps = 1.99 over [0, 89] deg
best = max(abs(mpmath.fprod(t_pair(mpmath.radians(a / 10), mpmath.mpf("1.99")))) for a in range(0, 891))
print("lossless max |T T| (1.99)", best)


def h0_2(x):
    return mpmath.besselj(0, x) - 1j * mpmath.bessely(0, x)


# one metal facet at (0.1, 0.1) with dl = 0.3 mm, radar at (0, 0.5), 79 GHz
metal = mpmath.mpc(1, "-2.28e6")
dx, dy = mpmath.mpf("0.1"), mpmath.mpf("0.4")
d = mpmath.sqrt(dx**2 + dy**2)
theta = mpmath.atan2(dx, dy)
k0 = 2 * mpmath.pi * f79 / c
r = reflection(theta, metal)
h = h0_2(k0 * d)
g = 1j / 4 * h
cos = mpmath.cos(theta)
j_z = (1 - r) * cos * h / eta0
m_t = (1 + r) * h
val = (-1j * 2 * mpmath.pi * f79 * mu0 * j_z * g + 1j * k0 * cos * g * m_t) * mpmath.mpf("3e-4")
print("single facet field ", val)
