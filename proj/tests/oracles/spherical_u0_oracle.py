"""Independent oracle for the spherical steady-state membrane level u0.

Composite Simpson with 1e5 panels for the radial integral and 200 bisection
steps on the total-mass map. Parameters: D=1, alpha=1, beta=1, k1=k2=1, R=1,
target mass 1.
"""
import mpmath as mp

mp.mp.dps = 30
D, alpha, beta, k1, k2, R, M = 1, 1, 1, 1, 1, 1, 1
sa = mp.sqrt(alpha)


def c_profile(u0):
    c0 = beta * u0 / (mp.cosh(sa * R) / R - mp.sinh(sa * R) / (sa * R**2))
    return lambda r: c0 * (mp.sinh(sa * r) / (sa * r) if r > 0 else mp.mpf(1))


def total_mass(u0, panels=100000):
    c = c_profile(u0)
    cR = c(R)
    f = lambda r: r**2 * mp.e ** ((c(r) - cR) / D)
    h = mp.mpf(R) / panels
    s = f(0) + f(R)
    for i in range(1, panels):
        s += (4 if i % 2 else 2) * f(i * h)
    integral = s * h / 3
    return 4 * mp.pi * R**2 * u0 + 4 * mp.pi * (mp.mpf(k2) / k1) * u0 * integral


lo, hi = mp.mpf(0), mp.mpf(1)
while total_mass(hi, 2000) < M:
    hi *= 2
mp.mp.dps = 20
for _ in range(200):
    mid = (lo + hi) / 2
    if total_mass(mid, 2000) < M:
        lo = mid
    else:
        hi = mid
    if hi - lo < mp.mpf("1e-14"):
        break
# refine with the full-resolution quadrature around the coarse root
lo, hi = lo - mp.mpf("1e-6"), hi + mp.mpf("1e-6")
for _ in range(200):
    mid = (lo + hi) / 2
    if total_mass(mid) < M:
        lo = mid
    else:
        hi = mid
    if hi - lo < mp.mpf("1e-17"):
        break
print(mp.nstr((lo + hi) / 2, 17))
