"""Independent reference values frozen into the test suite.

Nothing here imports ``hypmax``.  Run ``python3 tests/oracles/generate.py``
to regenerate; the printed numbers are the constants used in the tests.
"""

import math

import numpy as np
from scipy import integrate, optimize


def geodesic_length_oracle():
    # hyperbolic length of the geodesic arc (circle centered at (c, 0)),
    # checked against a direct minimization over polylines
    def length(c):
        t0 = math.atan2(1.0, 0.0 - c)
        t1 = math.atan2(1.0, 1.0 - c)
        lo, hi = sorted((t0, t1))
        return integrate.quad(lambda t: 1.0 / math.sin(t), lo, hi, epsabs=1e-13, epsrel=1e-13)[0]

    geo = length(0.5)

    def polyline(ys, n=64):
        xs = np.linspace(0.0, 1.0, n + 2)
        y = np.concatenate([[1.0], np.exp(ys), [1.0]])
        seg = np.hypot(np.diff(xs), np.diff(y))
        return float(np.sum(seg * 2.0 / (y[1:] + y[:-1])))

    res = optimize.minimize(polyline, np.zeros(64), method="L-BFGS-B")
    return geo, res.fun


def paper_density(x, y):
    g = np.exp(-0.5 * (x * x + y * y)) / (2.0 * np.pi)
    m2 = (x > 1.0) & (y < 1.0 / np.maximum(x, 1e-300)) & (y > 0)
    return np.where(y > 0, g, 0.0), m2.astype(float)


def mc_reference_disk(n=10**7, seed=20240601):
    rng = np.random.default_rng(seed)
    a, b, r = 10.0, 1.0, 1.0
    g_sum = g_sq = m_sum = m_sq = 0.0
    chunk = 10**6
    for _ in range(n // chunk):
        rho = r * np.sqrt(rng.random(chunk))
        phi = 2 * np.pi * rng.random(chunk)
        x, y = a + rho * np.cos(phi), b + rho * np.sin(phi)
        g, m = paper_density(x, y)
        g_sum += g.sum(); g_sq += (g * g).sum()
        m_sum += m.sum(); m_sq += (m * m).sum()
    area = math.pi * r * r

    def est(s, sq):
        mean = s / n
        return float(area * mean), area * math.sqrt((sq / n - mean * mean) / n)

    return est(g_sum, g_sq), est(m_sum, m_sq)


def m2_reference_disk_exact():
    # m2 of B_e((10,1),1): integrate the y-section length in x on adaptive quad
    def section(x):
        h = math.sqrt(max(1.0 - (x - 10.0) ** 2, 0.0))
        lo, hi = 1.0 - h, min(1.0 + h, 1.0 / x)
        return max(hi - lo, 0.0)

    # circle meets y = 1/x where the section closes; find the crossings
    f = lambda x: (1.0 - math.sqrt(max(1.0 - (x - 10.0) ** 2, 0.0))) - 1.0 / x
    x1 = optimize.brentq(f, 9.0 + 1e-12, 10.0)
    x2 = optimize.brentq(f, 10.0, 11.0 - 1e-12)
    return integrate.quad(section, x1, x2, epsabs=1e-15, epsrel=1e-13, limit=200)[0]


def polar_gaussian_oracle(n_rho=400, n_phi=800):
    # Gaussian over B_e((0,2),1.999) on a polar tensor grid around the center:
    # Gauss-Legendre in rho, trapezoid (spectral for periodic) in phi
    a, b, r = 0.0, 2.0, 1.999
    u, w = np.polynomial.legendre.leggauss(n_rho)
    rho = 0.5 * r * (u + 1.0)
    wr = 0.5 * r * w
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    R, P = np.meshgrid(rho, phi, indexing="ij")
    x, y = a + R * np.cos(P), b + R * np.sin(P)
    f = np.exp(-0.5 * (x * x + y * y)) / (2 * np.pi) * R
    return float(wr @ f.sum(axis=1) * (2 * np.pi / n_phi))


def dblquad_gaussian(a, b, r):
    def inner(x):
        h = math.sqrt(max(r * r - (x - a) ** 2, 0.0))
        lo, hi = max(b - h, 0.0), b + h
        return integrate.quad(lambda y: math.exp(-0.5 * (x * x + y * y)) / (2 * math.pi),
                              lo, hi, epsabs=1e-15, epsrel=1e-13)[0]
    return integrate.quad(inner, a - r, a + r, epsabs=1e-15, epsrel=1e-12, limit=200)[0]


def min_s_over_r(n=2000):
    # s/r over b in (0, 3], r in (0, b); s = 0.5 log((b+r)/(b-r)) >= r/b
    b = np.linspace(1e-3, 3.0, n)[:, None]
    f = np.linspace(1e-6, 1 - 1e-6, n)[None, :]
    r = f * b
    s = 0.5 * np.log((b + r) / (b - r))
    return float((s / r).min())


if __name__ == "__main__":
    geo, poly = geodesic_length_oracle()
    print(f"d((0,1),(1,1)): geodesic {geo!r}, polyline {poly!r}, arccosh(1.5) {math.acosh(1.5)!r}")
    (g, ge), (m, me) = mc_reference_disk()
    print(f"MC 1e7 on B_e((10,1),1): m1 {g!r} +- {ge!r}; m2 {m!r} +- {me!r}")
    print(f"m2 B_e((10,1),1) by 1-D quad: {m2_reference_disk_exact()!r}")
    print(f"polar Gaussian over B_e((0,2),1.999): {polar_gaussian_oracle()!r}, "
          f"refined {polar_gaussian_oracle(800, 1600)!r}")
    for disk in [(0.3, 1.2, 0.9), (-1.0, 0.5, 0.4), (2.0, 3.0, 2.5)]:
        print(f"dblquad Gaussian over B_e({disk[:2]},{disk[2]}): {dblquad_gaussian(*disk)!r}")
    print(f"min s/r over b <= 3: {min_s_over_r()!r}")
    for R in (10, 50, 100, 200):
        lam = (R - 1) ** 1.5 / 3
        print(f"R={R}: lambda {lam!r}, lambda/(2R) {lam / (2 * R)!r}")
