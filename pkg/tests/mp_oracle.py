"""Arbitrary-precision reference values by direct integration of densities."""

import mpmath as mp

mp.mp.dps = 30


def pdf(tag, shape=None):
    if tag == "gaussian":
        return lambda z: mp.npdf(z), (-mp.inf, mp.inf)
    if tag == "laplace":
        return lambda z: mp.exp(-abs(z)) / 2, (-mp.inf, mp.inf)
    if tag == "logistic":
        return lambda z: mp.exp(-abs(z)) / (1 + mp.exp(-abs(z))) ** 2, (-mp.inf, mp.inf)
    if tag == "uniform":
        return lambda z: mp.mpf(1), (0, 1)
    if tag == "exponential":
        return lambda z: mp.exp(-z), (0, mp.inf)
    if tag == "gamma":
        k = mp.mpf(shape)
        return lambda z: z ** (k - 1) * mp.exp(-z) / mp.gamma(k), (0, mp.inf)
    if tag == "weibull":
        k = mp.mpf(shape)
        return lambda z: k * z ** (k - 1) * mp.exp(-(z**k)), (0, mp.inf)
    if tag == "rayleigh":
        return lambda z: z * mp.exp(-z * z / 2), (0, mp.inf)
    if tag == "studentt":
        nu = mp.mpf(shape)
        c = mp.gamma((nu + 1) / 2) / (mp.sqrt(nu * mp.pi) * mp.gamma(nu / 2))
        return lambda z: c * (1 + z * z / nu) ** (-(nu + 1) / 2), (-mp.inf, mp.inf)
    raise KeyError(tag)


def folded_mean(tag, shape, a, b):
    """E|a + b Z| with the integration range split at every kink."""
    f, (lo, hi) = pdf(tag, shape)
    if b == 0:
        return float(abs(a))
    cuts = {mp.mpf(0), -mp.mpf(a) / b}
    pts = [lo] + sorted(c for c in cuts if lo < c < hi) + [hi]
    return float(mp.quad(lambda z: abs(a + b * z) * f(z), pts))
