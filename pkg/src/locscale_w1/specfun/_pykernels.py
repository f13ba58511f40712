"""Pure-Python special-function kernels.

Reference implementation of every routine in ``_kernels.pyx``. The two
modules share algorithms line for line so that either can back
``locscale_w1.specfun``; results agree to a few ulp (libm differences).
"""

import math

import numpy as np

EPS = 2.220446049250313e-16
FPMIN = 1e-300
MAXIT = 10_000

# quantiles below this probability saturate to -inf
TAIL_LOW = 1e-300
TAIL_HIGH = 1.0 - 1e-16

SQRT1_2 = 0.7071067811865476


def ndtr(x):
    return 0.5 * math.erfc(-x * SQRT1_2)


def ndtri(p):
    """Standard normal quantile, Wichura AS241 (PPND16)."""
    if p < TAIL_LOW:
        return -math.inf
    if p > TAIL_HIGH:
        return math.inf
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        num = (((((((2.5090809287301226727e+3 * r +
                     3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r +
                     4.5921953931549871457e+4) * r +
                     1.3731693765509461125e+4) * r +
                     1.9715909503065514427e+3) * r +
                     1.3314166789178437745e+2) * r +
                     3.3871328727963666080e+0) * q
        den = (((((((5.2264952788528545610e+3 * r +
                     2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r +
                     2.1213794301586595867e+4) * r +
                     5.3941960214247511077e+3) * r +
                     6.8718700749205790830e+2) * r +
                     4.2313330701600911252e+1) * r +
                     1.0)
        return num / den
    r = p if q <= 0.0 else 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r -= 1.6
        num = (((((((7.7454501427834140764e-4 * r +
                     2.2723844989269184583e-2) * r +
                     2.4178072517745061177e-1) * r +
                     1.2704582524523683826e+0) * r +
                     3.6478483247632046050e+0) * r +
                     5.7694972214606914055e+0) * r +
                     4.6303378461565452959e+0) * r +
                     1.4234371107496835773e+0)
        den = (((((((1.0507500716444168432e-9 * r +
                     5.4759380849953449460e-4) * r +
                     1.5198666563616457197e-2) * r +
                     1.4810397642748007459e-1) * r +
                     6.8976733498510000455e-1) * r +
                     1.6763848301838038494e+0) * r +
                     2.0531916266377588219e+0) * r +
                     1.0)
    else:
        r -= 5.0
        num = (((((((2.0103343992922881327e-7 * r +
                     2.7115555687434875782e-5) * r +
                     1.2426609473880784386e-3) * r +
                     2.6532189526576123093e-2) * r +
                     2.9656057182850489123e-1) * r +
                     1.7848265399172913358e+0) * r +
                     5.4637849111641143699e+0) * r +
                     6.6579046435011037772e+0)
        den = (((((((2.0442631033899397856e-15 * r +
                     1.4215117583164458887e-7) * r +
                     1.8463183175100546818e-5) * r +
                     7.8686913114561325910e-4) * r +
                     1.4875361290850614853e-2) * r +
                     1.3692988092273580531e-1) * r +
                     5.9983220655588793769e-1) * r +
                     1.0)
    x = num / den
    return -x if q < 0.0 else x


# -- incomplete gamma ---------------------------------------------------------

def gamma_pq(a, x):
    """Return (P(a, x), Q(a, x)), each computed directly where it is small."""
    if x <= 0.0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    lnpre = a * math.log(x) - x - math.lgamma(a)
    if x < a + 1.0:
        ap = a
        d = 1.0 / a
        s = d
        for _ in range(MAXIT):
            ap += 1.0
            d *= x / ap
            s += d
            if abs(d) < abs(s) * EPS:
                break
        p = s * math.exp(lnpre)
        return p, 1.0 - p
    # modified Lentz continued fraction for Q
    b = x + 1.0 - a
    c = 1.0 / FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, MAXIT):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    q = math.exp(lnpre) * h
    return 1.0 - q, q


def gammainc(a, x):
    return gamma_pq(a, x)[0]


def gammaincc(a, x):
    return gamma_pq(a, x)[1]


def _gamma_guess(a, t, upper):
    if t < 1e-5:
        if upper:
            # Q ~ x^(a-1) e^-x / Gamma(a)
            x = -math.log(t) - math.lgamma(a)
            for _ in range(3):
                x = -math.log(t) - math.lgamma(a) + (a - 1.0) * math.log(max(x, 1.0))
            return max(x, 1e-3)
        # P ~ x^a / Gamma(a + 1)
        return math.exp((math.log(t) + math.lgamma(a + 1.0)) / a)
    if a > 1.0:
        z = -ndtri(t) if upper else ndtri(t)
        w = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * math.sqrt(a))
        return max(1e-3 * a, a * w * w * w)
    c = 1.0 - a * (0.253 + a * 0.12)
    p = 1.0 - t if upper else t
    if p < c:
        return (p / c) ** (1.0 / a)
    q = t if upper else 1.0 - t
    return 1.0 - math.log(q / (1.0 - c))


def gamma_root(a, t, upper):
    """Solve P(a, x) = t (or Q(a, x) = t when ``upper``) for x >= 0.

    Halley steps inside a maintained bracket, bisecting whenever a step
    leaves it.
    """
    if t <= 0.0:
        return math.inf if upper else 0.0
    if t >= 1.0:
        return 0.0 if upper else math.inf
    lga = math.lgamma(a)
    x = _gamma_guess(a, t, upper)
    if x <= 0.0:
        # root lies below the smallest positive double
        return 0.0
    lo = 0.0
    hi = math.inf
    g_prev = math.inf
    for _ in range(200):
        p, q = gamma_pq(a, x)
        # g is increasing in x for both tails
        g = (t - q) if upper else (p - t)
        if abs(g) <= 1e-15 * t:
            return x
        if g < 0.0:
            lo = x
        else:
            hi = x
        ld = (a - 1.0) * math.log(x) - x - lga
        if -745.0 < ld < 709.0:
            step = g / math.exp(ld)
        else:
            # density out of double range (subnormal x): take the step in logs
            step = math.copysign(math.exp(math.log(abs(g)) - ld), g)
        xn = math.nan
        corr = 1.0 - 0.5 * (step / x * (a - 1.0) - step)
        if corr > 0.0:
            step /= corr
        if abs(step) <= 4.0 * EPS * x:
            return x - step
        if abs(g) <= 0.5 * abs(g_prev):
            xn = x - step
        elif abs(step) <= 1e-11 * x:
            # residual is at the rounding floor of the prefactor
            return x
        g_prev = g
        if not (lo < xn < hi):
            if math.isinf(hi):
                xn = 2.0 * x
            else:
                xn = 0.25 * hi if lo == 0.0 else math.sqrt(lo) * math.sqrt(hi)
        if xn <= 0.0:
            return 0.0
        if abs(xn - x) <= 2.0 * EPS * xn or (hi < math.inf and hi - lo <= 2.0 * EPS * hi):
            return xn
        x = xn
    return x


def gammainc_inv(a, p):
    return gamma_root(a, p, False)


def gammaincc_inv(a, q):
    return gamma_root(a, q, True)


# -- incomplete beta ----------------------------------------------------------

def _lbeta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _betacf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, MAXIT):
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if abs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            break
    return h


def beta_pq(a, b, x, y):
    """Return (I_x(a, b), 1 - I_x(a, b)) given x and y = 1 - x exactly."""
    if x <= 0.0:
        return 0.0, 1.0
    if y <= 0.0:
        return 1.0, 0.0
    lnfront = a * math.log(x) + b * math.log(y) - _lbeta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        p = math.exp(lnfront) * _betacf(a, b, x) / a
        return p, 1.0 - p
    q = math.exp(lnfront) * _betacf(b, a, y) / b
    return 1.0 - q, q


def betainc(a, b, x):
    return beta_pq(a, b, x, 1.0 - x)[0]


def _beta_guess(a, b, p):
    if p < 1e-8:
        # I_x ~ x^a / (a B(a, b)) near zero
        return math.exp((math.log(p) + math.log(a) + _lbeta(a, b)) / a)
    if a >= 1.0 and b >= 1.0:
        pp = p if p < 0.5 else 1.0 - p
        t = math.sqrt(-2.0 * math.log(pp))
        x = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t
        if p < 0.5:
            x = -x
        al = (x * x - 3.0) / 6.0
        h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0))
        w = (x * math.sqrt(al + h) / h
             - (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0))
             * (al + 5.0 / 6.0 - 2.0 / (3.0 * h)))
        return a / (a + b * math.exp(2.0 * w))
    lna = math.log(a / (a + b))
    lnb = math.log(b / (a + b))
    t = math.exp(a * lna) / a
    u = math.exp(b * lnb) / b
    w = t + u
    if p < t / w:
        return (a * w * p) ** (1.0 / a)
    return 1.0 - (b * w * (1.0 - p)) ** (1.0 / b)


def betainc_inv(a, b, p):
    """Solve I_x(a, b) = p for x in [0, 1]."""
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    if p > beta_pq(a, b, 0.5, 0.5)[0]:
        # root above 1/2: solve 1 - I_y(b, a) = p for y = 1 - x, so relative
        # tests see the small side of x while p keeps its own precision
        return 1.0 - _beta_root(b, a, p, True)
    return _beta_root(a, b, p, False)


def _beta_root(a, b, t, upper):
    """Solve I_x(a, b) = t (or 1 - I_x(a, b) = t when ``upper``) for x in (0, 1/2]."""
    lbab = _lbeta(a, b)
    x = _beta_guess(a, b, 1.0 - t if upper else t)
    if x <= 0.0:
        # root lies below the smallest positive double
        return 0.0
    if not x < 0.5:
        x = 0.5
    lo = 0.0
    hi = 0.5
    g_prev = math.inf
    for _ in range(200):
        p, q = beta_pq(a, b, x, 1.0 - x)
        # g is increasing in x either way
        g = (t - q) if upper else (p - t)
        if abs(g) <= 1e-15 * t:
            return x
        if g < 0.0:
            lo = x
        else:
            hi = x
        ld = (a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x) - lbab
        if -745.0 < ld < 709.0:
            step = g / math.exp(ld)
        else:
            # density out of double range (subnormal x): take the step in logs
            step = math.copysign(math.exp(math.log(abs(g)) - ld), g)
        xn = math.nan
        corr = 1.0 - 0.5 * (step / x * (a - 1.0) - step * (b - 1.0) / (1.0 - x))
        if corr > 0.0:
            step /= corr
        if abs(step) <= 4.0 * EPS * x:
            return x - step
        if abs(g) <= 0.5 * abs(g_prev):
            xn = x - step
        elif abs(step) <= 1e-11 * x:
            # residual is at the rounding floor of the prefactor
            return x
        g_prev = g
        if not (lo < xn < hi):
            if lo == 0.0:
                xn = 0.25 * hi
            elif hi < 0.5:
                xn = math.sqrt(lo) * math.sqrt(hi)
            else:
                xn = 0.5 * (lo + hi)
        if xn <= 0.0:
            return 0.0
        if abs(xn - x) <= 2.0 * EPS * xn or hi - lo <= 2.0 * EPS * hi:
            return xn
        x = xn
    return x


# -- Student's t --------------------------------------------------------------

def t_cdf(nu, t):
    if t == 0.0:
        return 0.5
    if math.isinf(t):
        return 0.0 if t < 0.0 else 1.0
    t2 = t * t
    x = nu / (nu + t2)
    y = t2 / (nu + t2)
    tail = 0.5 * beta_pq(0.5 * nu, 0.5, x, y)[0]
    return tail if t < 0.0 else 1.0 - tail


def t_ppf(nu, q):
    if q == 0.5:
        return 0.0
    if q > 0.5:
        return -t_ppf(nu, 1.0 - q)
    p = 2.0 * q
    if p < 0.5:
        x = betainc_inv(0.5 * nu, 0.5, p)
        if x <= 0.0:
            # x underflows; take log x from I_x ~ x^a / (a B(a, 1/2))
            a = 0.5 * nu
            logx = (math.log(p) + math.log(a) + _lbeta(a, 0.5)) / a
            lt = 0.5 * (math.log(nu) - logx)
            return -math.exp(lt) if lt < 709.0 else -math.inf
        return -math.sqrt(nu * (1.0 - x) / x)
    y = betainc_inv(0.5, 0.5 * nu, 1.0 - p)
    return -math.sqrt(nu * y / (1.0 - y))


# -- array wrappers -----------------------------------------------------------

def _poly(coefs, r):
    acc = np.full_like(r, coefs[0])
    for c in coefs[1:]:
        acc = acc * r + c
    return acc


_CENTRAL_NUM = (2.5090809287301226727e+3, 3.3430575583588128105e+4,
                6.7265770927008700853e+4, 4.5921953931549871457e+4,
                1.3731693765509461125e+4, 1.9715909503065514427e+3,
                1.3314166789178437745e+2, 3.3871328727963666080e+0)
_CENTRAL_DEN = (5.2264952788528545610e+3, 2.8729085735721942674e+4,
                3.9307895800092710610e+4, 2.1213794301586595867e+4,
                5.3941960214247511077e+3, 6.8718700749205790830e+2,
                4.2313330701600911252e+1, 1.0)
_MID_NUM = (7.7454501427834140764e-4, 2.2723844989269184583e-2,
            2.4178072517745061177e-1, 1.2704582524523683826e+0,
            3.6478483247632046050e+0, 5.7694972214606914055e+0,
            4.6303378461565452959e+0, 1.4234371107496835773e+0)
_MID_DEN = (1.0507500716444168432e-9, 5.4759380849953449460e-4,
            1.5198666563616457197e-2, 1.4810397642748007459e-1,
            6.8976733498510000455e-1, 1.6763848301838038494e+0,
            2.0531916266377588219e+0, 1.0)
_FAR_NUM = (2.0103343992922881327e-7, 2.7115555687434875782e-5,
            1.2426609473880784386e-3, 2.6532189526576123093e-2,
            2.9656057182850489123e-1, 1.7848265399172913358e+0,
            5.4637849111641143699e+0, 6.6579046435011037772e+0)
_FAR_DEN = (2.0442631033899397856e-15, 1.4215117583164458887e-7,
            1.8463183175100546818e-5, 7.8686913114561325910e-4,
            1.4875361290850614853e-2, 1.3692988092273580531e-1,
            5.9983220655588793769e-1, 1.0)


def ndtri_vec(p):
    """Vectorised :func:`ndtri`; same polynomials, evaluated branch-wise with numpy."""
    p = np.asarray(p, dtype=np.float64)
    flat = p.reshape(-1)
    out = np.empty_like(flat)
    q = flat - 0.5
    central = np.abs(q) <= 0.425
    if central.any():
        qc = q[central]
        r = 0.180625 - qc * qc
        out[central] = qc * _poly(_CENTRAL_NUM, r) / _poly(_CENTRAL_DEN, r)
    tail = ~central
    if tail.any():
        pt = flat[tail]
        qt = q[tail]
        # p = 0 gives inf/inf here; saturated entries are overwritten below
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.sqrt(-np.log(np.where(qt <= 0.0, pt, 1.0 - pt)))
            x = np.empty_like(r)
            mid = r <= 5.0
            rm = r[mid] - 1.6
            x[mid] = _poly(_MID_NUM, rm) / _poly(_MID_DEN, rm)
            rf = r[~mid] - 5.0
            x[~mid] = _poly(_FAR_NUM, rf) / _poly(_FAR_DEN, rf)
        out[tail] = np.where(qt < 0.0, -x, x)
    out[flat < TAIL_LOW] = -math.inf
    out[flat > TAIL_HIGH] = math.inf
    return out.reshape(p.shape)


def ndtr_vec(x):
    x = np.asarray(x, dtype=np.float64)
    return np.array([ndtr(v) for v in x.ravel()]).reshape(x.shape)


def gamma_ppf_vec(a, q, upper):
    q = np.asarray(q, dtype=np.float64)
    return np.array([gamma_root(a, v, upper) for v in q.ravel()]).reshape(q.shape)


def t_ppf_vec(nu, q):
    q = np.asarray(q, dtype=np.float64)
    return np.array([t_ppf(nu, v) for v in q.ravel()]).reshape(q.shape)
