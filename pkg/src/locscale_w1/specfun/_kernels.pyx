# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled special-function kernels.

Line-for-line port of ``_pykernels``; see that module for commentary.
"""

from libc.math cimport copysign, erfc, exp, fabs, isinf, lgamma, log, log1p, pow, sqrt, INFINITY, NAN

import numpy as np

cdef double EPS = 2.220446049250313e-16
cdef double FPMIN = 1e-300
cdef int MAXIT = 10000
cdef double TAIL_LOW = 1e-300
cdef double TAIL_HIGH = 1.0 - 1e-16
cdef double SQRT1_2 = 0.7071067811865476


cdef inline double _ndtr(double x) noexcept nogil:
    return 0.5 * erfc(-x * SQRT1_2)


cdef double _ndtri(double p) noexcept nogil:
    cdef double q, r, num, den, x
    if p < TAIL_LOW:
        return -INFINITY
    if p > TAIL_HIGH:
        return INFINITY
    q = p - 0.5
    if fabs(q) <= 0.425:
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
    r = sqrt(-log(r))
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

cdef void _gamma_pq(double a, double x, double* p, double* q) noexcept nogil:
    cdef double lnpre, ap, d, s, b, c, h, an, delta
    cdef int i
    if x <= 0.0:
        p[0] = 0.0
        q[0] = 1.0
        return
    if isinf(x):
        p[0] = 1.0
        q[0] = 0.0
        return
    lnpre = a * log(x) - x - lgamma(a)
    if x < a + 1.0:
        ap = a
        d = 1.0 / a
        s = d
        for i in range(MAXIT):
            ap += 1.0
            d *= x / ap
            s += d
            if fabs(d) < fabs(s) * EPS:
                break
        p[0] = s * exp(lnpre)
        q[0] = 1.0 - p[0]
        return
    b = x + 1.0 - a
    c = 1.0 / FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, MAXIT):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if fabs(d) < FPMIN:
            d = FPMIN
        c = b + an / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < EPS:
            break
    q[0] = exp(lnpre) * h
    p[0] = 1.0 - q[0]


cdef double _gamma_guess(double a, double t, bint upper) noexcept nogil:
    cdef double x, z, w, c, pp, qq
    cdef int i
    if t < 1e-5:
        if upper:
            x = -log(t) - lgamma(a)
            for i in range(3):
                x = -log(t) - lgamma(a) + (a - 1.0) * log(x if x > 1.0 else 1.0)
            return x if x > 1e-3 else 1e-3
        return exp((log(t) + lgamma(a + 1.0)) / a)
    if a > 1.0:
        z = -_ndtri(t) if upper else _ndtri(t)
        w = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * sqrt(a))
        x = a * w * w * w
        return x if x > 1e-3 * a else 1e-3 * a
    c = 1.0 - a * (0.253 + a * 0.12)
    pp = 1.0 - t if upper else t
    if pp < c:
        return pow(pp / c, 1.0 / a)
    qq = t if upper else 1.0 - t
    return 1.0 - log(qq / (1.0 - c))


cdef double _gamma_root(double a, double t, bint upper) noexcept nogil:
    cdef double lga, x, lo, hi, g_prev, p, q, g, ld, xn, step, corr
    cdef int it
    if t <= 0.0:
        return INFINITY if upper else 0.0
    if t >= 1.0:
        return 0.0 if upper else INFINITY
    lga = lgamma(a)
    x = _gamma_guess(a, t, upper)
    if x <= 0.0:
        return 0.0
    lo = 0.0
    hi = INFINITY
    g_prev = INFINITY
    for it in range(200):
        _gamma_pq(a, x, &p, &q)
        g = (t - q) if upper else (p - t)
        if fabs(g) <= 1e-15 * t:
            return x
        if g < 0.0:
            lo = x
        else:
            hi = x
        ld = (a - 1.0) * log(x) - x - lga
        if -745.0 < ld < 709.0:
            step = g / exp(ld)
        else:
            step = copysign(exp(log(fabs(g)) - ld), g)
        xn = NAN
        corr = 1.0 - 0.5 * (step / x * (a - 1.0) - step)
        if corr > 0.0:
            step /= corr
        if fabs(step) <= 4.0 * EPS * x:
            return x - step
        if fabs(g) <= 0.5 * fabs(g_prev):
            xn = x - step
        elif fabs(step) <= 1e-11 * x:
            return x
        g_prev = g
        if not (lo < xn < hi):
            if isinf(hi):
                xn = 2.0 * x
            elif lo == 0.0:
                xn = 0.25 * hi
            else:
                xn = sqrt(lo) * sqrt(hi)
        if xn <= 0.0:
            return 0.0
        if fabs(xn - x) <= 2.0 * EPS * xn or (not isinf(hi) and hi - lo <= 2.0 * EPS * hi):
            return xn
        x = xn
    return x


# -- incomplete beta ----------------------------------------------------------

cdef inline double _lbeta(double a, double b) noexcept nogil:
    return lgamma(a) + lgamma(b) - lgamma(a + b)


cdef double _betacf(double a, double b, double x) noexcept nogil:
    cdef double qab = a + b, qap = a + 1.0, qam = a - 1.0
    cdef double c = 1.0, d, h, aa, m2, delta
    cdef int m
    d = 1.0 - qab * x / qap
    if fabs(d) < FPMIN:
        d = FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, MAXIT):
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if fabs(d) < FPMIN:
            d = FPMIN
        c = 1.0 + aa / c
        if fabs(c) < FPMIN:
            c = FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if fabs(delta - 1.0) < EPS:
            break
    return h


cdef void _beta_pq(double a, double b, double x, double y, double* p, double* q) noexcept nogil:
    cdef double lnfront
    if x <= 0.0:
        p[0] = 0.0
        q[0] = 1.0
        return
    if y <= 0.0:
        p[0] = 1.0
        q[0] = 0.0
        return
    lnfront = a * log(x) + b * log(y) - _lbeta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        p[0] = exp(lnfront) * _betacf(a, b, x) / a
        q[0] = 1.0 - p[0]
    else:
        q[0] = exp(lnfront) * _betacf(b, a, y) / b
        p[0] = 1.0 - q[0]


cdef double _beta_guess(double a, double b, double p) noexcept nogil:
    cdef double pp, t, x, al, h, w, lna, lnb, u
    if p < 1e-8:
        return exp((log(p) + log(a) + _lbeta(a, b)) / a)
    if a >= 1.0 and b >= 1.0:
        pp = p if p < 0.5 else 1.0 - p
        t = sqrt(-2.0 * log(pp))
        x = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t
        if p < 0.5:
            x = -x
        al = (x * x - 3.0) / 6.0
        h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0))
        w = (x * sqrt(al + h) / h
             - (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0))
             * (al + 5.0 / 6.0 - 2.0 / (3.0 * h)))
        return a / (a + b * exp(2.0 * w))
    lna = log(a / (a + b))
    lnb = log(b / (a + b))
    t = exp(a * lna) / a
    u = exp(b * lnb) / b
    w = t + u
    if p < t / w:
        return pow(a * w * p, 1.0 / a)
    return 1.0 - pow(b * w * (1.0 - p), 1.0 / b)


cdef double _betainc_inv(double a, double b, double p) noexcept nogil:
    cdef double pm, qm
    if p <= 0.0:
        return 0.0
    if p >= 1.0:
        return 1.0
    _beta_pq(a, b, 0.5, 0.5, &pm, &qm)
    if p > pm:
        return 1.0 - _beta_root(b, a, p, True)
    return _beta_root(a, b, p, False)


cdef double _beta_root(double a, double b, double t, bint upper) noexcept nogil:
    cdef double lbab, x, lo, hi, g_prev, g, pq, qq, ld, xn, step, corr
    cdef int it
    lbab = _lbeta(a, b)
    x = _beta_guess(a, b, 1.0 - t if upper else t)
    if x <= 0.0:
        return 0.0
    if not x < 0.5:
        x = 0.5
    lo = 0.0
    hi = 0.5
    g_prev = INFINITY
    for it in range(200):
        _beta_pq(a, b, x, 1.0 - x, &pq, &qq)
        g = (t - qq) if upper else (pq - t)
        if fabs(g) <= 1e-15 * t:
            return x
        if g < 0.0:
            lo = x
        else:
            hi = x
        ld = (a - 1.0) * log(x) + (b - 1.0) * log1p(-x) - lbab
        if -745.0 < ld < 709.0:
            step = g / exp(ld)
        else:
            step = copysign(exp(log(fabs(g)) - ld), g)
        xn = NAN
        corr = 1.0 - 0.5 * (step / x * (a - 1.0) - step * (b - 1.0) / (1.0 - x))
        if corr > 0.0:
            step /= corr
        if fabs(step) <= 4.0 * EPS * x:
            return x - step
        if fabs(g) <= 0.5 * fabs(g_prev):
            xn = x - step
        elif fabs(step) <= 1e-11 * x:
            return x
        g_prev = g
        if not (lo < xn < hi):
            if lo == 0.0:
                xn = 0.25 * hi
            elif hi < 0.5:
                xn = sqrt(lo) * sqrt(hi)
            else:
                xn = 0.5 * (lo + hi)
        if xn <= 0.0:
            return 0.0
        if fabs(xn - x) <= 2.0 * EPS * xn or hi - lo <= 2.0 * EPS * hi:
            return xn
        x = xn
    return x


# -- Student's t --------------------------------------------------------------

cdef double _t_cdf(double nu, double t) noexcept nogil:
    cdef double t2, x, y, tail, qq
    if t == 0.0:
        return 0.5
    if isinf(t):
        return 0.0 if t < 0.0 else 1.0
    t2 = t * t
    x = nu / (nu + t2)
    y = t2 / (nu + t2)
    _beta_pq(0.5 * nu, 0.5, x, y, &tail, &qq)
    tail *= 0.5
    return tail if t < 0.0 else 1.0 - tail


cdef double _t_ppf(double nu, double q) noexcept nogil:
    cdef double p, x, y, a, logx, lt
    if q == 0.5:
        return 0.0
    if q > 0.5:
        return -_t_ppf(nu, 1.0 - q)
    p = 2.0 * q
    if p < 0.5:
        x = _betainc_inv(0.5 * nu, 0.5, p)
        if x <= 0.0:
            a = 0.5 * nu
            logx = (log(p) + log(a) + _lbeta(a, 0.5)) / a
            lt = 0.5 * (log(nu) - logx)
            return -exp(lt) if lt < 709.0 else -INFINITY
        return -sqrt(nu * (1.0 - x) / x)
    y = _betainc_inv(0.5, 0.5 * nu, 1.0 - p)
    return -sqrt(nu * y / (1.0 - y))


# -- Python-visible scalar API ------------------------------------------------

def ndtr(double x):
    return _ndtr(x)


def ndtri(double p):
    return _ndtri(p)


def gamma_pq(double a, double x):
    cdef double p, q
    _gamma_pq(a, x, &p, &q)
    return p, q


def gammainc(double a, double x):
    cdef double p, q
    _gamma_pq(a, x, &p, &q)
    return p


def gammaincc(double a, double x):
    cdef double p, q
    _gamma_pq(a, x, &p, &q)
    return q


def gamma_root(double a, double t, bint upper):
    return _gamma_root(a, t, upper)


def gammainc_inv(double a, double p):
    return _gamma_root(a, p, False)


def gammaincc_inv(double a, double q):
    return _gamma_root(a, q, True)


def beta_pq(double a, double b, double x, double y):
    cdef double p, q
    _beta_pq(a, b, x, y, &p, &q)
    return p, q


def betainc(double a, double b, double x):
    cdef double p, q
    _beta_pq(a, b, x, 1.0 - x, &p, &q)
    return p


def betainc_inv(double a, double b, double p):
    return _betainc_inv(a, b, p)


def t_cdf(double nu, double t):
    return _t_cdf(nu, t)


def t_ppf(double nu, double q):
    return _t_ppf(nu, q)


# -- array API ----------------------------------------------------------------

def ndtri_vec(p):
    arr = np.ascontiguousarray(p, dtype=np.float64)
    out = np.empty_like(arr)
    cdef double[::1] src = arr.reshape(-1)
    cdef double[::1] dst = out.reshape(-1)
    cdef Py_ssize_t i
    with nogil:
        for i in range(src.shape[0]):
            dst[i] = _ndtri(src[i])
    return out


def ndtr_vec(x):
    arr = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty_like(arr)
    cdef double[::1] src = arr.reshape(-1)
    cdef double[::1] dst = out.reshape(-1)
    cdef Py_ssize_t i
    with nogil:
        for i in range(src.shape[0]):
            dst[i] = _ndtr(src[i])
    return out


def gamma_ppf_vec(double a, q, bint upper):
    arr = np.ascontiguousarray(q, dtype=np.float64)
    out = np.empty_like(arr)
    cdef double[::1] src = arr.reshape(-1)
    cdef double[::1] dst = out.reshape(-1)
    cdef Py_ssize_t i
    with nogil:
        for i in range(src.shape[0]):
            dst[i] = _gamma_root(a, src[i], upper)
    return out


def t_ppf_vec(double nu, q):
    arr = np.ascontiguousarray(q, dtype=np.float64)
    out = np.empty_like(arr)
    cdef double[::1] src = arr.reshape(-1)
    cdef double[::1] dst = out.reshape(-1)
    cdef Py_ssize_t i
    with nogil:
        for i in range(src.shape[0]):
            dst[i] = _t_ppf(nu, src[i])
    return out
