"""Hot numeric kernels, each in a numba loop form and a vectorised numpy form.

The ``*_nb`` functions are written as scalar loops and compiled with
``numba.njit``; the ``*_np`` functions do the same arithmetic with array
broadcasting.  Public dispatchers pick one according to
:data:`krein_gap._backend.BACKEND` or an explicit ``backend=`` argument.

Integrand families used by the built-in quadratures are identified by an
integer code plus a float64 parameter vector so the compiled quadrature never
calls back into Python:

``MONO``       ``scale * k**p / (1 + k**b)**c``  with params ``(scale, p, b, c)``
``TWO_POINT``  ``scale * k * m(k*x0) / (k**a * (1 + k**2)**b)`` with params
               ``(scale, x0, a, b)``, where ``m(u)`` is the mean over the
               circle of ``4 sin^2(u cos(theta) / 2)``.

``mode=1`` evaluates the tail-substituted integrand ``f(1/t) / t**2``.
"""

import math

import numpy as np

from ._backend import njit, resolve

MONO = 0
TWO_POINT = 1

EULER_GAMMA = 0.57721566490153286061

# Gauss-Kronrod 15/7 abscissae and weights (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

X15 = np.concatenate([-_XGK[:7], _XGK[7:], _XGK[6::-1]])
WK15 = np.concatenate([_WGK[:7], _WGK[7:], _WGK[6::-1]])
WG15 = np.zeros(15)
for _i in (1, 3, 5):
    WG15[_i] = _WG[_i // 2]
    WG15[14 - _i] = _WG[_i // 2]
WG15[7] = _WG[3]
del _i


# --------------------------------------------------------------------------
# angular mean of 4 sin^2(u cos(theta) / 2)
# --------------------------------------------------------------------------

@njit
def _node_count(u):
    return 4 * int(math.ceil((u + 12.0 * u ** (1.0 / 3.0) + 24.0) / 4.0))


def angular_nodes(u):
    """Trapezoid node count (a multiple of 4) that resolves the circle mean at ``u``."""
    return int(_node_count(abs(float(u))))


@njit
def angular_mean_nb(u):
    """Folded trapezoid per argument; arguments are visited in sorted order so
    the cosine table is rebuilt only when the node count changes."""
    au = np.abs(u)
    order = np.argsort(au)
    out = np.empty(u.size)
    table = np.empty(0)
    n_table = -1
    for idx in order:
        v = au[idx]
        n = _node_count(v)
        if n != n_table:
            # theta and pi - theta, theta and 2pi - theta share cos^2
            table = np.cos(2.0 * math.pi * np.arange(1, n // 4) / n)
            n_table = n
        half = 0.5 * v
        sv = math.sin(half)
        s = 8.0 * sv * sv
        acc = 0.0
        for c in table:
            t = math.sin(half * c)
            acc += t * t
        out[idx] = (s + 16.0 * acc) / n
    return out


def angular_mean_np(u, max_cells=1 << 22):
    u = np.abs(np.asarray(u, dtype=float))
    flat = u.ravel()
    out = np.empty_like(flat)
    if flat.size == 0:
        return out.reshape(u.shape)
    # sorted so each chunk's node count is set by its own largest u
    order = np.argsort(flat)
    rows = max(1, max_cells // angular_nodes(flat[order[-1]]))
    for start in range(0, flat.size, rows):
        idx = order[start:start + rows]
        n = angular_nodes(flat[idx[-1]])
        quarter = n // 4
        c = np.cos(2.0 * np.pi * np.arange(1, quarter) / n)
        uu = flat[idx]
        s = 8.0 * np.sin(0.5 * uu) ** 2
        s += 16.0 * (np.sin(0.5 * uu[:, None] * c[None, :]) ** 2).sum(axis=1)
        out[idx] = s / n
    return out.reshape(u.shape)


def angular_mean(u, backend=None):
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if resolve(backend) == "numba":
        return angular_mean_nb(u.ravel()).reshape(u.shape)
    return angular_mean_np(u)


# --------------------------------------------------------------------------
# integrand families
# --------------------------------------------------------------------------

def family_values_np(code, params, mode, x):
    x = np.asarray(x, dtype=float)
    if code == MONO:
        scale, p, b, c = params
        if mode == 0:
            return scale * x ** p / (1.0 + x ** b) ** c
        return scale * x ** (b * c - p - 2.0) / (1.0 + x ** b) ** c
    scale, x0, a, b = params
    k = x if mode == 0 else 1.0 / x
    v = scale * k * angular_mean_np(k * x0) / (k ** a * (1.0 + k * k) ** b)
    if mode == 1:
        v = v / (x * x)
    return v


@njit
def family_values_nb(code, params, mode, x):
    out = np.empty(x.size)
    if code == MONO:
        scale, p, b, c = params[0], params[1], params[2], params[3]
        e = p if mode == 0 else b * c - p - 2.0
        for i in range(x.size):
            out[i] = scale * x[i] ** e / (1.0 + x[i] ** b) ** c
        return out
    scale, x0, a, b = params[0], params[1], params[2], params[3]
    k = x if mode == 0 else 1.0 / x
    m = angular_mean_nb(k * x0)
    for i in range(x.size):
        v = scale * k[i] * m[i] / (k[i] ** a * (1.0 + k[i] * k[i]) ** b)
        out[i] = v if mode == 0 else v / (x[i] * x[i])
    return out


# --------------------------------------------------------------------------
# Gauss-Kronrod panel batches
# --------------------------------------------------------------------------

@njit
def gk15_family_nb(code, params, mode, a, b):
    n = a.size
    x = np.empty(n * 15)
    for i in range(n):
        c = 0.5 * (a[i] + b[i])
        h = 0.5 * (b[i] - a[i])
        for j in range(15):
            x[15 * i + j] = c + h * X15[j]
    vals = family_values_nb(code, params, mode, x)
    res = np.empty(n)
    err = np.empty(n)
    for i in range(n):
        h = 0.5 * (b[i] - a[i])
        rk = 0.0
        rg = 0.0
        for j in range(15):
            rk += WK15[j] * vals[15 * i + j]
            rg += WG15[j] * vals[15 * i + j]
        res[i] = rk * h
        err[i] = abs((rk - rg) * h)
    return res, err


def gk15_np(f, a, b):
    """Kronrod sums and |K15 - G7| for panels ``[a_i, b_i]`` of a vectorised ``f``."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    vals = np.asarray(f(c[:, None] + h[:, None] * X15[None, :]), dtype=float)
    rk = vals @ WK15
    rg = vals @ WG15
    return rk * h, np.abs(rk - rg) * h


# --------------------------------------------------------------------------
# modified Bessel function K0
# --------------------------------------------------------------------------

K0_SERIES_MAX = 2.0
K0_ASYMPTOTIC_MIN = 20.0
_TRAP_STEP = 0.125


@njit
def _k0_series_scalar(x):
    q = 0.25 * x * x
    term = 1.0
    i0 = 1.0
    harm = 0.0
    s = 0.0
    for k in range(1, 60):
        term *= q / (k * k)
        harm += 1.0 / k
        i0 += term
        s += term * harm
        if term < 1e-18 * i0:
            break
    return -(math.log(0.5 * x) + EULER_GAMMA) * i0 + s


@njit
def _k0_scaled_integral_scalar(x):
    # exp(x) K0(x) = int_0^inf exp(-x (cosh t - 1)) dt, trapezoid converges geometrically
    s = 0.5
    j = 1
    while True:
        v = math.exp(-x * (math.cosh(j * _TRAP_STEP) - 1.0))
        s += v
        if v < 1e-18 * s:
            break
        j += 1
    return _TRAP_STEP * s


@njit
def _k0_asymptotic_scaled_scalar(x):
    term = 1.0
    s = 1.0
    for k in range(1, 40):
        nxt = -term * (2 * k - 1) ** 2 / (8.0 * k * x)
        if abs(nxt) >= abs(term):
            break
        term = nxt
        s += term
        if abs(term) < 1e-17:
            break
    return math.sqrt(math.pi / (2.0 * x)) * s


@njit
def _k0_scalar(x):
    if x <= K0_SERIES_MAX:
        return _k0_series_scalar(x)
    if x <= K0_ASYMPTOTIC_MIN:
        return math.exp(-x) * _k0_scaled_integral_scalar(x)
    return math.exp(-x) * _k0_asymptotic_scaled_scalar(x)


@njit
def k0_nb(x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _k0_scalar(x[i])
    return out


@njit
def k0_series_nb(x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _k0_series_scalar(x[i])
    return out


@njit
def k0_large_nb(x):
    out = np.empty(x.size)
    for i in range(x.size):
        if x[i] <= K0_ASYMPTOTIC_MIN:
            out[i] = math.exp(-x[i]) * _k0_scaled_integral_scalar(x[i])
        else:
            out[i] = math.exp(-x[i]) * _k0_asymptotic_scaled_scalar(x[i])
    return out


def k0_series_np(x):
    x = np.asarray(x, dtype=float)
    q = 0.25 * x * x
    k = np.arange(1, 41, dtype=float)
    # term_k = q^k / (k!)^2, built as a cumulative product along the last axis
    terms = np.cumprod(q[..., None] / (k * k), axis=-1)
    harm = np.cumsum(1.0 / k)
    i0 = 1.0 + terms.sum(axis=-1)
    s = (terms * harm).sum(axis=-1)
    return -(np.log(0.5 * x) + EULER_GAMMA) * i0 + s


def k0_large_np(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    mid = x <= K0_ASYMPTOTIC_MIN
    if np.any(mid):
        xm = x[mid]
        t = _TRAP_STEP * np.arange(1, 400)
        # truncate where the integrand is far below double precision
        vals = np.exp(-xm[:, None] * (np.cosh(t)[None, :] - 1.0))
        out[mid] = np.exp(-xm) * _TRAP_STEP * (0.5 + vals.sum(axis=1))
    if np.any(~mid):
        xa = x[~mid]
        s = np.ones_like(xa)
        term = np.ones_like(xa)
        for k in range(1, 40):
            nxt = -term * (2 * k - 1) ** 2 / (8.0 * k * xa)
            # every x here is >= 20 so terms shrink past k=12; stop at double precision
            term = nxt
            s += term
            if np.all(np.abs(term) < 1e-17):
                break
        out[~mid] = np.exp(-xa) * np.sqrt(np.pi / (2.0 * xa)) * s
    return out


def k0_np(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= K0_SERIES_MAX
    if np.any(small):
        out[small] = k0_series_np(x[small])
    if np.any(~small):
        out[~small] = k0_large_np(x[~small])
    return out
