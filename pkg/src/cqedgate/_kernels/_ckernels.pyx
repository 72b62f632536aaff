# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: classical equilibrium solver and DP5(4) propagator."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, atan, sqrt, fabs, fmax, fmin, pow, INFINITY

cnp.import_array()

cdef int OK = 0
cdef int NOT_CONVERGED = 1
cdef int STEP_UNDERFLOW = 2
cdef int BAD_DETUNING = 3

cdef double SQRT2 = sqrt(2.0)


cdef int _eq_point(double phi_x, double phi_xp, double chi, double ej,
                   double el, double lam, double damping, double tol,
                   int max_iter, int newton_after, double* out) nogil:
    cdef double f = 0.0, pc = 0.0, res = INFINITY
    cdef double a, b, sa, ca, sb, cb, rf, rp, fn, pn
    cdef double j11, j12, j21, j22, det
    cdef int it
    for it in range(1, max_iter + 1):
        a = phi_x - f
        b = phi_x - f - phi_xp - chi * pc
        sa = sin(a); ca = cos(a)
        sb = sin(b); cb = cos(b)
        rf = el * f - ej * (sa + sb)
        rp = pc - lam * chi * sb
        if it <= newton_after:
            fn = f - rf / (el + ej * (ca + cb))
            pn = pc - rp / (1.0 + lam * chi * chi * cb)
            f = (1.0 - damping) * f + damping * fn
            pc = (1.0 - damping) * pc + damping * pn
        else:
            j11 = el + ej * (ca + cb)
            j12 = ej * chi * cb
            j21 = lam * chi * cb
            j22 = 1.0 + lam * chi * chi * cb
            det = j11 * j22 - j12 * j21
            f -= (j22 * rf - j12 * rp) / det
            pc -= (-j21 * rf + j11 * rp) / det
        a = phi_x - f
        b = phi_x - f - phi_xp - chi * pc
        res = fmax(fabs(f - ej * (sin(a) + sin(b)) / el),
                   fabs(pc - lam * chi * sin(b)))
        if res < tol:
            out[0] = f; out[1] = pc; out[2] = it; out[3] = res
            return OK
    out[0] = f; out[1] = pc; out[2] = max_iter; out[3] = res
    return NOT_CONVERGED


def solve_equilibrium(phi_x, phi_xp, double chi, double ej, double el,
                      double lam, double damping=0.5, double tol=1e-13,
                      int max_iter=200, int newton_after=50):
    """Classical equilibrium (f, phi_cl) for arrays of flux points.

    Returns arrays ``f, phi_cl, n_iter, residual, status``.
    """
    px = np.array(np.atleast_1d(phi_x), dtype=float).ravel()
    pp = np.array(np.broadcast_to(np.asarray(phi_xp, dtype=float), px.shape), dtype=float)
    cdef double[::1] vx = px
    cdef double[::1] vp = pp
    cdef Py_ssize_t n = vx.shape[0], i
    out_f = np.empty(n)
    out_p = np.empty(n)
    out_it = np.empty(n, dtype=np.int64)
    out_res = np.empty(n)
    out_st = np.empty(n, dtype=np.int64)
    cdef double[::1] of = out_f, op = out_p, ores = out_res
    cdef long long[::1] oit = out_it, ost = out_st
    cdef double buf[4]
    cdef int st
    with nogil:
        for i in range(n):
            st = _eq_point(vx[i], vp[i], chi, ej, el, lam, damping, tol,
                           max_iter, newton_after, buf)
            of[i] = buf[0]; op[i] = buf[1]
            oit[i] = <long long>buf[2]; ores[i] = buf[3]; ost[i] = st
    return out_f, out_p, out_it, out_res, out_st


DEF NY = 9

cdef double A_[7][6]
cdef double B5_[7]
cdef double E_[7]

A_[1][:] = [1.0 / 5, 0, 0, 0, 0, 0]
A_[2][:] = [3.0 / 40, 9.0 / 40, 0, 0, 0, 0]
A_[3][:] = [44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0]
A_[4][:] = [19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0]
A_[5][:] = [9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
            -5103.0 / 18656, 0]
A_[6][:] = [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
            11.0 / 84]
B5_[:] = [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
          11.0 / 84, 0.0]
E_[:] = [35.0 / 384 - 5179.0 / 57600, 0.0, 500.0 / 1113 - 7571.0 / 16695,
         125.0 / 192 - 393.0 / 640, -2187.0 / 6784 + 92097.0 / 339200,
         11.0 / 84 - 187.0 / 2100, -1.0 / 40]


cdef int _rhs(double* y, int sgn, double* p, double* dy) nogil:
    cdef double omega = p[0], g1 = p[1], eta2p = p[2], kappa = p[3]
    cdef double gamma = p[4], g2s = p[5], eps = p[6]
    cdef double d = y[0]
    cdef double big_delta = d + omega
    if big_delta <= 0.0:
        return BAD_DETUNING
    cdef double th = 0.5 * atan(-2.0 * g1 / big_delta)
    cdef double c = cos(th), s = sin(th)
    cdef double root = sqrt(big_delta * big_delta + 4.0 * g1 * g1)
    cdef double om1 = omega + 0.5 * (big_delta - root)
    cdef double om2 = omega + 0.5 * (big_delta + root)
    cdef double l1 = SQRT2 * c * c * s * eta2p
    cdef double l2 = -SQRT2 * c * c * c * eta2p
    cdef double shift = l1 * l1 / om1
    cdef double ea = -shift, eb = shift, ec = om2 - 2.0 * om1
    cdef double ga = 0.5 * kappa * c * c + gamma * s * s
    cdef double gb = kappa * c * c + 2.0 * gamma * s * s
    cdef double gc = 0.5 * kappa * s * s + gamma * c * c
    cdef double ar = y[1], ai = y[2], br = y[3], bi = y[4], cr = y[5], ci = y[6]
    dy[1] = -0.5 * ga * ar + ea * ai
    dy[2] = -0.5 * ga * ai - ea * ar
    dy[3] = -0.5 * gb * br + eb * bi + l2 * ci
    dy[4] = -0.5 * gb * bi - eb * br - l2 * cr
    dy[5] = -0.5 * gc * cr + ec * ci + l2 * bi
    dy[6] = -0.5 * gc * ci - ec * cr - l2 * br
    dy[7] = (br * dy[4] - bi * dy[3]) / (br * br + bi * bi)
    dy[8] = (ar * dy[2] - ai * dy[1]) / (ar * ar + ai * ai)
    cdef double q
    if sgn != 0:
        q = d * d + 4.0 * g2s * g2s
        dy[0] = sgn * eps * q * sqrt(q) / g2s
    else:
        dy[0] = 0.0
    return OK


def evolve_he(y0, durations, rate_signs, params, double rtol=1e-10,
              double atol=1e-12, double h_init=1e-4, double h_min=1e-14):
    """Adaptive DP5(4) propagation through piecewise schedule segments.

    Returns ``(y, n_steps, n_rejected, status)``.
    """
    cdef double y[NY]
    cdef double ynew[NY]
    cdef double ytmp[NY]
    cdef double k[7][NY]
    cdef double p[7]
    cdef Py_ssize_t j, m, st
    cdef int sgn, status
    cdef long n_acc = 0, n_rej = 0
    cdef double h = h_init, t, dur, err, e, sc, acc, fac
    cdef bint ok
    for j in range(NY):
        y[j] = y0[j]
    for j in range(7):
        p[j] = params[j]
    durs = [float(v) for v in durations]
    sgns = [int(v) for v in rate_signs]
    for seg in range(len(durs)):
        dur = durs[seg]
        sgn = sgns[seg]
        if dur <= 0.0:
            continue
        t = 0.0
        if _rhs(y, sgn, p, k[0]) != OK:
            return np.array([y[j] for j in range(NY)]), n_acc, n_rej, BAD_DETUNING
        while t < dur:
            if t + h > dur:
                h = dur - t
            ok = True
            for st in range(1, 7):
                for j in range(NY):
                    acc = 0.0
                    for m in range(st):
                        acc += A_[st][m] * k[m][j]
                    ytmp[j] = y[j] + h * acc
                if _rhs(ytmp, sgn, p, k[st]) != OK:
                    ok = False
                    break
            if not ok:
                h *= 0.25
                n_rej += 1
                if h < h_min:
                    return np.array([y[j] for j in range(NY)]), n_acc, n_rej, BAD_DETUNING
                continue
            err = 0.0
            for j in range(NY):
                acc = 0.0
                e = 0.0
                for m in range(7):
                    acc += B5_[m] * k[m][j]
                    e += E_[m] * k[m][j]
                ynew[j] = y[j] + h * acc
                sc = atol + rtol * fmax(fabs(y[j]), fabs(ynew[j]))
                err += (h * e / sc) * (h * e / sc)
            err = sqrt(err / NY)
            if err <= 1.0:
                t += h
                for j in range(NY):
                    y[j] = ynew[j]
                    k[0][j] = k[6][j]
                n_acc += 1
                if err == 0.0:
                    fac = 5.0
                else:
                    fac = fmin(5.0, fmax(0.2, 0.9 * pow(err, -0.2)))
            else:
                n_rej += 1
                fac = fmax(0.2, 0.9 * pow(err, -0.2))
            h *= fac
            if h < h_min:
                return np.array([y[j] for j in range(NY)]), n_acc, n_rej, STEP_UNDERFLOW
    return np.array([y[j] for j in range(NY)]), n_acc, n_rej, OK
