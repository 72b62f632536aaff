"""Pure-Python reference implementation of the numerical kernels.

Mirrors ``_ckernels.pyx`` line for line; used when the compiled extension
is unavailable and as the comparison baseline in the benchmark.
"""
import math

import numpy as np

SQRT2 = math.sqrt(2.0)

# status codes shared with the compiled kernels
OK = 0
NOT_CONVERGED = 1
STEP_UNDERFLOW = 2
BAD_DETUNING = 3


def _equilibrium_point(phi_x, phi_xp, chi, ej, el, lam, damping, tol,
                       max_iter, newton_after):
    f = 0.0
    pc = 0.0
    res = math.inf
    for it in range(1, max_iter + 1):
        a = phi_x - f
        b = phi_x - f - phi_xp - chi * pc
        sa, ca = math.sin(a), math.cos(a)
        sb, cb = math.sin(b), math.cos(b)
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
        res = max(abs(f - ej * (math.sin(a) + math.sin(b)) / el),
                  abs(pc - lam * chi * math.sin(b)))
        if res < tol:
            return f, pc, it, res, OK
    return f, pc, max_iter, res, NOT_CONVERGED


def solve_equilibrium(phi_x, phi_xp, chi, ej, el, lam, damping=0.5,
                      tol=1e-13, max_iter=200, newton_after=50):
    """Classical equilibrium (f, phi_cl) for arrays of flux points.

    Returns arrays ``f, phi_cl, n_iter, residual, status``.
    """
    phi_x = np.atleast_1d(np.asarray(phi_x, dtype=float))
    phi_xp = np.broadcast_to(np.asarray(phi_xp, dtype=float), phi_x.shape)
    n = phi_x.size
    out_f = np.empty(n)
    out_p = np.empty(n)
    out_it = np.empty(n, dtype=np.int64)
    out_res = np.empty(n)
    out_st = np.empty(n, dtype=np.int64)
    for i in range(n):
        (out_f[i], out_p[i], out_it[i], out_res[i],
         out_st[i]) = _equilibrium_point(
            float(phi_x.flat[i]), float(phi_xp.flat[i]), chi, ej, el, lam,
            damping, tol, max_iter, newton_after)
    return out_f, out_p, out_it, out_res, out_st


# Dormand-Prince 5(4) tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
       187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

NY = 9  # delta, Re/Im of a, b, c, arg(b), arg(a)


def he_rhs(y, rate_sign, p):
    """Time derivative of the effective-Hamiltonian state.

    ``p = (omega, g1, eta2p, kappa, gamma, g2_sched, eps)`` in rad/ns.
    Returns ``None`` when the detuning leaves the Delta > 0 branch.
    """
    omega, g1, eta2p, kappa, gamma, g2s, eps = p
    d = y[0]
    big_delta = d + omega
    if big_delta <= 0.0:
        return None
    th = 0.5 * math.atan(-2.0 * g1 / big_delta)
    c = math.cos(th)
    s = math.sin(th)
    root = math.sqrt(big_delta * big_delta + 4.0 * g1 * g1)
    om1 = omega + 0.5 * (big_delta - root)
    om2 = omega + 0.5 * (big_delta + root)
    l1 = SQRT2 * c * c * s * eta2p
    l2 = -SQRT2 * c * c * c * eta2p
    shift = l1 * l1 / om1
    ea = -shift
    eb = shift
    ec = om2 - 2.0 * om1
    ga = 0.5 * kappa * c * c + gamma * s * s
    gb = kappa * c * c + 2.0 * gamma * s * s
    gc = 0.5 * kappa * s * s + gamma * c * c

    ar, ai, br, bi, cr, ci = y[1], y[2], y[3], y[4], y[5], y[6]
    # (-i E - G/2) z
    dar = -0.5 * ga * ar + ea * ai
    dai = -0.5 * ga * ai - ea * ar
    dbr = -0.5 * gb * br + eb * bi + l2 * ci
    dbi = -0.5 * gb * bi - eb * br - l2 * cr
    dcr = -0.5 * gc * cr + ec * ci + l2 * bi
    dci = -0.5 * gc * ci - ec * cr - l2 * br
    nb = br * br + bi * bi
    na = ar * ar + ai * ai
    dargb = (br * dbi - bi * dbr) / nb
    darga = (ar * dai - ai * dar) / na
    if rate_sign != 0:
        q = d * d + 4.0 * g2s * g2s
        dd = rate_sign * eps * q * math.sqrt(q) / g2s
    else:
        dd = 0.0
    return (dd, dar, dai, dbr, dbi, dcr, dci, dargb, darga)


def evolve_he(y0, durations, rate_signs, params, rtol=1e-10, atol=1e-12,
              h_init=1e-4, h_min=1e-14):
    """Adaptive DP5(4) propagation through piecewise schedule segments.

    Returns ``(y, n_steps, n_rejected, status)``.
    """
    y = [float(v) for v in y0]
    p = tuple(float(v) for v in params)
    n_acc = 0
    n_rej = 0
    h = h_init
    for dur, sgn in zip(durations, rate_signs):
        sgn = int(sgn)
        t = 0.0
        dur = float(dur)
        if dur <= 0.0:
            continue
        k1 = he_rhs(y, sgn, p)
        if k1 is None:
            return np.array(y), n_acc, n_rej, BAD_DETUNING
        while t < dur:
            if t + h > dur:
                h = dur - t
            ks = [k1]
            ok = True
            for st in range(1, 7):
                ytmp = [y[j] + h * sum(_A[st][m] * ks[m][j] for m in range(st))
                        for j in range(NY)]
                k = he_rhs(ytmp, sgn, p)
                if k is None:
                    ok = False
                    break
                ks.append(k)
            if not ok:
                h *= 0.25
                n_rej += 1
                if h < h_min:
                    return np.array(y), n_acc, n_rej, BAD_DETUNING
                continue
            ynew = [y[j] + h * sum(_B5[m] * ks[m][j] for m in range(7))
                    for j in range(NY)]
            err = 0.0
            for j in range(NY):
                e = h * sum(_E[m] * ks[m][j] for m in range(7))
                sc = atol + rtol * max(abs(y[j]), abs(ynew[j]))
                err += (e / sc) ** 2
            err = math.sqrt(err / NY)
            if err <= 1.0:
                t += h
                y = ynew
                k1 = ks[6]
                n_acc += 1
                fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            else:
                n_rej += 1
                fac = max(0.2, 0.9 * err ** -0.2)
            h *= fac
            if h < h_min:
                return np.array(y), n_acc, n_rej, STEP_UNDERFLOW
    return np.array(y), n_acc, n_rej, OK
