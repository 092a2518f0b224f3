"""Elliptic newform data for the Saito-Kurokawa sources of chi10 and chi12.

Writes data/g18.txt and data/g22.txt: q-expansion to n = 200, Petersson norm
int_{SL2(Z)\\H} |g|^2 y^w dx dy / y^2, L(g, k) and the central value
L(g x chi_D, k - 1) for D = -4, where w = 2k - 2.  Each L-value is the
smoothed functional-equation sum evaluated at two split points.
"""
import os
import sys

from mpmath import mp, mpf, quad, gammainc, gamma, exp, pi, sqrt, cos, sin, inf

mp.dps = 30
NMAX = 200


def eisenstein(k, n):
    from sympy import bernoulli, divisor_sigma
    c = -2 * k / bernoulli(k)
    return [1] + [int(c * divisor_sigma(m, k - 1)) for m in range(1, n + 1)]


def mul(a, b, n):
    return [sum(a[i] * b[m - i] for i in range(m + 1)) for m in range(n + 1)]


def delta(n):
    e4, e6 = eisenstein(4, n), eisenstein(6, n)
    e4c = mul(mul(e4, e4, n), e4, n)
    e6s = mul(e6, e6, n)
    return [(x - y) // 1728 for x, y in zip(e4c, e6s)]


def newform(w, n):
    return mul(delta(n), eisenstein(w - 12, n), n) if w > 12 else delta(n)


def petersson(a, w):
    terms = [(m, a[m]) for m in range(1, 40)]

    def absg2(x, y):
        re = im = mpf(0)
        for m, c in terms:
            r = c * exp(-2 * pi * m * y)
            re += r * cos(2 * pi * m * x)
            im += r * sin(2 * pi * m * x)
        return re * re + im * im

    inner = lambda x: quad(lambda y: absg2(x, y) * y ** (w - 2), [sqrt(1 - x * x), 2, inf])
    return 2 * quad(inner, [0, mpf(1) / 2])


def completed_L(a, w, s, level, eps, t):
    # Lambda(s) = (sqrt(level)/2pi)^s Gamma(s) L(s) = eps Lambda(w - s)
    A = 2 * pi / sqrt(level)
    tot = mpf(0)
    for m in range(1, len(a)):
        if a[m] == 0:
            continue
        x = A * m
        tot += a[m] * (gammainc(s, x * t) / x ** s + eps * gammainc(w - s, x / t) / x ** (w - s))
    return tot


def L_value(a, w, s, level, eps):
    vals = [completed_L(a, w, s, level, eps, t) for t in (mpf(1), mpf("1.25"))]
    if abs(vals[0] - vals[1]) > mpf(10) ** -15 * abs(vals[0]):
        raise RuntimeError("functional equation check failed at s = %s" % s)
    A = 2 * pi / sqrt(level)
    return vals[0] * A ** s / gamma(s)


def chi_m4(m):
    return 0 if m % 2 == 0 else (1 if m % 4 == 1 else -1)


def main(outdir):
    d = delta(60)
    nd = petersson(d, 12)
    known = mpf("1.035362056804320922347e-6")
    if abs(nd / known - 1) > mpf(10) ** -12:
        raise RuntimeError("<Delta, Delta> = %s" % nd)
    for k in (10, 12):
        w = 2 * k - 2
        a = newform(w, NMAX)
        norm = petersson(a, w)
        eps = (-1) ** (w // 2)
        L_k = L_value(a, w, mpf(k), 1, eps)
        L_lit = L_value(a, w, k - mpf(1) / 2, 1, eps)
        tw = [a[m] * chi_m4(m) for m in range(len(a))]
        L_half = L_value(tw, w, mpf(k - 1), 16, -eps)
        path = os.path.join(outdir, "g%d.txt" % w)
        with open(path, "w") as f:
            f.write("# weight=%d\n# level=1\n# label=g%d\n" % (w, w))
            f.write("# petersson_norm=%s\n" % mp.nstr(norm, 17))
            f.write("# L_one=%s\n" % mp.nstr(L_k, 17))
            f.write("# L_half_twist=%s\n" % mp.nstr(L_half, 17))
            f.write("# twist_D=-4\n")
            f.write("# L_one is the classical L(g, k); the unitary L(g, k - 1/2) is %s\n" % mp.nstr(L_lit, 17))
            for m in range(1, NMAX + 1):
                f.write("%d : %d\n" % (m, a[m]))
        print(path, mp.nstr(norm, 12), mp.nstr(L_k, 12), mp.nstr(L_half, 12))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__)))
