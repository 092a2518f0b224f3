"""Reference values for tests/test_density.cpp (mpmath, 30 digits)."""
from mpmath import mp, mpf, mpc, digamma, quad, sin, pi, log, re, inf

mp.dps = 20

for z in [mpc(1, 0.5), mpc(0.3, -2), mpc(9, 40), mpc(-2.5, 0.1), mpc(200, 3)]:
    print("digamma", z, digamma(z))


def gamma_term(k, L, beta, periods=200):
    def g(x):
        y = 2 * pi * x / L
        return 2 * re(digamma(1 + 1j * y) + digamma(k - 1 + 1j * y)) - 4 * log(2 * pi)

    def phi(x):
        u = pi * beta * x
        return (sin(u) / u) ** 2 if u != 0 else mpf(1)

    h = 1 / mpf(beta)
    X = periods * h
    head = sum(quad(lambda x: g(x) * phi(x), [j * h, (j + 1) * h]) for j in range(periods))
    # sin^2 = 1/2 - cos(2 pi b x)/2 beyond X
    smooth = quad(lambda x: g(x) / (2 * (pi * beta * x) ** 2), [X, 10 * X, 100 * X, inf])
    # the oscillating remainder is O(1e-8) over the first 2000 half periods and summed directly
    wave = sum(quad(lambda x: g(x) * mp.cos(2 * pi * beta * x) / (2 * (pi * beta * x) ** 2),
                    [X + j * h / 2, X + (j + 1) * h / 2]) for j in range(2000))
    return 2 * (head + smooth - wave) / L


for k, L in [(10, 20), (10, 40), (12, 20)]:
    print("gamma_term", k, L, gamma_term(k, L, mpf("0.2")))

# Fejer transform: 2 int_0^inf phi(x) cos(2 pi x t) dx with the tail beyond X in closed form
b = mpf("0.2")


def cos_over_x2_tail(w, X):
    # int_X^inf cos(w x) / x^2 dx
    w = abs(w)
    if w == 0:
        return 1 / X
    return mp.cos(w * X) / X - w * (pi / 2 - mp.si(w * X))


for t in [0, mpf("0.05"), mpf("0.13"), mpf("0.19"), mpf("0.25")]:
    f = lambda x: (sin(pi * b * x) / (pi * b * x)) ** 2 * mp.cos(2 * pi * x * t) if x != 0 else mpf(1)
    X = 50 / b
    head = sum(quad(f, [j / (2 * b), (j + 1) / (2 * b)]) for j in range(100))
    w0, wp, wm = 2 * pi * t, 2 * pi * (b + t), 2 * pi * (b - t)
    tail = (cos_over_x2_tail(w0, X) - cos_over_x2_tail(wp, X) / 2 - cos_over_x2_tail(wm, X) / 2) / (2 * (pi * b) ** 2)
    print("fejer_hat", t, 2 * (head + tail), max(0, 1 - abs(t) / b) / b)
