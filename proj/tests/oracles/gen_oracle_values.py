#!/usr/bin/env python3
"""Generates tests/oracle_values.hpp.

Independent reference values:
  * clamped-beam eigen-wavenumbers (bisection on the scaled determinant, mpmath, 40 digits)
  * eigenfunction coefficients in the bounded exponential basis for the heat-only probe
  * closed-form boundary-trace / volume integrals for a polynomial vector field (exact rationals)
  * cutoff lattice sums for the frequency-localization slope check
"""
from fractions import Fraction
import mpmath as mp

mp.mp.dps = 40


# ---------------------------------------------------------------- clamped beam
def det_scaled(q, mu, eps, L):
    # mu f'''' - eps f'' = lam f, clamped ends; determinant scaled by 2 exp(-p L)
    p = mp.sqrt(q * q + eps / mu)
    E = mp.e ** (-p * L)
    ch = (1 + E * E) / 2
    sh = (1 - E * E) / 2
    return 4 * p * E - 4 * p * ch * mp.cos(q * L) + (2 * (p * p - q * q) / q) * sh * mp.sin(q * L)


def clamped_roots(mu, eps, L, count):
    roots = []
    q = mp.mpf("0.05")
    step = mp.pi / (40 * L)
    f_prev = det_scaled(q, mu, eps, L)
    while len(roots) < count:
        q2 = q + step
        f_next = det_scaled(q2, mu, eps, L)
        if mp.sign(f_prev) != mp.sign(f_next):
            r = mp.findroot(lambda t: det_scaled(t, mu, eps, L), (q, q2), solver="bisect", tol=mp.mpf(10) ** (-35))
            roots.append(r)
        q, f_prev = q2, f_next
    return roots


def clamped_mode(q, mu, eps, L):
    """Coefficients (a,b,c,d) for f = a e^{-p x} + b e^{p(x-L)} + c cos(q x) + d sin(q x),
    normalized to unit L2 norm, sign fixed by f''(0) > 0."""
    p = mp.sqrt(q * q + eps / mu)
    E = mp.e ** (-p * L)
    cq, sq = mp.cos(q * L), mp.sin(q * L)
    a = 1 - E * cq - (p / q) * E * sq
    b = -(E - cq + (p / q) * sq)
    c = -a - b * E
    d = (p * a - p * b * E) / q
    # residual of the remaining boundary row (diagnostic)
    res = a * (-p * E + q * sq + p * cq) + b * (p + q * E * sq - p * E * cq)

    def f(x):
        return a * mp.e ** (-p * x) + b * mp.e ** (p * (x - L)) + c * mp.cos(q * x) + d * mp.sin(q * x)

    nrm = mp.sqrt(mp.quad(lambda x: f(x) ** 2, [0, L / 2, L]))
    s = 1 if (a * p * p + b * p * p * E - c * q * q) > 0 else -1
    a, b, c, d = (s * v / nrm for v in (a, b, c, d))
    return a, b, c, d, p, res / nrm


# ------------------------------------------------------- polynomial Gauss-Green
class Poly2:
    """dict {(i,j): Fraction} representing sum c x^i y^j"""

    def __init__(self, terms=None):
        self.t = dict(terms or {})

    def __add__(self, o):
        r = dict(self.t)
        for k, v in o.t.items():
            r[k] = r.get(k, Fraction(0)) + v
        return Poly2(r)

    def __mul__(self, o):
        r = {}
        for (i, j), u in self.t.items():
            for (k, l), v in o.t.items():
                key = (i + k, j + l)
                r[key] = r.get(key, Fraction(0)) + u * v
        return Poly2(r)

    def dx(self):
        return Poly2({(i - 1, j): v * i for (i, j), v in self.t.items() if i > 0})

    def dy(self):
        return Poly2({(i, j - 1): v * j for (i, j), v in self.t.items() if j > 0})

    def subs_x(self, x0):
        r = {}
        for (i, j), v in self.t.items():
            r[j] = r.get(j, Fraction(0)) + v * x0 ** i
        return r  # dict j -> coeff, poly in y

    def subs_y(self, y0):
        r = {}
        for (i, j), v in self.t.items():
            r[i] = r.get(i, Fraction(0)) + v * y0 ** j
        return r

    def int_unit_square(self):
        return sum(v / ((i + 1) * (j + 1)) for (i, j), v in self.t.items())


def int01(d):  # integral over [0,1] of 1-var poly given as dict deg->coeff
    return sum(v / (k + 1) for k, v in d.items())


def gauss_green_values():
    X, Y, ONE = Poly2({(1, 0): Fraction(1)}), Poly2({(0, 1): Fraction(1)}), Poly2({(0, 0): Fraction(1)})
    F1 = X * X * Y + Poly2({(0, 3): Fraction(2)}) + ONE
    F2 = X * Y * Y + X * X * X + Poly2({(0, 0): Fraction(2)})
    g = ONE + X + Poly2({(0, 1): Fraction(2)}) + X * Y * Y
    div = F1.dx() + F2.dy()
    grad_dot = g.dx() * F1 + g.dy() * F2
    vol_grad = grad_dot.int_unit_square()
    vol_div = (g * div).int_unit_square()
    gF1, gF2 = g * F1, g * F2
    trace = (
        int01(gF1.subs_x(Fraction(1)))
        - int01(gF1.subs_x(Fraction(0)))
        + int01(gF2.subs_y(Fraction(1)))
        - int01(gF2.subs_y(Fraction(0)))
    )
    assert trace == vol_grad + vol_div
    return trace, vol_grad, vol_div


# ------------------------------------------------------------------ lattice sums
def zeta_cut(r):
    def Q(s):
        return max(s, 0.0) ** 4

    num = Q(2.0 - r)
    den = num + Q(r - 1.0)
    return num / den if den != 0 else 0.0


def lattice_sums(gammas):
    out = []
    for g in gammas:
        lim = int(2 * g) + 1
        s = 0.0
        for i in range(-lim, lim + 1):
            for j in range(-lim, lim + 1):
                for k in range(-lim, lim + 1):
                    r = (i * i + j * j + k * k) ** 0.5 / g
                    if r < 2.0:
                        s += zeta_cut(r) ** 2
        out.append(s)
    return out


def slope_fit(xs, ys):
    import math

    lx = [math.log(v) for v in xs]
    ly = [math.log(v) for v in ys]
    n = len(xs)
    mx, my = sum(lx) / n, sum(ly) / n
    return sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / sum((a - mx) ** 2 for a in lx)


def emit():
    lines = []
    lines.append("#pragma once")
    lines.append("// Generated by tests/oracles/gen_oracle_values.py -- do not edit by hand.")
    lines.append("namespace oracle {")

    ks = clamped_roots(mp.mpf(1), mp.mpf(0), mp.mpf(1), 4)
    lines.append("// roots of the clamped determinant for (mu=1, eps=0, L=1); cos k cosh k = 1")
    for i, k in enumerate(ks):
        lines.append(f"inline constexpr double kClampedK{i + 1} = {mp.nstr(k, 20)};")

    ks2 = clamped_roots(mp.mpf("0.01"), mp.mpf("0.1"), mp.mpf(1), 2)
    lines.append("// wavenumbers for (mu=0.01, eps=0.1, L=1)")
    for i, k in enumerate(ks2):
        lines.append(f"inline constexpr double kClampedDefaultQ{i + 1} = {mp.nstr(k, 20)};")

    mu, ee = mp.mpf("0.01"), mp.mpf("0.07")  # eps + c for the heat-only probe
    ks3 = clamped_roots(mu, ee, mp.mpf(1), 2)
    a, b, c, d, p, res = clamped_mode(ks3[0], mu, ee, mp.mpf(1))
    lam = mu * ks3[0] ** 4 + ee * ks3[0] ** 2
    lines.append("// ground mode of mu f'''' - (eps+c) f'' = lam f, (mu, eps+c) = (0.01, 0.07), L=1")
    lines.append(f"// residual of the redundant boundary row: {mp.nstr(res, 5)}")
    lines.append(f"inline constexpr double kProbeQ1 = {mp.nstr(ks3[0], 20)};")
    lines.append(f"inline constexpr double kProbeQ2 = {mp.nstr(ks3[1], 20)};")
    lines.append(f"inline constexpr double kProbeP1 = {mp.nstr(p, 20)};")
    lines.append(f"inline constexpr double kProbeLambda1 = {mp.nstr(lam, 20)};")
    for nm, v in (("A", a), ("B", b), ("C", c), ("D", d)):
        lines.append(f"inline constexpr double kProbeCoef{nm} = {mp.nstr(v, 20)};")

    tr, vg, vd = gauss_green_values()
    lines.append("// polynomial field F=(x^2 y + 2 y^3 + 1, x y^2 + x^3 + 2), g = 1 + x + 2 y + x y^2 on [0,1]^2")
    lines.append(f"inline constexpr double kGGTrace = {float(tr)!r};  // {tr}")
    lines.append(f"inline constexpr double kGGVolGrad = {float(vg)!r};  // {vg}")
    lines.append(f"inline constexpr double kGGVolDiv = {float(vd)!r};  // {vd}")

    gammas = [2.0, 3.0, 4.0, 6.0]
    sums = lattice_sums(gammas)
    lines.append("// sum over the integer lattice of zeta(|k|/gamma)^2, gamma in {2,3,4,6}")
    for g, s in zip(gammas, sums):
        lines.append(f"inline constexpr double kLatticeSumG{int(g)} = {s!r};")
    lines.append(f"inline constexpr double kLatticeSlope = {slope_fit(gammas, sums)!r};")

    lines.append("}  // namespace oracle")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    import os

    here = os.path.dirname(os.path.abspath(__file__))
    out = os.path.join(here, "..", "oracle_values.hpp")
    with open(out, "w") as fh:
        fh.write(emit())
    print("wrote", os.path.normpath(out))
