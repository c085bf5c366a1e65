#!/usr/bin/env python3
"""High-precision reference evaluations for the frozen constants in the C++
test suite. Every quantity here is computed by direct formula evaluation in
mpmath at 50 digits, independently of the library code. Run:

    python3 tests/reference_values.py
"""

import mpmath as mp

mp.mp.dps = 40


def butterworth(z, xi0, xi1, xi2):
    return mp.exp(xi0) / (1 + ((z * z) / (xi1 * xi1)) ** xi2)


def logistic_weight(x, beta, tau):
    return 1 / (1 + mp.exp(-tau * (x - beta)))


def interp(x, p0, p1, beta, tau):
    w = logistic_weight(x, beta, tau)
    return (1 - w) * p0 + w * p1


def besselk_quad(nu, x):
    # K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
    # Beyond t = 50 the integrand is below exp(-1e13) for any x of interest.
    f = lambda t: mp.exp(-x * mp.cosh(t)) * mp.cosh(nu * t)
    return mp.quad(f, [0, 5, 50])


def matern(d, nu):
    if d == 0:
        return mp.mpf(1)
    return 2 ** (1 - nu) / mp.gamma(nu) * d**nu * besselk_quad(nu, d)


# June-02 fitted parameter values (full precision).
J02 = dict(
    theta=[mp.mpf("1.0556262087602715"), mp.mpf("1.1816083418260148"),
           mp.mpf("1.2660682932086842"), mp.mpf("1.1896106548426282")],
    rho0=mp.mpf("2.7184535523514923"), nu0=mp.mpf("1.1436376841231368"),
    rho1=mp.mpf("5.525591539265126"), nu1=mp.mpf("2.139742354992843"),
    zeta00=mp.mpf("12.45648190493277"), zeta01=mp.mpf("0.01652013151928776"),
    zeta02=mp.mpf("0.8395641019094884"), zeta10=mp.mpf("16.79317692040071"),
    zeta11=mp.mpf("0.011595522882194436"), zeta12=mp.mpf("1.383669202874107"),
    beta=mp.mpf("458.841071692587"), tau=mp.mpf("0.05645016419419213"),
    xi00=mp.mpf("3.578639178296149"), xi01=mp.mpf("7.076909630417635"),
    xi2=mp.mpf("6.552778376515583"), xi1=mp.mpf("0.0314327352404162"),
    phi1=mp.mpf("106.55630990556314"), phi2=mp.mpf("0.6359725490737751"),
    alpha=mp.mpf("0.00021387614883648138"),
    eta_st=mp.mpf("0.03591593048261951"), eta_t=mp.mpf("0.013877115982555983"),
)


def sdf(f, x, p):
    s = mp.sin(mp.pi * f)
    w = logistic_weight(x, p["beta"], p["tau"])
    xi0 = (1 - w) * p["xi00"] + w * p["xi01"]
    rho = (1 - w) * p["rho0"] + w * p["rho1"]
    nu = (1 - w) * p["nu0"] + w * p["nu1"]
    return (1 + butterworth(s, xi0, p["xi1"], p["xi2"])) * \
        (mp.exp(rho) * s * s + 1) ** (-nu - mp.mpf(1) / 2)


def coherence(f, x, xp, p):
    s = mp.sin(mp.pi * f)

    def gamma(xx):
        w = logistic_weight(xx, p["beta"], p["tau"])
        z0 = (1 - w) * p["zeta00"] + w * p["zeta10"]
        z1 = (1 - w) * p["zeta01"] + w * p["zeta11"]
        z2 = (1 - w) * p["zeta02"] + w * p["zeta12"]
        return butterworth(s, z0, z1, z2)

    def nus(xx):
        return mp.mpf(1) / 2 if xx <= p["beta"] else mp.mpf(3) / 4

    gx, gxp = gamma(x), gamma(xp)
    gbar = mp.sqrt((gx + gxp) / 2)
    nubar = (nus(x) + nus(xp)) / 2
    return (gx * gxp) ** mp.mpf("0.25") / gbar * matern(abs(x - xp) / gbar, nubar)


def scale_lambda(x, t, p, t_lo, t_hi):
    knots = [t_lo + j * (t_hi - t_lo) / 3 for j in range(4)]
    wt = [mp.exp(-abs(t - tj) / mp.mpf(50)) for tj in knots]
    tot = sum(wt)
    s = sum(w / tot * th for w, th in zip(wt, p["theta"]))
    zp = max(x - p["beta"], 0)
    return butterworth(zp, 0, p["phi1"], p["phi2"]) * s


def cross_spectrum(f, x, xp, p):
    s = mp.sin(mp.pi * f)
    return mp.sqrt(sdf(f, x, p) * sdf(f, xp, p)) * coherence(f, x, xp, p) * \
        mp.exp(1j * p["alpha"] * s * (x - xp))


def show(label, v):
    print(f"{label:58s} {mp.nstr(v, 20)}")


show("butterworth(0, 1.5, 0.3, 2)", butterworth(0, mp.mpf("1.5"), mp.mpf("0.3"), 2))
show("logistic_weight(200, 458.84, 0.0565)",
     logistic_weight(200, mp.mpf("458.84"), mp.mpf("0.0565")))
show("interp(500, 2.7185, 5.5256, 458.84, 0.05645)",
     interp(500, mp.mpf("2.7185"), mp.mpf("5.5256"), mp.mpf("458.84"), mp.mpf("0.05645")))

pm = dict(J02)
pm.update(xi00=mp.mpf(1), xi01=mp.mpf(1), xi1=mp.mpf("0.03"), xi2=mp.mpf(6),
          rho0=mp.mpf("2.7"), rho1=mp.mpf("2.7"),
          nu0=mp.mpf("1.14"), nu1=mp.mpf("1.14"))
show("marginal_sdf(0.25, x=300, xi0=1 xi1=.03 xi2=6 rho=2.7 nu=1.14)", sdf(mp.mpf("0.25"), 300, pm))

show("K_0.625(1) quadrature", besselk_quad(mp.mpf("0.625"), 1))
show("K_0.625(1) mpmath besselk (cross-check)", mp.besselk(mp.mpf("0.625"), 1))
show("matern(1, 0.625)", matern(1, mp.mpf("0.625")))
show("matern(2.5, 0.75)", matern(mp.mpf("2.5"), mp.mpf("0.75")))
show("matern(0.35, 0.625)", matern(mp.mpf("0.35"), mp.mpf("0.625")))

show("coherence(0.1, 300, 600, J02)", coherence(mp.mpf("0.1"), 300, 600, J02))
show("scale_lambda(700, 400, J02, knots on [0,775])",
     scale_lambda(700, 400, J02, 0, 775))
cs = cross_spectrum(mp.mpf("0.1"), 300, 600, J02)
show("cross_spectrum(0.1, 300, 600, J02)  re", mp.re(cs))
show("cross_spectrum(0.1, 300, 600, J02)  im", mp.im(cs))
show("marginal_sdf(0.1, 300, J02)", sdf(mp.mpf("0.1"), 300, J02))
show("marginal_sdf(0.1, 600, J02)", sdf(mp.mpf("0.1"), 600, J02))
