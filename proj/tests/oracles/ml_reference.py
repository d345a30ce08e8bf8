"""Regenerates tests/oracles/ml_reference.inc.

E_{alpha,beta}(z) by its Taylor series in multiprecision arithmetic. The
working precision is raised until the cancellation in the alternating sum is
harmless, so the printed values are correct to all 17 digits.
"""
import mpmath as mp

CASES = []
for alpha in ["0.3", "0.5", "0.7", "0.9"]:
    for beta in ["1", alpha, "1.5"]:
        for z in ["0.5", "-0.5", "-2", "-5", "-12", "-40", "-80", "-300"]:
            CASES.append((alpha, beta, z))
for alpha in ["1.3", "1.7", "2"]:
    for beta in ["1", "0.8", "2.2"]:
        for z in ["-1", "-6", "-20", "-60", "3"]:
            CASES.append((alpha, beta, z))
for beta in ["0.5", "1.7", "3"]:
    for z in ["-3", "-10", "-45", "-120"]:
        CASES.append(("1", beta, z))


def ml_asymptotic(alpha, beta, z):
    # for alpha < 1 and large -z the remainder after optimal truncation is
    # far below double precision
    mp.mp.dps = 50
    a, b, x = mp.mpf(alpha), mp.mpf(beta), -mp.mpf(z)
    s = mp.mpf(0)
    prev = None
    for k in range(1, 4000):
        t = (-1) ** (k + 1) * x ** (-k) * mp.rgamma(b - a * k)
        bound = mp.gamma(1 - b + a * k) / mp.pi * x ** (-k) if 1 - b + a * k > 0 else abs(t)
        if prev is not None and bound > prev:
            raise RuntimeError("no convergence")
        s += t
        if bound < mp.mpf(10) ** -40:
            return s
        prev = bound
    raise RuntimeError("no convergence")


def ml(alpha, beta, z):
    if float(alpha) < 1 and float(z) < 0 and (-float(z)) ** (1 / float(alpha)) > 300:
        return ml_asymptotic(alpha, beta, z)
    a, b, x = mp.mpf(alpha), mp.mpf(beta), mp.mpf(z)
    # largest term is about exp(|z|^(1/alpha)); pad the precision accordingly
    big = float(abs(x)) ** (1.0 / float(a))
    mp.mp.dps = int(big / 2.3) + 40
    a, b, x = mp.mpf(alpha), mp.mpf(beta), mp.mpf(z)
    s = mp.mpf(0)
    k = 0
    while True:
        t = x**k / mp.gamma(a * k + b)
        s += t
        if k > 10 and abs(t) < mp.mpf(10) ** (-mp.mp.dps + 5) * max(abs(s), mp.mpf(1e-300)) and a * k + b > big + 5:
            break
        k += 1
    return s


with open("ml_reference.inc", "w") as out:
    out.write("// alpha, beta, z, E_{alpha,beta}(z); generated by ml_reference.py\n")
    for alpha, beta, z in CASES:
        v = ml(alpha, beta, z)
        out.write("{%s, %s, %s, %s},\n" % (alpha, beta, z, mp.nstr(v, 20, min_fixed=-1, max_fixed=-1) if v != 0 else "0.0"))
