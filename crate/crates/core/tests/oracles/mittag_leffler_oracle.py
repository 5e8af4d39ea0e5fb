"""Reference values of E_{eta,mu}(-x) in extended precision.

Three independent routes, chosen per point:
  * eta == 1: E_{1,mu}(z) = 1F1(1; mu; z) / Gamma(mu)
  * high-precision power series when the peak term stays manageable
  * algebraic asymptotic series when its smallest term is negligible

Prints Rust tuples (eta, mu, x, value) for tests/mittag_leffler.rs.
"""
import mpmath as mp

ETAS = [0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 1.0]
MUS = [0.1, 0.5, 1.0, "eta", 1.5, 2.0, 2.5, 3.0]
XS = [0.001, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0, 30.0, 100.0, 1000.0, 1e4]


def rgamma(a):
    return mp.rgamma(a)


def series(eta, mu, x):
    peak = float(x) ** (1.0 / float(eta))
    if peak > 2000:
        return None
    mp.mp.dps = int(40 + peak / 2.0)
    eta, mu, x = mp.mpf(eta), mp.mpf(mu), mp.mpf(x)
    s = mp.mpf(0)
    k = 0
    while True:
        term = (-x) ** k * rgamma(eta * k + mu)
        s += term
        if k > 10 and abs(term) < mp.mpf(10) ** (-35) * max(abs(s), mp.mpf(10) ** -300) and eta * k > peak:
            break
        k += 1
        if k > 200000:
            return None
    return s


def asymptotic(eta, mu, x):
    # Sum up to the index where the envelope Gamma(eta k + 1 - mu) / x^k is smallest.
    mp.mp.dps = 60
    eta, mu, x = mp.mpf(eta), mp.mpf(mu), mp.mpf(x)
    best_k, best_env = None, None
    for k in range(1, 20000):
        y = eta * k + 1 - mu
        if y <= 0:
            continue
        env = mp.loggamma(y) - k * mp.log(x)
        if best_env is None or env < best_env:
            best_k, best_env = k, env
        elif env > best_env + 50:
            break
    s = mp.mpf(0)
    for k in range(1, best_k + 1):
        s += -((-x) ** (-k)) * rgamma(mu - eta * k)
    if s == 0 or mp.exp(best_env) > mp.mpf(10) ** -25 * abs(s):
        return None
    return s


def value(eta, mu, x):
    if eta == 1.0:
        mp.mp.dps = 50
        return mp.hyp1f1(1, mu, -mp.mpf(x)) * mp.rgamma(mu), "hyp1f1"
    v = asymptotic(eta, mu, x) if x >= 1 else None
    if v is not None:
        return v, "asym"
    v = series(eta, mu, x)
    if v is not None:
        return v, "series"
    v = asymptotic(eta, mu, x)
    if v is not None:
        return v, "asym"
    return None, "none"


if __name__ == "__main__":
    for eta in ETAS:
        for mu in MUS:
            m = eta if mu == "eta" else mu
            for x in XS:
                v, how = value(eta, m, x)
                if v is None:
                    print(f"    // skipped ({eta}, {m}, {x}): no independent route")
                    continue
                print(f"    ({float(eta)!r}, {float(m)!r}, {float(x)!r}, {mp.nstr(v, 20)}), // {how}")
