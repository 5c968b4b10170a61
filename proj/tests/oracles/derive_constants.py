"""Reference values frozen into the C++ tests, computed with mpmath at 40 digits.

Run: python3 tests/oracles/derive_constants.py
"""

import mpmath as mp

mp.mp.dps = 40


def surface(n):
    return 2 * mp.pi ** (mp.mpf(n) / 2) / mp.gamma(mp.mpf(n) / 2)


def prefactor(n, N):
    return surface(N - n) / (mp.mpf(N) ** (mp.mpf(n) / 2) * surface(N))


def gaussian_l1(n, N):
    """int_{R^n} |f_{n,N} - f_n| for the identity map."""
    c = prefactor(n, N)
    lim = (2 * mp.pi) ** (-mp.mpf(n) / 2)
    root = mp.sqrt(N)

    def finite(r):
        return c * (1 - r * r / N) ** (mp.mpf(N - n - 2) / 2) if r < root else mp.mpf(0)

    def diff(r):
        return finite(r) - lim * mp.exp(-r * r / 2)

    # Sign changes of the difference on (0, sqrt N).
    grid = [root * k / 4000 for k in range(1, 4000)]
    cuts = [mp.mpf(0)]
    prev = diff(grid[0])
    for a, b in zip(grid, grid[1:]):
        cur = diff(b)
        if prev * cur < 0:
            cuts.append(mp.findroot(diff, (a, b), solver="bisect"))
        prev = cur
    cuts.append(root)
    total = mp.mpf(0)
    for a, b in zip(cuts, cuts[1:]):
        total += abs(mp.quad(lambda r: diff(r) * r ** (n - 1), [a, b]))
    total += mp.quad(lambda r: lim * mp.exp(-r * r / 2) * r ** (n - 1), [root, mp.inf])
    return surface(n) * total


def main():
    g1 = mp.ncdf(1)
    print("G(1)", mp.nstr(g1, 17))
    print("I(G(1))", mp.nstr(mp.npdf(1), 17))
    a = 2 * g1 - 1
    print("mu[-1,1]", mp.nstr(a, 17))
    print("mu_plus[-1,1]", mp.nstr(2 * mp.npdf(1), 17))
    q = mp.findroot(lambda x: mp.ncdf(x) - a, 0.5)
    print("I(mu[-1,1])", mp.nstr(mp.npdf(q), 17))
    print("P(3/2,1/2)", mp.nstr(mp.gammainc(1.5, 0, 0.5, regularized=True), 17))
    print("quad A_3 (2pi)^-3/2 int_0^1 e^-s^2/2 s^2",
          mp.nstr(surface(3) * (2 * mp.pi) ** -1.5 * mp.quad(lambda s: mp.exp(-s * s / 2) * s * s, [0, 1]), 17))
    print("f_{1,3}(0)", mp.nstr(prefactor(1, 3), 17))
    for n in (1, 2, 3):
        lim = (2 * mp.pi) ** (-mp.mpf(n) / 2)
        print(f"prefactor rel err n={n} N=1e6", mp.nstr(abs(prefactor(n, 10**6) / lim - 1), 6))
    for n in (1, 2, 3):
        vals = [gaussian_l1(n, N) for N in (100, 1000, 10000, 1000000)]
        print(f"L1 n={n}", " ".join(mp.nstr(v, 9) for v in vals))
    print("tail int r=10 n=2", mp.nstr(mp.quad(lambda s: mp.exp(-s * s / 2) * s, [10, mp.inf]), 17),
          "bound e^-50", mp.nstr(mp.exp(-50), 17))
    print("tail int r=0.1 n=2", mp.nstr(mp.quad(lambda s: mp.exp(-s * s / 2) * s, [0.1, mp.inf]), 17),
          "bound", mp.nstr(mp.exp(-0.005), 17))
    print("M_2[e^-r]", mp.nstr(surface(2) * mp.quad(lambda r: mp.exp(-r) * r, [0, mp.inf]), 17))


if __name__ == "__main__":
    main()
