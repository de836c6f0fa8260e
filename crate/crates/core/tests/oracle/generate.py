"""Independent reference values for the core tests.

Nothing here shares code or algorithms with the Rust crate:

- velocity models come from a high-precision scan of the moment-matching
  residual (linear solve for the weights, sign changes in the base speed),
- Riemann star states come from solving the jump and isentropic relations
  directly as one nonlinear system,
- expansion coefficients come from sympy series of the closed-form density.

Run from this directory: python3 generate.py
"""

import json
from pathlib import Path

import mpmath as mp
import sympy as sp

mp.mp.dps = 60
OUT = Path(__file__).resolve().parent.parent / "golden"


def gauss_even(k):
    """Normalized Gaussian moment of order 2k: (2k-1)!!/2^k."""
    return mp.fac2(2 * k - 1) / mp.mpf(2) ** k if k else mp.mpf(1)


def weights_at(speeds, s):
    """Normalized weights (zero speed first) matching moments 0..2K at v2^2 = s."""
    nodes = [mp.mpf(0)] + [mp.mpf(p) ** 2 * s for p in speeds]
    rows = len(nodes)
    a = mp.matrix(rows, rows)
    b = mp.matrix(rows, 1)
    for k in range(rows):
        a[k, 0] = 1 if k == 0 else 0
        for j in range(1, rows):
            a[k, j] = 2 * nodes[j] ** k
        b[k] = gauss_even(k)
    return mp.lu_solve(a, b), nodes


def residual(speeds, s):
    w, nodes = weights_at(speeds, s)
    k = len(nodes)
    total = sum(2 * w[j] * nodes[j] ** k for j in range(1, k))
    return total - gauss_even(k)


def models(speeds, s_max=12, samples=6000):
    """All positive roots of the residual, by a log-spaced sign scan."""
    lo = mp.log(mp.mpf(10) ** -6)
    hi = mp.log(s_max)
    grid = [mp.e ** (lo + (hi - lo) * i / samples) for i in range(samples + 1)]
    vals = [residual(speeds, s) for s in grid]
    roots = []
    for i in range(samples):
        if vals[i] == 0 or vals[i] * vals[i + 1] < 0:
            s = mp.findroot(lambda x: residual(speeds, x), (grid[i], grid[i + 1]), solver="anderson")
            w, _ = weights_at(speeds, s)
            roots.append({
                "v2": float(mp.sqrt(s)),
                "v2_str": mp.nstr(mp.sqrt(s), 30),
                "weights": [float(x) for x in w],
            })
    return roots


def model_table():
    cases = {
        "q3": [1],
        "q5": [1, 3],
        "q7": [1, 2, 3],
        "q11": [1, 2, 3, 4, 5],
        "q21": [1, 2, 3, 4, 5, 6, 7, 8, 9, 11],
        "q5_r1_5": [1, 5],
        "q5_r1_4": [1, 4],
        "q5_r1_2": [1, 2],
        "q5_r1_100": [1, 100],
    }
    out = {}
    for name, speeds in cases.items():
        s_max = 12 if len(speeds) < 5 else 4
        out[name] = {"speeds": speeds, "branches": models(speeds, s_max)}
        print(name, [b["v2"] for b in out[name]["branches"]])
    return out


def riemann_star(rho_l, rho_r, gamma=3):
    """Dense gas left at rest, light gas right at rest, unit temperature.

    Unknowns: p*, u*, left-star density, right-star density, shock speed.
    Pressure is rho*theta/2 so the sound speed is sqrt(gamma*theta/2).
    """
    g = mp.mpf(gamma)
    pl, pr = mp.mpf(rho_l) / 2, mp.mpf(rho_r) / 2
    cl = mp.sqrt(g * pl / rho_l)

    def eqs(p, u, r1, r2, s):
        c1 = mp.sqrt(g * p / r1)
        m = r2 * (u - s)
        e2 = p / ((g - 1) * r2)
        er = pr / ((g - 1) * rho_r)
        return [
            p / r1 ** g - pl / mp.mpf(rho_l) ** g,
            u + 2 * c1 / (g - 1) - 2 * cl / (g - 1),
            m - rho_r * (0 - s),
            m * (u - s) + p - (rho_r * s * s + pr),
            m * (e2 + (u - s) ** 2 / 2) + p * (u - s) - (rho_r * (-s) * (er + s * s / 2) + pr * (-s)),
        ]

    guess = [mp.mpf(pl + pr) / 2, mp.mpf("0.3"), mp.mpf(rho_l) * 0.8, mp.mpf(rho_r) * 1.2, mp.mpf(1)]
    p, u, r1, r2, s = mp.findroot(eqs, guess)
    return {
        "left": [rho_l, 0, 1],
        "right": [rho_r, 0, 1],
        "p_star": float(p),
        "reported_p_star": float(2 * p),
        "u_star": float(u),
        "rho_star_left": float(r1),
        "rho_star_right": float(r2),
        "theta_star_left": float(2 * p / r1),
        "theta_star_right": float(2 * p / r2),
        "shock_speed": float(s),
    }


def expansion_rows():
    v, u, t, lam = sp.symbols("v u t lam")
    # pi^{1/2} exp(v^2) times the unit-density MB density at theta = 1 + t
    density = (1 + t) ** sp.Rational(-1, 2) * sp.exp(v ** 2 - (v - u) ** 2 / (1 + t))
    rows = []
    for kind, orders, tw in (("TE", range(1, 6), 1), ("HE", range(1, 11), 2)):
        for n in orders:
            scaled = density.subs({u: lam * u, t: lam ** tw * t})
            series = sp.series(scaled, lam, 0, n + 1).removeO().subs(lam, 1)
            poly = sp.Poly(sp.expand(series), v, u, t)
            for (pv, pu, pt), c in sorted(poly.terms()):
                c = sp.Rational(c)
                rows.append((pv, pu, pt, c.p, c.q, kind, n))
            print(kind, n, len(poly.terms()))
    return rows


def main():
    OUT.mkdir(exist_ok=True)
    (OUT / "models.json").write_text(json.dumps(model_table(), indent=1) + "\n")
    riemann = {"ratio_3": riemann_star(3, 1), "ratio_11": riemann_star(11, 1)}
    print(riemann)
    (OUT / "riemann.json").write_text(json.dumps(riemann, indent=1) + "\n")
    with open(OUT / "expansions.csv", "w") as f:
        f.write("v_power,u_power,t_power,numerator,denominator,kind,N\n")
        for row in expansion_rows():
            f.write(",".join(str(x) for x in row) + "\n")


if __name__ == "__main__":
    main()
