"""High-precision reference values used as frozen constants in the Rust tests.

Every value is computed with mpmath at >= 50 significant digits, independently
of the Rust implementation: Mittag-Leffler values by direct summation of the
power series, integrals by tanh-sinh quadrature. Run with `python3 ml_oracle.py`.
"""
from mpmath import mp, mpf, rgamma, gamma, quad, sqrt, pi, sin, exp, log, nstr

mp.dps = 60


def ml(alpha, beta, z):
    """E_{alpha,beta}(z) by brute-force series summation in extended precision."""
    alpha, beta, z = mpf(alpha), mpf(beta), mpf(z)
    if z == 0:
        return rgamma(beta)
    r = abs(z) ** (1 / alpha)
    # cancellation costs roughly r / ln(10) digits
    with mp.workdps(60 + int(r / 2.3) + 10):
        s = mpf(0)
        term_max = mpf(0)
        k = 0
        zk = mpf(1)
        while True:
            t = zk * rgamma(alpha * k + beta)
            s += t
            term_max = max(term_max, abs(t))
            if k > 10 and alpha * k > 2 * r + 20 and abs(t) < mpf(10) ** (-mp.dps) * max(term_max, 1):
                break
            zk *= z
            k += 1
        return +s


def show(name, v):
    print(f"{name} = {nstr(v, 25)}")


if __name__ == "__main__":
    print("# special")
    show("E(1.5,1.5,-1)", ml(1.5, 1.5, -1))
    show("E(1.8,0,-2)", ml(1.8, 0, -2))
    show("E(1.8,1.8,-2)", ml(1.8, 1.8, -2))
    show("E(1.5,1.5,-50)", ml(1.5, 1.5, -50))
    show("E(1.25,1.0,-100)", ml(1.25, 1.0, -100))
    show("E(1.75,0.75,-30)", ml(1.75, 0.75, -30))
    show("E(1.5,2.5,-200)", ml(1.5, 2.5, -200))
    show("E(2.0,0.5,-400)", ml(2.0, 0.5, -400))
    show("E(1.9,1.9,-1000)", ml(1.9, 1.9, -1000))
    show("E(1.5,1.5,-10000)", ml(1.5, 1.5, -10000))
    show("E(1.25,0.25,-8)", ml(1.25, 0.25, -8))
    show("E(0.5,1.0,-3)", ml(0.5, 1.0, -3))
    show("E(1.6,-0.7,-12)", ml(1.6, -0.7, -12))
    show("E(1.5,1.0,5)", ml(1.5, 1.0, 5))
    show("E(1.2,0.9,40)", ml(1.2, 0.9, 40))
    print("# fraccalc")
    show("E(1.5,1.9,-1)", ml(1.5, 1.9, -1))
    show("E(1.6,1.0,-1)", ml(1.6, 1.0, -1))
    print("# solvers")
    show("E(1.5,2.5,-1)", ml(1.5, 2.5, -1))
    show("E(1.5,2.0,-1)", ml(1.5, 2.0, -1))
    show("E(1.5,0,-1)", ml(1.5, 0, -1))
    # condition system, alpha=1.5 beta=0.5 gamma=0.5 m=-1 a=0.7
    al, be, ga, m, a = mpf(1.5), mpf(0.5), mpf(0.5), mpf(-1), mpf("0.7")
    z = m * a ** al
    M = [[a ** (al + be - 1) * ml(al, al + be, z), a ** (al + be - 2) * ml(al, al + be - 1, z)],
         [a ** (al - ga - 1) * ml(al, al - ga, z), a ** (al - ga - 2) * ml(al, al - 1 - ga, z)]]
    show("cond a=0.7 m00", M[0][0]); show("cond m01", M[0][1]); show("cond m10", M[1][0]); show("cond m11", M[1][1])
    show("cond det", M[0][0] * M[1][1] - M[0][1] * M[1][0])
    # inner: alpha=1.5 beta=0.3 gamma=0.4 m=-1 a=0.5 f=1 d1=0.2 d2=-0.1
    al, be, ga, m, a = mpf(1.5), mpf("0.3"), mpf("0.4"), mpf(-1), mpf("0.5")
    z = m * a ** al
    M = [[a ** (al + be - 1) * ml(al, al + be, z), a ** (al + be - 2) * ml(al, al + be - 1, z)],
         [a ** (al - ga - 1) * ml(al, al - ga, z), a ** (al - ga - 2) * ml(al, al - 1 - ga, z)]]
    # source moments for f = 1, computed by quadrature of the defining integrals
    FI = quad(lambda s: s ** (al + be - 1) * ml(al, al + be, m * s ** al), [0, a])
    FD = quad(lambda s: s ** (al - ga - 1) * ml(al, al - ga, m * s ** al), [0, a])
    r1, r2 = mpf("0.2") - FI, mpf("-0.1") - FD
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    show("inner FI", FI); show("inner FD", FD)
    show("inner C1", (r1 * M[1][1] - M[0][1] * r2) / det)
    show("inner C2", (M[0][0] * r2 - M[1][0] * r1) / det)
    # inner-boundary: alpha=1.7 beta=0.2 gamma=0.6 m=1 a=0.4 b=0.9 f=exp(-t) e1=0 e2=1
    al, be, ga, m, a, b = mpf("1.7"), mpf("0.2"), mpf("0.6"), mpf(1), mpf("0.4"), mpf("0.9")
    M = [[a ** (al + be - 1) * ml(al, al + be, m * a ** al), a ** (al + be - 2) * ml(al, al + be - 1, m * a ** al)],
         [b ** (al - ga - 1) * ml(al, al - ga, m * b ** al), b ** (al - ga - 2) * ml(al, al - 1 - ga, m * b ** al)]]
    FI = quad(lambda s: exp(-(a - s)) * s ** (al + be - 1) * ml(al, al + be, m * s ** al), [0, a])
    FD = quad(lambda s: exp(-(b - s)) * s ** (al - ga - 1) * ml(al, al - ga, m * s ** al), [0, b])
    r1, r2 = 0 - FI, 1 - FD
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    show("ib FI", FI); show("ib FD", FD)
    show("ib C1", (r1 * M[1][1] - M[0][1] * r2) / det)
    show("ib C2", (M[0][0] * r2 - M[1][0] * r1) / det)
    print("# spectral")
    show("proj x(pi-x) on e1", quad(lambda x: x * (pi - x) * sqrt(2 / pi) * sin(x), [0, pi]))
    show("u(1,pi/2) alpha=1.5", ml(1.5, 0.5, -1) * sqrt(2 / pi))
    show("weighted norm alpha=1.5 T=1", sqrt(quad(lambda t: ml(1.5, 0.5, -t ** 1.5) ** 2, [0, 1])))
    print("# gamma")
    for x in ["0.5", "1.5", "-0.5", "-2.5", "3.7", "10.25", "-7.3", "0.001", "25.5", "150.5"]:
        show(f"rgamma({x})", rgamma(mpf(x)))
        if mpf(x) > 0:
            show(f"lgamma({x})", log(gamma(mpf(x))))
