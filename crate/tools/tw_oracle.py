"""Independent high-precision Tracy-Widom values used to pin the Rust
evaluators. Gauss-Legendre discretisation of the Airy-kernel Fredholm
determinants in mpmath at 40 digits."""
import mpmath as mp

mp.mp.dps = 40
LENGTH = 16


def nodes(s, m):
    xs, ws = [], []
    for x, w in zip(*gauss_legendre(m)):
        xs.append(s + LENGTH * (x + 1) / 2)
        ws.append(w * LENGTH / 2)
    return xs, ws


def gauss_legendre(m):
    xs, ws = [], []
    for k in range(1, m + 1):
        x = mp.cos(mp.pi * (k - mp.mpf(1) / 4) / (m + mp.mpf(1) / 2))
        for _ in range(100):
            p0, p1 = mp.mpf(1), x
            for n in range(2, m + 1):
                p0, p1 = p1, ((2 * n - 1) * x * p1 - (n - 1) * p0) / n
            dp = m * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mp.mpf(10) ** -35:
                break
        xs.append(x)
        ws.append(2 / ((1 - x * x) * dp * dp))
    return xs, ws


def airy_kernel(x, y):
    if x == y:
        return mp.airyai(x, 1) ** 2 - x * mp.airyai(x) ** 2
    return (mp.airyai(x) * mp.airyai(y, 1) - mp.airyai(x, 1) * mp.airyai(y)) / (x - y)


def det(kernel, s, m):
    xs, ws = nodes(s, m)
    a = mp.matrix(m, m)
    for i in range(m):
        for j in range(m):
            a[i, j] = (1 if i == j else 0) - mp.sqrt(ws[i] * ws[j]) * kernel(xs[i], xs[j])
    return mp.det(a)


def f_gue(s, m=60):
    return det(airy_kernel, mp.mpf(s), m)


def f_goe(s, m=60):
    return det(lambda x, y: mp.airyai((x + y) / 2) / 2, mp.mpf(s), m)


if __name__ == "__main__":
    print("ai0", mp.nstr(mp.airyai(0), 20))
    for s in [-3, -2, -1, 0, 1, 2]:
        a, b = f_gue(s, 50), f_gue(s, 70)
        c, d = f_goe(s, 50), f_goe(s, 70)
        print(s, "gue", mp.nstr(b, 18), mp.nstr(abs(a - b), 3), "goe", mp.nstr(d, 18), mp.nstr(abs(c - d), 3))
