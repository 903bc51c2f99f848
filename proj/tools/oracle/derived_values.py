"""Independent reference values for the unit tests, computed with exact fractions."""
from fractions import Fraction as F
from itertools import product
import math


def ranks(xs):
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    r = [F(0)] * len(xs)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and xs[order[j + 1]] == xs[order[i]]:
            j += 1
        for k in range(i, j + 1):
            r[order[k]] = F(i + j + 2, 2)
        i = j + 1
    return r


def pearson(a, b):
    n = len(a)
    ma, mb = sum(a) / n, sum(b) / n
    sab = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    saa = sum((x - ma) ** 2 for x in a)
    sbb = sum((y - mb) ** 2 for y in b)
    return float(sab) / math.sqrt(float(saa * sbb))


def spearman(xs, ys):
    return pearson(ranks(xs), ranks(ys))


def gini(xs):
    xs = [F(x) for x in xs]
    n = len(xs)
    return sum(abs(a - b) for a, b in product(xs, xs)) / (2 * n * n * (sum(xs) / n))


def lorenz(xs):
    xs = sorted(F(x) for x in xs)
    total = sum(xs)
    pts, acc = [(F(0), F(0))], F(0)
    for i, x in enumerate(xs, 1):
        acc += x
        pts.append((F(i, len(xs)), acc / total))
    return pts


def sample_var(xs):
    m = sum(xs) / len(xs)
    return sum((x - m) ** 2 for x in xs) / (len(xs) - 1)


def sb(t, c):
    return float(sum(t) / len(t) - sum(c) / len(c)) / math.sqrt(float(sample_var(t)))


def cronbach(cols):
    k = len(cols)
    totals = [sum(row) for row in zip(*cols)]
    tv = sample_var([F(x) for x in totals])
    if tv == 0:
        return "undefined"
    return float(F(k, k - 1) * (1 - sum(sample_var([F(x) for x in c]) for c in cols) / tv))


def candidates(edges, u):
    out = {}
    for a, b in edges:
        out.setdefault(a, set()).add(b)
    res = {}
    for v in out.get(u, ()):
        for c in out.get(v, ()):
            if c != u and c not in out[u]:
                res[c] = res.get(c, 0) + 1
    return dict(sorted(res.items()))


def illusion(edges, beauty):
    mu = sum(beauty.values()) / len(beauty)
    q = sum(1 for b in beauty.values() if b > mu) / len(beauty)
    out = {}
    for a, b in edges:
        out.setdefault(a, []).append(b)
    fr = {u: sum(1 for v in vs if beauty[v] > mu) / len(vs) for u, vs in out.items()}
    share = sum(1 for f in fr.values() if f > q) / len(fr)
    return float(mu), float(q), float(share)


if __name__ == "__main__":
    print("spearman [1,2,3,4] vs [2,1,4,3]:", spearman([1, 2, 3, 4], [2, 1, 4, 3]))
    print("gini [0,0,0,1]:", gini([0, 0, 0, 1]))
    print("gini [1,2,3]:", gini([1, 2, 3]), float(gini([1, 2, 3])))
    print("lorenz [1,3]:", lorenz([1, 3]))
    print("sb t={0,2} c={1,1.5}:", sb([F(0), F(2)], [F(1), F(3, 2)]))
    print("cronbach [1,2,3],[3,2,1]:", cronbach([[1, 2, 3], [3, 2, 1]]))
    print("cronbach [1,2,3],[1,2,3]:", cronbach([[1, 2, 3], [1, 2, 3]]))
    A, B, C, D, E = range(5)
    print("candidates(A):", candidates([(A, B), (A, C), (B, D), (C, D), (B, E)], A))
    bip = [(a, b) for a in range(3) for b in range(3, 6)] + [(5, 6), (4, 6), (3, 7)]
    print("bipartite 3x3 + tails, candidates(0):", candidates(bip, 0))
    star = {0: F(9, 10), 1: F(1, 10), 2: F(1, 10), 3: F(1, 10), 4: F(1, 10)}
    print("star illusion:", illusion([(i, 0) for i in range(1, 5)], star))
    print("pair illusion:", illusion([(0, 1), (1, 0)], {0: F(2, 10), 1: F(8, 10)}))
