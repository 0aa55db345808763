"""Finite-difference values of R^1_212 for the lifted round sphere.

Writes tests/fixtures/sphere_R1212.csv with columns x1,x2,y1,y2,R1212.
The metric is x-dependent only, so C = 0, e_k acts as d/dx^k on L, and L is
the Christoffel symbol of g, itself obtained here by differencing g.
"""

import csv
import pathlib

import numpy as np

H = 1e-5


def metric(x):
    return np.array([[1.0, 0.0], [0.0, np.sin(x[0]) ** 2]])


def christoffel(x):
    g = metric(x)
    gi = np.linalg.inv(g)
    dg = np.zeros((2, 2, 2))
    for k in range(2):
        e = np.zeros(2)
        e[k] = H
        dg[k] = (metric(x + e) - metric(x - e)) / (2 * H)
    L = np.zeros((2, 2, 2))
    for i in range(2):
        for j in range(2):
            for k in range(2):
                L[i, j, k] = 0.5 * sum(gi[i, h] * (dg[k, j, h] + dg[j, k, h] - dg[h, j, k]) for h in range(2))
    return L


def curvature(x):
    L = christoffel(x)
    dL = np.zeros((2, 2, 2, 2))
    for k in range(2):
        e = np.zeros(2)
        e[k] = H
        dL[k] = (christoffel(x + e) - christoffel(x - e)) / (2 * H)
    R = np.zeros((2, 2, 2, 2))
    for i in range(2):
        for h in range(2):
            for j in range(2):
                for k in range(2):
                    r = dL[k, i, h, j] - dL[j, i, h, k]
                    r += sum(L[m, h, j] * L[i, m, k] - L[m, h, k] * L[i, m, j] for m in range(2))
                    R[i, h, j, k] = r
    return R


def main():
    rng = np.random.default_rng(20240601)
    out = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "sphere_R1212.csv"
    with out.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["x1", "x2", "y1", "y2", "R1212"])
        for _ in range(20):
            x = np.array([rng.uniform(0.3, 2.8), rng.uniform(0.0, 6.2)])
            y = rng.uniform(-1.0, 1.0, size=2)
            r = curvature(x)[0, 1, 0, 1]
            w.writerow([f"{v:.12e}" for v in (x[0], x[1], y[0], y[1], r)])


if __name__ == "__main__":
    main()
