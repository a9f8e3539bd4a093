"""Brute-force reference values for the geometry tests.

Evaluates the closed-form distance-field formulas directly in numpy and
integrates curve potentials with a dense trapezoid rule.
"""
import numpy as np


def segment_phi(p, a, b):
    p, a, b = map(np.asarray, (p, a, b))
    L = np.linalg.norm(b - a)
    c = 0.5 * (a + b)
    f = ((p[0] - a[0]) * (b[1] - a[1]) - (p[1] - a[1]) * (b[0] - a[0])) / L
    t = (0.25 * L * L - np.sum((p - c) ** 2)) / L
    vphi = np.sqrt(t * t + f ** 4)
    return np.sqrt(f * f + 0.25 * (vphi - t) ** 2)


def req(values, m=1):
    return sum(v ** (-m) for v in values) ** (-1.0 / m)


def square_edges(lo, hi):
    v = [(lo, lo), (hi, lo), (hi, hi), (lo, hi)]
    return [(v[i], v[(i + 1) % 4]) for i in range(4)]


def curve_phi(x, curve, dcurve, p=1, n=100000):
    t = np.linspace(0.0, 1.0, n + 1)
    c = curve(t)
    dc = dcurve(t)
    perp = np.stack([dc[1], -dc[0]])
    d = c - np.asarray(x)[:, None]
    integrand = np.sum(d * perp, axis=0) / np.sum(d * d, axis=0) ** ((2 + p) / 2)
    W = np.trapezoid(integrand, t)
    scale = 2.0 if p == 1 else None
    return (scale / W) ** (1.0 / p)


if __name__ == "__main__":
    print("segment (0.5,0.3):", repr(segment_phi((0.5, 0.3), (0, 0), (1, 0))))
    print("segment (2,0):", repr(segment_phi((2, 0), (0, 0), (1, 0))))
    edges = square_edges(-1.0, 1.0)
    vals = [segment_phi((0, 0), a, b) for a, b in edges]
    print("biunit square edge values at center:", vals)
    print("biunit square REQ m=1 center:", repr(req(vals, 1)))
    print("biunit square REQ m=2 center:", repr(req(vals, 2)))
    circ = lambda t: np.stack([np.cos(2 * np.pi * t), np.sin(2 * np.pi * t)])
    dcirc = lambda t: 2 * np.pi * np.stack([-np.sin(2 * np.pi * t), np.cos(2 * np.pi * t)])
    print("unit circle MVP center:", repr(curve_phi((0, 0), circ, dcirc)))
    print("unit circle MVP (0.5,0):", repr(curve_phi((0.5, 0), circ, dcirc)))
    ell = lambda t: np.stack([0.5 * np.cos(2 * np.pi * t), 0.3 * np.sin(2 * np.pi * t)])
    dell = lambda t: 2 * np.pi * np.stack([-0.5 * np.sin(2 * np.pi * t), 0.3 * np.cos(2 * np.pi * t)])
    print("ellipse MVP (0.2,0.1):", repr(curve_phi((0.2, 0.1), ell, dell)))
