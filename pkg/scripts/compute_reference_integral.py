"""Reference value of the 7-dimensional smoothing benchmark integral.

Tensor Gauss-Legendre on the cube. The last four coordinates enter only
through their sum, so their rule is collapsed to a weighted list of sums.

    python scripts/compute_reference_integral.py [n_head] [n_tail]
"""

import itertools
import sys

import numpy as np


def reference(n_head: int = 20, n_tail: int = 8) -> float:
    xh, wh = np.polynomial.legendre.leggauss(n_head)
    xh, wh = 0.5 * (xh + 1), 0.5 * wh
    xt, wt = np.polynomial.legendre.leggauss(n_tail)
    xt, wt = 0.5 * (xt + 1), 0.5 * wt

    tail_sum = np.zeros(n_tail**4)
    tail_w = np.ones(n_tail**4)
    for k, idx in enumerate(itertools.product(range(n_tail), repeat=4)):
        tail_sum[k] = xt[list(idx)].sum()
        tail_w[k] = np.prod(wt[list(idx)])

    g = np.exp(-np.sin(0.5 * np.pi * xh) ** 2)
    total = 0.0
    for i, j in itertools.product(range(n_head), repeat=2):
        head_sum = xh[i] + xh[j] + xh  # vector over the third coordinate
        weight = wh[i] * wh[j] * wh * g[i] * g[j] * g
        inner = np.arcsin(np.sin(1.0) + (head_sum[:, None] + tail_sum[None, :]) / 200.0) @ tail_w
        total += float(weight @ inner)
    return np.e * total


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:]]
    print(repr(reference(*args)))
