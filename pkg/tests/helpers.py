"""Independent oracles and generators shared by the test modules.

The oracles deliberately use different machinery from the library
(dict/set enumeration instead of vectorized numpy) so they can catch
implementation mistakes rather than mirror them.
"""

import itertools
from fractions import Fraction

import numpy as np

from nmprune import ActivationNorms


def random_layer(seed, f_out, f_in, alpha=0.5):
    """Gaussian weight matrix plus positive activation norms."""
    rng = np.random.default_rng(seed)
    w = rng.standard_normal((f_out, f_in)).astype(np.float32)
    norms = rng.uniform(0.1, 2.0, size=f_in)
    return w, ActivationNorms(norms, alpha)


def diagonal_select_oracle(block):
    """Enumerate every quadrant-diagonal and pair choice, keep the unique
    combination consistent with the larger-sum rules (main diagonal wins a
    quadrant tie, the top-left/bottom-right pair wins a pair tie)."""
    b = np.abs(np.asarray(block, dtype=np.float64))
    m = b.shape[0]
    h = m // 2
    offsets = {"tl": (0, 0), "tr": (0, h), "bl": (h, 0), "br": (h, h)}

    def cells(key, which):
        r0, c0 = offsets[key]
        if which == "main":
            return [(r0 + i, c0 + i) for i in range(h)]
        return [(r0 + i, c0 + h - 1 - i) for i in range(h)]

    def dsum(key, which):
        return sum(b[r, c] for r, c in cells(key, which))

    def quadrant_ok(key, which):
        other = "anti" if which == "main" else "main"
        s, o = dsum(key, which), dsum(key, other)
        return s > o or (s == o and which == "main")

    survivors = []
    for tl, tr, bl, br in itertools.product(("main", "anti"), repeat=4):
        choice = {"tl": tl, "tr": tr, "bl": bl, "br": br}
        if not all(quadrant_ok(k, v) for k, v in choice.items()):
            continue
        pair_a = dsum("tl", tl) + dsum("br", br)
        pair_b = dsum("tr", tr) + dsum("bl", bl)
        for pair in ("a", "b"):
            if pair == "a":
                ok = pair_a > pair_b or pair_a == pair_b
            else:
                ok = pair_b > pair_a
            if ok:
                survivors.append((choice, pair))
    assert len(survivors) == 1, f"rule selected {len(survivors)} combinations"

    choice, pair = survivors[0]
    mask = np.zeros((m, m), dtype=np.uint8)
    keys = ("tl", "br") if pair == "a" else ("tr", "bl")
    for key in keys:
        for r, c in cells(key, choice[key]):
            mask[r, c] = 1
    return mask


def expansion_oracle(mask, c):
    """Set-based enumeration of neighborhood/size ratios on both sides.

    Returns (a_in, a_out) as Fractions, or None for a side whose admissible
    subset size bound is below 1.
    """
    arr = np.asarray(mask)
    f_out, f_in = arr.shape
    frac = Fraction(c)
    in_neigh = {j: {i for i in range(f_out) if arr[i, j]} for j in range(f_in)}
    out_neigh = {i: {j for j in range(f_in) if arr[i, j]} for i in range(f_out)}

    def side_min(neigh, n, bound):
        max_size = int(frac * n) if bound is None else bound
        best = None
        for k in range(1, max_size + 1):
            for subset in itertools.combinations(range(n), k):
                gamma = set()
                for v in subset:
                    gamma |= neigh[v]
                ratio = Fraction(len(gamma), k)
                if best is None or ratio < best:
                    best = ratio
        return best

    return side_min(in_neigh, f_in, None), side_min(out_neigh, f_out, None)


def top_k_per_window_oracle(scores, n, m):
    """Plain-Python per-window top-(m-n) selection with lower-column ties."""
    s = np.asarray(scores, dtype=np.float64)
    rows, cols = s.shape
    mask = np.zeros((rows, cols), dtype=np.uint8)
    for i in range(rows):
        for start in range(0, cols, m):
            window = [(float(-s[i, start + j]), j) for j in range(m)]
            for _, j in sorted(window)[: m - n]:
                mask[i, start + j] = 1
    return mask
