#!/usr/bin/env python3
"""Scalar reference for the built-in embedding extractor.

Recomputes the full recipe (area-weighted 16x16 grid resample, 32-bin
per-channel histograms, seeded gaussian projection, tanh) in plain Python
so the golden vector asserted in tests/test_embedding.cpp comes from an
implementation independent of the C++ one.
"""

import math

from reference_rng import SplitMix64

GRID = 16
HIST_BINS = 32


def grid_features(pixels, h, w):
    # pixels: list of (r, c, ch) -> byte, interleaved row-major
    def px(r, c, ch):
        return pixels[(r * w + c) * 3 + ch] / 255.0

    out = [0.0] * (GRID * GRID * 3)
    for gi in range(GRID):
        r0 = gi * h / GRID
        r1 = (gi + 1) * h / GRID
        for gj in range(GRID):
            c0 = gj * w / GRID
            c1 = (gj + 1) * w / GRID
            acc = [0.0, 0.0, 0.0]
            r = int(math.floor(r0))
            while r < r1 and r < h:
                wr = min(r1, r + 1.0) - max(r0, float(r))
                if wr > 0:
                    c = int(math.floor(c0))
                    while c < c1 and c < w:
                        wc = min(c1, c + 1.0) - max(c0, float(c))
                        if wc > 0:
                            for ch in range(3):
                                acc[ch] += wr * wc * px(r, c, ch)
                        c += 1
                r += 1
            area = (h / GRID) * (w / GRID)
            for ch in range(3):
                out[(gi * GRID + gj) * 3 + ch] = acc[ch] / area
    return out


def histogram_features(pixels, h, w):
    out = [0.0] * (3 * HIST_BINS)
    for r in range(h):
        for c in range(w):
            for ch in range(3):
                b = pixels[(r * w + c) * 3 + ch] >> 3
                out[ch * HIST_BINS + b] += 1.0
    n = h * w
    return [v / n for v in out]


def extract(pixels, h, w, dim, seed):
    feat = grid_features(pixels, h, w) + histogram_features(pixels, h, w)
    f = len(feat)
    scale = 1.0 / math.sqrt(f)
    rng = SplitMix64(seed)
    out = []
    for _ in range(dim):
        acc = 0.0
        for k in range(f):
            acc += rng.next_gaussian() * scale * feat[k]
        out.append(math.tanh(acc))
    return out


def checkerboard(n):
    pixels = []
    for r in range(n):
        for c in range(n):
            v = 255 if (r + c) % 2 == 0 else 0
            pixels.extend([v, v, v])
    return pixels


def main():
    px = checkerboard(8)
    vec = extract(px, 8, 8, 16, 7)
    print("checkerboard 8x8, D=16, seed=7:")
    for v in vec:
        print(repr(v))


if __name__ == "__main__":
    main()
