#!/usr/bin/env python3
"""Regenerate the resampler golden rasters with Pillow.

Writes source patterns and Pillow-resized outputs as PNG under
crates/core/tests/data/resample/. Run from the repository root.
"""
import math
import pathlib

from PIL import Image

OUT = pathlib.Path("crates/core/tests/data/resample")

FILTERS = {
    "bilinear": Image.Resampling.BILINEAR,
    "bicubic": Image.Resampling.BICUBIC,
    "lanczos": Image.Resampling.LANCZOS,
}


def checker():
    img = Image.new("L", (8, 8))
    img.putdata([255 if (x + y) % 2 else 0 for y in range(8) for x in range(8)])
    return img


def ramp():
    w, h = 16, 12
    img = Image.new("RGB", (w, h))
    px = []
    for y in range(h):
        for x in range(w):
            r = round(255 * x / (w - 1))
            g = round(127.5 + 127.5 * math.sin(0.9 * x + 0.5 * y))
            b = 255 if (x // 3 + y // 2) % 2 else 20
            px.append((r, g, b))
    img.putdata(px)
    return img


PATTERNS = {
    "checker": (checker(), {"down": (4, 4), "up": (13, 11)}),
    "ramp": (ramp(), {"down": (7, 5), "up": (29, 23)}),
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for pname, (src, sizes) in PATTERNS.items():
        src.save(OUT / f"{pname}_src.png")
        for fname, f in FILTERS.items():
            for direction, size in sizes.items():
                src.resize(size, resample=f).save(OUT / f"{pname}_{fname}_{direction}.png")


if __name__ == "__main__":
    main()
