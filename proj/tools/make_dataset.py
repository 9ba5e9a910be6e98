#!/usr/bin/env python3
"""Materialize the bundled image corpus under data/.

Sources are the sample images shipped inside the scikit-image wheel
(public-domain / CC0 photographs, see data/README.md). Color inputs are
converted to luma with BT.601 weights; everything is written as 8-bit
grayscale PNG. Dimensions are cropped to even so the half-resolution
pipeline accepts every file.

Usage: python3 tools/make_dataset.py [--out data]
"""

import argparse
import os

import numpy as np
from PIL import Image

TEST_IMAGES = ["camera.png", "moon.png", "coins.png", "astronaut.png"]
TRAIN_IMAGES = [
    "coffee.png",
    "chelsea.png",
    "rocket.jpg",
    "motorcycle_left.png",
    "grass.png",
    "gravel.png",
    "brick.png",
    "hubble_deep_field.jpg",
    "clock_motion.png",
    "cell.png",
]


def to_gray8(arr: np.ndarray) -> np.ndarray:
    if arr.ndim == 3:
        rgb = arr[..., :3].astype(np.float64)
        arr = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
        arr = np.clip(np.round(arr), 0, 255).astype(np.uint8)
    h, w = arr.shape
    return arr[: h - (h % 2), : w - (w % 2)]


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="data")
    args = parser.parse_args()

    import skimage

    srcdir = os.path.join(os.path.dirname(skimage.__file__), "data")
    for subdir, names in [("test", TEST_IMAGES), ("train", TRAIN_IMAGES)]:
        outdir = os.path.join(args.out, subdir)
        os.makedirs(outdir, exist_ok=True)
        for name in names:
            arr = to_gray8(np.asarray(Image.open(os.path.join(srcdir, name))))
            stem = os.path.splitext(name)[0]
            path = os.path.join(outdir, f"{stem}.png")
            Image.fromarray(arr, mode="L").save(path, optimize=True)
            print(f"{path}: {arr.shape[0]}x{arr.shape[1]}")


if __name__ == "__main__":
    main()
