#!/usr/bin/env python3
"""Regenerate the bundled test images under tests/data/.

Sources are scikit-image sample images (public domain / CC0). Output is
deterministic: fixed crops, box-filter downscaling, 8-bit PNG.

natural_128.png is a native-resolution crop. A box-downscaled full frame packs
four times the chroma detail into each block and is not what a JPEG encoder
normally sees.
"""
import pathlib

import numpy as np
import skimage.data as data
from PIL import Image

ROOT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "data"

# (source, top, left, crop size); crop is box-downscaled to 256x256.
CORPUS = [
    ("astronaut", 0, 0, 512),
    ("astronaut", 100, 150, 256),
    ("coffee", 0, 0, 400),
    ("coffee", 100, 250, 256),
    ("chelsea", 0, 80, 300),
    ("chelsea", 30, 120, 256),
    ("rocket", 0, 0, 427),
    ("rocket", 120, 300, 256),
    ("immunohistochemistry", 0, 0, 512),
    ("immunohistochemistry", 200, 200, 256),
    ("hubble_deep_field", 300, 300, 512),
    ("retina", 400, 400, 512),
    ("colorwheel", 50, 50, 256),
    ("camera", 0, 0, 512),
    ("camera", 150, 150, 256),
    ("brick", 0, 0, 256),
    ("grass", 100, 100, 256),
    ("gravel", 0, 0, 512),
    ("moon", 100, 100, 256),
    ("coins", 20, 60, 256),
]


def crop_resize(img, top, left, size, out):
    c = img[top:top + size, left:left + size]
    pil = Image.fromarray(c)
    if size != out:
        pil = pil.resize((out, out), Image.BOX)
    return pil


def main():
    (ROOT / "corpus").mkdir(parents=True, exist_ok=True)
    for i, (name, top, left, size) in enumerate(CORPUS):
        img = getattr(data, name)()
        crop_resize(img, top, left, size, 256).save(
            ROOT / "corpus" / f"{i:02d}_{name}.png", optimize=False)
    crop_resize(data.astronaut(), 100, 180, 128, 128).save(ROOT / "natural_128.png")


if __name__ == "__main__":
    main()
