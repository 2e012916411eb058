#!/usr/bin/env python3
"""Regenerates the synthetic sample corpus under assets/corpus/.

The images are procedural (smooth fields, edges, periodic texture) so the
repository carries no third-party image data. Deterministic per seed; rerun
only when intentionally refreshing the corpus.
"""

import pathlib

import numpy as np
from PIL import Image

ROOT = pathlib.Path(__file__).resolve().parent.parent / "assets" / "corpus"


def smooth_field(rng, h, w, components=6):
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    img = np.zeros((h, w))
    for _ in range(components):
        fy = rng.uniform(0.3, 3.0) / h
        fx = rng.uniform(0.3, 3.0) / w
        phase = rng.uniform(0, 2 * np.pi)
        amp = rng.uniform(0.05, 0.22)
        img += amp * np.sin(2 * np.pi * (fy * yy + fx * xx) + phase)
    return img


def texture(rng, h, w):
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    fy = rng.uniform(6, 14) / h
    fx = rng.uniform(6, 14) / w
    phase = rng.uniform(0, 2 * np.pi)
    return np.sin(2 * np.pi * (fy * yy + fx * xx) + phase)


def add_shapes(rng, img):
    h, w = img.shape
    for _ in range(rng.integers(2, 5)):
        y0 = int(rng.integers(0, h - 8))
        x0 = int(rng.integers(0, w - 8))
        hh = int(rng.integers(6, max(7, h // 3)))
        ww = int(rng.integers(6, max(7, w // 3)))
        img[y0 : min(h, y0 + hh), x0 : min(w, x0 + ww)] += rng.uniform(-0.35, 0.35)
    for _ in range(rng.integers(1, 4)):
        cy, cx = rng.integers(0, h), rng.integers(0, w)
        r = int(rng.integers(4, max(5, min(h, w) // 4)))
        yy, xx = np.mgrid[0:h, 0:w]
        mask = (yy - cy) ** 2 + (xx - cx) ** 2 <= r * r
        img[mask] += rng.uniform(-0.3, 0.3)
    return img


def make_image(rng, h, w):
    img = 0.5 + smooth_field(rng, h, w)
    img = add_shapes(rng, img)
    # texture only in one band, so flat and detailed areas coexist
    band = texture(rng, h, w) * 0.18
    y0 = int(rng.integers(0, h // 2))
    y1 = y0 + int(rng.integers(h // 4, h // 2))
    img[y0:y1, :] += band[y0:y1, :]
    img = np.clip(img, 0.02, 0.98)

    # correlated RGB around the gray field
    rgb = np.stack([img] * 3, axis=-1)
    for c in range(3):
        rgb[..., c] = np.clip(rgb[..., c] + rng.uniform(-0.06, 0.06) * smooth_field(rng, h, w, 2), 0, 1)
    return (rgb * 255.0 + 0.5).astype(np.uint8)


def write_ppm(path, rgb):
    h, w, _ = rgb.shape
    with open(path, "wb") as f:
        f.write(f"P6\n{w} {h}\n255\n".encode())
        f.write(rgb.tobytes())


def emit(split, count, sizes, seed):
    out = ROOT / split
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    for i in range(count):
        h, w = sizes[i % len(sizes)]
        rgb = make_image(rng, h, w)
        name = f"{split}{i:02d}"
        if i % 2 == 0:
            Image.fromarray(rgb).save(out / f"{name}.png")
        else:
            write_ppm(out / f"{name}.ppm", rgb)


def main():
    emit("train", 20, [(64, 64), (64, 80), (80, 64), (96, 96), (80, 80)], seed=20240601)
    emit("val", 6, [(64, 64), (72, 72), (64, 80)], seed=20240602)
    print(f"corpus written under {ROOT}")


if __name__ == "__main__":
    main()
