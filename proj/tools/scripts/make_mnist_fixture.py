#!/usr/bin/env python3
"""Build a small gzipped IDX subset of MNIST from the `mnist` npm package.

Usage: make_mnist_fixture.py <package_dir> <out_dir> [per_class]

The npm package (MIT, github.com/cazala/mnist) ships MNIST digits as JSON
with pixels scaled to [0, 1]; they are mapped back to bytes with round(255 v).
Classes are interleaved round-robin so the file mixes labels like the
original distribution.
"""
import gzip
import json
import os
import struct
import sys


def main():
    pkg, out = sys.argv[1], sys.argv[2]
    per_class = int(sys.argv[3]) if len(sys.argv) > 3 else 120
    digits = []
    for d in range(10):
        with open(os.path.join(pkg, "src", "digits", f"{d}.json")) as f:
            data = json.load(f)["data"]
        n = len(data) // 784
        digits.append([data[i * 784:(i + 1) * 784] for i in range(min(n, per_class))])

    images, labels = [], []
    for i in range(per_class):
        for d in range(10):
            if i < len(digits[d]):
                images.append(bytes(min(255, max(0, round(255 * v))) for v in digits[d][i]))
                labels.append(d)

    os.makedirs(out, exist_ok=True)
    with gzip.GzipFile(os.path.join(out, "mnist-subset-images-idx3-ubyte.gz"), "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 2051, len(images), 28, 28))
        for img in images:
            f.write(img)
    with gzip.GzipFile(os.path.join(out, "mnist-subset-labels-idx1-ubyte.gz"), "wb", mtime=0) as f:
        f.write(struct.pack(">II", 2049, len(labels)))
        f.write(bytes(labels))
    print(f"wrote {len(images)} images")


if __name__ == "__main__":
    main()
