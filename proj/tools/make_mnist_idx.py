#!/usr/bin/env python3
# Copyright 2026 The QNNW Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes an IDX image/label pair from an MNIST CSV (784 pixels + label).

The default source is the 5,000-image MNIST subset (500 per digit) that
ships inside the mlxtend wheel:

    pip download --no-deps mlxtend -d /tmp/mlx
    python3 tools/make_mnist_idx.py --wheel /tmp/mlx/mlxtend-*.whl --out data/mnist

Any CSV with rows `p0,...,p783,label` works via --csv.
"""
import argparse
import gzip
import io
import struct
import zipfile
from pathlib import Path

MEMBER = "mlxtend/data/data/mnist_5k.csv.gz"


def read_rows(text):
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        values = [int(float(v)) for v in line.split(",")]
        if len(values) != 785:
            raise ValueError(f"expected 785 columns, got {len(values)}")
        yield values[:784], values[784]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--wheel", type=Path)
    src.add_argument("--csv", type=Path)
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--prefix", default="mnist5k")
    args = parser.parse_args()

    if args.wheel:
        with zipfile.ZipFile(args.wheel) as z:
            raw = gzip.decompress(z.read(MEMBER))
    else:
        raw = args.csv.read_bytes()
        if args.csv.suffix == ".gz":
            raw = gzip.decompress(raw)
    rows = list(read_rows(raw.decode("ascii")))

    args.out.mkdir(parents=True, exist_ok=True)
    images = io.BytesIO()
    images.write(struct.pack(">IIII", 2051, len(rows), 28, 28))
    labels = io.BytesIO()
    labels.write(struct.pack(">II", 2049, len(rows)))
    for pixels, label in rows:
        images.write(bytes(pixels))
        labels.write(bytes([label]))
    (args.out / f"{args.prefix}-images-idx3-ubyte").write_bytes(images.getvalue())
    (args.out / f"{args.prefix}-labels-idx1-ubyte").write_bytes(labels.getvalue())
    print(f"wrote {len(rows)} samples to {args.out}")


if __name__ == "__main__":
    main()
