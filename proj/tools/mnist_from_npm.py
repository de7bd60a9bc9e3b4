#!/usr/bin/env python3
# Copyright 2026 The iscb Authors
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

"""Build MNIST-format IDX files from the `mnist` npm package (10,000 digits).

The package stores each digit class as a JSON file holding flattened 28x28
images with pixel values divided by 255 and rounded to three decimals.
Rounding v * 255 recovers the original bytes exactly.

Usage:
  tools/mnist_from_npm.py [--package DIR] [--out data/mnist]

Without --package the script runs `npm pack mnist@1.1.0` in a temporary
directory and unpacks it.
"""

import argparse
import gzip
import json
import pathlib
import struct
import subprocess
import tarfile
import tempfile

PIXELS = 28 * 28


def fetch_package(workdir: pathlib.Path) -> pathlib.Path:
    subprocess.run(["npm", "pack", "mnist@1.1.0"], cwd=workdir, check=True,
                   stdout=subprocess.DEVNULL)
    tarball = next(workdir.glob("mnist-*.tgz"))
    with tarfile.open(tarball) as tar:
        tar.extractall(workdir)
    return workdir / "package"


def read_digits(package: pathlib.Path):
    images = bytearray()
    labels = bytearray()
    for digit in range(10):
        flat = json.loads((package / "src" / "digits" / f"{digit}.json").read_text())["data"]
        if len(flat) % PIXELS:
            raise SystemExit(f"digit {digit}: {len(flat)} values is not a multiple of {PIXELS}")
        for v in flat:
            byte = round(v * 255)
            if not 0 <= byte <= 255:
                raise SystemExit(f"digit {digit}: pixel {v} out of range")
            images.append(byte)
        labels.extend([digit] * (len(flat) // PIXELS))
    return bytes(images), bytes(labels)


def write_gz(path: pathlib.Path, payload: bytes) -> None:
    # mtime=0 keeps the output byte-identical across runs.
    with open(path, "wb") as raw, gzip.GzipFile(fileobj=raw, mode="wb", mtime=0, filename="") as gz:
        gz.write(payload)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--package", type=pathlib.Path)
    parser.add_argument("--out", type=pathlib.Path, default=pathlib.Path("data/mnist"))
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        package = args.package or fetch_package(pathlib.Path(tmp))
        images, labels = read_digits(package)

    count = len(labels)
    args.out.mkdir(parents=True, exist_ok=True)
    write_gz(args.out / "mnist10k-images-idx3-ubyte.gz",
             struct.pack(">IIII", 0x803, count, 28, 28) + images)
    write_gz(args.out / "mnist10k-labels-idx1-ubyte.gz", struct.pack(">II", 0x801, count) + labels)
    print(f"wrote {count} images to {args.out}")


if __name__ == "__main__":
    main()
