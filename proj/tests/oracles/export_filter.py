"""Convert a libdlf Hankel filter (.npz) into the plain-text asset format.

usage: export_filter.py <libdlf npz> <name> <outdir>
"""
import sys

import numpy as np


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def main():
    src, name, outdir = sys.argv[1:4]
    base, j0, j1 = np.load(src)["dlf"]
    logb = np.log(base)
    n = len(base)
    spacing = float((logb[-1] - logb[0]) / (n - 1))
    shift = float(-logb[0])
    for tag, w in (("J0", j0), ("J1", j1)):
        body = "".join(f"{float(v)!r}\n" for v in w).encode()
        with open(f"{outdir}/{name}.{tag.lower()}.txt", "wb") as f:
            f.write(f"# hankel-filter {tag} {n} {spacing!r} {shift!r}\n".encode())
            f.write(body)
            f.write(f"# checksum fnv1a64 {fnv1a64(body):016x}\n".encode())


if __name__ == "__main__":
    main()
