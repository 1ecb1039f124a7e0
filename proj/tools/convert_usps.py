#!/usr/bin/env python3
"""Converts the LIBSVM-format USPS files (usps, usps.t) into labeled csv-matrix files.

Features in [-1, 1] are mapped to 0..255 and labels 1..10 to 0..9.

    python3 tools/convert_usps.py usps usps_train.csv
    python3 tools/convert_usps.py usps.t usps_test.csv
"""
import sys


def convert(src, dst, dim=256):
    with open(src) as fin, open(dst, "w") as fout:
        for line in fin:
            parts = line.split()
            if not parts:
                continue
            label = int(float(parts[0])) - 1
            row = [0.0] * dim
            for item in parts[1:]:
                idx, val = item.split(":")
                row[int(idx) - 1] = float(val)
            pixels = [str(int(round((v + 1.0) * 127.5))) for v in row]
            fout.write(str(label) + "," + ",".join(pixels) + "\n")


if __name__ == "__main__":
    convert(sys.argv[1], sys.argv[2])
