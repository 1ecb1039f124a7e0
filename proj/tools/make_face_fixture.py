#!/usr/bin/env python3
"""Builds tests/data/faces165-idx3-ubyte from the LFW subset shipped with scikit-image.

The subset holds 100 face crops (25x25); the first 65 are mirrored horizontally to
reach 165 images. Pixels are rescaled to 0..255 and written as an IDX3 file.
"""
import struct
import sys

import numpy as np
from skimage import data

out = sys.argv[1] if len(sys.argv) > 1 else "tests/data/faces165-idx3-ubyte"
faces = data.lfw_subset()[:100].astype(np.float64)
if faces.max() <= 1.0:
    faces *= 255.0
stack = np.concatenate([faces, faces[:65, :, ::-1]], axis=0)
pixels = np.clip(np.rint(stack), 0, 255).astype(np.uint8)
with open(out, "wb") as f:
    f.write(struct.pack(">IIII", 0x803, *pixels.shape))
    f.write(pixels.tobytes())
