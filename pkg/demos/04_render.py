"""Picture of the gasket.

The image paints every depth-k image simplex; the three big holes are the
triangles that never get covered.
"""
import sys

import numpy as np

from rauzy.render import render, write_image

depth = int(sys.argv[1]) if len(sys.argv) > 1 else 8
img = render(depth, 1024)
out = write_image(img, f"rauzy_depth{depth}.pgm")
print("wrote", out, img.shape)
print("covered fraction of the canvas:", np.mean(img == 0))
