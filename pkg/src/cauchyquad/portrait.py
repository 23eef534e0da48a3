"""Phase portraits: images of arg f(z) as a cyclic hue, written as binary PPM.

Hue follows the HSV wheel with full saturation and value, so positive
real values are red and negative real values cyan.
"""

import math
from pathlib import Path

import numpy as np

MAX_PIXELS = 4096 * 4096


def grid(window, resolution):
    """Pixel-center grid over ``window = (xmin, xmax, ymin, ymax)``.

    Row 0 is the top of the image (largest imaginary part).
    """
    xmin, xmax, ymin, ymax = (float(v) for v in window)
    width, height = (int(v) for v in resolution)
    if width < 1 or height < 1:
        raise ValueError("resolution must be positive")
    if width * height > MAX_PIXELS:
        raise ValueError("resolution is limited to 4096 x 4096")
    if not (xmin < xmax and ymin < ymax):
        raise ValueError("window must have xmin < xmax and ymin < ymax")
    x = xmin + (np.arange(width) + 0.5) * (xmax - xmin) / width
    y = ymax - (np.arange(height) + 0.5) * (ymax - ymin) / height
    return x[None, :] + 1j * y[:, None]


def phase_to_rgb(phase):
    """Map angles (radians) to 8-bit RGB through the HSV hue wheel."""
    h = np.mod(np.asarray(phase, dtype=float) / (2 * math.pi), 1.0) * 6.0
    # HSV -> RGB with s = v = 1
    rgb = np.empty(h.shape + (3,))
    for ch, n in enumerate((5.0, 3.0, 1.0)):
        k = np.mod(h + n, 6.0)
        rgb[..., ch] = 1.0 - np.clip(np.minimum(k, 4.0 - k), 0.0, 1.0)
    return np.rint(255 * rgb).astype(np.uint8)


def phase_image(f, window, resolution, shift=0j):
    """arg(f(z) + shift) on the grid, and its RGB rendering.

    Non-finite values (poles) are drawn black.
    """
    z = grid(window, resolution)
    with np.errstate(all="ignore"):
        vals = np.asarray(f(z.ravel()), dtype=complex).reshape(z.shape) + shift
    bad = ~np.isfinite(vals)
    phase = np.angle(vals)
    img = phase_to_rgb(np.where(bad, 0.0, phase))
    img[bad] = 0
    return phase, img


def write_ppm(path, img):
    img = np.ascontiguousarray(img, dtype=np.uint8)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError("image must have shape (height, width, 3)")
    h, w, _ = img.shape
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    Path(path).write_bytes(header + img.tobytes())
    return Path(path)


def read_ppm(path):
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P6":
        raise ValueError("not a binary PPM file")
    w, h = (int(v) for v in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w, 3)


def render_phase_portrait(r, window, resolution, path, shift=0j):
    """Write the phase portrait of ``r + shift`` to ``path`` (binary PPM).

    Parameters
    ----------
    r : callable
        Vectorized complex function, typically a BarycentricRational.
    window : (xmin, xmax, ymin, ymax)
    resolution : (width, height)
        At most 4096 x 4096.
    shift : complex
        Added before taking the phase, e.g. 1/2 to separate the values 0
        and -1 of a two-valued approximation.

    Returns
    -------
    ndarray
        The phase array, shape (height, width).
    """
    phase, img = phase_image(r, window, resolution, shift)
    write_ppm(path, img)
    return phase
