"""
Binary 8-bit grayscale PGM (P5) reading and writing.

Pixel values map to the canonical range by ``v / maxval`` on read and are
rounded from ``255 * v`` (clipped to ``[0, 255]``) on write.
"""

import numpy as np


class PGMError(ValueError):
    """Malformed or unsupported PGM file."""


def _header_fields(data, count):
    """Read ``count`` whitespace separated header tokens, skipping comments."""
    fields = []
    pos = 0
    while len(fields) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos >= len(data):
            raise PGMError("truncated PGM header")
        if data[pos : pos + 1] == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    return fields, pos + 1


def parse_pgm(data):
    fields, offset = _header_fields(data, 4)
    if fields[0] != b"P5":
        raise PGMError("unsupported PGM magic %r, expected b'P5'" % fields[0])
    try:
        width, height, maxval = (int(f) for f in fields[1:])
    except ValueError:
        raise PGMError("non-numeric PGM header field")
    if width < 1 or height < 1:
        raise PGMError(f"invalid PGM dimensions {width}x{height}")
    if not 0 < maxval < 256:
        raise PGMError(f"only 8-bit PGM files are supported, got maxval {maxval}")
    raster = data[offset : offset + width * height]
    if len(raster) != width * height:
        raise PGMError(
            "PGM raster holds %d bytes, expected %d" % (len(raster), width * height)
        )
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return pixels.astype(np.float64) / maxval


def read_pgm(path):
    with open(path, "rb") as f:
        return parse_pgm(f.read())


def _to_pixels(img):
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"PGM images must be 2-D, got shape {img.shape}")
    return np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)


def quantize(img):
    """The image as it reads back after ``write_pgm``."""
    return _to_pixels(img).astype(np.float64) / 255.0


def to_bytes(img):
    pixels = _to_pixels(img)
    height, width = pixels.shape
    header = b"P5\n%d %d\n255\n" % (width, height)
    return header + pixels.tobytes()


def write_pgm(path, img):
    with open(path, "wb") as f:
        f.write(to_bytes(img))
