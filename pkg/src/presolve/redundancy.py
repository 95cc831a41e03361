"""Closed-form redundancy certificates.

A row c x <= b is redundant on a set when the maximum of c x over the set
does not exceed b. Centers that already violate the row are never
certified.
"""
import numpy as np


def test_box(c, b: float, box) -> bool:
    """max over the box of c x <= b."""
    return bool(box.max_linear(np.asarray(c, dtype=float)) <= b)


def test_ellipse(c, b: float, ellipse) -> bool:
    """max over the ellipsoid (or level set) of c x <= b."""
    return bool(ellipse.max_linear(np.asarray(c, dtype=float)) <= b)


def redundant_rows(C, b, set_) -> np.ndarray:
    """Mask of the rows of C x <= b certified redundant on set_."""
    return np.asarray(set_.max_linear(np.asarray(C, dtype=float)) <= np.asarray(b, dtype=float))
