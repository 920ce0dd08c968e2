"""Planar polyline intersection primitives.

Level curves at a fixed height live in a plane t = const, so all the
embeddedness machinery reduces to 2D segment geometry.  Candidate segment
pairs are pruned with per-block bounding boxes (blocks of consecutive
segments), then resolved by an exact distance test: two segments are
reported as intersecting when their minimum distance falls below a world
tolerance.
"""

from __future__ import annotations

import numpy as np

DEFAULT_TOLERANCE = 1e-9
BLOCK_SIZE = 64


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _point_segment_distance(p, a, b):
    """Distance from points p to segments [a, b]; all arrays (..., 2)."""
    d = b - a
    denom = np.einsum("...i,...i", d, d)
    t = np.einsum("...i,...i", p - a, d) / np.where(denom > 0.0, denom, 1.0)
    t = np.clip(t, 0.0, 1.0)
    closest = a + t[..., None] * d
    return np.linalg.norm(p - closest, axis=-1)


def segment_pair_distance(a0, a1, b0, b1):
    """Minimum distance between segments [a0,a1] and [b0,b1], broadcast.

    Properly crossing pairs give 0; otherwise the minimum is attained at an
    endpoint, so four point-to-segment distances cover every other case
    (including collinear overlap).
    """
    a0, a1, b0, b1 = np.broadcast_arrays(
        np.asarray(a0, float), np.asarray(a1, float),
        np.asarray(b0, float), np.asarray(b1, float),
    )
    da = a1 - a0
    db = b1 - b0
    o1 = _cross2(da, b0 - a0)
    o2 = _cross2(da, b1 - a0)
    o3 = _cross2(db, a0 - b0)
    o4 = _cross2(db, a1 - b0)
    crossing = (o1 * o2 < 0.0) & (o3 * o4 < 0.0)
    dist = np.minimum.reduce([
        _point_segment_distance(b0, a0, a1),
        _point_segment_distance(b1, a0, a1),
        _point_segment_distance(a0, b0, b1),
        _point_segment_distance(a1, b0, b1),
    ])
    return np.where(crossing, 0.0, dist)


def _segments(points):
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
        raise ValueError("polyline must be an (N >= 2, 2) array")
    return pts[:-1], pts[1:]


def _block_boxes(lo_pts, hi_pts, block):
    count = lo_pts.shape[0]
    edges = np.arange(0, count, block)
    boxes = []
    for s in edges:
        e = min(s + block, count)
        chunk = np.concatenate([lo_pts[s:e], hi_pts[s:e]])
        boxes.append((chunk.min(axis=0), chunk.max(axis=0), s, e))
    return boxes


def _boxes_overlap(b1, b2, tol):
    return bool(np.all(b1[0] - tol <= b2[1]) and np.all(b2[0] - tol <= b1[1]))


def _pairs_below(a0, a1, b0, b1, ia, ib, tol, skip_adjacent):
    d = segment_pair_distance(
        a0[:, None, :], a1[:, None, :], b0[None, :, :], b1[None, :, :]
    )
    ii, jj = np.meshgrid(ia, ib, indexing="ij")
    mask = d < tol
    if skip_adjacent:
        mask &= np.abs(ii - jj) > 1
    return [(int(i), int(j), float(v)) for i, j, v in
            zip(ii[mask], jj[mask], d[mask])]


def polyline_self_intersections(points, tol=DEFAULT_TOLERANCE, block=BLOCK_SIZE):
    """Segment index pairs of a polyline closer than tol, skipping neighbors.

    Returns a list of (i, j, distance) with i < j - 1; an empty list
    certifies the sampled polyline is simple at the given tolerance.
    """
    a, b = _segments(points)
    boxes = _block_boxes(a, b, block)
    hits = []
    for bi in range(len(boxes)):
        for bj in range(bi, len(boxes)):
            if not _boxes_overlap(boxes[bi], boxes[bj], tol):
                continue
            s1, e1 = boxes[bi][2], boxes[bi][3]
            s2, e2 = boxes[bj][2], boxes[bj][3]
            found = _pairs_below(
                a[s1:e1], b[s1:e1], a[s2:e2], b[s2:e2],
                np.arange(s1, e1), np.arange(s2, e2), tol, True,
            )
            hits.extend((i, j, v) for i, j, v in found if i < j)
    return sorted(set(hits))


def polyline_pair_intersections(points_a, points_b, tol=DEFAULT_TOLERANCE,
                                block=BLOCK_SIZE):
    """Segment index pairs between two polylines closer than tol."""
    a0, a1 = _segments(points_a)
    b0, b1 = _segments(points_b)
    boxes_a = _block_boxes(a0, a1, block)
    boxes_b = _block_boxes(b0, b1, block)
    hits = []
    for ba in boxes_a:
        for bb in boxes_b:
            if not _boxes_overlap(ba, bb, tol):
                continue
            hits.extend(_pairs_below(
                a0[ba[2]:ba[3]], a1[ba[2]:ba[3]],
                b0[bb[2]:bb[3]], b1[bb[2]:bb[3]],
                np.arange(ba[2], ba[3]), np.arange(bb[2], bb[3]), tol, False,
            ))
    return sorted(set(hits))


def polyline_pair_min_distance(points_a, points_b, block=BLOCK_SIZE) -> float:
    """Minimum distance between two polylines (exact on the samples).

    Prunes with block boxes against the best bound found so far.
    """
    a0, a1 = _segments(points_a)
    b0, b1 = _segments(points_b)
    boxes_a = _block_boxes(a0, a1, block)
    boxes_b = _block_boxes(b0, b1, block)
    # seed the bound from coarse vertex pairs (each an attainable distance)
    # so pruning engages even when the close approach sits late in box order
    sa = max(1, a0.shape[0] // 64)
    sb = max(1, b0.shape[0] // 64)
    diff = a0[::sa, None, :] - b0[None, ::sb, :]
    best = float(np.sqrt((diff * diff).sum(axis=-1)).min())
    for ba in boxes_a:
        for bb in boxes_b:
            gap = np.maximum(ba[0] - bb[1], bb[0] - ba[1])
            if float(np.linalg.norm(np.maximum(gap, 0.0))) >= best:
                continue
            d = segment_pair_distance(
                a0[ba[2]:ba[3], None, :], a1[ba[2]:ba[3], None, :],
                b0[None, bb[2]:bb[3], :], b1[None, bb[2]:bb[3], :],
            )
            best = min(best, float(d.min()))
    return best
