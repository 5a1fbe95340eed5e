"""Pure-numpy reference kernels.

These mirror the compiled kernels in ``_fast`` exactly; the dispatcher in
``__init__`` picks whichever backend is available (or forced via the
BETAPLURALITY_PURE environment variable).

The central routine is the disk-arrangement depth sweep: given disks
B(c_i, r_i), find the maximum number of open disks containing a common point.
The maximum over open cells is attained just inside some circle i, so for each
circle we sweep the angular intervals in which its boundary lies strictly
inside every other disk and report the best angle.
"""
import numpy as np

BACKEND = "numpy"

_TWO_PI = 2.0 * np.pi


def depth_sweep(cx, cy, rad, tol=1e-12):
    """Maximum open-cell depth of the disk arrangement.

    Returns (depth, circle_index, angle): a point just inside circle
    `circle_index` at `angle` lies in `depth` open disks. Zero-radius disks
    are empty and never contribute. Returns (0, -1, 0.0) when every disk is
    empty.
    """
    cx = np.asarray(cx, dtype=float)
    cy = np.asarray(cy, dtype=float)
    rad = np.asarray(rad, dtype=float)
    pos = np.nonzero(rad > 0.0)[0]
    if pos.size == 0:
        return 0, -1, 0.0
    atol = tol * max(float(rad.max()), 1.0)
    best_depth, best_i, best_ang = 0, -1, 0.0
    pcx, pcy, prad = cx[pos], cy[pos], rad[pos]
    for li in range(pos.size):
        ri = prad[li]
        dx = pcx - pcx[li]
        dy = pcy - pcy[li]
        D = np.hypot(dx, dy)
        rj = prad
        full = D + ri <= rj + atol
        full[li] = False
        partial = (~full) & (D + rj > ri + atol) & (D < ri + rj - atol) & (D > 0.0)
        full[li] = False
        base = int(np.count_nonzero(full))
        if not partial.any():
            depth = 1 + base
            if depth > best_depth:
                best_depth, best_i, best_ang = depth, int(pos[li]), 0.0
            continue
        Dp = D[partial]
        phi0 = np.arctan2(dy[partial], dx[partial])
        cos_half = (Dp * Dp + ri * ri - rj[partial] ** 2) / (2.0 * Dp * ri)
        half = np.arccos(np.clip(cos_half, -1.0, 1.0))
        s = np.mod(phi0 - half, _TWO_PI)
        e = np.mod(phi0 + half, _TWO_PI)
        base += int(np.count_nonzero(s > e))  # wrapping arcs cover angle 0
        ang = np.concatenate([s, e])
        delta = np.concatenate([np.ones(s.size, int), -np.ones(e.size, int)])
        order = np.lexsort((delta, ang))  # ends before starts at equal angle
        ang_s = ang[order]
        run = base + np.cumsum(delta[order])
        nxt = np.append(ang_s[1:], ang_s[0] + _TWO_PI)
        seg = nxt > ang_s  # open segments only
        # initial segment [0, first event): coverage = base
        depth = 1 + base
        cand_ang = 0.5 * ang_s[0] if ang_s[0] > 0.0 else 0.0
        if seg.any():
            k = int(np.argmax(np.where(seg, run, -1)))
            if run[k] > depth - 1:
                depth = 1 + int(run[k])
                cand_ang = np.mod(0.5 * (ang_s[k] + nxt[k]), _TWO_PI)
        if depth > best_depth:
            best_depth, best_i, best_ang = depth, int(pos[li]), float(cand_ang)
    return best_depth, best_i, best_ang


def decide_many(vx, vy, px, py, beta, tol=1e-12):
    """Exact planar β-plurality decisions for many candidate points p.

    For each candidate, disks are B(v_i, beta*|p v_i|); the answer is yes
    iff 2 * maxdepth <= n. A cheap pre-filter tests every voter position as a
    competitor first (a strict advantage there already forces "no").
    """
    vx = np.asarray(vx, dtype=float)
    vy = np.asarray(vy, dtype=float)
    px = np.atleast_1d(np.asarray(px, dtype=float))
    py = np.atleast_1d(np.asarray(py, dtype=float))
    n = vx.size
    m = px.size
    out = np.zeros(m, dtype=np.uint8)
    dvv = np.hypot(vx[:, None] - vx[None, :], vy[:, None] - vy[None, :])
    for k in range(m):
        rad = beta * np.hypot(vx - px[k], vy - py[k])
        atol = tol * max(float(rad.max()), 1.0) if n else 0.0
        # voter-position competitors: strict wins only
        wins = np.count_nonzero(dvv < rad[None, :] - atol, axis=1)
        if int(wins.max(initial=0)) * 2 - n >= 1:
            out[k] = 0
            continue
        depth, _, _ = depth_sweep(vx, vy, rad, tol)
        out[k] = 1 if 2 * depth <= n else 0
    return out


def max_advantage_points(cx, cy, rad, qx, qy, rtol=1e-12):
    """Best competitor among the points (qx, qy) against disks B(c_i, r_i).

    advantage(q) = #(strictly inside) - #(strictly outside), with relative
    tie tolerance rtol. Returns (best_advantage, best_index); first maximum
    wins ties.
    """
    cx = np.asarray(cx, dtype=float)
    cy = np.asarray(cy, dtype=float)
    rad = np.asarray(rad, dtype=float)
    qx = np.atleast_1d(np.asarray(qx, dtype=float))
    qy = np.atleast_1d(np.asarray(qy, dtype=float))
    best_adv = -(cx.size + 1)
    best_idx = -1
    for lo in range(0, qx.size, 256):
        hi = min(lo + 256, qx.size)
        d = np.hypot(qx[lo:hi, None] - cx[None, :], qy[lo:hi, None] - cy[None, :])
        on = np.abs(d - rad[None, :]) <= rtol * np.maximum(rad[None, :], d)
        ins = np.count_nonzero((d < rad[None, :]) & ~on, axis=1)
        outs = np.count_nonzero((d > rad[None, :]) & ~on, axis=1)
        adv = ins - outs
        k = int(np.argmax(adv))
        if adv[k] > best_adv:
            best_adv = int(adv[k])
            best_idx = lo + k
    return best_adv, best_idx
