"""Hot inner loops, each in two flavours.

``*_nb`` are numba-compiled scalar loops; ``*_np`` are vectorised numpy
equivalents used when numba is absent or ``SCATPLANE_PURE_NUMPY`` is set.
Both flavours return identical results (the test-suite runs them side by
side); :func:`dispatch` picks one.

All field arithmetic here goes through the raw tables of
:class:`scatplane.field.Tables`: ``exp`` has length 2(n-1) so log sums never
need a modulo. Addition is XOR in characteristic 2 and a lookup in a
dense addition table otherwise.
"""

from __future__ import annotations

import numpy as np

from ._accel import HAVE_NUMBA, njit, resolve

from .field import Tables, vadd, vmul, vsub

NONE = -1

# ---------------------------------------------------------------------------
# scalar field helpers (compiled)
#
# Addition is resolved at compile time from the type of ``addt``. Helpers
# stay branch-light: numba cannot prune the array refcounts around inlined
# calls with nested branches, and those atomics would dominate the loops.


@njit(inline="always")
def _mul(x, y, exp, log):
    if x == 0 or y == 0:
        return 0
    return exp[log[x] + log[y]]


@njit(inline="always")
def _add(x, y, nm1, addt):
    """Field addition: XOR in characteristic 2 (``addt`` is None), else a
    lookup in the flattened n x n addition table."""
    if addt is None:
        return x ^ y
    return np.int64(addt[x * (nm1 + 1) + y])


def field_args(T: Tables):
    """(p, nm1, exp, log, zech, addt) as the kernels take them."""
    return T.p, T.nm1, T.exp, T.log, T.zech, addition_table(T)


_ADD_TABLES: dict = {}


def addition_table(T: Tables):
    """Flattened x + y table for odd p (None for p = 2), cached per field."""
    if T.p == 2:
        return None
    key = (T.p, T.nm1, id(T.exp))
    tab = _ADD_TABLES.get(key)
    if tab is None:
        n = T.nm1 + 1
        x = np.arange(n, dtype=np.int64)
        tab = np.empty(n * n, dtype=np.int32)
        step = max(1, (1 << 20) // n)
        for lo in range(0, n, step):
            rows = x[lo : lo + step, None]
            tab[lo * n : (lo + len(rows)) * n] = vadd(rows, x[None, :], T).ravel()
        _ADD_TABLES.clear()  # keep one field's table alive at a time
        _ADD_TABLES[key] = tab
    return tab


@njit(inline="always")
def _inv(x, nm1, exp, log):
    return exp[nm1 - log[x]]


def _vinv(x, T: Tables):
    return T.exp[T.nm1 - T.log[np.maximum(x, 1)]]


# ---------------------------------------------------------------------------
# equivalence / stabilizer search
#
# For a fixed automorphism s and a row range of a, scan every (a, b):
#   u(x) = a X + b Y with X = x^s, Y = f(x)^s on the basis,
#   R_k = f'(u(x_k)), then (c, d) from the pivot pair (i, j), verified on
#   the remaining basis vectors. u is bijective iff -a/b is not a slope of
#   f^s (b != 0) or a != 0 (b == 0).
#
# Every product with a per-automorphism constant is a table lookup
# (see scan_tables); only a*d and b*c go through exp/log.


def scan_tables(X, Y, pi, pj, dinv, T: Tables):
    """Constant-multiplier tables for one automorphism."""
    z = np.arange(T.nm1 + 1, dtype=np.int64)
    MX = np.stack([vmul(z, x, T) for x in X])
    MY = np.stack([vmul(z, y, T) for y in Y])
    bY = np.ascontiguousarray(MY.T)
    cR_i = vmul(z, vmul(Y[pj], dinv, T), T)
    cR_j = T.neg[vmul(z, vmul(Y[pi], dinv, T), T)]
    dR_j = vmul(z, vmul(X[pi], dinv, T), T)
    dR_i = T.neg[vmul(z, vmul(X[pj], dinv, T), T)]
    nib = T.neg[_vinv(z, T)]
    nib[0] = 0
    return MX, MY, bY, cR_i, cR_j, dR_i, dR_j, nib


@njit
def _equiv_scan_nb(a_lo, a_hi, n, p, nm1, exp, log, zech, addt,
                   MX, MY, bY, cR_i, cR_j, dR_i, dR_j, nib, pi, pj, fpv, in_l, count_all):
    t = MX.shape[0]
    aX = np.empty(t, dtype=np.int64)
    count = 0
    for a in range(a_lo, a_hi):
        for k in range(t):
            aX[k] = MX[k, a]
        for b in range(n):
            if b == 0:
                if a == 0:
                    continue
            elif in_l[_mul(a, nib[b], exp, log)]:
                continue
            Ri = fpv[_add(aX[pi], bY[b, pi], nm1, addt)]
            Rj = fpv[_add(aX[pj], bY[b, pj], nm1, addt)]
            c = _add(cR_i[Ri], cR_j[Rj], nm1, addt)
            d = _add(dR_j[Rj], dR_i[Ri], nm1, addt)
            ok = True
            for k in range(t):
                if k == pi or k == pj:
                    continue
                u = _add(aX[k], bY[b, k], nm1, addt)
                if _add(MX[k, c], MY[k, d], nm1, addt) != fpv[u]:
                    ok = False
                    break
            if not ok or _mul(a, d, exp, log) == _mul(b, c, exp, log):
                continue
            count += 1
            if not count_all:
                return count, a, b, c, d
    return count, NONE, NONE, NONE, NONE

def _equiv_scan_np(a_lo, a_hi, n, p, nm1, exp, log, zech, addt,
                   MX, MY, bY, cR_i, cR_j, dR_i, dR_j, nib, pi, pj, fpv, in_l, count_all):
    T = Tables(p, nm1, exp, log, zech, None)
    t = MX.shape[0]
    chunk = max(1, (1 << 18) // n)
    b = np.arange(n, dtype=np.int64)[None, :]
    count = 0
    for lo in range(a_lo, a_hi, chunk):
        a = np.arange(lo, min(lo + chunk, a_hi), dtype=np.int64)[:, None]
        good = np.where(b == 0, a != 0, ~in_l[vmul(a, nib[b], T)])
        Ri = fpv[vadd(MX[pi][a], MY[pi][b], T)]
        Rj = fpv[vadd(MX[pj][a], MY[pj][b], T)]
        c = vadd(cR_i[Ri], cR_j[Rj], T)
        d = vadd(dR_j[Rj], dR_i[Ri], T)
        for k in range(t):
            if k != pi and k != pj:
                u = vadd(MX[k][a], MY[k][b], T)
                good &= vadd(MX[k][c], MY[k][d], T) == fpv[u]
        good &= vmul(a, d, T) != vmul(b, c, T)
        if count_all:
            count += int(np.count_nonzero(good))
        elif good.any():
            ia, ib = np.unravel_index(int(np.argmax(good)), good.shape)
            return 1, int(a[ia, 0]), int(ib), int(c[ia, ib]), int(d[ia, ib])
    return count, NONE, NONE, NONE, NONE


# ---------------------------------------------------------------------------
# brute-force oracle: every invertible (a, b, c, d) for one automorphism,
# checking every element of U_f lands in U_f'.


@njit
def _oracle_scan_nb(n, p, nm1, exp, log, zech, addt, neg, Xs, Ys, fpv):
    MX = np.empty((n, n), dtype=np.int64)
    MY = np.empty((n, n), dtype=np.int64)
    for c in range(n):
        for x in range(n):
            MX[c, x] = _mul(c, Xs[x], exp, log)
            MY[c, x] = _mul(c, Ys[x], exp, log)
    R = np.empty(n, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            for x in range(n):
                R[x] = fpv[_add(MX[a, x], MY[b, x], nm1, addt)]
            for c in range(n):
                for d in range(n):
                    ok = True
                    for x in range(n):
                        if _add(MX[c, x], MY[d, x], nm1, addt) != R[x]:
                            ok = False
                            break
                    if ok and _mul(a, d, exp, log) != _mul(b, c, exp, log):
                        return a, b, c, d
    return NONE, NONE, NONE, NONE

def _oracle_scan_np(n, p, nm1, exp, log, zech, addt, neg, Xs, Ys, fpv):
    T = Tables(p, nm1, exp, log, zech, neg)
    cc = np.arange(n, dtype=np.int64)[:, None, None]
    dd = np.arange(n, dtype=np.int64)[None, :, None]
    V = vadd(vmul(cc, Xs[None, None, :], T), vmul(dd, Ys[None, None, :], T), T)
    for a in range(n):
        aX = vmul(a, Xs, T)
        for b in range(n):
            U = vadd(aX, vmul(b, Ys, T), T)
            good = np.all(V == fpv[U][None, None, :], axis=2)
            c2, d2 = cc[:, :, 0], dd[:, :, 0]
            good &= vsub(vmul(a, d2, T), vmul(b, c2, T), T) != 0
            if good.any():
                ic, id_ = np.unravel_index(int(np.argmax(good)), good.shape)
                return a, b, int(ic), int(id_)
    return NONE, NONE, NONE, NONE


# ---------------------------------------------------------------------------
# quasifield table checks. Table convention: Q[m, x] = x o m.


@njit
def _left_distrib_nb(Q, p, nm1, exp, log, zech, addt):
    n = Q.shape[0]
    for m in range(n):
        for x in range(n):
            for y in range(n):
                lhs = Q[m, _add(x, y, nm1, addt)]
                rhs = _add(Q[m, x], Q[m, y], nm1, addt)
                if lhs != rhs:
                    return m, x, y
    return NONE, NONE, NONE

def _left_distrib_np(Q, p, nm1, exp, log, zech, addt):
    T = Tables(p, nm1, exp, log, zech, None)
    n = Q.shape[0]
    x = np.arange(n, dtype=np.int64)[:, None]
    y = np.arange(n, dtype=np.int64)[None, :]
    s = vadd(x, y, T)
    for m in range(n):
        row = Q[m]
        bad = row[s] != vadd(row[x], row[y], T)
        if bad.any():
            ix, iy = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return m, int(ix), int(iy)
    return NONE, NONE, NONE


@njit
def _solvability_nb(Q, p, nm1, exp, log, zech, addt, neg):
    """For a != b, x -> x o a - x o b must be a bijection. Returns the
    first (a, b, c) where x o a = x o b + c does not have exactly one root."""
    n = Q.shape[0]
    hits = np.zeros(n, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            hits[:] = 0
            for x in range(n):
                w = _add(Q[a, x], neg[Q[b, x]], nm1, addt)
                hits[w] += 1
            for c in range(n):
                if hits[c] != 1:
                    return a, b, c
    return NONE, NONE, NONE

def _solvability_np(Q, p, nm1, exp, log, zech, addt, neg):
    T = Tables(p, nm1, exp, log, zech, neg)
    n = Q.shape[0]
    idx = np.arange(n, dtype=np.int64)
    for a in range(n):
        W = vsub(Q[a][None, :], Q, T)  # row b holds x o a - x o b
        W[a] = np.arange(n)  # a == b excluded
        hits = np.bincount((idx[:, None] * n + W).ravel(), minlength=n * n).reshape(n, n)
        bad = hits != 1
        if bad.any():
            ib, ic = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return a, int(ib), int(ic)
    return NONE, NONE, NONE


@njit
def _kernel_mask_nb(Q, p, nm1, exp, log, zech, addt):
    n = Q.shape[0]
    mask = np.ones(n, dtype=np.bool_)
    for k in range(n):
        ok = True
        for x in range(n):
            kx = Q[x, k]
            for y in range(n):
                if Q[_add(x, y, nm1, addt), k] != _add(kx, Q[y, k], nm1, addt):
                    ok = False
                    break
                if Q[Q[y, x], k] != Q[y, kx]:
                    ok = False
                    break
            if not ok:
                break
        mask[k] = ok
    return mask

def _kernel_mask_np(Q, p, nm1, exp, log, zech, addt):
    T = Tables(p, nm1, exp, log, zech, None)
    n = Q.shape[0]
    x = np.arange(n, dtype=np.int64)[:, None]
    y = np.arange(n, dtype=np.int64)[None, :]
    s = vadd(x, y, T)
    xy = Q[y, x]  # x o y
    mask = np.ones(n, dtype=bool)
    for k in range(n):
        col = Q[:, k]  # col[z] = k o z
        dist = col[s] == vadd(col[x], col[y], T)
        assoc = col[xy] == Q[y, col[x]]
        mask[k] = bool(dist.all() and assoc.all())
    return mask


@njit
def _right_distrib_nb(Q, p, nm1, exp, log, zech, addt):
    n = Q.shape[0]
    for x in range(n):
        for m in range(n):
            for k in range(n):
                lhs = Q[_add(m, k, nm1, addt), x]
                if lhs != _add(Q[m, x], Q[k, x], nm1, addt):
                    return x, m, k
    return NONE, NONE, NONE

def _right_distrib_np(Q, p, nm1, exp, log, zech, addt):
    T = Tables(p, nm1, exp, log, zech, None)
    n = Q.shape[0]
    m = np.arange(n, dtype=np.int64)[:, None]
    k = np.arange(n, dtype=np.int64)[None, :]
    s = vadd(m, k, T)
    for x in range(n):
        col = Q[:, x]
        bad = col[s] != vadd(col[m], col[k], T)
        if bad.any():
            im, ik = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return x, int(im), int(ik)
    return NONE, NONE, NONE


@njit
def _assoc_nb(Q):
    n = Q.shape[0]
    for x in range(n):
        for y in range(n):
            xy = Q[y, x]
            for z in range(n):
                if Q[z, xy] != Q[Q[z, y], x]:
                    return x, y, z
    return NONE, NONE, NONE


def _assoc_np(Q):
    n = Q.shape[0]
    y = np.arange(n, dtype=np.int64)[:, None]
    z = np.arange(n, dtype=np.int64)[None, :]
    yz = Q[z, y]  # y o z
    for x in range(n):
        bad = Q[z, Q[y, x]] != Q[yz, x]
        if bad.any():
            iy, iz = np.unravel_index(int(np.argmax(bad)), bad.shape)
            return x, int(iy), int(iz)
    return NONE, NONE, NONE


# ---------------------------------------------------------------------------
# affine plane checks on coset labels. Points are codes x*n + y.


@njit
def _coset_labels_nb(elems, n, p, nm1, exp, log, zech, addt):
    """label[P] = index (0..) of the coset P + V, cosets numbered by their
    least point; reps[i] = least point of coset i."""
    npts = n * n
    label = np.full(npts, -1, dtype=np.int64)
    reps = np.empty(npts // elems.shape[0] + 1, dtype=np.int64)
    nxt = 0
    for P in range(npts):
        if label[P] >= 0:
            continue
        if nxt >= reps.shape[0]:
            return label, reps[:0], False
        reps[nxt] = P
        px = P // n
        py = P - px * n
        for e in elems:
            ex = e // n
            ey = e - ex * n
            Q = _add(px, ex, nm1, addt) * n + _add(py, ey, nm1, addt)
            if label[Q] >= 0 and label[Q] != nxt:
                return label, reps[:0], False
            label[Q] = nxt
        nxt += 1
    return label, reps[:nxt], True

def _coset_labels_np(elems, n, p, nm1, exp, log, zech, addt):
    T = Tables(p, nm1, exp, log, zech, None)
    npts = n * n
    label = np.full(npts, -1, dtype=np.int64)
    ex, ey = elems // n, elems % n
    reps = []
    for P in range(npts):
        if label[P] >= 0:
            continue
        pts = vadd(P // n, ex, T) * n + vadd(P % n, ey, T)
        if (label[pts] >= 0).any():
            return label, np.zeros(0, dtype=np.int64), False
        label[pts] = len(reps)
        reps.append(P)
    return label, np.array(reps, dtype=np.int64), True


@njit
def _incidence_nb(labels, nlines):
    """Every pair of lines from different parallel classes must meet in
    exactly one point. Returns (c1, c2, l1, l2, count) of the first bad cell."""
    ncomp, npts = labels.shape
    cells = np.zeros(nlines * nlines, dtype=np.int64)
    for c1 in range(ncomp):
        for c2 in range(c1 + 1, ncomp):
            cells[:] = 0
            for P in range(npts):
                cells[labels[c1, P] * nlines + labels[c2, P]] += 1
            for cell in range(nlines * nlines):
                if cells[cell] != 1:
                    return c1, c2, cell // nlines, cell % nlines, cells[cell]
    return NONE, NONE, NONE, NONE, NONE


def _incidence_np(labels, nlines):
    ncomp = labels.shape[0]
    for c1 in range(ncomp):
        for c2 in range(c1 + 1, ncomp):
            cells = np.bincount(labels[c1] * nlines + labels[c2], minlength=nlines * nlines)
            bad = cells != 1
            if bad.any():
                cell = int(np.argmax(bad))
                return c1, c2, cell // nlines, cell % nlines, int(cells[cell])
    return NONE, NONE, NONE, NONE, NONE


# ---------------------------------------------------------------------------

_KERNELS = {
    "equiv_scan": (_equiv_scan_nb, _equiv_scan_np),
    "oracle_scan": (_oracle_scan_nb, _oracle_scan_np),
    "left_distrib": (_left_distrib_nb, _left_distrib_np),
    "solvability": (_solvability_nb, _solvability_np),
    "kernel_mask": (_kernel_mask_nb, _kernel_mask_np),
    "right_distrib": (_right_distrib_nb, _right_distrib_np),
    "assoc": (_assoc_nb, _assoc_np),
    "coset_labels": (_coset_labels_nb, _coset_labels_np),
    "incidence": (_incidence_nb, _incidence_np),
}


def dispatch(name: str, backend=None):
    nb, np_ = _KERNELS[name]
    if resolve(backend) == "numba" and HAVE_NUMBA:
        return nb
    return np_
