# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled split-search kernel.

Mirror of ccs.kernels._pytree: identical splitmix64 stream, identical
class-accumulation order for split scores, identical tie-breaking. The
two implementations must produce bit-identical trees; tests enforce it.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc, qsort
from libc.string cimport memset

cnp.import_array()

ctypedef unsigned long long u64

cdef u64 GOLDEN = 0x9E3779B97F4A7C15ULL


cdef inline u64 _mix64(u64 z) noexcept nogil:
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline u64 _next64(u64 seed, u64* counter) noexcept nogil:
    counter[0] += 1
    return _mix64(seed + counter[0] * GOLDEN)


cdef inline u64 _below(u64 seed, u64* counter, u64 n) noexcept nogil:
    return _next64(seed, counter) % n


cdef struct ValCls:
    double v
    int c


cdef int _cmp_valcls(const void* pa, const void* pb) noexcept nogil:
    cdef double a = (<const ValCls*> pa).v
    cdef double b = (<const ValCls*> pb).v
    if a < b:
        return -1
    if a > b:
        return 1
    return 0


cdef int _search_split(
    const double* Xp,
    Py_ssize_t n_features,
    const int* yp,
    long long* seg,
    Py_ssize_t k,
    const long long* counts,
    const double* w,
    int n_classes,
    long long* fperm,
    int max_features,
    int min_leaf,
    u64 seed,
    u64* counter,
    ValCls* buf,
    long long* cnt_left,
    double* out_threshold,
    Py_ssize_t* out_nleft,
) noexcept nogil:
    cdef Py_ssize_t i, j, t
    cdef int c, f, best_feature = -1
    cdef double a, b, thr, tl, tr, lw, lsq, rw, rsq, score
    cdef double best_score = -1e308
    cdef long long tmp

    for i in range(n_features):
        fperm[i] = i
    for j in range(max_features):
        t = j + <Py_ssize_t> _below(seed, counter, <u64> (n_features - j))
        tmp = fperm[j]
        fperm[j] = fperm[t]
        fperm[t] = tmp

    for j in range(max_features):
        f = <int> fperm[j]
        for i in range(k):
            buf[i].v = Xp[seg[i] * n_features + f]
            buf[i].c = yp[seg[i]]
        qsort(buf, k, sizeof(ValCls), _cmp_valcls)
        if buf[0].v == buf[k - 1].v:
            continue

        memset(cnt_left, 0, n_classes * sizeof(long long))
        for i in range(k - 1):
            cnt_left[buf[i].c] += 1
            if i + 1 < min_leaf or k - i - 1 < min_leaf:
                continue
            if not buf[i].v < buf[i + 1].v:
                continue
            lw = 0.0
            lsq = 0.0
            rw = 0.0
            rsq = 0.0
            for c in range(n_classes):
                tl = w[c] * cnt_left[c]
                lw += tl
                lsq += tl * tl
                tr = w[c] * (counts[c] - cnt_left[c])
                rw += tr
                rsq += tr * tr
            score = lsq / lw + rsq / rw
            if score > best_score:
                a = buf[i].v
                b = buf[i + 1].v
                thr = (a + b) / 2.0
                if thr == b:
                    thr = a
                best_score = score
                best_feature = f
                out_threshold[0] = thr
                out_nleft[0] = i + 1
    return best_feature


def build_tree(
    object X_in,
    object y_in,
    int n_classes,
    object sample_idx,
    int max_features,
    int min_leaf,
    int max_depth,
    object seed,
    object class_weight,
):
    cdef double[:, ::1] X = np.ascontiguousarray(X_in, dtype=np.float64)
    cdef int[::1] y = np.ascontiguousarray(y_in, dtype=np.int32)
    cdef cnp.ndarray samples_arr = np.array(sample_idx, dtype=np.int64)
    cdef long long[::1] samples = samples_arr
    cdef double[::1] w = np.ascontiguousarray(class_weight, dtype=np.float64)
    cdef Py_ssize_t n_features = X.shape[1]
    cdef Py_ssize_t m = samples.shape[0]
    cdef u64 rng_seed = <u64> (int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef u64 rng_counter = 0

    feature = []
    threshold = []
    left = []
    right = []
    label = []

    cdef long long* counts = <long long*> malloc(n_classes * sizeof(long long))
    cdef long long* cnt_left = <long long*> malloc(n_classes * sizeof(long long))
    cdef long long* fperm = <long long*> malloc(n_features * sizeof(long long))
    cdef ValCls* buf = <ValCls*> malloc((m if m > 0 else 1) * sizeof(ValCls))
    cdef long long* part = <long long*> malloc((m if m > 0 else 1) * sizeof(long long))
    if counts is NULL or cnt_left is NULL or fperm is NULL or buf is NULL or part is NULL:
        free(counts); free(cnt_left); free(fperm); free(buf); free(part)
        raise MemoryError()

    cdef Py_ssize_t start, end, k, i, n_left, pos
    cdef int node, depth, best_feature, lid, rid, c, lab
    cdef long long cmax
    cdef double best_threshold, wc, wbest
    cdef const double* Xp = &X[0, 0]
    cdef const int* yp = &y[0]
    cdef long long* sp = NULL
    if m > 0:
        sp = &samples[0]

    feature.append(-1)
    threshold.append(0.0)
    left.append(-1)
    right.append(-1)
    label.append(0)
    stack = [(0, 0, m, 0)]

    while stack:
        node, start, end, depth = stack.pop()
        k = end - start

        memset(counts, 0, n_classes * sizeof(long long))
        for i in range(start, end):
            counts[yp[sp[i]]] += 1
        lab = 0
        wbest = w[0] * counts[0]
        for c in range(1, n_classes):
            wc = w[c] * counts[c]
            if wc > wbest:
                wbest = wc
                lab = c
        label[node] = lab

        cmax = 0
        for c in range(n_classes):
            if counts[c] > cmax:
                cmax = counts[c]
        if cmax == k or k < 2 * min_leaf or (0 <= max_depth <= depth):
            continue

        best_threshold = 0.0
        n_left = 0
        best_feature = _search_split(
            Xp, n_features, yp, sp + start, k, counts, &w[0], n_classes,
            fperm, max_features, min_leaf, rng_seed, &rng_counter,
            buf, cnt_left, &best_threshold, &n_left,
        )
        if best_feature < 0:
            continue

        # Stable partition by X[., best_feature] <= threshold.
        pos = 0
        for i in range(start, end):
            if Xp[sp[i] * n_features + best_feature] <= best_threshold:
                part[pos] = sp[i]
                pos += 1
        n_left = pos
        for i in range(start, end):
            if not Xp[sp[i] * n_features + best_feature] <= best_threshold:
                part[pos] = sp[i]
                pos += 1
        for i in range(k):
            sp[start + i] = part[i]

        feature[node] = best_feature
        threshold[node] = best_threshold
        lid = len(feature)
        rid = lid + 1
        for _ in range(2):
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            label.append(0)
        left[node] = lid
        right[node] = rid
        stack.append((rid, start + n_left, end, depth + 1))
        stack.append((lid, start, start + n_left, depth + 1))

    free(counts)
    free(cnt_left)
    free(fperm)
    free(buf)
    free(part)

    return {
        "feature": np.array(feature, dtype=np.int32),
        "threshold": np.array(threshold, dtype=np.float64),
        "left": np.array(left, dtype=np.int32),
        "right": np.array(right, dtype=np.int32),
        "label": np.array(label, dtype=np.int32),
    }


def apply_tree(
    object X_in,
    object feature_in,
    object threshold_in,
    object left_in,
    object right_in,
    object label_in,
):
    cdef double[:, ::1] X = np.ascontiguousarray(X_in, dtype=np.float64)
    cdef int[::1] feature = np.ascontiguousarray(feature_in, dtype=np.int32)
    cdef double[::1] threshold = np.ascontiguousarray(threshold_in, dtype=np.float64)
    cdef int[::1] left = np.ascontiguousarray(left_in, dtype=np.int32)
    cdef int[::1] right = np.ascontiguousarray(right_in, dtype=np.int32)
    cdef int[::1] label = np.ascontiguousarray(label_in, dtype=np.int32)
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t F = X.shape[1]
    cdef cnp.ndarray out_arr = np.zeros(n, dtype=np.int32)
    cdef int[::1] out = out_arr
    cdef Py_ssize_t i
    cdef int node

    if n == 0:
        return out_arr
    with nogil:
        for i in range(n):
            node = 0
            while feature[node] >= 0:
                if X[i, feature[node]] <= threshold[node]:
                    node = left[node]
                else:
                    node = right[node]
            out[i] = label[node]
    return out_arr
