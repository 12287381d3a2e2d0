# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sweep-hull engine.

This is the same algorithm as the pure-python loop in ``hull.py``, mirrored
statement by statement: identical operand order in every float expression,
no FMA contraction (see the compiler flags in setup.py), the same facet
append order, and a neighbor-record sort with the same resulting pairing.
Both engines are therefore held to bit-identical output arrays; the tests
compare them with exact integer views of the float data.

Also carries the deterministic point generator (an exact mirror of the
xoshiro256** stream in ``io.py``) so large point sets are cheap to draw.
"""

from libc.stdlib cimport malloc, realloc, free, qsort
from libc.stdint cimport int8_t, int32_t, int64_t, uint64_t
from libc.string cimport memcpy

import numpy as np

from .errors import NeighborSlotMismatch, UnmatchedEdge

cdef enum FacetLifecycle:
    DEAD = 0
    LIVE = 1
    FRESH = 2

cdef enum EdgeSlot:
    SLOT_AC = 0
    SLOT_AB = 1


# -- growable facet store -----------------------------------------------------

cdef struct Store:
    int32_t* fa
    int32_t* fb
    int32_t* fc
    int32_t* ab
    int32_t* ac
    int32_t* bc
    double* nx
    double* ny
    double* nz
    int8_t* st
    int64_t numf
    int64_t capf


cdef int store_init(Store* s, int64_t cap) except -1:
    s.numf = 0
    s.capf = cap
    s.fa = <int32_t*>malloc(cap * sizeof(int32_t))
    s.fb = <int32_t*>malloc(cap * sizeof(int32_t))
    s.fc = <int32_t*>malloc(cap * sizeof(int32_t))
    s.ab = <int32_t*>malloc(cap * sizeof(int32_t))
    s.ac = <int32_t*>malloc(cap * sizeof(int32_t))
    s.bc = <int32_t*>malloc(cap * sizeof(int32_t))
    s.nx = <double*>malloc(cap * sizeof(double))
    s.ny = <double*>malloc(cap * sizeof(double))
    s.nz = <double*>malloc(cap * sizeof(double))
    s.st = <int8_t*>malloc(cap * sizeof(int8_t))
    if (s.fa == NULL or s.fb == NULL or s.fc == NULL or s.ab == NULL
            or s.ac == NULL or s.bc == NULL or s.nx == NULL or s.ny == NULL
            or s.nz == NULL or s.st == NULL):
        raise MemoryError()
    return 0


cdef void store_free(Store* s) noexcept:
    free(s.fa); free(s.fb); free(s.fc)
    free(s.ab); free(s.ac); free(s.bc)
    free(s.nx); free(s.ny); free(s.nz)
    free(s.st)


cdef int store_grow(Store* s) except -1:
    cdef int64_t cap = s.capf * 2
    cdef void* t
    t = realloc(s.fa, cap * sizeof(int32_t))
    if t == NULL: raise MemoryError()
    s.fa = <int32_t*>t
    t = realloc(s.fb, cap * sizeof(int32_t))
    if t == NULL: raise MemoryError()
    s.fb = <int32_t*>t
    t = realloc(s.fc, cap * sizeof(int32_t))
    if t == NULL: raise MemoryError()
    s.fc = <int32_t*>t
    t = realloc(s.ab, cap * sizeof(int32_t))
    if t == NULL: raise MemoryError()
    s.ab = <int32_t*>t
    t = realloc(s.ac, cap * sizeof(int32_t))
    if t == NULL: raise MemoryError()
    s.ac = <int32_t*>t
    t = realloc(s.bc, cap * sizeof(int32_t))
    if t == NULL: raise MemoryError()
    s.bc = <int32_t*>t
    t = realloc(s.nx, cap * sizeof(double))
    if t == NULL: raise MemoryError()
    s.nx = <double*>t
    t = realloc(s.ny, cap * sizeof(double))
    if t == NULL: raise MemoryError()
    s.ny = <double*>t
    t = realloc(s.nz, cap * sizeof(double))
    if t == NULL: raise MemoryError()
    s.nz = <double*>t
    t = realloc(s.st, cap * sizeof(int8_t))
    if t == NULL: raise MemoryError()
    s.st = <int8_t*>t
    s.capf = cap
    return 0


cdef inline int store_append(Store* s, int32_t a, int32_t b, int32_t c,
                             int32_t ab, int32_t ac, int32_t bc,
                             double nx, double ny, double nz, int8_t st) except -1:
    if s.numf == s.capf:
        store_grow(s)
    cdef int64_t i = s.numf
    s.fa[i] = a
    s.fb[i] = b
    s.fc[i] = c
    s.ab[i] = ab
    s.ac[i] = ac
    s.bc[i] = bc
    s.nx[i] = nx
    s.ny[i] = ny
    s.nz[i] = nz
    s.st[i] = st
    s.numf = i + 1
    return 0


cdef int ensure_i32(int32_t** buf, int64_t* cap, int64_t need) except -1:
    cdef int64_t ncap
    cdef void* t
    if need <= cap[0]:
        return 0
    ncap = cap[0] * 2 if cap[0] > 0 else 1024
    while ncap < need:
        ncap *= 2
    t = realloc(buf[0], ncap * sizeof(int32_t))
    if t == NULL:
        raise MemoryError()
    buf[0] = <int32_t*>t
    cap[0] = ncap
    return 0


cdef int ensure_i64(int64_t** buf, int64_t* cap, int64_t need) except -1:
    cdef int64_t ncap
    cdef void* t
    if need <= cap[0]:
        return 0
    ncap = cap[0] * 2 if cap[0] > 0 else 1024
    while ncap < need:
        ncap *= 2
    t = realloc(buf[0], ncap * sizeof(int64_t))
    if t == NULL:
        raise MemoryError()
    buf[0] = <int64_t*>t
    cap[0] = ncap
    return 0


# -- neighbor-record helpers --------------------------------------------------
#
# A rim record is (far vertex, slot, facet) packed into one int64:
# vertex in the high bits, slot (AC=0/AB=1) at bit 32, facet id in the low 32.
# Sorting the packed keys orders by (vertex, slot, facet); the facet tiebreak
# differs from the pure engine's stable emit order, but linking is symmetric
# within an equal-vertex group so the resulting adjacency ids are identical.

cdef inline int64_t rec_key(int64_t vertex, int64_t slot, int64_t q) noexcept nogil:
    return (vertex << 33) | (slot << 32) | q

cdef inline int64_t rec_vertex(int64_t key) noexcept nogil:
    return key >> 33

cdef inline int64_t rec_slot(int64_t key) noexcept nogil:
    return (key >> 32) & 1

cdef inline int64_t rec_facet(int64_t key) noexcept nogil:
    return key & <int64_t>0xFFFFFFFF


cdef int cmp_i64(const void* a, const void* b) noexcept nogil:
    cdef int64_t x = (<const int64_t*>a)[0]
    cdef int64_t y = (<const int64_t*>b)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


cdef inline void link_rec(Store* s, int64_t key, int64_t partner) noexcept nogil:
    if rec_slot(key) == SLOT_AB:
        s.ab[rec_facet(key)] = <int32_t>partner
    else:
        s.ac[rec_facet(key)] = <int32_t>partner


cdef int patch_fresh(Store* s, int64_t numh,
                     int64_t** recbuf, int64_t* reccap) except -1:
    """Link ab/ac adjacencies of the FRESH facets in [numh, numf)."""
    cdef int64_t nrec = 0
    cdef int64_t q, i, last, ka, kb
    for q in range(s.numf - 1, numh - 1, -1):
        if s.st[q] == FRESH:
            ensure_i64(recbuf, reccap, nrec + 2)
            recbuf[0][nrec] = rec_key(s.fb[q], SLOT_AB, q)
            nrec += 1
            recbuf[0][nrec] = rec_key(s.fc[q], SLOT_AC, q)
            nrec += 1
            s.st[q] = LIVE
    qsort(recbuf[0], <size_t>nrec, sizeof(int64_t), cmp_i64)
    i = 0
    last = nrec - 1
    while i < last:
        ka = recbuf[0][i]
        kb = recbuf[0][i + 1]
        if rec_vertex(ka) == rec_vertex(kb):
            link_rec(s, ka, rec_facet(kb))
            link_rec(s, kb, rec_facet(ka))
            i += 1
        i += 1
    for q in range(numh, s.numf):
        if s.ab[q] < 0 or s.ac[q] < 0:
            raise UnmatchedEdge("fresh facet rim edge found no partner",
                                facet=int(q), nab=int(s.ab[q]), nac=int(s.ac[q]))
    return 0


# -- flat-hull growth ---------------------------------------------------------

cdef int coplanar_spawn(Store* s, double[::1] xs, double[::1] ys, double[::1] zs,
                        int64_t p, int64_t k, int32_t A, int32_t B, int32_t C,
                        int slot, double band) except -1:
    cdef double px = xs[p]
    cdef double py = ys[p]
    cdef double pz = zs[p]
    cdef double abx = xs[B] - xs[A]
    cdef double aby = ys[B] - ys[A]
    cdef double abz = zs[B] - zs[A]
    cdef double acx = xs[C] - xs[A]
    cdef double acy = ys[C] - ys[A]
    cdef double acz = zs[C] - zs[A]
    cdef double axx = px - xs[A]
    cdef double axy = py - ys[A]
    cdef double axz = pz - zs[A]
    cdef double ex = aby * axz - abz * axy
    cdef double ey = abz * axx - abx * axz
    cdef double ez = abx * axy - aby * axx
    cdef double kx = aby * acz - abz * acy
    cdef double ky = abz * acx - abx * acz
    cdef double kz = abx * acy - aby * acx
    cdef double globit = kx * ex + ky * ey + kz * ez
    if globit >= -band:
        return 0
    cdef int64_t up_id = s.numf
    cdef int64_t down_id = up_id + 1
    cdef double xx = s.nx[k] * ex + s.ny[k] * ey + s.nz[k] * ez
    cdef int32_t old
    if slot == 0:
        old = s.ab[k]
    elif slot == 1:
        old = s.ac[k]
    else:
        old = s.bc[k]
    cdef int32_t up_bc, down_bc
    cdef int64_t k_new, old_new
    if xx > 0.0:
        up_bc = <int32_t>k
        down_bc = old
        k_new = up_id
        old_new = down_id
    else:
        up_bc = old
        down_bc = <int32_t>k
        k_new = down_id
        old_new = up_id
    if slot == 0:
        s.ab[k] = <int32_t>k_new
        s.ab[old] = <int32_t>old_new
    elif slot == 1:
        s.ac[k] = <int32_t>k_new
        s.ac[old] = <int32_t>old_new
    else:
        s.bc[k] = <int32_t>k_new
        s.bc[old] = <int32_t>old_new
    store_append(s, <int32_t>p, A, B, -1, -1, up_bc, ex, ey, ez, FRESH)
    store_append(s, <int32_t>p, A, B, -1, -1, down_bc, -ex, -ey, -ez, FRESH)
    return 0


cdef inline int64_t vert_at(int64_t* rec, int64_t nrec, int64_t i) noexcept nogil:
    # Past-the-end reads act as the two sentinel records.
    if i < nrec:
        return rec_vertex(rec[i])
    return -1 - (i - nrec)


cdef int add_coplanar_c(Store* s, double[::1] xs, double[::1] ys, double[::1] zs,
                        int64_t p, double band,
                        int64_t** recbuf, int64_t* reccap) except -1:
    cdef int64_t numh = s.numf
    cdef int64_t k
    cdef int32_t j
    for k in range(numh):
        j = s.ab[k]
        if j >= 0 and s.fc[k] == s.fc[j]:
            coplanar_spawn(s, xs, ys, zs, p, k, s.fa[k], s.fb[k], s.fc[k], 0, band)
        j = s.bc[k]
        if j >= 0 and s.fa[k] == s.fa[j]:
            coplanar_spawn(s, xs, ys, zs, p, k, s.fb[k], s.fc[k], s.fa[k], 2, band)
        j = s.ac[k]
        if j >= 0 and s.fb[k] == s.fb[j]:
            coplanar_spawn(s, xs, ys, zs, p, k, s.fa[k], s.fc[k], s.fb[k], 1, band)

    cdef int64_t nrec = 0
    cdef int64_t q, i, s1, s2, s3, q0, q1
    cdef double dot01, dot02
    for q in range(s.numf - 1, numh - 1, -1):
        if s.st[q] == FRESH:
            ensure_i64(recbuf, reccap, nrec + 2)
            recbuf[0][nrec] = rec_key(s.fb[q], SLOT_AB, q)
            nrec += 1
            recbuf[0][nrec] = rec_key(s.fc[q], SLOT_AC, q)
            nrec += 1
            s.st[q] = LIVE
    qsort(recbuf[0], <size_t>nrec, sizeof(int64_t), cmp_i64)

    i = 0
    while i < nrec - 1:
        if vert_at(recbuf[0], nrec, i) == vert_at(recbuf[0], nrec, i + 1):
            if vert_at(recbuf[0], nrec, i) != vert_at(recbuf[0], nrec, i + 2):
                link_rec(s, recbuf[0][i], rec_facet(recbuf[0][i + 1]))
                link_rec(s, recbuf[0][i + 1], rec_facet(recbuf[0][i]))
                i += 1
            else:
                # Four records share this vertex: match by sheet orientation.
                if i + 3 >= nrec:
                    raise UnmatchedEdge("coplanar rim junction incomplete",
                                        vertex=int(vert_at(recbuf[0], nrec, i)))
                s1 = i + 1
                s2 = i + 2
                s3 = i + 3
                q0 = rec_facet(recbuf[0][i])
                q1 = rec_facet(recbuf[0][s1])
                dot01 = (s.nx[q0] * s.nx[q1] + s.ny[q0] * s.ny[q1]
                         + s.nz[q0] * s.nz[q1])
                if dot01 > 0.0:
                    pass
                else:
                    q1 = rec_facet(recbuf[0][s2])
                    dot02 = (s.nx[q0] * s.nx[q1] + s.ny[q0] * s.ny[q1]
                             + s.nz[q0] * s.nz[q1])
                    if dot02 > 0.0:
                        s1, s2 = s2, s1
                    else:
                        s1, s3 = s3, s1
                link_rec(s, recbuf[0][i], rec_facet(recbuf[0][s1]))
                link_rec(s, recbuf[0][s1], rec_facet(recbuf[0][i]))
                link_rec(s, recbuf[0][s2], rec_facet(recbuf[0][s3]))
                link_rec(s, recbuf[0][s3], rec_facet(recbuf[0][s2]))
                i += 3
        i += 1
    return 0


# -- build driver -------------------------------------------------------------

def build_raw(double[::1] xs, double[::1] ys, double[::1] zs, double cross_band):
    """Run the sweep over pre-sorted, seed-rotated coordinate arrays.

    Returns (a, b, c, ab, ac, bc, nx, ny, nz, state, has_volume, visible,
    scan_length): the full facet store with dead rows included, exactly as
    the pure engine would produce it.
    """
    cdef int64_t n = xs.shape[0]
    if n < 4 or ys.shape[0] != n or zs.shape[0] != n:
        raise ValueError("need three equal-length arrays of at least 4 points")

    cdef Store s
    cdef int64_t* recbuf = NULL
    cdef int64_t reccap = 0
    cdef int32_t* xlist = NULL
    cdef int64_t xcap = 0
    cdef int64_t xlen, xi
    cdef bint has_volume = False

    cdef double ux, uy, uz, vx, vy, vz, ex, ey, ez
    cdef double x, y, z, mx, my, mz, d, sum_x, sum_y, sum_z
    cdef int64_t p, count, numh, hvis, h, new_id, scan_len
    cdef int32_t va, xid, xa, xb, xc, nb, ea, eb
    cdef int edge

    visible_np = np.empty(n - 3, dtype=np.int64)
    scan_np = np.empty(n - 3, dtype=np.int64)
    cdef int64_t[::1] vis = visible_np
    cdef int64_t[::1] scn = scan_np

    s.fa = s.fb = s.fc = s.ab = s.ac = s.bc = NULL
    s.nx = s.ny = s.nz = NULL
    s.st = NULL
    try:
        store_init(&s, 1024)
        ux = xs[1] - xs[0]
        uy = ys[1] - ys[0]
        uz = zs[1] - zs[0]
        vx = xs[2] - xs[0]
        vy = ys[2] - ys[0]
        vz = zs[2] - zs[0]
        ex = uy * vz - uz * vy
        ey = uz * vx - ux * vz
        ez = ux * vy - uy * vx
        store_append(&s, 0, 1, 2, 1, 1, 1, ex, ey, ez, LIVE)
        store_append(&s, 0, 1, 2, 0, 0, 0, -ex, -ey, -ez, LIVE)
        sum_x = (xs[0] + xs[1]) + xs[2]
        sum_y = (ys[0] + ys[1]) + ys[2]
        sum_z = (zs[0] + zs[1]) + zs[2]

        for p in range(3, n):
            x = xs[p]
            y = ys[p]
            z = zs[p]
            sum_x += x
            sum_y += y
            sum_z += z
            count = p + 1
            mx = sum_x / <double>count
            my = sum_y / <double>count
            mz = sum_z / <double>count

            numh = s.numf
            hvis = -1
            for h in range(numh - 1, -1, -1):
                va = s.fa[h]
                d = ((x - xs[va]) * s.nx[h] + (y - ys[va]) * s.ny[h]
                     + (z - zs[va]) * s.nz[h])
                if d > 0.0:
                    hvis = h
                    s.st[h] = DEAD
                    break

            if hvis < 0:
                add_coplanar_c(&s, xs, ys, zs, p, cross_band, &recbuf, &reccap)
                vis[p - 3] = 0
                scn[p - 3] = numh
                continue

            scan_len = numh - hvis
            ensure_i32(&xlist, &xcap, 1)
            xlist[0] = <int32_t>hvis
            xlen = 1
            xi = 0
            while xi < xlen:
                xid = xlist[xi]
                xa = s.fa[xid]
                xb = s.fb[xid]
                xc = s.fc[xid]
                for edge in range(3):
                    if edge == 0:
                        nb = s.ab[xid]
                        ea = xa
                        eb = xb
                    elif edge == 1:
                        nb = s.ac[xid]
                        ea = xa
                        eb = xc
                    else:
                        nb = s.bc[xid]
                        ea = xb
                        eb = xc
                    va = s.fa[nb]
                    d = ((x - xs[va]) * s.nx[nb] + (y - ys[va]) * s.ny[nb]
                         + (z - zs[va]) * s.nz[nb])
                    if d > 0.0:
                        if s.st[nb] == LIVE:
                            s.st[nb] = DEAD
                            ensure_i32(&xlist, &xcap, xlen + 1)
                            xlist[xlen] = nb
                            xlen += 1
                        continue
                    # nb stays: (ea, eb) is a horizon edge; cap it.
                    ux = xs[ea] - x
                    uy = ys[ea] - y
                    uz = zs[ea] - z
                    vx = xs[eb] - x
                    vy = ys[eb] - y
                    vz = zs[eb] - z
                    ex = uy * vz - uz * vy
                    ey = uz * vx - ux * vz
                    ez = ux * vy - uy * vx
                    if (mx - x) * ex + (my - y) * ey + (mz - z) * ez > 0.0:
                        ex = -ex
                        ey = -ey
                        ez = -ez
                    new_id = s.numf
                    if ((s.fa[nb] == ea and s.fb[nb] == eb)
                            or (s.fa[nb] == eb and s.fb[nb] == ea)):
                        s.ab[nb] = <int32_t>new_id
                    elif ((s.fa[nb] == ea and s.fc[nb] == eb)
                            or (s.fa[nb] == eb and s.fc[nb] == ea)):
                        s.ac[nb] = <int32_t>new_id
                    elif ((s.fb[nb] == ea and s.fc[nb] == eb)
                            or (s.fb[nb] == eb and s.fc[nb] == ea)):
                        s.bc[nb] = <int32_t>new_id
                    else:
                        raise NeighborSlotMismatch(
                            "live facet shares no edge with its horizon neighbor",
                            point=int(p), facet=int(nb), edge=(int(ea), int(eb)))
                    store_append(&s, <int32_t>p, ea, eb, -1, -1, nb,
                                 ex, ey, ez, FRESH)
                xi += 1

            patch_fresh(&s, numh, &recbuf, &reccap)
            has_volume = True
            vis[p - 3] = xlen
            scn[p - 3] = scan_len

        return _store_to_arrays(&s) + (bool(has_volume), visible_np, scan_np)
    finally:
        store_free(&s)
        free(recbuf)
        free(xlist)


cdef tuple _store_to_arrays(Store* s):
    cdef int64_t m = s.numf
    a_np = np.empty(m, dtype=np.int32)
    b_np = np.empty(m, dtype=np.int32)
    c_np = np.empty(m, dtype=np.int32)
    ab_np = np.empty(m, dtype=np.int32)
    ac_np = np.empty(m, dtype=np.int32)
    bc_np = np.empty(m, dtype=np.int32)
    nx_np = np.empty(m, dtype=np.float64)
    ny_np = np.empty(m, dtype=np.float64)
    nz_np = np.empty(m, dtype=np.float64)
    st_np = np.empty(m, dtype=np.int8)
    cdef int32_t[::1] a_v = a_np
    cdef int32_t[::1] b_v = b_np
    cdef int32_t[::1] c_v = c_np
    cdef int32_t[::1] ab_v = ab_np
    cdef int32_t[::1] ac_v = ac_np
    cdef int32_t[::1] bc_v = bc_np
    cdef double[::1] nx_v = nx_np
    cdef double[::1] ny_v = ny_np
    cdef double[::1] nz_v = nz_np
    cdef int8_t[::1] st_v = st_np
    if m > 0:
        memcpy(&a_v[0], s.fa, m * sizeof(int32_t))
        memcpy(&b_v[0], s.fb, m * sizeof(int32_t))
        memcpy(&c_v[0], s.fc, m * sizeof(int32_t))
        memcpy(&ab_v[0], s.ab, m * sizeof(int32_t))
        memcpy(&ac_v[0], s.ac, m * sizeof(int32_t))
        memcpy(&bc_v[0], s.bc, m * sizeof(int32_t))
        memcpy(&nx_v[0], s.nx, m * sizeof(double))
        memcpy(&ny_v[0], s.ny, m * sizeof(double))
        memcpy(&nz_v[0], s.nz, m * sizeof(double))
        memcpy(&st_v[0], s.st, m * sizeof(int8_t))
    return (a_np, b_np, c_np, ab_np, ac_np, bc_np, nx_np, ny_np, nz_np, st_np)


# -- deterministic point generator ---------------------------------------------

cdef inline uint64_t rotl64(uint64_t v, int k) noexcept nogil:
    return (v << k) | (v >> (64 - k))


cdef void seed_state(uint64_t seed, uint64_t* st) noexcept nogil:
    cdef uint64_t state = seed
    cdef uint64_t z
    cdef int i
    for i in range(4):
        state = state + <uint64_t>0x9E3779B97F4A7C15
        z = state
        z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
        st[i] = z ^ (z >> 31)


cdef inline uint64_t next_u64(uint64_t* st) noexcept nogil:
    cdef uint64_t result = rotl64(st[1] * <uint64_t>5, 7) * <uint64_t>9
    cdef uint64_t t = st[1] << 17
    st[2] ^= st[0]
    st[3] ^= st[1]
    st[1] ^= st[2]
    st[0] ^= st[3]
    st[2] ^= t
    st[3] = rotl64(st[3], 45)
    return result


cdef inline double next_double(uint64_t* st) noexcept nogil:
    return (next_u64(st) >> 11) * 1.1102230246251565e-16  # 2**-53


def generate(int64_t n, uint64_t seed, int mode, double extent):
    """Draw n points; mode 0 = square2d, 1 = box3d, 2 = parabola.

    The stream is the mirror of io.Xoshiro256StarStar: identical draws in
    identical order, so both generators emit identical coordinate arrays.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if mode < 0 or mode > 2:
        raise ValueError("mode must be 0, 1 or 2")
    out = np.empty((n, 3), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef uint64_t st[4]
    seed_state(seed, st)
    cdef int64_t i
    cdef double x, y, z
    for i in range(n):
        x = next_double(st) * extent - extent * 0.5
        y = next_double(st) * extent - extent * 0.5
        if mode == 0:
            z = 0.0
        elif mode == 2:
            z = x * x + y * y
        else:
            z = next_double(st) * extent - extent * 0.5
        o[i, 0] = x
        o[i, 1] = y
        o[i, 2] = z
    return out


def rng_u64s(uint64_t seed, int64_t count):
    """Raw 64-bit stream, for cross-checking against the python generator."""
    if count < 0:
        raise ValueError("count must be >= 0")
    out = np.empty(count, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef uint64_t st[4]
    seed_state(seed, st)
    cdef int64_t i
    for i in range(count):
        o[i] = next_u64(st)
    return out
