# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contract as ``multialloc._pycore``.

Game states live in dense per-layer arrays.  A state after ``t`` picks is
``(held, rem)`` with ``|rem| = m - t`` and ``|held|`` fixed by the sequence,
so it is indexed by the colex rank of ``rem`` among ``(m-t)``-subsets and the
colex rank of ``held`` inside the complement of ``rem``.
"""

cimport cython
from libc.stdint cimport int64_t, int8_t
from libc.stdlib cimport malloc, free

BACKEND = "cython"

cdef enum:
    MAXM = 20

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef int64_t BINOM[MAXM + 2][MAXM + 2]

cdef void _init_binom() noexcept:
    cdef int i, j
    for i in range(MAXM + 2):
        for j in range(MAXM + 2):
            BINOM[i][j] = 0
    for i in range(MAXM + 2):
        BINOM[i][0] = 1
        for j in range(1, i + 1):
            BINOM[i][j] = BINOM[i - 1][j - 1] + BINOM[i - 1][j]

_init_binom()


def count_states(turns):
    from math import comb
    m = len(turns)
    total = 0
    a = 0
    for t in range(m + 1):
        total += comb(m, t) * comb(t, a)
        if t < m and turns[t]:
            a += 1
    return total


@cython.final
cdef class GameTable:
    cdef readonly int m
    cdef readonly object omega
    cdef readonly tuple turns
    cdef int64_t* vals
    cdef int64_t* memo
    cdef int8_t* pick
    cdef int64_t offset[MAXM + 2]
    cdef int64_t width[MAXM + 2]
    cdef int prefix[MAXM + 2]
    cdef int tp[MAXM + 1]
    cdef int64_t total
    cdef unsigned long long fullmask

    def __cinit__(self):
        self.vals = NULL
        self.memo = NULL
        self.pick = NULL

    def __init__(self, values, turns):
        cdef int m = len(turns)
        cdef int t
        cdef int64_t i
        if m > MAXM:
            raise ValueError(f"compiled solver supports at most {MAXM} items")
        if len(values) != (1 << m):
            raise ValueError("value table size does not match the sequence length")
        self.m = m
        self.turns = tuple(1 if x else 0 for x in turns)
        self.fullmask = (1ULL << m) - 1
        self.prefix[0] = 0
        for t in range(m):
            self.tp[t] = self.turns[t]
            self.prefix[t + 1] = self.prefix[t] + self.tp[t]
        self.total = 0
        for t in range(m + 1):
            self.offset[t] = self.total
            self.width[t] = BINOM[t][self.prefix[t]]
            self.total += BINOM[m][t] * self.width[t]
        self.vals = <int64_t*> malloc((1 << m) * sizeof(int64_t))
        self.memo = <int64_t*> malloc(self.total * sizeof(int64_t))
        self.pick = <int8_t*> malloc(self.total * sizeof(int8_t))
        if self.vals == NULL or self.memo == NULL or self.pick == NULL:
            raise MemoryError()
        for i in range(1 << m):
            self.vals[i] = values[i]
        for i in range(self.total):
            self.pick[i] = -2
        self.omega = self._solve(0, self.fullmask)

    def __dealloc__(self):
        free(self.vals)
        free(self.memo)
        free(self.pick)

    cdef inline int64_t _index(self, unsigned long long held, unsigned long long rem) noexcept:
        cdef int t = self.m - __builtin_popcountll(rem)
        cdef int64_t rr = 0, rh = 0
        cdef int j = 0, c = 0, h = 0, pos
        for pos in range(self.m):
            if (rem >> pos) & 1:
                j += 1
                rr += BINOM[pos][j]
            else:
                if (held >> pos) & 1:
                    h += 1
                    rh += BINOM[c][h]
                c += 1
        return self.offset[t] + rr * self.width[t] + rh

    cdef int64_t _solve(self, unsigned long long held, unsigned long long rem) noexcept:
        cdef int64_t idx = self._index(held, rem)
        cdef int64_t best, val
        cdef int t, p_moves, choice, bitpos
        cdef unsigned long long r, low
        if self.pick[idx] != -2:
            return self.memo[idx]
        if rem == 0:
            self.memo[idx] = self.vals[held]
            self.pick[idx] = -1
            return self.memo[idx]
        t = self.m - __builtin_popcountll(rem)
        p_moves = self.tp[t]
        choice = -1
        best = 0
        r = rem
        while r:
            low = r & (~r + 1)
            r ^= low
            bitpos = __builtin_ctzll(low)
            if p_moves:
                val = self._solve(held | low, rem ^ low)
                if choice < 0 or val > best:
                    best = val
                    choice = bitpos
            else:
                val = self._solve(held, rem ^ low)
                if choice < 0 or val < best:
                    best = val
                    choice = bitpos
        self.memo[idx] = best
        self.pick[idx] = <int8_t> choice
        return best

    cdef int64_t _checked(self, held, rem) except -1:
        cdef unsigned long long h, r
        cdef int t
        if held < 0 or rem < 0 or held & rem or (held | rem) & ~int(self.fullmask):
            raise KeyError((held, rem))
        h = held
        r = rem
        t = self.m - __builtin_popcountll(r)
        if __builtin_popcountll(h) != self.prefix[t]:
            raise KeyError((held, rem))
        return self._index(h, r)

    def value(self, held, rem):
        return self.memo[self._checked(held, rem)]

    def choice(self, held, rem):
        return self.pick[self._checked(held, rem)]

    @property
    def states(self):
        return self.total


def solve_game(values, turns):
    return GameTable(values, turns)


cdef struct PartState:
    int m
    int n
    int64_t* vals
    unsigned long long* blocks
    int* labels
    int* best_labels
    int64_t best
    unsigned long long full


cdef int64_t _bound(PartState* s, int i, int used) noexcept:
    cdef unsigned long long rest = (s.full >> i) << i
    cdef int64_t b = -1, x
    cdef int j
    for j in range(used):
        x = s.vals[s.blocks[j] | rest]
        if b < 0 or x < b:
            b = x
    if used < s.n:
        if s.n - used > s.m - i:
            return 0
        x = s.vals[rest]
        if b < 0 or x < b:
            b = x
    return b


cdef void _rec(PartState* s, int i, int used) noexcept:
    cdef int j, top
    cdef int64_t val, x
    cdef unsigned long long bit
    if i == s.m:
        if used < s.n:
            val = 0
        else:
            val = s.vals[s.blocks[0]]
            for j in range(1, used):
                x = s.vals[s.blocks[j]]
                if x < val:
                    val = x
        if val > s.best:
            s.best = val
            for j in range(s.m):
                s.best_labels[j] = s.labels[j]
        return
    if _bound(s, i, used) <= s.best:
        return
    bit = 1ULL << i
    top = used + 1 if used < s.n else used
    for j in range(top):
        s.blocks[j] |= bit
        s.labels[i] = j
        _rec(s, i + 1, used + 1 if j == used else used)
        s.blocks[j] ^= bit


def max_min_partition(values, int m, int n):
    cdef PartState s
    cdef int64_t i
    if n < 1:
        raise ValueError("need at least one bundle")
    if m > 62:
        raise ValueError("too many items for the compiled kernel")
    if m == 0:
        return values[0], []
    if len(values) != (1 << m):
        raise ValueError("value table size does not match the item count")
    s.m = m
    s.n = n
    s.full = (1ULL << m) - 1
    s.best = -1
    s.vals = <int64_t*> malloc((1 << m) * sizeof(int64_t))
    s.blocks = <unsigned long long*> malloc(n * sizeof(unsigned long long))
    s.labels = <int*> malloc(m * sizeof(int))
    s.best_labels = <int*> malloc(m * sizeof(int))
    try:
        if s.vals == NULL or s.blocks == NULL or s.labels == NULL or s.best_labels == NULL:
            raise MemoryError()
        for i in range(1 << m):
            s.vals[i] = values[i]
        for i in range(n):
            s.blocks[i] = 0
        _rec(&s, 0, 0)
        return s.best, [s.best_labels[i] for i in range(m)]
    finally:
        free(s.vals)
        free(s.blocks)
        free(s.labels)
        free(s.best_labels)
