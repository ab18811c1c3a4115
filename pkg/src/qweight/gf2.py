"""Bit-packed linear algebra over F2.

Matrices are stored row-major as numpy uint64 words, 64 columns per word,
bit j of word w holding column 64*w + j. All row reduction is
deterministic (pivot = leftmost nonzero column), so bases and reduced
forms are reproducible across runs and platforms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

_WORD = 64


def _nwords(cols: int) -> int:
    return max(1, (cols + _WORD - 1) // _WORD)


class BitMatrix:
    """Dense matrix over F2 with rows packed into 64-bit words."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        self.rows = rows
        self.cols = cols
        self.words = words

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BitMatrix":
        return cls(rows, cols, np.zeros((rows, _nwords(cols)), dtype=np.uint64))

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        arr = np.asarray(dense, dtype=np.uint64)
        if arr.ndim != 2:
            arr = arr.reshape(len(dense), -1)
        rows, cols = arr.shape
        m = cls.zeros(rows, cols)
        for j in range(cols):
            m.words[:, j >> 6] |= arr[:, j] << np.uint64(j & 63)
        return m

    @classmethod
    def from_support(cls, rows: int, cols: int, supports: Sequence[Iterable[int]]) -> "BitMatrix":
        if len(supports) != rows:
            raise ValueError(f"expected {rows} support lists, got {len(supports)}")
        m = cls.zeros(rows, cols)
        for i, sup in enumerate(supports):
            for j in sup:
                if not 0 <= j < cols:
                    raise ValueError(f"column {j} out of range for width {cols}")
                m.words[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
        return m

    @classmethod
    def from_row_ints(cls, row_ints: Sequence[int], cols: int) -> "BitMatrix":
        m = cls.zeros(len(row_ints), cols)
        nw = m.words.shape[1]
        mask = (1 << _WORD) - 1
        for i, v in enumerate(row_ints):
            for w in range(nw):
                m.words[i, w] = (v >> (_WORD * w)) & mask
        return m

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for j in range(self.cols):
            out[:, j] = (self.words[:, j >> 6] >> np.uint64(j & 63)) & np.uint64(1)
        return out

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, self.words.copy())

    def get(self, i: int, j: int) -> int:
        return int((self.words[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def set(self, i: int, j: int, value: int) -> None:
        bit = np.uint64(1) << np.uint64(j & 63)
        if value:
            self.words[i, j >> 6] |= bit
        else:
            self.words[i, j >> 6] &= ~bit

    def row_as_int(self, i: int) -> int:
        v = 0
        for w in range(self.words.shape[1] - 1, -1, -1):
            v = (v << _WORD) | int(self.words[i, w])
        return v

    def row_support(self, i: int) -> list[int]:
        v = self.row_as_int(i)
        out = []
        while v:
            low = v & -v
            out.append(low.bit_length() - 1)
            v ^= low
        return out

    def row_weights(self) -> np.ndarray:
        return np.bitwise_count(self.words).sum(axis=1).astype(np.int64)

    def col_weights(self) -> np.ndarray:
        out = np.zeros(self.cols, dtype=np.int64)
        for j in range(self.cols):
            out[j] = int(((self.words[:, j >> 6] >> np.uint64(j & 63)) & np.uint64(1)).sum())
        return out

    def is_zero(self) -> bool:
        return not self.words.any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.words, other.words)
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True)
class BitVector:
    """Packed vector over F2: `bits` holds bit j for coordinate j."""

    n: int
    bits: int

    @classmethod
    def from_dense(cls, dense) -> "BitVector":
        v = 0
        for j, b in enumerate(dense):
            if b:
                v |= 1 << j
        return cls(len(dense), v)

    @classmethod
    def from_support(cls, n: int, support: Iterable[int]) -> "BitVector":
        v = 0
        for j in support:
            if not 0 <= j < n:
                raise ValueError(f"coordinate {j} out of range for length {n}")
            v |= 1 << j
        return cls(n, v)

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        v = self.bits
        out = []
        while v:
            low = v & -v
            out.append(low.bit_length() - 1)
            v ^= low
        return out

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.uint8)
        for j in self.support():
            out[j] = 1
        return out


def _eliminate(words: np.ndarray, col_order: Iterable[int], full: bool) -> list[int]:
    """In-place Gaussian elimination; returns pivot columns in pivot order.

    `full=True` produces reduced row echelon form (pivot columns cleared
    above and below), `full=False` clears below only.
    """
    nrows = words.shape[0]
    pivots: list[int] = []
    r = 0
    for c in col_order:
        if r >= nrows:
            break
        w, b = c >> 6, np.uint64(c & 63)
        below = (words[r:, w] >> b) & np.uint64(1)
        nz = np.nonzero(below)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        if full:
            hits = np.nonzero((words[:, w] >> b) & np.uint64(1))[0]
            hits = hits[hits != r]
        else:
            hits = r + 1 + np.nonzero((words[r + 1:, w] >> b) & np.uint64(1))[0]
        if hits.size:
            words[hits] ^= words[r]
        pivots.append(c)
        r += 1
    return pivots


def rank(m: BitMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    work = m.words.copy()
    return len(_eliminate(work, range(m.cols), full=False))


def rref(m: BitMatrix) -> tuple[BitMatrix, list[int]]:
    """Reduced row echelon form, zero rows dropped; plus pivot columns."""
    work = m.words.copy()
    pivots = _eliminate(work, range(m.cols), full=True) if m.rows else []
    reduced = BitMatrix(len(pivots), m.cols, work[: len(pivots)].copy())
    return reduced, pivots


def kernel_basis(m: BitMatrix) -> BitMatrix:
    """Basis of {v : m v = 0}, one vector per non-pivot column.

    The basis is in the standard free-variable form: vector for free
    column f has bit f set plus one bit per pivot row supported on f.
    """
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    basis = BitMatrix.zeros(len(free), m.cols)
    for bi, f in enumerate(free):
        basis.set(bi, f, 1)
        fw, fb = f >> 6, np.uint64(f & 63)
        col = (reduced.words[:, fw] >> fb) & np.uint64(1) if reduced.rows else ()
        for ri in np.nonzero(col)[0] if reduced.rows else ():
            basis.set(bi, pivots[int(ri)], 1)
    return basis


def mat_mul_t(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    """a . b^T over F2; entry (i,j) is the overlap parity of row i and row j."""
    if a.cols != b.cols:
        raise ValueError(f"column mismatch: {a.cols} vs {b.cols}")
    out = BitMatrix.zeros(a.rows, b.rows)
    if a.rows == 0 or b.rows == 0:
        return out
    for i in range(a.rows):
        parities = (np.bitwise_count(a.words[i] & b.words).sum(axis=1) & 1).astype(np.uint64)
        for w in range(out.words.shape[1]):
            chunk = parities[w * _WORD: (w + 1) * _WORD]
            if chunk.size:
                out.words[i, w] = np.bitwise_or.reduce(
                    chunk << np.arange(chunk.size, dtype=np.uint64)
                )
    return out


class RowSpace:
    """Membership tests against the row space of a matrix, via its RREF."""

    __slots__ = ("rank", "_pivot_rows")

    def __init__(self, m: BitMatrix):
        reduced, pivots = rref(m)
        self.rank = len(pivots)
        self._pivot_rows = [(pivots[i], reduced.row_as_int(i)) for i in range(reduced.rows)]

    def reduce(self, v: int) -> int:
        for piv, row in self._pivot_rows:
            if (v >> piv) & 1:
                v ^= row
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0


@dataclass(frozen=True)
class MinWeightResult:
    weight: Optional[int]
    reason: Optional[str]
    enumerated: int


def min_weight_in_coset_complement(
    span_a: BitMatrix, span_b: BitMatrix, budget: int = 1 << 24
) -> MinWeightResult:
    """Min Hamming weight over kernel(span_a) \\ rowspace(span_b).

    Requires rowspace(span_b) to lie inside kernel(span_a). Enumerates the
    kernel by a Gray-code walk (one basis-vector flip per step) when
    2^dim(kernel) fits the budget; otherwise reports absence with reason
    "budget-exceeded". An empty complement (every kernel vector is a row
    combination of span_b) reports "empty-coset".
    """
    kb = kernel_basis(span_a)
    kappa = kb.rows
    rs = RowSpace(span_b)
    if rs.rank >= kappa:
        return MinWeightResult(None, "empty-coset", 0)
    if kappa > 0 and (1 << kappa) - 1 > budget:
        return MinWeightResult(None, "budget-exceeded", 0)
    basis = [kb.row_as_int(i) for i in range(kappa)]
    best: Optional[int] = None
    v = 0
    steps = (1 << kappa) - 1
    for i in range(1, steps + 1):
        v ^= basis[(i & -i).bit_length() - 1]
        w = v.bit_count()
        if (best is None or w < best) and not rs.contains(v):
            best = w
    return MinWeightResult(best, None, steps)


@dataclass(frozen=True)
class LogicalWeightResult:
    weight: Optional[int]
    lower_bound: int
    certified: bool
    combos: int
    reason: Optional[str] = None


def _information_sets(kb: BitMatrix) -> list[tuple[list[int], int]]:
    """Successively disjoint information sets of the kernel's generator matrix.

    Each entry is (rows-as-ints of a row-equivalent generator matrix put in
    RREF with previously unused columns preferred, count of fresh pivots).
    """
    n = kb.cols
    used = np.zeros(n, dtype=bool)
    sets: list[tuple[list[int], int]] = []
    while True:
        order = [c for c in range(n) if not used[c]] + [c for c in range(n) if used[c]]
        work = kb.words.copy()
        pivots = _eliminate(work, order, full=True)
        fresh = [c for c in pivots if not used[c]]
        if not fresh:
            break
        used[fresh] = True
        g = BitMatrix(kb.rows, n, work)
        sets.append(([g.row_as_int(i) for i in range(kb.rows)], len(fresh)))
        if used.all():
            break
    return sets


def min_weight_logical(
    span_a: BitMatrix, span_b: BitMatrix, combo_budget: int = 20_000_000
) -> LogicalWeightResult:
    """Certified search for the lightest kernel(span_a) vector outside
    rowspace(span_b).

    Enumerates combinations of generator rows over several disjoint
    information sets, sweeping combination size p upward. After finishing
    size p the bound sum(max(0, p+1-(kappa-k_i))) holds for every vector
    not yet seen, so the search stops with an exact answer once the bound
    reaches the best weight found; stopping on budget still yields a valid
    certified lower bound. Suited to large kernels with small true weight,
    where the Gray-code walk is out of reach.
    """
    kb = kernel_basis(span_a)
    kappa = kb.rows
    rs = RowSpace(span_b)
    if rs.rank >= kappa:
        return LogicalWeightResult(None, 0, True, 0, "empty-coset")
    sets = _information_sets(kb)
    nw = kb.words.shape[1]

    packed = []
    for rows_int, k_fresh in sets:
        arr = np.zeros((kappa, nw), dtype=np.uint64)
        mask = (1 << _WORD) - 1
        for i, v in enumerate(rows_int):
            for w in range(nw):
                arr[i, w] = (v >> (_WORD * w)) & mask
        packed.append((rows_int, arr, k_fresh))

    best: Optional[int] = None
    combos = 0
    lower = 1
    p = 0

    def consider(v: int) -> None:
        nonlocal best
        w = v.bit_count()
        if (best is None or w < best) and not rs.contains(v):
            best = w

    while True:
        p += 1
        if p > kappa:
            # everything enumerated: the answer is exact
            return LogicalWeightResult(best, best if best is not None else 0, True,
                                       combos, None if best is not None else "empty-coset")
        for rows_int, arr, _ in packed:
            if p == 1:
                combos += kappa
                weights = np.bitwise_count(arr).sum(axis=1)
                order = np.nonzero(weights < (best if best is not None else np.inf))[0] \
                    if best is not None else np.arange(kappa)
                for i in order:
                    consider(rows_int[int(i)])
                continue
            # enumerate combos of exactly p rows; the last level is vectorized
            idx = list(range(p - 1))
            while True:
                prefix = 0
                for t in idx:
                    prefix ^= rows_int[t]
                start = idx[-1] + 1
                if start < kappa:
                    pre_arr = np.zeros(nw, dtype=np.uint64)
                    m2 = (1 << _WORD) - 1
                    for w in range(nw):
                        pre_arr[w] = (prefix >> (_WORD * w)) & m2
                    batch = arr[start:] ^ pre_arr
                    weights = np.bitwise_count(batch).sum(axis=1)
                    combos += kappa - start
                    if best is None:
                        cands = np.arange(weights.size)
                    else:
                        cands = np.nonzero(weights < best)[0]
                    for ci in cands:
                        w = int(weights[ci])
                        if best is None or w < best:
                            consider(prefix ^ rows_int[start + int(ci)])
                # advance the prefix combination (lexicographic)
                pos = p - 2
                while pos >= 0 and idx[pos] == kappa - (p - pos):
                    pos -= 1
                if pos < 0:
                    break
                idx[pos] += 1
                for t in range(pos + 1, p - 1):
                    idx[t] = idx[t - 1] + 1
            if combos > combo_budget:
                # sweep p incomplete: only p-1 sweeps count toward the bound
                lb = max(lower, sum(max(0, p - (kappa - kf)) for _, _, kf in packed))
                if best is not None and lb >= best:
                    return LogicalWeightResult(best, best, True, combos)
                return LogicalWeightResult(best, lb, False, combos, "budget-exceeded")
        lower = max(lower, sum(max(0, p + 1 - (kappa - kf)) for _, _, kf in packed))
        if best is not None and lower >= best:
            return LogicalWeightResult(best, best, True, combos)
