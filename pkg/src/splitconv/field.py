"""GF(2^8) arithmetic and dense linear algebra over the field.

Field elements are plain ints in [0, 255] whose bits are the coefficients of
a polynomial over GF(2), reduced by a fixed degree-8 polynomial.  Matrices
are 2-D numpy uint8 arrays in row-major order; every matrix routine takes
the field instance as context.

Multiplication goes through log/antilog tables.  The tables are generated
with a shift-and-reduce multiply (the ground truth) and sanity-checked
against it at startup; the exhaustive 256x256 cross-check lives in the test
suite.
"""

from __future__ import annotations

import numpy as np

DEFAULT_POLY = 0x11D  # x^8 + x^4 + x^3 + x^2 + 1


class SingularMatrixError(ValueError):
    """Raised when elimination finds no usable pivot in some column."""

    def __init__(self, column: int):
        super().__init__(f"singular system: no nonzero pivot in column {column}")
        self.column = column


def mul_shift_reduce(a: int, b: int, poly: int = DEFAULT_POLY) -> int:
    """Polynomial product of a and b modulo poly, one bit at a time.

    Independent of the table-based path; used to bootstrap the tables.
    """
    p = 0
    while b:
        if b & 1:
            p ^= a
        a <<= 1
        if a & 0x100:
            a ^= poly
        b >>= 1
    return p


class GF256:
    """The field GF(2^8) under a given reducing polynomial.

    All 255 nonzero elements are powers of a primitive element found at
    construction time; a polynomial with no primitive element (i.e. a
    reducible one) is rejected.
    """

    ORDER = 256

    def __init__(self, poly: int = DEFAULT_POLY):
        if poly >> 8 != 1:
            raise ValueError(f"reducing polynomial must have degree 8, got {poly:#x}")
        self.poly = poly
        self.generator, exp, log = self._build_tables(poly)

        # Scalar path: doubled antilog table avoids a modulo per product.
        self._exp = exp + exp
        self._log = log

        # Vectorized path: log of 0 is a large sentinel so that any product
        # involving 0 indexes into the zero region of the antilog table.
        exp_np = np.zeros(4096, dtype=np.uint8)
        exp_np[:509] = [exp[i % 255] for i in range(509)]
        self._exp_np = exp_np
        log_np = np.full(256, 1024, dtype=np.int16)
        log_np[1:] = [log[v] for v in range(1, 256)]
        self._log_np = log_np

        self._startup_check()

    @staticmethod
    def _build_tables(poly: int):
        for gen in range(2, 256):
            exp = [0] * 255
            log = [0] * 256
            seen = bytearray(256)
            x = 1
            ok = True
            for i in range(255):
                if seen[x]:
                    ok = False
                    break
                seen[x] = 1
                exp[i] = x
                log[x] = i
                x = mul_shift_reduce(x, gen, poly)
            if ok and x == 1:
                return gen, exp, log
        raise ValueError(f"{poly:#x} is not irreducible over GF(2): no primitive element exists")

    def _startup_check(self):
        # Spot-check table products against the shift-and-reduce oracle.
        for a in range(0, 256, 17):
            for b in range(0, 256, 19):
                if self.mul(a, b) != mul_shift_reduce(a, b, self.poly):
                    raise AssertionError(f"table/oracle mismatch at {a:#x} * {b:#x}")

    def __repr__(self):
        return f"GF256(poly={self.poly:#x})"

    def __eq__(self, other):
        return isinstance(other, GF256) and other.poly == self.poly

    def __hash__(self):
        return hash(("GF256", self.poly))

    # ------------------------------------------------------------------
    # scalar arithmetic
    # ------------------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        """Sum (= difference) of two elements: bitwise XOR."""
        return a ^ b

    sub = add

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        """Multiplicative inverse; zero has none."""
        if a == 0:
            raise ValueError("zero has no multiplicative inverse")
        return self._exp[(255 - self._log[a]) % 255]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a**e with signed exponent; a**0 = 1, negative e inverts first."""
        if a == 0:
            if e < 0:
                raise ValueError("zero cannot be raised to a negative power")
            return 0 if e > 0 else 1
        return self._exp[(self._log[a] * (e % 255)) % 255]

    def elements(self) -> range:
        return range(256)

    def nonzero_elements(self) -> range:
        return range(1, 256)

    # ------------------------------------------------------------------
    # vectorized arithmetic on numpy uint8 arrays
    # ------------------------------------------------------------------

    def mul_arrays(self, a, b) -> np.ndarray:
        """Elementwise product with numpy broadcasting."""
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        return self._exp_np[self._log_np[a] + self._log_np[b]]

    def mat_mul(self, a, b) -> np.ndarray:
        """Matrix product over the field."""
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        if a.ndim != 2 or b.ndim != 2:
            raise ValueError("mat_mul expects 2-D matrices")
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
        prod = self._exp_np[self._log_np[a][:, :, None] + self._log_np[b][None, :, :]]
        return np.bitwise_xor.reduce(prod, axis=1)

    def vec_mat(self, v, m) -> np.ndarray:
        """Row vector times matrix."""
        v = np.asarray(v, dtype=np.uint8)
        m = np.asarray(m, dtype=np.uint8)
        if v.ndim != 1 or m.ndim != 2 or v.shape[0] != m.shape[0]:
            raise ValueError(f"dimension mismatch: {v.shape} x {m.shape}")
        prod = self._exp_np[self._log_np[v][:, None] + self._log_np[m]]
        return np.bitwise_xor.reduce(prod, axis=0)

    def solve_linear(self, a, b) -> np.ndarray:
        """Solve A x = b for square A by Gauss-Jordan elimination.

        Pivoting takes the first nonzero entry in each column (exact
        arithmetic needs no magnitude pivoting), so results are
        deterministic.  Raises SingularMatrixError naming the first
        rank-deficient pivot column.
        """
        A = np.array(a, dtype=np.uint8, copy=True)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("solve_linear expects a square matrix")
        n = A.shape[0]
        B = np.array(b, dtype=np.uint8, copy=True)
        vec = B.ndim == 1
        if vec:
            B = B[:, None]
        if B.shape[0] != n:
            raise ValueError("right-hand side has wrong height")
        aug = np.concatenate([A, B], axis=1)
        for col in range(n):
            nz = np.nonzero(aug[col:, col])[0]
            if nz.size == 0:
                raise SingularMatrixError(col)
            p = col + int(nz[0])
            if p != col:
                aug[[col, p]] = aug[[p, col]]
            pivot = int(aug[col, col])
            if pivot != 1:
                aug[col] = self.mul_arrays(aug[col], np.uint8(self.inv(pivot)))
            colvals = aug[:, col].copy()
            colvals[col] = 0
            rows = np.nonzero(colvals)[0]
            if rows.size:
                aug[rows] ^= self.mul_arrays(colvals[rows][:, None], aug[col][None, :])
        x = aug[:, n:]
        return x[:, 0] if vec else x

    def rank(self, a) -> int:
        """Row rank over the field."""
        m = np.array(a, dtype=np.uint8, copy=True)
        if m.ndim != 2:
            raise ValueError("rank expects a 2-D matrix")
        rows, cols = m.shape
        r = 0
        for col in range(cols):
            if r == rows:
                break
            nz = np.nonzero(m[r:, col])[0]
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                m[[r, p]] = m[[p, r]]
            below = m[r + 1:, col].copy()
            sel = np.nonzero(below)[0]
            if sel.size:
                factors = self.mul_arrays(below[sel], np.uint8(self.inv(int(m[r, col]))))
                m[r + 1 + sel] ^= self.mul_arrays(factors[:, None], m[r][None, :])
            r += 1
        return r


_DEFAULT_FIELD: GF256 | None = None


def default_field() -> GF256:
    """Shared GF(2^8) instance for the default polynomial 0x11D."""
    global _DEFAULT_FIELD
    if _DEFAULT_FIELD is None:
        _DEFAULT_FIELD = GF256()
    return _DEFAULT_FIELD
