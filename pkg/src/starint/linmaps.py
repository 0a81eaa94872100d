"""Linear maps on a multimatrix algebra and their positivity certificates.

A map is stored as its matrix on canonical coordinates.  Complete
positivity is decided through the Choi matrix of the block-diagonal
extension (compress to the block diagonal, then apply the map), which
is positive semidefinite exactly when the map is completely positive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    Algebra,
    DescriptorMismatch,
    Element,
    Subspace,
    is_positive,
    positivity_defect,
    rel,
)


@dataclass(frozen=True)
class LinMap:
    """A linear map A -> A given by its coordinate matrix."""

    algebra: Algebra
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.algebra.dim, self.algebra.dim):
            raise ValueError(f"matrix shape {m.shape}, expected square of {self.algebra.dim}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, algebra: Algebra) -> "LinMap":
        return cls(algebra, np.eye(algebra.dim, dtype=complex))

    def apply(self, x: Element) -> Element:
        if x.algebra != self.algebra:
            raise DescriptorMismatch(f"{x.algebra} vs {self.algebra}")
        return self.algebra.from_coords(self.matrix @ x.coords())

    def __call__(self, x: Element) -> Element:
        return self.apply(x)

    def __matmul__(self, other: "LinMap") -> "LinMap":
        """Composition: (self @ other)(x) == self(other(x))."""
        if other.algebra != self.algebra:
            raise DescriptorMismatch("composition over different algebras")
        return LinMap(self.algebra, self.matrix @ other.matrix)

    def __add__(self, other: "LinMap") -> "LinMap":
        if other.algebra != self.algebra:
            raise DescriptorMismatch("sum over different algebras")
        return LinMap(self.algebra, self.matrix + other.matrix)

    def __sub__(self, other: "LinMap") -> "LinMap":
        if other.algebra != self.algebra:
            raise DescriptorMismatch("difference over different algebras")
        return LinMap(self.algebra, self.matrix - other.matrix)

    def __rmul__(self, scalar) -> "LinMap":
        return LinMap(self.algebra, complex(scalar) * self.matrix)


def compose(s: LinMap, t: LinMap) -> LinMap:
    return s @ t


def transpose_map(algebra: Algebra) -> LinMap:
    """Blockwise transpose: positive but not completely positive on 2x2 blocks."""
    m = algebra.star_signature.astype(complex)  # transpose permutes like the adjoint, minus conjugation
    return LinMap(algebra, m)


def map_residual(s: LinMap, t: LinMap) -> float:
    """Worst Hilbert-Schmidt residual of (s - t) over the canonical basis."""
    d = s.matrix - t.matrix
    return max(float(np.linalg.norm(d[:, k])) for k in range(s.algebra.dim))


def star_preservation_residual(t: LinMap) -> float:
    """How far t is from commuting with the adjoint, over the canonical basis."""
    alg = t.algebra
    worst = 0.0
    for b in alg.basis:
        worst = max(worst, (t(b.star()) - t(b).star()).hs_norm())
    return worst


# -- amplification -------------------------------------------------------------

def _cell_indices(algebra: Algebra, n: int, row: int, col: int) -> np.ndarray:
    """Amplified coordinates of grid cell (row, col), ordered like the base coordinates."""
    out = np.empty(algebra.dim, dtype=int)
    pos, big_off = 0, 0
    for d in algebra.blocks:
        nd = n * d
        for r in range(d):
            for s in range(d):
                out[pos] = big_off + (row * d + r) * nd + (col * d + s)
                pos += 1
        big_off += nd * nd
    return out


def amplify(t: LinMap, n: int) -> LinMap:
    """The entrywise extension of t to n-by-n grids over the algebra."""
    big = t.algebra.amplified(n)
    m = np.zeros((big.dim, big.dim), dtype=complex)
    for row in range(n):
        for col in range(n):
            idx = _cell_indices(t.algebra, n, row, col)
            m[np.ix_(idx, idx)] = t.matrix
    return LinMap(big, m)


def grid_element(algebra: Algebra, n: int, cells: dict[tuple[int, int], Element]) -> Element:
    """Assemble an element of the n-fold amplification from grid cells."""
    big = algebra.amplified(n)
    coords = np.zeros(big.dim, dtype=complex)
    for (row, col), x in cells.items():
        coords[_cell_indices(algebra, n, row, col)] += x.coords()
    return big.from_coords(coords)


def column_gram(algebra: Algebra, xs: list[Element]) -> Element:
    """The grid (x_i x_j*) as an element of the len(xs)-fold amplification."""
    n = len(xs)
    cells = {(i, j): xs[i] * xs[j].star() for i in range(n) for j in range(n)}
    return grid_element(algebra, n, cells)


# -- positivity ----------------------------------------------------------------

def choi_matrix(t: LinMap) -> np.ndarray:
    """Choi matrix of the block-diagonal extension of t.

    The extension first compresses a full matrix to the block diagonal
    (a completely positive projection), so positivity of this matrix is
    equivalent to complete positivity of t on the algebra itself.
    """
    alg = t.algebra
    big = alg.matrix_size
    choi = np.zeros((big * big, big * big), dtype=complex)
    for k in range(alg.dim):
        r, c = alg.unit_positions[k]
        out = t(alg.basis[k]).block_diag()
        choi[r * big:(r + 1) * big, c * big:(c + 1) * big] = out
    return choi


def is_completely_positive(t: LinMap, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Decide complete positivity; returns (verdict, smallest Choi eigenvalue)."""
    choi = choi_matrix(t)
    herm_gap = float(np.linalg.norm(choi - choi.conj().T))
    vals = np.linalg.eigvalsh(0.5 * (choi + choi.conj().T))
    low = float(vals.min()) if vals.size else 0.0
    scale = max(1.0, float(np.abs(vals).max()) if vals.size else 0.0)
    ok = rel(herm_gap, scale) <= tol and low >= -tol * scale
    return ok, low


def _rank_one_positives(algebra: Algebra) -> list[Element]:
    """Spanning family of rank-one positive elements, block by block."""
    out = []
    for b_idx, d in enumerate(algebra.blocks):
        eye = np.eye(d, dtype=complex)
        vecs = [eye[:, p] for p in range(d)]
        for p in range(d):
            for q in range(p + 1, d):
                vecs.append(eye[:, p] + eye[:, q])
                vecs.append(eye[:, p] + 1j * eye[:, q])
        for v in vecs:
            mats = [np.zeros((dd, dd), dtype=complex) for dd in algebra.blocks]
            mats[b_idx] = np.outer(v, v.conj())
            out.append(Element(algebra, mats))
    return out


def positivity_certificate(t: LinMap, trials: int, tol: float = DEFAULT_TOL,
                           rng: np.random.Generator | None = None) -> tuple[bool, float]:
    """Randomized falsifier for positivity of t.

    Applies t to a spanning family of rank-one positives and to random
    y*y elements.  A pass is evidence, not proof; the Choi certificate
    is the sound gate for complete positivity.
    """
    rng = rng or np.random.default_rng(0)
    worst = 0.0
    for x in _rank_one_positives(t.algebra):
        worst = max(worst, positivity_defect(t(x)))
    for _ in range(trials):
        y = t.algebra.random_element(rng)
        worst = max(worst, positivity_defect(t(y.star() * y)))
    return worst <= tol, worst


def range_subspace(t: LinMap, tol: float = DEFAULT_TOL) -> Subspace:
    """Column space of the map, with singular values below tol * max dropped."""
    u, s, _ = np.linalg.svd(t.matrix)
    if s.size == 0 or s[0] == 0.0:
        return Subspace(t.algebra, np.zeros((0, t.algebra.dim), dtype=complex))
    keep = int(np.sum(s > tol * s[0]))
    return Subspace(t.algebra, u[:, :keep].T)


def complete_contractivity_residual(t: LinMap, samples: int, rng: np.random.Generator,
                                    amplification: int = 2) -> float:
    """Worst relative excess of ||t(x)|| over ||x|| at the base and amplified level."""
    worst = 0.0
    for tt, alg in ((t, t.algebra), (amplify(t, amplification), t.algebra.amplified(amplification))):
        for _ in range(samples):
            x = alg.random_element(rng)
            nx = x.norm()
            if nx > 0:
                worst = max(worst, (tt(x).norm() - nx) / nx)
    return max(0.0, worst)
