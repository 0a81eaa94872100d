"""The two-sided module built on A⊗A from a verified pair of maps.

Elementary tensors a⊗b carry two operator-valued inner products — a right
one landing in the span built from the second map's expectation, a left one
landing in the span built from the first map's — plus left/right algebra
actions and a ternary product.  Both inner products induce the same
seminorm; the quotient by its kernel is finite-dimensional and everything
is realized as explicit tensors over the quotient coordinates.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    Algebra,
    Element,
    NumericalDegeneracy,
    orthonormal_rows,
    rel,
    sqrt_psd,
)
from .basic_construction import GAP_FACTOR, BasicConstruction, basic_for_h, basic_for_v
from .interactions import Interaction
from .linmaps import LinMap, amplify, column_gram


class TensorElt:
    """A finite combination of elementary tensors, by coefficient vector."""

    __slots__ = ("module", "coeffs")

    def __init__(self, module: "BimoduleX", coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
        if coeffs.shape != (module.amb,):
            raise ValueError("coefficient length must be dim(A) squared")
        self.module = module
        self.coeffs = coeffs

    def __add__(self, other: "TensorElt") -> "TensorElt":
        return TensorElt(self.module, self.coeffs + other.coeffs)

    def __sub__(self, other: "TensorElt") -> "TensorElt":
        return TensorElt(self.module, self.coeffs - other.coeffs)

    def __rmul__(self, scalar: complex) -> "TensorElt":
        return TensorElt(self.module, scalar * self.coeffs)

    def __neg__(self) -> "TensorElt":
        return TensorElt(self.module, -self.coeffs)

    @property
    def class_coords(self) -> np.ndarray:
        return self.module.qx @ self.coeffs

    def norm(self) -> float:
        return self.module.module_norm(self)


class BimoduleX:
    """Quotient module with both inner products realized as tensors."""

    def __init__(self, inter: Interaction, bch: BasicConstruction,
                 bcv: BasicConstruction, tol: float):
        alg = inter.algebra
        dim = alg.dim
        self.inter = inter
        self.algebra = alg
        self.bch = bch
        self.bcv = bcv
        self.tol = tol
        self.dim = dim
        self.amb = dim * dim
        self._amp_cache: dict[int, tuple[LinMap, LinMap]] = {}

        lt = np.stack([alg.left_mult_tensor[i] for i in range(dim)])
        rt = np.stack([alg.right_mult_tensor[i] for i in range(dim)])
        sigma = np.argmax(np.abs(alg.star_signature), axis=0)
        self.sigma = sigma
        vm, hm = inter.v.matrix, inter.h.matrix

        # F1[i,j,p] = coords(a_i · V(a_j a_p)); G1[q,i,j] = coords(H(a_q a_i) · a_j)
        vl = np.einsum("ab,jbp->jap", vm, lt)
        self.F1 = np.einsum("iab,jbp->ijpa", lt, vl, optimize=True)
        hl = np.einsum("ab,qbi->qai", hm, lt)
        self.G1 = np.einsum("jab,qbi->qija", rt, hl, optimize=True)
        self.P1 = self.F1[:, :, sigma, :]
        self.P2 = self.G1[sigma, :, :, :]

        lam_h, e_h, m_h = bch.lam, bch.e, bch.m
        lam_v, e_v, m_v = bcv.lam, bcv.e, bcv.m
        mid = np.einsum("iks,sab->ikab", hl[sigma].transpose(0, 2, 1), lam_h,
                        optimize=True)
        rf = np.einsum("jab,ikbc,lcd->ijklad",
                       lam_h.conj().transpose(0, 2, 1), mid,
                       np.einsum("ab,lbc->lac", e_h, lam_h), optimize=True)
        self.Rf = rf.reshape(self.amb, self.amb, m_h, m_h)

        nc = vl[:, :, sigma].transpose(0, 2, 1)
        ne = np.einsum("jls,sab,bc->jlac", nc, lam_v, e_v, optimize=True)
        lf = np.einsum("iab,jlbc,kcd->ijklad", lam_v, ne,
                       lam_v.conj().transpose(0, 2, 1), optimize=True)
        self.Lf = lf.reshape(self.amb, self.amb, m_v, m_v)

        gram = np.einsum("uvaa->uv", self.Rf) / m_h
        gram = (gram + gram.conj().T) / 2
        self.gram_r = gram
        self.gram_l = (lambda g: (g + g.conj().T) / 2)(
            np.einsum("uvaa->uv", self.Lf) / m_v)

        lams, vecs = np.linalg.eigh(gram)
        top = float(lams.max(initial=0.0))
        if top <= tol:
            raise NumericalDegeneracy("module collapses: both inner products vanish")
        if float(lams.min()) < -tol * top:
            raise NumericalDegeneracy("right inner product form is not positive "
                                      "(broken input pair)")
        keep = lams > tol * top
        dropped = lams[~keep]
        if dropped.size and float(dropped.max()) > 1e-300:
            if float(lams[keep].min()) / float(dropped.max()) < GAP_FACTOR:
                raise NumericalDegeneracy("module quotient ill-conditioned")
        self.r = int(keep.sum())
        self.gram_spectrum = lams[keep]
        roots = np.sqrt(lams[keep])
        self.qx = roots[:, None] * vecs[:, keep].conj().T
        self.liftx = vecs[:, keep] / roots[None, :]
        self.kernel = vecs[:, ~keep].T

    # -- constructors ---------------------------------------------------------

    def simple(self, a: Element, b: Element) -> TensorElt:
        return TensorElt(self, np.outer(a.coords(), b.coords()).reshape(-1))

    def from_coeffs(self, coeffs: np.ndarray) -> TensorElt:
        return TensorElt(self, coeffs)

    def zero(self) -> TensorElt:
        return TensorElt(self, np.zeros(self.amb, dtype=complex))

    def unit_tensor(self) -> TensorElt:
        one = self.algebra.unit()
        return self.simple(one, one)

    def representatives(self) -> list[TensorElt]:
        """Canonical lifts of a quotient basis; sweeping them is exhaustive
        for any law that is (conjugate-)linear in each slot."""
        return [TensorElt(self, col) for col in self.liftx.T]

    def random(self, rng: np.random.Generator, scale: float = 1.0) -> TensorElt:
        raw = rng.standard_normal(self.amb) + 1j * rng.standard_normal(self.amb)
        return TensorElt(self, scale * raw / np.sqrt(2))

    # -- inner products and norms ----------------------------------------------

    def inner_r(self, s: TensorElt, t: TensorElt) -> np.ndarray:
        return np.einsum("u,v,uvab->ab", s.coeffs.conj(), t.coeffs, self.Rf,
                         optimize=True)

    def inner_l(self, s: TensorElt, t: TensorElt) -> np.ndarray:
        return np.einsum("u,v,uvab->ab", s.coeffs, t.coeffs.conj(), self.Lf,
                         optimize=True)

    @staticmethod
    def _psd_norm(mat: np.ndarray) -> float:
        if mat.size == 0:
            return 0.0
        return float(max(np.linalg.eigvalsh((mat + mat.conj().T) / 2).max(), 0.0))

    def module_norm(self, t: TensorElt) -> float:
        return float(np.sqrt(self._psd_norm(self.inner_r(t, t))))

    def module_norm_left(self, t: TensorElt) -> float:
        return float(np.sqrt(self._psd_norm(self.inner_l(t, t))))

    def class_norm(self, t: TensorElt) -> float:
        """Hilbert-space norm of the class under the trace-state form."""
        return float(np.linalg.norm(self.qx @ t.coeffs))

    def _amplified(self, n: int) -> tuple[LinMap, LinMap]:
        if n not in self._amp_cache:
            self._amp_cache[n] = (amplify(self.inter.v, n), amplify(self.inter.h, n))
        return self._amp_cache[n]

    def tensor_of_pairs(self, pairs: list[tuple[Element, Element]]) -> TensorElt:
        out = self.zero()
        for a, b in pairs:
            out = out + self.simple(a.star(), b)
        return out

    def norm_two_ways(self, pairs: list[tuple[Element, Element]]) -> tuple[float, float]:
        """Closed-form norms of sum a_i*⊗b_i via n-by-n grid calculus."""
        n = len(pairs)
        vn, hn = self._amplified(n)
        grid_a = column_gram(self.algebra, [a for a, _ in pairs])
        grid_b = column_gram(self.algebra, [b for _, b in pairs])
        n1 = (sqrt_psd(hn(grid_a), self.tol)
              * sqrt_psd(hn(vn(grid_b)), self.tol)).norm()
        n2 = (sqrt_psd(vn(hn(grid_a)), self.tol)
              * sqrt_psd(vn(grid_b), self.tol)).norm()
        return n1, n2

    # -- module actions ----------------------------------------------------------

    def right_act(self, t: TensorElt, k: np.ndarray | None,
                  coeff: np.ndarray | None = None) -> TensorElt:
        """Action of k in the right-hand operator span; k is an m×m matrix.

        A pair presentation ``coeff`` (c with k = sum c[p,q] lam(a_p) e lam(a_q))
        may be supplied directly; otherwise it is solved by least squares.
        """
        if coeff is None:
            coeff, resid = self.bch.express_in_spanning(k)
            if resid > max(self.tol, 1e-8) * 10:
                raise ValueError(f"operator outside the right span (residual {resid:.3e})")
        xm = t.coeffs.reshape(self.dim, self.dim)
        out = np.einsum("ij,pq,ijpk->kq", xm, coeff, self.F1, optimize=True)
        return TensorElt(self, out.reshape(-1))

    def left_act(self, k: np.ndarray | None, t: TensorElt,
                 coeff: np.ndarray | None = None) -> TensorElt:
        if coeff is None:
            coeff, resid = self.bcv.express_in_spanning(k)
            if resid > max(self.tol, 1e-8) * 10:
                raise ValueError(f"operator outside the left span (residual {resid:.3e})")
        xm = t.coeffs.reshape(self.dim, self.dim)
        out = np.einsum("pq,ij,qijl->pl", coeff, xm, self.G1, optimize=True)
        return TensorElt(self, out.reshape(-1))

    def act_a(self, a: Element, t: TensorElt, side: str) -> TensorElt:
        xm = t.coeffs.reshape(self.dim, self.dim)
        if side == "left":
            out = self.algebra.left_mult_matrix(a) @ xm
        elif side == "right":
            out = xm @ self.algebra.right_mult_matrix(a).T
        else:
            raise ValueError("side must be 'left' or 'right'")
        return TensorElt(self, out.reshape(-1))

    # -- ternary product -----------------------------------------------------------

    def ternary(self, x: TensorElt, y: TensorElt, z: TensorElt) -> TensorElt:
        return self.right_act(x, self.inner_r(y, z))

    def ternary_elementary(self, x: TensorElt, y: TensorElt,
                           z: TensorElt) -> TensorElt:
        """Trilinear extension of the elementary-tensor formula."""
        d = self.dim
        xm = x.coeffs.reshape(d, d)
        ym = y.coeffs.reshape(d, d)
        zm = z.coeffs.reshape(d, d)
        u1 = np.einsum("uv,uvyr->yr", xm, self.P1, optimize=True)
        u2 = np.einsum("zw,xzws->xs", zm, self.P2, optimize=True)
        out = np.einsum("xy,yr,xs->rs", ym.conj(), u1, u2, optimize=True)
        return TensorElt(self, out.reshape(-1))


def build_bimodule(inter: Interaction, tol: float | None = None) -> BimoduleX:
    tol = inter.tol if tol is None else tol
    return BimoduleX(inter, basic_for_h(inter, tol), basic_for_v(inter, tol), tol)


# -- structural checks -------------------------------------------------------------
# Each returns a dict of named residuals; all should vanish within tolerance.


def _psd_defect(mat: np.ndarray) -> float:
    if mat.size == 0:
        return 0.0
    herm = (mat + mat.conj().T) / 2
    gap = float(np.linalg.norm(mat - herm))
    eigs = np.linalg.eigvalsh(herm)
    scale = max(1.0, float(abs(eigs).max(initial=0.0)))
    return max(gap, -float(eigs.min())) / scale


def check_positivity(x: BimoduleX, samples: int = 20,
                     rng: np.random.Generator | None = None) -> dict[str, float]:
    """Both inner squares are positive operators, sampled plus basis tensors."""
    rng = rng or np.random.default_rng(520)
    pool = [x.simple(a, b) for a in x.algebra.basis for b in x.algebra.basis[:1]]
    pool += [x.random(rng) for _ in range(samples)]
    worst_r = max(_psd_defect(x.inner_r(t, t)) for t in pool)
    worst_l = max(_psd_defect(x.inner_l(t, t)) for t in pool)
    return {"right_square_psd": worst_r, "left_square_psd": worst_l}


def check_cauchy_schwarz(x: BimoduleX, samples: int = 50,
                         rng: np.random.Generator | None = None) -> dict[str, float]:
    """Operator-valued Cauchy–Schwarz for both inner products."""
    rng = rng or np.random.default_rng(530)
    worst_r = worst_l = 0.0
    for _ in range(samples):
        s, t = x.random(rng), x.random(rng)
        diff = (x._psd_norm(x.inner_r(t, t)) * x.inner_r(s, s)
                - x.inner_r(s, t) @ x.inner_r(t, s))
        worst_r = max(worst_r, _psd_defect(diff))
        diff = (x._psd_norm(x.inner_l(t, t)) * x.inner_l(s, s)
                - x.inner_l(s, t) @ x.inner_l(t, s))
        worst_l = max(worst_l, _psd_defect(diff))
    return {"cauchy_schwarz_right": worst_r, "cauchy_schwarz_left": worst_l}


def check_norm_agreement(x: BimoduleX, samples: int = 50,
                         rng: np.random.Generator | None = None) -> dict[str, float]:
    """The two grid-calculus norms and the quotient norm coincide; the two
    inner products have the same null space."""
    rng = rng or np.random.default_rng(540)
    worst_forms = worst_sides = 0.0
    for _ in range(samples):
        t = x.random(rng)
        worst_sides = max(worst_sides, rel(abs(x.module_norm(t) - x.module_norm_left(t)),
                                           x.module_norm(t)))
        count = int(rng.integers(1, 4))
        pairs = [(x.algebra.random_element(rng), x.algebra.random_element(rng))
                 for _ in range(count)]
        n1, n2 = x.norm_two_ways(pairs)
        quot = x.module_norm(x.tensor_of_pairs(pairs))
        scale = max(n1, n2, quot)
        worst_forms = max(worst_forms,
                          rel(abs(n1 - n2), scale), rel(abs(n1 - quot), scale))
    kern = 0.0
    for row in x.kernel:
        kern = max(kern, rel(float(np.linalg.norm(x.gram_l @ row)),
                             float(np.linalg.norm(x.gram_l, 2))))
    lam_l = np.linalg.eigvalsh(x.gram_l)
    rank_l = int((lam_l > x.tol * max(lam_l.max(initial=0.0), 1e-300)).sum())
    return {"norm_forms_agree": worst_forms, "seminorms_agree": worst_sides,
            "kernels_coincide": kern, "rank_mismatch": float(abs(rank_l - x.r))}


def check_sliding(x: BimoduleX) -> dict[str, float]:
    """The two relations moving range elements across the tensor sign."""
    alg = x.algebra
    h, v = x.inter.h, x.inter.v
    worst_v = 0.0
    for c in x.inter.range_v.elements():
        for a in alg.basis:
            ac = a * c
            for b in alg.basis:
                lhs = x.simple(ac, b)
                rhs = x.simple(a, h(c) * b)
                worst_v = max(worst_v, float(np.linalg.norm(
                    x.qx @ (lhs.coeffs - rhs.coeffs))))
    worst_h = 0.0
    for c in x.inter.range_h.elements():
        for a in alg.basis:
            av = a * v(c)
            for b in alg.basis:
                lhs = x.simple(a, c * b)
                rhs = x.simple(av, b)
                worst_h = max(worst_h, float(np.linalg.norm(
                    x.qx @ (lhs.coeffs - rhs.coeffs))))
    return {"slide_range_v": worst_v, "slide_range_h": worst_h}


def check_bound_59(x: BimoduleX, samples: int = 50, terms: int = 3,
                   rng: np.random.Generator | None = None) -> dict[str, float]:
    """Pairing a vector against a finite right-operator sum is bounded by
    the product of the three norms."""
    rng = rng or np.random.default_rng(590)
    worst = 0.0
    m = x.bch.m
    for _ in range(samples):
        xi, eta = x.random(rng), x.random(rng)
        phi = np.zeros((m, m), dtype=complex)
        moved = x.zero()
        for _ in range(terms):
            a = x.algebra.random_element(rng)
            b = x.algebra.random_element(rng)
            a_star = a.star()
            phi += x.bch.lam_of(a_star) @ x.bch.e @ x.bch.lam_of(b)
            pair = np.outer(a_star.coords(), b.coords())
            moved = moved + x.right_act(eta, None, coeff=pair)
        lhs = float(np.linalg.norm(x.inner_r(xi, moved), 2))
        rhs = xi.norm() * eta.norm() * float(np.linalg.norm(phi, 2))
        worst = max(worst, max(0.0, lhs - rhs) / max(1.0, rhs))
    return {"pairing_bound": worst}


def check_action_bound(x: BimoduleX, samples: int = 50,
                       rng: np.random.Generator | None = None) -> dict[str, float]:
    """∥t·k∥ ≤ ∥t∥·∥k∥, and the action is presentation-independent."""
    rng = rng or np.random.default_rng(5100)
    worst_bound = 0.0
    kb = x.bch.k_basis
    for _ in range(samples):
        t = x.random(rng)
        w = rng.standard_normal(kb.shape[0]) + 1j * rng.standard_normal(kb.shape[0])
        k = (kb.T @ w).reshape(x.bch.m, x.bch.m)
        moved = x.right_act(t, k)
        bound = t.norm() * float(np.linalg.norm(k, 2))
        worst_bound = max(worst_bound, max(0.0, moved.norm() - bound) / max(1.0, bound))
    # perturb a presentation by a null combination: the class must not move
    u, s, vh = np.linalg.svd(x.bch.spanning_matrix)
    rank = int((s > x.tol * max(s[0], 1e-300)).sum())
    null = vh[rank:]
    worst_pres = 0.0
    if null.shape[0]:
        for _ in range(min(samples, 10)):
            t = x.random(rng)
            k = (kb.T @ (rng.standard_normal(kb.shape[0]))).reshape(x.bch.m, x.bch.m)
            coeff, _ = x.bch.express_in_spanning(k)
            w = rng.standard_normal(null.shape[0]) + 1j * rng.standard_normal(null.shape[0])
            perturbed = coeff + (null.T @ w).reshape(x.dim, x.dim)
            d = x.right_act(t, k, coeff=coeff) - x.right_act(t, k, coeff=perturbed)
            worst_pres = max(worst_pres, rel(float(np.linalg.norm(x.qx @ d.coeffs)),
                                             x.class_norm(t)))
    return {"action_bound": worst_bound, "presentation_independent": worst_pres}


def check_associativity(x: BimoduleX) -> dict[str, float]:
    """Right-span action is associative and inner_r is right-linear over it;
    mirrored for the left span."""
    reps = x.representatives()
    kb_h = [row.reshape(x.bch.m, x.bch.m) for row in x.bch.k_basis]
    kb_v = [row.reshape(x.bcv.m, x.bcv.m) for row in x.bcv.k_basis]
    worst_assoc = worst_linear = 0.0
    for t in reps:
        for j in kb_h:
            tj = x.right_act(t, j)
            for k in kb_h:
                lhs = x.right_act(tj, k)
                rhs = x.right_act(t, j @ k)
                worst_assoc = max(worst_assoc, float(np.linalg.norm(
                    x.qx @ (lhs.coeffs - rhs.coeffs))))
    for s in reps:
        for t in reps:
            base = x.inner_r(s, t)
            for k in kb_h:
                lhs = x.inner_r(s, x.right_act(t, k))
                worst_linear = max(worst_linear, float(np.linalg.norm(
                    lhs - base @ k)))
    worst_assoc_l = worst_linear_l = 0.0
    for t in reps:
        for j in kb_v:
            jt = x.left_act(j, t)
            for k in kb_v:
                lhs = x.left_act(k, jt)
                rhs = x.left_act(k @ j, t)
                worst_assoc_l = max(worst_assoc_l, float(np.linalg.norm(
                    x.qx @ (lhs.coeffs - rhs.coeffs))))
    for s in reps:
        for t in reps:
            base = x.inner_l(s, t)
            for k in kb_v:
                lhs = x.inner_l(x.left_act(k, s), t)
                worst_linear_l = max(worst_linear_l, float(np.linalg.norm(
                    lhs - k @ base)))
    return {"right_action_associative": worst_assoc,
            "inner_r_right_linear": worst_linear,
            "left_action_associative": worst_assoc_l,
            "inner_l_left_linear": worst_linear_l}


def check_compatibility(x: BimoduleX) -> dict[str, float]:
    """left_act(inner_l(s,t), u) = right_act(s, inner_r(t,u)) on a quotient
    basis sweep — the two module structures interlock."""
    reps = x.representatives()
    worst = 0.0
    for s in reps:
        for t in reps:
            k_l = x.inner_l(s, t)
            for u in reps:
                lhs = x.left_act(k_l, u)
                rhs = x.right_act(s, x.inner_r(t, u))
                worst = max(worst, float(np.linalg.norm(
                    x.qx @ (lhs.coeffs - rhs.coeffs))))
    return {"bimodule_compatibility": worst}


def check_ternary_consistency(x: BimoduleX) -> dict[str, float]:
    """The elementary ternary formula agrees with evaluation through the
    right inner product, on a quotient basis sweep."""
    reps = x.representatives()
    worst = 0.0
    for s in reps:
        for t in reps:
            for u in reps:
                lhs = x.ternary_elementary(s, t, u)
                rhs = x.ternary(s, t, u)
                worst = max(worst, float(np.linalg.norm(
                    x.qx @ (lhs.coeffs - rhs.coeffs))))
    return {"ternary_two_routes": worst}


def check_fullness(x: BimoduleX) -> dict[str, float]:
    """Inner products of basis tensors span the full operator spans."""
    pool_r, pool_l = [], []
    basis_tensors = [x.simple(a, b) for a in x.algebra.basis for b in x.algebra.basis]
    for s in basis_tensors:
        for t in basis_tensors:
            pool_r.append(x.inner_r(s, t).reshape(-1))
            pool_l.append(x.inner_l(s, t).reshape(-1))
    span_r = orthonormal_rows(np.array(pool_r), x.tol)
    span_l = orthonormal_rows(np.array(pool_l), x.tol)
    in_k_r = max((x.bch.express_in_k(row.reshape(x.bch.m, x.bch.m))[1]
                  for row in span_r), default=0.0)
    in_k_l = max((x.bcv.express_in_k(row.reshape(x.bcv.m, x.bcv.m))[1]
                  for row in span_l), default=0.0)
    return {"right_span_dim_gap": float(abs(span_r.shape[0] - x.bch.k_basis.shape[0])),
            "left_span_dim_gap": float(abs(span_l.shape[0] - x.bcv.k_basis.shape[0])),
            "right_span_inside": in_k_r, "left_span_inside": in_k_l}


def check_ternary_module_laws(x: BimoduleX) -> dict[str, float]:
    """Coefficient elements slide through the ternary slots with adjoints."""
    reps = x.representatives()
    worst_mid = worst_outer = 0.0
    for a in x.algebra.basis:
        a_star = a.star()
        for s in reps:
            for t in reps:
                for u in reps:
                    lhs = x.ternary(s, x.act_a(a, t, "left"), u)
                    rhs = x.ternary(s, t, x.act_a(a_star, u, "left"))
                    worst_mid = max(worst_mid, float(np.linalg.norm(
                        x.qx @ (lhs.coeffs - rhs.coeffs))))
                    lhs = x.ternary(s, x.act_a(a, t, "right"), u)
                    rhs = x.ternary(x.act_a(a_star, s, "right"), t, u)
                    worst_outer = max(worst_outer, float(np.linalg.norm(
                        x.qx @ (lhs.coeffs - rhs.coeffs))))
    return {"middle_slot_adjoint": worst_mid, "outer_slot_adjoint": worst_outer}
