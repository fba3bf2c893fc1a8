"""Degree-0 and degree-1 cohomology of finite groups, plus lemma checks.

Cochain spaces are indexed by all group elements; the degree-1 kernel is
cut out by the coboundary rows at pairs (s, h) with s ranging over the
generators only, which pins the same kernel as the full pair set (the
cocycle identity propagates along positive generator words) while
keeping matrices at catalog sizes.  The full d1 is still materialised on
demand for the d1 . d0 = 0 invariant and brute-force cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .fpcore import FiniteGroup, GroupHom, Subgroup, subgroup_as_group
from .fplinalg import FpMatrix, Subspace, rank, rank_profile
from .gmodules import GModule, norm_element, regular_bimodule, submodule_generated


class ActionError(ValueError):
    """The acting group does not match the module (directly or via a hom)."""


def _left_matrices(K: FiniteGroup, module: GModule, hom: Optional[GroupHom]):
    """Per-element left action of K on the module, possibly through a hom."""
    if hom is None:
        if K != module.group:
            raise ActionError("module group differs; supply a homomorphism")
        return lambda x: module.left_action_of(x)
    if hom.source != K or hom.target != module.group:
        raise ActionError("homomorphism endpoints do not match")
    return lambda x: module.left_action_of(hom.image[x])


@dataclass(frozen=True)
class CohomologyResult:
    degree: int
    dimension: int
    representatives: FpMatrix  # rows are (co)cycle vectors

    def subspace(self) -> Subspace:
        return Subspace.from_vectors(
            self.representatives.data, self.representatives.cols, self.representatives.prime
        )


@dataclass
class CochainComplexSlice:
    """d0: M -> Map(K, M) and d1: Map(K, M) -> Map(K^2, M) (kernel rows)."""

    group: FiniteGroup
    module: GModule
    hom: Optional[GroupHom]
    d0: FpMatrix = field(init=False)
    d1: FpMatrix = field(init=False)

    def __post_init__(self):
        K, M = self.group, self.module
        act = _left_matrices(K, M, self.hom)
        n, d, p = K.order, M.dim, M.prime
        eye = np.eye(d, dtype=np.int64)

        d0 = np.zeros((n * d, d), dtype=np.int64)
        for g in K.elements():
            d0[g * d : (g + 1) * d] = act(g).data.astype(np.int64) - eye
        self.d0 = FpMatrix(d0 % p, p)

        rows_at = [K.generators[i] for i in range(len(K.generators))] or [0]
        d1 = np.zeros((len(rows_at) * n * d, n * d), dtype=np.int64)
        for si, s in enumerate(rows_at):
            a_s = act(s).data.astype(np.int64)
            for h in K.elements():
                r = (si * n + h) * d
                sh = int(K.mult[s, h])
                d1[r : r + d, h * d : (h + 1) * d] += a_s
                d1[r : r + d, sh * d : (sh + 1) * d] -= eye
                d1[r : r + d, s * d : (s + 1) * d] += eye
        self.d1 = FpMatrix(d1 % p, p)

    def d1_full(self) -> FpMatrix:
        """d1 over all pairs (g, h); only for small sanity checks."""
        K, M = self.group, self.module
        act = _left_matrices(K, M, self.hom)
        n, d, p = K.order, M.dim, M.prime
        eye = np.eye(d, dtype=np.int64)
        out = np.zeros((n * n * d, n * d), dtype=np.int64)
        for g in K.elements():
            a_g = act(g).data.astype(np.int64)
            for h in K.elements():
                r = (g * n + h) * d
                gh = int(K.mult[g, h])
                out[r : r + d, h * d : (h + 1) * d] += a_g
                out[r : r + d, gh * d : (gh + 1) * d] -= eye
                out[r : r + d, g * d : (g + 1) * d] += eye
        return FpMatrix(out % p, p)


def h0(K: FiniteGroup, module: GModule, hom: Optional[GroupHom] = None) -> CohomologyResult:
    """Invariants: joint fixed space of the generator actions."""
    act = _left_matrices(K, module, hom)
    d, p = module.dim, module.prime
    if not K.generators:
        return CohomologyResult(0, d, FpMatrix.identity(d, p))
    eye = np.eye(d, dtype=np.int64)
    blocks = [(act(g).data.astype(np.int64) - eye) % p for g in K.generators]
    stacked = FpMatrix(np.concatenate(blocks, axis=0), p)
    null = rank_profile(stacked).nullspace
    return CohomologyResult(0, null.dim, null.basis)


def h1(K: FiniteGroup, module: GModule, hom: Optional[GroupHom] = None) -> CohomologyResult:
    """Crossed homomorphisms modulo principal ones."""
    slice_ = CochainComplexSlice(K, module, hom)
    cocycles = rank_profile(slice_.d1).nullspace
    boundary_rank = rank(slice_.d0)
    dim = cocycles.dim - boundary_rank
    # representatives: cocycle basis rows independent modulo the coboundaries
    bound = Subspace.from_vectors(slice_.d0.transpose().data, slice_.d0.rows, module.prime)
    reps: list[np.ndarray] = []
    span = bound
    for row in cocycles.basis.data:
        if not span.contains(row):
            reps.append(row)
            span = Subspace.from_vectors(list(span.basis.data) + [row], span.ambient_dim, span.prime)
    assert len(reps) == dim
    return CohomologyResult(1, dim, FpMatrix.from_rows(reps, module.prime, cols=K.order * module.dim))


@dataclass(frozen=True)
class LemmaReport:
    name: str
    ok: bool
    details: dict

    def to_json(self) -> dict:
        return {"check": self.name, "ok": self.ok, "details": self.details}


def check_h1_regular_vanishes(G: FiniteGroup) -> LemmaReport:
    """H^1 of a finite p-group on its own group algebra is zero."""
    dim = h1(G, regular_bimodule(G)).dimension
    return LemmaReport(
        "h1_regular_vanishes", dim == 0, {"group": G.name, "order": G.order, "h1_dim": dim}
    )


def check_h0_norm_formula(K: Subgroup, G: FiniteGroup) -> LemmaReport:
    """Left K-invariants of F_p[G] equal N_K * F_p[G], of dimension |K\\G|."""
    reg = regular_bimodule(G)
    k_group, incl = subgroup_as_group(K)
    fixed = h0(k_group, reg, incl)
    norm_span = submodule_generated(reg, "right", [norm_element(K, G).vector])
    index = G.order // K.order
    ok = fixed.subspace() == norm_span and fixed.dimension == index
    return LemmaReport(
        "h0_norm_formula",
        ok,
        {
            "group": G.name,
            "subgroup_order": K.order,
            "fixed_dim": fixed.dimension,
            "norm_submodule_dim": norm_span.dim,
            "coset_count": index,
        },
    )


def check_shapiro_dims(K: Subgroup, G: FiniteGroup, degree: int) -> LemmaReport:
    """dim H^k(K, F_p[G]) = dim H^k(K, F_p[K]) * |K\\G| for k in {0, 1}."""
    if degree not in (0, 1):
        raise ValueError("only degrees 0 and 1 are built")
    fn = h0 if degree == 0 else h1
    k_group, incl = subgroup_as_group(K)
    lhs = fn(k_group, regular_bimodule(G), incl).dimension
    inner = fn(k_group, regular_bimodule(k_group)).dimension
    index = G.order // K.order
    ok = lhs == inner * index
    return LemmaReport(
        "shapiro_dims",
        ok,
        {
            "group": G.name,
            "subgroup_order": K.order,
            "degree": degree,
            "big_dim": lhs,
            "small_dim": inner,
            "coset_count": index,
        },
    )
