# pi_crossed/suites/checks/truncations.py
"""
Toeplitz truncations: the commutator ideal, the J^s = K^s + compacts
decomposition and the non-compactness of K^s_t over dense cones.
"""
from __future__ import annotations

from typing import List

from pi_crossed.algebra import (
    commutator_ideal_cases,
    commutator_ideal_span,
    jk_decomposition_check,
    rank_growth_K,
)
from pi_crossed.linalg import spectral_norm
from pi_crossed.ops import (
    Operator,
    compress,
    guarded_residual,
    indicator_projection,
    toeplitz_shift,
    truncated_K,
)
from pi_crossed.report import CheckRecord
from pi_crossed.spaces import parse_element
from pi_crossed.suites.verification_suite import SuiteContext, VerificationSuite, flag

SQRT2 = [0, 1, 1, 1]


class ToeplitzIdealSuite(VerificationSuite):
    description = "The commutator ideal of T(Z) is spanned by T_r(1 - T_uT_u*)T_t*"
    anchor = "C_Γ = closed span of T_r(1 - T_uT_u*)T_t*"

    SPAN_RANGE = range(0, 7)
    CANDIDATES = range(0, 4)
    SHIFTS = (1, 2, 3)

    @property
    def name(self) -> str:
        return "toeplitz_ideal"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        z = ctx.integers
        records = []
        cases: dict[str, float] = {}

        def compute() -> dict[str, float]:
            if not cases:
                guard = max(self.SPAN_RANGE) * 2 + max(self.CANDIDATES) * 2 + max(self.SHIFTS)
                span = commutator_ideal_span(
                    z, self.SPAN_RANGE, self.CANDIDATES, self.SPAN_RANGE, guard_budget=guard, tol=ctx.tol
                )
                cases.update(commutator_ideal_cases(
                    z, span, self.SHIFTS, self.CANDIDATES, self.CANDIDATES, self.CANDIDATES, ctx.tol
                ))
            return cases

        for key, threshold in (
            ("shift_down", ctx.tol.eq_tol),
            ("absorb", ctx.tol.eq_tol),
            ("vanish", ctx.tol.eq_tol),
            ("left", ctx.tol.rank_tol),
            ("right", ctx.tol.rank_tol),
            ("projections", ctx.tol.rank_tol),
        ):
            records.append(self.measure(f"algebra.commutator_ideal_{key}", lambda key=key: compute()[key], threshold))

        records.append(self.measure(
            "ops.indicator_range",
            lambda: max(
                guarded_residual(indicator_projection(z, s), toeplitz_shift(z, s) @ toeplitz_shift(z, s).adjoint())
                for s in range(0, 9)
            ),
            ctx.tol.eq_tol,
            anchor="1_s = T_sT_s*",
        ))
        records.append(self.measure(
            "ops.indicator_products",
            lambda: max(
                guarded_residual(indicator_projection(z, s) @ indicator_projection(z, t), indicator_projection(z, max(s, t)))
                for s in range(0, 9)
                for t in range(0, 9)
            ),
            0.0,
            anchor="1_s 1_t = 1_{max(s,t)}",
        ))
        return records


class JkDecompositionSuite(VerificationSuite):
    description = "J^s_t = K^s_t + ε_s ⊗ ε̄_{s-t}, and K^s is a compression of the Toeplitz shifts"
    anchor = "C*(J^s) = C*(K^s) + K(ℓ²([0,s]))"

    @property
    def name(self) -> str:
        return "jk_decomposition"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        z = ctx.integers
        records = [
            self.measure(
                f"algebra.jk_decomposition_s{s}",
                lambda s=s: jk_decomposition_check(z, s, extra_t=(s + 1, s + 2), tol=ctx.tol).residual,
                ctx.tol.eq_tol,
            )
            for s in range(1, 9)
        ]

        def configured() -> float:
            top = parse_element(4)
            s = max(x for x in ctx.configured_set if x <= top)
            return jk_decomposition_check(ctx.configured_set, s, tol=ctx.tol).residual

        records.append(self.measure("algebra.jk_decomposition_configured", configured, ctx.tol.eq_tol))
        records.append(self.measure(
            "algebra.compression_lemma",
            lambda: self._compression(ctx),
            ctx.tol.eq_tol,
            anchor="(1 - T_sT_s*) T_t (1 - T_sT_s*) = K^s_t",
        ))
        return records

    @staticmethod
    def _compression(ctx: SuiteContext) -> float:
        z = ctx.integers
        worst = 0.0
        for s in range(1, 7):
            ts = toeplitz_shift(z, s)
            corner = Operator.identity(ts.basis) - ts @ ts.adjoint()
            for t in range(0, 7):
                squeezed = compress(corner, toeplitz_shift(z, t), ctx.tol)
                worst = max(worst, spectral_norm(squeezed.matrix - truncated_K(z, s, t).matrix))
        return worst


class NoncompactSuite(VerificationSuite):
    description = "K^s_t is not compact for t < s over a dense cone; it is finite rank over Z"
    anchor = "K^s_t is not compact whenever t < s"

    DEPTHS = (4, 8, 16)

    @property
    def name(self) -> str:
        return "noncompact"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        def dense() -> float:
            ranks = rank_growth_K([1, SQRT2], 2, 1, self.DEPTHS, ctx.tol)
            return flag(all(a < b for a, b in zip(ranks, ranks[1:])))

        def integers() -> float:
            ranks = rank_growth_K([1], 2, 1, self.DEPTHS, ctx.tol)
            return flag(len(set(ranks)) == 1)

        return [
            self.measure("algebra.rank_growth_dense", dense, 0.0),
            self.measure("algebra.rank_growth_integers", integers, 0.0),
        ]
