# pi_crossed/suites/checks/backward_shift.py
"""
The backward-shift system: coisometric pairs built from decreasing
projections, and the sequence-of-Toeplitz-operators model.
"""
from __future__ import annotations

from typing import List

import numpy as np

from pi_crossed.linalg import norm_rank
from pi_crossed.ops import FlatBasis, Operator, guarded_norm, guarded_residual, matrix_unit
from pi_crossed.report import CheckRecord
from pi_crossed.sigma import (
    CoisometricSystem,
    OperatorSequence,
    SigmaElement,
    build_pi,
    covariance_check_sigma,
    egsigma_pi,
    egsigma_system,
    extract_q,
    faithfulness_sigma,
    matrix_unit_sequence,
    model_image,
    model_sequence,
    model_system,
    q_element,
    sigma_image,
    split_blocks,
    symbol_constancy,
)
from pi_crossed.spaces import SemigroupElement
from pi_crossed.suites.verification_suite import SuiteContext, VerificationSuite, flag
from pi_crossed.universal import band_symbol

SIGMA_TOL = 1e-12
GRID_SIDE = 16
MAX_N = 5
SAMPLES = 8


class SigmaSystemSuite(VerificationSuite):
    description = "Coisometric pairs correspond to decreasing projection families Q_n"
    anchor = "Q_n := π(1_n) - V*π(1_{n-1})V and π(1_n) = V*^nV^n + Σ V*^k Q_{n-k} V^k"

    @property
    def name(self) -> str:
        return "sigma_system"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        state: dict[str, object] = {}

        def system() -> tuple[CoisometricSystem, list[Operator]]:
            if not state:
                sys = egsigma_system(GRID_SIDE, MAX_N)
                state["sys"] = sys
                state["pis"] = [build_pi(sys, n, ctx.tol) for n in range(MAX_N + 1)]
            return state["sys"], state["pis"]  # type: ignore[return-value]

        def matches_grid() -> float:
            _, pis = system()
            return max(guarded_residual(p, egsigma_pi(GRID_SIDE, n)) for n, p in enumerate(pis))

        def roundtrip() -> float:
            sys, pis = system()
            qs = extract_q(pis, sys.V)
            rebuilt = CoisometricSystem(sys.V, tuple(qs))
            return max(
                max(guarded_residual(q, expected) for q, expected in zip(qs, sys.Q)),
                max(guarded_residual(build_pi(rebuilt, n, ctx.tol), p) for n, p in enumerate(pis)),
            )

        def covariance() -> float:
            sys, pis = system()
            return covariance_check_sigma(pis, sys.V, ctx.tol).max_residual

        def model_covariance() -> float:
            sys = model_system(6, 24, MAX_N)
            pis = [build_pi(sys, n, ctx.tol) for n in range(MAX_N + 1)]
            return covariance_check_sigma(pis, sys.V, ctx.tol).max_residual

        def invariants() -> float:
            sys, _ = system()
            return max(sys.invariant_residuals().values())

        def gaps() -> float:
            sys, _ = system()
            result = faithfulness_sigma(sys, ctx.tol)
            return abs(result.min_gap - 1.0) + flag(result.ok)

        def faithful_models() -> float:
            sys, _ = system()
            constant = CoisometricSystem(sys.V, (sys.Q[0],) * (MAX_N + 1))
            ok = faithfulness_sigma(model_system(6, 12, MAX_N), ctx.tol).ok and not faithfulness_sigma(constant, ctx.tol).ok
            return flag(ok)

        def q_images() -> float:
            sys, _ = system()
            return max(guarded_residual(sigma_image(q_element(n), sys, ctx.tol), sys.Q[n]) for n in range(MAX_N + 1))

        def degenerate() -> float:
            # a unitary V leaves no room for Q: every π(1_n) is the identity
            u = Operator(np.roll(np.eye(5), 1, axis=0), FlatBasis(5))
            zero = Operator.zeros(u.basis)
            sys = CoisometricSystem(u, (zero,) * 4)
            pis = [build_pi(sys, n, ctx.tol) for n in range(4)]
            report = covariance_check_sigma(pis, u, ctx.tol)
            return report.max_residual + flag(not faithfulness_sigma(sys, ctx.tol).ok)

        return [
            self.measure("sigma.build_pi_grid", matches_grid, SIGMA_TOL, anchor="π(1_m) projects onto span{ε_{k,l} : k + l ≥ m}"),
            self.measure("sigma.extract_roundtrip", roundtrip, SIGMA_TOL),
            self.measure("sigma.covariance", covariance, SIGMA_TOL, anchor="V^p π(1_n) = π(σ_p(1_n)) V^p"),
            self.measure("sigma.model_covariance", model_covariance, SIGMA_TOL),
            self.measure("sigma.system_invariants", invariants, SIGMA_TOL),
            self.measure(
                "sigma.faithfulness_gaps",
                gaps,
                SIGMA_TOL,
                anchor="π × V is faithful iff Q_n ≠ Q_{n+1} for all n",
            ),
            self.measure("sigma.faithfulness_models", faithful_models, 0.0, anchor="π × V is faithful iff Q_n ≠ Q_{n+1} for all n"),
            self.measure("sigma.q_element_image", q_images, SIGMA_TOL),
            self.measure("sigma.degenerate_unitary", degenerate, SIGMA_TOL),
        ]


def _unit(seq: OperatorSequence, i: int, j: int) -> Operator:
    basis = seq.tail.basis
    return matrix_unit(basis, SemigroupElement.of(i), SemigroupElement.of(j))


class CsigmanSymbolSuite(VerificationSuite):
    description = "Model images have constant symbol and the matrix units sit at a single sample"
    anchor = "ψ_T(f(n)) is constant"

    UNIT_DIM = 32
    SYMBOL_DIM = 48
    MAX_DEGREE = 8

    @property
    def name(self) -> str:
        return "csigman_symbol"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        records = [
            self.measure("sigma.symbol_constancy", lambda: self._constancy(ctx), ctx.tol.rank_tol),
        ]
        records.extend(
            self.measure(
                f"sigma.matrix_unit_m{m}",
                lambda m=m: self._matrix_units(ctx, m),
                ctx.tol.eq_tol,
                anchor="the combination is the matrix unit e^m_{ij}",
            )
            for m in range(0, 7)
        )
        records.append(self.measure("sigma.model_matches_system", lambda: self._model_vs_system(ctx), ctx.tol.eq_tol))
        records.append(self.measure(
            "sigma.symbol_span",
            self._symbol_span,
            0.0,
            anchor="ψ_T(T^iT*^j) = z^{i-j}",
        ))
        records.append(self.measure(
            "sigma.symbol_zero_iff_compact",
            lambda: self._zero_iff_compact(ctx),
            0.0,
            anchor="C(N ∪ {∞}, K(ℓ²(N))) is the kernel of the symbol map",
        ))
        records.append(self.measure("sigma.broken_sample_detected", self._broken_sample, 0.0))
        return records

    def _constancy(self, ctx: SuiteContext) -> float:
        worst = 0.0
        for i, j, m in np.ndindex(4, 4, 5):
            seq = model_image(i, j, m, SAMPLES, self.SYMBOL_DIM)
            worst = max(worst, symbol_constancy(seq, ctx.tol.rank_tol, self.MAX_DEGREE).max_deviation)
        return worst

    def _matrix_units(self, ctx: SuiteContext, m: int) -> float:
        worst = 0.0
        for i in range(m + 1):
            for j in range(m + 1):
                seq = matrix_unit_sequence(i, j, m, SAMPLES, self.UNIT_DIM)
                worst = max(
                    worst,
                    guarded_residual(seq.samples[m], _unit(seq, i, j)),
                    guarded_norm(seq.tail),
                    flag(seq.support(ctx.tol) == [m]),
                )
        return worst

    @staticmethod
    def _model_vs_system(ctx: SuiteContext) -> float:
        size, samples = 24, 6
        sys = model_system(samples, size, MAX_N)
        elements = [q_element(n) for n in range(0, 4)]
        elements += [SigmaElement((((i, m, j), 1 + 0j),)) for i, m, j in np.ndindex(3, 4, 3)]
        worst = 0.0
        for x in elements:
            observed = split_blocks(sigma_image(x, sys, ctx.tol), size)
            expected = model_sequence(x, samples, size)
            worst = max(
                worst,
                guarded_residual(observed.tail, expected.tail),
                *(guarded_residual(a, b) for a, b in zip(observed.samples, expected.samples)),
            )
        return worst

    def _symbol_span(self) -> float:
        degrees = range(-3, 4)
        rows = []
        for i, j in np.ndindex(4, 4):
            tail = band_symbol(model_image(i, j, 0, 1, self.SYMBOL_DIM).tail, self.MAX_DEGREE)
            rows.append([tail.coefficient(d) for d in degrees])
        return float(abs(norm_rank(np.array(rows)).rank - len(degrees)))

    def _zero_iff_compact(self, ctx: SuiteContext) -> float:
        wrong = 0
        for i, j, m in np.ndindex(3, 3, 3):
            if i > m or j > m:
                continue
            compact = matrix_unit_sequence(i, j, m, SAMPLES, self.UNIT_DIM)
            symbol = band_symbol(compact.tail, self.MAX_DEGREE)
            wrong += bool(symbol) or guarded_norm(compact.tail) > ctx.tol.eq_tol

            image = model_image(i, j, m, SAMPLES, self.UNIT_DIM)
            symbol = band_symbol(image.tail, self.MAX_DEGREE)
            wrong += not symbol or guarded_norm(image.tail) <= ctx.tol.eq_tol
        return float(wrong)

    def _broken_sample(self) -> float:
        seq = model_image(1, 0, 2, SAMPLES, self.SYMBOL_DIM)
        odd = model_image(2, 0, 0, SAMPLES, self.SYMBOL_DIM).tail
        broken = OperatorSequence(seq.samples[:3] + (odd,) + seq.samples[4:], seq.tail)
        return flag(not symbol_constancy(broken, max_degree=self.MAX_DEGREE).ok)
