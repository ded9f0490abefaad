# pi_crossed/suites/checks/preliminaries.py
"""
Power partial isometries: truncated shifts, the algebras they generate,
the product criterion and the commuting-projection calculus.
"""
from __future__ import annotations

import logging
from typing import List

import numpy as np

from pi_crossed.algebra import contains, generate, truncated_shift, truncated_shift_sum
from pi_crossed.linalg import Tolerance, spectral_norm
from pi_crossed.ops import (
    FlatBasis,
    Operator,
    grid_shift,
    is_partial_isometry,
    matrix_unit,
    product_pi_criterion,
    random_partial_isometry,
    semigroup_rep_check,
    toeplitz_shift,
    truncated_J,
    truncated_K,
)
from pi_crossed.report import CheckRecord
from pi_crossed.spaces import enumerate_semigroup
from pi_crossed.suites.verification_suite import SuiteContext, VerificationSuite, flag

logger = logging.getLogger(__name__)

UNIT_TOL = 1e-13
PROJECTION_TOL = 1e-12


def _generated_dimension(gen: Operator, tol: Tolerance) -> int:
    ab = generate([gen], tol=tol)
    if not ab.converged:
        raise RuntimeError("span closure did not converge")
    return ab.dimension


class JkDimensionSuite(VerificationSuite):
    description = "C*(J_k) is the full matrix algebra M_{k+1}(C)"
    anchor = "dim C*(J_k) = (k+1)^2"

    @property
    def name(self) -> str:
        return "jk_dimension"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        records = []
        for k in range(1, 6):
            jk = truncated_shift(k)
            records.append(self.measure(
                f"algebra.dim_jk_k{k}",
                lambda jk=jk, k=k: abs(_generated_dimension(jk, ctx.tol) - (k + 1) ** 2),
                0.0,
            ))
            records.append(self.measure(
                f"ops.jk_nilpotent_k{k}",
                lambda jk=jk, k=k: spectral_norm(jk.power(k + 1).matrix) + flag(spectral_norm(jk.power(k).matrix) > 0),
                0.0,
                anchor="J_k^{k+1} = 0",
            ))

        def idempotent() -> float:
            ab = generate([truncated_shift(3)], tol=ctx.tol)
            basis = FlatBasis(ab.ambient_dim)
            again = generate([Operator(b, basis) for b in ab.basis], tol=ctx.tol)
            return abs(again.dimension - ab.dimension)

        records.append(self.measure("algebra.generate_idempotent", idempotent, 0.0))
        return records


class DirsumSuite(VerificationSuite):
    description = "C*(⊕_{k≤n} J_k) is ⊕_{k≤n} M_{k+1}(C)"
    anchor = "C*(⊕_{k≤n} J_k) is isomorphic to ⊕_{k≤n} M_{k+1}(C)"

    @property
    def name(self) -> str:
        return "dirsum"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        records = []
        for n in range(1, 5):
            expected = sum((k + 1) ** 2 for k in range(1, n + 1))
            records.append(self.measure(
                f"algebra.dim_dirsum_n{n}",
                lambda n=n, expected=expected: abs(_generated_dimension(truncated_shift_sum(n), ctx.tol) - expected),
                0.0,
            ))
            records.append(self.measure(
                f"algebra.dirsum_power_n{n}",
                lambda n=n: self._power_residual(n),
                0.0,
                anchor="(⊕_{k≤n} J_k)^n = 0 ⊕ J_n^n",
            ))
        records.append(self.measure("algebra.dirsum_blocks", lambda: self._block_units(ctx), ctx.tol.rank_tol))
        return records

    @staticmethod
    def _power_residual(n: int) -> float:
        total = truncated_shift_sum(n)
        # the J_n block starts after the blocks of sizes 2..n
        offset = sum(k + 1 for k in range(1, n))
        expected = np.zeros((total.dim, total.dim), dtype=np.complex128)
        expected[offset + n, offset] = 1.0
        return spectral_norm(total.power(n).matrix - expected)

    @staticmethod
    def _block_units(ctx: SuiteContext) -> float:
        """Every matrix unit inside a block is in the algebra; none across blocks is."""
        n = 3
        gen = truncated_shift_sum(n)
        ab = generate([gen], tol=ctx.tol)
        basis = FlatBasis(gen.dim)
        offset = sum(k + 1 for k in range(1, n))
        inside = max(
            contains(ab, matrix_unit(basis, offset + a, offset + b), ctx.tol).residual
            for a in range(n + 1)
            for b in range(n + 1)
        )
        across = contains(ab, matrix_unit(basis, 0, offset), ctx.tol)
        return inside + flag(not across.member)


class MatrixUnitsSuite(VerificationSuite):
    description = "Matrix units of M_{k+1}(C) as words in J_k and J_k*"
    anchor = "e_i ⊗ ē_j = (J_k*)^{k+1-i} J_k^k (J_k*)^k J_k^{k+1-j}"

    @property
    def name(self) -> str:
        return "matrix_units"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        records = []
        for k in range(1, 6):
            records.append(self.measure(f"algebra.matrix_units_k{k}", lambda k=k: self._residual(k, False), UNIT_TOL))
            records.append(self.measure(
                f"algebra.matrix_units_literal_k{k}",
                lambda k=k: self._residual(k, True),
                UNIT_TOL,
                anchor="(J_k*)^{j-1} J_k^k (J_k*)^k J_k^{i-1} = e_{k+2-j} ⊗ ē_{k+2-i}",
            ))
        return records

    @staticmethod
    def _residual(k: int, literal: bool) -> float:
        j = truncated_shift(k)
        js = j.adjoint()
        corner = j.power(k) @ js.power(k)
        basis = j.basis
        worst = 0.0
        # 1-based indices, as in e_1 .. e_{k+1}
        for a in range(1, k + 2):
            for b in range(1, k + 2):
                if literal:
                    word = js.power(b - 1) @ corner @ j.power(a - 1)
                    unit = matrix_unit(basis, k + 1 - b, k + 1 - a)
                else:
                    word = js.power(k + 1 - a) @ corner @ j.power(k + 1 - b)
                    unit = matrix_unit(basis, a - 1, b - 1)
                worst = max(worst, spectral_norm(word.matrix - unit.matrix))
        return worst


class ToolCriterionSuite(VerificationSuite):
    description = "ST is a partial isometry iff S*S commutes with TT*"
    anchor = "S*S commutes with TT* iff ST is a partial isometry"

    PAIRS = 200
    MAX_DIM = 12

    @property
    def name(self) -> str:
        return "tool_criterion"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        return [
            self.measure("ops.tool_criterion_random", lambda: self._disagreements(ctx), 0.0),
            self.measure("ops.tool_criterion_counterexample", lambda: self._counterexample(ctx), 0.0),
        ]

    def _disagreements(self, ctx: SuiteContext) -> float:
        rng = ctx.rng("ops.tool_criterion_random")
        bad = 0
        for i in range(self.PAIRS):
            dim = int(rng.integers(2, self.MAX_DIM + 1))
            if i % 2:
                s, t = self._commuting_pair(rng, dim)
            else:
                s, t = random_partial_isometry(rng, dim), random_partial_isometry(rng, dim)
            crit = product_pi_criterion(s, t, ctx.tol)
            if not crit.agree:
                logger.warning("criterion disagrees on pair %d: %s", i, crit)
                bad += 1
        return float(bad)

    @staticmethod
    def _commuting_pair(rng: np.random.Generator, dim: int) -> tuple[Operator, Operator]:
        """S = W D₁ U*, T = U D₂ X*: S*S and TT* are both diagonal in the basis U."""

        def unitary() -> np.ndarray:
            g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            q, r = np.linalg.qr(g)
            return q * (np.diag(r) / np.abs(np.diag(r)))

        u, w, x = unitary(), unitary(), unitary()
        d1 = np.diag((rng.random(dim) < 0.5).astype(float))
        d2 = np.diag((rng.random(dim) < 0.5).astype(float))
        basis = FlatBasis(dim)
        return Operator(w @ d1 @ u.conj().T, basis), Operator(u @ d2 @ x.conj().T, basis)

    @staticmethod
    def _counterexample(ctx: SuiteContext) -> float:
        basis = FlatBasis(2)
        p = Operator(np.array([[1.0, 0.0], [0.0, 0.0]]), basis)
        q = Operator(0.5 * np.ones((2, 2)), basis)
        crit = product_pi_criterion(q, p, ctx.tol)
        return flag(crit.agree and not crit.product_is_pi)


class CommProjsSuite(VerificationSuite):
    description = "Initial and range projections of the shift families commute and multiply by max"
    anchor = "V_s*V_s V_t*V_t = V_{s∨t}*V_{s∨t}"

    CUTOFF = 16
    POWERS = range(0, 5)

    @property
    def name(self) -> str:
        return "commprojs"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        z = enumerate_semigroup([1], self.CUTOFF)
        families = {
            "toeplitz": lambda: {s: toeplitz_shift(z, s) for s in self.POWERS},
            "J": lambda: {t: truncated_J(z, 6, t) for t in range(0, 9)},
            "K": lambda: {t: truncated_K(z, 6, t) for t in range(0, 9)},
            "grid_sigma": lambda: {p: grid_shift(self.CUTOFF, "sigma", p) for p in self.POWERS},
            "grid_tau": lambda: {p: grid_shift(self.CUTOFF, "tau", p) for p in self.POWERS},
        }
        records = [
            self.measure(
                f"ops.commprojs_{name}",
                lambda build=build: semigroup_rep_check(build(), tol=ctx.tol).max_residual,
                PROJECTION_TOL,
            )
            for name, build in families.items()
        ]
        records.append(self.measure(
            "ops.partial_isometries",
            lambda: max(is_partial_isometry(op, ctx.tol).residual for build in families.values() for op in build().values()),
            UNIT_TOL,
            anchor="every shift family consists of partial isometries",
        ))
        records.append(self.measure(
            "ops.grid_tau_power",
            lambda: max(
                spectral_norm(grid_shift(self.CUTOFF, "tau", n).matrix - grid_shift(self.CUTOFF, "tau", 1).power(n).matrix)
                for n in range(0, 6)
            ),
            0.0,
            anchor="V(ε_{k,l}) = ε_{k+1,l-1}",
        ))
        return records
