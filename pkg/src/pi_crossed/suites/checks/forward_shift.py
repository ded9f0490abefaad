# pi_crossed/suites/checks/forward_shift.py
"""
The forward-shift system through the universal algebra of a power partial
isometry: normal forms, the f/g families, the finite representations π_n
and π*_n, and the faithful grid representation.
"""
from __future__ import annotations

import logging
from typing import List

import numpy as np

from pi_crossed.linalg import span_dimension, spectral_norm
from pi_crossed.ops import FlatBasis, guarded_norm, guarded_residual, matrix_unit
from pi_crossed.report import CheckRecord
from pi_crossed.suites.verification_suite import SuiteContext, VerificationSuite, flag
from pi_crossed.universal import (
    GRID,
    T,
    NormalForm,
    Word,
    band_symbol,
    element,
    evaluate,
    evaluate_word,
    gram_evidence,
    interval_flags,
    kernel_flags,
    normalize,
    pn,
    pnstar,
    symbol,
)

logger = logging.getLogger(__name__)

RFORM_TOL = 1e-12
SMALL_GRID = 12


def symbolic_gap(x: NormalForm, y: NormalForm) -> float:
    """Largest coefficient of ``x − y``; 0 when the normal forms coincide."""
    return max((abs(c) for _, c in (x - y).terms), default=0.0)


def rform_identity(i: int, j: int, m: int) -> tuple[NormalForm, NormalForm]:
    lhs = element("f", i, j, m) - element("f", i, j, m + 1)
    rhs = element("g", m - i, m - j, m) - element("g", m - i, m - j, m + 1)
    return lhs, rhs


def gf_expected(i: int, j: int, m: int, p: int, r: int, n: int) -> NormalForm:
    top = j + p
    if max(r, i, m, n) <= top:
        return element("f", top - i, r, top) - element("f", top - i, r, top + 1)
    return NormalForm()


class RformSuite(VerificationSuite):
    description = "Differences of the f family equal differences of the g family"
    anchor = "f^m_{i,j} - f^{m+1}_{i,j} = g^m_{m-i,m-j} - g^{m+1}_{m-i,m-j}"

    @property
    def name(self) -> str:
        return "rform"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        records = [
            self.measure(f"universal.rform_m{m}", lambda m=m: self._rform(ctx, m), RFORM_TOL)
            for m in range(0, 9)
        ]
        records.append(self.measure(
            "universal.gf_product",
            self._gf_product,
            RFORM_TOL,
            anchor="g^m_{i,j} f^n_{p,r} = f^{j+p}_{j+p-i,r} - f^{j+p+1}_{j+p-i,r} if r,i,m,n ≤ j+p, else 0",
        ))
        return records

    @staticmethod
    def _rform(ctx: SuiteContext, m: int) -> float:
        worst = 0.0
        for i in range(m + 1):
            for j in range(m + 1):
                lhs, rhs = rform_identity(i, j, m)
                numeric = guarded_residual(evaluate(lhs, GRID, ctx.grid_n), evaluate(rhs, GRID, ctx.grid_n))
                worst = max(worst, symbolic_gap(lhs, rhs), numeric)
        return worst

    @staticmethod
    def _gf_product() -> float:
        worst = 0.0
        for i, j, m, p, r, n in np.ndindex(3, 3, 3, 3, 3, 3):
            product = element("g", i, j, m) * element("f", p, r, n)
            expected = gf_expected(i, j, m, p, r, n)
            numeric = guarded_residual(evaluate(product, GRID, SMALL_GRID), evaluate(expected, GRID, SMALL_GRID))
            worst = max(worst, symbolic_gap(product, expected), numeric)
        return worst


class PinImagesSuite(VerificationSuite):
    description = "Images of the f family under the finite representations π_n"
    anchor = "π_n(f^m_{i,j}) = T^i(1 - TT*)T*^j if i,j,m ≤ n, else 0"

    @property
    def name(self) -> str:
        return "pin_images"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        records = [
            self.measure(f"universal.pin_formula_n{n}", lambda n=n: self._formula(n), ctx.tol.eq_tol)
            for n in range(0, 9)
        ]
        records.extend(
            self.measure(
                f"universal.subquotient_dim_n{n}",
                lambda n=n: abs(self._subquotient_dim(ctx, n) - (n + 1) ** 2),
                0.0,
                anchor="I_{n-1}/I_n ≅ M_{n+1}(C)",
            )
            for n in range(0, 7)
        )
        records.append(self.measure(
            "universal.interval_flags",
            lambda: self._interval_flags(ctx),
            0.0,
            anchor="ker q_s = ∩_{r≤s} ker π_r",
        ))
        return records

    @staticmethod
    def _formula(n: int) -> float:
        basis = FlatBasis(n + 1)
        worst = 0.0
        for i, j, m in np.ndindex(7, 7, 7):
            image = evaluate(element("f", i, j, m), pn(n))
            if max(i, j, m) <= n:
                expected = matrix_unit(basis, i, j).matrix
            else:
                expected = np.zeros((n + 1, n + 1))
            worst = max(worst, spectral_norm(image.matrix - expected))
        return worst

    @staticmethod
    def _subquotient_dim(ctx: SuiteContext, n: int) -> int:
        images = [
            evaluate(element("e", i, j, n), pn(n)).matrix
            for i in range(n + 1)
            for j in range(n + 1)
        ]
        return span_dimension(images, ctx.tol)

    @staticmethod
    def _interval_flags(ctx: SuiteContext) -> float:
        wrong = 0
        for m in range(0, 5):
            for i in range(m + 1):
                for j in range(m + 1):
                    x = element("e", i, j, m)
                    at = interval_flags(x, m, ctx.tol)
                    wrong += at.in_ker_q or not at.in_ker_q_minus
                    if m:
                        below = interval_flags(x, m - 1, ctx.tol)
                        wrong += not (below.in_ker_q and below.in_ker_q_minus)
        return float(wrong)


class AutomorphismSuite(VerificationSuite):
    description = "π*_n of the f differences is the reflected π_n image"
    anchor = "α(e^n_{i,j}) = e^n_{n-i,n-j}"

    @property
    def name(self) -> str:
        return "automorphism"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        return [
            self.measure(f"universal.alpha_n{n}", lambda n=n: self._residual(n), ctx.tol.eq_tol)
            for n in range(0, 7)
        ]

    @staticmethod
    def _residual(n: int) -> float:
        worst = 0.0
        for i in range(n + 1):
            for j in range(n + 1):
                star = evaluate(element("e", i, j, n), pnstar(n))
                reflected = evaluate(element("e", n - i, n - j, n), pn(n))
                worst = max(worst, spectral_norm(star.matrix - reflected.matrix))
        return worst


class NormalFormSuite(VerificationSuite):
    description = "Normal forms are sound in the faithful grid representation"
    anchor = "every word in v, v* reduces to v*^s v^m v*^m v^t"

    SOUNDNESS_WORDS = 500
    SOUNDNESS_LENGTH = 12
    SYMBOL_WORDS = 100
    SYMBOL_LENGTH = 10
    SYMBOL_SIZE = 60

    @property
    def name(self) -> str:
        return "normal_form"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        return [
            self.measure("universal.normal_form_soundness", lambda: self._soundness(ctx), ctx.tol.eq_tol),
            self.measure(
                "universal.symbol_consistency",
                lambda: self._symbols(ctx),
                ctx.tol.rank_tol,
                anchor="ψ_T(M(s,m,t)) = z^{t-s}",
            ),
            self.measure(
                "universal.essentiality_witness",
                lambda: self._essential(ctx),
                0.0,
                anchor="(f^{i+j}_{i,i} - f^{i+j+1}_{i,i}) ε_{i,j} = ε_{i,j}",
            ),
            self.measure(
                "universal.gram_rank",
                lambda: self._gram(ctx),
                0.0,
                anchor="the grid representation is faithful",
            ),
            self.measure(
                "universal.split_lemma",
                lambda: self._split(),
                ctx.tol.eq_tol,
                anchor="v* f^m_{i,j} = f^{i∨m}_{i-1,j} for i > 0, and 0 for i = 0",
            ),
            self.measure(
                "universal.kernel_flags",
                lambda: self._kernels(ctx),
                0.0,
                anchor="ker φ_{T*} = span f^m_{i,j}, ker φ_T = span g^m_{i,j}",
            ),
        ]

    @staticmethod
    def _random_word(rng: np.random.Generator, max_length: int) -> Word:
        length = int(rng.integers(0, max_length + 1))
        return Word(tuple("v" if b else "v*" for b in rng.integers(0, 2, size=length)))

    def _soundness(self, ctx: SuiteContext) -> float:
        rng = ctx.rng("universal.normal_form_soundness")
        worst = 0.0
        for _ in range(self.SOUNDNESS_WORDS):
            w = self._random_word(rng, self.SOUNDNESS_LENGTH)
            residual = guarded_residual(evaluate(normalize(w), GRID, ctx.grid_n), evaluate_word(w, GRID, ctx.grid_n))
            if residual > worst:
                logger.debug("soundness residual %.3e on %s", residual, w)
                worst = residual
        return worst

    def _symbols(self, ctx: SuiteContext) -> float:
        rng = ctx.rng("universal.symbol_consistency")
        worst = 0.0
        for _ in range(self.SYMBOL_WORDS):
            w = self._random_word(rng, self.SYMBOL_LENGTH)
            banded = band_symbol(evaluate_word(w, T, self.SYMBOL_SIZE), self.SYMBOL_LENGTH)
            worst = max(worst, symbol(normalize(w)).max_deviation(banded))
        return worst

    @staticmethod
    def _essential(ctx: SuiteContext) -> float:
        n = ctx.grid_n
        worst = 0.0
        for i in range(0, 5):
            for j in range(0, 5):
                op = evaluate(element("f", i, i, i + j) - element("f", i, i, i + j + 1), GRID, n)
                col = op.basis.index((i, j))
                target = np.zeros(op.dim)
                target[col] = 1.0
                worst = max(worst, float(np.linalg.norm(op.matrix[:, col] - target)))
        return worst

    @staticmethod
    def _gram(ctx: SuiteContext) -> float:
        triples = [
            (s, m, t)
            for s in range(0, 5)
            for t in range(0, 5)
            for m in range(max(s, t), 7)
        ]
        evidence = gram_evidence(triples, GRID, ctx.grid_n, ctx.tol)
        return float(evidence.count - evidence.rank)

    @staticmethod
    def _split() -> float:
        vstar = normalize(Word(("v*",)))
        worst = 0.0
        for i, j, m in np.ndindex(6, 6, 6):
            product = vstar * element("f", i, j, m)
            expected = element("f", i - 1, j, max(i, m)) if i else NormalForm()
            numeric = guarded_norm(evaluate(product - expected, GRID, 16)) if (product - expected) else 0.0
            worst = max(worst, symbolic_gap(product, expected), numeric)
        return worst

    @staticmethod
    def _kernels(ctx: SuiteContext) -> float:
        wrong = 0
        guard = ctx.grid_n + 16
        for i, j, m in np.ndindex(4, 4, 4):
            f = kernel_flags(element("f", i, j, m), guard, ctx.tol)
            g = kernel_flags(element("g", i, j, m), guard, ctx.tol)
            wrong += f.in_ker_phi_t or not f.in_ker_phi_tstar
            wrong += not g.in_ker_phi_t or g.in_ker_phi_tstar
            if i <= m and j <= m:
                wrong += not kernel_flags(element("e", i, j, m), guard, ctx.tol).in_i
        v = normalize(Word(("v",)))
        flags = kernel_flags(v, guard, ctx.tol)
        wrong += flags.in_ker_phi_t or flags.in_ker_phi_tstar
        return float(wrong)
