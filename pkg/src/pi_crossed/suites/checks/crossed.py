# pi_crossed/suites/checks/crossed.py
"""
Covariant partial-isometric representations: both covariance formulations,
the induced representation, the interval systems and faithfulness.
"""
from __future__ import annotations

import logging
from dataclasses import replace
from typing import Callable, List

import numpy as np

from pi_crossed.ops import Operator, grid_shift, indicator_projection, toeplitz_shift
from pi_crossed.report import CheckRecord
from pi_crossed.reps import (
    CovarianceReport,
    CovariantPair,
    ProjectionFamily,
    check_covariance,
    faithfulness_witness,
    induced_rep,
    interval_J_sum,
    pi_from_V,
    range_difference_residual,
    rep_from_projections,
)
from pi_crossed.spaces import enumerate_semigroup
from pi_crossed.suites.verification_suite import SuiteContext, VerificationSuite, flag

logger = logging.getLogger(__name__)

NOISE = 1e-3
INTERVAL_END = 6
GRID_SIDE = 12


# ── covariant pairs ────────────────────────────────────────────────────

def toeplitz_pair(cutoff: int = 40, top: int = 8) -> CovariantPair:
    z = enumerate_semigroup([1], cutoff)
    return pi_from_V({s: toeplitz_shift(z, s) for s in range(top + 1)})


def induced_pair() -> CovariantPair:
    """Induced from π₀ on C³ with π₀(1_t) = diag(1, t ≤ 5, t ≤ 2)."""
    z = enumerate_semigroup([1], 12)
    return induced_rep(lambda t: [1, float(t <= 5), float(t <= 2)], z, 3, shifts=range(0, 5))


def interval_pair(end: int = INTERVAL_END) -> CovariantPair:
    return pi_from_V(interval_J_sum(end, range(0, end + 3)), interval_spec=(end, True))


def grid_pair(n: int = GRID_SIDE, top: int = 4) -> CovariantPair:
    return pi_from_V({p: grid_shift(n, "tau", p) for p in range(top + 1)})


def _noise(rng: np.random.Generator, op: Operator) -> Operator:
    shape = op.matrix.shape
    e = NOISE * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return Operator(op.matrix + e, op.basis, op.budget)


def perturb(pair: CovariantPair, rng: np.random.Generator, target: str) -> CovariantPair:
    """Add noise to one ``V_s`` (``target="V"``) or one ``π(1_t)`` (``target="pi"``), s, t ≥ 1."""
    if target == "V":
        keys = [s for s in pair.V if s][:4]
        s = keys[int(rng.integers(len(keys)))]
        return replace(pair, V={**pair.V, s: _noise(rng, pair.V[s])})
    keys = [t for t in pair.pi_images if t][:4]
    t = keys[int(rng.integers(len(keys)))]
    return replace(pair, pi_images={**pair.pi_images, t: _noise(rng, pair.pi_images[t])})


def _report_residual(report: CovarianceReport) -> float:
    return max(report.covrep, report.altcov, report.unit) + flag(report.agree)


class CovarianceSuite(VerificationSuite):
    description = "Both covariance formulations agree on constructed and perturbed pairs"
    anchor = "π(α_s(a)) = V_sπ(a)V_s* iff π(α_s(a))V_s = V_sπ(a) and π̄(ᾱ_s(1)) = V_sV_s*"

    NEGATIVES = 50

    @property
    def name(self) -> str:
        return "covariance"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        pairs: dict[str, Callable[[], CovariantPair]] = {
            "toeplitz": toeplitz_pair,
            "induced": induced_pair,
            "interval": interval_pair,
            "grid": grid_pair,
        }
        records = [
            self.measure(
                f"reps.covariance_{name}",
                lambda build=build: _report_residual(check_covariance(build(), ctx.tol)),
                ctx.tol.eq_tol,
            )
            for name, build in pairs.items()
        ]
        records.append(self.measure("reps.covariance_negatives", lambda: self._negatives(ctx), 0.0))
        records.append(self.measure(
            "reps.excovrep_corrected",
            lambda: max(
                range_difference_residual(toeplitz_pair().V),
                range_difference_residual(interval_pair().V),
            ),
            ctx.tol.eq_tol,
            anchor="V_rV_r* - V_tV_t* = V_r(1 - V_{t-r}V_{t-r}*)V_r*",
        ))
        return records

    def _negatives(self, ctx: SuiteContext) -> float:
        """Perturbed pairs: both formulations must reject every one."""
        rng = ctx.rng("reps.covariance_negatives")
        bases = [lambda: toeplitz_pair(16, 4), interval_pair, lambda: grid_pair(10, 3)]
        accepted = 0
        for i in range(self.NEGATIVES):
            pair = perturb(bases[i % len(bases)](), rng, "V" if i % 2 else "pi")
            report = check_covariance(pair, ctx.tol)
            if report.covrep_ok or report.altcov_ok:
                logger.warning("perturbed pair %d accepted: %s", i, report)
                accepted += 1
        return float(accepted)


class FaithfulnessSuite(VerificationSuite):
    description = "Faithfulness witnesses for B_I representations"
    anchor = "(1 - V_r*V_r)(V_uV_u* - V_tV_t*) ≠ 0"

    WITNESS_TOL = 1e-12

    @property
    def name(self) -> str:
        return "faithfulness"

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        r_range, uv_range = range(1, 4), range(0, 4)

        def grid() -> float:
            v = {p: grid_shift(16, "tau", p) for p in range(0, 7)}
            return max(0.0, 1.0 - faithfulness_witness(v, r_range, uv_range, ctx.tol).min_norm)

        def interval() -> float:
            v = interval_J_sum(INTERVAL_END, range(0, INTERVAL_END + 1))
            return max(0.0, 1.0 - faithfulness_witness(v, r_range, uv_range, ctx.tol).min_norm)

        def isometry() -> float:
            z = ctx.integers
            v = {s: toeplitz_shift(z, s) for s in range(0, 7)}
            return flag(not faithfulness_witness(v, r_range, uv_range, ctx.tol).ok)

        return [
            self.measure("reps.faithfulness_grid", grid, self.WITNESS_TOL),
            self.measure("reps.faithfulness_interval", interval, self.WITNESS_TOL),
            self.measure("reps.faithfulness_isometry_negative", isometry, 0.0),
            self.measure(
                "reps.projection_rep",
                lambda: self._projection_rep(ctx),
                0.0,
                anchor="1_r ↦ P_r is faithful iff P_r ≠ P_t for r ≠ t",
            ),
        ]

    @staticmethod
    def _projection_rep(ctx: SuiteContext) -> float:
        z = ctx.integers
        labels = tuple(range(0, 9))
        distinct = ProjectionFamily(labels, {r: indicator_projection(z, r) for r in labels})
        collapsed = ProjectionFamily(labels, {r: indicator_projection(z, min(r, 3)) for r in labels})
        ok = rep_from_projections(distinct, ctx.tol).faithful and not rep_from_projections(collapsed, ctx.tol).faithful
        return flag(ok)
