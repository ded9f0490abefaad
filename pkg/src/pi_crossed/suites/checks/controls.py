# pi_crossed/suites/checks/controls.py
"""
Negative control: deliberately broken inputs whose checks must fail.

Only part of a run when ``injectPerturbation`` is set; a report from such a
run is expected to show failures and exit code 1.
"""
from __future__ import annotations

from typing import List

from pi_crossed.ops import guarded_residual
from pi_crossed.report import CheckRecord
from pi_crossed.reps import check_covariance
from pi_crossed.suites.checks.crossed import perturb, toeplitz_pair
from pi_crossed.suites.checks.forward_shift import symbolic_gap
from pi_crossed.suites.verification_suite import SuiteContext, VerificationSuite
from pi_crossed.universal import GRID, element, evaluate


class NegativeControlSuite(VerificationSuite):
    description = "Perturbed inputs that every check must reject"
    anchor = "negative control"

    @property
    def name(self) -> str:
        return "negative_control"

    def enabled(self, ctx: SuiteContext) -> bool:
        return ctx.config.inject_perturbation

    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        def covariance() -> float:
            pair = perturb(toeplitz_pair(16, 4), ctx.rng("controls.perturbed_covariance"), "V")
            return check_covariance(pair, ctx.tol).covrep

        def rform() -> float:
            # g indices shifted by one: the identity no longer holds
            lhs = element("f", 1, 1, 2) - element("f", 1, 1, 3)
            rhs = element("g", 0, 1, 2) - element("g", 0, 1, 3)
            numeric = guarded_residual(evaluate(lhs, GRID, ctx.grid_n), evaluate(rhs, GRID, ctx.grid_n))
            return max(symbolic_gap(lhs, rhs), numeric)

        return [
            self.measure("controls.perturbed_covariance", covariance, ctx.tol.eq_tol),
            self.measure("controls.perturbed_rform", rform, ctx.tol.eq_tol),
        ]
