"""Invariant suites with measured errors against tolerances.

Each suite returns a :class:`SuiteResult`; :func:`run_suites` bundles them into a
deterministic JSON report (no timestamps, floats written with ``repr``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json

import numpy as np

from .hermite import BasisTruncation, rho_matrix
from .measures import CATALOG, Dirac, Measure, Reflect, TConv, catalog_measure, circle_measure
from .phase_space import HeisenbergElement, PhasePoint, group_inverse, group_mul, symplectic_phase
from .twisted import PhaseChain, phase_phi_k
from .weyl import unitarity_defect, weyl_matrix

# floor below which defects are rounding noise and no longer need to shrink with N
ROUNDING_FLOOR = 1e-12

DEFAULT_TOLERANCES = {
    "group_law": 1e-12,
    "rho_group_law": 1e-5,
    "phi_recursion": 1e-12,
    "unitarity": 1e-6,
    "homomorphism": 1e-8,
    "adjoint": 1e-10,
}

SUITES = tuple(DEFAULT_TOLERANCES)


@dataclass
class SuiteResult:
    name: str
    error: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {"name": self.name, "error": self.error, "tolerance": self.tolerance,
                "passed": self.passed, "detail": self.detail}


def _result(name, error, tol, extra_ok=True, **detail):
    error = float(error)
    return SuiteResult(name, error, float(tol), bool(error <= tol and extra_ok), detail)


def _random_points(rng, count, n, scale=1.0):
    return [PhasePoint.from_array(rng.uniform(-scale, scale, 2 * n)) for _ in range(count)]


def group_law_suite(rng, tol, n=1, trials=100) -> SuiteResult:
    """Associativity, identity and inverse of the Heisenberg product."""
    err = 0.0
    e = HeisenbergElement.identity(n)
    for _ in range(trials):
        g, h, k = (HeisenbergElement(p, complex(np.exp(2j * np.pi * rng.uniform())))
                   for p in _random_points(rng, 3, n))
        lhs = group_mul(group_mul(g, h), k)
        rhs = group_mul(g, group_mul(h, k))
        ginv = group_inverse(g)
        checks = [(lhs, rhs), (group_mul(g, ginv), e), (group_mul(ginv, g), e),
                  (group_mul(e, g), g), (group_mul(g, e), g)]
        for a, b in checks:
            err = max(err, float(np.max(np.abs(a.p.as_array() - b.p.as_array()))), abs(a.z - b.z))
    return _result("group_law", err, tol, trials=trials)


def rho_group_law_suite(rng, tol, N=256, K=16, pairs=5) -> SuiteResult:
    """``rho(g) rho(h) = e^{pi i [g, h]} rho(g + h)`` on leading K x K blocks."""
    trunc = BasisTruncation(1, N)
    errs = []
    for _ in range(pairs):
        p, q = _random_points(rng, 2, 1)
        z = np.exp(1j * np.pi * symplectic_phase(p, q))
        A = rho_matrix(p, trunc).entries @ rho_matrix(q, trunc).entries
        B = z * rho_matrix(p + q, trunc).entries
        errs.append(float(np.linalg.norm((A - B)[:K, :K])))
    return _result("rho_group_law", max(errs), tol, N=N, K=K, errors=errs)


def phi_recursion_suite(rng, tol, n=1, triples=1000) -> SuiteResult:
    """``phi_3(p, q, r) = phi_2(p, q) phi_2(p + q, r)`` on random triples."""
    err = 0.0
    for _ in range(triples):
        p, q, r = _random_points(rng, 3, n, scale=2.0)
        lhs = phase_phi_k(PhaseChain((p, q, r)))
        rhs = phase_phi_k(PhaseChain((p, q))) * phase_phi_k(PhaseChain((p + q, r)))
        err = max(err, abs(lhs - rhs))
    return _result("phi_recursion", err, tol, triples=triples)


def unitarity_suite(tol, points=((1.0, 0.0), (0.0, 1.0), (0.7, -0.3)), N_list=(64, 128, 256),
                    K=16) -> SuiteResult:
    """Leading-block unitarity defect of rho_N, shrinking with N down to the rounding floor."""
    rows, monotone, worst = [], True, 0.0
    for xy in points:
        p = PhasePoint.from_array(xy)
        d = [unitarity_defect(rho_matrix(p, BasisTruncation(1, N)), K) for N in N_list]
        mono = all(b <= a or max(a, b) < ROUNDING_FLOOR for a, b in zip(d, d[1:]))
        monotone &= mono
        worst = max(worst, d[-1])
        rows.append({"point": list(xy), "defects": d, "monotone": mono})
    return _result("unitarity", worst, tol, monotone, N_list=list(N_list), K=K, points=rows,
                   rounding_floor=ROUNDING_FLOOR)


def homomorphism_suite(rng, tol, N=64, K=8, measure: Measure | None = None) -> SuiteResult:
    """Direct twisted convolution against the product of Weyl matrices on K x K blocks.

    Uses Dirac/Dirac and Dirac/circle pairs, plus ``measure`` when it is a TConv.
    """
    trunc = BasisTruncation(1, N)
    p, q = _random_points(rng, 2, 1)
    cases = {"dirac_dirac": TConv((Dirac(p), Dirac(q))),
             "dirac_circle": TConv((Dirac(p), circle_measure()))}
    if measure is not None and isinstance(measure, TConv) and measure.n == 1:
        cases["config_measure"] = measure
    errs = {}
    for name, m in cases.items():
        D = weyl_matrix(m, trunc, "direct").entries
        P = weyl_matrix(m, trunc, "product").entries
        errs[name] = float(np.linalg.norm((D - P)[:K, :K]))
    return _result("homomorphism", max(errs.values()), tol, N=N, K=K, errors=errs)


def adjoint_suite(tol, N=64, N_patch=8, measure: Measure | None = None, workers=1) -> SuiteResult:
    """``W(Reflect m) = W(m)^dagger`` for every catalog chart (or one given measure)."""
    if measure is not None:
        cases = {"config_measure": measure}
    else:
        cases = {name: catalog_measure(name) for name in sorted(CATALOG)}
    errs = {}
    for name, m in cases.items():
        trunc = BasisTruncation(m.n, N if m.n == 1 else N_patch)
        W = weyl_matrix(m, trunc, workers=workers).entries
        Wr = weyl_matrix(Reflect(m), trunc, workers=workers).entries
        errs[name] = float(np.linalg.norm(Wr - W.conj().T))
    return _result("adjoint", max(errs.values()), tol, N=N, N_patch=N_patch, errors=errs)


def run_suites(seed: int = 0, suites=SUITES, tolerance: float | None = None,
               tolerances: dict | None = None, measure: Measure | None = None,
               N: int = 64, workers: int = 1) -> list[SuiteResult]:
    """Run the named suites; ``tolerance`` overrides every default, ``tolerances`` per suite."""
    tols = dict(DEFAULT_TOLERANCES)
    if tolerance is not None:
        tols = {k: float(tolerance) for k in tols}
    tols.update(tolerances or {})
    out = []
    for name in suites:
        # each suite draws from its own stream so subsets reproduce the full run
        rng = np.random.default_rng([seed, SUITES.index(name)])
        tol = tols[name]
        if name == "group_law":
            out.append(group_law_suite(rng, tol))
        elif name == "rho_group_law":
            out.append(rho_group_law_suite(rng, tol))
        elif name == "phi_recursion":
            out.append(phi_recursion_suite(rng, tol))
        elif name == "unitarity":
            out.append(unitarity_suite(tol))
        elif name == "homomorphism":
            out.append(homomorphism_suite(rng, tol, N=N, measure=measure))
        elif name == "adjoint":
            out.append(adjoint_suite(tol, N=N, measure=measure, workers=workers))
        else:
            raise KeyError(name)
    return out


def report_json(results, header: list[str] | None = None) -> str:
    d = {"passed": all(r.passed for r in results), "suites": [r.to_json_dict() for r in results]}
    if header:
        d["header"] = header
    return json.dumps(d, indent=2, sort_keys=True) + "\n"
