"""Named groups of audits, each reproducible from ``(seed, n)``.

Every audit draws from its own stream derived from the root seed and the
audit's name, so adding or reordering audits never changes the draws of
the others.
"""

from __future__ import annotations

import numpy as np

from .._validation import check_seed
from ..exceptions import InsufficientSamplesError
from ..laws import laplace_sample, relax_sample, tighten_sample
from ..mechanism import GradualLaplaceMechanism, Response, naive_composition_release, tighten_for_third_party
from ..process import sample_path
from ..rng import RandomSource, derive_seed
from . import quadrature
from .privacy import laplace_lipschitz_audit, lipschitz_grid_audit
from .report import AuditReport
from .statistics import (
    MIN_PAIR_SAMPLES,
    atom_mass_audit,
    correlation_audit,
    ks_one_sample,
    ks_two_sample,
    mse_audit,
)

SUITE_MIN_SAMPLES = MIN_PAIR_SAMPLES
INDEPENDENCE_TOLERANCE = 0.005
PATH_ATOM_TOLERANCE = 0.01

ATOM_PAIRS = ((1.0, 2.0), (1.0, 4.0), (2.0, 3.0))
CORRELATION_PAIRS = ((1.0, 2.0), (1.0, 4.0))
MSE_LEVELS = (0.5, 1.0, 2.0)


def _gen(seed, name):
    return RandomSource(derive_seed(seed, name)).next_generator()


def _tag(report, seed):
    report.details.setdefault("seed", seed)
    return report


def _relaxed_pairs(seed, name, eps1, eps2, n):
    rng = _gen(seed, name)
    x = laplace_sample(eps1, rng, size=n)
    return x, relax_sample(x, eps1, eps2, rng)


def marginals(seed, n):
    x, y = _relaxed_pairs(seed, "marginals", 1.0, 2.0, n)
    reports = [
        ks_one_sample(x, 1.0, name="relax_marginal_first[1,2]"),
        ks_one_sample(y, 2.0, name="relax_marginal_second[1,2]"),
    ]
    rng = _gen(seed, "sign_symmetry")
    x0 = np.full(n, 0.7)
    reports.append(
        ks_two_sample(
            relax_sample(x0, 1.0, 2.0, rng),
            -relax_sample(-x0, 1.0, 2.0, rng),
            name="relax_sign_symmetry[x=0.7]",
        )
    )
    reports.append(quadrature.marginal_consistency_audit(1.0, 2.0))
    worst = 0.0
    for eps1, eps2 in ATOM_PAIRS:
        for x_pt in np.linspace(-4.0, 4.0, 9):
            worst = max(worst, abs(quadrature.conditional_total_mass(x_pt, eps1, eps2) - 1.0))
    reports.append(
        AuditReport(
            test_name="conditional_normalization",
            statistic=worst,
            threshold=quadrature.NORMALIZATION_TOLERANCE,
            n_samples=9 * len(ATOM_PAIRS),
        )
    )
    return reports


def atoms(seed, n):
    reports = []
    for eps1, eps2 in ATOM_PAIRS:
        x, y = _relaxed_pairs(seed, f"atoms[{eps1},{eps2}]", eps1, eps2, n)
        report = atom_mass_audit(x, y, eps1, eps2, name=f"atom_mass[{eps1:g},{eps2:g}]")
        report.details["quadrature_target"] = quadrature.expected_atom_mass(eps1, eps2)
        reports.append(report)
    return reports


def correlation(seed, n):
    reports = []
    for eps1, eps2 in CORRELATION_PAIRS:
        x, y = _relaxed_pairs(seed, f"correlation[{eps1},{eps2}]", eps1, eps2, n)
        reports.append(correlation_audit(x, y, eps1 / eps2, name=f"correlation[{eps1:g},{eps2:g}]"))
    return reports


def _mechanism_noise(data, levels, seed):
    mech = GradualLaplaceMechanism(random_state=seed).fit(data)
    return [mech.release(eps).values - data for eps in levels]


def mse(seed, n):
    reports = []
    for eps in MSE_LEVELS:
        noise = laplace_sample(eps, _gen(seed, f"mse[{eps}]"), size=n)
        reports.append(mse_audit(noise, eps, 1, name=f"mse_scalar[{eps:g}]"))
        (vec,) = _mechanism_noise(np.zeros((n, 3)), [eps], derive_seed(seed, f"mse_vector[{eps}]"))
        reports.append(mse_audit(vec, eps, 3, name=f"mse_vector_n3[{eps:g}]"))

    # accuracy of the second release: coupled versus split budget
    for eps1, eps2 in ((1.0, 2.0), (1.0, 1.1)):
        tag = f"{eps1:g},{eps2:g}"
        data = np.zeros(n)
        _, second = naive_composition_release(data, eps1, eps2, seed=derive_seed(seed, f"naive[{tag}]"))
        reports.append(mse_audit(second.values - data, eps2 - eps1, 1, name=f"naive_second_mse[{tag}]"))
        _, relaxed = _mechanism_noise(data, [eps1, eps2], derive_seed(seed, f"gradual[{tag}]"))
        reports.append(mse_audit(relaxed, eps2, 1, name=f"gradual_second_mse[{tag}]"))
    return reports


def markov(seed, n):
    direct = sample_path([1.0, 3.0], _gen(seed, "markov_direct"), size=n)[-1]
    stepped = sample_path([1.0, 2.0, 3.0], _gen(seed, "markov_stepped"), size=n)
    reports = [
        ks_two_sample(direct, stepped[-1], name="markov_equivalence[1->3 vs 1->2->3]"),
        quadrature.chapman_kolmogorov_audit(1.0, 2.0, 3.0),
    ]
    p12, p23, p123 = quadrature.path_atom_masses(1.0, 2.0, 3.0)
    events = {
        "path_atom[V1=V2]": (stepped[0] == stepped[1], p12),
        "path_atom[V2=V3]": (stepped[1] == stepped[2], p23),
        "path_atom[V1=V2=V3]": ((stepped[0] == stepped[1]) & (stepped[1] == stepped[2]), p123),
    }
    for name, (hits, target) in events.items():
        frac = float(np.mean(hits))
        reports.append(
            AuditReport(
                test_name=name,
                statistic=abs(frac - target),
                threshold=PATH_ATOM_TOLERANCE,
                n_samples=n,
                details={"empirical": frac, "target": target, "levels": [1.0, 2.0, 3.0]},
            )
        )
    return reports


def privacy(seed, n):
    return [
        lipschitz_grid_audit(1.0, 2.0),
        lipschitz_grid_audit(1.0, 2.0, kind="naive"),
        laplace_lipschitz_audit(1.0),
    ]


def tighten(seed, n):
    rng = _gen(seed, "tighten")
    y = laplace_sample(2.0, rng, size=n)
    released = Response(eps_dp=2.0, eps_lipschitz=2.0, values=y)
    x = tighten_for_third_party(released, 1.0, 1.0, rng).values
    reports = [
        ks_one_sample(x, 1.0, name="tighten_marginal[2->1]"),
        correlation_audit(x - y, y, 0.0, tolerance=INDEPENDENCE_TOLERANCE, name="tighten_increment_independence[2->1]"),
        atom_mass_audit(x, y, 1.0, 2.0, name="tighten_atom_mass[2->1]"),
    ]
    # the kernel applied to noise directly must agree with the response path
    x_direct = tighten_sample(y, 1.0, 2.0, _gen(seed, "tighten_direct"))
    reports.append(ks_two_sample(x, x_direct, name="tighten_response_vs_noise[2->1]"))
    return reports


SUITES = {
    "marginals": marginals,
    "atoms": atoms,
    "correlation": correlation,
    "mse": mse,
    "markov": markov,
    "privacy": privacy,
    "tighten": tighten,
}


def suite_names():
    return list(SUITES) + ["all"]


def run_suite(name, seed=0, n=1_000_000):
    """Run the named suite (or ``"all"``) and return its reports in order."""
    if name != "all" and name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(suite_names())}")
    seed = check_seed(seed)
    n = int(n)
    if n < SUITE_MIN_SAMPLES:
        raise InsufficientSamplesError(f"suites need n >= {SUITE_MIN_SAMPLES}, got {n}")
    names = list(SUITES) if name == "all" else [name]
    reports = []
    for suite in names:
        for report in SUITES[suite](seed, n):
            report.details["suite"] = suite
            reports.append(_tag(report, seed))
    return reports
