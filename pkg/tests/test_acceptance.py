"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line with the measured numbers.
"""

import time

import numpy as np

from gradual_privacy import GradualLaplaceMechanism, laplace_sample, naive_composition_release, sample_path
from gradual_privacy.audit.privacy import lipschitz_grid_audit
from gradual_privacy.audit.quadrature import chapman_kolmogorov_audit, marginal_errors
from gradual_privacy.audit.statistics import (
    atom_mass_audit,
    correlation_audit,
    ks_one_sample,
    ks_two_sample,
    mse_audit,
)
from gradual_privacy.cli import main
from gradual_privacy.laws import relax_sample, tighten_sample

N = 1_000_000


def gen(*key):
    return np.random.default_rng([2024, *key])


def test_mse_matches_optimum(criterion):
    start = time.perf_counter()
    reports = []
    for k, eps in enumerate((0.5, 1.0, 2.0)):
        reports.append(mse_audit(laplace_sample(eps, gen(1, k), size=N), eps, 1))
        mech = GradualLaplaceMechanism(epsilon=eps, random_state=100 + k).fit(np.zeros((N, 3)))
        reports.append(mse_audit(mech.release().values, eps, 3))
    elapsed = time.perf_counter() - start
    ok = all(r.passed for r in reports) and elapsed < 10.0
    detail = ", ".join(f"{r.details['empirical']:.4f}/{r.details['target']:.4f}" for r in reports)
    criterion("1 MSE = 2n/eps^2 within 2%", ok, f"{detail}; {elapsed:.2f}s")
    assert ok


def test_relaxed_marginal_is_laplace(criterion):
    x = laplace_sample(1.0, gen(2), size=N)
    y = relax_sample(x, 1.0, 2.0, gen(2, 1))
    r = ks_one_sample(y, 2.0)
    criterion("2 relax 1->2 marginal KS", r.passed, f"D={r.statistic:.6f} < {r.threshold:.6f}")
    assert r.passed


def test_atom_mass(criterion):
    reports = []
    for k, (e1, e2) in enumerate(((1.0, 2.0), (1.0, 4.0), (2.0, 3.0))):
        x = laplace_sample(e1, gen(3, k), size=N)
        reports.append(atom_mass_audit(x, relax_sample(x, e1, e2, gen(3, k, 1)), e1, e2))
    ok = all(r.passed for r in reports)
    detail = ", ".join(
        f"({r.details['eps1']:g},{r.details['eps2']:g}) {r.details['empirical']:.4f} vs {r.details['target']:.4f}"
        for r in reports
    )
    criterion("3 atom mass (eps1/eps2)^2 +-0.01", ok, detail)
    assert ok


def test_correlation(criterion):
    reports = []
    for k, (e1, e2) in enumerate(((1.0, 2.0), (1.0, 4.0))):
        x = laplace_sample(e1, gen(4, k), size=N)
        reports.append(correlation_audit(x, relax_sample(x, e1, e2, gen(4, k, 1)), e1 / e2))
    ok = all(r.passed for r in reports)
    detail = ", ".join(f"{r.details['empirical']:.4f} vs {r.details['target']:.4f}" for r in reports)
    criterion("4 correlation eps1/eps2 +-0.01", ok, detail)
    assert ok


def test_markov_equivalence(criterion):
    direct = sample_path([1.0, 3.0], gen(5), size=N)[-1]
    stepped = sample_path([1.0, 2.0, 3.0], gen(5, 1), size=N)[-1]
    ks = ks_two_sample(direct, stepped)
    ck = chapman_kolmogorov_audit(1.0, 2.0, 3.0)
    ok = ks.passed and ck.statistic < 1e-6
    criterion(
        "5 Markov 1->3 vs 1->2->3",
        ok,
        f"KS D={ks.statistic:.6f} < {ks.threshold:.6f}; CK dev={ck.statistic:.3e} < 1e-6",
    )
    assert ok


def test_privacy_grid(criterion):
    r = lipschitz_grid_audit(1.0, 2.0)
    ok = r.statistic <= 2.0 + 1e-6
    criterion(
        "6 log-density slope <= eps2 + 1e-6",
        ok,
        f"max slope {r.statistic:.10f} (continuous {r.details['max_slope_continuous']:.10f}, "
        f"diagonal {r.details['max_slope_diagonal']:.10f}) on {r.n_samples} points",
    )
    assert ok


def test_tightening(criterion):
    y = laplace_sample(2.0, gen(7), size=N)
    x = tighten_sample(y, 1.0, 2.0, gen(7, 1))
    ks = ks_one_sample(x, 1.0)
    indep = correlation_audit(x - y, y, 0.0, tolerance=0.005)
    atom = atom_mass_audit(x, y, 1.0, 2.0)
    ok = ks.passed and indep.passed and atom.passed
    criterion(
        "7 tighten 2->1",
        ok,
        f"KS D={ks.statistic:.6f} < {ks.threshold:.6f}; increment corr {indep.details['empirical']:+.5f}; "
        f"atom {atom.details['empirical']:.4f}",
    )
    assert ok


def test_baseline_separation(criterion):
    data = np.zeros(N)
    _, naive = naive_composition_release(data, 1.0, 1.1, seed=8)
    naive_mse = float(np.mean(naive.values**2))
    mech = GradualLaplaceMechanism(random_state=9).fit(data)
    mech.release(1.0)
    gradual_mse = float(np.mean(mech.release(1.1).values ** 2))
    ok = abs(naive_mse / 200.0 - 1) <= 0.02 and abs(gradual_mse / (2 / 1.21) - 1) <= 0.02
    criterion(
        "8 second release at (1, 1.1)",
        ok,
        f"naive MSE {naive_mse:.2f} vs 200; gradual MSE {gradual_mse:.4f} vs {2 / 1.21:.4f}",
    )
    assert ok


def test_marginal_quadrature(criterion):
    err1, err2 = marginal_errors(1.0, 2.0, n_grid=100)
    ok = max(err1, err2) < 1e-8
    criterion("9 joint law marginals by quadrature", ok, f"max errors {err1:.3e}, {err2:.3e} < 1e-8")
    assert ok


def _cli_session(root):
    root.mkdir()
    graph = root / "graph.txt"
    graph.write_text("0 1\n1 2\n2 3\n1 4\n")
    steps = [
        ["init", "--state", root / "state.json", "--data", "3.5,-1,10", "--alpha", "2", "--seed", "42"],
        ["release", "--state", root / "state.json", "--eps", "1", "--out", root / "r1.jsonl"],
        ["release", "--state", root / "state.json", "--eps", "4", "--out", root / "r4.jsonl"],
        ["release", "--state", root / "state.json", "--eps", "0.5", "--out", root / "r05.jsonl"],
        ["release", "--state", root / "state.json", "--eps", "4", "--out", root / "r4b.jsonl"],
        ["tighten", "--in", root / "r4.jsonl", "--eps", "2", "--alpha", "2", "--seed", "7", "--out", root / "t2.jsonl"],
        ["inspect", "--state", root / "state.json", "--out", root / "inspect.json"],
        ["scenario-social", "--graph", graph, "--owner", "0", "--data", "1", "--seed", "3", "--out", root / "soc.jsonl"],
        ["audit", "atoms", "--seed", "5", "--n", "20000", "--out", root / "audit.jsonl"],
    ]
    codes = [main([str(a) for a in step]) for step in steps]
    files = {p.name: p.read_bytes() for p in sorted(root.iterdir())}
    return codes, files


def test_cli_replay_is_byte_identical(criterion, tmp_path):
    codes_a, files_a = _cli_session(tmp_path / "a")
    codes_b, files_b = _cli_session(tmp_path / "b")
    ok = codes_a == codes_b == [0] * len(codes_a) and files_a == files_b and files_a["r4.jsonl"] == files_a["r4b.jsonl"]
    criterion("10 CLI session replay", ok, f"{len(files_a)} files compared, exit codes {codes_a}")
    assert ok
