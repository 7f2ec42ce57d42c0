import json

from conftest import model_system, random_gauge
from resunfold.cli import main
from resunfold.invariants import FormalInvariants, extract_formal
from resunfold.monodromy import gamma_numeric
from resunfold.normal_forms import build_q_form
from resunfold.system import ParametricSystem, gauge_apply


def write_system(system, path):
    system.save(path)
    return str(path)


def test_invariants_command(tmp_path):
    p = write_system(model_system(0.1, 0.01), tmp_path / "m.json")
    out = tmp_path / "out"
    assert main(["--out", str(out), "invariants", p]) == 0
    data = json.load(open(out / "invariants.json"))
    assert abs(data["gamma"][0] - 2.0) < 1e-6
    assert abs(data["gamma"][1]) < 1e-6
    assert abs(data["mu"][0] - 0.1) < 1e-12
    assert abs(data["epsilon"][0] - 0.01) < 1e-12
    manifest = json.load(open(out / "manifest.json"))
    assert manifest["command"] == "invariants"
    assert "invariants.json" in manifest["outputs"]


def test_invariants_qform_gamma(tmp_path):
    F = FormalInvariants(0.002, -0.03, 0.0, 0.0, 0.01, 1.0)
    p = write_system(build_q_form(F, 0.75), tmp_path / "q.json")
    out = tmp_path / "out"
    assert main(["--out", str(out), "invariants", p]) == 0
    data = json.load(open(out / "invariants.json"))
    assert abs(data["gamma"][0] + 2.0) < 1e-6


def test_invariants_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--out", str(tmp_path / "o"), "invariants", str(bad)]) == 2


def test_invariants_non_generic(tmp_path):
    from resunfold.algebra import CSeries, CSeriesMat2
    K = 16
    A = CSeriesMat2(CSeries.zero(K), CSeries.one(K),
                    CSeries([0.3], K), CSeries.zero(K))
    p = write_system(ParametricSystem(0.0, 0.0, A), tmp_path / "ng.json")
    assert main(["--out", str(tmp_path / "o"), "invariants", p]) == 3


def test_equiv_command_exit_codes(tmp_path, rng):
    m = model_system(0.05, 0.01)
    p1 = write_system(m, tmp_path / "a.json")
    p2 = write_system(gauge_apply(random_gauge(rng, scale=0.03), m),
                      tmp_path / "b.json")
    assert main(["--out", str(tmp_path / "o1"), "equiv", p1, p2]) == 0

    F = extract_formal(m)
    p3 = write_system(build_q_form(F, 0.2, order=m.order), tmp_path / "c.json")
    assert main(["--out", str(tmp_path / "o2"), "equiv", p1, p3]) == 1
    report = json.load(open(tmp_path / "o2" / "equiv.json"))
    assert report["verdict"] == "NotEquivalent"


def test_normalform_command(tmp_path):
    inv = {"h": [[0.01, 0.0], [0.0, 0.0]],
           "lambda": [[0.0, 0.0], [0.0, 0.0]],
           "alpha": [[0.05, 0.0], [1.0, 0.0]],
           "gamma": [-1.2, 0.3]}
    p = tmp_path / "inv.json"
    p.write_text(json.dumps(inv))
    out = tmp_path / "o"
    assert main(["--out", str(out), "normalform", str(p), "--variant", "q"]) == 0
    built = ParametricSystem.from_descriptor(
        json.load(open(out / "normalform.json")))
    res = gamma_numeric(built, tol=1e-9)
    assert abs(res.gamma - complex(-1.2, 0.3)) < 1e-6


def test_normalform_b_variant(tmp_path):
    inv = {"h": [[0.01, 0.0], [0.0, 0.0]],
           "lambda": [[0.0, 0.0], [0.0, 0.0]],
           "alpha": [[0.05, 0.0], [1.0, 0.0]]}
    p = tmp_path / "inv.json"
    p.write_text(json.dumps(inv))
    out = tmp_path / "o"
    assert main(["--out", str(out), "normalform", str(p),
                 "--variant", "b", "--param", "0.1"]) == 0
    built = ParametricSystem.from_descriptor(
        json.load(open(out / "normalform.json")))
    F = extract_formal(built)
    assert abs(F.alpha0 - 0.05) < 1e-10 and abs(F.alpha1 - 1.0) < 1e-10


def test_portrait_command_and_flags(tmp_path):
    out = tmp_path / "o"
    rc = main(["--out", str(out), "portrait", "--mu", "0.1", "--eps", "0.01",
               "--grid", "31"])
    assert rc == 0
    for name in ("regions.csv", "trajectories.csv", "bifurcations.csv",
                 "summary.json", "manifest.json"):
        assert (out / name).exists()
    summary = json.load(open(out / "summary.json"))
    assert summary["label_counts"]["R_I"] == 0  # mu^2 = eps: inner empty

    # infeasible annulus constants are rejected
    rc = main(["--out", str(tmp_path / "o2"), "portrait", "--mu", "0.1",
               "--eps", "0.01", "--L", "10", "--delta-s", "0.5"])
    assert rc == 2


def test_portrait_inner_split(tmp_path):
    out = tmp_path / "o"
    assert main(["--out", str(out), "portrait", "--mu", "0.04", "--eps", "0",
                 "--grid", "61"]) == 0
    summary = json.load(open(out / "summary.json"))
    assert summary["label_counts"]["R_I"] > 0
    assert summary["inner_components"] == 2


def test_portrait_sigma_o(tmp_path):
    out = tmp_path / "o"
    assert main(["--out", str(out), "portrait", "--mu", "-0.1", "--eps", "0.01",
                 "--grid", "31"]) == 0
    summary = json.load(open(out / "summary.json"))
    assert summary["outer_empty"] or summary["outer_boundary_touching"]


def test_kappa_command(tmp_path):
    out = tmp_path / "o"
    assert main(["--out", str(out), "kappa", "--samples", "30"]) == 0
    rep = json.load(open(out / "kappa_report.json"))
    assert rep["samples"] == 30
    assert all(v["max"] < 1e-8 for v in rep["residuals"].values())
    assert rep["stirling"]["kappa_I_eps_1e-6_minus_1"] < 1e-3


def test_normcheck_command(tmp_path):
    out = tmp_path / "o"
    assert main(["--out", str(out), "normcheck", "--mu", "0.05",
                 "--eps", "0.0016"]) == 0
    rep = json.load(open(out / "normcheck.json"))
    assert rep["contraction_ratio_max"] <= 0.55
    assert rep["det_rel_std"] < 1e-6
    assert rep["diag_residual"] < 1e-6
    assert rep["sup_p"] <= 1.0


def test_normcheck_infeasible_r(tmp_path):
    rc = main(["--out", str(tmp_path / "o"), "normcheck", "--mu", "0.05",
               "--eps", "0.0016", "--r-coeffs", "9.0"])
    assert rc == 2


def test_portrait_threads(tmp_path):
    out = tmp_path / "o"
    assert main(["--out", str(out), "--threads", "2", "portrait",
                 "--mu", "0.06", "--eps", "0.001", "--grid", "21"]) == 0
    assert (out / "trajectories.csv").exists()


def test_outputs_deterministic(tmp_path):
    p = write_system(model_system(0.1, 0.01), tmp_path / "m.json")
    main(["--out", str(tmp_path / "o1"), "invariants", p])
    main(["--out", str(tmp_path / "o2"), "invariants", p])
    a = (tmp_path / "o1" / "invariants.json").read_text()
    b = (tmp_path / "o2" / "invariants.json").read_text()
    assert a == b
