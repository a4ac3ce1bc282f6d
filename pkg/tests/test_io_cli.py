import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nkcontact.cli import main
from nkcontact.contact import build_standard_example
from nkcontact.exact import format_rational
from nkcontact.geometry import Geometry
from nkcontact.io import SpecError, bundled_specs, emit_standard_spec, load_spec, parse_spec
from nkcontact.report import (
    SUITES,
    result_document,
    run_suite,
    sweep_delta,
    tag_key,
    to_json,
)
from nkcontact.soliton import SolitonKind


def spec_text(brackets, phi=None, zeta=None, soliton=None, m=1):
    doc = {
        "m": m,
        "metric": "identity",
        "brackets": [{"i": i, "j": j, "k": k, "c": c} for i, j, k, c in brackets],
        "contact": {
            "zeta": zeta or ["1", "0", "0"],
            "phi": phi or [["0", "0", "0"], ["0", "0", "-1"], ["0", "1", "0"]],
            "eta": zeta or ["1", "0", "0"],
        },
    }
    if soliton:
        doc["soliton"] = soliton
    return json.dumps(doc, indent=2)


# --- loading --------------------------------------------------------------------

def test_bundled_names():
    names = {"standard-delta-half", "standard-delta-one", "abelian3", "sphere3", "heisenberg5"}
    assert {n + ".json" for n in names} <= set(bundled_specs())


def test_load_standard_half():
    M, S, sol = load_spec("standard-delta-half.json")
    assert Geometry(M, S).k == Fraction(3, 4)
    assert sol.kind is SolitonKind.STAR_CONFORMAL_EINSTEIN and sol.V is None and sol.omega is None


def test_load_abelian():
    M, S, sol = load_spec("abelian3", strict=False)
    assert M.structure.max() == 0 and M.structure.min() == 0
    assert sol is None
    with pytest.raises(SpecError, match="Eq2.1"):
        load_spec("abelian3")


def test_non_jacobi_names_triple():
    text = spec_text([(1, 2, 3, "1"), (1, 3, 1, "1")])
    with pytest.raises(SpecError) as info:
        parse_spec(text, strict=False)
    assert "(e1, e2, e3)" in str(info.value)
    assert info.value.where == "brackets"


def test_parse_error_has_position():
    with pytest.raises(SpecError) as info:
        parse_spec('{\n  "m": 1,\n  "metric": }')
    assert info.value.where == "line 3, column 13"


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d.update(m=0), "m"),
    (lambda d: d.update(metric="diag"), "metric"),
    (lambda d: d["brackets"].append({"i": 2, "j": 1, "k": 3, "c": "1"}), "brackets[1]"),
    (lambda d: d["brackets"][0].update(c="0.5"), "brackets[0].c"),
    (lambda d: d["contact"].update(zeta=["1", "0"]), "contact.zeta"),
    (lambda d: d.update(soliton={"kind": "ricci-flow"}), "soliton.kind"),
])
def test_validation_errors_name_path(mutate, where):
    doc = json.loads(spec_text([(2, 3, 1, "2")]))
    mutate(doc)
    with pytest.raises(SpecError) as info:
        parse_spec(json.dumps(doc), strict=False)
    assert info.value.where.startswith(where)


def test_missing_file():
    with pytest.raises(SpecError, match="no such spec file"):
        load_spec("/nonexistent/spec.json")
    # bundled names are only a fallback for bare names
    with pytest.raises(SpecError):
        load_spec("/nonexistent/abelian3.json", strict=False)


@pytest.mark.parametrize("d", ["0", "1/2", "1", "2", "-3/7"])
def test_emit_round_trip(d):
    delta = Fraction(d)
    text = emit_standard_spec(delta)
    M, S, sol = parse_spec(text)
    ex = build_standard_example(delta)
    assert (M.structure == ex.manifold.structure).all()
    assert S.phi == ex.structure.phi and S.zeta == ex.structure.zeta
    assert emit_standard_spec(delta) == text


def test_soliton_section_parsed():
    text = spec_text([(2, 3, 1, "2")], soliton={"kind": "*-cge", "V": ["0", "1", "0"],
                                                "omega": "-7/12", "p": "1/2"})
    _, _, sol = parse_spec(text, strict=False)
    assert sol.kind is SolitonKind.STAR_CONFORMAL_GRADIENT_EINSTEIN
    assert sol.omega == Fraction(-7, 12) and sol.p == Fraction(1, 2)


# --- suites -----------------------------------------------------------------------

def standard(d):
    ex = build_standard_example(Fraction(d))
    return ex.manifold, ex.structure


def test_nullity_suite_half():
    res = run_suite("nullity", *standard(Fraction(1, 2)))
    assert res.passed
    assert res.values["nullity"]["k"] == "3/4" and res.values["nullity"]["mu"] == "0"


def test_structure_suite_fails_on_zero_phi():
    M, S, _ = load_spec("abelian3", strict=False)
    res = run_suite("structure", M, S)
    assert not res.passed and res.first_failure() == "Eq2.1"


def test_all_on_flat_instance():
    res = run_suite("all", *standard(1))
    assert res.passed and not res.errors and not res.skipped
    sol = res.values["soliton"]
    assert sol["omega"] == "-1/3"
    assert sol["killing_fields"] == [["0", "1", "0"]]
    assert res.values["gradient"]["laplacian_f"] == ["0"]
    assert res.values["gradient"]["harmonic"] is True
    assert all(format_rational(c.residual) == "0" for _, c in res.checks)


def test_all_on_flat_instance_with_pressure():
    res = run_suite("all", *standard(1), p=Fraction(1, 2))
    assert res.passed and res.values["soliton"]["omega"] == "-7/12"


def test_prerequisites():
    M, S, _ = load_spec("abelian3", strict=False)
    assert "nullity" in run_suite("nullity", M, S).errors
    res = run_suite("all", M, S)
    assert "nullity" in res.skipped and not res.passed
    # no constant-component gradient soliton at k != 0
    res = run_suite("gradient", *standard(Fraction(1, 2)))
    assert "gradient" in res.errors and res.first_failure() == "gradient"
    with pytest.raises(ValueError):
        run_suite("ricci", *standard(1))


@pytest.mark.parametrize("name", ["sphere3", "heisenberg5"])
def test_sasakian_instances_report_closed_forms(name):
    M, S, sol = load_spec(name)
    res = run_suite("star", M, S, sol)
    assert res.passed
    assert any("k=1" in n for n in res.notes)


def test_checks_are_sorted():
    res = run_suite("all", *standard(Fraction(1, 2)))
    keys = [tag_key(c.tag) for _, c in res.checks]
    assert keys == sorted(keys)


def test_tag_coverage():
    tags = set()
    for d in (Fraction(1, 2), Fraction(1)):
        tags |= {c.tag for _, c in run_suite("all", *standard(d)).checks}
    wanted = {f"Eq1.{i}" for i in range(1, 6)} | {f"Eq2.{i}" for i in range(1, 18)}
    wanted |= {"Eq3.1", "Eq3.2", "Eq3.3", "Eq3.11", "Eq3.15", "Eq3.19", "Eq3.21"}
    wanted |= {f"Eq4.{i}" for i in range(5, 10)} | {"Eq4.12", "Eq4.17", "Thm4.2"}
    assert wanted <= tags, wanted - tags


def test_sweep_k_column():
    rows = sweep_delta([0, Fraction(1, 2), 1, 2], "nullity")
    assert [r.k for r in rows] == [1, Fraction(3, 4), 0, -3]
    assert all(r.result.passed for r in rows)
    assert sweep_delta([]) == []


def test_sweep_star_at_two():
    (row,) = sweep_delta([2], "star")
    assert row.result.values["star"]["ric_star"] == [["0", "0", "0"], ["0", "3", "0"], ["0", "0", "3"]]


def test_sweep_collects_errors():
    (row,) = sweep_delta([Fraction(1, 2)], "gradient")
    assert row.result is not None and not row.result.passed


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(SUITES), st.sampled_from([Fraction(0), Fraction(1, 2), Fraction(2), Fraction(-1, 2)]))
def test_residual_zero_iff_pass(suite, d):
    res = run_suite(suite, *standard(d))
    doc = result_document(res)
    for c in doc["checks"]:
        assert (c["residual"] == "0") == c["pass"]


def test_json_is_deterministic_without_timing():
    a = to_json(result_document(run_suite("all", *standard(Fraction(1, 2)))))
    b = to_json(result_document(run_suite("all", *standard(Fraction(1, 2)))))
    assert a == b and "elapsed_ms" not in a
    assert "elapsed_ms" in to_json(result_document(run_suite("star", *standard(1)), timing=True))


# --- command line ------------------------------------------------------------------

def test_cli_verify_pass(capsys):
    assert main(["verify", "standard-delta-one"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out


def test_cli_verify_json_byte_identical(capsys):
    main(["verify", "standard-delta-half", "--format", "json"])
    first = capsys.readouterr().out
    main(["verify", "standard-delta-half", "--format", "json"])
    assert capsys.readouterr().out == first
    assert json.loads(first)["passed"] is True


def test_cli_verify_failure(capsys):
    assert main(["verify", "abelian3", "--suite", "structure"]) == 1
    assert "first failure: Eq2.1" in capsys.readouterr().err


def test_cli_bad_inputs(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(spec_text([(1, 2, 3, "1"), (1, 3, 1, "1")]))
    assert main(["verify", str(bad)]) == 2
    assert "Jacobi" in capsys.readouterr().err
    bad.write_text("{\n")
    assert main(["verify", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err


def test_cli_pressure_override(capsys):
    assert main(["verify", "standard-delta-one", "--suite", "soliton", "--p", "1/2",
                 "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["values"]["soliton"]["omega"] == "-7/12"


def test_cli_sweep(capsys):
    assert main(["sweep", "--delta", "0,1/2,1,2", "--suite", "nullity"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert [line.split()[1] for line in out[1:]] == ["1", "3/4", "0", "-3"]


def test_cli_example(tmp_path, capsys):
    target = tmp_path / "spec.json"
    assert main(["example", "--delta", "1/2", "--emit", str(target)]) == 0
    assert target.read_text() == emit_standard_spec(Fraction(1, 2))
    assert main(["example", "--delta", "1/2"]) == 0
    assert capsys.readouterr().out == target.read_text()
    assert main(["verify", str(target), "--suite", "nullity"]) == 0


def test_cli_rejects_bad_rational():
    with pytest.raises(SystemExit):
        main(["example", "--delta", "0.5"])
