import json
import subprocess
import sys

import pytest

from vbsuper.algebroid import form_from_tensor
from vbsuper.superconn import SigmaGauge, gauge_transform, is_flat_super
from vbsuper.models import random_flat_instance
from vbsuper.classify import classifying_tuple
from vbsuper.io import (IoError, parse, emit, superdata_document,
                        scalar_to_str, str_to_scalar, Document)
from vbsuper.cli import main


def run_cli(argv, stdin_text=None, capsys=None):
    """Invoke the entry point in-process, capturing stdout."""
    import io as _io
    old_in = sys.stdin
    try:
        if stdin_text is not None:
            sys.stdin = _io.StringIO(stdin_text)
        code = main(argv)
    finally:
        sys.stdin = old_in
    return code


def test_scalar_round_trip():
    for text in ("0", "7", "-3", "1/3", "-22/7"):
        assert scalar_to_str(str_to_scalar(text)) == text
    assert scalar_to_str(str_to_scalar("2/4")) == "1/2"
    for bad in ("1.5", "", "1/", "/2", "1/2/3", "a"):
        with pytest.raises(IoError):
            str_to_scalar(bad)


def test_document_round_trip():
    for seed in (0, 4):
        data = random_flat_instance(seed, (1, 1, 1))
        doc = superdata_document(data)
        text = emit(doc)
        doc2 = parse(text)
        assert doc2 == doc
        assert emit(doc2) == text
        # non-canonical whitespace and key order reparse to the same form
        loose = json.dumps(json.loads(text))
        assert emit(parse(loose)) == text


def test_parsed_superdata_behaves_like_original():
    data = random_flat_instance(2, (1, 1, 1))
    doc2 = parse(emit(superdata_document(data)))
    back = doc2.single("superdata")
    assert is_flat_super(back) == []
    assert classifying_tuple(back) == classifying_tuple(data)


def test_unresolved_reference_names_the_id():
    data = random_flat_instance(1, (1, 1, 0))
    tree = json.loads(emit(superdata_document(data)))
    for sec in tree["sections"]:
        if sec["kind"] == "connection":
            sec["algebroid"] = "nowhere"
            break
    with pytest.raises(IoError) as err:
        parse(json.dumps(tree))
    assert "nowhere" in str(err.value)


def test_invariant_violations_carry_section_and_path():
    data = random_flat_instance(1, (1, 1, 0))
    tree = json.loads(emit(superdata_document(data)))
    for sec in tree["sections"]:
        if sec["kind"] == "algebroid":
            sec["bracket"][0][0][0] = "1"  # breaks antisymmetry
            bad_id = sec["id"]
            break
    with pytest.raises(IoError) as err:
        parse(json.dumps(tree))
    assert err.value.section == bad_id
    tree = json.loads(emit(superdata_document(data)))
    for sec in tree["sections"]:
        if sec["kind"] == "ring":
            sec["unit"][0] = "0.5"
            break
    with pytest.raises(IoError) as err:
        parse(json.dumps(tree))
    assert err.value.path is not None


def test_cli_example_flat_pipeline(capsys):
    assert run_cli(["example", "aff1-type1"]) == 0
    doc_text = capsys.readouterr().out
    assert run_cli(["flat"], stdin_text=doc_text) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["flat"] is True
    # perturb one core-anchor entry: flat must exit 1
    tree = json.loads(doc_text)
    for sec in tree["sections"]:
        if sec["kind"] == "superdata":
            sec["core_anchor"][0][0] = "5"
    assert run_cli(["flat"], stdin_text=json.dumps(tree)) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["flat"] is False and report["conditions"]


def test_cli_check_exit_codes(capsys, tmp_path):
    good = tmp_path / "good.json"
    assert run_cli(["example", "sl2-adjoint",
                    "--output", str(good)]) == 0
    capsys.readouterr()
    assert run_cli(["check", str(good)]) == 0
    tree = json.loads(good.read_text())
    for sec in tree["sections"]:
        if sec["kind"] == "algebroid":
            sec["bracket"][0][1][1] = "17"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(tree))
    assert run_cli(["check", str(bad)]) == 1
    capsys.readouterr()
    syntactic = tmp_path / "syntax.json"
    syntactic.write_text("{ not json")
    assert run_cli(["check", str(syntactic)]) == 2
    capsys.readouterr()


def test_cli_cs_k2_zero_and_certificates(capsys, tmp_path):
    rf = tmp_path / "rf.json"
    assert run_cli(["example", "random-flat", "--seed", "3",
                    "--output", str(rf)]) == 0
    capsys.readouterr()
    assert run_cli(["cs", "--k", "2", str(rf)]) == 0
    out = json.loads(capsys.readouterr().out)
    forms = [s for s in out["sections"]
             if s["kind"] == "form" and s["id"].startswith("cs.degree")]
    assert forms == []  # the k = 2 form is identically zero
    assert run_cli(["cs", "--k", "1", str(rf)]) == 0
    out = capsys.readouterr().out
    reparsed = parse(out)
    cert_ids = reparsed.find("certificate")
    assert cert_ids == ["cs.class"]


def test_cli_classify_round_trip(capsys, tmp_path):
    rf = tmp_path / "rf.json"
    assert run_cli(["example", "random-flat", "--seed", "6",
                    "--output", str(rf)]) == 0
    capsys.readouterr()
    assert run_cli(["classify", str(rf)]) == 0
    out = capsys.readouterr().out
    doc = parse(out)
    tup = doc.single("tuple")
    data = parse(rf.read_text()).single("superdata")
    assert tup == classifying_tuple(data)


def test_cli_classify_matches_unscrambled(capsys, tmp_path):
    data = random_flat_instance(9, (1, 1, 1))
    hs = data.hom_ec()
    vals = {(0,): tuple(1 for _ in range(hs.dim))}
    sigma = SigmaGauge(data, form_from_tensor(data.algebroid, hs.module, 1,
                                              vals))
    moved = gauge_transform(data, sigma)
    f = tmp_path / "moved.json"
    f.write_text(emit(superdata_document(moved)))
    assert run_cli(["classify", str(f)]) == 0
    doc = parse(capsys.readouterr().out)
    assert doc.single("tuple") == classifying_tuple(data)


def test_cli_gauge_applies_sigma(capsys, tmp_path):
    data = random_flat_instance(5, (1, 1, 1))
    doc = superdata_document(data)
    hs = data.hom_ec()
    vals = {(0,): tuple(2 for _ in range(hs.dim))}
    sigma_form = form_from_tensor(data.algebroid, hs.module, 1, vals)
    doc.add("form", "sigma", sigma_form)
    f = tmp_path / "in.json"
    f.write_text(emit(doc))
    assert run_cli(["gauge", str(f)]) == 0
    out = parse(capsys.readouterr().out)
    moved = out.single("superdata")
    expected = gauge_transform(data, SigmaGauge(data, sigma_form))
    assert moved.core_anchor == expected.core_anchor
    assert moved.Omega.compact == expected.Omega.compact
    for i in range(data.algebroid.dim):
        assert moved.nabla_c.nabla[i] == expected.nabla_c.nabla[i]
        assert moved.nabla_s.nabla[i] == expected.nabla_s.nabla[i]


def test_cli_dualize_emits_flat_dual(capsys, tmp_path):
    rf = tmp_path / "rf.json"
    assert run_cli(["example", "random-flat", "--seed", "2",
                    "--output", str(rf)]) == 0
    capsys.readouterr()
    assert run_cli(["dualize", str(rf)]) == 0
    dual = parse(capsys.readouterr().out).single("superdata")
    assert is_flat_super(dual) == []
    orig = parse(rf.read_text()).single("superdata")
    assert dual.E.dim == orig.E.dim and dual.C.dim == orig.C.dim


def test_cli_cohomology(capsys, tmp_path):
    rf = tmp_path / "rf.json"
    assert run_cli(["example", "aff1-lambda", "--output", str(rf)]) == 0
    capsys.readouterr()
    assert run_cli(["cohomology", "--n", "1", str(rf)]) == 0
    doc = parse(capsys.readouterr().out)
    claim, payload = doc.single("certificate")
    # H^1(aff(1)) is one-dimensional
    assert payload["dimension"] == (1,)
    assert len(doc.find("form")) == 1


def test_cli_subprocess_entry(tmp_path):
    # the module also runs as a real process with piped documents
    env_src = str((tmp_path / "..").resolve())
    p1 = subprocess.run(
        [sys.executable, "-m", "vbsuper.cli", "example", "aff1-type1"],
        capture_output=True, text=True)
    assert p1.returncode == 0
    p2 = subprocess.run(
        [sys.executable, "-m", "vbsuper.cli", "flat"],
        input=p1.stdout, capture_output=True, text=True)
    assert p2.returncode == 0
