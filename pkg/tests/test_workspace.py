"""Workspace text format: canonical rendering, parsing, error reporting."""

from pathlib import Path

import numpy as np
import pytest

from ppmod import (
    load_workspace,
    parse_formula_text,
    parse_workspace,
    render_workspace,
    save_workspace,
)
from ppmod.errors import ParseError, UnknownReference, ValidationFailure
from ppmod.fixtures import demo_workspace, f3, formula_corpus, r2, tri2

DEMO_PATH = Path(__file__).resolve().parent.parent / "workspaces" / "demo.ws"


def test_checked_in_demo_matches_the_fixture():
    text = DEMO_PATH.read_text()
    assert render_workspace(demo_workspace()) == text


def test_demo_roundtrip_is_byte_stable():
    text = DEMO_PATH.read_text()
    ws = parse_workspace(text)
    assert render_workspace(ws) == text
    again = parse_workspace(render_workspace(ws))
    assert render_workspace(again) == text


def test_parsed_demo_objects_are_coherent():
    ws = parse_workspace(DEMO_PATH.read_text())
    assert set(ws.algebras) == {"R2"}
    assert set(ws.modules) == {"RR", "S", "RS", "LR", "LS"}
    assert set(ws.formulas) == {"xt0", "divt"}
    assert set(ws.contexts) == {"envS", "pairsRR"}
    assert set(ws.budgets) == {"small"}
    assert ws.modules["RS"].dim == 3
    assert ws.contexts["pairsRR"].pairs[0][0].render() == ws.formulas["xt0"].render()


@pytest.mark.parametrize("alg_fn,side", [
    (r2, "right"), (r2, "left"), (tri2, "right"), (tri2, "left"), (f3, "right"),
])
def test_formula_render_parse_roundtrip(alg_fn, side):
    alg = alg_fn()
    for phi in formula_corpus(alg, side):
        body = phi.render()
        back = parse_formula_text(alg, side, phi.nfree, body)
        assert back.fingerprint() == phi.fingerprint()
        assert back.render() == body


def test_save_and_load(tmp_path):
    ws = demo_workspace()
    path = tmp_path / "w.ws"
    save_workspace(ws, path)
    back = load_workspace(path)
    assert render_workspace(back) == render_workspace(ws)


def test_missing_version_line():
    with pytest.raises(ParseError) as exc:
        parse_workspace("[algebra A]\nfield = 2\n")
    assert exc.value.line == 1


def test_unsupported_version():
    with pytest.raises(ParseError):
        parse_workspace("version = 99\n")


def test_duplicate_section_rejected():
    text = (
        "version = 1\n\n[budget b]\nbound_vars = 1\nequations = 1\n"
        "candidates = 1\nstages = 1\n\n[budget b]\nbound_vars = 2\n"
        "equations = 1\ncandidates = 1\nstages = 1\n"
    )
    with pytest.raises(ParseError) as exc:
        parse_workspace(text)
    assert "budget" in str(exc.value)


def test_duplicate_key_rejected():
    text = "version = 1\n\n[budget b]\nbound_vars = 1\nbound_vars = 2\n"
    with pytest.raises(ParseError):
        parse_workspace(text)


def test_unknown_algebra_reference():
    text = (
        "version = 1\n\n[module M]\nalgebra = missing\nside = right\n"
        "dim = 0\nactions = []\n"
    )
    with pytest.raises(UnknownReference) as exc:
        parse_workspace(text)
    assert "missing" in str(exc.value)


def test_bad_module_wrapped_with_section_name():
    base = (
        "version = 1\n\n[algebra R2]\nfield = 2\nlabels = 1, t\n"
        "constants = [[[1,0],[0,1]],[[0,1],[0,0]]]\nunit = [1, 0]\n\n"
    )
    bad_mod = base + (
        "[module M]\nalgebra = R2\nside = right\ndim = 2\n"
        "actions = [[[1,0],[0,1]],[[0,1],[0,1]]]\n"
    )
    with pytest.raises(ValidationFailure) as exc:
        parse_workspace(bad_mod)
    assert "[module M]" in str(exc.value)


def test_unknown_label_in_formula():
    base = (
        "version = 1\n\n[algebra R2]\nfield = 2\nlabels = 1, t\n"
        "constants = [[[1,0],[0,1]],[[0,1],[0,0]]]\nunit = [1, 0]\n\n"
    )
    text = base + "[formula f]\nalgebra = R2\nside = right\narity = 1\nbody = x1*u = 0\n"
    with pytest.raises(ParseError) as exc:
        parse_workspace(text)
    assert "label" in str(exc.value)


def test_bound_variables_must_be_canonical():
    alg = r2()
    with pytest.raises(ParseError):
        parse_formula_text(alg, "right", 1, "E y2 . x1*t + y2 = 0")
    with pytest.raises(ParseError):
        parse_formula_text(alg, "right", 1, "E z1 . x1*t + z1 = 0")


def test_formula_text_variants_parse():
    alg = r2()
    # parenthesised coefficient sum and integer-scaled labels
    phi = parse_formula_text(alg, "right", 1, "x1*(1 + t) = 0")
    assert phi.nfree == 1 and phi.neq == 1
    f3_alg = f3()
    psi = parse_formula_text(f3_alg, "right", 1, "x1*2*1 = 0")
    assert int(psi.a[0, 0, 0]) == 2
    trivial = parse_formula_text(alg, "right", 1, "0 = 0")
    assert trivial.neq == 0
    left = parse_formula_text(tri2(), "left", 1, "e12*x1 = 0")
    assert left.side == "left"


def test_multiline_bracketed_values():
    text = (
        "version = 1\n\n[algebra R2]\nfield = 2\nlabels = 1, t\n"
        "constants = [[[1,0],[0,1]],\n"
        "    [[0,1],[0,0]]]\n"
        "unit = [1, 0]\n"
    )
    ws = parse_workspace(text)
    assert "R2" in ws.algebras
    assert ws.algebras["R2"].dim == 2


def test_comments_and_blank_lines_ignored():
    text = (
        "# leading comment\nversion = 1\n\n# a budget\n[budget b]\n"
        "bound_vars = 1\nequations = 1\n# inner comment\ncandidates = 4\nstages = 1\n"
    )
    ws = parse_workspace(text)
    assert ws.budgets["b"].candidates == 4


def test_missing_required_key():
    text = "version = 1\n\n[budget b]\nbound_vars = 1\n"
    with pytest.raises(ParseError):
        parse_workspace(text)


def test_workspace_add_rejects_duplicates_and_bad_names():
    ws = demo_workspace()
    with pytest.raises(ValidationFailure):
        ws.add_algebra("R2", r2())
    with pytest.raises(ValidationFailure):
        ws.add_algebra("bad name", tri2())
