import json

import pytest

from tbf.errors import NotAHomomorphism, ParseError
from tbf.formats import (
    dumps,
    endo_to_json,
    load_json,
    parse_endo,
    parse_fg_abelian,
    parse_group,
    parse_matrix,
)
from tbf.intlinalg import INFINITE
from tbf.twisted import reidemeister_number


def test_group_inputs_agree():
    a = parse_group({"library": "S3"})
    b = parse_group({"permutations": ["(1 2)", "(1 2 3)"], "degree": 3})
    c = parse_group({"permutations": [[2, 1, 3], [2, 3, 1]]})
    assert a.order == b.order == c.order == 6
    d = parse_group({"cayley": [[0, 1], [1, 0]], "labels": ["e", "s"]})
    assert d.label(1) == "s"


def test_endo_inputs():
    G = parse_group({"library": "S3"})
    assert reidemeister_number(G, parse_endo(G, {"kind": "identity"})) == 3
    assert reidemeister_number(G, parse_endo(G, {"kind": "trivial"})) == 1
    phi = parse_endo(G, {"generator_images": {"1": 1, "2": 0}})
    assert parse_endo(G, endo_to_json(phi)).map == phi.map
    assert parse_endo(G, list(phi.map)).map == phi.map
    with pytest.raises(NotAHomomorphism):
        parse_endo(G, {"generator_images": {"1": 2, "2": 2}})
    with pytest.raises(ParseError):
        parse_endo(G, {"generator_images": {"9": 0}})


def test_load_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "library": "S3",\n  oops\n}')
    with pytest.raises(ParseError) as exc:
        load_json(p)
    assert "line 3" in str(exc.value)
    with pytest.raises(ParseError):
        load_json(tmp_path / "missing.json")
    assert load_json('{"a": 1}') == {"a": 1}


def test_matrix_and_fg():
    assert parse_matrix("[[2,1],[1,1]]") == [[2, 1], [1, 1]]
    with pytest.raises(ParseError):
        parse_matrix("[[1,2],[3]]")
    fg = parse_fg_abelian({"rank": 1, "torsion": [2], "matrix": [[-1, 0], [0, 1]]})
    assert fg.group.ngens == 2


def test_dumps_handles_special_values():
    out = json.loads(dumps({"R": INFINITE, "t": (1, 2)}))
    assert out == {"R": "infinite", "t": [1, 2]}
