import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from normlab import analytic as an
from normlab.dsl import FnSource, load_fn_file, parse_fn, parse_node, sources_from_json, tokenize
from normlab.errors import ParseError, SchemaError, UnboundParam, UnsupportedConstruct

CORPUS = [
    "exp(2*i*z)",
    "(z - a)*c",
    "z^2 - 1",
    "10*(0.05 - z)",
    "reflect(10*(0.05 - z))",
    "exp(-k*i*z)",
    "4*z^2*exp(-2*z)",
    "exp(2*i*z + p*z^2)",
    "-(z + 0.5i)^3 * exp(z)",
    "1+2i",
]
PARAMS = {"a": 0.05, "c": 10.0, "k": 10.0, "p": 1e-5}


def test_exp_node_shape():
    node = parse_node("exp(2*i*z)")
    assert isinstance(node, an.Exp)
    assert node.child == an.Poly((0j, 2j))


def test_params_substitute_as_literals():
    f = parse_fn("(z - a)*c", {"a": 0.05, "c": 10})
    assert f.node == an.Poly((-0.5 + 0j, 10 + 0j))


def test_division_rejected():
    with pytest.raises(UnsupportedConstruct) as exc:
        parse_fn("z/2")
    assert exc.value.position == 1


@pytest.mark.parametrize("text,pos", [("z +", 3), ("exp(z", 5), ("z ** 2", 3), ("2 3", 2)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as exc:
        parse_fn(text)
    assert exc.value.position == min(pos, len(text) - 1)


def test_unbound_and_exponent_limits():
    with pytest.raises(UnboundParam):
        parse_fn("q*z")
    with pytest.raises(UnsupportedConstruct):
        parse_fn("z^65")
    with pytest.raises(UnsupportedConstruct):
        parse_fn("z^1.5")
    assert parse_fn("z^0")(3.0) == 1


def test_precedence():
    assert parse_fn("-z^2")(2.0) == -4
    assert parse_fn("2*z + 3")(1.0) == 5
    assert parse_fn("2*(z + 3)")(1.0) == 8
    assert parse_fn("1+2i")(0) == 1 + 2j
    assert parse_fn("0.5i*z")(2.0) == 1j


@pytest.mark.parametrize("expr", CORPUS)
def test_round_trip(expr):
    node = parse_node(expr, PARAMS)
    assert parse_node(node.pretty()) == node


@pytest.mark.parametrize("expr", CORPUS)
@given(data=st.data())
def test_corrupted_token_position(expr, data):
    toks = [t for t in tokenize(expr, PARAMS) if t.kind != "end"]
    tok = data.draw(st.sampled_from(toks))
    bad = data.draw(st.sampled_from(["$", "/", "?", "@"]))
    text = expr[:tok.pos] + bad + expr[tok.pos + len(tok.text):]
    with pytest.raises(ParseError) as exc:
        parse_node(text, PARAMS)
    assert tok.pos <= exc.value.position < tok.pos + max(len(bad), 1)


def test_load_file(tmp_path):
    p = tmp_path / "f.json"
    p.write_text(json.dumps([{"name": "w", "expr": "exp(-1*i*k*z)", "params": {"k": 10}}]))
    (src,) = load_fn_file(p)
    assert src.name == "w" and src.domain == an.UNIT_DISK
    assert src.build()(0.1) == pytest.approx(complex(__import__("cmath").exp(-1j)))
    assert src.build(k=20)(0.1) == pytest.approx(complex(__import__("cmath").exp(-2j)))


@pytest.mark.parametrize("doc", [
    [{"name": "w", "expr": "z"}, {"name": "w", "expr": "z^2"}],
    [{"name": "w", "expr": "z", "domain": {"center": [0, 0], "radius": 0}}],
    [{"name": "w"}],
    [{"name": "w", "expr": "z", "colour": "red"}],
    [{"name": "w", "expr": "z", "params": {"z": 1}}],
    {"name": "w", "expr": "z"},
])
def test_schema_errors(doc):
    with pytest.raises(SchemaError):
        sources_from_json(doc)


def test_parse_error_names_owner():
    with pytest.raises(ParseError) as exc:
        sources_from_json([{"name": "bad", "expr": "z +"}])
    assert exc.value.owner == "bad"


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_fn_file(tmp_path / "nope.json")


def test_source_json_round_trip():
    src = FnSource("w", "exp(-k*i*z)", an.Disk(0, 3), {"k": 4.0})
    (back,) = sources_from_json([src.to_json()])
    assert back == src and back.params == src.params
