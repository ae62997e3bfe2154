import pytest

from gwel.errors import CosetLimitError, ParseError
from gwel.lattice import FiniteSpace, Partition
from gwel.parsing import (
    RelatorList,
    describe_quotient_spec,
    parse_lattice_config,
    parse_quotient_spec,
    resolve_quotient_spec,
)
from gwel.quotients import AbelianRep, PermRep, TrivialRep
from gwel.words import parse_word


def test_fixed_specs():
    assert isinstance(parse_quotient_spec("trivial", 2), TrivialRep)
    assert isinstance(parse_quotient_spec(" abelian ", 3), AbelianRep)
    assert parse_quotient_spec("abelian", 3).rank == 3


def test_relator_spec_parses_and_resolves():
    spec = parse_quotient_spec("relators: aa, bb, abab", 2)
    assert isinstance(spec, RelatorList)
    assert spec.relators == tuple(parse_word(t, 2) for t in ("aa", "bb", "abab"))
    rep = resolve_quotient_spec("relators: aa, bb, abab", 2)
    assert isinstance(rep, PermRep)
    assert rep.size == 4
    # relators are cyclically reduced on the way in
    spec2 = parse_quotient_spec("relators: aBAbab", 2)  # conjugate of bab... no, of ab
    assert all(len(r) <= 6 for r in spec2.relators)


def test_empty_relator_list_is_legal():
    spec = parse_quotient_spec("relators:", 2)
    assert isinstance(spec, RelatorList)
    assert spec.relators == ()
    # resolving it asks for the whole free group; the guard must trip
    with pytest.raises(CosetLimitError):
        resolve_quotient_spec("relators:", 2, max_cosets=200)


def test_relator_errors_have_global_positions():
    with pytest.raises(ParseError) as e:
        parse_quotient_spec("relators: aa, b!b", 2)
    assert e.value.position == 16
    with pytest.raises(ParseError) as e:
        parse_quotient_spec("relators: aa, , bb", 2)
    assert "empty relator" in str(e.value)
    with pytest.raises(ParseError) as e:
        parse_quotient_spec("relators: aA", 2)
    assert "identity" in str(e.value)
    with pytest.raises(ParseError) as e:
        parse_quotient_spec("rellators: aa", 2)
    assert "unknown" in str(e.value).lower()
    assert ParseError("x").exit_code == 2


def test_perm_spec():
    rep = parse_quotient_spec("perm: a=(1 2); b=(1 3)", 2)
    assert isinstance(rep, PermRep)
    assert rep.size == 6  # the two transpositions generate S_3
    assert "images on 3 points" in describe_quotient_spec(rep)
    rep2 = parse_quotient_spec("perm: a=(1 2)(3 4); b=(2 3);", 2)  # trailing ; ok
    assert rep2.size == 8  # dihedral action on the 4-cycle 1-3-2-4


def test_perm_spec_errors():
    cases = [
        ("perm: a=(1 2); a=(1 3)", "twice"),
        ("perm: a=(1 2)(2 3)", "repeated"),
        ("perm: a=(0 1)", "1-based"),
        ("perm: a(1 2)", "'='"),
        ("perm: a=(1 2", ")"),
        ("perm: a=()", "empty cycle"),
        ("perm: a=", "cycle"),
        ("perm: c=(1 2)", "rank"),
        ("perm:", "empty"),
    ]
    for text, needle in cases:
        with pytest.raises(ParseError) as e:
            parse_quotient_spec(text, 2)
        assert needle in str(e.value), text


def test_describe_specs():
    assert describe_quotient_spec(TrivialRep(2)) == "trivial quotient"
    assert describe_quotient_spec(AbelianRep(3)) == "abelianization Z^3"
    rep = resolve_quotient_spec("relators: aa, bb, abab", 2)
    assert describe_quotient_spec(rep) == "perm-quotient of size 4"


def test_lattice_config_full():
    text = """
# comment line
points 4
weights 0.1, 0.2, 0.3, 0.4
action a=(1 2); b=(3 4)
direction increasing
chain 1,2,3,4
chain 1,2|3,4
chain 1|2|3,4
"""
    cfg = parse_lattice_config(text)
    assert cfg.space == FiniteSpace((0.1, 0.2, 0.3, 0.4))
    assert cfg.direction == "increasing"
    assert len(cfg.chain) == 3
    assert cfg.chain[1] == Partition([0, 0, 1, 1])
    assert cfg.action is not None and cfg.action.n_gens == 2
    assert cfg.action.act(1, 0) == 1  # a swaps points 1 and 2 (0-based 0,1)


def test_lattice_config_weight_modes():
    base = "points 3\ndirection decreasing\nchain 1,2,3\n"
    uni = parse_lattice_config(base + "weights uniform")
    assert uni.space == FiniteSpace.uniform(3)
    assert parse_lattice_config(base).space == FiniteSpace.uniform(3)
    r1 = parse_lattice_config(base + "weights random:99")
    r2 = parse_lattice_config(base + "weights random:99")
    assert r1.space == r2.space
    assert r1.space != parse_lattice_config(base + "weights random:100").space


def test_lattice_config_errors():
    cases = [
        ("direction increasing\nchain 1,2", "points"),
        ("points 3\nchain 1,2,3", "direction"),
        ("points 3\ndirection increasing", "chain"),
        ("points 3\ndirection sideways\nchain 1,2,3", "direction"),
        ("points 3\ndirection increasing\nchain 1,2", "not covered"),
        ("points 3\ndirection increasing\nchain 1,1,2", "two blocks"),
        ("points 3\ndirection increasing\nchain 1,2,5", "outside"),
        ("points 3\nweights 0.5, 0.5\ndirection increasing\nchain 1,2,3", "3 points"),
        ("points 3\nmystery 7\ndirection increasing\nchain 1,2,3", "unknown"),
        ("points 3\ndirection increasing\nchain 1,2,3\naction b=(1 2)", "consecutive"),
        ("points 3\ndirection increasing\nchain 1,2,3\naction a=(1 5)", "points"),
    ]
    for text, needle in cases:
        with pytest.raises(ParseError) as e:
            parse_lattice_config(text)
        assert needle in str(e.value), text
