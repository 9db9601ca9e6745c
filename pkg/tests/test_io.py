import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from perslap import datasets
from perslap.complex import PointCloud
from perslap.errors import InputError, ParseError
from perslap.io import (
    SCHEMA_VERSION,
    Report,
    RunConfig,
    fmt_number,
    parse_csv_points,
    parse_distance_csv,
    parse_energies,
    parse_pdb_ca,
    parse_plain,
    parse_schedule,
    parse_xyz,
    read_structure,
    write_xyz,
)


def _atom(serial, name, resname, chain, resseq, x, y, z, b, altloc=" ", icode=" ", record="ATOM  "):
    return (
        f"{record}{serial:5d} {name:^4s}{altloc}{resname:3s} {chain}{resseq:4d}{icode}   "
        f"{x:8.3f}{y:8.3f}{z:8.3f}{1.0:6.2f}{b:6.2f}          {'C':>2s}"
    )


PDB = "\n".join(
    [
        "HEADER    TEST",
        _atom(1, "N", "GLY", "A", 1, 0.0, 0.0, 0.0, 9.0),
        _atom(2, "CA", "GLY", "A", 1, 1.0, 2.0, 3.0, 11.5),
        _atom(3, "CA", "ALA", "A", 2, 4.0, 2.0, 3.0, 12.25, altloc="A"),
        _atom(4, "CA", "ALA", "A", 2, 4.1, 2.1, 3.1, 40.0, altloc="B"),
        _atom(5, "CA", "SER", "A", 3, 7.0, 2.0, 3.0, 13.0),
        _atom(6, "CA", "SER", "A", 3, 7.5, 2.5, 3.5, 99.0),  # duplicate residue
        _atom(7, "CA", "HOH", "A", 4, 9.0, 9.0, 9.0, 50.0, record="HETATM"),
        "ENDMDL",
        _atom(8, "CA", "GLY", "A", 5, 0.0, 0.0, 0.0, 1.0),
        "END",
    ]
)


def test_pdb_keeps_first_ca_per_residue_of_first_model():
    cloud = parse_pdb_ca(PDB)
    assert len(cloud) == 3
    assert np.allclose(cloud.coords[1], [4.0, 2.0, 3.0])
    assert cloud.bfactors.tolist() == [11.5, 12.25, 13.0]
    assert cloud.labels == ("A:1:GLY", "A:2:ALA", "A:3:SER")


def test_pdb_errors():
    with pytest.raises(InputError):
        parse_pdb_ca("HEADER only\n")
    bad = _atom(1, "CA", "GLY", "A", 1, 0, 0, 0, 1.0)
    bad = bad[:60] + "  xx  " + bad[66:]
    with pytest.raises(ParseError) as info:
        parse_pdb_ca("REMARK\n" + bad)
    assert info.value.line == 2


def test_xyz_round_trip():
    cloud = datasets.benzene()
    back = parse_xyz(write_xyz(cloud, "benzene"))
    assert np.allclose(back.coords, cloud.coords, atol=1e-12)
    assert back.elements == cloud.elements


@given(st.integers(0, 2**32 - 1), st.integers(1, 20))
def test_xyz_round_trip_random(seed, n):
    x = np.random.default_rng(seed).normal(scale=10, size=(n, 3))
    assert np.allclose(parse_xyz(write_xyz(PointCloud(x))).coords, x, atol=1e-11)


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("", 1, "empty"),
        ("two\n\nC 0 0 0\n", 1, "not an integer"),
        ("2\n\nC 0 0 0\n", 1, "announces 2"),
        ("1\n\nC 0 0\n", 3, "element x y z"),
        ("2\ncomment\nC 0 0 0\nC 0 zero 0\n", 4, "non-numeric"),
        ("1\n\nC 0 nan 0\n", 3, "non-finite"),
    ],
)
def test_xyz_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as info:
        parse_xyz(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_plain_and_csv_points():
    cloud = parse_plain("# comment\nC 0 0 0\nC 1 0 0  # trailing\n\nC 0 1 0\n")
    assert len(cloud) == 3 and cloud.elements == ("C", "C", "C")
    assert parse_plain("0 0\n1 1\n").dim == 2
    with pytest.raises(ParseError) as info:
        parse_plain("0 0 0\n1 1\n")
    assert info.value.line == 2
    c = parse_csv_points("element,x,y,z\nC,0,0,0\nH,1,0,0\n")
    assert c.elements == ("C", "H") and np.allclose(c.coords[1], [1, 0, 0])
    assert len(parse_csv_points("0,0,0\n1,1,1\n")) == 2
    with pytest.raises(ParseError):
        parse_csv_points("")


def test_distance_csv():
    d = parse_distance_csv("0,1\n1,0\n")
    assert d.tolist() == [[0, 1], [1, 0]]
    with pytest.raises(ParseError):
        parse_distance_csv("0,1\n1\n")


def test_read_structure_dispatch(tmp_path):
    p = tmp_path / "m.pdb"
    p.write_text(PDB)
    assert len(read_structure(p)) == 3
    q = tmp_path / "m.xyz"
    q.write_text(write_xyz(datasets.benzene()))
    assert len(read_structure(q)) == 12
    with pytest.raises(InputError):
        read_structure(tmp_path / "missing.xyz")


def test_energies():
    e = parse_energies("name,energy_ev_per_atom\nC20,1.18\n\nC60,0.401\n")
    assert e == {"C20": 1.18, "C60": 0.401}
    assert parse_energies("C20,1.0\n") == {"C20": 1.0}
    with pytest.raises(ParseError) as info:
        parse_energies("C20,1.0\nC24\n")
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_energies("name,energy\n")


def test_schedule_parsing():
    assert parse_schedule("0:1:0.5").tolist() == [0.0, 0.5, 1.0]
    assert parse_schedule("2:12:1").tolist() == [float(r) for r in range(2, 13)]
    for bad in ("0:1", "a:b:c", "-1:1:0.5", "1:0:0.1", "0:1:0"):
        with pytest.raises(InputError):
            parse_schedule(bad)


def test_run_config_validation():
    with pytest.raises(InputError):
        RunConfig("curve", schedule=(1.0, 0.0, 0.1))
    with pytest.raises(InputError):
        RunConfig("curve", tau=0.0)
    with pytest.raises(InputError):
        RunConfig("curve", output_format="xml")
    with pytest.raises(InputError):
        RunConfig("curve", weight="mass")


def test_number_formatting():
    assert fmt_number(1 / 3) == 0.333333
    assert str(fmt_number(-0.0)) == "0.0"
    assert fmt_number(np.int64(4)) == 4 and fmt_number(True) is True
    assert fmt_number([1.23456789, None]) == [1.23457, None]


def test_report_rendering():
    cfg = RunConfig("spectra", output_format="json")
    rep = Report(cfg, [{"r": 0.1, "ev": [0.0, 2.0000001]}, {"r": 0.2, "extra": None}], {"n": 2})
    payload = json.loads(rep.render())
    assert payload["schema_version"] == SCHEMA_VERSION
    assert payload["records"][0]["ev"] == [0.0, 2.0]
    assert payload["config"]["command"] == "spectra"
    csv_text = Report(RunConfig("spectra"), rep.records).render()
    assert csv_text.splitlines() == ["r,ev,extra", "0.1,0;2,", "0.2,,"]
