import json
from fractions import Fraction

from gwel.reports import (
    TOOL_VERSION,
    Report,
    report_csv_bytes,
    report_json_bytes,
    report_to_object,
)


def sample_report():
    return Report(
        command="demo",
        params={"rank": 2, "steps": 3},
        seed=855509,
        series={
            "columns": ["n", "value", "flag"],
            "rows": [[1, 1 / 3, True], [2, None, False]],
        },
        summary={
            "coefficient": Fraction(2, 6),
            "pi_ish": 3.14159265358979,
            "label": "x",
            "none": None,
        },
        warnings=["something to know"],
    )


def test_json_shape_and_rounding():
    obj = json.loads(report_json_bytes(sample_report()))
    assert obj["command"] == "demo"
    assert obj["tool_version"] == TOOL_VERSION
    assert obj["units"] == "nats"
    assert obj["seed"] == 855509
    assert obj["params"] == {"rank": 2, "steps": 3}
    # floats carry 12 significant digits
    assert obj["series"]["rows"][0][1] == 0.333333333333
    assert obj["summary"]["pi_ish"] == 3.14159265359
    # fractions become exact integer pairs, bools and nulls survive
    assert obj["summary"]["coefficient"] == {"num": 1, "den": 3}
    assert obj["series"]["rows"][0][2] is True
    assert obj["series"]["rows"][1][1] is None
    assert obj["warnings"] == ["something to know"]


def test_json_bytes_deterministic_and_sorted():
    a = report_json_bytes(sample_report())
    b = report_json_bytes(sample_report())
    assert a == b
    assert a.endswith(b"\n")
    text = a.decode()
    assert text.index('"command"') < text.index('"params"') < text.index('"seed"')


def test_csv_shape():
    lines = report_csv_bytes(sample_report()).decode().splitlines()
    assert lines[0] == "n,value,flag"
    assert lines[1] == "1,0.333333333333,1"
    assert lines[2] == "2,,0"


def test_round_trip_object():
    obj = report_to_object(sample_report())
    assert json.loads(json.dumps(obj, sort_keys=True)) == json.loads(
        report_json_bytes(sample_report())
    )
