import json
from fractions import Fraction

import pytest

from choicestruct.errors import WitnessError
from choicestruct.game import example_game, rationalize
from choicestruct.hierarchy import Separator, coherence_check, hierarchy_map, non_redundancy_verdict, refine_partition
from choicestruct.report import (
    append_log,
    choice_table_records,
    dominance_records,
    hierarchy_records,
    outcome_records,
    partition_records,
    rationalization_records,
    render,
    render_table,
)


def _by(records, **match):
    return [r for r in records if all(r.get(k) == v for k, v in match.items())]


def test_choice_table_ties(example):
    records = choice_table_records(example, 4)
    (full,) = _by(records, player="i", menu="{f_u,f_m,f_c,f_d}")
    assert full["choice"] == "{f_u,f_m,f_c}"
    assert full["note"] == "3-way tie at 3"
    (ucd,) = _by(records, menu="{f_u,f_c,f_d}")
    assert (ucd["choice"], ucd["note"]) == (
        "{f_u,f_c}",
        "2-way tie at 3; reference answer {f_u} differs under the closed interval",
    )
    (umc,) = _by(records, menu="{f_u,f_m,f_c}")
    assert umc["note"] == "3-way tie at 3; reference answer {f_u,f_m} differs under the closed interval"
    (um,) = _by(records, menu="{f_u,f_m}")
    assert (um["choice"], um["note"]) == ("{f_u}", "")
    (eu,) = _by(records, player="j", type="t_EU")
    assert eu["note"] == "2-way tie at 3/2"
    (mm,) = _by(records, player="j", type="t_Mm")
    assert mm["choice"] == "{f_l}"


def test_choice_records_list_large_menus_first(example):
    menus = [r["menu"] for r in _by(choice_table_records(example, 4), player="i")]
    assert menus[0] == "{f_u,f_m,f_c,f_d}"
    assert len(menus) == 11


def test_outcomes(example):
    records = outcome_records(example.outcomes)
    assert records[0] == {"kind": "outcome", "id": "(5,1)", "utility": "(5,1)"}
    assert len(records) == 8


def test_partition_records(example, bounds):
    part = refine_partition(example, bounds)
    records = partition_records(example, part, non_redundancy_verdict(part))
    (sep,) = _by(records, kind="separator")
    assert (sep["menu"], sep["within"], sep["inside"], sep["outside"]) == ("{f_l,f_r}", "{f_l}", "t_Mm", "t_EU")
    assert records[-1]["verdict"] == "NonRedundant"
    assert _by(records, kind="partition", player="j")[0]["blocks"] == "{t_Mm} | {t_EU}"


def test_separator_is_reverified(example, bounds):
    part = refine_partition(example, bounds)
    (sep,) = part.separators
    part.separators = [Separator(sep.player, sep.round, sep.menu, sep.choice, sep.outside, sep.inside)]
    with pytest.raises(WitnessError):
        partition_records(example, part, non_redundancy_verdict(part))


def test_hierarchy_records(example, bounds):
    h = hierarchy_map(example, 2, bounds)
    records = hierarchy_records(h, coherence_check(h))
    assert len(_by(records, kind="level")) == 4
    assert records[-1] == {"kind": "coherence", "ok": True}
    assert _by(records, kind="level", player="j", n=1)[0]["classes"] == "{t_Mm} | {t_EU}"


def test_rationalization_records(games):
    g = games["regret"]
    records = rationalization_records(g, rationalize(g))
    assert records[-1] == {"kind": "survivors", "survivors": "i: u | j: l"}
    assert _by(records, kind="round", round=1)[0]["deleted"] == "i: d | j: -"
    assert not _by(records, kind="witness", action="d")


def test_dominance_records():
    records = dominance_records(example_game(), 0)
    assert [(r["target"], r["mixture"], r["weights"]) for r in records] == [
        ("m", "p*u + (1-p)*c", "(1/2, 1)"),
        ("m", "p*u + (1-p)*d", "(1/2, 1)"),
        ("d", "p*u + (1-p)*c", "(0, 1/3)"),
        ("d", "p*m + (1-p)*c", "(0, 1/3)"),
    ]


def test_render_table_blocks():
    records = [
        {"kind": "a", "x": 1, "y": "long"},
        {"kind": "a", "x": 22, "y": "s"},
        {"kind": "b", "z": True},
    ]
    assert render_table(records) == "[a]\nx   y\n1   long\n22  s\n\n[b]\nz\nyes"


def test_render_machine_is_json_lines():
    records = [{"kind": "a", "x": 1}, {"kind": "b", "ok": False}]
    lines = render(records, "machine").splitlines()
    assert [json.loads(line) for line in lines] == records


def test_append_log_writes_json_lines(tmp_path):
    path = tmp_path / "logs" / "run.jsonl"
    append_log(path, {"kind": "nonred", "ok": True})
    append_log(path, {"kind": "verify", "ok": False, "rounds": Fraction(1, 2)})
    lines = path.read_text(encoding="utf-8").splitlines()
    assert [json.loads(line) for line in lines] == [
        {"kind": "nonred", "ok": True},
        {"kind": "verify", "ok": False, "rounds": "1/2"},
    ]
