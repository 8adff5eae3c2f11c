import pytest

from choicestruct.errors import SpaceError
from choicestruct.game import example_game
from choicestruct.plot import belief_lines, render_belief_figure


def test_belief_lines_endpoints():
    lines = belief_lines(example_game(), 0)
    assert list(lines) == ["u", "m", "c", "d"]
    assert lines["u"] == ((5, 0), (0, -3))
    assert lines["c"] == ((1, 3), (-4, 0))


def test_belief_lines_on_submenu():
    lines = belief_lines(example_game(), 0, ["u", "m"])
    assert lines["m"][1] == (-2, 0)


def test_belief_lines_need_two_opponent_actions():
    with pytest.raises(SpaceError):
        belief_lines(example_game(), 1)
    with pytest.raises(SpaceError):
        belief_lines(example_game(), 0, ["u", "zz"])


def test_figure_written(tmp_path):
    out = render_belief_figure(example_game(), 0, tmp_path / "fig" / "beliefs.png", interval=("1/4", 1))
    assert out.exists()
    assert out.stat().st_size > 0
