import pytest

from gridstitch.config import PatternConfig, connector_positions
from gridstitch.errors import InvalidConfig


def test_defaults_valid():
    cfg = PatternConfig().validate()
    assert cfg.base_unit == 8.0
    assert cfg.seam_allowance == 1.0
    assert cfg.connectors_per_unit == 2


def test_connector_count_is_even():
    for k in range(1, 5):
        cfg = PatternConfig(connector_density=k).validate()
        assert cfg.connectors_per_unit == 2 * k
        assert cfg.connectors_per_unit % 2 == 0


def test_allowance_must_be_under_half_unit():
    with pytest.raises(InvalidConfig):
        PatternConfig(seam_allowance=5.0).validate()
    with pytest.raises(InvalidConfig):
        PatternConfig(seam_allowance=4.0).validate()  # exactly half is out
    PatternConfig(seam_allowance=3.9).validate()


def test_bad_params():
    with pytest.raises(InvalidConfig):
        PatternConfig(base_unit=0).validate()
    with pytest.raises(InvalidConfig):
        PatternConfig(base_unit=-8).validate()
    with pytest.raises(InvalidConfig):
        PatternConfig(connector_density=0).validate()


@pytest.mark.parametrize(
    "length,k,expected",
    [
        (8.0, 1, [2.0, 6.0]),
        (16.0, 1, [2.0, 6.0, 10.0, 14.0]),
        (8.0, 2, [1.0, 3.0, 5.0, 7.0]),
    ],
)
def test_connector_positions(length, k, expected):
    cfg = PatternConfig(connector_density=k)
    assert connector_positions(length, cfg) == pytest.approx(expected)


def test_connector_positions_symmetric():
    cfg = PatternConfig()
    for m in (1, 2, 3, 5):
        pos = connector_positions(m * 8.0, cfg)
        assert len(pos) == 2 * m
        for p, q in zip(pos, reversed(pos)):
            assert p + q == pytest.approx(m * 8.0)


def test_equal_length_edges_align_under_translation():
    cfg = PatternConfig(connector_density=2)
    a = connector_positions(24.0, cfg)
    b = connector_positions(24.0, cfg)
    assert a == b  # same offsets along any equal-length edge


def test_non_multiple_length_rejected():
    cfg = PatternConfig()
    with pytest.raises(InvalidConfig):
        connector_positions(12.0, cfg)
    with pytest.raises(InvalidConfig):
        connector_positions(0.0, cfg)
