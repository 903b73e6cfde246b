from utily.helpers import Timer, format_table, make_rng, profile_table


def test_rng_is_seeded():
    assert make_rng(5).integers(0, 1000, 8).tolist() == make_rng(5).integers(0, 1000, 8).tolist()
    assert make_rng().integers(0, 1000, 8).tolist() == make_rng(None).integers(0, 1000, 8).tolist()


def test_timer_accumulates():
    timer = Timer()
    with timer.measure():
        pass
    first = timer.seconds
    with timer.measure():
        sum(range(1000))
    assert 0 <= first <= timer.seconds


def test_format_table():
    assert format_table([], ["a"]) == "(empty)"
    lines = format_table([{"suite": "casimir", "status": "pass"}], ["suite", "status"]).splitlines()
    assert lines[0].split() == ["suite", "status"]
    assert lines[1].split() == ["casimir", "pass"]


def test_profile_table_fills_missing_degrees():
    lines = profile_table({1: {0: 2}, 0: {1: 4}}, 2).splitlines()
    assert lines[0].split() == ["weight", "H0", "H1", "H2"]
    assert lines[1].split() == ["0", "0", "4", "0"]
    assert lines[2].split() == ["1", "2", "0", "0"]
