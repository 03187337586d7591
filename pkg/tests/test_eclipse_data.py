"""Invariants of the bundled per-century eclipse table."""

from seriesfit import eclipse


def test_indices_are_unique_and_contiguous():
    data = eclipse.load_eclipse_data()
    centuries = [row.century for row in data]
    assert len(set(centuries)) == len(centuries)
    assert centuries == list(range(-19, 31))


def test_counts_within_published_bounds():
    lo, hi = eclipse.count_bounds(eclipse.load_eclipse_data())
    assert (lo, hi) == (222, 256)


def test_training_window_covers_forty_centuries():
    data = eclipse.load_eclipse_data()
    train = eclipse.training_dataset(data)
    assert train.n == 40
    assert train.x.min() == -19 and train.x.max() == 20
    assert eclipse.holdout_dataset(data).n == 10


def test_demo_config_band_and_shift():
    cfg = eclipse.demo_config()
    assert (cfg.band.beta_min, cfg.band.beta_max, cfg.band.grid_points) == (0.05, 3.2, 4096)
    assert cfg.family.transform.kind == "affine"
    assert cfg.family.transform.offset == 20.0
