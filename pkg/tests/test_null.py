import io

import numpy as np
import pytest

from zdip import (
    BelowTableMinimum,
    CorruptTable,
    DegenerateEnsemble,
    FormatVersionMismatch,
    InvalidGridPoint,
    InvalidReplicates,
    MissingColumn,
    NullSummary,
    NullTable,
    generate_table,
    get_summary,
    load_default_table,
    load_table,
    save_table,
    simulate_null_dips,
)
from zdip.null import _CHECKSUM_PREFIX, _digest, default_grid, dumps_table, fast_grid, loads_table, summarize


def _reseal(lines):
    """Replace the checksum so only the edited content can fail."""
    body = [l for l in lines if not l.startswith(_CHECKSUM_PREFIX)]
    return "\n".join(body + [_CHECKSUM_PREFIX + _digest(body)]) + "\n"


def test_simulation_is_seeded():
    a = simulate_null_dips(4, 5, seed=3)
    assert a.shape == (5,)
    assert np.array_equal(a, simulate_null_dips(4, 5, seed=3))


def test_longer_run_extends_shorter():
    short = simulate_null_dips(30, 300, seed=1)
    long = simulate_null_dips(30, 600, seed=1)
    assert np.array_equal(long[:300], short)


def test_different_seeds_differ():
    assert not np.array_equal(simulate_null_dips(30, 50, 1), simulate_null_dips(30, 50, 2))


def test_simulation_rejects_bad_args():
    with pytest.raises(InvalidGridPoint):
        simulate_null_dips(3, 10, 0)
    with pytest.raises(InvalidReplicates):
        simulate_null_dips(10, 1, 0)


def test_null_dip_shrinks_with_n():
    assert simulate_null_dips(1000, 2000, 5).mean() < simulate_null_dips(100, 2000, 5).mean()


def test_null_dips_within_bounds():
    d = simulate_null_dips(8, 500, 0)
    assert np.all(d >= 1 / 16) and np.all(d <= 0.25)


def test_summarize_two_points():
    s = summarize([0.1, 0.2], n=4)
    assert s.mu == pytest.approx(0.15)
    assert s.sigma == pytest.approx(0.07071067811865475)


def test_summarize_constant_is_degenerate():
    with pytest.raises(DegenerateEnsemble):
        summarize([0.1, 0.1, 0.1], n=4)


def test_summary_reruns_agree_within_standard_error():
    a = summarize(simulate_null_dips(200, 9999, 1), 200)
    b = summarize(simulate_null_dips(200, 9999, 2), 200)
    assert abs(a.mu - b.mu) < 3 * np.hypot(a.standard_error, b.standard_error)


def test_grids():
    g = default_grid()
    assert g[0] == 4 and g[-1] == 72_000 and np.all(np.diff(g) > 0)
    f = fast_grid()
    assert f[0] == 4 and f[-1] == 72_000 and len(f) < len(g)


def test_singleton_grid():
    assert len(generate_table([4], 50, 0)) == 1


def test_generate_rejects_unsorted_grid():
    with pytest.raises(InvalidGridPoint) as err:
        generate_table([4, 10, 8], 20, 0)
    assert err.value.batch_index == 2


def test_generate_is_bit_identical():
    a = generate_table([4, 9, 30], 100, 11, metadata={"profile": "x"})
    b = generate_table([4, 9, 30], 100, 11, metadata={"profile": "x"})
    assert dumps_table(a) == dumps_table(b)


def test_lookup_exact(small_table):
    assert get_summary(small_table, 20) == small_table.entries[3]


def test_lookup_midpoint(small_table):
    lo, hi = small_table.entries[4], small_table.entries[5]  # 50, 100
    s = get_summary(small_table, 75)
    assert s.mu == pytest.approx((lo.mu + hi.mu) / 2, rel=1e-14)
    assert s.sigma == pytest.approx((lo.sigma + hi.sigma) / 2, rel=1e-14)
    assert not s.extrapolated


def test_lookup_clamps_above(small_table):
    s = get_summary(small_table, 100_000)
    last = small_table.entries[-1]
    assert s.extrapolated and s.mu == last.mu and s.sigma == last.sigma


def test_lookup_below_minimum(small_table):
    with pytest.raises(BelowTableMinimum):
        get_summary(small_table, 3)


def test_round_trip_is_lossless(small_table, tmp_path):
    path = tmp_path / "t.csv"
    save_table(small_table, path)
    back = load_table(path)
    assert back == small_table
    assert back.generator_metadata == small_table.generator_metadata


def test_round_trip_via_stream(small_table):
    buf = io.StringIO()
    save_table(small_table, buf)
    buf.seek(0)
    assert load_table(buf) == small_table


def test_shuffled_rows_rejected(small_table):
    lines = dumps_table(small_table).splitlines()
    i = next(k for k, l in enumerate(lines) if l.startswith("n,")) + 1
    lines[i], lines[i + 1] = lines[i + 1], lines[i]
    with pytest.raises(CorruptTable):
        loads_table(_reseal(lines))


def test_nonpositive_sigma_rejected(small_table):
    lines = dumps_table(small_table).splitlines()
    i = next(k for k, l in enumerate(lines) if l.startswith("4,"))
    f = lines[i].split(",")
    f[2] = "0.0"
    lines[i] = ",".join(f)
    with pytest.raises(CorruptTable):
        loads_table(_reseal(lines))


def test_tampering_detected_by_checksum(small_table):
    text = dumps_table(small_table).replace("\n4,", "\n4,1", 1)
    with pytest.raises(CorruptTable, match="checksum"):
        loads_table(text)


def test_missing_checksum_rejected(small_table):
    lines = dumps_table(small_table).splitlines()[:-1]
    with pytest.raises(CorruptTable):
        loads_table("\n".join(lines))


def test_version_mismatch(small_table):
    text = dumps_table(small_table).replace("v1", "v2", 1)
    with pytest.raises(FormatVersionMismatch):
        loads_table(text)


def test_bad_header():
    with pytest.raises(CorruptTable):
        loads_table("n,mu,sigma\n4,0.1,0.01\n")


def test_missing_column(small_table):
    lines = dumps_table(small_table).splitlines()
    lines = [",".join(l.split(",")[:-1]) if not l.startswith("#") else l for l in lines]
    with pytest.raises(MissingColumn):
        loads_table(_reseal(lines))


def test_table_requires_increasing_n():
    a = NullSummary(10, 0.1, 0.01, 100)
    with pytest.raises(CorruptTable):
        NullTable((a, a))


def test_bundled_table_loads():
    t = load_default_table()
    assert t.n_min == 4 and t.n_max == 72_000
    assert all(e.replicates == 9999 for e in t.entries)


def test_env_var_overrides_bundled(small_table, tmp_path, monkeypatch):
    path = tmp_path / "t.csv"
    save_table(small_table, path)
    monkeypatch.setenv("ZDIP_NULL_TABLE", str(path))
    assert load_default_table() == small_table
