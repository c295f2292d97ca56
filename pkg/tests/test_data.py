import numpy as np
import pytest

from midpredict import (
    CONFLICT,
    PEACE,
    ParseError,
    ValidationError,
    balanced_sample,
    generate_synthetic,
    load_dataset,
    write_dataset,
)
from midpredict.data import CSV_HEADER, _CAP_BASE, _CAP_SD, _DEM_SD

from _oracles import pair_count_auc


def write_lines(path, rows):
    path.write_text("\n".join([CSV_HEADER] + rows) + "\n", encoding="utf-8")


class TestLoad:
    def test_field_mapping(self, tmp_path):
        f = tmp_path / "d.csv"
        write_lines(f, ["ABC-XYZ,1950,6,1,0,3.2,1.1,0.02,1,peace"])
        ds = load_dataset(f)
        rec = ds.records[0]
        assert rec.dyad_id == "ABC-XYZ"
        assert rec.year == 1950
        assert rec.value("democracy") == 6.0
        assert rec.value("majorpower") == 1.0
        assert rec.label == PEACE
        assert not ds.normalized

    def test_democracy_bound_violation(self, tmp_path):
        f = tmp_path / "d.csv"
        write_lines(f, ["A,1950,11,1,0,3.2,1.1,0.02,1,peace"])
        with pytest.raises(ValidationError, match="democracy"):
            load_dataset(f)

    def test_binary_violation_names_variable(self, tmp_path):
        f = tmp_path / "d.csv"
        write_lines(f, ["A,1950,5,0.5,0,3.2,1.1,0.02,1,peace"])
        with pytest.raises(ValidationError, match="allies"):
            load_dataset(f)

    def test_no_data_rows(self, tmp_path):
        f = tmp_path / "d.csv"
        write_lines(f, [])
        with pytest.raises(ParseError, match="no data rows"):
            load_dataset(f)

    def test_empty_file(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("", encoding="utf-8")
        with pytest.raises(ParseError, match="empty"):
            load_dataset(f)

    def test_wrong_column_count_names_line(self, tmp_path):
        f = tmp_path / "d.csv"
        write_lines(f, ["A,1950,6,1,0,3.2,1.1,0.02,1,peace", "B,1951,6,1,0,peace"])
        with pytest.raises(ParseError, match="line 3"):
            load_dataset(f)

    def test_non_numeric_field(self, tmp_path):
        f = tmp_path / "d.csv"
        write_lines(f, ["A,1950,six,1,0,3.2,1.1,0.02,1,peace"])
        with pytest.raises(ParseError, match="line 2"):
            load_dataset(f)

    def test_bad_label(self, tmp_path):
        f = tmp_path / "d.csv"
        write_lines(f, ["A,1950,6,1,0,3.2,1.1,0.02,1,war"])
        with pytest.raises(ParseError, match="label"):
            load_dataset(f)

    def test_bad_header(self, tmp_path):
        f = tmp_path / "d.csv"
        f.write_text("a,b,c\n1,2,3\n", encoding="utf-8")
        with pytest.raises(ParseError, match="header"):
            load_dataset(f)

    def test_order_preserved(self, tmp_path):
        f = tmp_path / "d.csv"
        write_lines(
            f,
            [
                "B,1950,1,0,0,3.0,1.0,0.1,0,conflict",
                "A,1951,2,0,0,3.0,1.0,0.1,0,peace",
            ],
        )
        ds = load_dataset(f)
        assert [r.dyad_id for r in ds.records] == ["B", "A"]


def test_write_load_round_trip_byte_identical(tmp_path, easy_dataset):
    f1 = tmp_path / "a.csv"
    f2 = tmp_path / "b.csv"
    write_dataset(easy_dataset, f1)
    write_dataset(load_dataset(f1), f2)
    assert f1.read_bytes() == f2.read_bytes()


class TestBalancedSample:
    def test_counts_and_partition(self, easy_dataset):
        train, test = balanced_sample(easy_dataset, 50, seed=3)
        assert train.count(CONFLICT) == train.count(PEACE) == 50
        assert len(train) + len(test) == len(easy_dataset)
        train_keys = {r.key for r in train.records}
        test_keys = {r.key for r in test.records}
        assert not train_keys & test_keys
        assert train_keys | test_keys == {r.key for r in easy_dataset.records}

    def test_protocol_scale_counts(self):
        ds = generate_synthetic(26845, 892, 1.0, seed=1)
        train, test = balanced_sample(ds, 500, seed=9)
        assert len(train) == 1000
        assert len(test) == 26737
        assert test.count(CONFLICT) == 392
        assert test.count(PEACE) == 26345

    def test_zero_per_class(self, easy_dataset):
        train, test = balanced_sample(easy_dataset, 0, seed=3)
        assert len(train) == 0
        assert [r.key for r in test.records] == [r.key for r in easy_dataset.records]

    def test_insufficient_class_reports_counts(self):
        ds = generate_synthetic(10, 3, 1.0, seed=2)
        with pytest.raises(ValidationError, match="3"):
            balanced_sample(ds, 5, seed=0)

    def test_seed_determinism(self, easy_dataset):
        t1, _ = balanced_sample(easy_dataset, 40, seed=7)
        t2, _ = balanced_sample(easy_dataset, 40, seed=7)
        t3, _ = balanced_sample(easy_dataset, 40, seed=8)
        assert [r.key for r in t1.records] == [r.key for r in t2.records]
        assert [r.key for r in t1.records] != [r.key for r in t3.records]


class TestSynthetic:
    def test_zero_separation_is_noise(self, noise_dataset):
        score = -(
            noise_dataset.features()[:, 0] / _DEM_SD
            + (noise_dataset.features()[:, 4] - _CAP_BASE) / _CAP_SD
        )
        a = pair_count_auc(score, noise_dataset.targets01())
        assert 0.45 <= a <= 0.55

    def test_high_separation_near_separable(self):
        ds = generate_synthetic(100, 100, 4.0, seed=21)
        # The generator's own informative direction is the oracle score.
        score = -(ds.features()[:, 0] / _DEM_SD + (ds.features()[:, 4] - _CAP_BASE) / _CAP_SD)
        assert pair_count_auc(score, ds.targets01()) > 0.95

    def test_single_class_output(self):
        ds = generate_synthetic(0, 10, 1.0, seed=3)
        assert len(ds) == 10
        assert ds.count(CONFLICT) == 10

    def test_determinism(self):
        a = generate_synthetic(30, 30, 2.0, seed=5)
        b = generate_synthetic(30, 30, 2.0, seed=5)
        c = generate_synthetic(30, 30, 2.0, seed=6)
        assert a.records == b.records
        assert a.records != c.records

    def test_respects_bounds(self, easy_dataset):
        X = easy_dataset.features()
        assert (np.abs(X[:, 0]) <= 10).all()
        for j in (1, 2, 6):
            assert set(np.unique(X[:, j])) <= {0.0, 1.0}

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            generate_synthetic(-1, 5, 1.0, seed=0)
        with pytest.raises(ValueError):
            generate_synthetic(5, 5, -0.5, seed=0)
