import numpy as np
import pytest

from abdecide.model import ExperimentRecord, MetricSchema


def random_psd(rng, n, scale=1.0, jitter=1e-9):
    a = rng.standard_normal((n, n))
    m = a @ a.T * scale / n + jitter * np.eye(n)
    return (m + m.T) / 2.0


def make_record(rec_id, timestamp, x, sigma, names=None, **kw):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if names is None:
        names = tuple(f"M{j + 1}" for j in range(x.size))
    return ExperimentRecord(
        id=rec_id,
        timestamp=timestamp,
        schema=MetricSchema(names=tuple(names)),
        x=x,
        sigma=np.atleast_2d(np.asarray(sigma, dtype=float)),
        **kw,
    )


def random_history(rng, n_records, n_metrics, sigma_scale=1.0, x_scale=1.0):
    return [
        make_record(
            f"h{i}",
            float(i),
            rng.standard_normal(n_metrics) * x_scale,
            random_psd(rng, n_metrics, scale=sigma_scale),
        )
        for i in range(n_records)
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def registry_path(tmp_path):
    return tmp_path / "registry.jsonl"
