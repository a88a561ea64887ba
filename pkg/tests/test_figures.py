import numpy as np

from abdecide.figures import decision_space_heatmap, prior_sweep_figure, simulation_figure
from abdecide.model import Gaussian
from abdecide.risk import decision_space
from abdecide.simulate import SimConfig, run_simulation


def test_decision_space_heatmap_renders(tmp_path):
    post = Gaussian([2.0, -1.0], np.eye(2))
    points = decision_space(
        post, (0, 1), (list(np.linspace(1, 50, 12)), list(np.linspace(-50, -1, 12))),
        np.zeros(2),
    )
    path = tmp_path / "space.png"
    decision_space_heatmap(points, "M1", "M2", path)
    assert path.stat().st_size > 1000


def test_prior_sweep_figure_renders(tmp_path):
    ks = [0.0, 0.5, 1.0, 2.0]
    means = np.array([[0.1, 0.2]] * 4)
    sds = np.array([[0.1 * (i + 1), 0.2 * (i + 1)] for i in range(4)])
    path = tmp_path / "sweep.png"
    prior_sweep_figure(ks, means, sds, ["M1", "M2"], path)
    assert path.stat().st_size > 1000


def test_simulation_figure_renders(tmp_path):
    report = run_simulation(SimConfig(n_experiments=5, n_metrics=2, seed=1))
    path = tmp_path / "sim.png"
    simulation_figure(report, path)
    assert path.stat().st_size > 1000
