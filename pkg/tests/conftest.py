import pytest

from smectic1d import ModelParams1D, SweepConfig, sweep_temperature


@pytest.fixture(scope="session")
def fig3_params() -> ModelParams1D:
    """The standard demonstration parameter set (library defaults)."""
    return ModelParams1D()


@pytest.fixture(scope="session")
def fig3_sweep(fig3_params):
    """The reference cooling sweep shared by the acceptance criteria.

    T from -9.5 down to -11.5 in steps of 0.02, warm-started, both branches.
    """
    config = SweepConfig(t_start=-9.5, t_end=-11.5, dt=0.02)
    return sweep_temperature(fig3_params, config)
