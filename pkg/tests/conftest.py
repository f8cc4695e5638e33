import numpy as np
import pytest

from mmrelay.channel import ChannelParams
from mmrelay.topology import Instance


def rigged_instance(m, n, rates, file_sizes=1e9, los_pairs=()):
    """Instance whose link-rate table is replaced by ``rates`` (bits/s).

    Geometry is a dummy grid; only delays computed through
    ``seconds_per_bit`` see the injected table.
    """
    count = 2 * m + n
    positions = tuple((float(i), 0.0) for i in range(count))
    if np.ndim(file_sizes) == 0:
        file_sizes = (float(file_sizes),) * m
    inst = Instance(
        m=m,
        n=n,
        positions=positions,
        los_pairs=frozenset(los_pairs),
        params=ChannelParams(),
        file_sizes=tuple(file_sizes),
        area=(float(count), 1.0),
    )
    rates = np.asarray(rates, dtype=float)
    with np.errstate(divide="ignore"):
        inst.__dict__["seconds_per_bit"] = (1.0 / rates).tolist()
    return inst


@pytest.fixture
def rigged():
    return rigged_instance


def pytest_terminal_summary(terminalreporter):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
