import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmrelay.channel import ChannelParams
from mmrelay.errors import DomainError, ParameterError
from mmrelay.topology import Instance, Role, distance, generate_instance, los_probability


def two_nodes(p, q):
    return Instance(
        m=1, n=0, positions=(p, q), los_pairs=frozenset(), file_sizes=(1e9,), area=(1000.0, 1000.0)
    )


def test_reference_sized_instance():
    inst = generate_instance(42, 3, 10)
    assert inst.num_nodes == 16
    assert [nd.index for nd in inst.nodes] == list(range(16))
    roles = [nd.role for nd in inst.nodes]
    assert roles.count(Role.SOURCE) == 3 and roles.count(Role.DESTINATION) == 3 and roles.count(Role.RELAY) == 10
    for i in range(3):
        assert not inst.is_los(inst.source(i), inst.destination(i))
    assert all(0 <= x <= 1000 and 0 <= y <= 1000 for x, y in inst.positions)


def test_single_pair_no_relays():
    inst = generate_instance(7, 1, 0)
    assert inst.num_nodes == 2
    assert inst.los_pairs == frozenset()


def test_same_seed_same_instance():
    assert generate_instance(5, 3, 10) == generate_instance(5, 3, 10)
    assert generate_instance(5, 3, 10) != generate_instance(6, 3, 10)


def test_documented_draw_order():
    # Placement first (x, y per node), then one draw per non-direct pair.
    inst = generate_instance(11, 2, 3, area=(200.0, 100.0))
    rng = np.random.Generator(np.random.PCG64(11))
    xy = rng.random((7, 2)) * [200.0, 100.0]
    assert np.allclose(np.asarray(inst.positions), xy, rtol=0, atol=0)
    pairs = [(a, b) for a in range(7) for b in range(a + 1, 7) if (a, b) not in {(0, 2), (1, 3)}]
    u = rng.random(len(pairs))
    expected = {p for p, x in zip(pairs, u) if x < math.exp(-math.dist(xy[p[0]], xy[p[1]]) / 141.4)}
    assert inst.los_pairs == expected


@pytest.mark.parametrize(
    "args",
    [
        dict(m=0, n=3),
        dict(m=2, n=-1),
        dict(m=2, n=3, area=(0.0, 10.0)),
        dict(m=2, n=3, beta=0.0),
    ],
)
def test_generate_rejects_bad_parameters(args):
    with pytest.raises(ParameterError):
        generate_instance(1, **args)


def test_distance():
    assert distance(two_nodes((0.0, 0.0), (3.0, 4.0)), 0, 1) == 5.0
    assert distance(two_nodes((0.0, 0.0), (0.0, 0.5)), 0, 1) == 1.0
    assert distance(two_nodes((0.0, 0.0), (141.4, 0.0)), 1, 0) == pytest.approx(141.4)
    with pytest.raises(DomainError):
        distance(two_nodes((0.0, 0.0), (1.0, 1.0)), 1, 1)


def test_los_probability():
    assert los_probability(0.0, 0.3) == 1.0
    assert los_probability(141.4, 1 / 141.4) == pytest.approx(math.exp(-1), rel=1e-15)
    far = los_probability(1e4, 1 / 141.4)
    assert 0 < far < 1e-12
    with pytest.raises(ParameterError):
        los_probability(-1.0, 0.1)
    with pytest.raises(ParameterError):
        los_probability(1.0, 0.0)


def test_empirical_blockage_rate():
    # ~1e5 generated links: observed LOS count within 3 sd of sum of exp(-beta d).
    beta = 1 / 141.4
    observed = expected = var = 0.0
    for seed in range(2300):
        inst = generate_instance(seed, 1, 8, area=(300.0, 300.0), beta=beta)
        d = np.hypot(*(np.asarray(inst.positions)[:, None, :] - np.asarray(inst.positions)[None, :, :]).T)
        a, b = np.triu_indices(inst.num_nodes, k=1)
        keep = ~((a == 0) & (b == 1))
        p = np.exp(-beta * d[a[keep], b[keep]])
        observed += inst.los_matrix[a[keep], b[keep]].sum()
        expected += p.sum()
        var += (p * (1 - p)).sum()
    assert abs(observed - expected) < 3 * math.sqrt(var)


def test_fixed_distance_los_fraction():
    # the acceptance rule alone, at one distance
    d = 141.4
    rng = np.random.Generator(np.random.PCG64(2024))
    u = rng.random(100_000)
    p = los_probability(d, 1 / 141.4)
    se = math.sqrt(p * (1 - p) / u.size)
    assert abs(np.mean(u < p) - p) < 3 * se


def test_instance_json_roundtrip():
    inst = generate_instance(3, 3, 10)
    doc = json.loads(json.dumps(inst.to_dict()))
    assert Instance.from_dict(doc) == inst
    assert doc["los"] == sorted(doc["los"])
    assert {nd["role"] for nd in doc["nodes"]} == {"source", "destination", "relay"}


def test_instance_rejects_los_direct_link():
    with pytest.raises(ParameterError):
        Instance(m=1, n=0, positions=((0.0, 0.0), (1.0, 1.0)), los_pairs=frozenset({(0, 1)}), file_sizes=(1.0,))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**63), st.integers(1, 4), st.integers(0, 8))
def test_los_symmetry_and_forced_nlos(seed, m, n):
    inst = generate_instance(seed, m, n, params=ChannelParams())
    los = inst.los_matrix
    assert (los == los.T).all()
    assert not los.diagonal().any()
    for i in range(m):
        assert not los[inst.source(i), inst.destination(i)]
    assert all(0 <= x <= 1000 and 0 <= y <= 1000 for x, y in inst.positions)
