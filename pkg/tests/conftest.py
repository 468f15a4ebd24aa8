from pathlib import Path

import numpy as np
import pytest

from netsync.network import BranchSpec, Netlist, ShuntSpec, load_netlist, validate_netlist
from netsync.oscillators import chua_preset

NETWORKS_DIR = Path(__file__).resolve().parent.parent / 'networks'


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: long time-domain simulations')


def random_netlist(rng, n_nodes, n_boundary, shunts=False, uniform=False):
    """Connected random RL netlist: a random spanning tree plus a few chords.

    Args:
        rng (np.random.Generator): seeded generator
        n_nodes (int): total number of nodes
        n_boundary (int): number of boundary nodes (the first ones)
        shunts (bool): attach RL shunts to some interior nodes
        uniform (bool): every branch is a * (0.2 + s), i.e. uniform line characteristics
    """
    nodes = tuple(str(k) for k in range(1, n_nodes + 1))

    edges = set()
    order = rng.permutation(n_nodes)
    for k in range(1, n_nodes):
        a, b = int(order[k]), int(order[rng.integers(k)])
        edges.add((min(a, b), max(a, b)))
    for _ in range(int(rng.integers(0, n_nodes))):
        a, b = (int(x) for x in rng.choice(n_nodes, 2, replace=False))
        edges.add((min(a, b), max(a, b)))

    branches = []
    for a, b in sorted(edges):
        if uniform:
            scale = rng.uniform(0.5, 2.)
            r, l = 0.2 * scale, scale
        else:
            r, l = rng.uniform(0.1, 2.), rng.uniform(0.1, 2.)
        branches.append(BranchSpec(nodes[a], nodes[b], r=r, l=l))

    shunt_specs = ()
    if shunts:
        interior = nodes[n_boundary:]
        count = int(rng.integers(1, len(interior) + 1))
        picks = sorted(int(i) for i in rng.choice(len(interior), count, replace=False))
        shunt_specs = tuple(ShuntSpec(interior[i], r=rng.uniform(0.5, 2.), l=rng.uniform(0.1, 1.))
                            for i in picks)

    net = Netlist(nodes=nodes, boundary=nodes[:n_boundary], branches=tuple(branches), shunts=shunt_specs)
    validate_netlist(net)
    return net


@pytest.fixture
def networks_dir():
    return NETWORKS_DIR


@pytest.fixture
def case_a_set1():
    return load_netlist(NETWORKS_DIR / 'case_a_set1.json')


@pytest.fixture
def case_a_set2():
    return load_netlist(NETWORKS_DIR / 'case_a_set2.json')


@pytest.fixture
def star_resistive():
    return load_netlist(NETWORKS_DIR / 'star_resistive.json')


@pytest.fixture
def star_with_load():
    return load_netlist(NETWORKS_DIR / 'star_with_load.json')


@pytest.fixture
def chua():
    return chua_preset()


@pytest.fixture
def chua_printed():
    return chua_preset(impedance='printed')
