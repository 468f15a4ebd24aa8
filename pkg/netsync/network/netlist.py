"""Netlist data model and its JSON form."""
import json
import logging
import numbers
from dataclasses import dataclass, field

import networkx as nx

from netsync.errors import SchemaError, ValidationError
from netsync.network.components import (
    OSCILLATOR_IMPEDANCES, OSCILLATOR_PRESETS, BranchSpec, OscillatorConfig, ShuntSpec
)

logger = logging.getLogger(__name__)

NETLIST_KEYS = ('nodes', 'boundary', 'branches', 'shunts', 'oscillator')
ELEMENT_KEYS = ('r', 'l', 'c')
OSCILLATOR_PARAM_KEYS = ('r', 'l', 'c_a', 'c_b', 'slopes', 'breakpoints')

STAR_CENTER = 'center'


@dataclass(frozen=True)
class Netlist:
    """Validated network description.

    `nodes` is ordered boundary-first, so the first `n_boundary` dense
    indices are the nodes hosting oscillators.
    """
    nodes: tuple
    boundary: tuple
    branches: tuple
    shunts: tuple = ()
    oscillator: OscillatorConfig = field(default_factory=OscillatorConfig)

    @property
    def dim(self):
        return len(self.nodes)

    @property
    def n_boundary(self):
        return len(self.boundary)

    @property
    def interior(self):
        return self.nodes[self.n_boundary:]

    @property
    def index(self):
        return {node: i for i, node in enumerate(self.nodes)}

    @property
    def has_shunts(self):
        return len(self.shunts) > 0

    def graph(self):
        """Undirected graph of nodes and branches (shunts omitted)."""
        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from((br.from_node, br.to_node) for br in self.branches)
        return g


def validate_netlist(net):
    """Checks the modeling assumptions of a netlist.

    Args:
        net (Netlist): netlist to check

    Raises:
        ValidationError: when an assumption is violated
    """
    if net.n_boundary == 0:
        raise ValidationError('boundary node set is empty')
    if len(set(net.nodes)) != net.dim:
        raise ValidationError('node ids are not unique')
    if len(set(net.boundary)) != net.n_boundary:
        raise ValidationError('boundary node ids are not unique')
    if net.nodes[:net.n_boundary] != net.boundary:
        raise ValidationError('nodes must list boundary nodes first')

    known = set(net.nodes)
    seen = set()
    for br in net.branches:
        for node in (br.from_node, br.to_node):
            if node not in known:
                raise ValidationError(f'branch {br.from_node}-{br.to_node} references unknown node {node!r}')
        if br.pair in seen:
            raise ValidationError(
                f'duplicate branch between {br.from_node} and {br.to_node}; combine parallel branches first'
            )
        seen.add(br.pair)

    shunted = set()
    for sh in net.shunts:
        if sh.node not in known:
            raise ValidationError(f'shunt references unknown node {sh.node!r}')
        if sh.node in net.boundary:
            raise ValidationError(f'shunt attached to boundary node {sh.node!r}')
        if sh.node in shunted:
            raise ValidationError(f'more than one shunt at node {sh.node!r}; combine them first')
        shunted.add(sh.node)

    if not nx.is_connected(net.graph()):
        raise ValidationError('network graph is not connected')


def _expect(condition, message):
    if not condition:
        raise SchemaError(message)


def _is_number(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _node_id(value, where):
    _expect(isinstance(value, str), f'{where}: node ids must be strings, got {value!r}')
    return value


def _elements(entry, where):
    _expect(set(entry) - {'from', 'to', 'node'} <= set(ELEMENT_KEYS),
            f'{where}: unknown keys {sorted(set(entry) - {"from", "to", "node"} - set(ELEMENT_KEYS))}')

    values = {}
    for key in ('r', 'l'):
        value = entry.get(key, 0.)
        _expect(_is_number(value) and value >= 0, f'{where}: "{key}" must be a number >= 0')
        values[key] = float(value)

    c = entry.get('c')
    if c is not None:
        _expect(_is_number(c) and c > 0, f'{where}: "c" must be a number > 0')
        c = float(c)
    values['c'] = c
    return values


def _oscillator(doc):
    if doc is None:
        return OscillatorConfig()
    _expect(isinstance(doc, dict), '"oscillator" must be an object')
    preset = doc.get('preset', 'chua')
    _expect(preset in OSCILLATOR_PRESETS, f'unknown oscillator preset {preset!r}')
    impedance = doc.get('impedance', 'circuit')
    _expect(impedance in OSCILLATOR_IMPEDANCES,
            f'"oscillator.impedance" must be one of {list(OSCILLATOR_IMPEDANCES)}, got {impedance!r}')

    params = doc.get('params', {})
    _expect(isinstance(params, dict), '"oscillator.params" must be an object')
    unknown = set(params) - set(OSCILLATOR_PARAM_KEYS)
    _expect(not unknown, f'unknown oscillator params {sorted(unknown)}')

    for key, size in (('slopes', 3), ('breakpoints', 2)):
        if key in params:
            value = params[key]
            _expect(isinstance(value, list) and len(value) == size and all(map(_is_number, value)),
                    f'"oscillator.params.{key}" must be a list of {size} numbers')
    for key in ('r', 'l', 'c_a', 'c_b'):
        if key in params:
            _expect(_is_number(params[key]), f'"oscillator.params.{key}" must be a number')

    if preset == 'custom':
        missing = set(OSCILLATOR_PARAM_KEYS) - set(params)
        _expect(not missing, f'custom oscillator is missing params {sorted(missing)}')

    return OscillatorConfig(preset=preset, params=params, impedance=impedance)


def netlist_from_dict(doc):
    """Builds a validated Netlist from a decoded JSON document.

    Args:
        doc (dict): decoded netlist document

    Returns:
        Netlist: netlist with boundary nodes first
    """
    _expect(isinstance(doc, dict), 'netlist document must be a JSON object')
    unknown = set(doc) - set(NETLIST_KEYS)
    _expect(not unknown, f'unknown top-level keys {sorted(unknown)}')
    for key in ('nodes', 'boundary', 'branches'):
        _expect(key in doc, f'missing required key "{key}"')
    for key in ('nodes', 'boundary', 'branches', 'shunts'):
        _expect(isinstance(doc.get(key, []), list), f'"{key}" must be a list')

    nodes = [_node_id(n, 'nodes') for n in doc['nodes']]
    boundary = [_node_id(n, 'boundary') for n in doc['boundary']]
    missing = [n for n in boundary if n not in nodes]
    if missing:
        raise ValidationError(f'boundary nodes {missing} are not listed in "nodes"')

    ordered = tuple(boundary) + tuple(n for n in nodes if n not in set(boundary))

    branches = []
    for k, entry in enumerate(doc['branches']):
        where = f'branches[{k}]'
        _expect(isinstance(entry, dict) and 'from' in entry and 'to' in entry,
                f'{where}: must be an object with "from" and "to"')
        branches.append(BranchSpec(
            _node_id(entry['from'], where), _node_id(entry['to'], where), **_elements(entry, where)
        ))

    shunts = []
    for k, entry in enumerate(doc.get('shunts', [])):
        where = f'shunts[{k}]'
        _expect(isinstance(entry, dict) and 'node' in entry, f'{where}: must be an object with "node"')
        shunts.append(ShuntSpec(_node_id(entry['node'], where), **_elements(entry, where)))

    net = Netlist(
        nodes=ordered,
        boundary=tuple(boundary),
        branches=tuple(branches),
        shunts=tuple(shunts),
        oscillator=_oscillator(doc.get('oscillator'))
    )
    validate_netlist(net)
    return net


def parse_netlist(text):
    """Parses and validates a netlist JSON document.

    Args:
        text (str): JSON text

    Returns:
        Netlist: validated netlist
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f'invalid JSON: {e}') from e

    net = netlist_from_dict(doc)
    logger.debug('parsed netlist: %d nodes (%d boundary), %d branches, %d shunts',
                 net.dim, net.n_boundary, len(net.branches), len(net.shunts))
    return net


def load_netlist(path):
    with open(path, 'r') as f:
        return parse_netlist(f.read())


def netlist_to_dict(net):
    return {
        'nodes': list(net.nodes),
        'boundary': list(net.boundary),
        'branches': [br.to_dict() for br in net.branches],
        'shunts': [sh.to_dict() for sh in net.shunts],
        'oscillator': net.oscillator.to_dict()
    }


def serialize_netlist(net):
    """Canonical JSON text of a netlist (boundary-first node order, sorted keys)."""
    return json.dumps(netlist_to_dict(net), indent=2, sort_keys=True)


def build_star_netlist(n, r_net=0.1, l_net=0.1, r_load=1., l_load=0., oscillator=None):
    """Builds an n-node star whose center is loaded by a shunt to ground.

    Args:
        n (int): number of boundary nodes
        r_net (float): branch resistance, ohms
        l_net (float): branch inductance, henries
        r_load (float): load resistance, ohms; None for an unloaded star
        l_load (float): load inductance, henries
        oscillator (OscillatorConfig): oscillator reference, Chua preset by default

    Returns:
        Netlist: validated star netlist
    """
    assert n >= 2, 'a star needs at least two boundary nodes'

    boundary = tuple(str(k) for k in range(1, n + 1))
    branches = tuple(BranchSpec(node, STAR_CENTER, r=r_net, l=l_net) for node in boundary)
    shunts = () if r_load is None else (ShuntSpec(STAR_CENTER, r=r_load, l=l_load),)

    net = Netlist(
        nodes=boundary + (STAR_CENTER,),
        boundary=boundary,
        branches=branches,
        shunts=shunts,
        oscillator=oscillator or OscillatorConfig()
    )
    validate_netlist(net)
    return net
