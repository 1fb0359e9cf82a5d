"""
Instance File Format
JSON document with one top-level field per line, so diagnostics can name a line
"""

import json
import math
from pathlib import Path
from typing import Any, Dict, List, Union

from graphs.weighted_graph import VertexSubset, WeightedGraph
from generation.model_params import ModelParams
from generation.planted_instance import PlantedInstance
from utils.errors import FormatVersionError, InstanceFormatError, ParameterError
from utils.logger import get_logger

FORMAT_VERSION = 1
FIELD_ORDER = ('format_version', 'params', 'seed', 'edges', 'planted_set',
               'adversary_log', 'cross_edge_log', 'outer_edge_log')

logger = get_logger('instance_io')


def dump_fields(fields: Dict[str, Any]) -> str:
    """Serialize a flat mapping with one key per line; floats keep their shortest exact repr"""
    lines = ['{']
    items = list(fields.items())
    for index, (key, value) in enumerate(items):
        comma = ',' if index < len(items) - 1 else ''
        lines.append(f'{json.dumps(key)}: {json.dumps(value, allow_nan=False)}{comma}')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def instance_to_fields(instance: PlantedInstance) -> Dict[str, Any]:
    return {
        'format_version': FORMAT_VERSION,
        'params': instance.params.to_dict(),
        'seed': int(instance.seed),
        'edges': [[u, v, w] for u, v, w in instance.graph.edges()],
        'planted_set': instance.planted.sorted(),
        'adversary_log': [[u, v] for u, v in instance.adversary_log],
        'cross_edge_log': [[u, v, w] for u, v, w in instance.cross_edge_log],
        'outer_edge_log': [[u, v, w] for u, v, w in instance.outer_edge_log],
    }


def save_instance(instance: PlantedInstance, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_fields(instance_to_fields(instance)))
    logger.debug(f"Saved instance n={instance.n} k={instance.k} to {path}")
    return path


def load_instance(path: Union[str, Path]) -> PlantedInstance:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InstanceFormatError(f"Cannot read {path}: {e}") from e
    return parse_instance(text)


def _field_lines(text: str) -> Dict[str, int]:
    located = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.lstrip()
        for name in FIELD_ORDER:
            if stripped.startswith(f'"{name}"') and name not in located:
                located[name] = number
    return located


def parse_instance(text: str) -> PlantedInstance:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"Malformed instance document: {e.msg}", line=e.lineno) from e
    if not isinstance(document, dict):
        raise InstanceFormatError("Instance document must be an object", line=1)

    lines = _field_lines(text)

    def fail(message: str, name: str) -> InstanceFormatError:
        return InstanceFormatError(message, line=lines.get(name), field=name)

    for name in FIELD_ORDER:
        if name not in document:
            raise InstanceFormatError(f"Missing field '{name}'", field=name)

    version = document['format_version']
    if version != FORMAT_VERSION:
        raise FormatVersionError(version, FORMAT_VERSION)

    try:
        params = ModelParams.from_dict(document['params']).validate()
    except (ParameterError, TypeError) as e:
        raise fail(f"Invalid params: {e}", 'params') from e
    n = params.n

    seed = document['seed']
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2 ** 64:
        raise fail(f"seed must be an unsigned 64-bit integer, got {seed!r}", 'seed')

    edges = _parse_triples(document['edges'], n, 'edges', fail)
    try:
        graph = WeightedGraph.from_edges(n, edges)
    except ParameterError as e:
        raise fail(str(e), 'edges') from e

    planted_raw = document['planted_set']
    if (not isinstance(planted_raw, list)
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in planted_raw)):
        raise fail("planted_set must be a list of vertex indices", 'planted_set')
    if planted_raw != sorted(set(planted_raw)):
        raise fail("planted_set must be sorted without duplicates", 'planted_set')
    if any(not 0 <= v < n for v in planted_raw):
        raise fail(f"planted_set is not a subset of [0, {n})", 'planted_set')
    if len(planted_raw) != params.k:
        raise fail(f"planted_set has {len(planted_raw)} vertices, params.k = {params.k}", 'planted_set')

    cross_log = _parse_triples(document['cross_edge_log'], n, 'cross_edge_log', fail)
    outer_log = _parse_triples(document['outer_edge_log'], n, 'outer_edge_log', fail)

    logged = {(u, v) for u, v, _ in cross_log + outer_log}
    adversary_log = []
    for entry in document['adversary_log']:
        if not (isinstance(entry, list) and len(entry) == 2 and all(isinstance(x, int) for x in entry)):
            raise fail(f"adversary_log entry {entry!r} is not a [u, v] pair", 'adversary_log')
        pair = (min(entry), max(entry))
        if pair not in logged:
            raise fail(f"adversary_log entry {pair} is not a logged cross or outer edge", 'adversary_log')
        adversary_log.append(pair)

    return PlantedInstance(
        graph=graph,
        planted=VertexSubset.of(planted_raw),
        params=params,
        seed=seed,
        adversary_log=tuple(adversary_log),
        cross_edge_log=tuple(cross_log),
        outer_edge_log=tuple(outer_log),
    )


def _parse_triples(raw: Any, n: int, name: str, fail) -> List[tuple]:
    if not isinstance(raw, list):
        raise fail(f"{name} must be a list", name)
    triples = []
    for entry in raw:
        if not (isinstance(entry, list) and len(entry) == 3):
            raise fail(f"{name} entry {entry!r} is not a [u, v, w] triple", name)
        u, v, w = entry
        if not (isinstance(u, int) and isinstance(v, int)) or isinstance(u, bool) or isinstance(v, bool):
            raise fail(f"{name} entry {entry!r} has non-integer endpoints", name)
        if not 0 <= u < v < n:
            raise fail(f"{name} entry {entry!r} needs 0 <= u < v < {n}", name)
        if not isinstance(w, (int, float)) or isinstance(w, bool) or not math.isfinite(w) or w <= 0:
            raise fail(f"{name} entry {entry!r} has invalid weight {w!r}", name)
        triples.append((u, v, float(w)))
    return triples
