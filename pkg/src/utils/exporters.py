"""
Output writers: Graphviz DOT, JSON, CSV and atomic file emission.

Everything here returns text; only `emit`/`atomic_write` touch the
filesystem or stdout, so command output stays byte-stable.
"""

import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Iterable, List, Mapping, Optional

import pandas as pd

from .logging_config import get_logger


logger = get_logger('exporters')


class DotFormatter:
    """Per-vertex / per-edge attribute hook for `digraph`."""

    def vertex_attributes(self, node: str) -> Optional[List[str]]:
        return None

    def edge_attributes(self, source: str, target: str) -> Optional[List[str]]:
        return None


class HasseFormatter(DotFormatter):
    """Labels every vertex with its permutation text and optionally annotates edges."""

    def __init__(self, edge_labels: Optional[Mapping] = None):
        self.edge_labels = dict(edge_labels or {})

    def vertex_attributes(self, node: str) -> Optional[List[str]]:
        return [f'label="{node}"']

    def edge_attributes(self, source: str, target: str) -> Optional[List[str]]:
        label = self.edge_labels.get((source, target))
        if label is None:
            return None
        return [f'label="{label}"']


def _quote(node: str) -> str:
    return '"' + node.replace('"', '\\"') + '"'


def digraph(graph: Mapping[str, Iterable[str]], formatter: Optional[DotFormatter] = None,
            name: str = 'G') -> str:
    """
    Render an adjacency mapping as a DOT digraph.

    Args:
        graph: node -> successors, iterated in the given order
        formatter: attribute hook
        name: graph name

    Returns:
        DOT source ending in a newline
    """
    formatter = formatter or DotFormatter()
    result = [f'digraph {name} {{', '    rankdir=TB;']

    for source, targets in graph.items():
        line = f'    {_quote(source)}'
        attrs = formatter.vertex_attributes(source)
        if attrs:
            line += ' [%s]' % ','.join(attrs)
        result.append(line + ';')

        for target in targets:
            line = f'        {_quote(source)} -> {_quote(target)}'
            attrs = formatter.edge_attributes(source, target)
            if attrs:
                line += ' [%s]' % ','.join(attrs)
            result.append(line + ';')

    result.append('}')
    return '\n'.join(result) + '\n'


def dumps_json(payload, one_line: bool = False) -> str:
    """Deterministic JSON text (insertion order, fixed separators, trailing newline)."""
    if one_line:
        return json.dumps(payload, separators=(',', ':')) + '\n'
    return json.dumps(payload, indent=2) + '\n'


def frame_to_csv(frame: pd.DataFrame, index: bool = True) -> str:
    return frame.to_csv(index=index, lineterminator='\n')


def atomic_write(path: str, text: str) -> Path:
    """
    Write text to path via a temporary file in the same directory.

    The target is only replaced once the whole payload is on disk; on
    failure the temporary file is removed and the target is untouched.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f'.{target.name}.', dir=str(target.parent))
    try:
        with os.fdopen(fd, 'w', newline='') as f:
            f.write(text)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    logger.info(f"Wrote {len(text)} bytes to {target}")
    return target


def emit(text: str, output: Optional[str] = None) -> None:
    """Send command output to a file (atomically) or to stdout."""
    if output:
        atomic_write(output, text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
