"""
Result file writers.

Every artifact starts with the run configuration: ``# key=value`` lines for
CSV, a ``run_config`` object for JSON and ``// key=value`` lines for DOT.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Iterable, Sequence

import graphviz

from app.schemas.reports import RunConfig

logger = logging.getLogger(__name__)


def csv_text(config: RunConfig, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    for key, value in config.header_items():
        buffer.write(f"# {key}={value}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([str(cell) for cell in row])
    return buffer.getvalue()


def json_text(config: RunConfig, payload: dict[str, Any]) -> str:
    document = {"run_config": config.model_dump(mode="json")}
    document.update(payload)
    return json.dumps(document, indent=2, sort_keys=True, default=str) + "\n"


def dot_text(
    config: RunConfig,
    name: str,
    nodes: Iterable[str],
    edges: Iterable[tuple[str, str]],
    highlighted: Iterable[str] = (),
) -> str:
    graph = graphviz.Digraph(name=name, graph_attr={"rankdir": "LR"})
    marked = set(highlighted)
    for node in sorted(set(nodes)):
        if node in marked:
            graph.node(node, node, style="filled", fillcolor="lightgrey")
        else:
            graph.node(node, node)
    for source, target in sorted(set(edges)):
        graph.edge(source, target)
    header = "".join(f"// {key}={value}\n" for key, value in config.header_items())
    return header + graph.source


def write_artifact(output_dir: Path, filename: str, content: str) -> Path:
    output_dir.mkdir(parents=True, exist_ok=True)
    path = output_dir / filename
    path.write_text(content, encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path
