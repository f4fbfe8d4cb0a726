"""Plain-text edge-list format.

Example::

    # two honest nodes and one Byzantine node
    n: 3
    byzantine: 2
    0 1
    1 2

Header lines are ``key: value`` with keys ``n``, ``byzantine`` and ``blocks``;
``#`` starts a comment. ``n`` defaults to one past the largest id mentioned.
"""

from pathlib import Path

from loguru import logger

from ..errors import ConfigError
from .topology import Topology


class EdgeListError(ConfigError):
    """Malformed edge-list input. The message names the source and line number."""


def _int_list(value: str, where: str) -> list[int]:
    items = [item.strip() for item in value.split(",") if item.strip()]
    try:
        return [int(item) for item in items]
    except ValueError:
        raise EdgeListError(f"{where}: expected comma-separated integers, got '{value}'")


def parse_edgelist(text: str, source: str = "<string>") -> Topology:
    """Parse edge-list text into a Topology.

    Raises:
        EdgeListError: On a malformed line, self-loop, duplicate edge or bad header
    """
    n_header: int | None = None
    byzantine: list[int] = []
    blocks: list[int] | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        where = f"{source}:{lineno}"
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        if ":" in line:
            key, value = (part.strip() for part in line.split(":", 1))
            if key == "n":
                try:
                    n_header = int(value)
                except ValueError:
                    raise EdgeListError(f"{where}: node count must be an integer")
            elif key == "byzantine":
                byzantine = _int_list(value, where)
            elif key == "blocks":
                blocks = _int_list(value, where)
            else:
                raise EdgeListError(f"{where}: unknown header '{key}'")
            continue

        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"{where}: expected 'u v', got '{raw.strip()}'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"{where}: node ids must be integers, got '{raw.strip()}'")
        if u < 0 or v < 0:
            raise EdgeListError(f"{where}: node ids must be non-negative")
        if u == v:
            raise EdgeListError(f"{where}: self-loop on node {u}")
        edge = (min(u, v), max(u, v))
        if edge in seen:
            raise EdgeListError(f"{where}: duplicate edge {edge}")
        seen.add(edge)
        edges.append(edge)

    largest = max([max(e) for e in edges] + byzantine, default=-1)
    n = n_header if n_header is not None else largest + 1
    if largest >= n:
        raise EdgeListError(f"{source}: node id {largest} outside declared n = {n}")

    try:
        topology = Topology(
            n=n,
            edges=edges,
            byzantine=frozenset(byzantine),
            blocks=tuple(blocks) if blocks is not None else None,
        )
    except ValueError as e:
        raise EdgeListError(f"{source}: {e}")

    logger.debug(f"Parsed {source}: n={topology.n}, m={topology.n_edges}, |B|={len(byzantine)}")
    return topology


def read_edgelist(path: Path) -> Topology:
    """Read a topology from an edge-list file."""
    path = Path(path)
    if not path.exists():
        raise EdgeListError(f"Graph file not found: {path}")
    return parse_edgelist(path.read_text(encoding="utf-8"), source=str(path))


def format_edgelist(t: Topology) -> str:
    """Render a topology in the edge-list format, edges sorted."""
    lines = [f"n: {t.n}"]
    if t.byzantine:
        lines.append("byzantine: " + ",".join(str(i) for i in sorted(t.byzantine)))
    if t.blocks is not None:
        lines.append("blocks: " + ",".join(str(label) for label in t.blocks))
    lines.extend(f"{u} {v}" for u, v in sorted(t.edges))
    return "\n".join(lines) + "\n"


def write_edgelist(t: Topology, path: Path) -> Path:
    """Write a topology to an edge-list file, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_edgelist(t), encoding="utf-8")
    logger.info(f"Wrote {t.n_edges} edges to {path}")
    return path
