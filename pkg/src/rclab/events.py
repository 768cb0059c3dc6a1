"""Event wrappers: a predicate on configurations plus monotonicity metadata."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .lattice import Coord, Region, boundary_vertices
from .exact import Config, connected_in_config, connected_to_any


@dataclass(frozen=True)
class Event:
    predicate: Callable[[Config], bool]
    increasing: bool
    description: str

    def __call__(self, config: Config) -> bool:
        return self.predicate(config)


def always_event() -> Event:
    return Event(predicate=lambda config: True, increasing=True, description="full space")


def edge_open_event(e: int) -> Event:
    return Event(
        predicate=lambda config: config.bits[e] == 1,
        increasing=True,
        description=f"edge {e} open",
    )


def connection_event(region: Region, x: Coord, y: Coord) -> Event:
    x, y = tuple(x), tuple(y)
    region.index_of(x)
    region.index_of(y)
    return Event(
        predicate=lambda config: connected_in_config(region, config, x, y),
        increasing=True,
        description=f"{x} <-> {y}",
    )


def connection_to_set_event(region: Region, x: Coord, targets) -> Event:
    x = tuple(x)
    targets = tuple(tuple(t) for t in targets)
    if not targets:
        raise ValueError("the target set is empty")
    return Event(
        predicate=lambda config: connected_to_any(region, config, x, targets),
        increasing=True,
        description=f"{x} <-> set of {len(targets)} vertices",
    )


def boundary_connection_event(region: Region, origin: Coord | None = None) -> Event:
    """origin connected to the lattice boundary of the region."""
    if origin is None:
        origin = (0,) * region.dimension
    targets = boundary_vertices(region)
    event = connection_to_set_event(region, origin, targets)
    return Event(
        predicate=event.predicate,
        increasing=True,
        description=f"{tuple(origin)} <-> region boundary",
    )


def intersection_event(a: Event, b: Event) -> Event:
    return Event(
        predicate=lambda config: a(config) and b(config),
        increasing=a.increasing and b.increasing,
        description=f"({a.description}) and ({b.description})",
    )


def verify_increasing(region: Region, event: Event, max_edges: int = 12) -> bool:
    """Exhaustively confirm monotonicity by single-edge covers.

    An event is increasing iff membership survives opening any closed edge;
    checking all (configuration, closed edge) pairs is exact and costs
    |E| * 2^|E| predicate calls, so keep regions at or below ~12 edges.
    """
    n_edges = region.n_edges
    if n_edges > max_edges:
        raise ValueError(f"{n_edges} edges exceeds the verification cap of {max_edges}")
    for index in range(1 << n_edges):
        bits = tuple((index >> e) & 1 for e in range(n_edges))
        config = Config(bits)
        if not event(config):
            continue
        for e in range(n_edges):
            if bits[e] == 0 and not event(config.with_edge_open(e)):
                return False
    return True
