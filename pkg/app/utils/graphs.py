"""
Directed-graph helpers on top of networkx.

Graphs are built with nodes and edges inserted in sorted order, so
successor iteration is canonical and every search below is deterministic.
"""

from typing import Hashable, Iterable, Optional

import networkx as nx


def sorted_digraph(nodes: Iterable[Hashable], edges: Iterable[tuple[Hashable, Hashable]]) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(nodes))
    graph.add_edges_from(sorted(edges))
    return graph


def has_cycle_through(graph: nx.DiGraph, component: frozenset) -> bool:
    if len(component) > 1:
        return True
    node = next(iter(component))
    return graph.has_edge(node, node)


def nontrivial_components(graph: nx.DiGraph) -> list[frozenset]:
    """Strongly connected components that carry at least one cycle, ordered by least member."""
    components = [
        frozenset(c)
        for c in nx.strongly_connected_components(graph)
        if has_cycle_through(graph, frozenset(c))
    ]
    return sorted(components, key=min)


def cyclic_nodes(graph: nx.DiGraph) -> set:
    nodes: set = set()
    for component in nontrivial_components(graph):
        nodes |= component
    return nodes


def is_strongly_connected_with_edge(graph: nx.DiGraph) -> bool:
    if graph.number_of_nodes() == 0 or graph.number_of_edges() == 0:
        return False
    return nx.is_strongly_connected(graph)


def prune_to_essential(graph: nx.DiGraph) -> nx.DiGraph:
    """Drop vertices that lie on no bi-infinite path."""
    pruned = graph.copy()
    changed = True
    while changed:
        dead = [n for n in pruned.nodes if pruned.in_degree(n) == 0 or pruned.out_degree(n) == 0]
        changed = bool(dead)
        pruned.remove_nodes_from(dead)
    return pruned


def bfs_path(graph: nx.DiGraph, source: Hashable, target: Hashable, reverse: bool = False) -> Optional[list]:
    """
    Shortest path from source to target.

    With ``reverse`` the search follows edges backwards and the returned list
    runs from source back to target.
    """
    if source == target:
        return [source]
    view = graph.reverse(copy=False) if reverse else graph
    try:
        return nx.shortest_path(view, source, target)
    except (nx.NetworkXNoPath, nx.NodeNotFound):
        return None


def shortest_cycle(graph: nx.DiGraph, vertex: Hashable) -> Optional[list]:
    """Shortest closed walk [vertex, ..., vertex] with at least one edge."""
    if vertex not in graph:
        return None
    if graph.has_edge(vertex, vertex):
        return [vertex, vertex]
    returns = [bfs_path(graph, successor, vertex) for successor in sorted(graph.successors(vertex))]
    returns = [path for path in returns if path is not None]
    if not returns:
        return None
    return [vertex, *min(returns, key=len)]


def reachable_cycle_target(graph: nx.DiGraph, source: Hashable, reverse: bool = False) -> Optional[Hashable]:
    """Least vertex on a cycle reachable from source (backwards with ``reverse``)."""
    reach = nx.ancestors(graph, source) if reverse else nx.descendants(graph, source)
    reach = set(reach) | {source}
    candidates = reach & cyclic_nodes(graph)
    return min(candidates) if candidates else None


def canonical_preorder(graph: nx.DiGraph, source: Hashable) -> list:
    return list(nx.dfs_preorder_nodes(graph, source))
