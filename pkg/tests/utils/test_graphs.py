from app.utils.graphs import (
    bfs_path,
    canonical_preorder,
    cyclic_nodes,
    is_strongly_connected_with_edge,
    nontrivial_components,
    prune_to_essential,
    reachable_cycle_target,
    shortest_cycle,
    sorted_digraph,
)


def chain_with_loop():
    # 0 -> 1 -> 2 -> 1, 3 isolated
    return sorted_digraph([0, 1, 2, 3], [(0, 1), (1, 2), (2, 1)])


class TestGraphHelpers:
    """Test canonical graph traversals"""

    def test_components_need_a_cycle(self):
        assert nontrivial_components(chain_with_loop()) == [frozenset({1, 2})]

    def test_self_loop_is_a_cycle(self):
        graph = sorted_digraph([0], [(0, 0)])
        assert is_strongly_connected_with_edge(graph)
        assert shortest_cycle(graph, 0) == [0, 0]

    def test_single_vertex_without_edge(self):
        assert not is_strongly_connected_with_edge(sorted_digraph([0], []))

    def test_cyclic_nodes(self):
        assert cyclic_nodes(chain_with_loop()) == {1, 2}

    def test_prune_to_essential(self):
        assert sorted(prune_to_essential(chain_with_loop()).nodes) == [1, 2]

    def test_bfs_path(self):
        graph = chain_with_loop()
        assert bfs_path(graph, 0, 2) == [0, 1, 2]
        assert bfs_path(graph, 2, 0) is None
        assert bfs_path(graph, 2, 0, reverse=True) == [2, 1, 0]

    def test_shortest_cycle(self):
        assert shortest_cycle(chain_with_loop(), 1) == [1, 2, 1]
        assert shortest_cycle(chain_with_loop(), 0) is None

    def test_reachable_cycle_target(self):
        graph = chain_with_loop()
        assert reachable_cycle_target(graph, 0) == 1
        assert reachable_cycle_target(graph, 3) is None

    def test_canonical_preorder(self):
        assert canonical_preorder(chain_with_loop(), 0) == [0, 1, 2]

    def test_shortest_cycle_prefers_the_shorter_return(self):
        # 0 -> 1 -> 0 and 0 -> 2 -> 3 -> 0
        graph = sorted_digraph([0, 1, 2, 3], [(0, 1), (0, 2), (1, 0), (2, 3), (3, 0)])
        assert shortest_cycle(graph, 0) == [0, 1, 0]
        assert shortest_cycle(graph, 3) == [3, 0, 2, 3]

    def test_bfs_path_unknown_vertex(self):
        assert bfs_path(chain_with_loop(), 0, 9) is None
        assert shortest_cycle(chain_with_loop(), 9) is None

    def test_bfs_path_to_itself(self):
        assert bfs_path(chain_with_loop(), 3, 3) == [3]
