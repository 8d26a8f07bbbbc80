from .models import Graph, SpanningTree, TreeCover  # noqa: F401
from .services import (  # noqa: F401
    build_graph,
    clique_number_complement,
    enumerate_spanning_trees,
    laplacian,
    main_component,
    min_tree_cover,
    normalized_adjacency,
)
from .generators import sbm_generate  # noqa: F401
