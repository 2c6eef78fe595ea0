"""Two-party common-neighbour link prediction over private graphs."""

from .cn_protocol import CnBreakdown, QuerySpec, brute_force_cn, prepare_inputs, run_querier, run_responder
from .graph import BaConfig, Graph, ba_generate, load_edge_list, union_graph
from .group import SECURE, TOY, GroupParams, get_params, hash_to_group, tag_hash
from .service import ResponderServer, query, serve_session

__version__ = "0.1.0"
