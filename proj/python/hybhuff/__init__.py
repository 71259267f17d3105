"""Hybrid Huffman + bitwise compression of hypergraph adjacency."""

from ._core import (
    Archive,
    DecodeError,
    FrequencyProfile,
    Hypergraph,
    HybhuffError,
    Side,
    bfs,
    compression_rate,
    decode,
    encode,
    encode_domain,
    estimate_cost,
    fit_size_curve,
    frequency_profile,
    from_hyperedges,
    generate_zipfian,
    huffman_domain_size,
    kcore,
    load,
    optimize,
    pagerank,
    parse_binary,
    parse_text,
    profile_of,
    search_evaluation_budget,
    select_side,
)

__all__ = [
    "Archive",
    "DecodeError",
    "FrequencyProfile",
    "Hypergraph",
    "HybhuffError",
    "Side",
    "bfs",
    "compression_rate",
    "decode",
    "encode",
    "encode_domain",
    "estimate_cost",
    "fit_size_curve",
    "frequency_profile",
    "from_hyperedges",
    "generate_zipfian",
    "huffman_domain_size",
    "kcore",
    "load",
    "optimize",
    "pagerank",
    "parse_binary",
    "parse_text",
    "profile_of",
    "search_evaluation_budget",
    "select_side",
]
