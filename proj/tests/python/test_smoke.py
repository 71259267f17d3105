import pytest

import hybhuff

TOY = "AdjacencyHypergraph\n2\n2\n1\n2\n0\n1\n0\n0\n0\n0\n1\n"


def test_toy_roundtrip():
    h = hybhuff.parse_text(TOY)
    assert (h.num_vertices, h.num_hyperedges, h.num_incidences) == (2, 1, 2)
    assert h.to_text() == TOY
    for rho in (0.0, 0.5, 1.0):
        archive = hybhuff.encode(h, rho)
        assert archive.compressed_side == hybhuff.Side.HYPEREDGES
        back = hybhuff.decode(hybhuff.Archive.from_bytes(archive.to_bytes()))
        assert back.same_incidence(h)


def test_endpoint_payload():
    h = hybhuff.from_hyperedges(8, [[0, 1, 2, 3], [4, 5, 6, 7]])
    archive = hybhuff.encode(h, 0.0)
    assert archive.payload_bits == 8 * 3
    assert archive.tree_bits == 0


def test_zipfian_pipeline():
    h = hybhuff.generate_zipfian(2000, 300, 20000, skew=1.5, seed=3)
    profile = hybhuff.profile_of(h)
    report = hybhuff.optimize(profile)
    exhaustive = hybhuff.optimize(profile, exhaustive=True)
    assert report["best_bits"] <= 1.01 * exhaustive["best_bits"]
    assert report["evaluations"] <= hybhuff.search_evaluation_budget(profile.distinct)

    archive = hybhuff.encode_domain(h, report["best_m"])
    assert archive.huffman_domain_size == report["best_m"]
    assert hybhuff.decode(archive).same_incidence(h)
    assert len(archive.neighbor_lists()) == h.num_hyperedges
    assert 0 < hybhuff.compression_rate(4 * h.num_incidences, archive.byte_size) < 100


def test_workloads_match_across_backends():
    h = hybhuff.generate_zipfian(500, 80, 3000, skew=1.2, seed=5)
    archive = hybhuff.encode(h, 0.2)
    assert hybhuff.bfs(h, 0) == hybhuff.bfs(archive, 0)
    assert (hybhuff.kcore(h, 2) == hybhuff.kcore(archive, 2)).all()
    assert abs(hybhuff.pagerank(h) - hybhuff.pagerank(archive)).max() <= 1e-12
    assert hybhuff.pagerank(h).sum() == pytest.approx(1.0, abs=1e-9)


def test_errors_are_typed():
    with pytest.raises(hybhuff.HybhuffError):
        hybhuff.parse_text("AdjacencyHypergraph\n2\n2\n")
    data = bytearray(hybhuff.encode(hybhuff.parse_text(TOY), 1.0).to_bytes())
    with pytest.raises(hybhuff.DecodeError, match="bitwise stream|huffman stream"):
        hybhuff.Archive.from_bytes(bytes(data[:-1]) + b"\x00\x00")
    with pytest.raises(hybhuff.HybhuffError):
        hybhuff.bfs(hybhuff.parse_text(TOY), 5)


def test_fit_recovers_log_curve():
    import math

    fit = hybhuff.fit_size_curve([(x, 100 - 10 * math.log(x)) for x in range(1, 21)])
    assert fit["d"] == pytest.approx(-10, abs=1e-6)
