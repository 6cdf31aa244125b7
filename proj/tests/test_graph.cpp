#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "support/builders.hpp"
#include "support/tempdir.hpp"
#include "walkforge/graph.hpp"
#include "walkforge/synthetic.hpp"

using namespace walkforge;
using testsupport::TempDir;
using testsupport::read_file;
using testsupport::write_file;

TEST_SUITE("graph") {
    TEST_CASE("csr assembly sorts adjacency and keeps attributes aligned") {
        // Insert out of order with per-edge weights; weights must follow their
        // edges through the sort.
        Graph g = build_graph(3, {{1, 2}, {0, 2}, {0, 1}, {2, 0}},
                              {12.0, 2.0, 1.0, 20.0});
        CHECK(g.vertex_count() == 3);
        CHECK(g.edge_count() == 4);
        CHECK(g.degree(0) == 2);
        CHECK(g.neighbors(0)[0] == 1);
        CHECK(g.neighbors(0)[1] == 2);
        CHECK(g.weight(g.edge_begin(0)) == doctest::Approx(1.0));
        CHECK(g.weight(g.edge_begin(0) + 1) == doctest::Approx(2.0));
        CHECK(g.weight(g.edge_begin(1)) == doctest::Approx(12.0));
        CHECK(g.weight(g.edge_begin(2)) == doctest::Approx(20.0));
        CHECK(g.adjacency_sorted());
    }

    TEST_CASE("edge existence via binary search") {
        Graph g = testsupport::star(5);
        CHECK(g.has_edge(0, 3));
        CHECK(g.has_edge(3, 0));
        CHECK_FALSE(g.has_edge(1, 2));
        CHECK_FALSE(g.has_edge(2, 2));
    }

    TEST_CASE("degree-zero vertices are just dead ends, not errors") {
        Graph g = testsupport::line(4);
        CHECK(g.degree(3) == 0);
        CHECK(g.neighbors(3).empty());
    }

    TEST_CASE("from_csr validates structure") {
        CHECK_THROWS_AS(Graph::from_csr({0}, {}), ConfigError);               // zero vertices
        CHECK_THROWS_AS(Graph::from_csr({0, 2}, {0}), ConfigError);           // framing
        CHECK_THROWS_AS(Graph::from_csr({0, 2, 1}, {0, 0}), ConfigError);     // non-monotone
        CHECK_THROWS_AS(Graph::from_csr({0, 1}, {5}), ConfigError);           // id range
        CHECK_THROWS_AS(Graph::from_csr({0, 1}, {0}, {-1.0}), ConfigError);   // negative weight
        CHECK_THROWS_AS(Graph::from_csr({0, 1}, {0}, {1.0, 2.0}), ConfigError);  // length
        CHECK_THROWS_AS(Graph::from_csr({0, 1}, {0}, {}, {1, 2}), ConfigError);  // labels length
    }

    TEST_CASE("binary files round-trip bit-exactly") {
        TempDir dir;
        Graph g = build_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 2}},
                              {1.0, 2.5, 3.25, 4.125, 0.5}, {0, 1, 2, 3, 4});
        std::string a = dir.file("a.wfg");
        std::string b = dir.file("b.wfg");
        g.write_binary(a);
        Graph loaded = Graph::read_binary(a);
        loaded.write_binary(b);
        CHECK(read_file(a) == read_file(b));
        CHECK(loaded.vertex_count() == 4);
        CHECK(loaded.edge_count() == 5);
        CHECK(loaded.weight(1) == doctest::Approx(g.weight(1)));
        CHECK(loaded.label(4) == g.label(4));
    }

    TEST_CASE("binary reader rejects corruption") {
        TempDir dir;
        Graph g = testsupport::triangle();
        std::string path = dir.file("g.wfg");
        g.write_binary(path);
        std::string bytes = read_file(path);

        std::string bad_magic = bytes;
        bad_magic[0] = 'X';
        write_file(dir.file("magic.wfg"), bad_magic);
        CHECK_THROWS_AS(Graph::read_binary(dir.file("magic.wfg")), FormatError);

        write_file(dir.file("trunc.wfg"), bytes.substr(0, bytes.size() - 3));
        CHECK_THROWS_AS(Graph::read_binary(dir.file("trunc.wfg")), FormatError);

        write_file(dir.file("trail.wfg"), bytes + "xx");
        CHECK_THROWS_AS(Graph::read_binary(dir.file("trail.wfg")), FormatError);

        CHECK_THROWS_AS(Graph::read_binary(dir.file("missing.wfg")), IoError);
    }

    TEST_CASE("edge list loader handles comments, blanks, and weights") {
        TempDir dir;
        std::string path = dir.file("edges.txt");
        write_file(path,
                   "# comment line\n"
                   "0 1 2.5\n"
                   "\n"
                   "1 2 0.5\n"
                   "2 0 1.5\n");
        EdgeListOptions options;
        options.weights = WeightMode::FromFile;
        LoadedGraph loaded = load_edge_list(path, options);
        CHECK(loaded.graph.vertex_count() == 3);
        CHECK(loaded.graph.edge_count() == 3);
        CHECK(loaded.graph.has_weights());
        CHECK(loaded.graph.weight(loaded.graph.edge_begin(0)) == doctest::Approx(2.5));
    }

    TEST_CASE("edge list loader reports the offending line") {
        TempDir dir;
        std::string path = dir.file("bad.txt");
        write_file(path, "0 1\nnonsense here\n");
        try {
            load_edge_list(path);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(":2") != std::string::npos);
        }

        write_file(path, "0 1 1.0 2 9\n");
        CHECK_THROWS_AS(load_edge_list(path), ParseError);

        write_file(path, "# only comments\n");
        CHECK_THROWS_AS(load_edge_list(path), ParseError);

        write_file(path, "0 1\n");
        EdgeListOptions needs_weights;
        needs_weights.weights = WeightMode::FromFile;
        CHECK_THROWS_AS(load_edge_list(path, needs_weights), ParseError);
    }

    TEST_CASE("sparse ids are remapped densely in ascending order") {
        TempDir dir;
        std::string path = dir.file("sparse.txt");
        write_file(path, "100 7\n7 42\n42 100\n");
        LoadedGraph loaded = load_edge_list(path);
        CHECK(loaded.graph.vertex_count() == 3);
        REQUIRE(loaded.original_ids.size() == 3);
        CHECK(loaded.original_ids[0] == 7);
        CHECK(loaded.original_ids[1] == 42);
        CHECK(loaded.original_ids[2] == 100);
        // 100->7 becomes 2->0
        CHECK(testsupport::scan_edge(loaded.graph, 2, 0));
    }

    TEST_CASE("undirected mode emits both directions") {
        TempDir dir;
        std::string path = dir.file("undirected.txt");
        write_file(path, "0 1\n1 2\n");
        EdgeListOptions options;
        options.directedness = Directedness::Undirected;
        LoadedGraph loaded = load_edge_list(path, options);
        CHECK(loaded.graph.edge_count() == 4);
        CHECK(testsupport::scan_edge(loaded.graph, 1, 0));
        CHECK(testsupport::scan_edge(loaded.graph, 2, 1));
    }

    TEST_CASE("random attributes are a pure function of the seed") {
        TempDir dir;
        std::string path = dir.file("edges.txt");
        write_file(path, "0 1\n1 2\n2 0\n");
        EdgeListOptions options;
        options.weights = WeightMode::Random;
        options.labels = LabelMode::Random;
        options.label_count = 3;
        options.seed = 99;

        LoadedGraph first = load_edge_list(path, options);
        LoadedGraph second = load_edge_list(path, options);
        std::string a = dir.file("a.wfg");
        std::string b = dir.file("b.wfg");
        first.graph.write_binary(a);
        second.graph.write_binary(b);
        CHECK(read_file(a) == read_file(b));

        for (uint64_t e = 0; e < first.graph.edge_count(); ++e) {
            double w = first.graph.weight(e);
            CHECK(w >= 1.0);
            CHECK(w < 5.0);
            CHECK(first.graph.label(e) < 3);
        }
    }

    TEST_CASE("attribute access on a bare graph is refused") {
        Graph g = testsupport::triangle();
        CHECK_FALSE(g.has_weights());
        CHECK_THROWS_AS(g.weight(0), ConfigError);
        CHECK_THROWS_AS(g.label(0), ConfigError);
    }

    TEST_CASE("power-law generator emits the requested shape") {
        PowerLawConfig config;
        config.vertex_count = 500;
        config.edge_count = 4000;
        config.seed = 5;
        config.weighted = true;
        config.label_count = 4;
        Graph g = make_power_law_graph(config);
        CHECK(g.vertex_count() == 500);
        CHECK(g.edge_count() == 4000);
        CHECK(g.has_weights());
        CHECK(g.has_labels());
        CHECK(g.max_degree() > g.avg_degree());

        Graph again = make_power_law_graph(config);
        CHECK(again.edge_count() == g.edge_count());
        CHECK(again.neighbors(0).size() == g.neighbors(0).size());
    }

    TEST_CASE("ring graph has no dead ends") {
        Graph g = make_ring_graph(64, 1, false, 0);
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            CHECK(g.degree(v) == 2);
        }
    }
}
