#include <optional>
#include <vector>

#include "doctest.h"
#include "support/builders.hpp"
#include "walkforge/algorithms.hpp"
#include "walkforge/interleave.hpp"
#include "walkforge/synthetic.hpp"

using namespace walkforge;

namespace {

Graph matrix_graph() {
    static Graph g = make_power_law_graph({.vertex_count = 160,
                                           .edge_count = 1400,
                                           .seed = 11,
                                           .weighted = true,
                                           .label_count = 4});
    return g;
}

template <typename P>
void check_equivalence(const Graph& g, const P& prog, SamplerKind kind,
                       bool use_tables = true) {
    ExecOptions opts;
    opts.sampler = kind;
    opts.seed = 99;
    opts.use_static_tables = use_tables;
    QuerySpec spec = QuerySpec::one_per_vertex();
    RunResult base = run_sequential(g, spec, prog, opts);
    for (uint32_t k : {1u, 3u, 8u, 64u}) {
        for (uint32_t k_prime : {1u, std::max(1u, k / 2), k}) {
            CAPTURE(to_string(kind));
            CAPTURE(k);
            CAPTURE(k_prime);
            RunResult inter = run_interleaved(g, spec, prog, k, k_prime, opts);
            CHECK(inter.walks == base.walks);
            CHECK(inter.metrics.total_steps == base.metrics.total_steps);
            CHECK(inter.metrics.max_in_flight <= k);
        }
    }
}

}  // namespace

TEST_SUITE("interleave") {
    TEST_CASE("interleaved execution replays the sequential run exactly") {
        Graph g = matrix_graph();

        SUBCASE("unbiased walks") {
            PprProgram ppr(0.25);
            for (SamplerKind kind : {SamplerKind::Naive, SamplerKind::Its, SamplerKind::Alias,
                                     SamplerKind::Rej, SamplerKind::ORej}) {
                check_equivalence(g, ppr, kind);
            }
        }

        SUBCASE("statically weighted walks through tables") {
            DeepWalkProgram dw(g, 14, true);
            for (SamplerKind kind :
                 {SamplerKind::Its, SamplerKind::Alias, SamplerKind::Rej, SamplerKind::ORej}) {
                check_equivalence(g, dw, kind);
            }
        }

        SUBCASE("statically weighted walks gathered per step") {
            DeepWalkProgram dw(g, 14, true);
            for (SamplerKind kind : {SamplerKind::Its, SamplerKind::Alias, SamplerKind::Rej}) {
                check_equivalence(g, dw, kind, /*use_tables=*/false);
            }
        }

        SUBCASE("dynamically weighted walks") {
            Node2VecProgram n2v(g, {.a = 2.0, .b = 0.5, .target_length = 12}, true);
            for (SamplerKind kind :
                 {SamplerKind::Its, SamplerKind::Alias, SamplerKind::Rej, SamplerKind::ORej}) {
                check_equivalence(g, n2v, kind);
            }
        }

        SUBCASE("label-constrained walks") {
            MetaPathProgram mp(g, {0, 1, 2, 1});
            for (SamplerKind kind :
                 {SamplerKind::Its, SamplerKind::Alias, SamplerKind::Rej}) {
                check_equivalence(g, mp, kind);
            }
        }
    }

    TEST_CASE("multi-threaded interleaving matches as well") {
        Graph g = matrix_graph();
        DeepWalkProgram dw(g, 14, true);
        ExecOptions opts;
        opts.seed = 5;
        RunResult base = run_sequential(g, QuerySpec::one_per_vertex(), dw, opts);
        ExecOptions threaded = opts;
        threaded.threads = 4;
        RunResult inter =
            run_interleaved(g, QuerySpec::one_per_vertex(), dw, 16, 8, threaded);
        CHECK(inter.walks == base.walks);
    }

    TEST_CASE("ring sizes are validated") {
        Graph g = testsupport::triangle();
        PprProgram ppr(0.5);
        QuerySpec spec = QuerySpec::one_per_vertex();
        CHECK_THROWS_AS(run_interleaved(g, spec, ppr, 0, 1), ConfigError);
        CHECK_THROWS_AS(run_interleaved(g, spec, ppr, 4, 0), ConfigError);
        CHECK_THROWS_AS(run_interleaved(g, spec, ppr, 4, 8), ConfigError);
        CHECK_NOTHROW(run_interleaved(g, spec, ppr, 4, 4));
    }

    TEST_CASE("rings larger than the query set stay correct") {
        Graph g = testsupport::triangle();
        DeepWalkProgram dw(g, 6, false);
        RunResult base = run_sequential(g, QuerySpec::one_per_vertex(), dw);
        RunResult inter = run_interleaved(g, QuerySpec::one_per_vertex(), dw, 256, 128);
        CHECK(inter.walks == base.walks);
        CHECK(inter.metrics.max_in_flight <= 3);
    }

    TEST_CASE("prefetch level does not change results") {
        Graph g = matrix_graph();
        DeepWalkProgram dw(g, 10, true);
        std::optional<RunResult> previous;
        for (PrefetchLevel level : {PrefetchLevel::L1, PrefetchLevel::L3, PrefetchLevel::Off}) {
            ExecOptions opts;
            opts.seed = 44;
            opts.prefetch = level;
            RunResult res = run_interleaved(g, QuerySpec::one_per_vertex(), dw, 32, 16, opts);
            if (previous) {
                CHECK(res.walks == previous->walks);
            }
            previous = std::move(res);
        }
    }

    TEST_CASE("walks of target length one bypass the rings") {
        Graph g = testsupport::triangle();
        DeepWalkProgram dw(g, 1, false);
        RunResult res = run_interleaved(g, QuerySpec::one_per_vertex(), dw, 8, 4);
        REQUIRE(res.walks.size() == 3);
        for (const WalkRecord& record : res.walks) {
            CHECK(record.status == WalkStatus::Complete);
            CHECK(record.path.size() == 1);
        }
        CHECK(res.metrics.total_steps == 0);
        CHECK(res.metrics.max_in_flight == 0);
    }

    TEST_CASE("rejection trial caps propagate") {
        // The walker circles vertex 0, where one edge sits far below the
        // vertex envelope: half of all trials reject, so a cap of 2 trips
        // within a few steps.
        Graph g = build_graph(2, {{0, 0}, {0, 1}, {1, 1}}, {1.0, 1e-6, 1.0});
        DeepWalkProgram dw(g, 50, true);
        ExecOptions opts;
        opts.sampler = SamplerKind::Rej;
        opts.rej_trial_cap = 2;
        bool threw_somewhere = false;
        for (uint64_t seed = 0; seed < 8 && !threw_somewhere; ++seed) {
            opts.seed = seed;
            try {
                run_interleaved(g, QuerySpec::one_per_vertex(), dw, 4, 2, opts);
            } catch (const RejectionCapError&) {
                threw_somewhere = true;
            }
        }
        CHECK(threw_somewhere);
    }

    TEST_CASE("sink mode emits ordered blocks identical to the walk set") {
        Graph g = matrix_graph();
        PprProgram ppr(0.3);
        ExecOptions plain;
        plain.seed = 12;
        RunResult expected = run_interleaved(g, QuerySpec::one_per_vertex(), ppr, 16, 8, plain);

        WalkSet streamed;
        ExecOptions opts = plain;
        opts.sink = [&](uint32_t, WalkSet&& block) {
            for (WalkRecord& record : block) {
                streamed.push_back(std::move(record));
            }
        };
        RunResult res = run_interleaved(g, QuerySpec::one_per_vertex(), ppr, 16, 8, opts);
        CHECK(res.walks.empty());
        CHECK(streamed == expected.walks);
    }
}
