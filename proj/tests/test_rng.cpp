#include <array>
#include <set>
#include <vector>

#include "doctest.h"
#include "support/stats.hpp"
#include "walkforge/rng.hpp"

using walkforge::RngStream;

TEST_SUITE("rng") {
    TEST_CASE("identical (seed, stream) pairs replay identically") {
        RngStream a(42, 7);
        RngStream b(42, 7);
        for (int i = 0; i < 100; ++i) {
            CHECK(a.next_u64() == b.next_u64());
        }
    }

    TEST_CASE("distinct streams and seeds diverge") {
        RngStream base(42, 7);
        RngStream other_stream(42, 8);
        RngStream other_seed(43, 7);
        int same_stream = 0;
        int same_seed = 0;
        for (int i = 0; i < 64; ++i) {
            uint64_t r = base.next_u64();
            same_stream += r == other_stream.next_u64();
            same_seed += r == other_seed.next_u64();
        }
        CHECK(same_stream == 0);
        CHECK(same_seed == 0);
    }

    TEST_CASE("uniform_index stays in range and reaches every value") {
        RngStream rng(1, 0);
        CHECK(rng.uniform_index(1) == 0);

        std::set<uint64_t> seen;
        for (int i = 0; i < 1000; ++i) {
            uint64_t x = rng.uniform_index(7);
            CHECK(x < 7);
            seen.insert(x);
        }
        CHECK(seen.size() == 7);
    }

    TEST_CASE("uniform_index is flat") {
        RngStream rng(99, 3);
        constexpr int kBins = 10;
        std::vector<uint64_t> counts(kBins, 0);
        for (int i = 0; i < 100000; ++i) {
            counts[rng.uniform_index(kBins)] += 1;
        }
        std::vector<double> probs(kBins, 1.0 / kBins);
        CHECK(testsupport::l_infinity(counts, probs) < 0.01);
        CHECK(testsupport::chi_square_test(counts, probs) > 1e-6);
    }

    TEST_CASE("uniform_real stays strictly below its bound") {
        RngStream rng(5, 5);
        for (double bound : {1.0, 0.001, 123.5}) {
            for (int i = 0; i < 20000; ++i) {
                double x = rng.uniform_real(bound);
                CHECK(x >= 0.0);
                CHECK(x < bound);
            }
        }
    }

    TEST_CASE("draws counter ticks once per draw of any kind") {
        RngStream rng(0, 0);
        CHECK(rng.draws() == 0);
        rng.next_u64();
        rng.uniform_index(10);
        rng.uniform_real(1.0);
        CHECK(rng.draws() == 3);
    }
}
