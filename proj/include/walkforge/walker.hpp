#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "walkforge/graph.hpp"
#include "walkforge/rng.hpp"

namespace walkforge {

enum class WalkStatus : uint8_t { Complete, DeadEnd };

inline const char* to_string(WalkStatus status) {
    return status == WalkStatus::Complete ? "complete" : "dead_end";
}

// One in-flight walk.  The path doubles as the walker payload: path.front() is
// the source, path.back() the current vertex, and programs read whatever
// history they need from it (node2vec looks one step back, metapath counts
// edges traversed).  Each walker draws from its own stream seeded by
// (global seed, query id), which is what makes results independent of thread
// count and execution mode.
struct Walker {
    uint64_t id = 0;
    std::vector<VertexId> path;
    RngStream rng;

    VertexId cur() const { return path.back(); }
    VertexId prev() const { return path[path.size() - 2]; }  // valid after one move
    uint64_t moves() const { return path.size() - 1; }
};

// Lazy view of one edge; programs touch only the fields they pay for, which
// keeps the engine's memory schedule honest (the accept test of rejection
// sampling must not drag the destination in early).
struct EdgeRef {
    const Graph* graph;
    VertexId src;
    uint64_t index;

    VertexId dst() const { return graph->neighbor(index); }
    double weight() const { return graph->weights_data()[index]; }
    uint32_t label() const { return graph->labels_data()[index]; }
};

struct WalkRecord {
    uint64_t query_id = 0;
    WalkStatus status = WalkStatus::Complete;
    std::vector<VertexId> path;

    bool operator==(const WalkRecord&) const = default;
};

using WalkSet = std::vector<WalkRecord>;

// Where walks start.  `one_per_vertex` issues query i from vertex i;
// `from_source` issues n queries from one vertex; `from_file` reads
// `vertex [count]` lines (count defaults to 1, `#` comments allowed).
// Query ids are assigned 0..n-1 in enumeration order.
struct QuerySpec {
    enum class Mode : uint8_t { OnePerVertex, FromSource, FromFile };

    static QuerySpec one_per_vertex();
    static QuerySpec from_source(VertexId source, uint64_t count);
    static QuerySpec from_file(const std::string& path);

    uint64_t total(const Graph& g) const;
    void validate(const Graph& g) const;  // every source must exist in g

    VertexId source_at(uint64_t query_id, const Graph&) const {
        switch (mode) {
            case Mode::OnePerVertex: return static_cast<VertexId>(query_id);
            case Mode::FromSource: return source;
            case Mode::FromFile: return sources[query_id];
        }
        return 0;
    }

    Mode mode = Mode::OnePerVertex;
    VertexId source = 0;
    uint64_t count = 0;
    std::vector<VertexId> sources;  // FromFile, expanded per query
};

}  // namespace walkforge
