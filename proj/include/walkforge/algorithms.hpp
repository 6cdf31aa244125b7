#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "walkforge/error.hpp"
#include "walkforge/graph.hpp"
#include "walkforge/program.hpp"
#include "walkforge/walker.hpp"

namespace walkforge {

// Personalized PageRank walks: uniform transitions, and after every move a
// coin decides whether the walk stops.  Expected step count is
// 1 / termination (5.0 at the 0.2 default).
class PprProgram {
public:
    explicit PprProgram(double termination = 0.2) : stop_(termination) {
        if (!(termination > 0.0 && termination <= 1.0)) {
            throw ConfigError("termination probability must be in (0, 1], got " +
                              std::to_string(termination));
        }
    }

    WalkerType walker_type() const { return WalkerType::Unbiased; }
    double weight(const Walker*, const EdgeRef&) const { return 1.0; }
    bool update(Walker& q, const EdgeRef&) const { return q.rng.uniform_real(1.0) < stop_; }
    double max_weight() const { return 1.0; }
    double termination() const { return stop_; }

private:
    double stop_;
};

// Fixed-length walks with edge-weight-proportional transitions (uniform when
// run unweighted).  A complete walk holds exactly target_length vertices.
class DeepWalkProgram {
public:
    DeepWalkProgram(const Graph& g, uint32_t target_length, bool weighted)
        : length_(target_length), weighted_(weighted) {
        if (target_length < 1) {
            throw ConfigError("target length must be >= 1");
        }
        if (weighted && !g.has_weights()) {
            throw ConfigError("weighted walks need a graph with edge weights");
        }
        bound_ = weighted ? g.max_weight() : 1.0;
    }

    WalkerType walker_type() const { return WalkerType::Static; }
    double weight(const Walker*, const EdgeRef& e) const {
        return weighted_ ? e.weight() : 1.0;
    }
    bool update(Walker& q, const EdgeRef&) const { return q.path.size() >= length_; }
    bool finished(const Walker& q) const { return q.path.size() >= length_; }
    double max_weight() const { return bound_; }
    uint32_t target_length() const { return length_; }

private:
    uint32_t length_;
    bool weighted_;
    double bound_;
};

struct Node2VecParams {
    double a = 2.0;  // return parameter
    double b = 0.5;  // in-out parameter
    uint32_t target_length = 80;
};

// Second-order biased walks: each candidate destination is weighted by its
// distance from the previous vertex (1/a to return, 1 for a common neighbor,
// 1/b to move outward).  The first move has no previous vertex and uses the
// constant bound, which is also what max_weight() reports.
class Node2VecProgram {
public:
    Node2VecProgram(const Graph& g, Node2VecParams params, bool weighted)
        : graph_(&g), params_(params), weighted_(weighted) {
        if (!(std::isfinite(params.a) && params.a > 0.0)) {
            throw ConfigError("return parameter a must be positive and finite");
        }
        if (!(std::isfinite(params.b) && params.b > 0.0)) {
            throw ConfigError("in-out parameter b must be positive and finite");
        }
        if (params.target_length < 1) {
            throw ConfigError("target length must be >= 1");
        }
        if (weighted && !g.has_weights()) {
            throw ConfigError("weighted walks need a graph with edge weights");
        }
        inv_a_ = 1.0 / params.a;
        inv_b_ = 1.0 / params.b;
        first_ = std::max({inv_a_, 1.0, inv_b_});
        bound_ = weighted ? first_ * g.max_weight() : first_;
    }

    WalkerType walker_type() const { return WalkerType::Dynamic; }
    SamplerKind preferred_sampler() const { return SamplerKind::ORej; }
    double weight(const Walker* q, const EdgeRef& e) const {
        double w;
        if (q->moves() == 0) {
            w = first_;
        } else {
            VertexId dst = e.dst();
            VertexId prev = q->prev();
            if (dst == prev) {
                w = inv_a_;
            } else if (graph_->has_edge(prev, dst)) {
                w = 1.0;
            } else {
                w = inv_b_;
            }
        }
        return weighted_ ? w * e.weight() : w;
    }
    bool update(Walker& q, const EdgeRef&) const { return q.path.size() >= params_.target_length; }
    bool finished(const Walker& q) const { return q.path.size() >= params_.target_length; }
    double max_weight() const { return bound_; }
    const Node2VecParams& params() const { return params_; }

private:
    const Graph* graph_;
    Node2VecParams params_;
    bool weighted_;
    double inv_a_;
    double inv_b_;
    double first_;
    double bound_;
};

// Meta-path walks over an edge-labeled graph: the i-th move may only traverse
// an edge labeled schema[i]; everything else gets weight zero.  A walk
// completes after schema.size() moves and dead-ends where no edge matches.
// Deliberately exposes no weight bound: caller-bound rejection sampling never
// scans the edges, so it cannot tell an all-zero vertex from bad luck and
// would spin to the trial cap on every label dead end.
class MetaPathProgram {
public:
    MetaPathProgram(const Graph& g, std::vector<uint32_t> schema)
        : schema_(std::move(schema)) {
        if (!g.has_labels()) {
            throw ConfigError("meta-path walks need a graph with edge labels");
        }
        if (schema_.empty()) {
            throw ConfigError("meta-path schema must be non-empty");
        }
        std::unordered_set<uint32_t> present;
        for (uint64_t e = 0; e < g.edge_count(); ++e) {
            present.insert(g.label(e));
        }
        for (uint32_t l : schema_) {
            if (!present.contains(l)) {
                throw ConfigError("schema label " + std::to_string(l) +
                                  " does not occur in the graph");
            }
        }
    }

    WalkerType walker_type() const { return WalkerType::Dynamic; }
    double weight(const Walker* q, const EdgeRef& e) const {
        return e.label() == schema_[q->moves()] ? 1.0 : 0.0;
    }
    bool update(Walker& q, const EdgeRef&) const { return q.moves() >= schema_.size(); }
    bool finished(const Walker& q) const { return q.moves() >= schema_.size(); }
    const std::vector<uint32_t>& schema() const { return schema_; }

private:
    std::vector<uint32_t> schema_;
};

// Uniform transitions to a fixed number of vertices: the plain walk the CLI
// exposes as custom-uniform and the tuner uses as its unbiased probe.
class UniformProgram {
public:
    explicit UniformProgram(uint32_t target_length) : length_(target_length) {
        if (target_length < 1) {
            throw ConfigError("target length must be >= 1");
        }
    }

    WalkerType walker_type() const { return WalkerType::Unbiased; }
    double weight(const Walker*, const EdgeRef&) const { return 1.0; }
    bool update(Walker& q, const EdgeRef&) const { return q.path.size() >= length_; }
    bool finished(const Walker& q) const { return q.path.size() >= length_; }
    double max_weight() const { return 1.0; }

private:
    uint32_t length_;
};

}  // namespace walkforge
