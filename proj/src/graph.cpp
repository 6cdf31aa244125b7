#include "walkforge/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "walkforge/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary graph files assume a little-endian host");

namespace walkforge {

namespace {

constexpr char kMagic[4] = {'W', 'F', 'G', '1'};
constexpr uint8_t kFlagWeights = 1u << 0;
constexpr uint8_t kFlagLabels = 1u << 1;
constexpr uint64_t kWeightSalt = 0x57464757454947ULL;  // distinct draw streams for
constexpr uint64_t kLabelSalt = 0x5746474C41424CULL;   // weights vs. labels

struct CsrArrays {
    std::vector<uint64_t> offsets;
    std::vector<VertexId> neighbors;
    std::vector<double> weights;
    std::vector<uint32_t> labels;
};

// Bucket edges by source (stable, so input order survives within a bucket),
// then sort each adjacency list by destination with input order breaking ties.
// The resulting edge order is the definition point for "edge index": synthetic
// attributes and the binary format both key off it.
CsrArrays assemble_csr(uint32_t vertex_count, const std::vector<std::pair<VertexId, VertexId>>& edges,
                       const std::vector<double>& weights, const std::vector<uint32_t>& labels) {
    const uint64_t edge_count = edges.size();
    CsrArrays csr;
    csr.offsets.assign(static_cast<size_t>(vertex_count) + 1, 0);
    for (const auto& [src, dst] : edges) {
        csr.offsets[src + 1] += 1;
    }
    for (uint32_t v = 0; v < vertex_count; ++v) {
        csr.offsets[v + 1] += csr.offsets[v];
    }

    csr.neighbors.resize(edge_count);
    std::vector<uint64_t> source_index(edge_count);  // input position of each placed edge
    {
        std::vector<uint64_t> cursor(csr.offsets.begin(), csr.offsets.end() - 1);
        for (uint64_t i = 0; i < edge_count; ++i) {
            uint64_t pos = cursor[edges[i].first]++;
            csr.neighbors[pos] = edges[i].second;
            source_index[pos] = i;
        }
    }

    std::vector<uint32_t> order;
    for (uint32_t v = 0; v < vertex_count; ++v) {
        uint64_t begin = csr.offsets[v];
        uint32_t d = static_cast<uint32_t>(csr.offsets[v + 1] - begin);
        if (d < 2) {
            continue;
        }
        order.resize(d);
        for (uint32_t i = 0; i < d; ++i) {
            order[i] = i;
        }
        std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
            VertexId da = csr.neighbors[begin + a];
            VertexId db = csr.neighbors[begin + b];
            if (da != db) {
                return da < db;
            }
            return source_index[begin + a] < source_index[begin + b];
        });
        std::vector<VertexId> n_tmp(d);
        std::vector<uint64_t> s_tmp(d);
        for (uint32_t i = 0; i < d; ++i) {
            n_tmp[i] = csr.neighbors[begin + order[i]];
            s_tmp[i] = source_index[begin + order[i]];
        }
        std::copy(n_tmp.begin(), n_tmp.end(), csr.neighbors.begin() + begin);
        std::copy(s_tmp.begin(), s_tmp.end(), source_index.begin() + begin);
    }

    if (!weights.empty()) {
        csr.weights.resize(edge_count);
        for (uint64_t pos = 0; pos < edge_count; ++pos) {
            csr.weights[pos] = weights[source_index[pos]];
        }
    }
    if (!labels.empty()) {
        csr.labels.resize(edge_count);
        for (uint64_t pos = 0; pos < edge_count; ++pos) {
            csr.labels[pos] = labels[source_index[pos]];
        }
    }
    return csr;
}

[[noreturn]] void parse_fail(const std::string& path, uint64_t line_no, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

Graph Graph::from_csr(std::vector<uint64_t> offsets, std::vector<VertexId> neighbors,
                      std::vector<double> weights, std::vector<uint32_t> labels) {
    if (offsets.size() < 2) {
        throw ConfigError("graph must have at least one vertex");
    }
    if (offsets.size() - 1 > UINT32_MAX) {
        throw ConfigError("vertex count exceeds 32-bit id space");
    }
    if (offsets.front() != 0 || offsets.back() != neighbors.size()) {
        throw ConfigError("CSR offsets do not frame the neighbor array");
    }
    for (size_t v = 1; v < offsets.size(); ++v) {
        if (offsets[v] < offsets[v - 1]) {
            throw ConfigError("CSR offsets must be non-decreasing");
        }
    }
    uint32_t vertex_count = static_cast<uint32_t>(offsets.size() - 1);
    for (VertexId dst : neighbors) {
        if (dst >= vertex_count) {
            throw ConfigError("neighbor id " + std::to_string(dst) + " out of range");
        }
    }
    if (!weights.empty() && weights.size() != neighbors.size()) {
        throw ConfigError("weight array does not match edge count");
    }
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ConfigError("edge weights must be finite and non-negative");
        }
    }
    if (!labels.empty() && labels.size() != neighbors.size()) {
        throw ConfigError("label array does not match edge count");
    }

    Graph g;
    g.offsets_ = std::move(offsets);
    g.neighbors_ = std::move(neighbors);
    g.weights_ = std::move(weights);
    g.labels_ = std::move(labels);
    g.finalize_stats();
    return g;
}

void Graph::finalize_stats() {
    max_degree_ = 0;
    adjacency_sorted_ = true;
    for (uint32_t v = 0; v < vertex_count(); ++v) {
        uint64_t d = offsets_[v + 1] - offsets_[v];
        if (d > UINT32_MAX) {
            throw ConfigError("vertex degree exceeds 32-bit range");
        }
        max_degree_ = std::max(max_degree_, d);
        for (uint64_t e = offsets_[v] + 1; e < offsets_[v + 1] && adjacency_sorted_; ++e) {
            if (neighbors_[e - 1] > neighbors_[e]) {
                adjacency_sorted_ = false;
            }
        }
    }
    max_weight_ = 0.0;
    for (double w : weights_) {
        max_weight_ = std::max(max_weight_, w);
    }
}

bool Graph::has_edge(VertexId src, VertexId dst) const {
    auto ns = neighbors(src);
    if (adjacency_sorted_) {
        return std::binary_search(ns.begin(), ns.end(), dst);
    }
    return std::find(ns.begin(), ns.end(), dst) != ns.end();
}

void Graph::write_binary(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    uint64_t v = vertex_count();
    uint64_t e = edge_count();
    uint8_t flags = (has_weights() ? kFlagWeights : 0) | (has_labels() ? kFlagLabels : 0);
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
    out.write(reinterpret_cast<const char*>(&e), sizeof(e));
    out.write(reinterpret_cast<const char*>(&flags), sizeof(flags));
    out.write(reinterpret_cast<const char*>(offsets_.data()), offsets_.size() * sizeof(uint64_t));
    out.write(reinterpret_cast<const char*>(neighbors_.data()), neighbors_.size() * sizeof(VertexId));
    if (has_weights()) {
        out.write(reinterpret_cast<const char*>(weights_.data()), weights_.size() * sizeof(double));
    }
    if (has_labels()) {
        out.write(reinterpret_cast<const char*>(labels_.data()), labels_.size() * sizeof(uint32_t));
    }
    if (!out) {
        throw IoError("write failed for '" + path + "'");
    }
}

Graph Graph::read_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    uint64_t file_size = std::filesystem::file_size(path);

    char magic[4] = {};
    uint64_t v = 0;
    uint64_t e = 0;
    uint8_t flags = 0;
    in.read(magic, sizeof(magic));
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    in.read(reinterpret_cast<char*>(&e), sizeof(e));
    in.read(reinterpret_cast<char*>(&flags), sizeof(flags));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw FormatError("'" + path + "' is not a WFG1 graph file");
    }
    if (v == 0 || v > UINT32_MAX) {
        throw FormatError("'" + path + "' has an invalid vertex count");
    }
    if (flags & ~uint8_t(kFlagWeights | kFlagLabels)) {
        throw FormatError("'" + path + "' has unknown flag bits");
    }

    uint64_t expected = sizeof(kMagic) + sizeof(v) + sizeof(e) + sizeof(flags) +
                        (v + 1) * sizeof(uint64_t) + e * sizeof(VertexId);
    if (flags & kFlagWeights) {
        expected += e * sizeof(double);
    }
    if (flags & kFlagLabels) {
        expected += e * sizeof(uint32_t);
    }
    if (file_size != expected) {
        throw FormatError("'" + path + "' is truncated or has trailing bytes (" +
                          std::to_string(file_size) + " bytes, expected " +
                          std::to_string(expected) + ")");
    }

    std::vector<uint64_t> offsets(v + 1);
    std::vector<VertexId> neighbors(e);
    std::vector<double> weights;
    std::vector<uint32_t> labels;
    in.read(reinterpret_cast<char*>(offsets.data()), offsets.size() * sizeof(uint64_t));
    in.read(reinterpret_cast<char*>(neighbors.data()), neighbors.size() * sizeof(VertexId));
    if (flags & kFlagWeights) {
        weights.resize(e);
        in.read(reinterpret_cast<char*>(weights.data()), weights.size() * sizeof(double));
    }
    if (flags & kFlagLabels) {
        labels.resize(e);
        in.read(reinterpret_cast<char*>(labels.data()), labels.size() * sizeof(uint32_t));
    }
    if (!in) {
        throw FormatError("'" + path + "' ended unexpectedly");
    }
    try {
        return from_csr(std::move(offsets), std::move(neighbors), std::move(weights),
                        std::move(labels));
    } catch (const ConfigError& err) {
        throw FormatError("'" + path + "' fails validation: " + err.what());
    }
}

double synthetic_weight(uint64_t seed, uint64_t edge_index) {
    RngStream rng(seed ^ kWeightSalt, edge_index);
    return 1.0 + rng.uniform_real(4.0);
}

uint32_t synthetic_label(uint64_t seed, uint64_t edge_index, uint32_t label_count) {
    RngStream rng(seed ^ kLabelSalt, edge_index);
    return rng.uniform_index(label_count);
}

Graph build_graph(uint32_t vertex_count, std::vector<std::pair<VertexId, VertexId>> edges,
                  std::vector<double> weights, std::vector<uint32_t> labels) {
    if (!weights.empty() && weights.size() != edges.size()) {
        throw ConfigError("weight array does not match edge count");
    }
    if (!labels.empty() && labels.size() != edges.size()) {
        throw ConfigError("label array does not match edge count");
    }
    for (const auto& [src, dst] : edges) {
        if (src >= vertex_count || dst >= vertex_count) {
            throw ConfigError("edge endpoint out of range");
        }
    }
    CsrArrays csr = assemble_csr(vertex_count, edges, weights, labels);
    return Graph::from_csr(std::move(csr.offsets), std::move(csr.neighbors),
                           std::move(csr.weights), std::move(csr.labels));
}

LoadedGraph load_edge_list(const std::string& path, const EdgeListOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }

    std::vector<std::pair<uint64_t, uint64_t>> raw_edges;
    std::vector<double> file_weights;
    std::vector<uint32_t> file_labels;
    const bool want_weights = options.weights == WeightMode::FromFile;
    const bool want_labels = options.labels == LabelMode::FromFile;

    std::string line;
    uint64_t line_no = 0;
    std::vector<std::string_view> tokens;
    while (std::getline(in, line)) {
        line_no += 1;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        tokens.clear();
        size_t pos = 0;
        while (pos < view.size()) {
            while (pos < view.size() && std::isspace(static_cast<unsigned char>(view[pos]))) {
                pos += 1;
            }
            size_t start = pos;
            while (pos < view.size() && !std::isspace(static_cast<unsigned char>(view[pos]))) {
                pos += 1;
            }
            if (pos > start) {
                tokens.push_back(view.substr(start, pos - start));
            }
        }
        if (tokens.empty()) {
            continue;
        }
        if (tokens.size() < 2) {
            parse_fail(path, line_no, "expected `src dst [weight [label]]`");
        }
        if (tokens.size() > 4) {
            parse_fail(path, line_no, "too many columns");
        }
        uint64_t src = 0;
        uint64_t dst = 0;
        if (!parse_number(tokens[0], src) || !parse_number(tokens[1], dst)) {
            parse_fail(path, line_no, "vertex ids must be non-negative integers");
        }
        if (want_weights) {
            if (tokens.size() < 3) {
                parse_fail(path, line_no, "weight column missing");
            }
            double w = 0.0;
            if (!parse_number(tokens[2], w)) {
                parse_fail(path, line_no, "malformed weight");
            }
            if (!std::isfinite(w) || w < 0.0) {
                parse_fail(path, line_no, "weights must be finite and non-negative");
            }
            file_weights.push_back(w);
        }
        if (want_labels) {
            if (tokens.size() < 4) {
                parse_fail(path, line_no, "label column missing (format is `src dst weight label`)");
            }
            uint32_t l = 0;
            if (!parse_number(tokens[3], l)) {
                parse_fail(path, line_no, "malformed label");
            }
            file_labels.push_back(l);
        }
        raw_edges.emplace_back(src, dst);
    }
    if (raw_edges.empty()) {
        throw ParseError(path + ": no edges");
    }

    // Dense remap in ascending numeric order; already-dense inputs map to
    // themselves, so hand-written fixtures keep their ids.
    std::vector<uint64_t> ids;
    ids.reserve(raw_edges.size() * 2);
    for (const auto& [src, dst] : raw_edges) {
        ids.push_back(src);
        ids.push_back(dst);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.size() > UINT32_MAX) {
        throw ParseError(path + ": more than 2^32 distinct vertex ids");
    }
    auto dense_id = [&](uint64_t original) {
        return static_cast<VertexId>(
            std::lower_bound(ids.begin(), ids.end(), original) - ids.begin());
    };

    std::vector<std::pair<VertexId, VertexId>> edges;
    std::vector<double> weights;
    std::vector<uint32_t> labels;
    const bool undirected = options.directedness == Directedness::Undirected;
    edges.reserve(raw_edges.size() * (undirected ? 2 : 1));
    for (size_t i = 0; i < raw_edges.size(); ++i) {
        VertexId s = dense_id(raw_edges[i].first);
        VertexId d = dense_id(raw_edges[i].second);
        edges.emplace_back(s, d);
        if (undirected) {
            edges.emplace_back(d, s);
        }
        if (want_weights) {
            weights.push_back(file_weights[i]);
            if (undirected) {
                weights.push_back(file_weights[i]);
            }
        }
        if (want_labels) {
            labels.push_back(file_labels[i]);
            if (undirected) {
                labels.push_back(file_labels[i]);
            }
        }
    }

    uint32_t vertex_count = static_cast<uint32_t>(ids.size());
    CsrArrays csr = assemble_csr(vertex_count, edges, weights, labels);

    if (options.weights == WeightMode::Random) {
        csr.weights.resize(csr.neighbors.size());
        for (uint64_t e = 0; e < csr.neighbors.size(); ++e) {
            csr.weights[e] = synthetic_weight(options.seed, e);
        }
    }
    if (options.labels == LabelMode::Random) {
        if (options.label_count == 0) {
            throw ConfigError("random labels need label_count >= 1");
        }
        csr.labels.resize(csr.neighbors.size());
        for (uint64_t e = 0; e < csr.neighbors.size(); ++e) {
            csr.labels[e] = synthetic_label(options.seed, e, options.label_count);
        }
    }

    LoadedGraph result;
    result.graph = Graph::from_csr(std::move(csr.offsets), std::move(csr.neighbors),
                                   std::move(csr.weights), std::move(csr.labels));
    result.original_ids = std::move(ids);
    return result;
}

}  // namespace walkforge
