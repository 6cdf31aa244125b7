#include "walkforge/walker.hpp"

#include <charconv>
#include <fstream>

namespace walkforge {

QuerySpec QuerySpec::one_per_vertex() {
    QuerySpec spec;
    spec.mode = Mode::OnePerVertex;
    return spec;
}

QuerySpec QuerySpec::from_source(VertexId source, uint64_t count) {
    QuerySpec spec;
    spec.mode = Mode::FromSource;
    spec.source = source;
    spec.count = count;
    return spec;
}

QuerySpec QuerySpec::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open query file '" + path + "'");
    }
    QuerySpec spec;
    spec.mode = Mode::FromFile;

    std::string line;
    uint64_t line_no = 0;
    while (std::getline(in, line)) {
        line_no += 1;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        uint64_t fields[2] = {0, 1};
        int field_count = 0;
        size_t pos = 0;
        while (pos < view.size()) {
            while (pos < view.size() && std::isspace(static_cast<unsigned char>(view[pos]))) {
                pos += 1;
            }
            size_t start = pos;
            while (pos < view.size() && !std::isspace(static_cast<unsigned char>(view[pos]))) {
                pos += 1;
            }
            if (pos == start) {
                continue;
            }
            if (field_count >= 2) {
                throw ParseError(path + ":" + std::to_string(line_no) + ": too many columns");
            }
            const char* b = view.data() + start;
            const char* e = view.data() + pos;
            auto [ptr, ec] = std::from_chars(b, e, fields[field_count]);
            if (ec != std::errc() || ptr != e) {
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": expected `vertex [count]`");
            }
            field_count += 1;
        }
        if (field_count == 0) {
            continue;
        }
        if (fields[0] > UINT32_MAX) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": vertex id out of range");
        }
        for (uint64_t i = 0; i < fields[1]; ++i) {
            spec.sources.push_back(static_cast<VertexId>(fields[0]));
        }
    }
    if (spec.sources.empty()) {
        throw ParseError(path + ": no queries");
    }
    return spec;
}

uint64_t QuerySpec::total(const Graph& g) const {
    switch (mode) {
        case Mode::OnePerVertex: return g.vertex_count();
        case Mode::FromSource: return count;
        case Mode::FromFile: return sources.size();
    }
    return 0;
}

void QuerySpec::validate(const Graph& g) const {
    switch (mode) {
        case Mode::OnePerVertex:
            return;
        case Mode::FromSource:
            if (source >= g.vertex_count()) {
                throw ConfigError("query source " + std::to_string(source) +
                                  " is not a vertex (V=" + std::to_string(g.vertex_count()) + ")");
            }
            return;
        case Mode::FromFile:
            for (VertexId v : sources) {
                if (v >= g.vertex_count()) {
                    throw ConfigError("query source " + std::to_string(v) +
                                      " is not a vertex (V=" + std::to_string(g.vertex_count()) +
                                      ")");
                }
            }
            return;
    }
}

}  // namespace walkforge
