#include "walkforge/sampler.hpp"

#include <algorithm>
#include <cmath>

namespace walkforge {

const char* to_string(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::Naive: return "naive";
        case SamplerKind::Its: return "its";
        case SamplerKind::Alias: return "alias";
        case SamplerKind::Rej: return "rej";
        case SamplerKind::ORej: return "orej";
    }
    return "?";
}

SamplerKind parse_sampler(const std::string& name) {
    if (name == "naive") return SamplerKind::Naive;
    if (name == "its") return SamplerKind::Its;
    if (name == "alias") return SamplerKind::Alias;
    if (name == "rej") return SamplerKind::Rej;
    if (name == "orej" || name == "o-rej") return SamplerKind::ORej;
    throw ConfigError("unknown sampler '" + name + "'");
}

double checked_weight_sum(std::span<const double> weights) {
    if (weights.empty()) {
        throw DistributionError("empty weight sequence");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw DistributionError("weights must be finite and non-negative");
        }
        sum += w;
    }
    if (!(sum > 0.0)) {
        throw DistributionError("weights sum to zero");
    }
    return sum;
}

ItsTable its_init(std::span<const double> weights) {
    checked_weight_sum(weights);
    ItsTable table;
    table.cumulative.resize(weights.size());
    double running = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
        running += weights[i];
        table.cumulative[i] = running;
    }
    return table;
}

AliasTable alias_init(std::span<const double> weights) {
    double sum = checked_weight_sum(weights);
    AliasTable table;
    table.slots.resize(weights.size());
    std::vector<double> scaled;
    std::vector<uint32_t> small;
    std::vector<uint32_t> large;
    vose_build(weights, sum, scaled, small, large,
               [&](uint32_t i, double split, uint32_t first, uint32_t second) {
                   table.slots[i] = {split, first, second};
               });
    return table;
}

double rej_init(std::span<const double> weights) {
    checked_weight_sum(weights);
    return *std::max_element(weights.begin(), weights.end());
}

}  // namespace walkforge
