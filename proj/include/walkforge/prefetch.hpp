#pragma once

#include <cstdint>
#include <string>

#include "walkforge/error.hpp"

namespace walkforge {

// Software prefetch hints for the interleaved executor.  Hints are pure
// performance directives: running with `Off` (or on a target where
// __builtin_prefetch compiles to nothing) changes no output bytes.
//
//   L1           into every cache level (the default; temporal data)
//   L2 / L3      into that level and below
//   NonTemporal  bypass reuse, minimal pollution
enum class PrefetchLevel : uint8_t { L1, L2, L3, NonTemporal, Off };

inline void prefetch_read(const void* address, PrefetchLevel level) {
    switch (level) {
        case PrefetchLevel::L1: __builtin_prefetch(address, 0, 3); break;
        case PrefetchLevel::L2: __builtin_prefetch(address, 0, 2); break;
        case PrefetchLevel::L3: __builtin_prefetch(address, 0, 1); break;
        case PrefetchLevel::NonTemporal: __builtin_prefetch(address, 0, 0); break;
        case PrefetchLevel::Off: break;
    }
}

inline const char* to_string(PrefetchLevel level) {
    switch (level) {
        case PrefetchLevel::L1: return "l1";
        case PrefetchLevel::L2: return "l2";
        case PrefetchLevel::L3: return "l3";
        case PrefetchLevel::NonTemporal: return "nta";
        case PrefetchLevel::Off: return "off";
    }
    return "?";
}

inline PrefetchLevel parse_prefetch_level(const std::string& name) {
    if (name == "l1") return PrefetchLevel::L1;
    if (name == "l2") return PrefetchLevel::L2;
    if (name == "l3") return PrefetchLevel::L3;
    if (name == "nta") return PrefetchLevel::NonTemporal;
    if (name == "off") return PrefetchLevel::Off;
    throw ConfigError("unknown prefetch level '" + name + "' (l1|l2|l3|nta|off)");
}

}  // namespace walkforge
