#pragma once

#include <concepts>
#include <cstdint>

#include "walkforge/sampler.hpp"
#include "walkforge/walker.hpp"

namespace walkforge {

// How a program's transition weights depend on walker state; decides the
// execution flow and the default sampling method.
//
//   Unbiased  all edges equally likely            -> NAIVE
//   Static    weight(e) fixed per edge            -> ALIAS (tables built once)
//   Dynamic   weight(Q, e) depends on the walker  -> ITS (gathered per step)
enum class WalkerType : uint8_t { Unbiased, Static, Dynamic };

inline const char* to_string(WalkerType type) {
    switch (type) {
        case WalkerType::Unbiased: return "unbiased";
        case WalkerType::Static: return "static";
        case WalkerType::Dynamic: return "dynamic";
    }
    return "?";
}

inline SamplerKind default_sampler(WalkerType type) {
    switch (type) {
        case WalkerType::Unbiased: return SamplerKind::Naive;
        case WalkerType::Static: return SamplerKind::Alias;
        case WalkerType::Dynamic: return SamplerKind::Its;
    }
    return SamplerKind::Its;
}

// The program contract the engine runs against:
//
//   walker_type()       one of the three classes above
//   weight(Q, e)        transition weight; Q is null in static contexts
//                       (preprocessing, table-backed rejection), so static
//                       programs must not dereference it
//   update(Q, e)        called exactly once after each completed move, with the
//                       traversed edge; returns true to finish the walk; the
//                       only place a program may draw from Q.rng
//   max_weight()        optional; a bound on every weight the program can
//                       emit, required iff the run uses O-REJ
template <typename P>
concept WalkProgram = requires(const P& p, const Walker* q, Walker& w, const EdgeRef& e) {
    { p.walker_type() } -> std::same_as<WalkerType>;
    { p.weight(q, e) } -> std::convertible_to<double>;
    { p.update(w, e) } -> std::convertible_to<bool>;
};

template <typename P>
concept BoundedWeightProgram = WalkProgram<P> && requires(const P& p) {
    { p.max_weight() } -> std::convertible_to<double>;
};

// A program may carry its own default sampling method (e.g. a bounded-weight
// dynamic program that prefers O-REJ over the generic dynamic default).  An
// explicit user override still wins over this.
template <typename P>
concept SamplerPreferringProgram = WalkProgram<P> && requires(const P& p) {
    { p.preferred_sampler() } -> std::same_as<SamplerKind>;
};

template <WalkProgram P>
SamplerKind resolve_default_sampler(const P& prog) {
    if constexpr (SamplerPreferringProgram<P>) {
        return prog.preferred_sampler();
    } else {
        return default_sampler(prog.walker_type());
    }
}

// Fixed-length programs can finish before the first move (target length 1:
// the source alone is the whole walk).  update() only runs after a move, so
// programs expose the "already done" test separately; walkers that start
// finished complete with a single-vertex path and zero steps.
template <typename P>
concept PreCheckedProgram = WalkProgram<P> && requires(const P& p, const Walker& q) {
    { p.finished(q) } -> std::convertible_to<bool>;
};

template <WalkProgram P>
bool walk_already_finished(const P& prog, const Walker& q) {
    if constexpr (PreCheckedProgram<P>) {
        return prog.finished(q);
    } else {
        return false;
    }
}

}  // namespace walkforge
