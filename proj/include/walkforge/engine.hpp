#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

#include "walkforge/graph.hpp"
#include "walkforge/prefetch.hpp"
#include "walkforge/program.hpp"
#include "walkforge/sampler.hpp"
#include "walkforge/walker.hpp"

namespace walkforge {

// Alias bucket as the engine stores it: the pure (split, first, second) table
// decorated with the destination vertices, so the commit stage resolves v'
// from the one bucket load instead of a second dependent read of E_v.
struct EngineAliasSlot {
    double split;
    uint32_t first;        // index into E_v
    uint32_t second;       // == first when the bucket has no alias
    VertexId first_dst;
    VertexId second_dst;
};

// Per-vertex sampler state for static programs, flattened and addressed by the
// graph's CSR offsets.  ITS and ALIAS cost O(E); REJ stores only p* per vertex
// and re-evaluates weight(null, e) in the accept test.
struct StaticTables {
    SamplerKind kind = SamplerKind::Alias;
    std::vector<double> its_cumulative;   // kind Its: length E
    std::vector<EngineAliasSlot> alias;   // kind Alias: length E
    std::vector<double> rej_p_star;       // kind Rej: length V
    std::vector<uint8_t> exhausted;       // degree > 0 but every weight zero
    double build_seconds = 0.0;

    bool vertex_exhausted(VertexId v) const { return exhausted[v] != 0; }
};

// Scratch a walker's current transition distribution is gathered into; reused
// across steps so steady-state stepping allocates nothing.
struct TransitionContext {
    uint32_t n = 0;
    double p_star = 0.0;                  // Rej
    std::vector<double> reals;            // Rej: raw weights; Its: cumulative
    std::vector<EngineAliasSlot> alias;   // Alias buckets
    std::vector<double> weight_scratch;   // alias construction temps
    std::vector<double> scaled_scratch;
    std::vector<uint32_t> small_scratch;
    std::vector<uint32_t> large_scratch;
};

// Which machinery feeds the sampler each step.
enum class ExecFlow : uint8_t {
    Direct,    // NAIVE / O-REJ: straight off the CSR arrays
    Tables,    // static programs through preprocessed per-vertex state
    Gathered,  // per-step gather of weight(Q, e) over E_v
};

struct RunMetrics {
    double preprocess_seconds = 0.0;
    double exec_seconds = 0.0;
    uint64_t total_steps = 0;
    uint32_t max_in_flight = 0;  // peak ring occupancy of any worker (interleaved)
};

struct RunResult {
    WalkSet walks;
    RunMetrics metrics;
};

// Streaming handoff: when set, each worker ships its finished block (records in
// query-id order) instead of the run assembling a WalkSet.  Called once per
// worker, possibly concurrently.
using BlockSink = std::function<void(uint32_t worker, WalkSet&& block)>;

struct ExecOptions {
    uint32_t threads = 1;
    uint64_t seed = 0;
    std::optional<SamplerKind> sampler;  // default: default_sampler(walker_type)
    bool use_static_tables = true;       // static programs: prebuild tables
    PrefetchLevel prefetch = PrefetchLevel::L1;
    uint32_t rej_trial_cap = kRejTrialCap;
    BlockSink sink;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline void check_program_weight(double w) {
    if (!std::isfinite(w) || w < 0.0) {
        throw ContractError("program emitted a weight that is negative or not finite");
    }
}

template <typename P>
double resolve_orej_bound(const P& prog) {
    if constexpr (BoundedWeightProgram<P>) {
        double bound = prog.max_weight();
        if (!std::isfinite(bound) || bound <= 0.0) {
            throw ContractError("max_weight() must be positive and finite");
        }
        return bound;
    } else {
        throw ConfigError("O-REJ needs a program with max_weight()");
    }
}

// Decorated alias construction shared by preprocessing and gather: identical
// Vose ordering to alias_init, destinations resolved against E_v.
inline void build_alias_slots(std::span<const double> weights, double sum,
                              const VertexId* edge_dst, EngineAliasSlot* out,
                              TransitionContext& scratch) {
    vose_build(weights, sum, scratch.scaled_scratch, scratch.small_scratch,
               scratch.large_scratch,
               [&](uint32_t i, double split, uint32_t first, uint32_t second) {
                   uint32_t alt = second == kNoAlias ? first : second;
                   out[i] = {split, first, alt, edge_dst[first], edge_dst[alt]};
               });
}

}  // namespace detail

// Evaluates weight(Q, e) over the current vertex's out-edges and initializes
// the sampler state for `kind` in ctx.  Returns false when the walker is at a
// dead end (no out-edges, or every weight zero).  Consumes no random draws.
template <WalkProgram P>
bool gather(const Graph& g, const Walker& q, const P& prog, SamplerKind kind,
            TransitionContext& ctx) {
    VertexId v = q.cur();
    uint64_t base = g.edge_begin(v);
    uint32_t d = g.degree(v);
    ctx.n = d;
    if (d == 0) {
        return false;
    }

    std::vector<double>& weights =
        kind == SamplerKind::Alias ? ctx.weight_scratch : ctx.reals;
    weights.resize(d);
    double sum = 0.0;
    double max = 0.0;
    for (uint32_t i = 0; i < d; ++i) {
        double w = prog.weight(&q, EdgeRef{&g, v, base + i});
        detail::check_program_weight(w);
        weights[i] = w;
        sum += w;
        max = std::max(max, w);
    }
    if (!(sum > 0.0)) {
        return false;
    }

    switch (kind) {
        case SamplerKind::Its: {
            double running = 0.0;
            for (uint32_t i = 0; i < d; ++i) {
                running += weights[i];
                ctx.reals[i] = running;
            }
            break;
        }
        case SamplerKind::Alias: {
            ctx.alias.resize(d);
            detail::build_alias_slots(weights, sum, g.neighbors_data() + base,
                                      ctx.alias.data(), ctx);
            break;
        }
        case SamplerKind::Rej: {
            ctx.p_star = max;
            break;
        }
        default:
            throw ConfigError("gather feeds ITS, ALIAS, or REJ");
    }
    return true;
}

// Builds per-vertex sampler state once, before any walk: the weights of a
// static (or unbiased) program do not depend on walker state, so gather's work
// can be hoisted out of the steps entirely.  Vertices whose weights are all
// zero are marked exhausted and dead-end walkers at run time.
template <WalkProgram P>
StaticTables preprocess_static(const Graph& g, const P& prog, SamplerKind kind) {
    if (prog.walker_type() == WalkerType::Dynamic) {
        throw ConfigError("cannot preprocess a dynamic program; its weights depend on the walker");
    }
    if (kind != SamplerKind::Its && kind != SamplerKind::Alias && kind != SamplerKind::Rej) {
        throw ConfigError("static tables exist for ITS, ALIAS, and REJ only");
    }
    auto start = std::chrono::steady_clock::now();

    StaticTables tables;
    tables.kind = kind;
    tables.exhausted.assign(g.vertex_count(), 0);
    switch (kind) {
        case SamplerKind::Its: tables.its_cumulative.resize(g.edge_count()); break;
        case SamplerKind::Alias: tables.alias.resize(g.edge_count()); break;
        default: tables.rej_p_star.assign(g.vertex_count(), 0.0); break;
    }

    TransitionContext scratch;
    std::vector<double>& weights = scratch.weight_scratch;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        uint64_t base = g.edge_begin(v);
        uint32_t d = g.degree(v);
        if (d == 0) {
            continue;
        }
        weights.resize(d);
        double sum = 0.0;
        double max = 0.0;
        for (uint32_t i = 0; i < d; ++i) {
            double w = prog.weight(nullptr, EdgeRef{&g, v, base + i});
            detail::check_program_weight(w);
            weights[i] = w;
            sum += w;
            max = std::max(max, w);
        }
        if (!(sum > 0.0)) {
            tables.exhausted[v] = 1;
            continue;
        }
        switch (kind) {
            case SamplerKind::Its: {
                double running = 0.0;
                for (uint32_t i = 0; i < d; ++i) {
                    running += weights[i];
                    tables.its_cumulative[base + i] = running;
                }
                break;
            }
            case SamplerKind::Alias:
                detail::build_alias_slots(weights, sum, g.neighbors_data() + base,
                                          tables.alias.data() + base, scratch);
                break;
            default:
                tables.rej_p_star[v] = max;
                break;
        }
    }
    tables.build_seconds = detail::seconds_since(start);
    return tables;
}

namespace detail {

template <typename P>
ExecFlow resolve_flow(const P& prog, SamplerKind kind, bool use_static_tables) {
    switch (kind) {
        case SamplerKind::Naive:
            if (prog.walker_type() != WalkerType::Unbiased) {
                throw ConfigError("NAIVE assumes a uniform distribution; the program is " +
                                  std::string(to_string(prog.walker_type())));
            }
            return ExecFlow::Direct;
        case SamplerKind::ORej:
            return ExecFlow::Direct;
        default:
            if (prog.walker_type() == WalkerType::Dynamic) {
                return ExecFlow::Gathered;
            }
            return use_static_tables ? ExecFlow::Tables : ExecFlow::Gathered;
    }
}

// Everything a run fixes before the first step.
template <WalkProgram P>
struct ResolvedRun {
    SamplerKind kind;
    ExecFlow flow;
    StaticTables tables;
    double orej_bound = 0.0;
    uint32_t trial_cap = kRejTrialCap;

    ResolvedRun(const Graph& g, const P& prog, const ExecOptions& opts) {
        kind = opts.sampler.value_or(resolve_default_sampler(prog));
        flow = resolve_flow(prog, kind, opts.use_static_tables);
        trial_cap = opts.rej_trial_cap;
        if (kind == SamplerKind::ORej) {
            orej_bound = resolve_orej_bound(prog);
        }
        if (flow == ExecFlow::Tables) {
            tables = preprocess_static(g, prog, kind);
        }
    }
};

inline std::pair<uint64_t, uint64_t> worker_range(uint64_t n, uint32_t workers, uint32_t w) {
    return {n * w / workers, n * (w + 1) / workers};
}

// Runs fn(worker_index) on `count` workers; inline when count == 1, otherwise
// one thread each, first exception rethrown after the join.
template <typename Fn>
void parallel_workers(uint32_t count, Fn&& fn) {
    if (count <= 1) {
        fn(0);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(count);
    std::vector<std::exception_ptr> errors(count);
    for (uint32_t w = 0; w < count; ++w) {
        threads.emplace_back([&, w] {
            try {
                fn(w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    for (auto& err : errors) {
        if (err) {
            std::rethrow_exception(err);
        }
    }
}

// One sequential move: select an edge out of q.cur() and append its
// destination.  Returns the global edge index, or kNoEdge at a dead end.
// Draw order per sampler is the contract the interleaved executor replays:
// NAIVE x; ITS x_real; ALIAS x then y; REJ/O-REJ (x, y) per trial.
template <WalkProgram P>
class StepDriver {
public:
    static constexpr uint64_t kNoEdge = UINT64_MAX;

    StepDriver(const Graph& g, const P& prog, const ResolvedRun<P>& run)
        : g_(g), prog_(prog), run_(run) {}

    uint64_t step(Walker& q, TransitionContext& ctx) const {
        VertexId v = q.cur();
        uint64_t base = g_.edge_begin(v);
        uint32_t d = g_.degree(v);
        uint32_t pick = 0;

        switch (run_.flow) {
            case ExecFlow::Direct: {
                if (d == 0) {
                    return kNoEdge;
                }
                if (run_.kind == SamplerKind::Naive) {
                    pick = q.rng.uniform_index(d);
                } else {
                    pick = rej_generate(
                               d, run_.orej_bound,
                               [&](uint32_t x) {
                                   double w = prog_.weight(&q, EdgeRef{&g_, v, base + x});
                                   check_program_weight(w);
                                   return w;
                               },
                               q.rng, run_.trial_cap)
                               .index;
                }
                break;
            }
            case ExecFlow::Tables: {
                if (d == 0 || run_.tables.vertex_exhausted(v)) {
                    return kNoEdge;
                }
                switch (run_.kind) {
                    case SamplerKind::Its: {
                        const double* cum = run_.tables.its_cumulative.data() + base;
                        double x = q.rng.uniform_real(cum[d - 1]);
                        pick = cumulative_upper_index(cum, d, x);
                        break;
                    }
                    case SamplerKind::Alias: {
                        const EngineAliasSlot& slot =
                            run_.tables.alias[base + q.rng.uniform_index(d)];
                        pick = q.rng.uniform_real(1.0) < slot.split ? slot.first : slot.second;
                        break;
                    }
                    default: {
                        pick = rej_generate(
                                   d, run_.tables.rej_p_star[v],
                                   [&](uint32_t x) {
                                       return prog_.weight(nullptr, EdgeRef{&g_, v, base + x});
                                   },
                                   q.rng, run_.trial_cap)
                                   .index;
                        break;
                    }
                }
                break;
            }
            case ExecFlow::Gathered: {
                if (!gather(g_, q, prog_, run_.kind, ctx)) {
                    return kNoEdge;
                }
                switch (run_.kind) {
                    case SamplerKind::Its: {
                        double x = q.rng.uniform_real(ctx.reals[d - 1]);
                        pick = cumulative_upper_index(ctx.reals.data(), d, x);
                        break;
                    }
                    case SamplerKind::Alias: {
                        const EngineAliasSlot& slot = ctx.alias[q.rng.uniform_index(d)];
                        pick = q.rng.uniform_real(1.0) < slot.split ? slot.first : slot.second;
                        break;
                    }
                    default: {
                        pick = rej_generate(std::span<const double>(ctx.reals.data(), d),
                                            ctx.p_star, q.rng, run_.trial_cap)
                                   .index;
                        break;
                    }
                }
                break;
            }
        }
        uint64_t edge = base + pick;
        q.path.push_back(g_.neighbor(edge));
        return edge;
    }

private:
    const Graph& g_;
    const P& prog_;
    const ResolvedRun<P>& run_;
};

}  // namespace detail

// Runs every query to completion, one walker at a time per worker.  Results
// are a pure function of (graph, spec, program, seed): queries are split into
// contiguous blocks across threads and every walker draws only from its own
// (seed, query id) stream.
template <WalkProgram P>
RunResult run_sequential(const Graph& g, const QuerySpec& spec, const P& prog,
                         const ExecOptions& opts = {}) {
    spec.validate(g);
    detail::ResolvedRun<P> run(g, prog, opts);
    const uint64_t n = spec.total(g);
    const uint32_t workers = std::max<uint32_t>(1, opts.threads);

    RunResult result;
    result.metrics.preprocess_seconds = run.tables.build_seconds;
    if (!opts.sink) {
        result.walks.resize(n);
    }
    std::vector<uint64_t> steps(workers, 0);

    auto start = std::chrono::steady_clock::now();
    detail::parallel_workers(workers, [&](uint32_t w) {
        auto [lo, hi] = detail::worker_range(n, workers, w);
        detail::StepDriver<P> driver(g, prog, run);
        TransitionContext ctx;
        Walker walker;
        uint64_t local_steps = 0;
        WalkSet block;
        if (opts.sink) {
            block.reserve(hi - lo);
        }
        for (uint64_t qid = lo; qid < hi; ++qid) {
            walker.id = qid;
            walker.rng = RngStream(opts.seed, qid);
            walker.path.clear();
            walker.path.push_back(spec.source_at(qid, g));
            WalkStatus status = WalkStatus::DeadEnd;
            if (walk_already_finished(prog, walker)) {
                status = WalkStatus::Complete;
            } else {
                while (true) {
                    uint64_t edge = driver.step(walker, ctx);
                    if (edge == detail::StepDriver<P>::kNoEdge) {
                        break;
                    }
                    local_steps += 1;
                    if (prog.update(walker, EdgeRef{&g, walker.prev(), edge})) {
                        status = WalkStatus::Complete;
                        break;
                    }
                }
            }
            if (opts.sink) {
                block.push_back({qid, status, walker.path});
            } else {
                result.walks[qid] = {qid, status, walker.path};
            }
        }
        steps[w] = local_steps;
        if (opts.sink) {
            opts.sink(w, std::move(block));
        }
    });
    result.metrics.exec_seconds = detail::seconds_since(start);
    for (uint64_t s : steps) {
        result.metrics.total_steps += s;
    }
    result.metrics.max_in_flight = 1;
    return result;
}

}  // namespace walkforge
