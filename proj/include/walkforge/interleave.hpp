#pragma once

#include <cstdint>
#include <vector>

#include "walkforge/engine.hpp"

namespace walkforge {

namespace detail {

// One task-ring slot: an in-flight walker plus the staging fields the stage
// machines carry between passes.  Walker and context buffers are reused across
// admissions, so steady-state stepping allocates nothing.
struct RingSlot {
    enum class Phase : uint8_t { Empty, Pending, Picked, Dead };

    Walker walker;
    TransitionContext ctx;
    uint64_t base = 0;
    uint32_t degree = 0;
    uint32_t pick = 0;   // selected index within E_v
    double y = 0.0;      // ALIAS: the split draw, carried S1 -> S2
    Phase phase = Phase::Empty;
};

constexpr uint32_t kNoTask = UINT32_MAX;

// Search-ring slot: one walker inside a cycle stage (rejection trials or a
// binary-search probe), advanced one stage per visit.
struct SearchSlot {
    uint32_t task = kNoTask;  // index into the task ring
    uint8_t stage = 0;        // REJ: 0 = draw trial, 1 = accept test
    uint32_t trials = 0;
    uint32_t x = 0;           // REJ trial index draw
    double y = 0.0;           // REJ trial accept draw
    double p_star = 0.0;
    uint32_t d = 0;
    uint32_t lo = 0;          // ITS live search window [lo, hi)
    uint32_t hi = 0;
    double xval = 0.0;        // ITS target
    const double* cum = nullptr;
};

using RingPhase = RingSlot::Phase;

// ---- access policies --------------------------------------------------------
// The machines are written once against these; the policy binds them to static
// tables, gathered per-walker context, or direct program evaluation (O-REJ).

template <typename P>
struct TablesPolicy {
    const Graph* g;
    const StaticTables* tables;
    const P* prog;

    bool exhausted(const RingSlot& s) const { return tables->vertex_exhausted(s.walker.cur()); }
    const EngineAliasSlot* alias_slice(const RingSlot& s) const {
        return tables->alias.data() + s.base;
    }
    const double* cum_slice(const RingSlot& s) const {
        return tables->its_cumulative.data() + s.base;
    }
    bool has_pstar_stage() const { return true; }
    void prefetch_pstar(const RingSlot& s, PrefetchLevel pf) const {
        prefetch_read(&tables->rej_p_star[s.walker.cur()], pf);
    }
    double p_star(const RingSlot& s) const { return tables->rej_p_star[s.walker.cur()]; }
    void prefetch_weight(const RingSlot& s, uint32_t x, PrefetchLevel pf) const {
        // The accept test evaluates weight(null, e); for weight-reading
        // programs that lands on the graph's weight array, otherwise warming
        // the edge entry is the best available target.
        if (g->has_weights()) {
            prefetch_read(g->weights_data() + s.base + x, pf);
        } else {
            prefetch_read(g->neighbors_data() + s.base + x, pf);
        }
    }
    double weight_at(const RingSlot& s, uint32_t x) const {
        return prog->weight(nullptr, EdgeRef{g, s.walker.cur(), s.base + x});
    }
};

struct GatheredPolicy {
    bool exhausted(const RingSlot&) const { return false; }  // gather already filtered
    const EngineAliasSlot* alias_slice(const RingSlot& s) const { return s.ctx.alias.data(); }
    const double* cum_slice(const RingSlot& s) const { return s.ctx.reals.data(); }
    bool has_pstar_stage() const { return false; }  // scalar lives in the context
    void prefetch_pstar(const RingSlot&, PrefetchLevel) const {}
    double p_star(const RingSlot& s) const { return s.ctx.p_star; }
    void prefetch_weight(const RingSlot& s, uint32_t x, PrefetchLevel pf) const {
        prefetch_read(s.ctx.reals.data() + x, pf);
    }
    double weight_at(const RingSlot& s, uint32_t x) const { return s.ctx.reals[x]; }
};

template <typename P>
struct ORejPolicy {
    const Graph* g;
    const P* prog;
    double bound;

    bool exhausted(const RingSlot&) const { return false; }
    bool has_pstar_stage() const { return false; }  // the whole point of O-REJ
    void prefetch_pstar(const RingSlot&, PrefetchLevel) const {}
    double p_star(const RingSlot&) const { return bound; }
    void prefetch_weight(const RingSlot& s, uint32_t x, PrefetchLevel pf) const {
        prefetch_read(g->neighbors_data() + s.base + x, pf);
        if (g->has_weights()) {
            prefetch_read(g->weights_data() + s.base + x, pf);
        }
    }
    double weight_at(const RingSlot& s, uint32_t x) const {
        double w = prog->weight(&s.walker, EdgeRef{g, s.walker.cur(), s.base + x});
        check_program_weight(w);
        return w;
    }
};

// ---- stage machines ---------------------------------------------------------
// Each pass touches every pending walker once, issuing that walker's next
// stage; per stage there is at most one load whose line the previous stage
// prefetched.  Per-walker draw order is identical to the sequential driver.

// S0 prefetch degree -> S1 draw x, prefetch E_v[x] -> S2 commit.
inline void naive_move(const Graph& g, std::vector<RingSlot>& ring, PrefetchLevel pf) {
    const uint64_t* off = g.offsets_data();
    const VertexId* adj = g.neighbors_data();
    for (auto& s : ring) {
        if (s.phase == RingPhase::Pending) {
            prefetch_read(&off[s.walker.cur()], pf);
        }
    }
    for (auto& s : ring) {
        if (s.phase != RingPhase::Pending) {
            continue;
        }
        VertexId v = s.walker.cur();
        s.base = off[v];
        s.degree = static_cast<uint32_t>(off[v + 1] - s.base);
        if (s.degree == 0) {
            s.phase = RingPhase::Dead;
            continue;
        }
        s.pick = s.walker.rng.uniform_index(s.degree);
        prefetch_read(&adj[s.base + s.pick], pf);
    }
    for (auto& s : ring) {
        if (s.phase == RingPhase::Pending) {
            s.walker.path.push_back(adj[s.base + s.pick]);
            s.phase = RingPhase::Picked;
        }
    }
}

// S0 prefetch degree -> S1 draw x and y, prefetch bucket -> S2 select, commit.
// Buckets embed their destinations, so S2's one load covers the selection and
// the committed vertex.
template <typename Policy>
void alias_move(const Graph& g, std::vector<RingSlot>& ring, PrefetchLevel pf,
                const Policy& pol) {
    const uint64_t* off = g.offsets_data();
    for (auto& s : ring) {
        if (s.phase == RingPhase::Pending) {
            prefetch_read(&off[s.walker.cur()], pf);
        }
    }
    for (auto& s : ring) {
        if (s.phase != RingPhase::Pending) {
            continue;
        }
        VertexId v = s.walker.cur();
        s.base = off[v];
        s.degree = static_cast<uint32_t>(off[v + 1] - s.base);
        if (s.degree == 0 || pol.exhausted(s)) {
            s.phase = RingPhase::Dead;
            continue;
        }
        s.pick = s.walker.rng.uniform_index(s.degree);
        s.y = s.walker.rng.uniform_real(1.0);
        prefetch_read(pol.alias_slice(s) + s.pick, pf);
    }
    for (auto& s : ring) {
        if (s.phase != RingPhase::Pending) {
            continue;
        }
        const EngineAliasSlot& bucket = pol.alias_slice(s)[s.pick];
        bool take_first = s.y < bucket.split;
        s.pick = take_first ? bucket.first : bucket.second;
        s.walker.path.push_back(take_first ? bucket.first_dst : bucket.second_dst);
        s.phase = RingPhase::Picked;
    }
}

// Cycle portion of ITS: walkers rotate through the search ring, one
// binary-search probe per visit, next probe's line prefetched before yielding.
// The single real draw happens at submission, so the per-walker draw sequence
// matches the sequential path exactly.
template <typename Policy>
void its_search(const Graph& g, std::vector<RingSlot>& ring, std::vector<SearchSlot>& sr,
                uint32_t k_prime, PrefetchLevel pf, const Policy& pol, uint32_t live) {
    for (auto& r : sr) {
        r.task = kNoTask;
    }
    uint32_t submitted = 0;
    uint32_t completed = 0;
    uint32_t scan = 0;
    uint32_t index = 0;
    while (completed < live) {
        SearchSlot& r = sr[index];
        if (r.task == kNoTask) {
            if (submitted < live) {
                while (ring[scan].phase != RingPhase::Pending) {
                    scan += 1;
                }
                RingSlot& t = ring[scan];
                r.task = scan;
                scan += 1;
                submitted += 1;
                r.cum = pol.cum_slice(t);
                r.xval = t.walker.rng.uniform_real(r.cum[t.degree - 1]);
                r.lo = 0;
                r.hi = t.degree;
                prefetch_read(&r.cum[r.lo + (r.hi - r.lo) / 2], pf);
            }
        } else {
            RingSlot& t = ring[r.task];
            uint32_t mid = r.lo + (r.hi - r.lo) / 2;
            if (r.xval < r.cum[mid]) {
                r.hi = mid;
            } else {
                r.lo = mid + 1;
            }
            if (r.lo == r.hi) {
                t.pick = r.lo;
                prefetch_read(g.neighbors_data() + t.base + t.pick, pf);
                r.task = kNoTask;
                completed += 1;
            } else {
                prefetch_read(&r.cum[r.lo + (r.hi - r.lo) / 2], pf);
            }
        }
        index = (index + 1) % k_prime;
    }
}

// S0 prefetch degree and cumulative bounds -> binary-search cycle -> commit.
template <typename Policy>
void its_move(const Graph& g, std::vector<RingSlot>& ring, std::vector<SearchSlot>& sr,
              uint32_t k_prime, PrefetchLevel pf, const Policy& pol) {
    const uint64_t* off = g.offsets_data();
    for (auto& s : ring) {
        if (s.phase == RingPhase::Pending) {
            prefetch_read(&off[s.walker.cur()], pf);
        }
    }
    uint32_t live = 0;
    for (auto& s : ring) {
        if (s.phase != RingPhase::Pending) {
            continue;
        }
        VertexId v = s.walker.cur();
        s.base = off[v];
        s.degree = static_cast<uint32_t>(off[v + 1] - s.base);
        if (s.degree == 0 || pol.exhausted(s)) {
            s.phase = RingPhase::Dead;
            continue;
        }
        prefetch_read(pol.cum_slice(s) + s.degree - 1, pf);
        live += 1;
    }
    if (live > 0) {
        its_search(g, ring, sr, k_prime, pf, pol, live);
    }
    for (auto& s : ring) {
        if (s.phase == RingPhase::Pending) {
            s.walker.path.push_back(g.neighbors_data()[s.base + s.pick]);
            s.phase = RingPhase::Picked;
        }
    }
}

// Cycle portion of REJ/O-REJ: per visit either draw a trial (x, y) and
// prefetch the weight it probes, or run the accept test on the line prefetched
// last visit.  Accept keeps y < p_x, identical to the sequential sampler.
template <typename Policy>
void rej_search(std::vector<RingSlot>& ring, std::vector<SearchSlot>& sr, uint32_t k_prime,
                PrefetchLevel pf, const Policy& pol, uint32_t live, uint32_t trial_cap) {
    for (auto& r : sr) {
        r.task = kNoTask;
    }
    uint32_t submitted = 0;
    uint32_t completed = 0;
    uint32_t scan = 0;
    uint32_t index = 0;
    while (completed < live) {
        SearchSlot& r = sr[index];
        if (r.task == kNoTask) {
            if (submitted < live) {
                while (ring[scan].phase != RingPhase::Pending) {
                    scan += 1;
                }
                RingSlot& t = ring[scan];
                r.task = scan;
                scan += 1;
                submitted += 1;
                r.d = t.degree;
                r.p_star = pol.p_star(t);
                r.trials = 0;
                r.stage = 0;
            }
        } else if (r.stage == 0) {
            RingSlot& t = ring[r.task];
            r.trials += 1;
            if (r.trials > trial_cap) {
                throw RejectionCapError("rejection sampling exceeded " +
                                        std::to_string(trial_cap) + " trials at vertex " +
                                        std::to_string(t.walker.cur()));
            }
            r.x = t.walker.rng.uniform_index(r.d);
            r.y = t.walker.rng.uniform_real(r.p_star);
            pol.prefetch_weight(t, r.x, pf);
            r.stage = 1;
        } else {
            RingSlot& t = ring[r.task];
            if (r.y < pol.weight_at(t, r.x)) {
                t.pick = r.x;
                r.task = kNoTask;
                completed += 1;
            } else {
                r.stage = 0;
            }
        }
        index = (index + 1) % k_prime;
    }
}

// S0 prefetch degree -> S1 prefetch p* (REJ only; O-REJ has no init state and
// skips it) -> trial cycle -> S4 prefetch E_v[pick] -> S5 commit.
template <typename Policy>
void rej_move(const Graph& g, std::vector<RingSlot>& ring, std::vector<SearchSlot>& sr,
              uint32_t k_prime, PrefetchLevel pf, const Policy& pol, uint32_t trial_cap) {
    const uint64_t* off = g.offsets_data();
    for (auto& s : ring) {
        if (s.phase == RingPhase::Pending) {
            prefetch_read(&off[s.walker.cur()], pf);
        }
    }
    uint32_t live = 0;
    for (auto& s : ring) {
        if (s.phase != RingPhase::Pending) {
            continue;
        }
        VertexId v = s.walker.cur();
        s.base = off[v];
        s.degree = static_cast<uint32_t>(off[v + 1] - s.base);
        if (s.degree == 0 || pol.exhausted(s)) {
            s.phase = RingPhase::Dead;
            continue;
        }
        if (pol.has_pstar_stage()) {
            pol.prefetch_pstar(s, pf);
        }
        live += 1;
    }
    if (live > 0) {
        rej_search(ring, sr, k_prime, pf, pol, live, trial_cap);
    }
    for (auto& s : ring) {
        if (s.phase == RingPhase::Pending) {
            prefetch_read(g.neighbors_data() + s.base + s.pick, pf);
        }
    }
    for (auto& s : ring) {
        if (s.phase == RingPhase::Pending) {
            s.walker.path.push_back(g.neighbors_data()[s.base + s.pick]);
            s.phase = RingPhase::Picked;
        }
    }
}

}  // namespace detail

// Step-interleaved execution: each worker keeps up to k walkers in flight and
// advances all of them one stage at a time, hiding each walker's memory
// latency behind the others' work.  Walkers inside sampling cycles (ITS
// probes, rejection trials) rotate through a k'-slot search ring instead of
// stalling the group.  Because every walker draws only from its own stream,
// the walks produced are byte-identical to run_sequential on the same
// arguments — interleaving and prefetching are pure scheduling.
template <WalkProgram P>
RunResult run_interleaved(const Graph& g, const QuerySpec& spec, const P& prog, uint32_t k,
                          uint32_t k_prime, const ExecOptions& opts = {}) {
    spec.validate(g);
    if (k == 0) {
        throw ConfigError("task ring size must be >= 1");
    }
    if (k_prime == 0 || k_prime > k) {
        throw ConfigError("search ring size must be in [1, k]");
    }
    detail::ResolvedRun<P> run(g, prog, opts);
    const uint64_t n = spec.total(g);
    const uint32_t workers = std::max<uint32_t>(1, opts.threads);
    const PrefetchLevel pf = opts.prefetch;

    RunResult result;
    result.metrics.preprocess_seconds = run.tables.build_seconds;
    if (!opts.sink) {
        result.walks.resize(n);
    }
    std::vector<uint64_t> steps(workers, 0);
    std::vector<uint32_t> peaks(workers, 0);

    auto start = std::chrono::steady_clock::now();
    detail::parallel_workers(workers, [&](uint32_t w) {
        auto [lo, hi] = detail::worker_range(n, workers, w);
        std::vector<detail::RingSlot> ring(k);
        std::vector<detail::SearchSlot> sr(k_prime);
        WalkSet block;
        if (opts.sink) {
            block.resize(hi - lo);
        }
        uint64_t next = lo;
        uint32_t live = 0;
        uint32_t peak = 0;
        uint64_t local_steps = 0;

        auto store = [&](WalkRecord&& record) {
            uint64_t qid = record.query_id;
            if (opts.sink) {
                block[qid - lo] = std::move(record);
            } else {
                result.walks[qid] = std::move(record);
            }
        };
        auto admit = [&](detail::RingSlot& s) {
            while (next < hi) {
                s.walker.id = next;
                s.walker.rng = RngStream(opts.seed, next);
                s.walker.path.clear();
                s.walker.path.push_back(spec.source_at(next, g));
                next += 1;
                if (walk_already_finished(prog, s.walker)) {
                    store({s.walker.id, WalkStatus::Complete, s.walker.path});
                    continue;
                }
                s.phase = detail::RingPhase::Pending;
                live += 1;
                return;
            }
        };
        auto finalize = [&](detail::RingSlot& s, WalkStatus status) {
            store({s.walker.id, status, s.walker.path});
            s.phase = detail::RingPhase::Empty;
            live -= 1;
        };

        for (auto& s : ring) {
            if (next >= hi) {
                break;
            }
            admit(s);
        }
        peak = live;

        while (live > 0) {
            if (run.flow == ExecFlow::Gathered) {
                for (auto& s : ring) {
                    if (s.phase == detail::RingPhase::Pending &&
                        !gather(g, s.walker, prog, run.kind, s.ctx)) {
                        finalize(s, WalkStatus::DeadEnd);
                    }
                }
            }

            switch (run.flow) {
                case ExecFlow::Direct:
                    if (run.kind == SamplerKind::Naive) {
                        detail::naive_move(g, ring, pf);
                    } else {
                        detail::ORejPolicy<P> pol{&g, &prog, run.orej_bound};
                        detail::rej_move(g, ring, sr, k_prime, pf, pol, run.trial_cap);
                    }
                    break;
                case ExecFlow::Tables: {
                    detail::TablesPolicy<P> pol{&g, &run.tables, &prog};
                    switch (run.kind) {
                        case SamplerKind::Its:
                            detail::its_move(g, ring, sr, k_prime, pf, pol);
                            break;
                        case SamplerKind::Alias:
                            detail::alias_move(g, ring, pf, pol);
                            break;
                        default:
                            detail::rej_move(g, ring, sr, k_prime, pf, pol, run.trial_cap);
                            break;
                    }
                    break;
                }
                case ExecFlow::Gathered: {
                    detail::GatheredPolicy pol;
                    switch (run.kind) {
                        case SamplerKind::Its:
                            detail::its_move(g, ring, sr, k_prime, pf, pol);
                            break;
                        case SamplerKind::Alias:
                            detail::alias_move(g, ring, pf, pol);
                            break;
                        default:
                            detail::rej_move(g, ring, sr, k_prime, pf, pol, run.trial_cap);
                            break;
                    }
                    break;
                }
            }

            for (auto& s : ring) {
                if (s.phase == detail::RingPhase::Picked) {
                    local_steps += 1;
                    uint64_t edge = s.base + s.pick;
                    if (prog.update(s.walker, EdgeRef{&g, s.walker.prev(), edge})) {
                        finalize(s, WalkStatus::Complete);
                    } else {
                        s.phase = detail::RingPhase::Pending;
                    }
                } else if (s.phase == detail::RingPhase::Dead) {
                    finalize(s, WalkStatus::DeadEnd);
                }
            }

            for (auto& s : ring) {
                if (next >= hi) {
                    break;
                }
                if (s.phase == detail::RingPhase::Empty) {
                    admit(s);
                }
            }
            peak = std::max(peak, live);
        }

        steps[w] = local_steps;
        peaks[w] = peak;
        if (opts.sink) {
            opts.sink(w, std::move(block));
        }
    });
    result.metrics.exec_seconds = detail::seconds_since(start);
    for (uint64_t s : steps) {
        result.metrics.total_steps += s;
    }
    for (uint32_t p : peaks) {
        result.metrics.max_in_flight = std::max(result.metrics.max_in_flight, p);
    }
    return result;
}

}  // namespace walkforge
