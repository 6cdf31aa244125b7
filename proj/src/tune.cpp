#include "walkforge/tune.hpp"

#include <chrono>
#include <cmath>
#include <initializer_list>
#include <sstream>

#include "walkforge/algorithms.hpp"
#include "walkforge/interleave.hpp"

namespace walkforge {

namespace {

constexpr uint32_t kProbeLength = 10;
constexpr uint32_t kMaxTaskRing = 1024;

template <WalkProgram P>
double probe_throughput(const Graph& g, const P& prog, SamplerKind kind, uint32_t k,
                        uint32_t k_prime, const TuneOptions& opts) {
    ExecOptions eo;
    eo.threads = opts.threads;
    eo.seed = opts.seed;
    eo.sampler = kind;
    eo.prefetch = opts.prefetch;
    RunResult res = run_interleaved(g, QuerySpec::one_per_vertex(), prog, k, k_prime, eo);
    if (res.metrics.total_steps == 0 || !(res.metrics.exec_seconds > 0.0)) {
        return 0.0;
    }
    return static_cast<double>(res.metrics.total_steps) / res.metrics.exec_seconds;
}

double geomean(std::initializer_list<double> xs) {
    double log_sum = 0.0;
    for (double x : xs) {
        if (!(x > 0.0)) {
            return 0.0;
        }
        log_sum += std::log(x);
    }
    return std::exp(log_sum / static_cast<double>(xs.size()));
}

}  // namespace

TuneReport tune_ring_sizes(const Graph& g, const TuneOptions& opts) {
    if (!(opts.budget_seconds > 0.0)) {
        throw ConfigError("tuning budget must be positive");
    }
    auto start = std::chrono::steady_clock::now();
    auto over_budget = [&] { return detail::seconds_since(start) > opts.budget_seconds; };

    TuneReport report;
    UniformProgram uniform_probe(kProbeLength);
    DeepWalkProgram static_probe(g, kProbeLength, false);

    double best = -1.0;
    for (uint32_t k = 1; k <= kMaxTaskRing; k *= 2) {
        double naive = probe_throughput(g, uniform_probe, SamplerKind::Naive, k, 1, opts);
        double alias = probe_throughput(g, static_probe, SamplerKind::Alias, k, 1, opts);
        double combined = geomean({naive, alias});
        report.task_ring.push_back({k, combined});
        if (combined > best) {
            best = combined;
            report.best_k = k;
        }
        if (over_budget()) {
            report.budget_exhausted = true;
            break;
        }
    }

    best = -1.0;
    for (uint32_t kp = 1; !report.budget_exhausted && kp <= report.best_k; kp *= 2) {
        double its = probe_throughput(g, static_probe, SamplerKind::Its, report.best_k, kp, opts);
        double rej = probe_throughput(g, static_probe, SamplerKind::Rej, report.best_k, kp, opts);
        double orej = probe_throughput(g, static_probe, SamplerKind::ORej, report.best_k, kp, opts);
        double combined = geomean({its, rej, orej});
        report.search_ring.push_back({kp, combined});
        if (combined > best) {
            best = combined;
            report.best_k_prime = kp;
        }
        if (over_budget()) {
            report.budget_exhausted = true;
            break;
        }
    }
    return report;
}

std::string TuneReport::to_text() const {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(1);
    out << "task ring sweep (NAIVE + ALIAS, geometric mean)\n";
    out << "k\tthroughput_steps_per_sec\n";
    for (const TunePoint& p : task_ring) {
        out << p.k << '\t' << p.steps_per_sec << '\n';
    }
    out << "search ring sweep at k=" << best_k << " (ITS + REJ + O-REJ, geometric mean)\n";
    out << "k'\tthroughput_steps_per_sec\n";
    for (const TunePoint& p : search_ring) {
        out << p.k << '\t' << p.steps_per_sec << '\n';
    }
    out << "recommended k=" << best_k << " k'=" << best_k_prime << '\n';
    if (budget_exhausted) {
        out << "budget exhausted; recommendation is best-so-far\n";
    }
    return out.str();
}

}  // namespace walkforge
