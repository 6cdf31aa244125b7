#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "walkforge/algorithms.hpp"
#include "walkforge/interleave.hpp"
#include "walkforge/output.hpp"
#include "walkforge/tune.hpp"

namespace wf = walkforge;

namespace {

bool is_wfg_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw wf::IoError("cannot open graph file " + path);
    }
    char magic[4] = {};
    in.read(magic, sizeof(magic));
    return in.gcount() == sizeof(magic) && std::memcmp(magic, "WFG1", sizeof(magic)) == 0;
}

// WFG1 files load directly; anything else is read as a plain directed,
// unweighted, unlabeled edge list.  Attributed runs go through `convert`.
wf::Graph load_graph(const std::string& path) {
    if (is_wfg_file(path)) {
        return wf::Graph::read_binary(path);
    }
    return wf::load_edge_list(path).graph;
}

wf::QuerySpec parse_queries(const std::string& text) {
    if (text == "one-per-vertex") {
        return wf::QuerySpec::one_per_vertex();
    }
    if (text.starts_with("source:")) {
        std::string rest = text.substr(7);
        size_t colon = rest.find(':');
        if (colon == std::string::npos) {
            throw wf::ConfigError("--queries source form is source:<vertex>:<count>");
        }
        uint64_t vertex = 0;
        uint64_t count = 0;
        auto v = std::from_chars(rest.data(), rest.data() + colon, vertex);
        auto c = std::from_chars(rest.data() + colon + 1, rest.data() + rest.size(), count);
        if (v.ec != std::errc() || v.ptr != rest.data() + colon || c.ec != std::errc() ||
            c.ptr != rest.data() + rest.size() || vertex > UINT32_MAX) {
            throw wf::ConfigError("cannot parse --queries value '" + text + "'");
        }
        return wf::QuerySpec::from_source(static_cast<wf::VertexId>(vertex), count);
    }
    if (text.starts_with("file:")) {
        return wf::QuerySpec::from_file(text.substr(5));
    }
    throw wf::ConfigError("--queries must be one-per-vertex, source:<v>:<n>, or file:<path>");
}

std::vector<uint32_t> parse_schema(const std::string& text) {
    if (text.empty()) {
        throw wf::ConfigError("--schema is required for metapath (comma-separated label ids)");
    }
    std::vector<uint32_t> schema;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t comma = text.find(',', pos);
        size_t end = comma == std::string::npos ? text.size() : comma;
        uint32_t label = 0;
        auto r = std::from_chars(text.data() + pos, text.data() + end, label);
        if (r.ec != std::errc() || r.ptr != text.data() + end) {
            throw wf::ConfigError("cannot parse schema label in '" + text + "'");
        }
        schema.push_back(label);
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return schema;
}

struct ConvertArgs {
    std::string input;
    std::string output;
    bool undirected = false;
    std::string weights = "none";
    std::string labels = "none";
    uint32_t label_count = 5;
    uint64_t seed = 0;
};

struct RunArgs {
    std::string graph;
    std::string output = "walks.out";
    std::string algorithm = "deepwalk";
    std::string sampler;
    std::string interleave = "on";
    uint32_t k = 64;
    uint32_t k_prime = 32;
    uint32_t threads = std::max(1u, std::thread::hardware_concurrency());
    uint64_t seed = 0;
    double termination = 0.2;
    uint32_t length = 80;
    double a = 2.0;
    double b = 0.5;
    std::string schema;
    bool weighted = false;
    std::string queries = "one-per-vertex";
    std::string prefetch = "l1";
    bool binary_output = false;
    uint64_t buffer_bytes = 4 * wf::kMinOutputBuffer;
    bool no_static_tables = false;
};

struct TuneArgs {
    std::string graph;
    uint32_t threads = std::max(1u, std::thread::hardware_concurrency());
    double budget = 120.0;
    uint64_t seed = 0;
};

int cmd_convert(const ConvertArgs& args) {
    auto mode = [](const std::string& name) {
        if (name == "none") return wf::WeightMode::None;
        if (name == "file") return wf::WeightMode::FromFile;
        return wf::WeightMode::Random;
    };
    wf::EdgeListOptions options;
    options.directedness =
        args.undirected ? wf::Directedness::Undirected : wf::Directedness::Directed;
    options.weights = mode(args.weights);
    options.labels = args.labels == "none"  ? wf::LabelMode::None
                     : args.labels == "file" ? wf::LabelMode::FromFile
                                             : wf::LabelMode::Random;
    options.label_count = args.label_count;
    options.seed = args.seed;

    wf::LoadedGraph loaded = wf::load_edge_list(args.input, options);
    loaded.graph.write_binary(args.output);
    std::printf("V=%llu E=%llu d_avg=%.2f d_max=%llu\n",
                static_cast<unsigned long long>(loaded.graph.vertex_count()),
                static_cast<unsigned long long>(loaded.graph.edge_count()),
                loaded.graph.avg_degree(),
                static_cast<unsigned long long>(loaded.graph.max_degree()));
    return 0;
}

template <wf::WalkProgram P>
int run_program(const wf::Graph& g, const RunArgs& args, const P& prog) {
    wf::QuerySpec spec = parse_queries(args.queries);
    wf::ExecOptions eo;
    eo.threads = args.threads;
    eo.seed = args.seed;
    if (!args.sampler.empty()) {
        eo.sampler = wf::parse_sampler(args.sampler);
    }
    eo.use_static_tables = !args.no_static_tables;
    eo.prefetch = wf::parse_prefetch_level(args.prefetch);

    wf::DoubleBufferedWriter writer(
        args.output, args.binary_output ? wf::OutputFormat::Binary : wf::OutputFormat::Text,
        args.buffer_bytes);
    wf::OrderedBlockSink sink(writer, std::max(1u, args.threads));
    eo.sink = [&](uint32_t worker, wf::WalkSet&& block) { sink.push(worker, std::move(block)); };

    wf::RunResult res;
    try {
        if (args.interleave == "on") {
            res = wf::run_interleaved(g, spec, prog, args.k, args.k_prime, eo);
        } else {
            res = wf::run_sequential(g, spec, prog, eo);
        }
    } catch (...) {
        sink.cancel();
        throw;
    }
    sink.finish();
    writer.finish();

    uint64_t queries = spec.total(g);
    double throughput = res.metrics.exec_seconds > 0.0
                            ? static_cast<double>(res.metrics.total_steps) / res.metrics.exec_seconds
                            : 0.0;
    std::printf("preprocess_seconds %.6f\n", res.metrics.preprocess_seconds);
    std::printf("exec_seconds %.6f\n", res.metrics.exec_seconds);
    std::printf("total_steps %llu\n", static_cast<unsigned long long>(res.metrics.total_steps));
    std::printf("queries %llu\n", static_cast<unsigned long long>(queries));
    std::printf("mean_steps_per_query %.4f\n",
                queries > 0 ? static_cast<double>(res.metrics.total_steps) / queries : 0.0);
    std::printf("throughput_steps_per_sec %.1f\n", throughput);
    return 0;
}

int cmd_run(const RunArgs& args) {
    wf::Graph g = load_graph(args.graph);
    if (args.algorithm == "ppr") {
        return run_program(g, args, wf::PprProgram(args.termination));
    }
    if (args.algorithm == "deepwalk") {
        return run_program(g, args, wf::DeepWalkProgram(g, args.length, args.weighted));
    }
    if (args.algorithm == "node2vec") {
        wf::Node2VecParams params{args.a, args.b, args.length};
        return run_program(g, args, wf::Node2VecProgram(g, params, args.weighted));
    }
    if (args.algorithm == "metapath") {
        return run_program(g, args, wf::MetaPathProgram(g, parse_schema(args.schema)));
    }
    return run_program(g, args, wf::UniformProgram(args.length));
}

int cmd_tune(const TuneArgs& args) {
    wf::Graph g = load_graph(args.graph);
    wf::TuneOptions options;
    options.threads = args.threads;
    options.budget_seconds = args.budget;
    options.seed = args.seed;
    wf::TuneReport report = wf::tune_ring_sizes(g, options);
    std::fputs(report.to_text().c_str(), stdout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"walkforge: batch random-walk engine over in-memory CSR graphs"};
    app.require_subcommand(1);

    ConvertArgs convert_args;
    CLI::App* convert = app.add_subcommand("convert", "convert a text edge list to a WFG1 file");
    convert->add_option("input", convert_args.input, "edge list path")->required();
    convert->add_option("output", convert_args.output, "WFG1 output path")->required();
    convert->add_flag("--undirected", convert_args.undirected, "emit both edge directions");
    convert->add_option("--weights", convert_args.weights, "edge weights: none|file|random")
        ->check(CLI::IsMember({"none", "file", "random"}));
    convert->add_option("--labels", convert_args.labels, "edge labels: none|file|random")
        ->check(CLI::IsMember({"none", "file", "random"}));
    convert->add_option("--label-count", convert_args.label_count,
                        "distinct labels for --labels random");
    convert->add_option("--seed", convert_args.seed, "seed for random weights/labels");

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "execute random walk queries");
    run->add_option("graph", run_args.graph, "WFG1 file or plain edge list")->required();
    run->add_option("-o,--output", run_args.output, "walk output path");
    run->add_option("--algorithm", run_args.algorithm, "walk program")
        ->check(CLI::IsMember({"ppr", "deepwalk", "node2vec", "metapath", "custom-uniform"}));
    run->add_option("--sampler", run_args.sampler, "override: naive|its|alias|rej|orej")
        ->check(CLI::IsMember({"naive", "its", "alias", "rej", "orej"}));
    run->add_option("--interleave", run_args.interleave, "step interleaving")
        ->check(CLI::IsMember({"on", "off"}));
    run->add_option("-k", run_args.k, "task ring size");
    run->add_option("--k-prime", run_args.k_prime, "search ring size");
    run->add_option("--threads", run_args.threads, "worker threads");
    run->add_option("--seed", run_args.seed, "global seed");
    run->add_option("--termination", run_args.termination, "ppr stop probability");
    run->add_option("--length", run_args.length, "target walk length in vertices");
    run->add_option("-a", run_args.a, "node2vec return parameter");
    run->add_option("-b", run_args.b, "node2vec in-out parameter");
    run->add_option("--schema", run_args.schema, "metapath schema, comma-separated label ids");
    run->add_flag("--weighted", run_args.weighted, "use edge weights as transition weights");
    run->add_option("--queries", run_args.queries,
                    "one-per-vertex | source:<v>:<n> | file:<path>");
    run->add_option("--prefetch", run_args.prefetch, "prefetch locality: l1|l2|l3|nta|off")
        ->check(CLI::IsMember({"l1", "l2", "l3", "nta", "off"}));
    run->add_flag("--binary-output", run_args.binary_output, "binary records instead of text");
    run->add_option("--buffer-bytes", run_args.buffer_bytes, "output buffer size (>= 1 MiB)");
    run->add_flag("--no-static-tables", run_args.no_static_tables,
                  "gather per step even for static programs");

    TuneArgs tune_args;
    CLI::App* tune = app.add_subcommand("tune", "sweep ring sizes and report throughput");
    tune->add_option("graph", tune_args.graph, "WFG1 file or plain edge list")->required();
    tune->add_option("--threads", tune_args.threads, "worker threads");
    tune->add_option("--budget", tune_args.budget, "sweep budget in seconds");
    tune->add_option("--seed", tune_args.seed, "probe seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*convert) {
            return cmd_convert(convert_args);
        }
        if (*run) {
            return cmd_run(run_args);
        }
        return cmd_tune(tune_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
