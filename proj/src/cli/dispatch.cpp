#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "ept/assembly.hpp"
#include "ept/ast_ingest.hpp"
#include "ept/belief.hpp"
#include "ept/cli.hpp"
#include "ept/communities.hpp"
#include "ept/error.hpp"
#include "ept/experiments.hpp"
#include "ept/graph_io.hpp"
#include "ept/netstats.hpp"

namespace ept::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Run {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    RunManifest manifest;
    std::string manifest_path;
    unsigned threads = 0;
    bool stdin_used = false;
    std::string primary_output;
};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

std::string read_source(Run& run, const std::string& path) {
    std::string text;
    if (path == "-") {
        if (run.stdin_used) throw UsageError("standard input can only be read once");
        run.stdin_used = true;
        text.assign(std::istreambuf_iterator<char>(run.in), std::istreambuf_iterator<char>());
    } else {
        if (!std::filesystem::exists(path)) throw Error("file not found: " + path);
        std::ifstream f(path, std::ios::binary);
        if (!f) throw Error("cannot read " + path);
        text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    }
    run.manifest.input_hashes[path] = fnv1a64_hex(text);
    return text;
}

void write_output(Run& run, const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        run.out << content;
        run.out.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + path);
    f << content;
    if (!f) throw Error("write failed: " + path);
    run.manifest.outputs.push_back(path);
    if (run.primary_output.empty()) run.primary_output = path;
}

enum class InputKind { Json, Sexp, Edges };

InputKind sniff(std::string_view text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return InputKind::Json;
        if (c == '(' || c == ';') return InputKind::Sexp;
        return InputKind::Edges;
    }
    return InputKind::Edges;
}

ProofDag parse_graph(std::string_view text, const BinderLabels& binders, bool force_edges = false) {
    if (force_edges) return from_edge_list(text);
    switch (sniff(text)) {
        case InputKind::Json:
            return graph_from_json(text);
        case InputKind::Sexp:
            return reify_dag(alpha_number(parse_sexpr(text), binders));
        case InputKind::Edges:
            break;
    }
    return from_edge_list(text);
}

ProofDag load_graph(Run& run, const std::string& path) { return parse_graph(read_source(run, path), BinderLabels{}); }

GraphFormat graph_format(const std::string& name) {
    if (auto f = parse_graph_format(name)) return *f;
    throw UsageError("unknown format '" + name + "' (expected json, dot or edges)");
}

PriorMode prior_mode(const std::string& name) {
    if (name == "field") return PriorMode::Field;
    if (name == "init-only") return PriorMode::InitOnly;
    throw UsageError("unknown prior mode '" + name + "'");
}

std::string csv_header(const Run& run) {
    std::ostringstream os;
    os << "# ept-lab " << version() << ' ' << run.manifest.command << '\n';
    for (const auto& [key, value] : run.manifest.params.items())
        os << "# " << key << " = " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    for (const auto& [path, hash] : run.manifest.input_hashes) os << "# input " << path << " fnv1a64:" << hash << '\n';
    return os.str();
}

nlohmann::json schedule_json(const Schedule& s) {
    return {{"burn_in_sweeps", s.burn_in_sweeps},
            {"n_samples", s.n_samples},
            {"sample_stride_sweeps", s.sample_stride_sweeps},
            {"n_replicas", s.n_replicas},
            {"seed", s.seed}};
}

void add_schedule(CLI::App* sub, Schedule& s) {
    sub->add_option("--burn-in", s.burn_in_sweeps, "Sweeps discarded before sampling")->capture_default_str();
    sub->add_option("--samples", s.n_samples, "Samples per replica")->capture_default_str();
    sub->add_option("--stride", s.sample_stride_sweeps, "Sweeps between samples")->capture_default_str();
    sub->add_option("--replicas", s.n_replicas, "Independent chains")->capture_default_str();
    sub->add_option("--seed", s.seed, "Random seed")->capture_default_str();
}

void add_common(CLI::App* sub, Run& run) {
    sub->add_option("--threads", run.threads, "Worker threads (0 = EPT_LAB_THREADS or all cores)");
    sub->add_option("--manifest", run.manifest_path, "Run manifest path (default: <output>.manifest.json)");
}

// ---------------------------------------------------------------------------

struct IngestOpts {
    std::string input;
    bool edges = false;
    std::vector<std::string> binders;
    std::string output = "-";
    std::string format = "json";
};

void cmd_ingest(Run& run, const IngestOpts& o) {
    const auto format = graph_format(o.format);
    BinderLabels binders;
    if (!o.binders.empty()) binders.labels = o.binders;
    run.manifest.params = {{"input", o.input}, {"edges", o.edges}, {"binders", binders.labels}, {"format", o.format}};
    const auto dag = parse_graph(read_source(run, o.input), binders, o.edges);
    write_output(run, o.output, export_graph(dag, format));
}

struct GenOpts {
    AssemblyParams params;
    std::string output = "-";
    std::string format = "json";
};

void cmd_gen(Run& run, const GenOpts& o) {
    const auto format = graph_format(o.format);
    o.params.validate();
    run.manifest.params = {{"nodes", o.params.n_nodes},
                           {"mean_deps", o.params.mean_deps},
                           {"copy_prob", o.params.copy_prob},
                           {"seed", o.params.seed},
                           {"format", o.format}};
    run.manifest.seed = o.params.seed;
    write_output(run, o.output, export_graph(generate(o.params), format));
}

struct TruncateOpts {
    std::string input;
    std::size_t limit = 10000;
    std::string output = "-";
    std::string format = "json";
};

void cmd_truncate(Run& run, const TruncateOpts& o) {
    const auto format = graph_format(o.format);
    run.manifest.params = {{"input", o.input}, {"limit", o.limit}, {"format", o.format}};
    const auto dag = load_graph(run, o.input);
    write_output(run, o.output, export_graph(truncate_by_depth(dag, o.limit), format));
}

struct StatsOpts {
    std::string input;
    std::string fit = "out-degree";
    std::size_t offset = 1;
    std::string output = "-";
};

void cmd_stats(Run& run, const StatsOpts& o) {
    if (o.fit != "out-degree" && o.fit != "in-degree") throw UsageError("--fit must be out-degree or in-degree");
    run.manifest.params = {{"input", o.input}, {"fit", o.fit}, {"geometric_offset", o.offset}};
    const auto dag = load_graph(run, o.input);
    const auto table = degrees(dag);
    const bool out_deg = o.fit == "out-degree";
    const auto& values = out_deg ? table.out_degree : table.in_degree;

    std::ostringstream os;
    os << csv_header(run);
    os << "# nodes = " << dag.size() << "\n# edges = " << dag.edge_count() << '\n';
    try {
        if (out_deg) {
            const auto f = fit_power_law(values);
            os << "# fit: power_law alpha=" << num(f.alpha) << " stderr=" << num(f.alpha_stderr)
               << " d_min=" << f.d_min << " n_tail=" << f.n_tail << " ks=" << num(f.ks_distance)
               << " low_confidence=" << (f.low_confidence ? "true" : "false") << '\n';
        } else {
            const auto f = fit_exponential(values);
            std::size_t n = 0;
            for (auto d : values) n += d >= o.offset;
            const double ks = geometric_ks(values, o.offset);
            const double crit = ks_critical_5pct(n);
            os << "# fit: exponential mean=" << num(f.mean) << " rate=" << num(f.rate) << '\n';
            os << "# fit: geometric offset=" << o.offset << " n=" << n << " ks=" << num(ks)
               << " critical_5pct=" << num(crit) << " consistent=" << (ks < crit ? "true" : "false") << '\n';
        }
    } catch (const Error& e) {
        os << "# fit: unavailable (" << e.what() << ")\n";
    }
    os << "degree,count,ccdf\n";
    for (const auto& row : degree_histogram(values)) os << row.degree << ',' << row.count << ',' << num(row.ccdf) << '\n';
    write_output(run, o.output, os.str());
}

struct CommunitiesOpts {
    std::string input;
    double coverage = 1.0;
    std::string output = "-";
};

Partition detect(const ProofDag& dag, double coverage) {
    auto p = girvan_newman(dag);
    if (coverage < 1.0) p = top_clusters(dag, p, coverage);
    return p;
}

void cmd_communities(Run& run, const CommunitiesOpts& o) {
    if (!(o.coverage > 0.0 && o.coverage <= 1.0)) throw UsageError("--coverage must lie in (0, 1]");
    run.manifest.params = {{"input", o.input}, {"coverage", o.coverage}, {"method", "girvan-newman"}};
    const auto dag = load_graph(run, o.input);
    write_output(run, o.output, partition_to_json(dag, detect(dag, o.coverage)) + "\n");
}

struct SimulateOpts {
    std::string input;
    double eps_dep = 0.01;
    double eps_imp = 0.01;
    double prior = 0.75;
    std::string prior_mode = "field";
    Schedule schedule;
    std::string output = "-";
};

void write_diagnostics(std::ostream& os, const ChainDiagnostics& d) {
    os << "# split_half_max = " << num(d.split_half_max) << '\n'
       << "# split_half_theorem = " << num(d.split_half_theorem) << '\n'
       << "# theorem_stderr = " << num(d.theorem_stderr) << '\n'
       << "# mean_stderr = " << num(d.mean_stderr) << '\n'
       << "# acceptance_rate = " << num(d.acceptance_rate) << '\n';
}

void cmd_simulate(Run& run, const SimulateOpts& o) {
    const auto mode = prior_mode(o.prior_mode);
    const auto params = CouplingParams::from_error_rates(o.eps_dep, o.eps_imp, o.prior, mode);
    o.schedule.validate();
    run.manifest.params = {{"input", o.input},          {"eps_dep", o.eps_dep},
                           {"eps_imp", o.eps_imp},      {"beta_dep", params.beta_dep},
                           {"beta_imp", params.beta_imp}, {"prior", o.prior},
                           {"prior_mode", o.prior_mode}, {"schedule", schedule_json(o.schedule)}};
    run.manifest.seed = o.schedule.seed;
    const auto dag = load_graph(run, o.input);
    const auto summary = run_chain(dag, params, o.schedule, run.threads);

    std::ostringstream os;
    os << csv_header(run);
    os << "# mean_all = " << num(summary.mean_all) << '\n';
    if (summary.theorem) {
        const NodeIndex t = dag.theorem() ? *dag.theorem() : dag.sinks().front();
        os << "# theorem_id = " << dag.id(t) << "\n# theorem = " << num(*summary.theorem) << '\n';
    }
    os << "# mean_axioms = " << num(summary.mean_axioms) << '\n';
    write_diagnostics(os, summary.diagnostics);
    os << "node,belief\n";
    for (NodeIndex v = 0; v < dag.size(); ++v) os << csv_field(dag.id(v)) << ',' << num(summary.belief[v]) << '\n';
    write_output(run, o.output, os.str());
}

struct SweepOpts {
    std::string input;
    std::vector<double> eps{0.01, 0.02, 0.03, 0.05, 0.07, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5};
    double prior = 0.75;
    std::string prior_mode = "field";
    Schedule schedule;
    std::string output = "-";
};

void cmd_sweep(Run& run, const SweepOpts& o) {
    const auto mode = prior_mode(o.prior_mode);
    run.manifest.params = {{"input", o.input}, {"eps", o.eps}, {"prior", o.prior}, {"prior_mode", o.prior_mode},
                           {"schedule", schedule_json(o.schedule)}};
    run.manifest.seed = o.schedule.seed;
    const auto dag = load_graph(run, o.input);
    const auto result = ept_sweep(dag, o.eps, o.prior, o.schedule, mode, run.threads);
    std::ostringstream os;
    os << csv_header(run);
    os << "epsilon,beta,mean_all,theorem,axioms,theorem_stderr,split_half_max,acceptance_rate\n";
    for (const auto& r : result.rows)
        os << num(r.epsilon) << ',' << num(r.beta) << ',' << num(r.mean_all) << ',' << num(r.theorem) << ','
           << num(r.axioms) << ',' << num(r.diagnostics.theorem_stderr) << ',' << num(r.diagnostics.split_half_max)
           << ',' << num(r.diagnostics.acceptance_rate) << '\n';
    write_output(run, o.output, os.str());
}

struct PriorCurveOpts {
    std::string input;
    double eps = 0.01;
    std::vector<double> priors{0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
    std::string prior_mode = "field";
    Schedule schedule;
    std::string output = "-";
};

void cmd_prior_curve(Run& run, const PriorCurveOpts& o) {
    const auto mode = prior_mode(o.prior_mode);
    run.manifest.params = {{"input", o.input}, {"eps", o.eps}, {"priors", o.priors}, {"prior_mode", o.prior_mode},
                           {"schedule", schedule_json(o.schedule)}};
    run.manifest.seed = o.schedule.seed;
    const auto dag = load_graph(run, o.input);
    const auto rows = prior_response(dag, o.eps, o.priors, o.schedule, mode, run.threads);
    std::ostringstream os;
    os << csv_header(run);
    os << "prior,theorem,theorem_variance,mean_all,theorem_stderr,split_half_max\n";
    for (const auto& r : rows)
        os << num(r.prior) << ',' << num(r.theorem) << ',' << num(r.theorem_variance) << ',' << num(r.mean_all)
           << ',' << num(r.diagnostics.theorem_stderr) << ',' << num(r.diagnostics.split_half_max) << '\n';
    write_output(run, o.output, os.str());
}

struct GridOpts {
    std::string input;
    std::vector<double> eps_dep{0.01, 0.05, 0.1, 0.2};
    std::vector<double> eps_imp{0.001, 0.01, 0.05, 0.1, 0.2};
    double prior = 0.75;
    std::string prior_mode = "field";
    Schedule schedule;
    std::string output = "-";
};

void cmd_grid(Run& run, const GridOpts& o) {
    const auto mode = prior_mode(o.prior_mode);
    run.manifest.params = {{"input", o.input}, {"eps_dep", o.eps_dep}, {"eps_imp", o.eps_imp},
                           {"prior", o.prior}, {"prior_mode", o.prior_mode},
                           {"schedule", schedule_json(o.schedule)}};
    run.manifest.seed = o.schedule.seed;
    const auto dag = load_graph(run, o.input);
    const auto g = abductive_grid(dag, o.eps_dep, o.eps_imp, o.prior, o.schedule, mode, run.threads);
    std::ostringstream os;
    os << csv_header(run);
    os << "eps_dep,eps_imp,theorem,theorem_stderr,mean_all\n";
    for (std::size_t i = 0; i < g.eps_dep.size(); ++i)
        for (std::size_t j = 0; j < g.eps_imp.size(); ++j) {
            const auto c = g.at(i, j);
            os << num(g.eps_dep[i]) << ',' << num(g.eps_imp[j]) << ',' << num(g.theorem[c]) << ','
               << num(g.theorem_stderr[c]) << ',' << num(g.mean_all[c]) << '\n';
        }
    write_output(run, o.output, os.str());
}

struct FirewallOpts {
    std::string input;
    std::string partition;
    double coverage = 1.0;
    FirewallOptions firewall;
    Schedule schedule;
    std::string output = "-";
};

void cmd_firewall(Run& run, FirewallOpts o) {
    o.schedule.validate();
    o.firewall.seed = o.schedule.seed;
    run.manifest.params = {{"input", o.input},
                           {"partition", o.partition.empty() ? "girvan-newman" : o.partition},
                           {"coverage", o.coverage},
                           {"beta", o.firewall.beta},
                           {"n_flip", o.firewall.n_flip},
                           {"within_draws", o.firewall.within_draws},
                           {"baseline_draws", o.firewall.baseline_draws},
                           {"schedule", schedule_json(o.schedule)}};
    run.manifest.seed = o.schedule.seed;
    const auto dag = load_graph(run, o.input);
    const auto partition = o.partition.empty() ? detect(dag, o.coverage)
                                               : partition_from_json(dag, read_source(run, o.partition));
    const auto r = firewall_delta(dag, partition, o.firewall, o.schedule);
    std::ostringstream os;
    os << csv_header(run);
    os << "# delta_L1 = " << num(r.delta_L1) << "\n# delta_stderr = " << num(r.delta_stderr)
       << "\n# within_mean = " << num(r.within_mean) << "\n# baseline_mean = " << num(r.baseline_mean)
       << "\n# baseline_stderr = " << num(r.baseline_stderr) << "\n# baseline_sd = " << num(r.baseline_sd)
       << "\n# n_states = " << r.n_states
       << "\n# n_flip = " << r.n_flip << '\n';
    os << "module,size,mean_penalty,draws\n";
    for (const auto& m : r.modules)
        os << m.module << ',' << m.size << ',' << num(m.mean_penalty) << ',' << m.draws << '\n';
    write_output(run, o.output, os.str());
}

struct ExportOpts {
    std::string input;
    std::string format = "json";
    bool dot = false;
    std::string partition;
    std::string output = "-";
};

void cmd_export(Run& run, const ExportOpts& o) {
    const std::string name = o.dot ? "dot" : o.format;
    const auto format = graph_format(name);
    run.manifest.params = {{"input", o.input}, {"format", name}, {"partition", o.partition}};
    const auto dag = load_graph(run, o.input);
    std::optional<Partition> partition;
    if (!o.partition.empty()) partition = partition_from_json(dag, read_source(run, o.partition));
    write_output(run, o.output, export_graph(dag, format, partition ? &*partition : nullptr));
}

int cmd_replay(Run& run, const std::string& path) {
    const auto text = read_source(run, path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed manifest " + path + ": " + e.what());
    }
    const auto m = RunManifest::from_json(doc);
    if (!m.argv.empty() && m.argv.front() == "replay") throw Error("a manifest cannot replay a replay");
    for (const auto& [input, hash] : m.input_hashes) {
        if (input == "-") continue;
        std::ifstream f(input, std::ios::binary);
        if (!f) throw Error("file not found: " + input);
        const std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        if (fnv1a64_hex(bytes) != hash) throw Error("input changed since the manifest was written: " + input);
    }
    if (m.version != version())
        run.err << "ept-lab: warning: manifest written by version " << m.version << ", running " << version()
                << '\n';
    return dispatch(m.argv, run.in, run.out, run.err);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Proof-network topology and belief-dynamics toolkit", "ept-lab"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    Run run{in, out, err, {}, {}, 0, false, {}};
    std::function<int()> action;
    auto bind = [&](CLI::App* sub, auto fn) {
        add_common(sub, run);
        sub->callback([&, sub, fn] {
            run.manifest.command = sub->get_name();
            action = [&, fn] { return fn(), 0; };
        });
    };
    auto positional = [](CLI::App* sub, std::string& target, const char* what) {
        sub->add_option("input", target, what)->required();
    };

    IngestOpts ingest;
    auto* s = app.add_subcommand("ingest", "Build a graph from a term dump (.sexp) or an edge list (.deps)");
    positional(s, ingest.input, "Input file, or - for standard input");
    s->add_flag("--edges", ingest.edges, "Treat the input as a .deps edge list");
    s->add_option("--binder", ingest.binders, "Label of a name-binding form (repeatable; default Lambda)");
    s->add_option("-o,--output", ingest.output, "Output graph (default standard output)");
    s->add_option("--format", ingest.format, "json, dot or edges")->capture_default_str();
    bind(s, [&] { cmd_ingest(run, ingest); });

    GenOpts gen;
    s = app.add_subcommand("gen", "Generate an assembly-model network");
    s->add_option("--nodes", gen.params.n_nodes, "Number of nodes")->capture_default_str();
    s->add_option("--mean-deps", gen.params.mean_deps, "Mean dependency count")->capture_default_str();
    s->add_option("--copy-prob", gen.params.copy_prob, "Probability of copying a dependency's dependency")
        ->capture_default_str();
    s->add_option("--seed", gen.params.seed, "Random seed")->capture_default_str();
    s->add_option("-o,--output", gen.output, "Output graph (default standard output)");
    s->add_option("--format", gen.format, "json, dot or edges")->capture_default_str();
    bind(s, [&] { cmd_gen(run, gen); });

    TruncateOpts truncate;
    s = app.add_subcommand("truncate", "Keep the breadth-first neighbourhood of the theorem");
    positional(s, truncate.input, "Input graph, or -");
    s->add_option("--limit", truncate.limit, "Node budget")->capture_default_str();
    s->add_option("-o,--output", truncate.output, "Output graph");
    s->add_option("--format", truncate.format, "json, dot or edges")->capture_default_str();
    bind(s, [&] { cmd_truncate(run, truncate); });

    StatsOpts stats;
    s = app.add_subcommand("stats", "Degree histogram and distribution fit");
    positional(s, stats.input, "Input graph, or -");
    s->add_option("--fit", stats.fit, "out-degree (power law) or in-degree (exponential)")->capture_default_str();
    s->add_option("--geometric-offset", stats.offset, "Smallest in-degree included in the geometric test")
        ->capture_default_str();
    s->add_option("-o,--output", stats.output, "Output CSV");
    bind(s, [&] { cmd_stats(run, stats); });

    CommunitiesOpts comm;
    s = app.add_subcommand("communities", "Girvan-Newman modules");
    positional(s, comm.input, "Input graph, or -");
    s->add_option("--coverage", comm.coverage, "Keep the largest modules covering this node fraction")
        ->capture_default_str();
    s->add_option("-o,--output", comm.output, "Output partition JSON");
    bind(s, [&] { cmd_communities(run, comm); });

    SimulateOpts sim;
    s = app.add_subcommand("simulate", "Equilibrium beliefs under the asymmetric coupling model");
    positional(s, sim.input, "Input graph, or -");
    s->add_option("--eps-dep", sim.eps_dep, "Deductive error rate")->capture_default_str();
    s->add_option("--eps-imp", sim.eps_imp, "Abductive error rate")->capture_default_str();
    s->add_option("--prior", sim.prior, "Prior probability of truth")->capture_default_str();
    s->add_option("--prior-mode", sim.prior_mode, "field or init-only")->capture_default_str();
    add_schedule(s, sim.schedule);
    s->add_option("-o,--output", sim.output, "Output CSV");
    bind(s, [&] { cmd_simulate(run, sim); });

    SweepOpts sweep;
    s = app.add_subcommand("sweep", "Belief versus error rate with equal couplings");
    positional(s, sweep.input, "Input graph, or -");
    s->add_option("--eps", sweep.eps, "Comma-separated error rates")->delimiter(',');
    s->add_option("--prior", sweep.prior, "Prior probability of truth")->capture_default_str();
    s->add_option("--prior-mode", sweep.prior_mode, "field or init-only")->capture_default_str();
    add_schedule(s, sweep.schedule);
    s->add_option("-o,--output", sweep.output, "Output CSV");
    bind(s, [&] { cmd_sweep(run, sweep); });

    PriorCurveOpts pc;
    s = app.add_subcommand("prior-curve", "Posterior theorem belief versus prior");
    positional(s, pc.input, "Input graph, or -");
    s->add_option("--eps", pc.eps, "Error rate")->capture_default_str();
    s->add_option("--priors", pc.priors, "Comma-separated priors")->delimiter(',');
    s->add_option("--prior-mode", pc.prior_mode, "field or init-only")->capture_default_str();
    add_schedule(s, pc.schedule);
    s->add_option("-o,--output", pc.output, "Output CSV");
    bind(s, [&] { cmd_prior_curve(run, pc); });

    GridOpts grid;
    s = app.add_subcommand("grid", "Theorem belief over deductive and abductive error rates");
    positional(s, grid.input, "Input graph, or -");
    s->add_option("--eps-dep", grid.eps_dep, "Comma-separated deductive error rates")->delimiter(',');
    s->add_option("--eps-imp", grid.eps_imp, "Comma-separated abductive error rates")->delimiter(',');
    s->add_option("--prior", grid.prior, "Prior probability of truth")->capture_default_str();
    s->add_option("--prior-mode", grid.prior_mode, "field or init-only")->capture_default_str();
    add_schedule(s, grid.schedule);
    s->add_option("-o,--output", grid.output, "Output CSV");
    bind(s, [&] { cmd_grid(run, grid); });

    FirewallOpts fw;
    s = app.add_subcommand("firewall", "Within-module versus random flip penalty");
    positional(s, fw.input, "Input graph, or -");
    s->add_option("--partition", fw.partition, "Partition JSON (default: Girvan-Newman on the fly)");
    s->add_option("--coverage", fw.coverage, "Coverage for on-the-fly modules")->capture_default_str();
    s->add_option("--beta", fw.firewall.beta, "Coupling used for penalties and sampling")->capture_default_str();
    s->add_option("--n-flip", fw.firewall.n_flip, "Nodes flipped per draw")->capture_default_str();
    s->add_option("--within-draws", fw.firewall.within_draws, "Draws per module per state")->capture_default_str();
    s->add_option("--baseline-draws", fw.firewall.baseline_draws, "Random draws per state")->capture_default_str();
    add_schedule(s, fw.schedule);
    s->add_option("-o,--output", fw.output, "Output CSV");
    bind(s, [&] { cmd_firewall(run, fw); });

    ExportOpts ex;
    s = app.add_subcommand("export", "Write a graph as json, dot or edges");
    positional(s, ex.input, "Input graph, or -");
    s->add_option("--format", ex.format, "json, dot or edges")->capture_default_str();
    s->add_flag("--dot", ex.dot, "Shorthand for --format dot");
    s->add_option("--partition", ex.partition, "Partition JSON used to colour DOT nodes");
    s->add_option("-o,--output", ex.output, "Output file");
    bind(s, [&] { cmd_export(run, ex); });

    std::string replay_path;
    s = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    s->add_option("manifest", replay_path, "Manifest JSON")->required();
    s->callback([&] { action = [&] { return cmd_replay(run, replay_path); }; });

    std::vector<std::string> argv{"ept-lab"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::vector<const char*> cargv;
    for (const auto& a : argv) cargv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << version() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "ept-lab: " << e.what() << "\n\n";
        const auto subs = app.get_subcommands();
        err << (subs.empty() ? app.help() : subs.front()->help());
        return kUsage;
    }

    const auto start = std::chrono::steady_clock::now();
    run.manifest.argv = args;
    run.manifest.version = version();
    int code = kOk;
    try {
        code = action();
    } catch (const UsageError& e) {
        err << "ept-lab: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "ept-lab: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "ept-lab: " << e.what() << '\n';
        return kData;
    } catch (const nlohmann::json::exception& e) {
        err << "ept-lab: " << e.what() << '\n';
        return kData;
    }
    if (run.manifest.command.empty()) return code;  // replay

    run.manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string manifest_path =
        !run.manifest_path.empty() ? run.manifest_path
                                   : (run.primary_output.empty() ? "" : run.primary_output + ".manifest.json");
    if (!manifest_path.empty()) {
        std::ofstream f(manifest_path, std::ios::binary | std::ios::trunc);
        if (!f) {
            err << "ept-lab: cannot write manifest " << manifest_path << '\n';
            return kData;
        }
        f << run.manifest.to_json().dump(2) << '\n';
    }
    return code;
}

}  // namespace ept::cli
