#include "qcmdo/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcmdo/electrostatics.hpp"
#include "qcmdo/io.hpp"
#include "qcmdo/maxcut.hpp"
#include "qcmdo/solvers.hpp"

namespace qcmdo {

namespace {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnboundedBelow:
        case ErrorCode::UnboundedLinear: return kExitUnbounded;
        case ErrorCode::QubitCapExceeded: return kExitCap;
        case ErrorCode::SolverFailure:
        case ErrorCode::EigensolverFailure: return kExitFailure;
        default: return kExitInput;
    }
}

/// Both qubit caps, optionally overridden from the environment.
struct Caps {
    std::size_t spectral = kDefaultSpectralCap;
    std::size_t exhaustive = kDefaultExhaustiveCap;
};

Caps read_caps() {
    Caps caps;
    if (const char* env = std::getenv("QCMDO_QUBIT_CAP")) {
        const std::string text(env);
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos || text.size() > 3) {
            throw Error(ErrorCode::InvalidArgument, "QCMDO_QUBIT_CAP must be a small non-negative integer");
        }
        caps.spectral = caps.exhaustive = std::stoul(text);
    }
    return caps;
}

std::string sidecar_path(const std::string& qubo_path) {
    return fs::path(qubo_path).replace_extension(".enc").string();
}

std::string complex_list(const CVector& v) {
    std::string s = "[";
    for (Index i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += "[" + format_double(v(i).real()) + ", " + format_double(v(i).imag()) + "]";
    }
    return s + "]";
}

QuboProblem load_qubo_with_sidecar(const std::string& path) {
    QuboProblem qubo = io::parse_qubo(io::read_file(path)).qubo;
    const std::string enc = sidecar_path(path);
    if (fs::exists(enc)) io::parse_encodings(io::read_file(enc), qubo);
    return qubo;
}

void write_qubo_pair(const std::string& path, const QuboProblem& qubo,
                     const std::vector<std::string>& comments = {}) {
    io::write_file_atomic(path, io::format_qubo(qubo, comments));
    io::write_file_atomic(sidecar_path(path), io::format_encodings(qubo));
}

struct ReduceArgs {
    std::string input, output;
    std::string policy = "prefer-binary";
    bool report = false;
};

int cmd_reduce(const ReduceArgs& a, bool quiet, std::ostream& out, std::ostream& err) {
    const auto start = std::chrono::steady_clock::now();
    const QcmdoProblem problem = io::parse_problem(io::read_file(a.input));
    const ValidationReport report = validate(problem);
    if (!report.ok()) {
        err << "invalid problem: " << report.summary() << '\n';
        return kExitInput;
    }
    const QudoProblem qudo = reduce(problem);
    const QuboProblem qubo = assemble_qubo(qudo, a.policy == "one-hot" ? EncodingPolicy::ForceOneHot
                                                                         : EncodingPolicy::PreferBinaryExpansionElseOneHot);
    write_qubo_pair(a.output, qubo);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (a.report) {
        nlohmann::ordered_json j;
        j["n1"] = problem.n_discrete();
        j["n2"] = problem.n_continuous();
        j["m"] = problem.m();
        j["p"] = qubo.p();
        j["Lambda"] = qubo.p() ? build_ising(qubo).lambda : 1.0;
        if (qubo.penalty) j["lambda"] = qubo.penalty->lambda;
        j["seconds"] = seconds;
        out << j.dump(2) << '\n';
    } else if (!quiet) {
        out << "p=" << qubo.p() << " n1=" << problem.n_discrete() << " n2=" << problem.n_continuous()
            << " m=" << problem.m() << '\n';
    }
    return kExitOk;
}

struct SolveArgs {
    std::string input;
    std::string method = "exhaustive";
    std::uint64_t seed = 0;
    int sweeps = 200;
    int restarts = 10;
    std::size_t bottom = 0;
};

void print_decoded(const QuboProblem& qubo, const Bits& s, std::ostream& out) {
    if (qubo.encodings.empty()) return;
    const Decoded d = decode(qubo, s);
    out << "x1=" << complex_list(d.x1) << '\n';
    if (!d.valid) out << "valid=false\n";
}

int cmd_solve(const SolveArgs& a, const Caps& caps, std::ostream& out) {
    const QuboProblem qubo = load_qubo_with_sidecar(a.input);
    if (a.method == "sa") {
        if (qubo.p() > 62) throw Error(ErrorCode::QubitCapExceeded, "too many variables");
        const SaResult r = solve_sa(qubo, SaSchedule::automatic(qubo, a.sweeps, a.restarts, a.seed));
        out << "state=" << bits_to_string(r.s) << "\nvalue=" << format_double(r.value) << '\n';
        print_decoded(qubo, r.s, out);
        return kExitOk;
    }
    if (a.bottom > 0) {
        const auto states = classical_bottom_states(qubo, a.bottom, caps.exhaustive);
        for (const auto& st : states) {
            out << "state=" << bits_to_string(st.s) << " value=" << format_double(st.value) << '\n';
        }
        if (!states.empty()) print_decoded(qubo, states.front().s, out);
        return kExitOk;
    }
    const ExhaustiveResult r = solve_exhaustive(qubo, caps.exhaustive);
    out << "state=" << bits_to_string(r.s) << "\nvalue=" << format_double(r.value)
        << "\nunique=" << (r.is_unique ? "true" : "false") << '\n';
    print_decoded(qubo, r.s, out);
    return kExitOk;
}

struct GapsArgs {
    std::string input, csv;
    int grid = 101;
    bool refine = true;
};

int cmd_gaps(const GapsArgs& a, const Caps& caps, bool quiet, std::ostream& out) {
    const QuboProblem qubo = io::parse_qubo(io::read_file(a.input)).qubo;
    SweepOptions opts;
    opts.grid = a.grid;
    opts.refine = a.refine;
    opts.qubit_cap = caps.spectral;
    if (qubo.p() > caps.spectral) {
        throw Error(ErrorCode::QubitCapExceeded, std::to_string(qubo.p()) + " qubits exceeds the cap of " +
                                                         std::to_string(caps.spectral));
    }
    const GapSweep sweep = sweep_gaps(build_ising(qubo), opts);
    if (!a.csv.empty()) io::write_file_atomic(a.csv, io::gap_csv(sweep));
    if (!quiet) {
        out << "min_gap=" << format_double(sweep.min_gap) << " at w=" << format_double(sweep.argmin_w)
            << ", final_gap=" << format_double(sweep.final_gap) << '\n';
    }
    return kExitOk;
}

struct GenArgs {
    int N = 2;
    std::string true_s;
    std::optional<std::uint64_t> seed;
    bool all = false;
    std::string stem;
    std::string out_dir = ".";
    std::string field;
    bool problem = false;
    std::string graph;
};

/// Equivalent general problem of a Poisson instance with E = I and K^H = R.
QcmdoProblem poisson_problem(const PoissonInstance& inst) {
    PdeInstance pde = inst.pde;
    pde.E = LinearOperator::spectral(CVector::Ones(pde.n2b()));
    pde.K = pde.R->adjoint();
    pde.R.reset();
    return build_qcmdo_from_pde(pde);
}

void write_poisson(const PoissonInstance& inst, const std::string& stem, bool with_problem) {
    write_qubo_pair(stem + ".qubo", poisson_qubo(inst));
    io::write_file_atomic(stem + ".labels", io::format_labels(inst.spec.N, *inst.spec.true_s));
    if (with_problem) io::write_file_atomic(stem + ".json", io::format_problem(poisson_problem(inst)));
}

int cmd_gen_poisson(const GenArgs& a, bool quiet, std::ostream& out) {
    PoissonSpec spec{a.N, std::nullopt};
    if (a.N < 2) throw Error(ErrorCode::InvalidArgument, "--n must be at least 2");
    if (!quiet) out << "p=" << spec.p() << " n2a=" << spec.n2a() << " n2b=" << spec.n2b() << '\n';

    if (a.all) {
        if (spec.p() > 20) throw Error(ErrorCode::QubitCapExceeded, "--all-instances needs p <= 20");
        fs::create_directories(a.out_dir);
        const std::uint64_t total = std::uint64_t{1} << spec.p();
        for (std::uint64_t i = 0; i < total; ++i) {
            spec.true_s = bits_from_mask(i, spec.p());
            const std::string stem =
                    (fs::path(a.out_dir) / ("poisson_n" + std::to_string(a.N) + "_" + std::to_string(i))).string();
            write_poisson(gen_poisson(spec), stem, a.problem);
        }
        if (!quiet) out << "instances=" << total << '\n';
        return kExitOk;
    }

    if (!a.true_s.empty()) {
        spec.true_s = bits_from_string(a.true_s);
    } else {
        spec.true_s = sample_configuration(spec.p(), a.seed.value_or(0), 0);
    }
    const PoissonInstance inst = gen_poisson(spec);
    const std::string stem = a.stem.empty() ? "poisson_n" + std::to_string(a.N) : a.stem;
    write_poisson(inst, stem, a.problem);
    if (!a.field.empty()) io::write_file_atomic(a.field, field_csv(potential_field(inst, *spec.true_s)));
    if (!quiet) out << "true_s=" << bits_to_string(*spec.true_s) << '\n';
    return kExitOk;
}

int cmd_gen_maxcut(const GenArgs& a, bool quiet, std::ostream& out) {
    const Graph g = parse_graph(io::read_file(a.graph));
    const auto [qubo, to_cut] = maxcut_to_qubo(g);
    const std::string stem = a.stem.empty() ? fs::path(a.graph).replace_extension().string() : a.stem;
    write_qubo_pair(stem + ".qubo", qubo);
    if (a.problem) io::write_file_atomic(stem + ".json", io::format_problem(build_qcmdo_from_pde(maxcut_to_pde_instance(g))));
    if (!quiet) {
        out << "vertices=" << g.vertices() << " edges=" << g.edges().size() << " p=" << qubo.p()
            << " cut=" << format_double(to_cut.scale) << "*(value-" << format_double(to_cut.offset) << ")\n";
    }
    return kExitOk;
}

struct EnsembleArgs {
    int N = 2;
    bool all = false;
    std::optional<std::size_t> samples;
    std::uint64_t seed = 0;
    std::string csv;
    bool classical_only = false;
    unsigned threads = 0;
    int grid = 101;
};

int cmd_ensemble(const EnsembleArgs& a, const Caps& caps, bool quiet, std::ostream& out) {
    EnsembleOptions opts;
    if (!a.all) {
        if (!a.samples) throw Error(ErrorCode::InvalidArgument, "pass --all or --samples");
        opts.samples = a.samples;
    }
    opts.seed = a.seed;
    opts.classical_only = a.classical_only;
    opts.threads = a.threads;
    opts.sweep.grid = a.grid;
    opts.sweep.qubit_cap = caps.spectral;
    const auto rows = ensemble_stats(a.N, opts);
    const std::string csv = ensemble_csv(rows);
    if (a.csv.empty()) {
        out << csv;
    } else {
        io::write_file_atomic(a.csv, csv);
        if (!quiet) out << "instances=" << rows.size() << '\n';
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mixed discrete optimization to QUBO and annealing-gap toolkit"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("--quiet", quiet, "Suppress summaries");

    ReduceArgs ra;
    auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a problem file to a QUBO file");
    reduce_cmd->add_option("input", ra.input, "Problem file")->required();
    reduce_cmd->add_option("-o,--out", ra.output, "QUBO file")->required();
    reduce_cmd->add_option("--policy", ra.policy, "Discrete encoding")
            ->check(CLI::IsMember({"prefer-binary", "one-hot"}));
    reduce_cmd->add_flag("--report", ra.report, "Print a JSON report");

    SolveArgs sa;
    auto* solve_cmd = app.add_subcommand("solve", "Minimize a QUBO file");
    solve_cmd->add_option("input", sa.input, "QUBO file")->required();
    solve_cmd->add_option("--method", sa.method)->check(CLI::IsMember({"exhaustive", "sa"}));
    solve_cmd->add_option("--seed", sa.seed);
    solve_cmd->add_option("--sweeps", sa.sweeps)->check(CLI::PositiveNumber);
    solve_cmd->add_option("--restarts", sa.restarts)->check(CLI::PositiveNumber);
    solve_cmd->add_option("--bottom", sa.bottom, "Print the k lowest states")->check(CLI::PositiveNumber);

    GapsArgs ga;
    auto* gaps_cmd = app.add_subcommand("gaps", "Sweep the annealing gap of a QUBO file");
    gaps_cmd->add_option("input", ga.input, "QUBO file")->required();
    gaps_cmd->add_option("--grid", ga.grid)->check(CLI::Range(2, 100000));
    gaps_cmd->add_flag("--refine,!--no-refine", ga.refine);
    gaps_cmd->add_option("--out", ga.csv, "Gap CSV");

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate example instances");
    gen_cmd->require_subcommand(1);
    auto* poisson_cmd = gen_cmd->add_subcommand("poisson", "Charge reconstruction instances");
    poisson_cmd->add_option("--n", gen.N)->required();
    auto* true_opt = poisson_cmd->add_option("--true-s", gen.true_s, "Charge bitstring");
    auto* seed_opt = poisson_cmd->add_option("--seed", gen.seed, "Sample the charges");
    auto* all_opt = poisson_cmd->add_flag("--all-instances", gen.all, "Every charge configuration");
    true_opt->excludes(seed_opt)->excludes(all_opt);
    seed_opt->excludes(all_opt);
    poisson_cmd->add_option("--out", gen.stem, "Output stem");
    poisson_cmd->add_option("--out-dir", gen.out_dir, "Directory for --all-instances");
    poisson_cmd->add_option("--field", gen.field, "Potential field CSV");
    poisson_cmd->add_flag("--problem", gen.problem, "Also write the problem file");
    auto* maxcut_cmd = gen_cmd->add_subcommand("maxcut", "Max-Cut QUBO from an edge list");
    maxcut_cmd->add_option("--graph", gen.graph)->required();
    maxcut_cmd->add_option("--out", gen.stem, "Output stem");
    maxcut_cmd->add_flag("--problem", gen.problem, "Also write the problem file");

    EnsembleArgs ea;
    auto* ens_cmd = app.add_subcommand("ensemble", "Gap and Hamming statistics of charge instances");
    ens_cmd->add_option("--n", ea.N)->required();
    auto* ens_all = ens_cmd->add_flag("--all", ea.all);
    auto* ens_samples = ens_cmd->add_option("--samples", ea.samples);
    ens_all->excludes(ens_samples);
    ens_cmd->add_option("--seed", ea.seed);
    ens_cmd->add_option("--out", ea.csv, "Ensemble CSV");
    ens_cmd->add_flag("--classical-only", ea.classical_only);
    ens_cmd->add_option("--threads", ea.threads);
    ens_cmd->add_option("--grid", ea.grid)->check(CLI::Range(2, 100000));

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.push_back("qcmdo");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        const Caps caps = read_caps();
        if (*reduce_cmd) return cmd_reduce(ra, quiet, out, err);
        if (*solve_cmd) return cmd_solve(sa, caps, out);
        if (*gaps_cmd) return cmd_gaps(ga, caps, quiet, out);
        if (*poisson_cmd) return cmd_gen_poisson(gen, quiet, out);
        if (*maxcut_cmd) return cmd_gen_maxcut(gen, quiet, out);
        if (*ens_cmd) return cmd_ensemble(ea, caps, quiet, out);
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitInput;
}

}  // namespace qcmdo
