// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <unistd.h>

#include "qcmdo/electrostatics.hpp"
#include "qcmdo/io.hpp"
#include "qcmdo/maxcut.hpp"
#include "qcmdo/reduction.hpp"
#include "qcmdo/solvers.hpp"
#include "support.hpp"

using namespace qcmdo;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

QuboProblem random_qubo(std::mt19937_64& rng, std::size_t p) {
    RMatrix b(static_cast<Index>(p), static_cast<Index>(p));
    for (auto& v : b.reshaped()) v = std::normal_distribution<double>()(rng);
    QuboProblem q;
    q.M = 0.5 * (b + b.transpose());
    return q;
}

QudoProblem random_qudo(std::mt19937_64& rng, int n1, int max_set) {
    QudoProblem q;
    const CMatrix b = oracle::random_matrix(n1, n1, rng);
    q.H = 0.5 * (b + b.adjoint());
    q.g = oracle::random_vector(n1, rng);
    q.f = std::normal_distribution<double>(0.0, 1.0)(rng);
    for (int i = 0; i < n1; ++i) q.domains.push_back(testing::random_domain(rng, max_set));
    return q;
}

// Criteria 1 and 2 share the random instances.
struct MixedRun {
    Outcome value, feasibility;
    double worst_value = 0.0, worst_residual = 0.0;
};

MixedRun run_mixed() {
    MixedRun r;
    std::mt19937_64 rng(20240101);
    for (int t = 0; t < 100; ++t) {
        const QcmdoProblem p = testing::random_problem(rng);
        const QudoProblem qudo = reduce(p);
        const QuboProblem qubo = assemble_qubo(qudo, EncodingPolicy::PreferBinaryExpansionElseOneHot);
        const ExhaustiveResult best = solve_exhaustive(qubo);
        const double want = testing::brute_force_minimum(p);
        const double rel = std::abs(best.value - want) / std::max(1.0, std::abs(want));
        r.worst_value = std::max(r.worst_value, rel);
        r.value.require(rel <= 1e-8, "instance " + std::to_string(t) + " differs from brute force");

        const Decoded dec = decode(qubo, best.s);
        r.feasibility.require(dec.valid, "instance " + std::to_string(t) + " decodes to an invalid state");
        const CVector x = partition(p).assemble(dec.x1, recover_continuous(qudo, dec.x1));
        const double residual = (p.F() * x - p.d()).norm() / std::max(1.0, p.d().norm());
        r.worst_residual = std::max(r.worst_residual, residual);
        r.feasibility.require(residual <= 1e-9, "instance " + std::to_string(t) + " violates Fx = d");
    }
    return r;
}

Outcome initial_gap() {
    Outcome o;
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const std::size_t p = 1 + static_cast<std::size_t>(t % 10);
        const auto [e0, e1] = lowest_two(hamiltonian_at(build_ising(random_qubo(rng, p)), 0.0));
        worst = std::max(worst, std::abs(e1 - e0 - 2.0));
    }
    o.require(worst <= 1e-10, "gap deviates from 2");
    o.detail = o.pass ? "20 programs, worst |gap - 2| = " + format_double(worst) : o.detail;
    return o;
}

Outcome maxcut_identity() {
    Outcome o;
    const auto t0 = Clock::now();
    std::vector<std::pair<int, int>> all;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) all.emplace_back(i, j);
    }
    for (std::uint64_t mask = 0; mask < 1024 && o.pass; ++mask) {
        std::vector<std::pair<int, int>> edges;
        for (std::size_t e = 0; e < all.size(); ++e) {
            if ((mask >> e) & 1U) edges.push_back(all[e]);
        }
        const Graph g(5, edges);
        const MaxCutReduction red = maxcut_reduction(g);
        for (std::uint64_t x = 0; x < 32; ++x) {
            const Bits s = bits_from_mask(x, 5);
            o.require(maxcut_energy(red, s) == -cut_value(g, s), "identity fails for subgraph " + std::to_string(mask));
        }
        const QudoProblem qudo = reduce_pde(maxcut_to_pde_instance(g));
        const ExhaustiveResult best = solve_exhaustive(assemble_qubo(qudo, EncodingPolicy::PreferBinaryExpansionElseOneHot));
        o.require(cut_value(g, best.s) == oracle::max_cut(5, edges),
                  "pipeline misses the maximum cut of subgraph " + std::to_string(mask));
    }
    const double secs = seconds_since(t0);
    o.require(secs < 60.0, "took " + format_double(secs) + " s");
    if (o.pass) {
        char buf[80];
        std::snprintf(buf, sizeof buf, "1024 subgraphs x 32 states in %.2f s", secs);
        o.detail = buf;
    }
    return o;
}

Outcome poisson_dimensions() {
    Outcome o;
    const std::array<std::array<long long, 4>, 3> want{{{2, 5, 4, 361}, {3, 13, 9, 841}, {4, 25, 16, 1521}}};
    for (const auto& [n, p, a, b] : want) {
        PoissonSpec spec;
        spec.N = static_cast<int>(n);
        spec.true_s = Bits(spec.p(), 0);
        const PoissonInstance inst = gen_poisson(spec);
        const bool ok = static_cast<long long>(spec.p()) == p && inst.pde.y.size() == a &&
                        inst.pde.J.rows() == b && inst.pde.J.cols() == p;
        o.require(ok, "N=" + std::to_string(n) + " has the wrong shape");
    }
    if (o.pass) o.detail = "N=2,3,4 give p=5,13,25; N=4 gives n2a=16, n2b=1521";
    return o;
}

Outcome noiseless_recovery() {
    Outcome o;
    int unique = 0;
    for (std::uint64_t x = 0; x < 32; ++x) {
        PoissonSpec spec;
        spec.N = 2;
        spec.true_s = bits_from_mask(x, 5);
        const PoissonInstance inst = gen_poisson(spec);
        const ExhaustiveResult best = solve_exhaustive(poisson_qubo(inst));
        o.require(std::abs(best.value) <= 1e-9, "instance " + std::to_string(x) + " has a nonzero minimum");
        if (best.is_unique) {
            ++unique;
            o.require(best.s == *spec.true_s, "instance " + std::to_string(x) + " recovers the wrong charges");
        }
    }
    if (o.pass) o.detail = "32 instances at value 0, " + std::to_string(unique) + " unique and equal to the truth";
    return o;
}

Outcome ensemble_properties() {
    Outcome o;
    EnsembleOptions all2;
    for (const auto& row : ensemble_stats(2, all2)) {
        o.require(row.min_gap && row.final_gap && *row.min_gap >= 0.0 && *row.min_gap <= *row.final_gap,
                  "N=2 instance " + std::to_string(row.instance) + " has inconsistent gaps");
    }
    for (int n : {2, 3, 4}) {
        PoissonSpec spec;
        spec.N = n;
        spec.true_s = Bits(spec.p(), 0);
        Eigen::JacobiSVD<RMatrix> svd(measurement_matrix(gen_poisson(spec)));
        svd.setThreshold(1e-10);
        o.require(svd.rank() <= n * n, "rank bound fails for N=" + std::to_string(n));
    }

    const auto t0 = Clock::now();
    EnsembleOptions sample3;
    sample3.samples = 64;
    sample3.seed = 0;
    const auto rows = ensemble_stats(3, sample3);
    const double secs = seconds_since(t0);
    double sum_far = 0.0, sum_near = 0.0;
    int far = 0, near = 0;
    for (const auto& row : rows) {
        if (row.hamming > 1) {
            sum_far += *row.min_gap;
            ++far;
        } else {
            sum_near += *row.min_gap;
            ++near;
        }
    }
    o.require(far > 0 && near > 0, "one Hamming population is empty");
    const double mean_far = far ? sum_far / far : 0.0, mean_near = near ? sum_near / near : 0.0;
    o.require(mean_far < mean_near, "mean min gap " + format_double(mean_far) + " (hamming > 1, " +
                                            std::to_string(far) + ") is not below " + format_double(mean_near) +
                                            " (hamming = 1, " + std::to_string(near) + ")");
    o.require(secs < 1800.0, "N=3 sweeps took " + format_double(secs) + " s");
    if (o.pass) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "N=3 mean min gap %.4f (hamming > 1, %d) < %.4f (hamming = 1, %d); %.0f s",
                      mean_far, far, mean_near, near, secs);
        o.detail = buf;
    }
    return o;
}

Outcome one_hot_penalty() {
    Outcome o;
    std::mt19937_64 rng(37);
    for (int t = 0; t < 50; ++t) {
        const QudoProblem qudo = random_qudo(rng, 1 + static_cast<int>(rng() % 3), 4);
        const QuboProblem q = assemble_qubo(qudo, EncodingPolicy::ForceOneHot);
        if (q.p() > 12) {
            o.require(false, "instance exceeds 12 bits");
            continue;
        }
        const ExhaustiveResult best = solve_exhaustive(q);
        o.require(decode(q, best.s).valid, "instance " + std::to_string(t) + " minimum is not one-hot");
        const double want = solve_qudo_exhaustive(qudo).value;
        o.require(std::abs(best.value - want) <= 1e-8 * std::max(1.0, std::abs(want)),
                  "instance " + std::to_string(t) + " minimum differs");
    }
    if (o.pass) o.detail = "50 instances";
    return o;
}

Outcome diagonal_metric() {
    Outcome o;
    std::mt19937_64 rng(101);
    for (int t = 0; t < 20; ++t) {
        const Index n1 = 1 + static_cast<Index>(rng() % 3);
        const Index n2a = n1 + static_cast<Index>(rng() % 3);
        const Index n2b = n2a + 2 + static_cast<Index>(rng() % 4);
        PdeInstance inst;
        inst.E = LinearOperator::dense(oracle::random_matrix(n2b, n2b, rng) + 4.0 * CMatrix::Identity(n2b, n2b));
        inst.K = oracle::random_matrix(n2b, n2a, rng);
        inst.J = oracle::random_matrix(n2b, n1, rng);
        inst.f = oracle::random_vector(n2b, rng);
        inst.y = oracle::random_vector(n2a, rng);
        inst.G = CMatrix::Identity(n2a, n2a);
        for (Index i = 0; i < n1; ++i) inst.domains.push_back(testing::random_domain(rng, 4));
        RVector dbar(n1);
        for (auto& v : dbar) v = 0.5 + std::uniform_real_distribution<double>()(rng);
        inst.G = design_metric_for_diagonal_H(inst, dbar);
        const QudoProblem q = reduce_pde(inst);
        CMatrix off = q.H;
        off.diagonal().setZero();
        const double hmax = q.H.cwiseAbs().maxCoeff();
        o.require(off.cwiseAbs().maxCoeff() <= 1e-8 * hmax, "instance " + std::to_string(t) + " H is not diagonal");
        const double sep = solve_separable(q).value, exh = solve_qudo_exhaustive(q).value;
        o.require(std::abs(sep - exh) <= 1e-8 * std::max(1.0, std::abs(exh)),
                  "instance " + std::to_string(t) + " separable minimum differs");
    }
    if (o.pass) o.detail = "20 instances";
    return o;
}

Outcome round_trips() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / ("qcmdo_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::vector<fs::path> problems, qubos;
    auto save = [&](const std::string& name, const std::string& text, std::vector<fs::path>& list) {
        io::write_file_atomic((dir / name).string(), text);
        list.push_back(dir / name);
    };

    for (std::uint64_t x : {0U, 11U, 22U, 31U}) {
        PoissonSpec spec;
        spec.N = 2;
        spec.true_s = bits_from_mask(x, 5);
        const PoissonInstance inst = gen_poisson(spec);
        save("poisson_" + std::to_string(x) + ".qubo", io::format_qubo(poisson_qubo(inst), {"poisson N=2"}), qubos);
        PdeInstance pde = inst.pde;
        pde.E = LinearOperator::spectral(CVector::Ones(pde.n2b()));
        pde.K = pde.R->adjoint();
        pde.R.reset();
        save("poisson_" + std::to_string(x) + ".json", io::format_problem(build_qcmdo_from_pde(pde)), problems);
    }
    for (const auto& [name, text] : {std::pair<std::string, std::string>{"triangle", "3 3\n1 2\n2 3\n1 3\n"},
                                     {"square", "4 4\n1 2\n2 3\n3 4\n4 1\n"},
                                     {"star", "5 4\n1 2\n1 3\n1 4\n1 5\n"}}) {
        const Graph g = parse_graph(text);
        save(name + ".qubo", io::format_qubo(maxcut_to_qubo(g).first), qubos);
        save(name + ".json", io::format_problem(build_qcmdo_from_pde(maxcut_to_pde_instance(g))), problems);
    }
    std::mt19937_64 rng(17);
    for (int t = 0; t < 4; ++t) {
        const QcmdoProblem p = testing::random_problem(rng);
        save("mixed_" + std::to_string(t) + ".json", io::format_problem(p), problems);
        QuboProblem q = assemble_qubo(reduce(p), EncodingPolicy::ForceOneHot);
        save("mixed_" + std::to_string(t) + ".qubo", io::format_qubo(q), qubos);
    }

    for (const auto& path : problems) {
        const std::string text = io::read_file(path.string());
        o.require(io::format_problem(io::parse_problem(text)) == text, path.filename().string() + " changed");
    }
    for (const auto& path : qubos) {
        const std::string text = io::read_file(path.string());
        const io::QuboFile file = io::parse_qubo(text);
        o.require(io::format_qubo(file.qubo, file.comments) == text, path.filename().string() + " changed");
    }
    fs::remove_all(dir);
    if (o.pass) {
        o.detail = std::to_string(problems.size()) + " problem files and " + std::to_string(qubos.size()) +
                   " qubo files unchanged";
    }
    return o;
}

bool report(int id, const std::string& name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %d %s: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main() {
    bool ok = true;
    MixedRun mixed;
    try {
        mixed = run_mixed();
    } catch (const std::exception& e) {
        mixed.value.require(false, std::string("exception: ") + e.what());
        mixed.feasibility.require(false, std::string("exception: ") + e.what());
    }
    if (mixed.value.pass) mixed.value.detail = "100 instances, worst relative error " + format_double(mixed.worst_value);
    if (mixed.feasibility.pass) mixed.feasibility.detail = "worst scaled residual " + format_double(mixed.worst_residual);
    ok &= report(1, "value preservation", [&] { return mixed.value; });
    ok &= report(2, "constraint feasibility", [&] { return mixed.feasibility; });
    ok &= report(3, "initial gap", initial_gap);
    ok &= report(4, "max-cut identity", maxcut_identity);
    ok &= report(5, "poisson dimensions", poisson_dimensions);
    ok &= report(6, "noiseless recovery", noiseless_recovery);
    ok &= report(7, "ensemble properties", ensemble_properties);
    ok &= report(8, "one-hot penalty", one_hot_penalty);
    ok &= report(9, "diagonal metric", diagonal_metric);
    ok &= report(10, "format round trips", round_trips);
    return ok ? 0 : 1;
}
