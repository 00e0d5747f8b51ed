// Command-line front end: dataset ingestion, dependence measurement, the
// chi-squared independence test, conditional dependence, variable selection
// and the simulation lab. Reports are JSON on stdout (CSV for power curves),
// human-readable summaries go to stderr.
//
// Exit codes: 0 success, 1 degenerate input, 2 usage error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "nnpsi/conditional.hpp"
#include "nnpsi/dataset.hpp"
#include "nnpsi/independence.hpp"
#include "nnpsi/simlab.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct InputOptions {
    std::string input;
    std::string response;
    std::string covariates;   // comma separated, empty = all
    std::string distances;    // distance-matrix file
    bool grid = false;
    bool standardize_flag = false;
};

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

void add_input_flags(CLI::App* cmd, InputOptions& opt, bool with_standardize = true) {
    cmd->add_option("--input", opt.input, "input CSV file")->required();
    cmd->add_option("--response", opt.response, "response column name")->required();
    cmd->add_option("--covariates", opt.covariates,
                    "comma-separated covariate columns (default: all others)");
    cmd->add_option("--distances", opt.distances,
                    "precomputed distance-matrix CSV (covariate columns ignored)");
    cmd->add_flag("--grid", opt.grid, "treat covariate columns as function samples on a grid");
    if (with_standardize) {
        cmd->add_flag("--standardize", opt.standardize_flag,
                      "standardize euclidean coordinates before distances");
    }
}

struct LoadedData {
    nnpsi::PointCloud x;
    nnpsi::LabelVector y;
};

LoadedData load(const InputOptions& opt) {
    if (!opt.distances.empty()) {
        nnpsi::PointCloud x = nnpsi::parse_distance_matrix(opt.distances);
        nnpsi::LabelVector y = nnpsi::parse_labels(opt.input, opt.response);
        if (static_cast<int>(y.codes.size()) != x.size()) {
            throw std::invalid_argument("distance matrix size differs from label count");
        }
        return LoadedData{std::move(x), std::move(y)};
    }
    nnpsi::Dataset ds =
        nnpsi::parse_dataset(opt.input, opt.response, split_names(opt.covariates), opt.grid);
    if (opt.standardize_flag && ds.x.backend() == nnpsi::PointCloud::Backend::Euclidean) {
        ds.x = nnpsi::standardize(ds.x);
    }
    return LoadedData{std::move(ds.x), std::move(ds.y)};
}

json base_report(const std::string& command, int n, int K,
                 const std::vector<std::string>& warnings) {
    json j;
    j["version"] = kVersion;
    j["command"] = command;
    j["n"] = n;
    j["K"] = K;
    j["warnings"] = warnings;
    return j;
}

void emit(const json& j, const std::string& summary) {
    std::cout << j.dump(2) << "\n";
    std::cerr << summary << "\n";
}

int run_psi(const InputOptions& opt) {
    const LoadedData data = load(opt);
    const nnpsi::NeighborGraph g = nnpsi::build_neighbor_graph(data.x);
    const nnpsi::ContingencyCounts c = nnpsi::contingency(data.y, g);
    const nnpsi::PsiResult r = nnpsi::psi_hat(c);
    std::vector<std::string> warnings;
    if (r.dropped_levels) warnings.push_back("dropped empty response levels");
    if (g.had_ties) warnings.push_back("exact distance ties were broken by smallest index");
    json j = base_report("psi", data.x.size(), r.K_used, warnings);
    j["psi_hat"] = r.value;
    j["w_n"] = g.mutual_fraction();
    j["l_n"] = g.max_in_degree();
    std::ostringstream os;
    os << "psi_hat = " << r.value << "  (n = " << data.x.size() << ", K = " << r.K_used << ")";
    emit(j, os.str());
    return 0;
}

int run_test(const InputOptions& opt) {
    const LoadedData data = load(opt);
    const nnpsi::NeighborGraph g = nnpsi::build_neighbor_graph(data.x);
    const nnpsi::TestReport rep = nnpsi::independence_statistic(nnpsi::contingency(data.y, g), g);
    json j = base_report("test", rep.n, rep.K, rep.warnings);
    j["statistic"] = rep.statistic;
    j["df"] = rep.df;
    j["p_value"] = rep.p_value;
    j["psi_hat"] = rep.psi_hat;
    j["w_n"] = rep.w_n;
    j["w_n_prime"] = rep.w_n_prime;
    j["l_n"] = rep.l_n;
    std::ostringstream os;
    os << "I_n = " << rep.statistic << ", df = " << rep.df << ", p = " << rep.p_value;
    emit(j, os.str());
    return 0;
}

int run_cond(const InputOptions& opt, const std::string& given) {
    const std::vector<std::string> zc = split_names(opt.covariates);
    const std::vector<std::string> xc = split_names(given);
    if (zc.empty() || xc.empty()) {
        throw std::invalid_argument("cond requires --covariates (Z) and --given (X) column lists");
    }
    nnpsi::Dataset dz = nnpsi::parse_dataset(opt.input, opt.response, zc, opt.grid);
    nnpsi::Dataset dx = nnpsi::parse_dataset(opt.input, opt.response, xc, opt.grid);
    if (opt.standardize_flag) {
        dz.x = nnpsi::standardize(dz.x);
        dx.x = nnpsi::standardize(dx.x);
    }
    const double v = nnpsi::psi_conditional_hat(dx.x, dz.x, dz.y);
    json j = base_report("cond", dz.x.size(), dz.y.K, {});
    j["psi_conditional"] = v;
    std::ostringstream os;
    os << "psi(Z,Y|X) = " << v;
    emit(j, os.str());
    return 0;
}

int run_select(const InputOptions& opt, int max_steps) {
    if (!opt.distances.empty()) {
        throw std::invalid_argument("select works on covariate columns, not a distance matrix");
    }
    nnpsi::Dataset ds =
        nnpsi::parse_dataset(opt.input, opt.response, split_names(opt.covariates), false);
    std::vector<nnpsi::PointCloud> columns;
    const int n = ds.x.size();
    const int d = ds.x.dim();
    for (int k = 0; k < d; ++k) {
        std::vector<double> col(n);
        for (int i = 0; i < n; ++i) col[i] = ds.x.row(i)[k];
        nnpsi::PointCloud c = nnpsi::PointCloud::euclidean(n, 1, std::move(col));
        columns.push_back(opt.standardize_flag ? nnpsi::standardize(c) : std::move(c));
    }
    const nnpsi::SelectionTrace trace = nnpsi::select_variables(columns, ds.y, max_steps);
    json j = base_report("select", n, ds.y.K, trace.warnings);
    json chosen = json::array();
    for (int idx : trace.chosen) chosen.push_back(ds.covariate_names[idx]);
    j["chosen"] = chosen;
    json indices = json::array();
    for (int idx : trace.chosen) indices.push_back(idx + 1);
    j["chosen_indices"] = indices;
    j["scores"] = trace.scores;
    switch (trace.stopped_because) {
        case nnpsi::SelectionTrace::Stop::NonpositiveScore:
            j["stopped_because"] = "nonpositive_score";
            break;
        case nnpsi::SelectionTrace::Stop::Exhausted:
            j["stopped_because"] = "exhausted";
            break;
        case nnpsi::SelectionTrace::Stop::MaxSteps:
            j["stopped_because"] = "max_steps";
            break;
    }
    std::ostringstream os;
    os << "selected " << trace.chosen.size() << " variable(s)";
    emit(j, os.str());
    return 0;
}

int run_simulate(const std::string& setting, int n, int grid, int reps,
                 const std::string& lambdas, double alpha, std::uint64_t seed) {
    nnpsi::SimSetting s;
    s.kind = nnpsi::parse_setting(setting);
    s.n = n;
    s.grid = grid;
    std::vector<double> lams;
    for (const std::string& tok : split_names(lambdas)) lams.push_back(std::stod(tok));
    if (lams.empty()) lams = {0.0, 0.25, 0.5, 0.75, 1.0};
    const nnpsi::PowerCurve pc = nnpsi::power_curve(s, lams, reps, alpha, seed);
    std::cout << nnpsi::power_curve_csv(pc);
    std::ostringstream os;
    os << "power curve for '" << pc.setting << "', n = " << pc.n << ", reps = " << pc.reps;
    if (pc.degenerate > 0) os << " (" << pc.degenerate << " degenerate replications)";
    std::cerr << os.str() << "\n";
    return 0;
}

int run_calibrate(int n, int K, int reps, double alpha, std::uint64_t seed) {
    const nnpsi::CalibrationReport rep = nnpsi::null_calibration(n, K, reps, alpha, seed);
    std::vector<std::string> warnings;
    if (rep.degenerate > 0) {
        warnings.push_back(std::to_string(rep.degenerate) + " degenerate replications");
    }
    json j = base_report("calibrate", rep.n, rep.K, warnings);
    j["reps"] = rep.reps;
    j["alpha"] = rep.alpha;
    j["df"] = rep.df;
    j["rejection_rate"] = rep.rejection_rate;
    j["ks_distance"] = rep.ks_distance;
    std::ostringstream os;
    os << "null calibration: rejection rate " << rep.rejection_rate << ", KS distance "
       << rep.ks_distance;
    emit(j, os.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nearest-neighbor dependence coefficient and independence test"};
    app.require_subcommand(1);

    int threads = 0;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "worker threads (default: all cores)");
    app.add_option("--seed", seed, "random seed for all stochastic commands");

    InputOptions psi_opt, test_opt, cond_opt, select_opt;
    std::string given;
    int max_steps = -1;

    CLI::App* psi_cmd = app.add_subcommand("psi", "dependence coefficient psi_hat");
    psi_cmd->fallthrough();
    add_input_flags(psi_cmd, psi_opt);
    CLI::App* test_cmd = app.add_subcommand("test", "chi-squared independence test");
    test_cmd->fallthrough();
    add_input_flags(test_cmd, test_opt);
    CLI::App* cond_cmd = app.add_subcommand("cond", "conditional dependence psi(Z,Y|X)");
    cond_cmd->fallthrough();
    add_input_flags(cond_cmd, cond_opt);
    cond_cmd->get_option("--covariates")->required();
    cond_cmd->add_option("--given", given, "conditioning (X) column list")->required();
    CLI::App* select_cmd = app.add_subcommand("select", "greedy variable selection");
    select_cmd->fallthrough();
    add_input_flags(select_cmd, select_opt);
    select_cmd->add_option("--max-steps", max_steps, "cap on the number of selections");

    std::string setting = "sin", lambdas;
    int sim_n = 100, sim_grid = 100, reps = 500;
    double alpha = 0.05;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "power curve over a lambda grid (CSV)");
    sim_cmd->fallthrough();
    sim_cmd->add_option("--setting", setting, "sin | max | mixture | degree");
    sim_cmd->add_option("--n", sim_n, "sample size per replication");
    sim_cmd->add_option("--grid-points", sim_grid, "grid size for functional settings");
    sim_cmd->add_option("--reps", reps, "replications per lambda");
    sim_cmd->add_option("--lambdas", lambdas, "comma-separated mixing levels");
    sim_cmd->add_option("--alpha", alpha, "test level");

    int cal_n = 200, cal_k = 3, cal_reps = 2000;
    double cal_alpha = 0.05;
    CLI::App* cal_cmd = app.add_subcommand("calibrate", "null-distribution KS report (JSON)");
    cal_cmd->fallthrough();
    cal_cmd->add_option("--n", cal_n, "sample size per replication");
    cal_cmd->add_option("--k", cal_k, "number of response levels");
    cal_cmd->add_option("--reps", cal_reps, "replications");
    cal_cmd->add_option("--alpha", cal_alpha, "test level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2, --help exits 0
    }

#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    try {
        if (psi_cmd->parsed()) return run_psi(psi_opt);
        if (test_cmd->parsed()) return run_test(test_opt);
        if (cond_cmd->parsed()) return run_cond(cond_opt, given);
        if (select_cmd->parsed()) return run_select(select_opt, max_steps);
        if (sim_cmd->parsed())
            return run_simulate(setting, sim_n, sim_grid, reps, lambdas, alpha, seed);
        if (cal_cmd->parsed()) return run_calibrate(cal_n, cal_k, cal_reps, cal_alpha, seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
