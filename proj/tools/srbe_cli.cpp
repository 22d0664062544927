// Command-line front end: reproduce the worked example and simulation study,
// analyze user datasets, run pairwise MSEM comparisons and Monte Carlo
// experiments. Emits CSV tables, SVG charts and a JSON run manifest.

#include "srbe/srbe.hpp"
#include "srbe/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20230815;

struct OutputSink {
    fs::path dir;
    std::vector<std::string> written;

    explicit OutputSink(const std::string& out_dir) : dir(out_dir) {
        fs::create_directories(dir);
    }

    void write(const std::string& name, const std::string& bytes) {
        const fs::path path = dir / name;
        srbe::write_file_atomic(path, bytes);
        written.push_back(path.string());
    }
};

std::string hash_config(const std::string& canonical) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(srbe::fnv1a64(canonical)));
    return buf;
}

void finish(OutputSink& sink, const std::string& command, const std::string& config,
            std::uint64_t seed, std::chrono::steady_clock::time_point start,
            long long resamples = -1) {
    srbe::RunManifest manifest;
    manifest.command = command;
    manifest.config_hash = hash_config(config);
    manifest.seed = seed;
    manifest.version = srbe::kVersion;
    manifest.outputs = sink.written;
    manifest.timing_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    manifest.resamples = resamples;
    srbe::write_manifest(sink.dir / "manifest.json", manifest);
}

std::vector<double> parse_grid(const std::string& text) {
    // "start:stop:step" inclusive of stop up to rounding.
    std::vector<double> grid;
    double start = 0.1, stop = 0.9, step = 0.1;
    if (!text.empty()) {
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
            throw srbe::ValidationError("--grid expects start:stop:step");
    }
    if (!(step > 0.0)) throw srbe::ValidationError("--grid step must be positive");
    for (double v = start; v <= stop + 1e-12; v += step) grid.push_back(v);
    if (grid.empty()) throw srbe::EmptyGrid("--grid produced no points");
    return grid;
}

srbe::RestrictionSystem load_restriction_json(const std::string& path) {
    json j = json::parse(srbe::read_file(path));
    srbe::RestrictionSystem rs;
    const auto& rows = j.at("R");
    const auto q = static_cast<srbe::Index>(rows.size());
    const auto l = static_cast<srbe::Index>(rows.at(0).size());
    rs.R.resize(q, l);
    for (srbe::Index i = 0; i < q; ++i)
        for (srbe::Index c = 0; c < l; ++c) rs.R(i, c) = rows.at(i).at(c).get<double>();
    rs.g.resize(q);
    for (srbe::Index i = 0; i < q; ++i) rs.g[i] = j.at("g").at(i).get<double>();
    if (j.contains("r")) {
        rs.r.resize(q);
        for (srbe::Index i = 0; i < q; ++i) rs.r[i] = j.at("r").at(i).get<double>();
    }
    if (j.contains("W")) {
        rs.W.resize(q, q);
        for (srbe::Index i = 0; i < q; ++i)
            for (srbe::Index c = 0; c < q; ++c) rs.W(i, c) = j.at("W").at(i).at(c).get<double>();
    } else {
        rs.W = srbe::Matrix::Identity(q, q);
    }
    return rs;
}

srbe::Dataset load_dataset(const std::string& data_path, const std::string& response) {
    if (data_path.empty() || data_path == "builtin") return srbe::builtin_rnd_dataset();
    return srbe::load_csv(data_path, response);
}

/// --w identity|file: identity keeps/forces W = I_q, a path loads a JSON
/// matrix [[...]] as the prior scale.
void apply_w_flag(srbe::RestrictionSystem& rs, const std::string& w_text) {
    if (w_text.empty() || w_text == "identity") {
        rs.W = srbe::Matrix::Identity(rs.q(), rs.q());
        return;
    }
    json j = json::parse(srbe::read_file(w_text));
    const auto q = static_cast<srbe::Index>(j.size());
    if (q != rs.q()) throw srbe::ValidationError("--w matrix size does not match q");
    rs.W.resize(q, q);
    for (srbe::Index i = 0; i < q; ++i)
        for (srbe::Index c = 0; c < q; ++c) rs.W(i, c) = j.at(i).at(c).get<double>();
}

struct ScenarioFlag {
    srbe::Index l = 0, p = 0;
};

ScenarioFlag parse_scenario(const std::string& text) {
    ScenarioFlag s;
    long long l = 0, p = 0;
    if (std::sscanf(text.c_str(), "%lld,%lld", &l, &p) != 2)
        throw srbe::ValidationError("--scenario expects l,p");
    s.l = static_cast<srbe::Index>(l);
    s.p = static_cast<srbe::Index>(p);
    return s;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const std::string& data_path, const std::string& response,
                const std::string& restriction_path, const std::string& w_text,
                const std::vector<std::string>& scenarios, const std::string& grid_text,
                long long components, double sigma2, const std::string& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    const srbe::Dataset ds = load_dataset(data_path, response);
    srbe::RestrictionSystem tmpl = restriction_path.empty()
                                       ? srbe::worked_example_restriction()
                                       : load_restriction_json(restriction_path);
    if (!w_text.empty()) apply_w_flag(tmpl, w_text);
    if (ds.m() != tmpl.R.cols() && restriction_path.empty())
        throw srbe::ValidationError(
            "builtin restriction covers 4 regressors; pass --restriction for this dataset");

    srbe::AnalysisOptions options;
    options.grid = parse_grid(grid_text);
    if (components > 0) options.components = components;
    if (sigma2 > 0.0) options.sigma2_override = sigma2;

    std::vector<srbe::LabeledTable> est_blocks, pred_blocks;
    for (const std::string& text : scenarios) {
        const ScenarioFlag sc = parse_scenario(text);
        options.scenario = {sc.l, sc.p};
        const srbe::AnalysisResult res = srbe::analyze_dataset(ds, tmpl, options);
        const std::string label = "l=" + std::to_string(sc.l) + " p=" + std::to_string(sc.p);
        est_blocks.push_back({label, res.estimator_smse});
        pred_blocks.push_back({label, res.predictor_smse});
    }

    OutputSink sink(out_dir);
    sink.write("estimator_smse.csv", srbe::tables_to_csv(est_blocks));
    sink.write("predictor_smse.csv", srbe::tables_to_csv(pred_blocks));

    const srbe::DesignDiagnostics diag = srbe::design_diagnostics(ds.x);
    json jdiag{{"eigenvalues", std::vector<double>(diag.eigenvalues.begin(), diag.eigenvalues.end())},
               {"condition_number", diag.condition_number},
               {"vif", std::vector<double>(diag.vif.begin(), diag.vif.end())}};
    sink.write("diagnostics.json", jdiag.dump(2) + "\n");

    std::string config = "analyze|" + data_path + "|" + restriction_path + "|" + grid_text;
    for (const auto& s : scenarios) config += "|" + s;
    finish(sink, "analyze", config, 0, start);
    return 0;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

/// "MRE:SRRE,SRLE:SRRE" -> ordered kind pairs; empty selects all 8x8.
std::vector<std::pair<srbe::EstimatorKind, srbe::EstimatorKind>> parse_pairs(
    const std::string& text) {
    std::vector<std::pair<srbe::EstimatorKind, srbe::EstimatorKind>> pairs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw srbe::ValidationError("--pairs expects entries of the form I:J");
        const auto i = srbe::estimator_kind_from_string(item.substr(0, colon));
        const auto j = srbe::estimator_kind_from_string(item.substr(colon + 1));
        if (!i || !j) throw srbe::UnknownPair("unknown estimator in pair '" + item + "'");
        pairs.emplace_back(*i, *j);
    }
    return pairs;
}

int cmd_compare(const std::string& data_path, const std::string& response,
                const std::string& restriction_path, const std::string& w_text,
                const std::string& sim_config_path, const std::string& scenario_text,
                const std::string& level_text, const std::string& pairs_text, double k, double d,
                long long components, const std::string& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    srbe::CanonicalForm canon;
    srbe::Vector delta;
    srbe::Index l = 0;

    if (!sim_config_path.empty()) {
        // compare on the first replicate of a simulation configuration
        json j = json::parse(srbe::read_file(sim_config_path));
        srbe::SimConfig config;
        if (j.contains("n")) config.n = j["n"].get<long long>();
        if (j.contains("m")) config.m = j["m"].get<long long>();
        if (j.contains("rho")) config.rho = j["rho"].get<double>();
        if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("l")) config.l = j["l"].get<long long>();
        if (j.contains("p")) config.p = j["p"].get<long long>();
        config.reps = 1;
        config.restriction = srbe::default_sim_restriction(config.m);
        config.validate();
        srbe::NormalStream stream(config.seed, 0);
        const srbe::Matrix x = srbe::generate_design(config.n, config.m, config.rho, stream);
        auto [y, beta] = srbe::generate_response(x, stream);
        srbe::SampleModel model;
        model.y = y;
        model.x_included = x.leftCols(config.l);
        model.x_omitted = x.rightCols(config.p);
        model.beta_included = beta.head(config.l);
        model.beta_omitted = beta.tail(config.p);
        model.sigma2 = 1.0;
        srbe::RestrictionSystem restriction = config.restriction;
        restriction.R = config.restriction.R.leftCols(config.l);
        restriction.r = restriction.R * (*model.beta_included) + restriction.g;
        canon = srbe::build_canonical(model, restriction);
        delta = model.drift_vector();
        l = config.l;
    } else {
        const srbe::Dataset ds = load_dataset(data_path, response);
        srbe::RestrictionSystem tmpl = restriction_path.empty()
                                           ? srbe::worked_example_restriction()
                                           : load_restriction_json(restriction_path);
        if (!w_text.empty()) apply_w_flag(tmpl, w_text);
        const ScenarioFlag sc = parse_scenario(scenario_text);
        srbe::AnalysisOptions options;
        options.scenario = {sc.l, sc.p};
        const srbe::AnalysisResult res = srbe::analyze_dataset(ds, tmpl, options);
        canon = res.canon;
        delta = res.delta;
        l = sc.l;
    }

    const srbe::Index h = components > 0 ? components : std::max<srbe::Index>(1, l - 1);
    auto spec_of = [&](srbe::EstimatorKind kind) {
        return srbe::EstimatorSpec::make(
            kind, srbe::uses_ridge_parameter(kind) ? std::optional<double>(k) : std::nullopt,
            srbe::uses_liu_parameter(kind) ? std::optional<double>(d) : std::nullopt,
            srbe::uses_components(kind) ? std::optional<srbe::Index>(h) : std::nullopt);
    };
    const srbe::ComparisonLevel level = level_text == "predictor"
                                            ? srbe::ComparisonLevel::Predictor
                                            : srbe::ComparisonLevel::Estimator;

    std::vector<std::vector<srbe::ComparisonVerdict>> grid;
    if (pairs_text.empty()) {
        std::vector<srbe::EstimatorSpec> specs;
        for (srbe::EstimatorKind kind : srbe::all_estimator_kinds) specs.push_back(spec_of(kind));
        grid = srbe::pairwise_matrix(specs, canon, delta, level);
    } else {
        grid.emplace_back();
        for (auto [i_kind, j_kind] : parse_pairs(pairs_text))
            grid.back().push_back(
                level == srbe::ComparisonLevel::Estimator
                    ? srbe::theorem1_compare(spec_of(i_kind), spec_of(j_kind), canon)
                    : srbe::theorem2_compare(spec_of(i_kind), spec_of(j_kind), canon, delta));
    }

    OutputSink sink(out_dir);
    sink.write("verdicts.csv", srbe::verdicts_to_csv(grid));
    sink.write("verdicts.json", srbe::verdicts_to_json(grid).dump(2) + "\n");
    finish(sink, "compare",
           "compare|" + data_path + "|" + sim_config_path + "|" + scenario_text + "|" +
               level_text + "|" + pairs_text + "|" + std::to_string(k) + "|" + std::to_string(d),
           0, start);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulatePlan {
    srbe::Index n = 50;
    srbe::Index m = 5;
    std::vector<double> rhos = {0.9, 0.99, 0.999};
    std::vector<ScenarioFlag> scenarios = {{5, 0}, {4, 1}, {3, 2}};
    srbe::Index reps = 2000;
    std::uint64_t seed = kDefaultSeed;
    std::vector<double> grid = srbe::default_grid();
};

std::string rho_tag(double rho) {
    std::string t = srbe::fmt_double(rho);
    for (auto& c : t)
        if (c == '.') c = 'p';
    return t;
}

long long run_simulate_plan(const SimulatePlan& plan, OutputSink& sink) {
    long long resamples = 0;
    for (double rho : plan.rhos) {
        std::vector<srbe::LabeledTable> est_blocks, pred_blocks;
        for (const ScenarioFlag& sc : plan.scenarios) {
            srbe::SimConfig config;
            config.n = plan.n;
            config.m = plan.m;
            config.l = sc.l;
            config.p = sc.p;
            config.rho = rho;
            config.reps = plan.reps;
            config.seed = plan.seed;
            config.grid = plan.grid;
            config.restriction = srbe::default_sim_restriction(plan.m);
            const srbe::SimResult result = srbe::run_monte_carlo(config);
            resamples += result.resampled;
            const std::string label = "l=" + std::to_string(sc.l) + " p=" + std::to_string(sc.p);
            est_blocks.push_back({label, result.estimator_smse});
            pred_blocks.push_back({label, result.predictor_smse});
        }
        const std::string tag = rho_tag(rho);
        sink.write("sim_estimators_rho" + tag + ".csv", srbe::tables_to_csv(est_blocks));
        sink.write("sim_predictors_rho" + tag + ".csv", srbe::tables_to_csv(pred_blocks));
        // Charts cover the most misspecified scenario per rho.
        sink.write("fig_estimators_rho" + tag + ".svg",
                   srbe::svg_line_chart(est_blocks.back().table,
                                        "Estimator SMSE, rho=" + srbe::fmt_double(rho) + ", " +
                                            est_blocks.back().label));
        sink.write("fig_predictors_rho" + tag + ".svg",
                   srbe::svg_line_chart(pred_blocks.back().table,
                                        "Predictor SMSE, rho=" + srbe::fmt_double(rho) + ", " +
                                            pred_blocks.back().label));
    }
    return resamples;
}

int cmd_simulate(const std::string& config_path, long long n, long long m, long long reps,
                 const std::vector<double>& rhos, const std::vector<std::string>& scenarios,
                 std::uint64_t seed, const std::string& grid_text, const std::string& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    SimulatePlan plan;  // seed: flag > config file > default
    std::string config_desc = "simulate";
    if (!config_path.empty()) {
        json j = json::parse(srbe::read_file(config_path));
        if (j.contains("n")) plan.n = j["n"].get<long long>();
        if (j.contains("m")) plan.m = j["m"].get<long long>();
        if (j.contains("reps")) plan.reps = j["reps"].get<long long>();
        if (j.contains("seed")) plan.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("rho")) plan.rhos = j["rho"].get<std::vector<double>>();
        if (j.contains("grid")) plan.grid = j["grid"].get<std::vector<double>>();
        if (j.contains("scenarios")) {
            plan.scenarios.clear();
            for (const auto& row : j["scenarios"])
                plan.scenarios.push_back(
                    {row.at(0).get<srbe::Index>(), row.at(1).get<srbe::Index>()});
        }
        config_desc += "|" + srbe::read_file(config_path);
    }
    if (n > 0) plan.n = n;
    if (m > 0) plan.m = m;
    if (reps > 0) plan.reps = reps;
    if (!rhos.empty()) plan.rhos = rhos;
    if (seed != 0) plan.seed = seed;
    if (!grid_text.empty()) plan.grid = parse_grid(grid_text);
    if (!scenarios.empty()) {
        plan.scenarios.clear();
        for (const auto& s : scenarios) plan.scenarios.push_back(parse_scenario(s));
    }

    config_desc += "|n=" + std::to_string(plan.n) + "|reps=" + std::to_string(plan.reps) +
                   "|seed=" + std::to_string(plan.seed);
    OutputSink sink(out_dir);
    const long long resamples = run_simulate_plan(plan, sink);
    finish(sink, "simulate", config_desc, plan.seed, start, resamples);
    return 0;
}

// ---------------------------------------------------------------------------
// reproduce: worked example + simulation study, then a tolerance diff against
// the checked-in expected tables.
// ---------------------------------------------------------------------------

int diff_against_expected(const fs::path& expected_dir, const OutputSink& sink) {
    if (!fs::exists(expected_dir)) {
        std::cerr << "note: expected-output directory " << expected_dir
                  << " not found; skipping diff\n";
        return 0;
    }
    int mismatches = 0;
    for (const auto& entry : fs::directory_iterator(expected_dir)) {
        if (entry.path().extension() != ".csv") continue;
        const fs::path produced = sink.dir / entry.path().filename();
        if (!fs::exists(produced)) {
            std::cerr << "missing output for expected table: " << entry.path().filename() << "\n";
            ++mismatches;
            continue;
        }
        const auto expected = srbe::tables_from_csv(srbe::read_file(entry.path()));
        const auto actual = srbe::tables_from_csv(srbe::read_file(produced));
        if (expected.size() != actual.size()) {
            std::cerr << "block count mismatch in " << entry.path().filename() << "\n";
            ++mismatches;
            continue;
        }
        for (std::size_t b = 0; b < expected.size(); ++b) {
            const auto& e = expected[b].table.values;
            const auto& a = actual[b].table.values;
            if (e.rows() != a.rows() || e.cols() != a.cols()) {
                std::cerr << "shape mismatch in " << entry.path().filename() << "\n";
                ++mismatches;
                continue;
            }
            const double scale = std::max(e.cwiseAbs().maxCoeff(), 1e-12);
            const double defect = (e - a).cwiseAbs().maxCoeff() / scale;
            if (defect > 1e-9) {
                std::cerr << "numeric mismatch in " << entry.path().filename() << " block "
                          << expected[b].label << " (relative defect " << defect << ")\n";
                ++mismatches;
            }
        }
    }
    if (mismatches == 0) std::cout << "reproduce: all expected tables matched\n";
    return mismatches == 0 ? 0 : 3;
}

int cmd_reproduce(std::uint64_t seed, long long reps, const std::string& out_dir,
                  const std::string& expected_dir) {
    const auto start = std::chrono::steady_clock::now();
    OutputSink sink(out_dir);

    // Worked example: three nested fits of the built-in dataset.
    const srbe::Dataset ds = srbe::builtin_rnd_dataset();
    srbe::AnalysisOptions options;
    std::vector<srbe::LabeledTable> est_blocks, pred_blocks;
    for (const ScenarioFlag sc : {ScenarioFlag{4, 0}, ScenarioFlag{3, 1}, ScenarioFlag{2, 2}}) {
        options.scenario = {sc.l, sc.p};
        const srbe::AnalysisResult res =
            srbe::analyze_dataset(ds, srbe::worked_example_restriction(), options);
        const std::string label = "l=" + std::to_string(sc.l) + " p=" + std::to_string(sc.p);
        est_blocks.push_back({label, res.estimator_smse});
        pred_blocks.push_back({label, res.predictor_smse});
    }
    sink.write("example_estimators.csv", srbe::tables_to_csv(est_blocks));
    sink.write("example_predictors.csv", srbe::tables_to_csv(pred_blocks));

    const srbe::DesignDiagnostics diag = srbe::design_diagnostics(ds.x);
    const srbe::OlsFit ols = srbe::ols_fit(ds.y, ds.x);
    json jdiag{{"eigenvalues", std::vector<double>(diag.eigenvalues.begin(), diag.eigenvalues.end())},
               {"condition_number", diag.condition_number},
               {"vif", std::vector<double>(diag.vif.begin(), diag.vif.end())},
               {"ols_beta", std::vector<double>(ols.beta.begin(), ols.beta.end())},
               {"ols_sigma2", ols.sigma2}};
    sink.write("example_diagnostics.json", jdiag.dump(2) + "\n");

    // Simulation study.
    SimulatePlan plan;
    plan.seed = seed;
    if (reps > 0) plan.reps = reps;
    const long long resamples = run_simulate_plan(plan, sink);

    finish(sink, "reproduce",
           "reproduce|seed=" + std::to_string(seed) + "|reps=" + std::to_string(plan.reps), seed,
           start, resamples);
    return diff_against_expected(expected_dir, sink);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic restricted biased regression estimators under misspecification"};
    app.require_subcommand(1);

    std::string data_path, response, restriction_path, w_text, grid_text, pairs_text, out_dir = "out";
    std::string level_text = "estimator", config_path, expected_dir = "data/expected";
    std::vector<std::string> scenarios{"4,0"};
    std::string scenario_single = "4,0";
    std::vector<double> rhos;
    long long components = 0, n = 0, m = 0, reps = 0;
    double sigma2 = 0.0, k = 0.5, d = 0.5;
    std::uint64_t seed = 0;

    auto* dump = app.add_subcommand("dump-data", "write the built-in dataset as CSV");
    std::string dump_out;
    dump->add_option("--out", dump_out, "output file (default: stdout)");

    auto* analyze = app.add_subcommand("analyze", "SMSE tables for a dataset");
    analyze->add_option("--data", data_path, "CSV path or 'builtin'");
    analyze->add_option("--response", response, "response column name (default: last)");
    analyze->add_option("--restriction", restriction_path, "restriction JSON file");
    analyze->add_option("--w", w_text, "prior scale: identity or a JSON matrix file");
    analyze->add_option("--scenario", scenarios, "kept,omitted counts (repeatable)");
    analyze->add_option("--grid", grid_text, "start:stop:step (default 0.1:0.9:0.1)");
    analyze->add_option("--components", components, "retained principal components (default l-1)");
    analyze->add_option("--sigma2", sigma2, "override the full-model OLS variance estimate");
    analyze->add_option("--out", out_dir, "output directory");

    auto* compare = app.add_subcommand("compare", "pairwise MSEM superiority verdicts");
    compare->add_option("--data", data_path, "CSV path or 'builtin'");
    compare->add_option("--response", response, "response column name");
    compare->add_option("--restriction", restriction_path, "restriction JSON file");
    compare->add_option("--w", w_text, "prior scale: identity or a JSON matrix file");
    compare->add_option("--sim", config_path, "simulation JSON: compare on its first replicate");
    compare->add_option("--scenario", scenario_single, "kept,omitted counts");
    compare->add_option("--level", level_text, "estimator|predictor");
    compare->add_option("--pairs", pairs_text, "ordered pairs I:J, comma separated (default all)");
    compare->add_option("--k", k, "ridge parameter");
    compare->add_option("--d", d, "Liu parameter");
    compare->add_option("--components", components, "retained principal components");
    compare->add_option("--out", out_dir, "output directory");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo SMSE study");
    simulate->add_option("--config", config_path, "JSON config file");
    simulate->add_option("--n", n, "sample size");
    simulate->add_option("--m", m, "total regressors");
    simulate->add_option("--reps", reps, "replicates");
    simulate->add_option("--rho", rhos, "collinearity levels (repeatable)");
    simulate->add_option("--scenario", scenarios, "kept,omitted counts (repeatable)");
    simulate->add_option("--seed", seed, "master seed");
    simulate->add_option("--grid", grid_text, "start:stop:step");
    simulate->add_option("--out", out_dir, "output directory");

    auto* reproduce = app.add_subcommand("reproduce", "worked example + simulation study");
    reproduce->add_option("--seed", seed, "master seed");
    reproduce->add_option("--reps", reps, "replicates (default 2000)");
    reproduce->add_option("--out", out_dir, "output directory");
    reproduce->add_option("--expected", expected_dir, "expected-output directory to diff against");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dump->parsed()) {
            const std::string csv = srbe::to_csv(srbe::builtin_rnd_dataset());
            if (dump_out.empty())
                std::cout << csv;
            else
                srbe::write_file_atomic(dump_out, csv);
            return 0;
        }
        if (analyze->parsed())
            return cmd_analyze(data_path, response, restriction_path, w_text, scenarios,
                               grid_text, components, sigma2, out_dir);
        if (compare->parsed())
            return cmd_compare(data_path, response, restriction_path, w_text, config_path,
                               scenario_single, level_text, pairs_text, k, d, components,
                               out_dir);
        if (simulate->parsed()) {
            const std::vector<std::string> sc =
                simulate->count("--scenario") > 0 ? scenarios : std::vector<std::string>{};
            return cmd_simulate(config_path, n, m, reps, rhos, sc, seed, grid_text, out_dir);
        }
        if (reproduce->parsed())
            return cmd_reproduce(seed != 0 ? seed : kDefaultSeed, reps, out_dir, expected_dir);
    } catch (const srbe::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const srbe::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const srbe::MissingColumn& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const srbe::DimensionMismatch& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const srbe::UnknownPair& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const srbe::Error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
