// morreylab: weight diagnostics, experiment runner, and artifact inspection
// for dyadic weighted Morrey-space computations.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "morreylab/content.hpp"
#include "morreylab/experiments.hpp"
#include "morreylab/maximal.hpp"
#include "morreylab/morrey.hpp"
#include "morreylab/singular.hpp"
#include "morreylab/sparse.hpp"
#include "morreylab/weight_class.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitBadWeight = 3;
constexpr int kExitSizeCap = 4;

using namespace morreylab;

struct WeightSpec {
    bool has_power = false;
    double power_alpha = 0.0;
    std::string csv_path;
};

Weight make_weight(const DyadicGrid& g, const WeightSpec& spec) {
    if (!spec.csv_path.empty()) return load_weight_csv(g, spec.csv_path);
    return weight_from_power(g, spec.power_alpha);
}

int cmd_diagnose(const WeightSpec& spec, double p, double q, int dim, int J,
                 const std::vector<int>& levels, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::ostringstream table;
    table << "L  a1  a_inf  rh_eps  doubling  bpq  wic  phi_growth\n";
    double prev_wic = 0.0, prev_aq = 0.0;
    for (int L : levels) {
        const DyadicGrid g = build_grid(dim, J, L);
        const Weight w = make_weight(g, spec);
        const WeightReport rep = weight_report(w, p, q);
        std::ofstream json(out_dir + "/report_L" + std::to_string(L) + ".json");
        json << rep.to_json() << "\n";
        table << L << "  " << format_double(rep.a1_const) << "  "
              << format_double(rep.a_inf_est) << "  " << format_double(rep.rh_epsilon)
              << "  " << format_double(rep.doubling_const) << "  "
              << format_double(rep.bpq_const) << "  " << format_double(rep.wic_const)
              << "  " << format_double(rep.phi_growth_c) << "\n";
        if (prev_wic > 0)
            table << "   wic growth vs previous L: "
                  << format_double(rep.wic_const / prev_wic) << "\n";
        if (prev_aq > 0)
            table << "   a_q(q) growth vs previous L: "
                  << format_double(rep.a_q_constants.at(2.0) / prev_aq) << "\n";
        prev_wic = rep.wic_const;
        prev_aq = rep.a_q_constants.at(2.0);
    }
    if (spec.has_power) {
        const PowerWeightFlags f = power_weight_classifier(spec.power_alpha, p, q, dim);
        table << "analytic classifier: in_Aq=" << f.in_aq << " HLM=" << f.hlm
              << " WIC=" << f.wic << " SIO=" << f.sio_bounded << "\n";
    }
    std::ofstream txt(out_dir + "/diagnose.txt");
    txt << table.str();
    std::cout << table.str();
    return 0;
}

int cmd_run(const std::string& config_path, bool plot_flag, std::uint64_t seed_flag,
            bool seed_set, const std::string& out_flag) {
    ExperimentConfig cfg = parse_config_file(config_path);
    if (plot_flag) cfg.plot = true;
    if (seed_set) cfg.seed = seed_flag;
    if (!out_flag.empty()) cfg.out_dir = out_flag;
    const ExperimentResult res = run_experiment(cfg);
    write_outputs(cfg, res);
    for (const std::string& line : res.summary) std::cout << line << "\n";
    std::cout << "wrote " << cfg.out_dir << "/" << res.experiment << ".csv\n";
    return 0;
}

int cmd_sparse_demo(const WeightSpec& wspec, const std::string& fn_csv, int dim, int J, int L,
                    double lambda, double a, std::uint64_t seed, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const DyadicGrid g = build_grid(dim, J, L);
    const Weight w = make_weight(g, wspec);

    GridFunction f = GridFunction::constant(g, 0.0);
    if (!fn_csv.empty()) {
        f = load_function_csv(g, fn_csv);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
        for (auto& x : v) x = u(rng);
        f = GridFunction(g, std::move(v));
    }

    const SparseFamily fam = cz_sparse(w, DyadicCube::root(), a);
    const SparseValidation val = validate_sparse(g, fam, (dim == 1 ? 2.0 : 4.0) / a);

    std::ostringstream json;
    json << "{\n  \"sparsity\": " << format_double(fam.sparsity) << ",\n  \"levels\": [\n";
    for (std::size_t k = 0; k < fam.levels.size(); ++k) {
        json << "    [";
        for (std::size_t j = 0; j < fam.levels[k].size(); ++j) {
            const DyadicCube& qc = fam.levels[k][j];
            json << (j ? ", " : "") << "[" << qc.level << ", " << qc.idx[0];
            if (dim == 2) json << ", " << qc.idx[1];
            json << "]";
        }
        json << "]" << (k + 1 < fam.levels.size() ? "," : "") << "\n";
    }
    json << "  ]\n}\n";
    std::ofstream jf(out_dir + "/sparse_family.json");
    jf << json.str();

    const LernerDecomposition dec = lerner_decompose(f, DyadicCube::root(), lambda);
    const GridFunction sharp = local_sharp(f, DyadicCube::root(), lambda);
    const GridFunction osum = sparse_oscillation_sum(f, dec.family, lambda);
    double worst_slack = std::numeric_limits<double>::infinity();
    for (std::int64_t c = 0; c < g.cell_count(); ++c) {
        const double bound = 4.0 * sharp[c] + 2.0 * osum[c];
        worst_slack = std::min(worst_slack, bound - std::fabs(f[c] - dec.median0));
    }

    std::ostringstream rep;
    rep << "cz_sparse levels: " << fam.levels.size()
        << " cubes: " << fam.cube_count() << "\n";
    rep << "validate: disjoint=" << val.disjoint_within_levels
        << " nested=" << val.nested_supports
        << " worst_portion=" << format_double(val.worst_portion) << "\n";
    rep << "lerner: median0=" << format_double(dec.median0)
        << " nodes=" << dec.nodes.size()
        << " residual=" << format_double(dec.residual_max)
        << " pointwise_slack=" << format_double(worst_slack) << "\n";
    for (std::size_t k = 1; k < dec.level_cell_measure.size(); ++k)
        rep << "level " << k
            << " cell measure: " << format_double(dec.level_cell_measure[k]) << "\n";
    std::ofstream rf(out_dir + "/lerner_report.txt");
    rf << rep.str();
    std::cout << rep.str();
    return (dec.residual_max <= 1e-9 && worst_slack >= -1e-9) ? 0 : 1;
}

int cmd_norm(const std::string& fn_csv, const WeightSpec& wspec, int dim, int J, int L,
             double p, double q, const std::string& flavor) {
    const DyadicGrid g = build_grid(dim, J, L);
    const GridFunction f = load_function_csv(g, fn_csv);
    double value = 0.0;
    if (flavor == "samko-lebesgue") {
        value = morrey_norm(f, MorreyParams::samko_lebesgue(p, q));
    } else {
        const Weight w = make_weight(g, wspec);
        if (flavor == "samko")
            value = morrey_norm(f, MorreyParams::samko(p, q, w));
        else if (flavor == "ks")
            value = morrey_norm(f, MorreyParams::komori_shirai(p, q, w));
        else if (flavor == "weak")
            value = weak_morrey_norm(f, p, q, w);
        else
            throw CLI::ValidationError("unknown flavor " + flavor);
    }
    std::cout << format_double(value) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"morreylab: dyadic weighted Morrey-space laboratory"};
    app.require_subcommand(1);

    WeightSpec wspec;
    double p = 4.0, q = 2.0;
    int dim = 1, J = 2, L = 8;
    std::vector<int> levels{6, 8, 10};
    std::string out_dir = "out";
    std::string fn_csv, config_path, flavor = "samko";
    double lambda = 0.125, a = 8.0;
    std::uint64_t seed = 1;
    bool plot = false;

    auto add_weight_opts = [&](CLI::App* cmd) {
        cmd->add_option("--power", wspec.power_alpha, "power weight exponent alpha")
            ->each([&](const std::string&) { wspec.has_power = true; });
        cmd->add_option("--weight", wspec.csv_path, "weight density CSV");
    };

    CLI::App* diag = app.add_subcommand("diagnose", "weight-class constants and trends");
    add_weight_opts(diag);
    diag->add_option("--p", p);
    diag->add_option("--q", q);
    diag->add_option("--dim", dim);
    diag->add_option("--J", J);
    diag->add_option("--levels", levels)->delimiter(',');
    diag->add_option("--out", out_dir);

    CLI::App* run = app.add_subcommand("run", "run a named experiment from a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_flag("--plot", plot, "emit SVG plots");
    bool seed_set = false;
    run->add_option("--seed", seed)->each([&](const std::string&) { seed_set = true; });
    std::string out_flag;
    run->add_option("--out", out_flag);

    CLI::App* sd = app.add_subcommand("sparse-demo", "stopping time and median decomposition");
    add_weight_opts(sd);
    sd->add_option("--function", fn_csv, "function CSV (random if omitted)");
    sd->add_option("--dim", dim);
    sd->add_option("--J", J);
    sd->add_option("--L", L);
    sd->add_option("--lambda", lambda);
    sd->add_option("--a", a);
    sd->add_option("--seed", seed);
    sd->add_option("--out", out_dir);

    CLI::App* nr = app.add_subcommand("norm", "evaluate a Morrey norm of a function file");
    add_weight_opts(nr);
    nr->add_option("--function", fn_csv)->required();
    nr->add_option("--dim", dim);
    nr->add_option("--J", J);
    nr->add_option("--L", L);
    nr->add_option("--p", p);
    nr->add_option("--q", q);
    nr->add_option("--flavor", flavor, "samko | ks | weak | samko-lebesgue");

    CLI11_PARSE(app, argc, argv);

    try {
        if (diag->parsed()) {
            if (!wspec.has_power && wspec.csv_path.empty()) {
                std::cerr << "diagnose needs --power or --weight\n";
                return kExitUsage;
            }
            return cmd_diagnose(wspec, p, q, dim, J, levels, out_dir);
        }
        if (run->parsed()) return cmd_run(config_path, plot, seed, seed_set, out_flag);
        if (sd->parsed())
            return cmd_sparse_demo(wspec, fn_csv, dim, J, L, lambda, a, seed, out_dir);
        if (nr->parsed()) return cmd_norm(fn_csv, wspec, dim, J, L, p, q, flavor);
    } catch (const resource_error& e) {
        std::cerr << "size cap: " << e.what() << "\n";
        return kExitSizeCap;
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        if (what.find("weight") != std::string::npos ||
            what.find("alpha") != std::string::npos ||
            what.find("density") != std::string::npos) {
            std::cerr << "invalid weight: " << what << "\n";
            return kExitBadWeight;
        }
        std::cerr << "invalid input: " << what << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
