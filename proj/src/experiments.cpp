#include "morreylab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include "morreylab/content.hpp"
#include "morreylab/maximal.hpp"
#include "morreylab/morrey.hpp"
#include "morreylab/rearrange.hpp"
#include "morreylab/singular.hpp"
#include "morreylab/sparse.hpp"
#include "morreylab/weight_class.hpp"

namespace morreylab {

void ExperimentConfig::validate() const {
    if (levels.size() < 2) throw std::invalid_argument("need at least two levels");
    for (std::size_t i = 0; i + 1 < levels.size(); ++i)
        if (levels[i] >= levels[i + 1])
            throw std::invalid_argument("levels must be strictly increasing");
    if (!(0 < q && q <= p)) throw std::invalid_argument("need 0 < q <= p");
    if (!(0 < s && s <= q)) throw std::invalid_argument("need 0 < s <= q");
    if (count < 1) throw std::invalid_argument("count must be >= 1");
    if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
}

std::string ExperimentConfig::canonical_text() const {
    std::ostringstream os;
    os << "experiment=" << experiment << "\ndim=" << dim << "\nJ=" << J << "\nlevels=";
    for (std::size_t i = 0; i < levels.size(); ++i) os << (i ? "," : "") << levels[i];
    os << "\nalphas=";
    for (std::size_t i = 0; i < alphas.size(); ++i)
        os << (i ? "," : "") << format_double(alphas[i]);
    os << "\np=" << format_double(p) << "\nq=" << format_double(q)
       << "\ns=" << format_double(s) << "\neta=" << format_double(eta)
       << "\nlambda=" << format_double(lambda) << "\nfamilies=";
    for (std::size_t i = 0; i < families.size(); ++i) os << (i ? "," : "") << families[i];
    os << "\nseed=" << seed << "\ncount=" << count << "\nweight=" << weight_csv << "\n";
    return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
    // FNV-1a over the canonical text
    std::uint64_t h = 14695981039346656037ull;
    for (char c : canonical_text()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;  // section headers are cosmetic
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("bad config line: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "experiment") cfg.experiment = val;
        else if (key == "dim") cfg.dim = std::stoi(val);
        else if (key == "J") cfg.J = std::stoi(val);
        else if (key == "levels") {
            cfg.levels.clear();
            for (const std::string& t : split(val, ',')) cfg.levels.push_back(std::stoi(trim(t)));
        } else if (key == "alphas") {
            cfg.alphas.clear();
            for (const std::string& t : split(val, ',')) cfg.alphas.push_back(std::stod(trim(t)));
        } else if (key == "p") cfg.p = std::stod(val);
        else if (key == "q") cfg.q = std::stod(val);
        else if (key == "s") cfg.s = std::stod(val);
        else if (key == "eta") cfg.eta = std::stod(val);
        else if (key == "lambda") cfg.lambda = std::stod(val);
        else if (key == "families") {
            cfg.families.clear();
            for (const std::string& t : split(val, ',')) cfg.families.push_back(trim(t));
        } else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "count") cfg.count = std::stoi(val);
        else if (key == "out") cfg.out_dir = val;
        else if (key == "plot") cfg.plot = (val == "true" || val == "1");
        else if (key == "weight") cfg.weight_csv = val;
        else throw std::invalid_argument("unknown config key: " + key);
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

namespace {

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    a ^= b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
    return a;
}

GridFunction clamped_log_radius(const DyadicGrid& g, double scale) {
    std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t c = 0; c < g.cell_count(); ++c) {
        auto m = cell_midpoint(g, c);
        const double r = g.dim == 1 ? std::fabs(m[0]) : std::hypot(m[0], m[1]);
        v[static_cast<std::size_t>(c)] = std::clamp(scale * std::log(r), -40.0, 40.0);
    }
    return GridFunction(g, std::move(v));
}

}  // namespace

std::vector<CorpusItem> make_corpus(const DyadicGrid& g, const std::vector<std::string>& families,
                                    std::uint64_t seed, int count, double p) {
    std::vector<CorpusItem> corpus;
    for (const std::string& fam : families) {
        std::uint64_t fam_hash = 1469598103934665603ull;
        for (char c : fam) fam_hash = mix(fam_hash, static_cast<std::uint64_t>(c));
        std::mt19937_64 rng(mix(mix(seed, fam_hash), static_cast<std::uint64_t>(g.L)));
        for (int k = 0; k < count; ++k) {
            if (fam == "indicators") {
                std::uniform_int_distribution<int> lvl(0, g.L);
                const int l = lvl(rng);
                std::uniform_int_distribution<std::int64_t> pick(0, cubes_at_level(g, l) - 1);
                const DyadicCube q = cube_from_linear_id(g, l, pick(rng));
                corpus.push_back({fam + "_" + std::to_string(k),
                                  GridFunction::indicator(g, q)});
            } else if (fam == "power_cusps") {
                const double a = -static_cast<double>(g.dim) / p * (1.0 + 0.1 * k);
                corpus.push_back({fam + "_" + std::to_string(k),
                                  weight_from_power(g, a).as_function()});
            } else if (fam == "random_signs") {
                std::uniform_int_distribution<int> coin(0, 1);
                std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
                for (auto& x : v) x = coin(rng) ? 1.0 : -1.0;
                corpus.push_back({fam + "_" + std::to_string(k),
                                  GridFunction(g, std::move(v))});
            } else if (fam == "bmo_logs") {
                corpus.push_back({fam + "_" + std::to_string(k),
                                  clamped_log_radius(g, 1.0 + 0.25 * k)});
            } else if (fam == "spikes") {
                std::uniform_int_distribution<std::int64_t> pick(0, g.cell_count() - 1);
                std::vector<double> v(static_cast<std::size_t>(g.cell_count()), 0.0);
                v[static_cast<std::size_t>(pick(rng))] = 1.0 / g.cell_volume();
                corpus.push_back({fam + "_" + std::to_string(k),
                                  GridFunction(g, std::move(v))});
            } else {
                throw std::invalid_argument("unknown corpus family: " + fam);
            }
        }
    }
    return corpus;
}

GrowthClass classify_growth(const std::vector<double>& step_factors) {
    double worst = 0.0;
    for (double f : step_factors) worst = std::max(worst, f);
    if (worst < 1.1) return GrowthClass::Bounded;
    if (worst > 1.5) return GrowthClass::Growing;
    return GrowthClass::Inconclusive;
}

int experiment_thread_cap() {
    const char* env = std::getenv("MORREYLAB_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return std::max(1, std::min(n, 64));
}

namespace {

// deterministic parallel map over independent slots
template <typename Fn>
void parallel_slots(std::size_t n, Fn&& fn) {
    const int threads = std::min<std::size_t>(experiment_thread_cap(), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    for (auto& th : pool) th.join();
}

using Transform = std::function<GridFunction(const GridFunction&, const Weight&)>;

// empirical operator-norm lower bounds over the corpus, per (alpha, L)
ExperimentResult ratio_sweep(const ExperimentConfig& cfg, const std::string& name,
                             const Transform& op) {
    cfg.validate();
    ExperimentResult res;
    res.experiment = name;
    struct Slot {
        std::vector<double> ratio;  // per L
    };
    std::vector<Slot> slots(cfg.alphas.size());
    parallel_slots(cfg.alphas.size(), [&](std::size_t ia) {
        const double alpha = cfg.alphas[ia];
        for (int L : cfg.levels) {
            const DyadicGrid g = build_grid(cfg.dim, cfg.J, L);
            const Weight w = weight_from_power(g, alpha);
            const MorreyParams params = MorreyParams::samko(cfg.p, cfg.q, w);
            const auto corpus = make_corpus(g, cfg.families, cfg.seed, cfg.count, cfg.p);
            double best = 0.0;
            for (const CorpusItem& item : corpus) {
                const double nf = morrey_norm(item.f, params);
                if (!(nf > 0)) continue;  // zero-norm member: skipped
                const double nt = morrey_norm(op(item.f, w), params);
                best = std::max(best, nt / nf);
            }
            slots[ia].ratio.push_back(best);
        }
    });
    for (std::size_t ia = 0; ia < cfg.alphas.size(); ++ia) {
        const double alpha = cfg.alphas[ia];
        std::vector<double> factors;
        for (std::size_t il = 0; il < cfg.levels.size(); ++il) {
            res.rows.push_back({alpha, cfg.levels[il], "ratio_max", slots[ia].ratio[il]});
            if (il > 0) {
                const double fct = slots[ia].ratio[il] / slots[ia].ratio[il - 1];
                factors.push_back(fct);
                res.rows.push_back({alpha, cfg.levels[il], "growth_factor", fct});
            }
            std::ostringstream os;
            os << name << " alpha=" << format_double(alpha) << " L=" << cfg.levels[il]
               << " ratio=" << format_double(slots[ia].ratio[il]);
            res.summary.push_back(os.str());
        }
        const GrowthClass cls = classify_growth(factors);
        res.rows.push_back({alpha, cfg.levels.back(), "class_code",
                            static_cast<double>(static_cast<int>(cls))});
        res.rows.push_back(
            {alpha, cfg.levels.back(), "total_growth",
             slots[ia].ratio.back() / std::max(slots[ia].ratio.front(), 1e-300)});
    }
    return res;
}

}  // namespace

ExperimentResult maximal_boundedness_sweep(const ExperimentConfig& cfg) {
    return ratio_sweep(cfg, "maximal_sweep",
                       [](const GridFunction& f, const Weight&) { return hl_maximal(f); });
}

ExperimentResult sio_boundedness_sweep(const ExperimentConfig& cfg) {
    if (cfg.dim == 1)
        return ratio_sweep(cfg, "sio_sweep",
                           [](const GridFunction& f, const Weight&) { return hilbert(f); });
    return ratio_sweep(cfg, "sio_sweep",
                       [](const GridFunction& f, const Weight&) { return riesz(f, 1); });
}

ExperimentResult sharp_maximal_equivalence(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult res;
    res.experiment = "sharp_equivalence";
    for (double alpha : cfg.alphas) {
        for (int L : cfg.levels) {
            const DyadicGrid g = build_grid(cfg.dim, cfg.J, L);
            const Weight w = weight_from_power(g, alpha);
            const auto corpus = make_corpus(g, cfg.families, cfg.seed, cfg.count, cfg.p);
            double lo_samko = std::numeric_limits<double>::infinity(), hi_samko = 0.0;
            double lo_ks = std::numeric_limits<double>::infinity(), hi_ks = 0.0;
            double upper_ratio = 0.0, upper_bound_ratio = 0.0;
            // empirical powered-maximal norm over the same corpus (Samko)
            const MorreyParams samko = MorreyParams::samko(cfg.p, cfg.q, w);
            const MorreyParams ks = MorreyParams::komori_shirai(cfg.p, cfg.q, w);
            double meta_norm = 0.0;
            for (const CorpusItem& item : corpus) {
                const double nf = morrey_norm(item.f, samko);
                if (!(nf > 0)) continue;
                meta_norm = std::max(
                    meta_norm, morrey_norm(powered_maximal(item.f, cfg.eta), samko) / nf);
            }
            for (const CorpusItem& item : corpus) {
                const GridFunction sharp = global_sharp(item.f, cfg.lambda);
                {
                    const double lhs = morrey_norm(item.f, samko);
                    const double rhs = morrey_norm(sharp, samko) +
                                       local_average_term(item.f, cfg.p, cfg.q, cfg.s, w);
                    if (rhs > 0 && lhs > 0) {
                        lo_samko = std::min(lo_samko, lhs / rhs);
                        hi_samko = std::max(hi_samko, lhs / rhs);
                    }
                    if (lhs > 0) {
                        const double r = morrey_norm(sharp, samko) / lhs;
                        upper_ratio = std::max(upper_ratio, r);
                    }
                }
                {
                    const double lhs = morrey_norm(item.f, ks);
                    GridFunction fs = item.f;
                    const double rhs =
                        morrey_norm(sharp, ks) +
                        morrey_norm(fs, MorreyParams::komori_shirai(cfg.p, cfg.s, w));
                    if (rhs > 0 && lhs > 0) {
                        lo_ks = std::min(lo_ks, lhs / rhs);
                        hi_ks = std::max(hi_ks, lhs / rhs);
                    }
                }
            }
            upper_bound_ratio =
                std::pow(2.0, 1.0 + 1.0 / cfg.eta) * std::pow(cfg.lambda, -1.0 / cfg.eta) *
                meta_norm;
            res.rows.push_back({alpha, L, "samko_ratio_min", lo_samko});
            res.rows.push_back({alpha, L, "samko_ratio_max", hi_samko});
            res.rows.push_back({alpha, L, "ks_ratio_min", lo_ks});
            res.rows.push_back({alpha, L, "ks_ratio_max", hi_ks});
            res.rows.push_back({alpha, L, "sharp_over_f_max", upper_ratio});
            res.rows.push_back({alpha, L, "sharp_over_f_bound", upper_bound_ratio});
            std::ostringstream os;
            os << "sharp_equivalence alpha=" << format_double(alpha) << " L=" << L
               << " samko_band=[" << format_double(lo_samko) << ","
               << format_double(hi_samko) << "]";
            res.summary.push_back(os.str());
        }
    }
    return res;
}

ExperimentResult sharp_failure_demo(const ExperimentConfig& cfg) {
    cfg.validate();
    if (!(cfg.p > cfg.q)) throw std::invalid_argument("failure demo needs p > q");
    ExperimentResult res;
    res.experiment = "sharp_failure";
    const double alpha0 = -cfg.q / cfg.p * cfg.dim;
    double prev_wic = 0.0;
    for (int L : cfg.levels) {
        const DyadicGrid g = build_grid(cfg.dim, cfg.J, L);
        const Weight w0 = weight_from_power(g, alpha0);
        const GridFunction f0 = GridFunction::constant(g, 1.0);
        const GridFunction mf0 = hl_maximal(f0);
        double dev_m = 0.0;
        for (std::int64_t c = 0; c < g.cell_count(); ++c)
            dev_m = std::max(dev_m, std::fabs(mf0[c] - 1.0));
        const GridFunction fsharp = fs_sharp(f0, 1.0);
        double dev_s = 0.0;
        for (std::int64_t c = 0; c < g.cell_count(); ++c)
            dev_s = std::max(dev_s, std::fabs(fsharp[c]));
        const double norm_mf0 = morrey_norm(mf0, MorreyParams::samko(cfg.p, cfg.q, w0));
        const double wic = weighted_integral_check(w0, cfg.p, cfg.q);
        res.rows.push_back({alpha0, L, "max_abs_Mf0_minus_1", dev_m});
        res.rows.push_back({alpha0, L, "max_fs_sharp_f0", dev_s});
        res.rows.push_back({alpha0, L, "morrey_norm_Mf0", norm_mf0});
        res.rows.push_back({alpha0, L, "wic_const", wic});
        if (prev_wic > 0)
            res.rows.push_back({alpha0, L, "wic_growth", wic / prev_wic});
        prev_wic = wic;
        std::ostringstream os;
        os << "sharp_failure L=" << L << " wic=" << format_double(wic)
           << " norm_Mf0=" << format_double(norm_mf0);
        res.summary.push_back(os.str());
    }
    return res;
}

namespace {

// deterministic sample of base cubes: up to `per_level` per level
std::vector<DyadicCube> sample_cubes(const DyadicGrid& g, std::uint64_t seed, int per_level) {
    std::vector<DyadicCube> out;
    for (int l = 1; l <= g.L; ++l) {
        std::mt19937_64 rng(mix(seed, static_cast<std::uint64_t>(l)));
        std::uniform_int_distribution<std::int64_t> pick(0, cubes_at_level(g, l) - 1);
        for (int k = 0; k < per_level; ++k)
            out.push_back(cube_from_linear_id(g, l, pick(rng)));
    }
    return out;
}

}  // namespace

ExperimentResult weak_type_with_candidates(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.dim != 1) throw std::invalid_argument("weak-type experiment is 1D");
    ExperimentResult res;
    res.experiment = "weak_type_candidates";
    const int n = 1;
    for (double alpha : cfg.alphas) {
        const double lo = -cfg.q / cfg.p * n, hi = n * (cfg.q - cfg.q / cfg.p);
        if (!(alpha >= lo && alpha < hi))
            throw std::invalid_argument("alpha outside the candidate construction range");
        for (int L : cfg.levels) {
            const DyadicGrid g = build_grid(1, cfg.J, L);
            const Weight w = weight_from_power(g, alpha);
            double worst_c = 0.0;
            const auto bases = sample_cubes(g, cfg.seed, 3);
            for (const DyadicCube& q0 : bases) {
                CandidateB cand =
                    triple_contains_origin(g, q0)
                        ? candidate_b_power(g, q0, cfg.p, cfg.q, alpha)
                        : candidate_b_maximal(g, q0, n * (1.0 - cfg.q / cfg.p),
                                              0.5 * cfg.q / cfg.p);
                // (151221-3): LHS(Q) <= C (|Q0|/|Q|)^{1-q/p} for Q in D(Q0)
                const double volq0 = g.volume(q0.level);
                std::vector<DyadicCube> stack{q0};
                while (!stack.empty()) {
                    const DyadicCube qc = stack.back();
                    stack.pop_back();
                    const double vol = g.volume(qc.level);
                    double dual = 0.0;  // (1/|Q|) int (b w)^{-1/(q-1)}
                    for_each_cell(g, qc, [&](std::int64_t c) {
                        dual += std::pow(cand.b[c] * w.density_at(c),
                                         -1.0 / (cfg.q - 1.0)) *
                                g.cell_volume();
                    });
                    dual /= vol;
                    const double lhs = std::pow(phi(cfg.p, cfg.q, w, qc), cfg.q) / vol *
                                       std::pow(dual, cfg.q - 1.0);
                    const double rhs = std::pow(volq0 / vol, 1.0 - cfg.q / cfg.p);
                    worst_c = std::max(worst_c, lhs / rhs);
                    for (const DyadicCube& k : children(g, qc)) stack.push_back(k);
                }
            }
            // weak/strong ratio over the corpus
            const auto corpus = make_corpus(g, cfg.families, cfg.seed, cfg.count, cfg.p);
            const MorreyParams samko = MorreyParams::samko(cfg.p, cfg.q, w);
            double worst_ratio = 0.0, worst_cheb = 0.0;
            for (const CorpusItem& item : corpus) {
                const double nf = morrey_norm(item.f, samko);
                if (!(nf > 0)) continue;
                const GridFunction mf = hl_maximal(item.f);
                worst_ratio =
                    std::max(worst_ratio, weak_morrey_norm(mf, cfg.p, cfg.q, w) / nf);
                worst_cheb = std::max(
                    worst_cheb, weak_morrey_norm(item.f, cfg.p, cfg.q, w) / nf);
            }
            res.rows.push_back({alpha, L, "c151221_3_max", worst_c});
            res.rows.push_back({alpha, L, "weak_strong_ratio", worst_ratio});
            res.rows.push_back({alpha, L, "weak_le_strong_max", worst_cheb});
            std::ostringstream os;
            os << "weak_type alpha=" << format_double(alpha) << " L=" << L
               << " C(151221-3)=" << format_double(worst_c)
               << " weak/strong=" << format_double(worst_ratio);
            res.summary.push_back(os.str());
        }
    }
    return res;
}

ExperimentResult bmo_equivalence(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult res;
    res.experiment = "bmo_equivalence";
    for (double alpha : cfg.alphas) {
        for (int L : cfg.levels) {
            const DyadicGrid g = build_grid(cfg.dim, cfg.J, L);
            const Weight w = weight_from_power(g, alpha);
            const auto corpus = make_corpus(g, {"bmo_logs"}, cfg.seed, cfg.count, cfg.p);
            const MorreyParams samko = MorreyParams::samko(cfg.p, cfg.q, w);
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const CorpusItem& item : corpus) {
                const double classic = bmo_norm(item.f);
                if (!(classic > 0)) continue;  // constant b: skipped
                // generalized norm sup_Q ||(b-b_Q) chi_Q|| / Phi(Q)
                double gen = 0.0;
                const double vol = g.cell_volume();
                std::vector<double> cell(static_cast<std::size_t>(g.cell_count()));
                for (std::int64_t c = 0; c < g.cell_count(); ++c)
                    cell[static_cast<std::size_t>(c)] = item.f[c] * vol;
                const CubePyramid sums(g, cell);
                for (int l = 0; l <= g.L; ++l)
                    for (std::int64_t id = 0; id < cubes_at_level(g, l); ++id) {
                        const DyadicCube qc = cube_from_linear_id(g, l, id);
                        const double avg = sums.sum(g, qc) / g.volume(l);
                        const GridFunction centered =
                            item.f.shifted(-avg).restricted(qc);
                        gen = std::max(gen, morrey_norm(centered, samko) /
                                                phi(cfg.p, cfg.q, w, qc));
                    }
                const double ratio = gen / classic;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
            res.rows.push_back({alpha, L, "bmo_ratio_min", lo});
            res.rows.push_back({alpha, L, "bmo_ratio_max", hi});
            std::ostringstream os;
            os << "bmo_equivalence alpha=" << format_double(alpha) << " L=" << L
               << " band=[" << format_double(lo) << "," << format_double(hi) << "]";
            res.summary.push_back(os.str());
        }
    }
    return res;
}

ExperimentResult median_decay_check(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult res;
    res.experiment = "median_decay";
    const double lambda = 0.25;
    for (double alpha : cfg.alphas) {
        for (int L : cfg.levels) {
            const DyadicGrid g = build_grid(cfg.dim, cfg.J, L);
            const Weight w = weight_from_power(g, alpha);
            const auto corpus = make_corpus(g, cfg.families, cfg.seed, cfg.count, cfg.p);
            double worst_slack = std::numeric_limits<double>::infinity();
            double last_profile = 0.0;
            for (const CorpusItem& item : corpus) {
                const GridFunction mf = hl_maximal(item.f);
                for (const DyadicCube& base : sample_cubes(g, cfg.seed, 2)) {
                    for (int l = 0; l <= base.level; ++l) {
                        const DyadicCube anc = ancestor(base, l);
                        const double med = median(item.f, anc);
                        double inf_mf = std::numeric_limits<double>::infinity();
                        for_each_cell(g, anc, [&](std::int64_t c) {
                            inf_mf = std::min(inf_mf, mf[c]);
                        });
                        // (151203-3) with lambda = 1/4
                        worst_slack =
                            std::min(worst_slack, inf_mf / lambda - std::fabs(med));
                        const double ph =
                            phi_general(cfg.p, cfg.q, nullptr, w, g, anc);
                        if (ph > 0) last_profile = std::fabs(med) * ph;
                    }
                }
            }
            res.rows.push_back({alpha, L, "median_bound_worst_slack", worst_slack});
            res.rows.push_back({alpha, L, "median_phi_profile", last_profile});
            std::ostringstream os;
            os << "median_decay alpha=" << format_double(alpha) << " L=" << L
               << " worst_slack=" << format_double(worst_slack);
            res.summary.push_back(os.str());
        }
    }
    return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.experiment == "maximal_sweep") return maximal_boundedness_sweep(cfg);
    if (cfg.experiment == "sio_sweep") return sio_boundedness_sweep(cfg);
    if (cfg.experiment == "sharp_equivalence") return sharp_maximal_equivalence(cfg);
    if (cfg.experiment == "sharp_failure") return sharp_failure_demo(cfg);
    if (cfg.experiment == "weak_type_candidates") return weak_type_with_candidates(cfg);
    if (cfg.experiment == "bmo_equivalence") return bmo_equivalence(cfg);
    if (cfg.experiment == "median_decay") return median_decay_check(cfg);
    throw std::invalid_argument("unknown experiment id: " + cfg.experiment);
}

std::string csv_text(const ExperimentResult& res) {
    std::ostringstream os;
    os << "alpha,L,metric,value\n";
    for (const CsvRow& r : res.rows)
        os << format_double(r.alpha) << ',' << r.L << ',' << r.metric << ','
           << format_double(r.value) << '\n';
    return os.str();
}

namespace {

void write_svg_plot(const ExperimentResult& res, const ExperimentConfig& cfg,
                    const std::string& path) {
    // polyline of ratio_max vs alpha, one series per L
    std::map<int, std::vector<std::pair<double, double>>> series;
    for (const CsvRow& r : res.rows)
        if (r.metric == "ratio_max") series[r.L].push_back({r.alpha, r.value});
    if (series.empty()) return;
    double amin = 1e300, amax = -1e300, vmin = 1e300, vmax = 0;
    for (auto& [L, pts] : series)
        for (auto& [a, v] : pts) {
            amin = std::min(amin, a);
            amax = std::max(amax, a);
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    if (!(amax > amin)) amax = amin + 1;
    if (!(vmax > vmin)) vmax = vmin + 1;
    const double W = 640, H = 420, m = 50;
    auto px = [&](double a) { return m + (a - amin) / (amax - amin) * (W - 2 * m); };
    auto py = [&](double v) { return H - m - (v - vmin) / (vmax - vmin) * (H - 2 * m); };
    std::ofstream out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << m << "\" y1=\"" << H - m << "\" x2=\"" << W - m << "\" y2=\""
        << H - m << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << H - m
        << "\" stroke=\"black\"/>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    int ci = 0;
    for (auto& [L, pts] : series) {
        std::ostringstream pl;
        for (auto& [a, v] : pts) pl << px(a) << ',' << py(v) << ' ';
        out << "<polyline fill=\"none\" stroke=\"" << colors[ci % 5] << "\" points=\""
            << pl.str() << "\"/>\n";
        out << "<text x=\"" << W - m + 4 << "\" y=\"" << py(pts.back().second)
            << "\" font-size=\"12\" fill=\"" << colors[ci % 5] << "\">L=" << L
            << "</text>\n";
        ++ci;
    }
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
        << "\" font-size=\"12\" text-anchor=\"middle\">alpha</text>\n";
    out << "<text x=\"14\" y=\"" << H / 2
        << "\" font-size=\"12\" transform=\"rotate(-90 14 " << H / 2
        << ")\" text-anchor=\"middle\">" << res.experiment << " ratio</text>\n</svg>\n";
    (void)cfg;
}

}  // namespace

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& res) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string base = cfg.out_dir + "/" + res.experiment;
    {
        std::ofstream out(base + ".csv", std::ios::binary);
        out << csv_text(res);
    }
    {
        std::ostringstream os;
        os << "{\n  \"experiment\": \"" << res.experiment << "\",\n";
        char hex[32];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(cfg.hash()));
        os << "  \"config_hash\": \"" << hex << "\",\n";
        os << "  \"tool\": \"morreylab 1.0\",\n";
        os << "  \"rows\": " << res.rows.size() << "\n}\n";
        std::ofstream out(base + "_manifest.json", std::ios::binary);
        out << os.str();
    }
    if (cfg.plot) write_svg_plot(res, cfg, base + ".svg");
}

}  // namespace morreylab
