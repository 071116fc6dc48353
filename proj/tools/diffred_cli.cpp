// Command-line front end: preprocessing, embedding runs, metric
// evaluation, grid search, bound validation and stable-rank curves.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "diffred/io.hpp"
#include "diffred/metrics.hpp"
#include "diffred/parallel.hpp"
#include "diffred/pipeline.hpp"
#include "diffred/preprocess.hpp"
#include "diffred/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace diffred;

namespace {

// Exit code classes: I/O=2, config=3, numeric=4.
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNumeric = 4;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

struct StressOption {
    StressMode mode;
};

StressMode parse_stress(const std::string& s, std::uint64_t seed) {
    StressMode m;
    if (s == "exact") {
        m.exact = true;
        return m;
    }
    if (s.rfind("sampled:", 0) == 0) {
        m.exact = false;
        m.pair_count = std::stoull(s.substr(8));
        m.seed = seed;
        return m;
    }
    throw ConfigError("bad --stress value '" + s + "' (expected exact or sampled:N)");
}

double run_stress(const Matrix& a, const Matrix& at, const StressMode& mode, int threads) {
    if (mode.exact) {
        return stress_exact(a, at, threads);
    }
    RandomStream stream(mode.seed, StreamPurpose::StressSample, 0);
    return stress_sampled(a, at, mode.pair_count, stream).estimate;
}

DataMatrix load_input(const std::string& path, const std::string& format, bool skip_header) {
    FileFormat fmt = format.empty() ? guess_format(path) : parse_format(format);
    DataMatrix m = load_matrix(path, fmt, skip_header);
    m.flags = read_preprocess_sidecar(path);
    return m;
}

// Spike list grammar: comma-separated values, each "V" or "VxN".
SpectrumProfile parse_spikes(const std::string& s) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        pos = comma == std::string::npos ? s.size() : comma + 1;
        if (tok.empty()) {
            continue;
        }
        std::size_t x = tok.find('x');
        double v;
        long rep = 1;
        if (x == std::string::npos) {
            v = std::stod(tok);
        } else {
            v = std::stod(tok.substr(0, x));
            rep = std::stol(tok.substr(x + 1));
        }
        for (long i = 0; i < rep; ++i) {
            values.push_back(v);
        }
    }
    return SpectrumProfile(std::move(values));
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

struct EmbedOptions {
    std::string input;
    std::string format;
    bool skip_header = false;
    std::string method = "diffred";
    Index d = 0;
    Index k1 = -1;
    Index k2 = -1;
    std::size_t eta = 100;
    std::size_t alpha = 20;
    std::uint64_t seed = 0;
    std::string stress = "exact";
    int threads = 0;
    std::string out_dir = ".";
    std::string out_format = "bin";
    bool timing = false;
};

json provenance_for(const EmbedOptions& opt, const DiffRedConfig& cfg, bool auto_preprocessed) {
    json p;
    p["method"] = opt.method;
    p["k1"] = cfg.k1;
    p["k2"] = cfg.k2;
    p["eta"] = cfg.eta;
    p["seed"] = cfg.seed;
    p["svd_tol"] = cfg.svd_tol;
    p["auto_preprocessed"] = auto_preprocessed;
    return p;
}

int cmd_embed(const EmbedOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    DataMatrix A = load_input(opt.input, opt.format, opt.skip_header);
    bool auto_pre = false;
    if (!A.flags.column_centered) {
        A = preprocess(A);
        auto_pre = true;
        std::cerr << "note: input not marked preprocessed; applied row-normalize + center\n";
    }

    StressMode smode = parse_stress(opt.stress, opt.seed);
    fs::create_directories(opt.out_dir);
    FileFormat ofmt = parse_format(opt.out_format);
    std::string ext = ofmt == FileFormat::Csv ? ".csv" : ".bin";

    DiffRedConfig cfg;
    cfg.eta = opt.eta;
    cfg.seed = opt.seed;
    cfg.threads = opt.threads;

    MetricReport report;
    json extra;

    Matrix embedding;
    if (opt.method == "diffred") {
        if (opt.k1 >= 0 && opt.k2 >= 0) {
            cfg.k1 = opt.k1;
            cfg.k2 = opt.k2;
        } else {
            if (opt.d < 1) {
                throw ConfigError("embed: need --d or both --k1 and --k2");
            }
            SpectralSummary s = truncated_svd(A, opt.d, cfg.svd_tol, cfg.svd_max_iter);
            HyperparameterChoice choice = select_hyperparameters(s, opt.d);
            cfg.k1 = choice.k1;
            cfg.k2 = choice.k2;
            json scan = json::array();
            for (const auto& cell : choice.scan) {
                scan.push_back({{"k1", cell.k1}, {"k2", cell.k2}, {"p", cell.p},
                                {"bound", cell.bound_value}});
            }
            extra["hyperparameter_scan"] = scan;
        }
        EmbeddingMatrix emb = diffred_embed(A, cfg);
        if (emb.zero_residual) {
            std::cerr << "warning: residual energy is zero; random block zero-filled\n";
        }
        if (cfg.k2 >= 1 && cfg.k1 <= std::min(A.rows(), A.cols())) {
            double p = 0.0;
            if (cfg.k1 > 0) {
                SpectralSummary s = truncated_svd(A, cfg.k1, cfg.svd_tol, cfg.svd_max_iter);
                p = explained_variance(s, cfg.k1);
            }
            report.bound_value = stress_bound(p, cfg.k2);
        }
        embedding = std::move(emb.values);
    } else if (opt.method == "pca") {
        if (opt.d < 1) {
            throw ConfigError("embed: pca needs --d");
        }
        cfg.k1 = opt.d;
        EmbeddingMatrix emb = pca_embed(A, opt.d, cfg.svd_tol, cfg.svd_max_iter);
        embedding = std::move(emb.values);
    } else if (opt.method == "rmap") {
        if (opt.d < 1) {
            throw ConfigError("embed: rmap needs --d");
        }
        cfg.k2 = opt.d;
        RmapReport rr = rmap_embed(A, opt.d, opt.alpha, opt.seed, opt.threads);
        json runs = json::array();
        for (std::size_t i = 0; i < rr.runs.size(); ++i) {
            runs.push_back({{"map", i}, {"m1", rr.runs[i].m1}, {"stress", rr.runs[i].stress}});
        }
        extra["rmap"] = {
            {"alpha", opt.alpha},
            {"m1_mean", rr.m1_mean},
            {"m1_ci95_half", rr.ci_defined ? json(rr.m1_ci_half) : json(nullptr)},
            {"stress_mean", rr.stress_mean},
            {"stress_ci95_half", rr.ci_defined ? json(rr.stress_ci_half) : json(nullptr)},
            {"ci_approximation", "normal"},
            {"per_map", runs},
        };
        embedding = rr.runs.front().embedding.values; // first map; all are in per_map
    } else {
        throw ConfigError("unknown method '" + opt.method + "'");
    }

    report.m1 = m1(A.values, embedding);
    report.stress = run_stress(A.values, embedding, smode, opt.threads);
    report.stress_mode = smode;
    report.provenance = provenance_for(opt, cfg, auto_pre);
    report.wall_time_ms = opt.timing ? elapsed_ms(t0) : 0.0;

    fs::path emb_path = fs::path(opt.out_dir) / ("embedding" + ext);
    save_matrix(emb_path, ofmt, embedding);

    json sidecar;
    sidecar["method"] = opt.method;
    sidecar["k1"] = cfg.k1;
    sidecar["k2"] = cfg.k2;
    sidecar["eta"] = cfg.eta;
    sidecar["seed"] = cfg.seed;
    sidecar["svd_tol"] = cfg.svd_tol;
    sidecar["bound_value"] = report.bound_value ? json(*report.bound_value) : json(nullptr);
    write_json(fs::path(opt.out_dir) / ("embedding" + ext + ".provenance.json"), sidecar);

    json rep = report.to_json();
    for (auto& [k, v] : extra.items()) {
        rep[k] = v;
    }
    write_json(fs::path(opt.out_dir) / "report.json", rep);

    std::cout << "method=" << opt.method << " d=" << cfg.d() << " k1=" << cfg.k1
              << " k2=" << cfg.k2 << " m1=" << report.m1 << " stress=" << report.stress;
    if (report.bound_value) {
        std::cout << " bound=" << *report.bound_value;
    }
    std::cout << '\n';
    std::cerr << "wall_time_ms=" << elapsed_ms(t0) << '\n';
    return 0;
}

struct GridOptions {
    std::string input;
    std::string format;
    bool skip_header = false;
    std::vector<Index> d_list;
    std::size_t eta = 100;
    std::uint64_t seed = 0;
    std::string stress = "exact";
    int threads = 0;
    std::string out_dir = ".";
};

int cmd_gridsearch(const GridOptions& opt) {
    DataMatrix A = load_input(opt.input, opt.format, opt.skip_header);
    if (!A.flags.column_centered) {
        A = preprocess(A);
        std::cerr << "note: input not marked preprocessed; applied row-normalize + center\n";
    }
    StressMode smode = parse_stress(opt.stress, opt.seed);
    fs::create_directories(opt.out_dir);

    std::vector<GridCell> beta_grid;
    json summary = json::array();

    for (Index d : opt.d_list) {
        if (d < 1 || d > std::min(A.rows(), A.cols())) {
            throw ConfigError("gridsearch: d=" + std::to_string(d) + " out of range");
        }
        SpectralSummary s = truncated_svd(A, d);
        HyperparameterChoice choice = select_hyperparameters(s, d);

        std::ofstream csv(fs::path(opt.out_dir) / ("grid_d" + std::to_string(d) + ".csv"));
        csv << "k1,k2,p,bound,m1,stress,wall_time_ms,bound_optimal,stress_optimal\n";
        csv.precision(17);

        struct Row {
            Index k1, k2;
            double p, bound, m1v, stressv, ms;
        };
        std::vector<Row> rows;
        Index best_stress_k1 = 0;
        double best_stress = std::numeric_limits<double>::infinity();
        for (Index k1 = 0; k1 < d; ++k1) {
            auto t0 = std::chrono::steady_clock::now();
            DiffRedConfig cfg;
            cfg.k1 = k1;
            cfg.k2 = d - k1;
            cfg.eta = opt.eta;
            cfg.seed = opt.seed;
            cfg.threads = opt.threads;
            EmbeddingMatrix emb = diffred_embed(A, s, cfg);
            Row r;
            r.k1 = k1;
            r.k2 = d - k1;
            r.p = explained_variance(s, k1);
            r.bound = stress_bound(r.p, r.k2);
            r.m1v = m1(A.values, emb.values);
            r.stressv = run_stress(A.values, emb.values, smode, opt.threads);
            r.ms = elapsed_ms(t0);
            if (r.stressv < best_stress) {
                best_stress = r.stressv;
                best_stress_k1 = k1;
            }
            beta_grid.push_back({d, k1, r.k2, r.m1v});
            rows.push_back(r);
        }
        for (const Row& r : rows) {
            csv << r.k1 << ',' << r.k2 << ',' << r.p << ',' << r.bound << ',' << r.m1v << ','
                << r.stressv << ',' << r.ms << ',' << (r.k1 == choice.k1 ? 1 : 0) << ','
                << (r.k1 == best_stress_k1 ? 1 : 0) << '\n';
            std::cout << "d=" << d << " k1=" << r.k1 << " k2=" << r.k2 << " bound=" << r.bound
                      << " m1=" << r.m1v << " stress=" << r.stressv << '\n';
        }
        summary.push_back({{"d", d},
                           {"bound_optimal_k1", choice.k1},
                           {"stress_optimal_k1", best_stress_k1},
                           {"bound_optimal_stress", rows[static_cast<std::size_t>(choice.k1)].stressv},
                           {"grid_min_stress", best_stress}});
    }

    json out;
    out["per_d"] = summary;
    bool beta_ok = true;
    for (Index d : opt.d_list) {
        if (d < 2) {
            beta_ok = false;
        }
    }
    if (beta_ok) {
        out["beta"] = beta_sensitivity(beta_grid);
    } else {
        out["beta"] = nullptr; // needs >= 2 cells for every d
    }
    write_json(fs::path(opt.out_dir) / "gridsearch.json", out);
    return 0;
}

struct ValidateOptions {
    std::string input;
    std::string format;
    bool skip_header = false;
    std::string synth_spec; // "n,D,spikes..." alternative to --input
    std::size_t trials = 100;
    Index d = 10;
    std::size_t eta = 100;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out_dir = ".";
};

int cmd_validate(const ValidateOptions& opt) {
    if (opt.trials < 10) {
        throw ConfigError("validate: need at least 10 trials");
    }
    DataMatrix A;
    if (!opt.input.empty()) {
        A = load_input(opt.input, opt.format, opt.skip_header);
        if (!A.flags.column_centered) {
            A = preprocess(A);
        }
    } else if (!opt.synth_spec.empty()) {
        std::size_t c1 = opt.synth_spec.find(',');
        std::size_t c2 = opt.synth_spec.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw ConfigError("validate: --synth expects 'n,D,spikes'");
        }
        Index n = std::stol(opt.synth_spec.substr(0, c1));
        Index D = std::stol(opt.synth_spec.substr(c1 + 1, c2 - c1 - 1));
        SpectrumProfile profile = parse_spikes(opt.synth_spec.substr(c2 + 1));
        A = synth_spiked(n, D, profile, RandomStream(opt.seed, StreamPurpose::SynthData, 0));
        A.values.rowwise() -= A.values.colwise().mean();
        A.flags.column_centered = true;
    } else {
        throw ConfigError("validate: need --input or --synth");
    }

    SpectralSummary s = truncated_svd(A, opt.d);
    HyperparameterChoice choice = select_hyperparameters(s, opt.d);
    double p = choice.p;
    Index k1 = choice.k1;
    Index k2 = choice.k2;

    ResidualPair rp = residual(A, s, k1);
    double res_frob_sq = rp.A_star.squaredNorm();
    SpectralSummary rs = (k1 + 1 <= std::min(A.rows(), A.cols()))
                             ? truncated_svd(DataMatrix(rp.A_star, A.flags), 1)
                             : s;
    double rho_star = stable_rank(res_frob_sq, rs.sigma[0]);

    const double stress_threshold = 6.2 * std::sqrt(2.0 * (1.0 - p) / static_cast<double>(k2));
    const double m1_threshold = (1.0 - p) / std::sqrt(static_cast<double>(k2) * rho_star);

    std::size_t stress_ok = 0;
    std::size_t m1_ok = 0;
    for (std::size_t t = 0; t < opt.trials; ++t) {
        DiffRedConfig cfg;
        cfg.k1 = k1;
        cfg.k2 = k2;
        cfg.eta = opt.eta;
        cfg.seed = opt.seed + t;
        cfg.threads = opt.threads;
        EmbeddingMatrix emb = diffred_embed(A, s, cfg);
        double ls = stress_exact(A.values, emb.values, opt.threads);
        double lm = m1(A.values, emb.values);
        if (ls <= stress_threshold) {
            ++stress_ok;
        }
        if (lm <= m1_threshold) {
            ++m1_ok;
        }
    }

    // Gap between the bound-optimal cell and the empirical grid minimum.
    double bound_opt_stress = 0.0;
    double grid_min_stress = std::numeric_limits<double>::infinity();
    for (Index cand = 0; cand < opt.d; ++cand) {
        DiffRedConfig cfg;
        cfg.k1 = cand;
        cfg.k2 = opt.d - cand;
        cfg.eta = opt.eta;
        cfg.seed = opt.seed;
        cfg.threads = opt.threads;
        EmbeddingMatrix emb = diffred_embed(A, s, cfg);
        double ls = stress_exact(A.values, emb.values, opt.threads);
        if (cand == k1) {
            bound_opt_stress = ls;
        }
        grid_min_stress = std::min(grid_min_stress, ls);
    }
    double gap = (bound_opt_stress - grid_min_stress) / grid_min_stress;

    json out;
    out["d"] = opt.d;
    out["k1"] = k1;
    out["k2"] = k2;
    out["p"] = p;
    out["residual_stable_rank"] = rho_star;
    out["trials"] = opt.trials;
    out["stress_threshold"] = stress_threshold;
    out["stress_fraction_within_bound"] =
        static_cast<double>(stress_ok) / static_cast<double>(opt.trials);
    out["m1_threshold"] = m1_threshold;
    out["m1_fraction_within_bound"] = static_cast<double>(m1_ok) / static_cast<double>(opt.trials);
    out["bound_optimal_stress"] = bound_opt_stress;
    out["grid_min_stress"] = grid_min_stress;
    out["relative_gap"] = gap;
    fs::create_directories(opt.out_dir);
    write_json(fs::path(opt.out_dir) / "validate.json", out);
    std::cout << out.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DiffRed dimensionality reduction toolkit"};
    app.set_config("--config", "", "Flat key=value config file; flags override it");
    app.require_subcommand(1);

    // preprocess
    std::string pre_in, pre_format, pre_out, pre_zero = "abort";
    bool pre_skip_header = false, pre_force = false;
    auto* pre = app.add_subcommand("preprocess", "Row-normalize and column-center a dataset");
    pre->add_option("--input", pre_in)->required();
    pre->add_option("--format", pre_format)->check(CLI::IsMember({"csv", "bin"}));
    pre->add_flag("--skip-header", pre_skip_header);
    pre->add_option("--zero-rows", pre_zero)->check(CLI::IsMember({"abort", "drop"}));
    pre->add_option("--out", pre_out)->required();
    pre->add_flag("--force", pre_force);

    // synth
    Index sy_n = 0, sy_D = 0;
    std::string sy_spikes, sy_out, sy_format = "bin";
    std::uint64_t sy_seed = 0;
    auto* sy = app.add_subcommand("synth", "Generate data with a prescribed singular spectrum");
    sy->add_option("--n", sy_n)->required();
    sy->add_option("--D", sy_D)->required();
    sy->add_option("--spikes", sy_spikes, "e.g. 10,1x50")->required();
    sy->add_option("--seed", sy_seed);
    sy->add_option("--out", sy_out)->required();
    sy->add_option("--out-format", sy_format)->check(CLI::IsMember({"csv", "bin"}));

    // embed
    EmbedOptions eo;
    auto* em = app.add_subcommand("embed", "Compute an embedding and its metric report");
    em->add_option("--input", eo.input)->required();
    em->add_option("--format", eo.format)->check(CLI::IsMember({"csv", "bin"}));
    em->add_flag("--skip-header", eo.skip_header);
    em->add_option("--method", eo.method)->check(CLI::IsMember({"diffred", "pca", "rmap"}));
    em->add_option("--d", eo.d);
    em->add_option("--k1", eo.k1);
    em->add_option("--k2", eo.k2);
    em->add_option("--eta", eo.eta);
    em->add_option("--alpha", eo.alpha);
    em->add_option("--seed", eo.seed);
    em->add_option("--stress", eo.stress);
    em->add_option("--threads", eo.threads);
    em->add_option("--out", eo.out_dir);
    em->add_option("--out-format", eo.out_format)->check(CLI::IsMember({"csv", "bin"}));
    em->add_flag("--timing", eo.timing, "Record wall time in report.json (breaks byte determinism)");

    // gridsearch
    GridOptions go;
    auto* gr = app.add_subcommand("gridsearch", "Evaluate every (k1, k2) split per target dimension");
    gr->add_option("--input", go.input)->required();
    gr->add_option("--format", go.format)->check(CLI::IsMember({"csv", "bin"}));
    gr->add_flag("--skip-header", go.skip_header);
    gr->add_option("--d", go.d_list)->required()->delimiter(',');
    gr->add_option("--eta", go.eta);
    gr->add_option("--seed", go.seed);
    gr->add_option("--stress", go.stress);
    gr->add_option("--threads", go.threads);
    gr->add_option("--out", go.out_dir);

    // validate
    ValidateOptions vo;
    auto* va = app.add_subcommand("validate", "Empirical bound-validation report");
    va->add_option("--input", vo.input);
    va->add_option("--format", vo.format)->check(CLI::IsMember({"csv", "bin"}));
    va->add_flag("--skip-header", vo.skip_header);
    va->add_option("--synth", vo.synth_spec, "n,D,spikes");
    va->add_option("--trials", vo.trials);
    va->add_option("--d", vo.d);
    va->add_option("--eta", vo.eta);
    va->add_option("--seed", vo.seed);
    va->add_option("--threads", vo.threads);
    va->add_option("--out", vo.out_dir);

    // stablerank
    std::string sr_in, sr_format, sr_out = "stablerank.csv";
    bool sr_skip_header = false;
    Index sr_k1max = 0;
    auto* sr = app.add_subcommand("stablerank", "Residual stable rank curve");
    sr->add_option("--input", sr_in)->required();
    sr->add_option("--format", sr_format)->check(CLI::IsMember({"csv", "bin"}));
    sr->add_flag("--skip-header", sr_skip_header);
    sr->add_option("--k1-max", sr_k1max)->required();
    sr->add_option("--out", sr_out);

    // metrics
    std::string me_in, me_format, me_emb, me_emb_format, me_stress = "exact", me_out = "metrics.json";
    std::string me_match_out;
    bool me_skip_header = false;
    std::uint64_t me_seed = 0;
    int me_threads = 0;
    auto* me = app.add_subcommand("metrics", "M1 and Stress between a dataset and an embedding");
    me->add_option("--input", me_in)->required();
    me->add_option("--format", me_format)->check(CLI::IsMember({"csv", "bin"}));
    me->add_flag("--skip-header", me_skip_header);
    me->add_option("--embedding", me_emb)->required();
    me->add_option("--embedding-format", me_emb_format)->check(CLI::IsMember({"csv", "bin"}));
    me->add_option("--stress", me_stress);
    me->add_option("--seed", me_seed);
    me->add_option("--threads", me_threads);
    me->add_option("--energy-match", me_match_out,
                   "Rescale the embedding to match the data energy and write it here");
    me->add_option("--out", me_out);

    try {
        app.parse(argc, argv);

        if (*pre) {
            DataMatrix A = load_input(pre_in, pre_format, pre_skip_header);
            if ((A.flags.column_centered || A.flags.row_normalized) && !pre_force) {
                std::cerr << "refusing to preprocess twice (flags already set); use --force\n";
                return kExitConfig;
            }
            ZeroRowPolicy policy =
                pre_zero == "drop" ? ZeroRowPolicy::DropRow : ZeroRowPolicy::Abort;
            DataMatrix out = preprocess(A, policy);
            save_matrix(pre_out, FileFormat::Bin, out.values);
            write_preprocess_sidecar(pre_out, out.flags);
            std::cout << "wrote " << pre_out << " (" << out.rows() << "x" << out.cols() << ")\n";
            return 0;
        }
        if (*sy) {
            SpectrumProfile profile = parse_spikes(sy_spikes);
            DataMatrix A =
                synth_spiked(sy_n, sy_D, profile, RandomStream(sy_seed, StreamPurpose::SynthData, 0));
            save_matrix(sy_out, parse_format(sy_format), A.values);
            std::cout << "wrote " << sy_out << " (" << sy_n << "x" << sy_D << ", "
                      << profile.size() << " spikes)\n";
            return 0;
        }
        if (*em) {
            return cmd_embed(eo);
        }
        if (*gr) {
            return cmd_gridsearch(go);
        }
        if (*va) {
            return cmd_validate(vo);
        }
        if (*sr) {
            DataMatrix A = load_input(sr_in, sr_format, sr_skip_header);
            auto curve = residual_stable_rank_curve(A, sr_k1max);
            std::ofstream out(sr_out);
            if (!out) {
                throw IoError("cannot write " + sr_out);
            }
            out << "k1,stable_rank\n";
            out.precision(17);
            for (auto [k1, rho] : curve) {
                out << k1 << ',' << rho << '\n';
                std::cout << "k1=" << k1 << " rho=" << rho << '\n';
            }
            if (static_cast<Index>(curve.size()) <= sr_k1max) {
                std::cerr << "note: residual vanished; curve truncated at k1="
                          << curve.size() << '\n';
            }
            return 0;
        }
        if (*me) {
            auto t0 = std::chrono::steady_clock::now();
            DataMatrix A = load_input(me_in, me_format, me_skip_header);
            FileFormat efmt =
                me_emb_format.empty() ? guess_format(me_emb) : parse_format(me_emb_format);
            DataMatrix E = load_matrix(me_emb, efmt);
            Matrix emb = E.values;
            if (!me_match_out.empty()) {
                EmbeddingMatrix wrapped;
                wrapped.values = emb;
                emb = energy_match(wrapped, A).values;
                save_matrix(me_match_out, guess_format(me_match_out), emb);
            }
            MetricReport report;
            report.stress_mode = parse_stress(me_stress, me_seed);
            report.m1 = m1(A.values, emb);
            report.stress = run_stress(A.values, emb, report.stress_mode, me_threads);
            report.wall_time_ms = elapsed_ms(t0);
            report.provenance = {{"input", me_in}, {"embedding", me_emb}, {"seed", me_seed}};
            write_json(me_out, report.to_json());
            std::cout << "m1=" << report.m1 << " stress=" << report.stress << '\n';
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitIo;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
