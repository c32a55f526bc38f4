// crackscat: crack identification from far-circle scattering data.
//
// Subcommands cover the whole pipeline: gen-data (training data), train
// (one of the three networks), eval (the 1000-trial protocol), verify-stability
// (Monte-Carlo stability harness), field-grid (total-field maps) and info
// (artifact headers). Configuration resolves defaults < config file < flags,
// and every artifact records the resolved configuration it was made with.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "crackscat/common.hpp"
#include "crackscat/dataset.hpp"
#include "crackscat/forward.hpp"
#include "crackscat/inverse.hpp"
#include "crackscat/nn.hpp"
#include "crackscat/stability.hpp"

using namespace crackscat;

namespace {

struct RunConfig {
    PhysicsConfig phys;
    uint64_t seed = 1;
};

// plain key=value lines, '#' starts a comment
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const size_t b2 = s.find_first_not_of(" \t");
            const size_t e2 = s.find_last_not_of(" \t");
            return b2 == std::string::npos ? std::string() : s.substr(b2, e2 - b2 + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_config_file(RunConfig& rc, const std::string& path) {
    for (const auto& [key, value] : read_config_file(path)) {
        try {
            if (key == "k") rc.phys.k = std::stod(value);
            else if (key == "R") rc.phys.radius = std::stod(value);
            else if (key == "a_max") rc.phys.a_max = std::stod(value);
            else if (key == "n_obs") rc.phys.n_obs = std::stoi(value);
            else if (key == "n_gamma") rc.phys.n_gamma = std::stoi(value);
            else if (key == "n_lead") rc.phys.n_lead = std::stoi(value);
            else if (key == "seed") rc.seed = std::stoull(value);
            else throw Error("unknown config key '" + key + "' in " + path);
        } catch (const std::invalid_argument&) {
            throw Error("bad value for '" + key + "' in " + path);
        }
    }
}

std::string config_echo(const RunConfig& rc, const std::string& extra = "") {
    std::ostringstream os;
    os.precision(17);
    os << "k=" << rc.phys.k << "\nR=" << rc.phys.radius << "\nN_S=" << rc.phys.n_obs
       << "\nN_Gamma=" << rc.phys.n_gamma << "\nN=" << rc.phys.n_lead
       << "\na_max=" << rc.phys.a_max << "\nseed=" << rc.seed << "\n";
    os << extra;
    return os.str();
}

int run(int argc, char** argv) {
    CLI::App app{"crack inverse scattering toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    RunConfig rc;
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (flags override it)");
    auto* ok = app.add_option("--k", rc.phys.k, "wavenumber");
    auto* oR = app.add_option("--R", rc.phys.radius, "observation circle radius");
    auto* oamax = app.add_option("--a-max", rc.phys.a_max, "offset bound a_max");
    auto* onobs = app.add_option("--n-obs", rc.phys.n_obs, "observation point count N_S");
    auto* ongam = app.add_option("--n-gamma", rc.phys.n_gamma, "coarse quadrature nodes N_Gamma");
    auto* onlead = app.add_option("--n-lead", rc.phys.n_lead, "leading singular vectors N");
    auto* oseed = app.add_option("--seed", rc.seed, "master seed");

    // ---- gen-data
    auto* gen = app.add_subcommand("gen-data", "generate a CRKD training dataset");
    uint64_t gen_count = 0;
    std::string gen_out;
    gen->add_option("--count", gen_count, "number of samples")->required();
    gen->add_option("--out", gen_out, "output dataset path")->required();

    // ---- train
    auto* trn = app.add_subcommand("train", "train one of the networks N1/N2/N3");
    std::string trn_data, trn_net, trn_out, trn_log;
    nn::TrainConfig tc;
    trn->add_option("--data", trn_data, "CRKD dataset path")->required();
    trn->add_option("--net", trn_net, "network kind: N1, N2 or N3")->required();
    trn->add_option("--out", trn_out, "checkpoint output path")->required();
    trn->add_option("--log", trn_log, "training log CSV (default: <out>.log.csv)");
    trn->add_option("--lr", tc.lr, "ADAM learning rate");
    trn->add_option("--batch", tc.batch, "minibatch size");
    trn->add_option("--epochs", tc.max_epochs, "maximum epochs");
    trn->add_option("--patience", tc.patience, "early-stop patience in epochs");
    trn->add_option("--val-frac", tc.val_frac, "validation fraction");
    trn->add_option("--lr-decay", tc.lr_decay, "plateau decay factor (1 disables)");
    trn->add_option("--lr-patience", tc.lr_patience, "stale epochs before a decay step");
    trn->add_option("--min-lr", tc.min_lr, "decay floor for the learning rate");

    // ---- eval
    auto* ev = app.add_subcommand("eval", "run the randomized recovery protocol");
    std::string ev_models, ev_out;
    inverse::EvalConfig ec;
    ev->add_option("--models", ev_models, "directory with n1.crkm, n2.crkm, n3.crkm")->required();
    ev->add_option("--trials", ec.trials, "number of trials");
    ev->add_option("--noise", ec.noise_amplitude, "noise amplitude (fraction of sup norm)");
    ev->add_option("--out", ev_out, "trial CSV output path");
    ev->add_option("--n-dense", ec.n_dense, "dense solver grid size");
    ev->add_option("--trunc-tol", ec.trunc_tol, "relative SVD truncation tolerance");

    // ---- verify-stability
    auto* vs = app.add_subcommand("verify-stability", "Monte-Carlo stability harness");
    std::string vs_family = "crack", vs_out;
    int vs_n = 5, vs_samples = 10000, vs_sweep = 0;
    bool vs_u2 = false;
    vs->add_option("--family", vs_family, "crack | example1 | example2 | broken");
    vs->add_option("--N", vs_n, "leading subspace dimension");
    vs->add_option("--samples", vs_samples, "Monte-Carlo sample count");
    vs->add_option("--out", vs_out, "report path (ratios CSV lands at <out>.ratios.csv)");
    vs->add_option("--sweep", vs_sweep, "also sweep N = 1..SWEEP, CSV of (N, min_ratio)");
    vs->add_flag("--u2", vs_u2, "sweep the u2 injectivity margin over a parameter grid");

    // ---- field-grid
    auto* fg = app.add_subcommand("field-grid", "sample the total field on a square grid");
    forward::CaseSpec fg_case;
    CrackGeometry fg_geom;
    SupportInterval fg_sup;
    std::string fg_out;
    double fg_extent = 6.0, fg_srcx = 6.0, fg_srcy = 0.0, fg_trunc = 1e-10;
    int fg_res = 81, fg_ndense = 256;
    fg->add_option("--case", fg_case.kind, "excitation case 1-4")->required();
    fg->add_option("--eta-angle", fg_case.eta_angle, "incidence angle (case 1)");
    fg->add_option("--source-x", fg_srcx, "source x (cases 2-3)");
    fg->add_option("--source-y", fg_srcy, "source y (cases 2-3)");
    fg->add_option("--theta", fg_geom.theta, "crack angle");
    fg->add_option("--a", fg_geom.a, "crack offset");
    fg->add_option("--o", fg_sup.o, "support center");
    fg->add_option("--l", fg_sup.l, "support length");
    fg->add_option("--extent", fg_extent, "grid covers [-extent, extent]^2");
    fg->add_option("--res", fg_res, "samples per axis");
    fg->add_option("--n-dense", fg_ndense, "dense solver grid size");
    fg->add_option("--trunc-tol", fg_trunc, "relative SVD truncation tolerance");
    fg->add_option("--out", fg_out, "output CSV")->required();

    // ---- info
    auto* info = app.add_subcommand("info", "print the header of an artifact");
    std::string info_data, info_model;
    info->add_option("--data", info_data, "CRKD dataset path");
    info->add_option("--model", info_model, "CRKM checkpoint path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // resolution order: defaults, then file, then explicit flags
    if (!config_path.empty()) {
        RunConfig from_file;
        apply_config_file(from_file, config_path);
        if (!*ok) rc.phys.k = from_file.phys.k;
        if (!*oR) rc.phys.radius = from_file.phys.radius;
        if (!*oamax) rc.phys.a_max = from_file.phys.a_max;
        if (!*onobs) rc.phys.n_obs = from_file.phys.n_obs;
        if (!*ongam) rc.phys.n_gamma = from_file.phys.n_gamma;
        if (!*onlead) rc.phys.n_lead = from_file.phys.n_lead;
        if (!*oseed) rc.seed = from_file.seed;
    }

    if (gen->parsed()) {
        dataset::SampleConfig cfg;
        cfg.phys = rc.phys;
        cfg.seed = rc.seed;
        uint64_t last_pct = ~0ull;
        dataset::generate_dataset(cfg, gen_count, gen_out,
                                  [&](uint64_t done, uint64_t total) {
                                      const uint64_t pct = 100 * done / total;
                                      if (pct != last_pct) {
                                          std::fprintf(stderr, "\rgen-data: %3llu%% (%llu/%llu)",
                                                       (unsigned long long)pct,
                                                       (unsigned long long)done,
                                                       (unsigned long long)total);
                                          last_pct = pct;
                                      }
                                  });
        std::fprintf(stderr, "\n");
        std::cout << "wrote " << gen_out << " (" << gen_count << " samples)\n";
        return 0;
    }

    if (trn->parsed()) {
        tc.seed = rc.seed;
        tc.on_epoch = [](const nn::EpochLog& e) {
            std::fprintf(stderr, "\repoch %4d  train %.6f  val %.6f  %.0fs ", e.epoch,
                         e.train_mse, e.val_mse, e.seconds);
        };
        const dataset::Dataset data = dataset::load_dataset(trn_data);
        const nn::NetKind kind = nn::kind_from_name(trn_net);
        const nn::TrainResult res = nn::train(kind, data, tc);
        std::fprintf(stderr, "\n");
        std::ostringstream extra;
        extra.precision(17);
        extra << "net=" << nn::kind_name(kind) << "\nlr=" << tc.lr << "\nbatch=" << tc.batch
              << "\nepochs=" << tc.max_epochs << "\npatience=" << tc.patience
              << "\nval_frac=" << tc.val_frac << "\ndata=" << trn_data << "\n";
        const std::string echo = config_echo(rc, extra.str());
        nn::save_model(res.model, trn_out, echo);
        nn::write_log_csv(res.log, trn_log.empty() ? trn_out + ".log.csv" : trn_log, echo);
        std::cout << "net=" << nn::kind_name(kind) << "\nepochs_run=" << res.log.size()
                  << "\nbest_val_mse=" << res.best_val_mse << "\ncheckpoint=" << trn_out << "\n";
        return 0;
    }

    if (ev->parsed()) {
        ec.seed = rc.seed;
        const inverse::ModelTriple models = inverse::load_models(ev_models);
        const inverse::EvalOutput out = inverse::evaluate(models, rc.phys, ec);
        std::ostringstream extra;
        extra.precision(17);
        extra << "trials=" << ec.trials << "\nnoise=" << ec.noise_amplitude
              << "\nn_dense=" << ec.n_dense << "\n";
        if (!ev_out.empty()) {
            inverse::write_trials_csv(out, ev_out, config_echo(rc, extra.str()));
            std::ofstream sf(ev_out + ".sorted.csv");
            sf << "rank,err_sin_theta,err_a\n";
            sf.precision(12);
            for (size_t i = 0; i < out.sorted_err_sin_theta.size(); ++i)
                sf << i << "," << out.sorted_err_sin_theta[i] << "," << out.sorted_err_a[i]
                   << "\n";
        }
        std::cout.precision(12);
        std::cout << "trials=" << out.summary.trials << "\nfailures=" << out.summary.failures
                  << "\nnoise=" << out.summary.noise_amplitude << "\nseed=" << out.summary.seed
                  << "\nmean_err_sin_theta=" << out.summary.mean_err_sin_theta
                  << "\nmean_err_a=" << out.summary.mean_err_a << "\n";
        return 0;
    }

    if (vs->parsed()) {
        const spectral::OperatorFamily fam = spectral::family_by_name(vs_family, rc.phys);
        if (vs_sweep > 0) {
            std::ostringstream csv;
            csv << "N,min_ratio\n";
            csv.precision(17);
            for (int n = 1; n <= vs_sweep; ++n) {
                const spectral::StabilityReport r =
                    spectral::estimate_stability_constant(fam, n, vs_samples, rc.seed);
                csv << n << "," << r.min_ratio << "\n";
            }
            if (vs_out.empty()) std::cout << csv.str();
            else {
                std::ofstream f(vs_out);
                if (!f) throw Error("cannot write " + vs_out);
                f << csv.str();
                std::cout << "wrote " << vs_out << "\n";
            }
            return 0;
        }
        const spectral::StabilityReport rep =
            spectral::estimate_stability_constant(fam, vs_n, vs_samples, rc.seed);
        std::string text = rep.to_key_values();
        if (vs_u2 || vs_family == "broken") {
            std::ostringstream os;
            os.precision(17);
            os << "u2_margin_min=" << spectral::u2_margin_grid(fam, 5, 8) << "\n";
            text += os.str();
        }
        if (vs_out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(vs_out);
            if (!f) throw Error("cannot write " + vs_out);
            std::istringstream in(config_echo(rc));
            std::string line;
            while (std::getline(in, line)) f << "# " << line << "\n";
            f << text;
            std::ofstream csv(vs_out + ".ratios.csv");
            if (!csv) throw Error("cannot write " + vs_out + ".ratios.csv");
            csv << "sample,ratio\n";
            csv.precision(17);
            for (size_t i = 0; i < rep.ratios.size(); ++i) csv << i << "," << rep.ratios[i] << "\n";
            std::cout << "wrote " << vs_out << "\n";
        }
        return 0;
    }

    if (fg->parsed()) {
        if (fg_case.kind == 2 || fg_case.kind == 3) fg_case.source = {fg_srcx, fg_srcy};
        const forward::FieldGrid grid = forward::total_field_grid(
            fg_case, fg_geom, fg_sup, rc.phys, fg_extent, fg_res, fg_ndense, fg_trunc);
        std::ofstream f(fg_out);
        if (!f) throw Error("cannot write " + fg_out);
        std::istringstream in(config_echo(rc));
        std::string line;
        while (std::getline(in, line)) f << "# " << line << "\n";
        f << "x,y,re_total,im_total,masked\n";
        f.precision(12);
        for (const forward::FieldSample& s : grid.samples)
            f << s.p.x << "," << s.p.y << "," << s.total.real() << "," << s.total.imag() << ","
              << (s.masked ? 1 : 0) << "\n";
        std::cout << "wrote " << fg_out << " (" << grid.samples.size() << " samples)\n";
        return 0;
    }

    if (info->parsed()) {
        if (info_data.empty() == info_model.empty())
            throw CLI::ValidationError("info", "pass exactly one of --data or --model");
        {
            const std::string& path = info_data.empty() ? info_model : info_data;
            std::ifstream probe(path, std::ios::binary);
            if (!probe) throw Error("cannot open " + path);
            char magic[4] = {0, 0, 0, 0};
            probe.read(magic, 4);
            const std::string m(magic, 4);
            if (m != "CRKD" && m != "CRKM")
                throw Error(path + ": unrecognized magic '" + m
                            + "' (expected CRKD for datasets or CRKM for models)");
        }
        if (!info_data.empty()) {
            const dataset::DatasetHeader h = dataset::read_dataset_header(info_data);
            std::cout << "type=dataset\nversion=" << h.version << "\ncount=" << h.count
                      << "\nN_S=" << h.n_obs << "\nN=" << h.n_lead << "\nk=" << h.k
                      << "\nR=" << h.radius << "\nseed=" << h.seed << "\n";
        } else {
            const nn::ModelHeader h = nn::read_model_header(info_model);
            std::cout << "type=model\nversion=" << h.version
                      << "\nnet=" << nn::kind_name(h.kind) << "\nwidths=";
            for (size_t i = 0; i < h.widths.size(); ++i)
                std::cout << (i ? "x" : "") << h.widths[i];
            std::cout << "\n";
            if (!h.config_echo.empty()) {
                std::istringstream in(h.config_echo);
                std::string line;
                while (std::getline(in, line)) std::cout << "config." << line << "\n";
            }
        }
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
