#include "crackscat/nn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "crackscat/kernels.hpp"

namespace crackscat::nn {

const char* kind_name(NetKind k) {
    switch (k) {
        case NetKind::N1: return "N1";
        case NetKind::N2: return "N2";
        case NetKind::N3: return "N3";
    }
    return "?";
}

NetKind kind_from_name(const std::string& name) {
    if (name == "N1" || name == "n1") return NetKind::N1;
    if (name == "N2" || name == "n2") return NetKind::N2;
    if (name == "N3" || name == "n3") return NetKind::N3;
    throw Error("unknown network kind: " + name + " (expected N1, N2 or N3)");
}

size_t MlpModel::parameter_count() const {
    size_t n = 0;
    for (int l = 0; l < layer_count(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

std::vector<double> MlpModel::forward(const std::vector<double>& input) const {
    if (static_cast<int>(input.size()) != input_dim())
        throw Error("forward: input length mismatch");
    std::vector<double> cur = input, next;
    for (int l = 0; l < layer_count(); ++l) {
        const int in = widths[l], out = widths[l + 1];
        next.assign(out, 0.0);
        for (int o = 0; o < out; ++o)
            next[o] = biases[l][o] + kern::dot(&weights[l][static_cast<size_t>(o) * in],
                                               cur.data(), in);
        if (l + 1 < layer_count())
            for (double& z : next) z = std::tanh(z);
        cur.swap(next);
    }
    return cur;
}

MlpModel init_model(NetKind kind, const std::vector<int>& widths, uint64_t seed) {
    if (widths.size() < 2) throw Error("init_model: need at least input and output widths");
    MlpModel m;
    m.kind = kind;
    m.widths = widths;
    Rng rng(mix64(seed));
    for (int l = 0; l + 1 < static_cast<int>(widths.size()); ++l) {
        const int in = widths[l], out = widths[l + 1];
        const double bound = std::sqrt(6.0 / (in + out));
        std::vector<double> w(static_cast<size_t>(in) * out);
        for (double& x : w) x = rng.uniform(-bound, bound);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(out, 0.0);
    }
    return m;
}

Gradients Gradients::zeros_like(const MlpModel& m) {
    Gradients g;
    for (int l = 0; l < m.layer_count(); ++l) {
        g.weights.emplace_back(m.weights[l].size(), 0.0);
        g.biases.emplace_back(m.biases[l].size(), 0.0);
    }
    return g;
}

AdamState AdamState::zeros_like(const MlpModel& m) {
    AdamState s;
    for (int l = 0; l < m.layer_count(); ++l) {
        s.m_w.emplace_back(m.weights[l].size(), 0.0);
        s.v_w.emplace_back(m.weights[l].size(), 0.0);
        s.m_b.emplace_back(m.biases[l].size(), 0.0);
        s.v_b.emplace_back(m.biases[l].size(), 0.0);
    }
    return s;
}

double forward_backward(const MlpModel& model, const double* x, const double* target, int batch,
                        Gradients& grads) {
    if (batch < 1) throw Error("forward_backward: empty batch");
    const int layers = model.layer_count();
    const int out_dim = model.output_dim();

    // activations[0] is the input view; activations[l+1] the layer outputs
    std::vector<std::vector<double>> act(layers + 1);
    act[0].assign(x, x + static_cast<size_t>(batch) * model.input_dim());
    for (int l = 0; l < layers; ++l) {
        const int in = model.widths[l], out = model.widths[l + 1];
        act[l + 1].assign(static_cast<size_t>(batch) * out, 0.0);
        for (int b = 0; b < batch; ++b) {
            const double* row = &act[l][static_cast<size_t>(b) * in];
            double* zrow = &act[l + 1][static_cast<size_t>(b) * out];
            for (int o = 0; o < out; ++o)
                zrow[o] = model.biases[l][o]
                          + kern::dot(&model.weights[l][static_cast<size_t>(o) * in], row, in);
        }
        if (l + 1 < layers)
            for (double& z : act[l + 1]) z = std::tanh(z);
    }

    // loss and output delta
    double loss = 0;
    std::vector<double> delta(static_cast<size_t>(batch) * out_dim);
    const double inv = 1.0 / (static_cast<double>(batch) * out_dim);
    for (size_t i = 0; i < delta.size(); ++i) {
        const double e = act[layers][i] - target[i];
        loss += e * e;
        delta[i] = 2.0 * e * inv;
    }
    loss *= inv;

    for (int l = 0; l < layers; ++l) {
        std::fill(grads.weights[l].begin(), grads.weights[l].end(), 0.0);
        std::fill(grads.biases[l].begin(), grads.biases[l].end(), 0.0);
    }

    std::vector<double> prev_delta;
    for (int l = layers - 1; l >= 0; --l) {
        const int in = model.widths[l], out = model.widths[l + 1];
        for (int b = 0; b < batch; ++b) {
            const double* arow = &act[l][static_cast<size_t>(b) * in];
            const double* drow = &delta[static_cast<size_t>(b) * out];
            for (int o = 0; o < out; ++o) {
                kern::axpy(drow[o], arow, &grads.weights[l][static_cast<size_t>(o) * in], in);
                grads.biases[l][o] += drow[o];
            }
        }
        if (l == 0) break;
        // pull the delta through W and the tanh derivative of act[l]
        prev_delta.assign(static_cast<size_t>(batch) * in, 0.0);
        for (int b = 0; b < batch; ++b) {
            const double* drow = &delta[static_cast<size_t>(b) * out];
            double* prow = &prev_delta[static_cast<size_t>(b) * in];
            for (int o = 0; o < out; ++o)
                kern::axpy(drow[o], &model.weights[l][static_cast<size_t>(o) * in], prow, in);
        }
        kern::tanh_backward(act[l].data(), prev_delta.data(), prev_delta.data(),
                            prev_delta.size());
        delta.swap(prev_delta);
    }
    return loss;
}

void adam_step(MlpModel& model, const Gradients& grads, AdamState& state, double lr) {
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (int l = 0; l < model.layer_count(); ++l) {
        kern::adam_update(model.weights[l].data(), state.m_w[l].data(), state.v_w[l].data(),
                          grads.weights[l].data(), model.weights[l].size(), lr, state.beta1,
                          state.beta2, state.eps, bc1, bc2);
        kern::adam_update(model.biases[l].data(), state.m_b[l].data(), state.v_b[l].data(),
                          grads.biases[l].data(), model.biases[l].size(), lr, state.beta1,
                          state.beta2, state.eps, bc1, bc2);
    }
}

namespace {

// Gathers the per-kind target row for sample i of the dataset.
void fill_target(NetKind kind, const dataset::Dataset& data, uint64_t i, double* t) {
    const float* tn = &data.targets_norm[i * 2];
    if (kind == NetKind::N1) {
        t[0] = tn[0];
    } else {
        t[0] = tn[0];
        t[1] = tn[1];
    }
}

double eval_mse(const MlpModel& model, const dataset::Dataset& data,
                const std::vector<uint64_t>& idx) {
    const int in = model.input_dim(), out = model.output_dim();
    std::vector<double> x(in), t(out);
    double acc = 0;
    for (uint64_t i : idx) {
        const float* src = data.input(i);
        for (int j = 0; j < in; ++j) x[j] = src[j];
        fill_target(model.kind, data, i, t.data());
        const std::vector<double> y = model.forward(x);
        for (int o = 0; o < out; ++o) acc += (y[o] - t[o]) * (y[o] - t[o]);
    }
    return acc / (static_cast<double>(idx.size()) * out);
}

}  // namespace

TrainResult train(NetKind kind, const dataset::Dataset& data, const TrainConfig& cfg) {
    const int in_dim = 2 * static_cast<int>(data.n_obs);
    const int out_dim = (kind == NetKind::N1) ? 1 : 2;

    std::vector<uint64_t> idx;
    for (uint64_t i = 0; i < data.count; ++i) {
        const float theta = data.targets_raw[i * 2];
        if (kind == NetKind::N2 && !(theta < 0)) continue;
        if (kind == NetKind::N3 && theta < 0) continue;
        idx.push_back(i);
    }
    if (idx.empty())
        throw Error(std::string("train: no samples match the ") + kind_name(kind) + " filter");

    Rng rng(mix64(cfg.seed ^ static_cast<uint64_t>(kind)));
    // seeded Fisher-Yates; the shuffle owns the sample order
    auto shuffle = [&rng](std::vector<uint64_t>& v) {
        for (size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.uniform_index(i)]);
    };
    shuffle(idx);

    const size_t val_count =
        std::min(idx.size() - 1, static_cast<size_t>(std::ceil(idx.size() * cfg.val_frac)));
    std::vector<uint64_t> val_idx(idx.begin(), idx.begin() + val_count);
    std::vector<uint64_t> train_idx(idx.begin() + val_count, idx.end());

    MlpModel model = init_model(kind, {in_dim, 80, 80, 80, out_dim}, cfg.seed);
    AdamState adam = AdamState::zeros_like(model);
    Gradients grads = Gradients::zeros_like(model);

    TrainResult res;
    res.best_val_mse = std::numeric_limits<double>::infinity();
    int stale = 0, lr_stale = 0;
    double lr = cfg.lr;

    std::vector<double> xbuf, tbuf;
    const auto t0 = std::chrono::steady_clock::now();
    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle(train_idx);
        double train_loss = 0;
        size_t seen = 0;
        for (size_t base = 0; base < train_idx.size(); base += cfg.batch) {
            const int b = static_cast<int>(std::min<size_t>(cfg.batch, train_idx.size() - base));
            xbuf.assign(static_cast<size_t>(b) * in_dim, 0.0);
            tbuf.assign(static_cast<size_t>(b) * out_dim, 0.0);
            for (int r = 0; r < b; ++r) {
                const uint64_t i = train_idx[base + r];
                const float* src = data.input(i);
                for (int j = 0; j < in_dim; ++j) xbuf[static_cast<size_t>(r) * in_dim + j] = src[j];
                fill_target(kind, data, i, &tbuf[static_cast<size_t>(r) * out_dim]);
            }
            const double loss = forward_backward(model, xbuf.data(), tbuf.data(), b, grads);
            adam_step(model, grads, adam, lr);
            train_loss += loss * b;
            seen += b;
        }
        train_loss /= static_cast<double>(seen);
        const double val_loss = val_idx.empty() ? train_loss : eval_mse(model, data, val_idx);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        res.log.push_back({epoch, train_loss, val_loss, secs});
        if (cfg.on_epoch) cfg.on_epoch(res.log.back());

        if (val_loss < res.best_val_mse) {
            res.best_val_mse = val_loss;
            res.model = model;
            stale = 0;
            lr_stale = 0;
        } else {
            ++stale;
            ++lr_stale;
            const bool can_decay = cfg.lr_decay < 1.0 && lr * cfg.lr_decay >= cfg.min_lr;
            if (can_decay && lr_stale >= cfg.lr_patience) {
                lr *= cfg.lr_decay;
                lr_stale = 0;
            } else if (!can_decay && stale >= cfg.patience) {
                break;
            }
        }
    }
    if (res.model.widths.empty()) res.model = model;
    return res;
}

// ---------------------------------------------------------- checkpointing --

namespace {
constexpr char kModelMagic[4] = {'C', 'R', 'K', 'M'};
}

void save_model(const MlpModel& model, const std::string& path, const std::string& config_echo) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + path + " for writing");
    f.write(kModelMagic, 4);
    const uint32_t version = kModelVersion;
    f.write(reinterpret_cast<const char*>(&version), 4);
    const uint32_t kind = static_cast<uint32_t>(model.kind);
    f.write(reinterpret_cast<const char*>(&kind), 4);
    const uint32_t nw = static_cast<uint32_t>(model.widths.size());
    f.write(reinterpret_cast<const char*>(&nw), 4);
    for (int w : model.widths) {
        const uint32_t wu = static_cast<uint32_t>(w);
        f.write(reinterpret_cast<const char*>(&wu), 4);
    }
    const uint32_t clen = static_cast<uint32_t>(config_echo.size());
    f.write(reinterpret_cast<const char*>(&clen), 4);
    f.write(config_echo.data(), clen);
    for (int l = 0; l < model.layer_count(); ++l) {
        f.write(reinterpret_cast<const char*>(model.weights[l].data()),
                static_cast<std::streamsize>(model.weights[l].size() * 8));
        f.write(reinterpret_cast<const char*>(model.biases[l].data()),
                static_cast<std::streamsize>(model.biases[l].size() * 8));
    }
    if (!f) throw Error("write failure on " + path);
}

namespace {

ModelHeader read_header_stream(std::ifstream& f, const std::string& path) {
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kModelMagic, 4) != 0)
        throw Error(path + ": not a CRKM checkpoint (bad magic)");
    auto get32 = [&]() {
        uint32_t v;
        f.read(reinterpret_cast<char*>(&v), 4);
        if (!f) throw Error(path + ": truncated header");
        return v;
    };
    ModelHeader h;
    h.version = get32();
    if (h.version != kModelVersion)
        throw Error(path + ": unsupported CRKM version " + std::to_string(h.version));
    const uint32_t kind = get32();
    if (kind < 1 || kind > 3) throw Error(path + ": bad network kind tag");
    h.kind = static_cast<NetKind>(kind);
    const uint32_t nw = get32();
    if (nw < 2 || nw > 64) throw Error(path + ": implausible layer count");
    h.widths.resize(nw);
    for (uint32_t i = 0; i < nw; ++i) h.widths[i] = static_cast<int>(get32());
    const uint32_t clen = get32();
    h.config_echo.resize(clen);
    f.read(h.config_echo.data(), clen);
    if (!f) throw Error(path + ": truncated config block");
    return h;
}

}  // namespace

ModelHeader read_model_header(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    return read_header_stream(f, path);
}

MlpModel load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    const ModelHeader h = read_header_stream(f, path);
    MlpModel m;
    m.kind = h.kind;
    m.widths = h.widths;
    for (size_t l = 0; l + 1 < h.widths.size(); ++l) {
        const size_t in = h.widths[l], out = h.widths[l + 1];
        std::vector<double> w(in * out), b(out);
        f.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(w.size() * 8));
        f.read(reinterpret_cast<char*>(b.data()), static_cast<std::streamsize>(b.size() * 8));
        if (!f) throw Error(path + ": truncated parameters");
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    f.peek();
    if (!f.eof()) throw Error(path + ": trailing bytes after parameters");
    return m;
}

void write_log_csv(const std::vector<EpochLog>& log, const std::string& path,
                   const std::string& config_echo) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path);
    if (!config_echo.empty()) {
        std::string line;
        std::istringstream in(config_echo);
        while (std::getline(in, line)) f << "# " << line << "\n";
    }
    f << "epoch,train_mse,val_mse,wall_time\n";
    f.precision(12);
    for (const EpochLog& e : log)
        f << e.epoch << "," << e.train_mse << "," << e.val_mse << "," << e.seconds << "\n";
}

}  // namespace crackscat::nn
