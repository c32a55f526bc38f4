#pragma once

// From-scratch MLP (80-80-80-80-out, tanh hidden layers, linear head) with
// minibatch ADAM training and CRKM checkpoints. Three networks share the
// trunk shape: N1 regresses normalized theta only (its sign routes), N2 and
// N3 regress (theta, a) on the negative/non-negative theta halves.
//
// CRKM layout (little-endian):
//   magic "CRKM" | version u32 | kind u32 (1..3) | n_widths u32 |
//   widths u32[n_widths] | config_len u32 | config bytes |
//   f64 parameters, per layer: weight rows then biases.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "crackscat/common.hpp"
#include "crackscat/dataset.hpp"

namespace crackscat::nn {

inline constexpr uint32_t kModelVersion = 1;

enum class NetKind : uint32_t { N1 = 1, N2 = 2, N3 = 3 };

const char* kind_name(NetKind k);
NetKind kind_from_name(const std::string& name);

struct MlpModel {
    NetKind kind = NetKind::N1;
    std::vector<int> widths;  // {in, hidden..., out}
    // layer l: weights[l] is widths[l+1] x widths[l] row-major
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    int input_dim() const { return widths.front(); }
    int output_dim() const { return widths.back(); }
    int layer_count() const { return static_cast<int>(widths.size()) - 1; }
    size_t parameter_count() const;

    std::vector<double> forward(const std::vector<double>& input) const;
};

// Xavier-uniform weights, zero biases.
MlpModel init_model(NetKind kind, const std::vector<int>& widths, uint64_t seed);

struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    static Gradients zeros_like(const MlpModel& m);
};

// Mean-squared-error loss over the batch (mean over samples and output
// coordinates). Returns the batch loss and fills `grads` with exact
// gradients. Inputs/targets are row-major batch x dim.
double forward_backward(const MlpModel& model, const double* x, const double* target, int batch,
                        Gradients& grads);

struct AdamState {
    std::vector<std::vector<double>> m_w, v_w, m_b, v_b;
    int64_t step = 0;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    static AdamState zeros_like(const MlpModel& m);
};

void adam_step(MlpModel& model, const Gradients& grads, AdamState& state, double lr);

struct TrainConfig {
    double lr = 1e-3;
    int batch = 256;
    int max_epochs = 200;
    int patience = 10;  // epochs without validation improvement before stopping
    double val_frac = 0.05;
    uint64_t seed = 1;
    // halve the rate when validation stalls; training stops once the rate
    // has bottomed out and patience is exhausted
    double lr_decay = 0.5;
    int lr_patience = 5;
    double min_lr = 1e-5;

    std::function<void(const struct EpochLog&)> on_epoch;  // progress reporting
};

struct EpochLog {
    int epoch;
    double train_mse;
    double val_mse;
    double seconds;
};

struct TrainResult {
    MlpModel model;  // best-validation checkpoint
    std::vector<EpochLog> log;
    double best_val_mse = 0;
};

// Filters the dataset per network kind (N1: all, theta target only;
// N2: theta < 0; N3: theta >= 0) and runs minibatch ADAM.
TrainResult train(NetKind kind, const dataset::Dataset& data, const TrainConfig& cfg);

void save_model(const MlpModel& model, const std::string& path,
                const std::string& config_echo = "");
MlpModel load_model(const std::string& path);

struct ModelHeader {
    uint32_t version;
    NetKind kind;
    std::vector<int> widths;
    std::string config_echo;
};
ModelHeader read_model_header(const std::string& path);

void write_log_csv(const std::vector<EpochLog>& log, const std::string& path,
                   const std::string& config_echo = "");

}  // namespace crackscat::nn
