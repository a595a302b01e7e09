#pragma once

#include "hybridcast/learners/features.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hybridcast {

struct LstmParams {
    std::size_t hidden_size = 8;
    std::size_t sequence_length = 10;
    std::size_t epochs = 100;
    std::size_t batch_size = 32;
    double learning_rate = 0.01;
    double clip_norm = 1.0;
    std::uint64_t seed = 42;
};

/// Single-layer LSTM with a linear read-out of the final hidden state.
///
/// Gate parameters are stacked in blocks of `hidden_size` rows in the order
/// forget, candidate, input, output. Inputs and target are standardised with
/// training statistics; a freshly initialised network uses identity scaling.
struct LstmNetwork {
    std::size_t input_size = 0;
    std::size_t hidden_size = 0;
    std::size_t sequence_length = 0;
    std::uint64_t seed = 0;

    Eigen::MatrixXd w_input;   // 4H x input_size
    Eigen::MatrixXd w_hidden;  // 4H x H
    Eigen::VectorXd bias;      // 4H
    Eigen::VectorXd w_out;     // H
    double b_out = 0.0;

    Standardizer scaler;
    TargetScaler target;
    std::vector<double> epoch_losses;

    /// Uniform(-0.08, 0.08) weights drawn from `seed`, identity scaling.
    static LstmNetwork initialize(std::size_t input_size, std::size_t hidden_size, std::size_t sequence_length,
                                  std::uint64_t seed);

    std::size_t parameter_count() const noexcept;
};

/// Per-step gate activations for one sequence.
struct LstmTrace {
    double output = 0.0;      // read-out in standardised target units
    double prediction = 0.0;  // output mapped back to target units
    std::vector<Eigen::VectorXd> forget;
    std::vector<Eigen::VectorXd> candidate;
    std::vector<Eigen::VectorXd> input;
    std::vector<Eigen::VectorXd> output_gate;
    std::vector<Eigen::VectorXd> cell;
    std::vector<Eigen::VectorXd> hidden;
};

/// Runs the memory cell over `sequence` (raw feature rows, oldest first).
LstmTrace lstm_forward(const LstmNetwork& net, std::span<const std::vector<double>> sequence);

/// Prediction for the sequence ending at `row` of `x` (rows row-L+1 .. row).
double lstm_predict(const LstmNetwork& net, const FeatureMatrix& x, std::size_t row);

struct LstmGradients {
    Eigen::MatrixXd w_input;
    Eigen::MatrixXd w_hidden;
    Eigen::VectorXd bias;
    Eigen::VectorXd w_out;
    double b_out = 0.0;

    double norm() const;
};

/// Mean squared error over a batch and its exact BPTT gradient. `steps[t]`
/// is input_size x batch (already standardised); `targets` is standardised.
double lstm_loss_gradient(const LstmNetwork& net, std::span<const Eigen::MatrixXd> steps,
                          const Eigen::RowVectorXd& targets, LstmGradients* grads);

/// Mini-batch SGD with global-norm gradient clipping. Throws
/// Error(NonFiniteLoss) if the loss diverges.
LstmNetwork lstm_fit(const FeatureMatrix& x, const LstmParams& params);

}  // namespace hybridcast
