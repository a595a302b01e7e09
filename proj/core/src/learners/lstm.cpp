#include "hybridcast/learners/lstm.hpp"

#include "hybridcast/error.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace hybridcast {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& a) { return (1.0 + (-a.array()).exp()).inverse().matrix(); }

void require_dims(const LstmNetwork& net) {
    const auto h4 = static_cast<Eigen::Index>(4 * net.hidden_size);
    if (net.w_input.rows() != h4 || net.w_input.cols() != static_cast<Eigen::Index>(net.input_size) ||
        net.w_hidden.rows() != h4 || net.w_hidden.cols() != static_cast<Eigen::Index>(net.hidden_size) ||
        net.bias.size() != h4 || net.w_out.size() != static_cast<Eigen::Index>(net.hidden_size)) {
        throw Error(ErrorCode::DimensionMismatch, "LSTM parameter shapes are inconsistent");
    }
}

Eigen::VectorXd standardise(const LstmNetwork& net, std::span<const double> row) {
    if (row.size() != net.input_size) {
        throw Error(ErrorCode::DimensionMismatch, "LSTM expects " + std::to_string(net.input_size) +
                                                      " inputs per step, got " + std::to_string(row.size()));
    }
    Eigen::VectorXd v(static_cast<Eigen::Index>(row.size()));
    for (std::size_t k = 0; k < row.size(); ++k) {
        v(static_cast<Eigen::Index>(k)) = (row[k] - net.scaler.mean[k]) / net.scaler.scale[k];
    }
    return v;
}

}  // namespace

LstmNetwork LstmNetwork::initialize(std::size_t input_size, std::size_t hidden_size, std::size_t sequence_length,
                                    std::uint64_t seed) {
    if (input_size == 0 || hidden_size == 0 || sequence_length == 0) {
        throw Error(ErrorCode::InvalidArgument, "LSTM dimensions must be positive");
    }
    LstmNetwork net;
    net.input_size = input_size;
    net.hidden_size = hidden_size;
    net.sequence_length = sequence_length;
    net.seed = seed;
    const auto h = static_cast<Eigen::Index>(hidden_size);
    const auto m = static_cast<Eigen::Index>(input_size);
    std::mt19937_64 rng(seed);
    const auto draw = [&] { return -0.08 + 0.16 * uniform01(rng); };
    net.w_input.resize(4 * h, m);
    net.w_hidden.resize(4 * h, h);
    net.bias.resize(4 * h);
    net.w_out.resize(h);
    for (Eigen::Index c = 0; c < m; ++c) {
        for (Eigen::Index r = 0; r < 4 * h; ++r) {
            net.w_input(r, c) = draw();
        }
    }
    for (Eigen::Index c = 0; c < h; ++c) {
        for (Eigen::Index r = 0; r < 4 * h; ++r) {
            net.w_hidden(r, c) = draw();
        }
    }
    for (Eigen::Index r = 0; r < 4 * h; ++r) {
        net.bias(r) = draw();
    }
    for (Eigen::Index r = 0; r < h; ++r) {
        net.w_out(r) = draw();
    }
    net.b_out = draw();
    net.scaler.mean.assign(input_size, 0.0);
    net.scaler.scale.assign(input_size, 1.0);
    return net;
}

std::size_t LstmNetwork::parameter_count() const noexcept {
    return static_cast<std::size_t>(w_input.size() + w_hidden.size() + bias.size() + w_out.size() + 1);
}

double LstmGradients::norm() const {
    return std::sqrt(w_input.squaredNorm() + w_hidden.squaredNorm() + bias.squaredNorm() + w_out.squaredNorm() +
                     b_out * b_out);
}

LstmTrace lstm_forward(const LstmNetwork& net, std::span<const std::vector<double>> sequence) {
    require_dims(net);
    if (sequence.size() != net.sequence_length) {
        throw Error(ErrorCode::DimensionMismatch, "sequence length " + std::to_string(sequence.size()) +
                                                      " != network length " + std::to_string(net.sequence_length));
    }
    const auto h = static_cast<Eigen::Index>(net.hidden_size);
    LstmTrace trace;
    Eigen::VectorXd hidden = Eigen::VectorXd::Zero(h);
    Eigen::VectorXd cell = Eigen::VectorXd::Zero(h);
    for (const auto& row : sequence) {
        const Eigen::VectorXd v = standardise(net, row);
        const Eigen::VectorXd a = net.w_input * v + net.w_hidden * hidden + net.bias;
        const Eigen::VectorXd f = sigmoid(a.segment(0, h));
        const Eigen::VectorXd cand = a.segment(h, h).array().tanh().matrix();
        const Eigen::VectorXd i = sigmoid(a.segment(2 * h, h));
        const Eigen::VectorXd o = sigmoid(a.segment(3 * h, h));
        cell = f.cwiseProduct(cell) + i.cwiseProduct(cand);
        hidden = o.cwiseProduct(cell.array().tanh().matrix());
        trace.forget.push_back(f);
        trace.candidate.push_back(cand);
        trace.input.push_back(i);
        trace.output_gate.push_back(o);
        trace.cell.push_back(cell);
        trace.hidden.push_back(hidden);
    }
    trace.output = net.w_out.dot(hidden) + net.b_out;
    trace.prediction = net.target.mean + net.target.scale * trace.output;
    return trace;
}

double lstm_predict(const LstmNetwork& net, const FeatureMatrix& x, std::size_t row) {
    if (x.cols != net.input_size) {
        throw Error(ErrorCode::DimensionMismatch, "LSTM expects " + std::to_string(net.input_size) + " features, got " +
                                                      std::to_string(x.cols));
    }
    if (row + 1 < net.sequence_length || row >= x.rows) {
        throw Error(ErrorCode::TooShort, "not enough context rows for an LSTM sequence");
    }
    std::vector<std::vector<double>> seq;
    seq.reserve(net.sequence_length);
    for (std::size_t r = row + 1 - net.sequence_length; r <= row; ++r) {
        const auto span = x.row(r);
        seq.emplace_back(span.begin(), span.end());
    }
    return lstm_forward(net, seq).prediction;
}

double lstm_loss_gradient(const LstmNetwork& net, std::span<const Eigen::MatrixXd> steps,
                          const Eigen::RowVectorXd& targets, LstmGradients* grads) {
    require_dims(net);
    const auto h = static_cast<Eigen::Index>(net.hidden_size);
    const Eigen::Index batch = targets.size();
    const std::size_t len = steps.size();

    std::vector<Eigen::MatrixXd> f(len), g(len), in(len), o(len), s(len + 1), hs(len + 1), tanh_s(len);
    s[0] = Eigen::MatrixXd::Zero(h, batch);
    hs[0] = Eigen::MatrixXd::Zero(h, batch);
    for (std::size_t t = 0; t < len; ++t) {
        Eigen::MatrixXd a = net.w_input * steps[t] + net.w_hidden * hs[t];
        a.colwise() += net.bias;
        f[t] = sigmoid(a.middleRows(0, h));
        g[t] = a.middleRows(h, h).array().tanh().matrix();
        in[t] = sigmoid(a.middleRows(2 * h, h));
        o[t] = sigmoid(a.middleRows(3 * h, h));
        s[t + 1] = f[t].cwiseProduct(s[t]) + in[t].cwiseProduct(g[t]);
        tanh_s[t] = s[t + 1].array().tanh().matrix();
        hs[t + 1] = o[t].cwiseProduct(tanh_s[t]);
    }
    const Eigen::RowVectorXd out = (net.w_out.transpose() * hs[len]).array() + net.b_out;
    const Eigen::RowVectorXd err = out - targets;
    const double loss = err.squaredNorm() / static_cast<double>(batch);
    if (grads == nullptr) {
        return loss;
    }

    grads->w_input = Eigen::MatrixXd::Zero(net.w_input.rows(), net.w_input.cols());
    grads->w_hidden = Eigen::MatrixXd::Zero(net.w_hidden.rows(), net.w_hidden.cols());
    grads->bias = Eigen::VectorXd::Zero(net.bias.size());
    const Eigen::RowVectorXd d_out = 2.0 * err / static_cast<double>(batch);
    grads->w_out = hs[len] * d_out.transpose();
    grads->b_out = d_out.sum();

    Eigen::MatrixXd d_h = net.w_out * d_out;
    Eigen::MatrixXd d_s = Eigen::MatrixXd::Zero(h, batch);
    Eigen::MatrixXd d_a(4 * h, batch);
    for (std::size_t k = len; k-- > 0;) {
        const Eigen::ArrayXXd ts = tanh_s[k].array();
        const Eigen::ArrayXXd d_o = d_h.array() * ts;
        d_s.array() += d_h.array() * o[k].array() * (1.0 - ts.square());
        const Eigen::ArrayXXd d_f = d_s.array() * s[k].array();
        const Eigen::ArrayXXd d_i = d_s.array() * g[k].array();
        const Eigen::ArrayXXd d_g = d_s.array() * in[k].array();
        d_a.middleRows(0, h) = (d_f * f[k].array() * (1.0 - f[k].array())).matrix();
        d_a.middleRows(h, h) = (d_g * (1.0 - g[k].array().square())).matrix();
        d_a.middleRows(2 * h, h) = (d_i * in[k].array() * (1.0 - in[k].array())).matrix();
        d_a.middleRows(3 * h, h) = (d_o * o[k].array() * (1.0 - o[k].array())).matrix();
        grads->w_input.noalias() += d_a * steps[k].transpose();
        grads->w_hidden.noalias() += d_a * hs[k].transpose();
        grads->bias += d_a.rowwise().sum();
        d_h.noalias() = net.w_hidden.transpose() * d_a;
        d_s = d_s.cwiseProduct(f[k]);
    }
    return loss;
}

LstmNetwork lstm_fit(const FeatureMatrix& x, const LstmParams& params) {
    const std::size_t len = params.sequence_length;
    if (len == 0 || x.rows < len) {
        throw Error(ErrorCode::TooShort, "not enough rows to form one LSTM sequence");
    }
    if (params.batch_size == 0) {
        throw Error(ErrorCode::InvalidArgument, "batch size must be positive");
    }
    LstmNetwork net = LstmNetwork::initialize(x.cols, params.hidden_size, len, params.seed);
    net.scaler = Standardizer::fit(x);
    net.target = TargetScaler::fit(x.target);

    const auto m = static_cast<Eigen::Index>(x.cols);
    Eigen::MatrixXd z(m, static_cast<Eigen::Index>(x.rows));
    std::vector<double> buf(x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        net.scaler.apply(x.row(r), buf);
        for (std::size_t c = 0; c < x.cols; ++c) {
            z(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = buf[c];
        }
    }
    std::vector<std::size_t> samples(x.rows - len + 1);
    std::iota(samples.begin(), samples.end(), len - 1);

    std::mt19937_64 rng(params.seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<Eigen::MatrixXd> steps(len);
    LstmGradients grads;
    net.epoch_losses.reserve(params.epochs);
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        for (std::size_t k = samples.size(); k > 1; --k) {
            const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(k));
            std::swap(samples[k - 1], samples[std::min(j, k - 1)]);
        }
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < samples.size(); start += params.batch_size) {
            const std::size_t stop = std::min(start + params.batch_size, samples.size());
            const auto batch = static_cast<Eigen::Index>(stop - start);
            for (std::size_t t = 0; t < len; ++t) {
                steps[t].resize(m, batch);
            }
            Eigen::RowVectorXd targets(batch);
            for (std::size_t b = start; b < stop; ++b) {
                const std::size_t row = samples[b];
                const auto col = static_cast<Eigen::Index>(b - start);
                for (std::size_t t = 0; t < len; ++t) {
                    steps[t].col(col) = z.col(static_cast<Eigen::Index>(row + 1 + t - len));
                }
                targets(col) = (x.target[row] - net.target.mean) / net.target.scale;
            }
            const double loss = lstm_loss_gradient(net, steps, targets, &grads);
            const double gnorm = grads.norm();
            if (!std::isfinite(loss) || !std::isfinite(gnorm)) {
                std::ostringstream msg;
                msg << "loss " << loss << ", gradient norm " << gnorm << " at epoch " << epoch << ", batch starting "
                    << start << " (lr " << params.learning_rate << ", hidden " << params.hidden_size << ")";
                throw Error(ErrorCode::NonFiniteLoss, msg.str());
            }
            epoch_loss += loss * static_cast<double>(batch);
            const double scale = gnorm > params.clip_norm ? params.clip_norm / gnorm : 1.0;
            const double step = params.learning_rate * scale;
            net.w_input -= step * grads.w_input;
            net.w_hidden -= step * grads.w_hidden;
            net.bias -= step * grads.bias;
            net.w_out -= step * grads.w_out;
            net.b_out -= step * grads.b_out;
        }
        net.epoch_losses.push_back(epoch_loss / static_cast<double>(samples.size()));
    }
    return net;
}

}  // namespace hybridcast
