#include "hybridcast/learners/svr.hpp"

#include "hybridcast/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hybridcast {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

// SMO over the 2l-variable dual of epsilon-SVR with second-order working set
// selection. Variables a < l carry sign +1, variables a >= l sign -1.
class SmoSolver {
public:
    SmoSolver(const std::vector<std::vector<double>>& rows, std::span<const double> y, const Kernel& kernel, double C,
              double eps)
        : l_(rows.size()), c_(C), kernel_(l_ * l_) {
        for (std::size_t i = 0; i < l_; ++i) {
            for (std::size_t j = i; j < l_; ++j) {
                const double k = kernel(rows[i], rows[j]);
                kernel_[i * l_ + j] = k;
                kernel_[j * l_ + i] = k;
            }
        }
        const std::size_t n = 2 * l_;
        alpha_.assign(n, 0.0);
        sign_.resize(n);
        p_.resize(n);
        grad_.resize(n);
        for (std::size_t i = 0; i < l_; ++i) {
            sign_[i] = 1.0;
            sign_[i + l_] = -1.0;
            p_[i] = eps - y[i];
            p_[i + l_] = eps + y[i];
        }
        grad_ = p_;
    }

    double q(std::size_t a, std::size_t b) const { return sign_[a] * sign_[b] * kernel_[(a % l_) * l_ + (b % l_)]; }
    double qd(std::size_t a) const { return kernel_[(a % l_) * l_ + (a % l_)]; }

    bool upper(std::size_t a) const { return alpha_[a] >= c_; }
    bool lower(std::size_t a) const { return alpha_[a] <= 0.0; }

    double objective() const {
        double v = 0.0;
        for (std::size_t a = 0; a < 2 * l_; ++a) {
            v += alpha_[a] * (grad_[a] + p_[a]);
        }
        return 0.5 * v;
    }

    // Returns false when the KKT gap is below tolerance.
    bool select(double tol, std::size_t& out_i, std::size_t& out_j) const {
        const std::size_t n = 2 * l_;
        double gmax = -kInf;
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (sign_[t] > 0) {
                if (!upper(t) && -grad_[t] >= gmax) {
                    gmax = -grad_[t];
                    i = t;
                }
            } else if (!lower(t) && grad_[t] >= gmax) {
                gmax = grad_[t];
                i = t;
            }
        }
        if (i == n) {
            return false;
        }
        double gmax2 = -kInf;
        double best = kInf;
        std::size_t j = n;
        const double* ki = &kernel_[(i % l_) * l_];
        const double qdi = qd(i);
        for (std::size_t t = 0; t < n; ++t) {
            const double k_it = ki[t % l_];
            if (sign_[t] > 0) {
                if (lower(t)) {
                    continue;
                }
                const double diff = gmax + grad_[t];
                gmax2 = std::max(gmax2, grad_[t]);
                if (diff > 0.0) {
                    double quad = qdi + qd(t) - 2.0 * k_it;
                    quad = quad > 0.0 ? quad : kTau;
                    const double obj = -(diff * diff) / quad;
                    if (obj <= best) {
                        best = obj;
                        j = t;
                    }
                }
            } else {
                if (upper(t)) {
                    continue;
                }
                const double diff = gmax - grad_[t];
                gmax2 = std::max(gmax2, -grad_[t]);
                if (diff > 0.0) {
                    double quad = qdi + qd(t) - 2.0 * k_it;
                    quad = quad > 0.0 ? quad : kTau;
                    const double obj = -(diff * diff) / quad;
                    if (obj <= best) {
                        best = obj;
                        j = t;
                    }
                }
            }
        }
        if (gmax + gmax2 < tol || j == n) {
            return false;
        }
        out_i = i;
        out_j = j;
        return true;
    }

    void update(std::size_t i, std::size_t j) {
        const double old_i = alpha_[i];
        const double old_j = alpha_[j];
        const double qij = q(i, j);
        if (sign_[i] != sign_[j]) {
            double quad = qd(i) + qd(j) + 2.0 * qij;
            quad = quad > 0.0 ? quad : kTau;
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = alpha_[i] - alpha_[j];
            alpha_[i] += delta;
            alpha_[j] += delta;
            if (diff > 0.0) {
                if (alpha_[j] < 0.0) {
                    alpha_[j] = 0.0;
                    alpha_[i] = diff;
                }
            } else if (alpha_[i] < 0.0) {
                alpha_[i] = 0.0;
                alpha_[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha_[i] > c_) {
                    alpha_[i] = c_;
                    alpha_[j] = c_ - diff;
                }
            } else if (alpha_[j] > c_) {
                alpha_[j] = c_;
                alpha_[i] = c_ + diff;
            }
        } else {
            double quad = qd(i) + qd(j) - 2.0 * qij;
            quad = quad > 0.0 ? quad : kTau;
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = alpha_[i] + alpha_[j];
            alpha_[i] -= delta;
            alpha_[j] += delta;
            if (sum > c_) {
                if (alpha_[i] > c_) {
                    alpha_[i] = c_;
                    alpha_[j] = sum - c_;
                }
            } else if (alpha_[j] < 0.0) {
                alpha_[j] = 0.0;
                alpha_[i] = sum;
            }
            if (sum > c_) {
                if (alpha_[j] > c_) {
                    alpha_[j] = c_;
                    alpha_[i] = sum - c_;
                }
            } else if (alpha_[i] < 0.0) {
                alpha_[i] = 0.0;
                alpha_[j] = sum;
            }
        }
        const double di = sign_[i] * (alpha_[i] - old_i);
        const double dj = sign_[j] * (alpha_[j] - old_j);
        const double* ki = &kernel_[(i % l_) * l_];
        const double* kj = &kernel_[(j % l_) * l_];
        for (std::size_t k = 0; k < l_; ++k) {
            const double v = ki[k] * di + kj[k] * dj;
            grad_[k] += v;
            grad_[k + l_] -= v;
        }
    }

    double rho() const {
        double ub = kInf;
        double lb = -kInf;
        double sum_free = 0.0;
        std::size_t n_free = 0;
        for (std::size_t a = 0; a < 2 * l_; ++a) {
            const double yg = sign_[a] * grad_[a];
            if (upper(a)) {
                if (sign_[a] < 0) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else if (lower(a)) {
                if (sign_[a] > 0) {
                    ub = std::min(ub, yg);
                } else {
                    lb = std::max(lb, yg);
                }
            } else {
                ++n_free;
                sum_free += yg;
            }
        }
        return n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
    }

    double beta(std::size_t i) const { return alpha_[i] - alpha_[i + l_]; }

private:
    std::size_t l_;
    double c_;
    std::vector<double> kernel_;
    std::vector<double> alpha_;
    std::vector<double> sign_;
    std::vector<double> p_;
    std::vector<double> grad_;
};

}  // namespace

double Kernel::operator()(std::span<const double> a, std::span<const double> b) const {
    double dot = 0.0;
    switch (type) {
    case KernelType::Linear:
        for (std::size_t k = 0; k < a.size(); ++k) {
            dot += a[k] * b[k];
        }
        return dot;
    case KernelType::Polynomial:
        for (std::size_t k = 0; k < a.size(); ++k) {
            dot += a[k] * b[k];
        }
        return std::pow(gamma * dot + coef0, degree);
    case KernelType::Rbf:
        for (std::size_t k = 0; k < a.size(); ++k) {
            const double d = a[k] - b[k];
            dot += d * d;
        }
        return std::exp(-gamma * dot);
    }
    return 0.0;
}

std::string Kernel::describe() const {
    switch (type) {
    case KernelType::Linear: return "linear";
    case KernelType::Polynomial: return "poly(" + std::to_string(degree) + ")";
    case KernelType::Rbf: return "rbf";
    }
    return "?";
}

SvrModel svr_fit(const FeatureMatrix& x, const SvrParams& params) {
    if (x.rows < 2) {
        throw Error(ErrorCode::TooShort, "SVR needs at least two rows");
    }
    if (!(params.C > 0.0) || params.epsilon < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "SVR requires C > 0 and epsilon >= 0");
    }
    SvrModel m;
    m.kernel = params.kernel;
    if (m.kernel.gamma <= 0.0) {
        m.kernel.gamma = 1.0 / static_cast<double>(std::max<std::size_t>(x.cols, 1));
    }
    m.C = params.C;
    m.scaler = Standardizer::fit(x);
    m.target = TargetScaler::fit(x.target);
    m.epsilon = params.epsilon / m.target.scale;

    if (m.target.degenerate) {
        // Constant target: the constant predictor is exact; flagged, not fatal.
        m.degenerate = true;
        m.converged = true;
        return m;
    }

    std::vector<std::vector<double>> rows(x.rows);
    std::vector<double> y(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        rows[r] = m.scaler.apply(x.row(r));
        y[r] = (x.target[r] - m.target.mean) / m.target.scale;
    }

    SmoSolver solver(rows, y, m.kernel, m.C, m.epsilon);
    std::size_t it = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    m.objective_trace.push_back(solver.objective());
    bool optimal = false;
    while (it < params.max_iterations) {
        if (!solver.select(params.tolerance, i, j)) {
            optimal = true;
            break;
        }
        solver.update(i, j);
        ++it;
        if (it % x.rows == 0) {
            m.objective_trace.push_back(solver.objective());
        }
    }
    m.iterations = it;
    m.converged = optimal;
    m.dual_objective = solver.objective();
    m.objective_trace.push_back(m.dual_objective);
    m.b = -solver.rho();
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double beta = solver.beta(r);
        if (beta != 0.0) {
            m.alphas.push_back(beta);
            m.support_vectors.push_back(std::move(rows[r]));
        }
    }
    return m;
}

double SvrModel::predict(std::span<const double> x) const {
    if (x.size() != scaler.dims()) {
        throw Error(ErrorCode::DimensionMismatch, "SVR expects " + std::to_string(scaler.dims()) + " features, got " +
                                                      std::to_string(x.size()));
    }
    if (degenerate) {
        return target.mean;
    }
    const auto z = scaler.apply(x);
    double f = b;
    for (std::size_t s = 0; s < alphas.size(); ++s) {
        f += alphas[s] * kernel(support_vectors[s], z);
    }
    return target.mean + target.scale * f;
}

double svr_primal_objective(const SvrModel& m, const FeatureMatrix& x) {
    if (m.kernel.type != KernelType::Linear) {
        throw Error(ErrorCode::InvalidArgument, "primal objective is only defined here for the linear kernel");
    }
    std::vector<double> beta(m.scaler.dims(), 0.0);
    for (std::size_t s = 0; s < m.alphas.size(); ++s) {
        for (std::size_t k = 0; k < beta.size(); ++k) {
            beta[k] += m.alphas[s] * m.support_vectors[s][k];
        }
    }
    double reg = 0.0;
    for (double v : beta) {
        reg += v * v;
    }
    double slack = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        const auto z = m.scaler.apply(x.row(r));
        double f = m.b;
        for (std::size_t k = 0; k < beta.size(); ++k) {
            f += beta[k] * z[k];
        }
        const double y = (x.target[r] - m.target.mean) / m.target.scale;
        slack += std::max(0.0, std::abs(y - f) - m.epsilon);
    }
    return 0.5 * reg + m.C * slack;
}

}  // namespace hybridcast
