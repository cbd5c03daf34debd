#include "ugvq/regress.hpp"

#include "ugvq/errors.hpp"
#include "ugvq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace ugvq {

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
    if (x.cols() != mean.size()) {
        throw DimensionMismatch(static_cast<std::size_t>(mean.size()),
                                static_cast<std::size_t>(x.cols()));
    }
    Eigen::MatrixXd z = x;
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
        z.col(c) = (z.col(c).array() - mean[c]) / stddev[c];
    }
    return z;
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& x) const {
    if (x.size() != mean.size()) {
        throw DimensionMismatch(static_cast<std::size_t>(mean.size()),
                                static_cast<std::size_t>(x.size()));
    }
    return (x - mean).cwiseQuotient(stddev);
}

Standardizer fit_standardizer(const Eigen::MatrixXd& x) {
    Standardizer s;
    const auto rows = static_cast<double>(x.rows());
    s.mean = x.colwise().mean();
    s.stddev.resize(x.cols());
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        double var = (x.col(c).array() - s.mean[c]).square().sum() / rows;
        s.stddev[c] = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    return s;
}

Eigen::VectorXd LinearModel::raw_weights() const {
    return weights.cwiseQuotient(standardizer.stddev);
}

double LinearModel::raw_bias() const {
    return bias - weights.cwiseProduct(standardizer.mean).cwiseQuotient(standardizer.stddev).sum();
}

LinearModel fit_linear(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() == 0 || y.size() == 0) throw EmptyData("linear fit needs data");
    if (x.rows() != y.size()) {
        throw LengthMismatch(static_cast<std::size_t>(x.rows()),
                             static_cast<std::size_t>(y.size()));
    }
    if (x.rows() < 2) throw EmptyData("linear fit needs at least 2 rows");

    LinearModel model;
    model.standardizer = fit_standardizer(x);
    Eigen::MatrixXd z = model.standardizer.apply(x);

    Eigen::MatrixXd design(z.rows(), z.cols() + 1);
    design.leftCols(z.cols()) = z;
    design.col(z.cols()).setOnes();

    Eigen::VectorXd solution =
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(design).solve(y);
    model.weights = solution.head(z.cols());
    model.bias = solution[z.cols()];
    return model;
}

double gaussian_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sigma_sq) {
    return std::exp(-(a - b).squaredNorm() / (2.0 * sigma_sq));
}

namespace {

double median_squared_pairwise_distance(const Eigen::MatrixXd& z) {
    std::vector<double> dists;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < z.rows(); ++j) {
            dists.push_back((z.row(i) - z.row(j)).squaredNorm());
        }
    }
    if (dists.empty()) return 1.0;
    std::sort(dists.begin(), dists.end());
    std::size_t n = dists.size();
    double median = (n % 2 == 1) ? dists[n / 2] : 0.5 * (dists[n / 2 - 1] + dists[n / 2]);
    return median > 0.0 ? median : 1.0;
}

// Step grid for the dual coefficients. Every theta stays an exact multiple
// of the grid, so partial sums of coefficients are computed without any
// rounding and the equality constraint holds exactly, not just to 1e-16.
double step_grid(double c_bound, Eigen::Index n) {
    int c_exp = 0;
    std::frexp(c_bound, &c_exp);
    int n_bits = 1;
    while ((Eigen::Index{1} << n_bits) < n) ++n_bits;
    int exp = std::max(-30, c_exp + n_bits - 52);
    return std::ldexp(1.0, exp);
}

struct SmoResult {
    Eigen::VectorXd beta;
    double bias;
    int iterations;
};

// Maximal-violating-pair SMO on the 2n-variable dual: theta = [alpha; alpha*],
// each in [0, C], with sum(alpha) - sum(alpha*) = 0. Deterministic: scans in
// index order, starts from zero, ties go to the lowest index.
SmoResult solve_svr_dual(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y, double c_bound,
                         double epsilon, double tolerance, int max_iterations) {
    const Eigen::Index n = y.size();
    const double grid = step_grid(c_bound, n);
    // Snap the box bound onto the grid so clipped coefficients stay exact.
    const double c_q = std::max(grid, std::round(c_bound / grid) * grid);

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(2 * n); // [alpha; alpha*]
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n);         // K * beta
    int iterations = 0;

    auto scan = [&](int& up_idx, int& low_idx, double& up_val, double& low_val) {
        up_idx = low_idx = -1;
        up_val = -std::numeric_limits<double>::infinity();
        low_val = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            double grad_a = g[i] + epsilon - y[i];   // d/d alpha_i
            double grad_s = -g[i] + epsilon + y[i];  // d/d alpha*_i
            if (theta[i] < c_q && -grad_a > up_val) {
                up_val = -grad_a;
                up_idx = static_cast<int>(i);
            }
            if (theta[n + i] > 0.0 && grad_s > up_val) {
                up_val = grad_s;
                up_idx = static_cast<int>(n + i);
            }
            if (theta[i] > 0.0 && -grad_a < low_val) {
                low_val = -grad_a;
                low_idx = static_cast<int>(i);
            }
            if (theta[n + i] < c_q && grad_s < low_val) {
                low_val = grad_s;
                low_idx = static_cast<int>(n + i);
            }
        }
    };

    for (int outer = 0; outer < 8; ++outer) {
        bool converged = false;
        while (iterations < max_iterations) {
            int u, v;
            double m_val, low_val;
            scan(u, v, m_val, low_val);
            if (u < 0 || v < 0 || m_val - low_val <= tolerance) {
                converged = true;
                break;
            }

            int i = u % n, j = v % n;
            double zu = u < n ? 1.0 : -1.0;
            double zv = v < n ? 1.0 : -1.0;

            // Max step along the feasible direction, always a grid multiple.
            double room_u = zu > 0.0 ? c_q - theta[u] : theta[u];
            double room_v = zv > 0.0 ? theta[v] : c_q - theta[v];
            double t_max = std::min(room_u, room_v);

            double eta = kernel(i, i) + kernel(j, j) - 2.0 * kernel(i, j);
            double t = eta > 0.0 ? (m_val - low_val) / eta : t_max;
            t = std::min(t_max, std::max(0.0, std::round(t / grid) * grid));
            if (t <= 0.0) break; // below grid resolution; cannot improve

            theta[u] += zu * t;
            theta[v] -= zv * t;
            if (i != j) {
                beta[i] += t;
                beta[j] -= t;
                g += t * (kernel.col(i) - kernel.col(j));
            }
            ++iterations;
            if (iterations % 512 == 0) g = kernel * beta; // shed drift
        }
        if (!converged) {
            throw NonConvergence("SVR dual did not converge within " +
                                 std::to_string(max_iterations) + " iterations");
        }
        g = kernel * beta;
        int u, v;
        double m_val, low_val;
        scan(u, v, m_val, low_val);
        if (u < 0 || v < 0 || m_val - low_val <= tolerance) break;
        if (outer == 7) {
            throw NonConvergence("SVR dual oscillated at the KKT tolerance");
        }
    }

    // Bias from the KKT box: every point constrains b to an interval; free
    // points pin it. The midpoint satisfies all constraints within tol.
    double b_low = -std::numeric_limits<double>::infinity();
    double b_up = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        double lo_edge = y[i] - g[i] - epsilon; // b value putting i on the lower tube edge
        double hi_edge = y[i] - g[i] + epsilon;
        if (beta[i] >= c_q) {
            b_up = std::min(b_up, lo_edge);
        } else if (beta[i] > 0.0) {
            b_low = std::max(b_low, lo_edge);
            b_up = std::min(b_up, lo_edge);
        } else if (beta[i] == 0.0) {
            b_low = std::max(b_low, lo_edge);
            b_up = std::min(b_up, hi_edge);
        } else if (beta[i] > -c_q) {
            b_low = std::max(b_low, hi_edge);
            b_up = std::min(b_up, hi_edge);
        } else {
            b_low = std::max(b_low, hi_edge);
        }
    }
    double bias;
    if (std::isinf(b_low) && std::isinf(b_up)) {
        bias = 0.0;
    } else if (std::isinf(b_low)) {
        bias = b_up;
    } else if (std::isinf(b_up)) {
        bias = b_low;
    } else {
        bias = 0.5 * (b_low + b_up);
    }
    return {std::move(beta), bias, iterations};
}

} // namespace

SvrModel fit_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, SvrHyper hyper) {
    if (x.rows() == 0 || y.size() == 0) throw EmptyData("SVR fit needs data");
    if (x.rows() != y.size()) {
        throw LengthMismatch(static_cast<std::size_t>(x.rows()),
                             static_cast<std::size_t>(y.size()));
    }
    if (hyper.C <= 0.0) throw InputError("SVR box constraint C must be positive");

    SvrModel model;
    model.standardizer = fit_standardizer(x);
    model.support_vectors = model.standardizer.apply(x);

    const auto n = x.rows();
    if (hyper.epsilon < 0.0) {
        double mean = y.mean();
        double var = (y.array() - mean).square().sum() / static_cast<double>(n);
        model.epsilon = 0.05 * std::sqrt(var);
    } else {
        model.epsilon = hyper.epsilon;
    }
    model.sigma_sq = hyper.sigma_sq > 0.0
                         ? hyper.sigma_sq
                         : median_squared_pairwise_distance(model.support_vectors);
    if (model.sigma_sq <= 0.0) throw InputError("SVR kernel variance must be positive");
    model.C = hyper.C;

    Eigen::MatrixXd kernel(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        kernel(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double k = gaussian_kernel(model.support_vectors.row(i).transpose(),
                                       model.support_vectors.row(j).transpose(), model.sigma_sq);
            kernel(i, j) = k;
            kernel(j, i) = k;
        }
    }

    SmoResult result = solve_svr_dual(kernel, y, model.C, model.epsilon, hyper.kkt_tolerance,
                                      hyper.max_iterations);
    model.coefficients = std::move(result.beta);
    model.bias = result.bias;
    model.iterations = result.iterations;
    return model;
}

double predict(const LinearModel& model, const Eigen::VectorXd& x) {
    return model.weights.dot(model.standardizer.apply(x)) + model.bias;
}

double predict(const SvrModel& model, const Eigen::VectorXd& x) {
    Eigen::VectorXd z = model.standardizer.apply(x);
    double sum = model.bias;
    for (Eigen::Index i = 0; i < model.support_vectors.rows(); ++i) {
        if (model.coefficients[i] == 0.0) continue;
        sum += model.coefficients[i] *
               gaussian_kernel(model.support_vectors.row(i).transpose(), z, model.sigma_sq);
    }
    return sum;
}

Eigen::VectorXd predict_all(const LinearModel& model, const Eigen::MatrixXd& x) {
    Eigen::VectorXd out(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = predict(model, x.row(i).transpose());
    return out;
}

Eigen::VectorXd predict_all(const SvrModel& model, const Eigen::MatrixXd& x) {
    Eigen::VectorXd out(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = predict(model, x.row(i).transpose());
    return out;
}

Eigen::MatrixXd top_k_features(const DerivedFeatureTable& table,
                               const std::vector<MetricRank>& ranking, int k,
                               const std::string& external_column) {
    if (k < 1 || k > static_cast<int>(ranking.size())) {
        throw InputError("top-k must lie in 1.." + std::to_string(ranking.size()));
    }
    int ext_idx = -1;
    if (!external_column.empty()) {
        for (std::size_t c = 0; c < table.external_names.size(); ++c) {
            if (table.external_names[c] == external_column) ext_idx = static_cast<int>(c);
        }
        if (ext_idx < 0) throw MissingColumn(external_column);
    }
    Eigen::MatrixXd x(table.values.rows(), k + (ext_idx >= 0 ? 1 : 0));
    for (int c = 0; c < k; ++c) x.col(c) = table.values.col(ranking[c].column);
    if (ext_idx >= 0) x.col(k) = table.external_values.col(ext_idx);
    return x;
}

std::vector<CurvePoint> incremental_feature_eval(const DerivedFeatureTable& table,
                                                 const Eigen::VectorXd& mos, ModelKind kind,
                                                 const std::string& external_column,
                                                 SvrHyper hyper) {
    std::vector<MetricRank> ranking = rank_metrics_by_srocc(table, mos);
    std::vector<double> mos_vec(mos.data(), mos.data() + mos.size());

    std::vector<CurvePoint> curve;
    for (int k = 1; k <= static_cast<int>(ranking.size()); ++k) {
        Eigen::MatrixXd x = top_k_features(table, ranking, k, external_column);
        Eigen::VectorXd preds;
        if (kind == ModelKind::linear) {
            preds = predict_all(fit_linear(x, mos), x);
        } else {
            preds = predict_all(fit_svr(x, mos, hyper), x);
        }
        std::vector<double> pred_vec(preds.data(), preds.data() + preds.size());
        double rho;
        try {
            rho = srocc(pred_vec, mos_vec);
        } catch (const DegenerateInput&) {
            rho = 0.0; // constant predictions carry no ranking signal
        }
        curve.push_back({k, rho});
    }
    return curve;
}

} // namespace ugvq
