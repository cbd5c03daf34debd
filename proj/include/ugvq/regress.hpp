#pragma once

#include "ugvq/metafeat.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ugvq {

// Per-feature z-scoring fitted on the training set. Zero-variance features
// keep stddev 1 so scaling is a no-op for them.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

Standardizer fit_standardizer(const Eigen::MatrixXd& x);

struct LinearModel {
    Eigen::VectorXd weights; // on standardized features
    double bias = 0.0;
    Standardizer standardizer;

    // Equivalent weights and bias on raw (unstandardized) features.
    Eigen::VectorXd raw_weights() const;
    double raw_bias() const;
};

struct SvrHyper {
    double C = 10.0;
    double epsilon = -1.0;  // negative: use 0.05 * stddev(y)
    double sigma_sq = -1.0; // nonpositive: median squared pairwise distance
    int max_iterations = 1000000;
    double kkt_tolerance = 1e-6;
};

struct SvrModel {
    Eigen::MatrixXd support_vectors; // standardized, all training points
    Eigen::VectorXd coefficients;    // alpha_i - alpha_i^*, on a 2^-k grid
    double bias = 0.0;
    double sigma_sq = 1.0;
    double C = 10.0;
    double epsilon = 0.0;
    Standardizer standardizer;
    int iterations = 0;
};

// Ordinary least squares on z-scored features (minimum-norm solution when
// the system is rank deficient).
LinearModel fit_linear(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

// Epsilon-insensitive SVR with a Gaussian kernel, solved by deterministic
// maximal-violating-pair updates from an all-zero start. Coefficient steps
// are quantized to a power-of-two grid, which keeps sum(coefficients) == 0
// exact in floating point. Throws NonConvergence past max_iterations.
SvrModel fit_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, SvrHyper hyper = {});

double predict(const LinearModel& model, const Eigen::VectorXd& x);
double predict(const SvrModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd predict_all(const LinearModel& model, const Eigen::MatrixXd& x);
Eigen::VectorXd predict_all(const SvrModel& model, const Eigen::MatrixXd& x);

double gaussian_kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sigma_sq);

enum class ModelKind { linear, svr };

struct CurvePoint {
    int k;
    double srocc;
};

// Fits on the top-k metrics (per rank_metrics_by_srocc) for k = 1..20 and
// reports the in-sample SROCC of the predictions. An external column from
// the table is appended as the (k+1)-th feature when named.
std::vector<CurvePoint> incremental_feature_eval(const DerivedFeatureTable& table,
                                                 const Eigen::VectorXd& mos, ModelKind kind,
                                                 const std::string& external_column = "",
                                                 SvrHyper hyper = {});

// Feature matrix of the top-k ranked metrics (plus optional external column).
Eigen::MatrixXd top_k_features(const DerivedFeatureTable& table,
                               const std::vector<MetricRank>& ranking, int k,
                               const std::string& external_column = "");

} // namespace ugvq
