#pragma once

#include "vqocc/data.hpp"

#include <span>
#include <vector>

namespace vqocc {

// Gaussian RBF kernel k(x, y) = exp(-gamma * ||x - y||^2); k(x, x) = 1.
struct RbfKernel {
    double gamma = 1.0;

    double operator()(std::span<const double> x, std::span<const double> y) const;
};

// Kernel PCA of the centered feature map; anomaly score is the squared
// residual of a point against the span of the top q components.
struct KpcaModel {
    std::vector<PixelVector> train_points;
    double gamma = 1.0;
    int q = 0;
    // Row k holds the coefficients of feature-space eigenvector k, normalized
    // so the eigenvector has unit norm.
    std::vector<std::vector<double>> coefficients;
    std::vector<double> eigenvalues; // strictly positive, descending
    std::vector<double> row_means;   // per-row mean of the training kernel matrix
    double grand_mean = 0.0;
};

KpcaModel kpca_fit(std::span<const PixelVector> train, double gamma, int q);
double kpca_score(const KpcaModel& model, std::span<const double> x);

// One-class SVM dual solution: min (1/2) a^T K a with 0 <= a_i <= 1/(nu*M),
// sum a_i = 1, solved by pairwise coordinate descent on the maximal
// violating pair.
struct OcsvmModel {
    std::vector<PixelVector> train_points;
    double gamma = 1.0;
    double nu = 0.1;
    std::vector<double> alpha;
    double rho = 0.0;
    double alpha_k_alpha = 0.0; // a^T K a, the constant term of the SVDD score
    double kkt_gap = 0.0;       // final maximal-violating-pair gap
};

OcsvmModel ocsvm_fit(std::span<const PixelVector> train, double gamma, double nu);

// rho - sum_i alpha_i k(x_i, x); positive decision-function value of the
// original formulation means normal, so higher here = more anomalous.
double ocsvm_score(const OcsvmModel& model, std::span<const double> x);

// Squared feature-space distance to the hypersphere center; with an RBF
// kernel this is a strictly increasing transform of ocsvm_score.
double svdd_score(const OcsvmModel& model, std::span<const double> x);

enum class BaselineMethod { Kpca, Ocsvm };

struct GridChoice {
    double gamma = 0.0;
    int q = 0;        // Kpca only
    double nu = 0.0;  // Ocsvm only
    double holdout_auc = 0.0;
};

// gamma grid used in the experiments: 2^-10 .. 2^-1.
std::vector<double> gamma_grid();
// Retained-component grid for kernel PCA.
std::vector<int> kpca_q_grid();
// nu grid for the one-class SVM.
std::vector<double> nu_grid();

// Fits every grid point on `train`, scores `holdout`, returns the
// hyperparameters with maximal holdout AUC (earlier grid point on ties).
GridChoice grid_search(std::span<const PixelVector> train,
                       std::span<const TestSample> holdout_samples,
                       BaselineMethod method);

// Same search over explicit candidate lists (single-element lists pin a
// hyperparameter).
GridChoice grid_search(std::span<const PixelVector> train,
                       std::span<const TestSample> holdout_samples,
                       BaselineMethod method, std::span<const double> gammas,
                       std::span<const int> qs, std::span<const double> nus);

} // namespace vqocc
