#include "vqocc/baselines.hpp"

#include "vqocc/errors.hpp"
#include "vqocc/eval.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vqocc {

namespace {

constexpr double kEigenvalueFloor = 1e-10;
constexpr double kKktTolerance = 1e-6;
constexpr long kSweepCapPerPoint = 10'000;

Eigen::MatrixXd kernel_matrix(std::span<const PixelVector> points, double gamma) {
    const auto m = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd K(m, m);
    RbfKernel kernel{gamma};
    for (Eigen::Index i = 0; i < m; ++i) {
        K(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double v = kernel(points[static_cast<std::size_t>(i)],
                                    points[static_cast<std::size_t>(j)]);
            K(i, j) = v;
            K(j, i) = v;
        }
    }
    return K;
}

} // namespace

double RbfKernel::operator()(std::span<const double> x, std::span<const double> y) const {
    if (x.size() != y.size())
        throw InvalidArgument("rbf kernel: dimension mismatch");
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        sq += d * d;
    }
    return std::exp(-gamma * sq);
}

KpcaModel kpca_fit(std::span<const PixelVector> train, double gamma, int q) {
    if (train.size() < 2)
        throw InvalidArgument("kpca_fit: need at least 2 training points");
    if (q < 1)
        throw InvalidArgument("kpca_fit: q must be >= 1");
    if (gamma <= 0.0)
        throw InvalidArgument("kpca_fit: gamma must be positive");

    const auto m = static_cast<Eigen::Index>(train.size());
    const Eigen::MatrixXd K = kernel_matrix(train, gamma);
    const Eigen::VectorXd row_means = K.rowwise().mean();
    const double grand = K.mean();

    // Double centering: K~ = K - 1K - K1 + 1K1.
    Eigen::MatrixXd centered = K;
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            centered(i, j) -= row_means(i) + row_means(j) - grand;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centered);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("kpca_fit: eigendecomposition failed");

    // Eigen reports ascending order; take strictly positive ones from the top.
    KpcaModel model;
    model.train_points.assign(train.begin(), train.end());
    model.gamma = gamma;
    model.q = q;
    for (Eigen::Index k = m - 1; k >= 0 && static_cast<int>(model.eigenvalues.size()) < q;
         --k) {
        const double lambda = solver.eigenvalues()(k);
        if (lambda <= kEigenvalueFloor)
            break;
        model.eigenvalues.push_back(lambda);
        // Feature-space eigenvector sum_i c_i phi~(x_i) has norm
        // sqrt(v^T K~ v) = sqrt(lambda) for a unit eigenvector v.
        const double inv_sqrt = 1.0 / std::sqrt(lambda);
        std::vector<double> coeff(static_cast<std::size_t>(m));
        for (Eigen::Index i = 0; i < m; ++i)
            coeff[static_cast<std::size_t>(i)] = solver.eigenvectors()(i, k) * inv_sqrt;
        model.coefficients.push_back(std::move(coeff));
    }
    if (static_cast<int>(model.eigenvalues.size()) < q)
        throw CapacityError("kpca_fit: requested q=" + std::to_string(q) + " components but " +
                            "only " + std::to_string(model.eigenvalues.size()) +
                            " positive eigenvalues exist");
    for (Eigen::Index i = 0; i < m; ++i)
        model.row_means.push_back(row_means(i));
    model.grand_mean = grand;
    return model;
}

double kpca_score(const KpcaModel& model, std::span<const double> x) {
    const std::size_t m = model.train_points.size();
    RbfKernel kernel{model.gamma};
    std::vector<double> kx(m);
    double kx_mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        kx[i] = kernel(x, model.train_points[i]);
        kx_mean += kx[i];
    }
    kx_mean /= static_cast<double>(m);

    // Centered kernel sections against the training set and against x itself.
    std::vector<double> kx_centered(m);
    for (std::size_t i = 0; i < m; ++i)
        kx_centered[i] = kx[i] - model.row_means[i] - kx_mean + model.grand_mean;
    const double self_centered = 1.0 - 2.0 * kx_mean + model.grand_mean;

    double projected = 0.0;
    for (const auto& coeff : model.coefficients) {
        double p = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            p += coeff[i] * kx_centered[i];
        projected += p * p;
    }
    return self_centered - projected;
}

OcsvmModel ocsvm_fit(std::span<const PixelVector> train, double gamma, double nu) {
    const std::size_t m = train.size();
    if (m < 2)
        throw InvalidArgument("ocsvm_fit: need at least 2 training points");
    if (gamma <= 0.0)
        throw InvalidArgument("ocsvm_fit: gamma must be positive");
    if (!(nu > 0.0 && nu <= 1.0))
        throw InvalidArgument("ocsvm_fit: nu must be in (0, 1]");
    if (nu * static_cast<double>(m) < 1.0)
        throw InvalidArgument("ocsvm_fit: nu*M >= 1 required (box bound makes sum(alpha)=1 "
                              "infeasible otherwise)");

    const double bound = 1.0 / (nu * static_cast<double>(m));
    const Eigen::MatrixXd K = kernel_matrix(train, gamma);

    // Feasible start; for nu = 1 this is the unique feasible point.
    Eigen::VectorXd alpha = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m),
                                                      1.0 / static_cast<double>(m));
    Eigen::VectorXd g = K * alpha; // gradient of (1/2) a^T K a

    constexpr double kBoundTol = 1e-12;
    const long max_updates = kSweepCapPerPoint * static_cast<long>(m);
    double gap = 0.0;
    bool converged = false;
    for (long update = 0; update < max_updates; ++update) {
        // Maximal violating pair: push weight from the largest gradient at a
        // movable-down index to the smallest gradient at a movable-up index.
        int up = -1, down = -1;
        for (int i = 0; i < static_cast<int>(m); ++i) {
            if (alpha(i) < bound - kBoundTol && (up < 0 || g(i) < g(up)))
                up = i;
            if (alpha(i) > kBoundTol && (down < 0 || g(i) > g(down)))
                down = i;
        }
        if (up < 0 || down < 0) {
            converged = true;
            break;
        }
        gap = g(down) - g(up);
        if (gap < kKktTolerance) {
            converged = true;
            break;
        }
        const double eta = K(up, up) + K(down, down) - 2.0 * K(up, down);
        const double room = std::min(bound - alpha(up), alpha(down));
        const double step = eta > kBoundTol ? std::min(gap / eta, room) : room;
        alpha(up) += step;
        alpha(down) -= step;
        g += step * (K.col(up) - K.col(down));
    }
    if (!converged)
        throw ConvergenceError("ocsvm_fit: solver hit the update cap with KKT gap " +
                               std::to_string(gap));

    OcsvmModel model;
    model.train_points.assign(train.begin(), train.end());
    model.gamma = gamma;
    model.nu = nu;
    model.alpha.assign(alpha.data(), alpha.data() + m);

    // rho from margin support vectors; fall back to the KKT interval midpoint
    // when every alpha sits on a bound.
    double free_sum = 0.0;
    int free_count = 0;
    double upper_max = std::numeric_limits<double>::lowest();
    double lower_min = std::numeric_limits<double>::max();
    bool has_upper = false, has_lower = false;
    for (int i = 0; i < static_cast<int>(m); ++i) {
        if (alpha(i) > kBoundTol && alpha(i) < bound - kBoundTol) {
            free_sum += g(i);
            ++free_count;
        } else if (alpha(i) >= bound - kBoundTol) {
            upper_max = std::max(upper_max, g(i));
            has_upper = true;
        } else {
            lower_min = std::min(lower_min, g(i));
            has_lower = true;
        }
    }
    if (free_count > 0)
        model.rho = free_sum / free_count;
    else if (has_upper && has_lower)
        model.rho = 0.5 * (upper_max + lower_min);
    else if (has_upper)
        model.rho = upper_max;
    else
        model.rho = lower_min;

    model.alpha_k_alpha = alpha.dot(g);
    model.kkt_gap = gap;
    return model;
}

namespace {

double weighted_kernel_sum(const OcsvmModel& model, std::span<const double> x) {
    RbfKernel kernel{model.gamma};
    double s = 0.0;
    for (std::size_t i = 0; i < model.train_points.size(); ++i)
        s += model.alpha[i] * kernel(model.train_points[i], x);
    return s;
}

} // namespace

double ocsvm_score(const OcsvmModel& model, std::span<const double> x) {
    return model.rho - weighted_kernel_sum(model, x);
}

double svdd_score(const OcsvmModel& model, std::span<const double> x) {
    return 1.0 - 2.0 * weighted_kernel_sum(model, x) + model.alpha_k_alpha;
}

std::vector<double> gamma_grid() {
    std::vector<double> grid;
    for (int e = -10; e <= -1; ++e)
        grid.push_back(std::ldexp(1.0, e));
    return grid;
}

std::vector<int> kpca_q_grid() {
    return {1, 2, 4, 8, 16, 32};
}

std::vector<double> nu_grid() {
    return {0.01, 0.1};
}

GridChoice grid_search(std::span<const PixelVector> train,
                       std::span<const TestSample> holdout_samples,
                       BaselineMethod method) {
    const auto gammas = gamma_grid();
    const auto qs = kpca_q_grid();
    const auto nus = nu_grid();
    return grid_search(train, holdout_samples, method, gammas, qs, nus);
}

GridChoice grid_search(std::span<const PixelVector> train,
                       std::span<const TestSample> holdout_samples,
                       BaselineMethod method, std::span<const double> gammas,
                       std::span<const int> qs, std::span<const double> nus) {
    std::vector<const TestSample*> normal, anomalous;
    for (const TestSample& s : holdout_samples)
        (s.is_anomalous ? anomalous : normal).push_back(&s);
    if (normal.empty() || anomalous.empty())
        throw InvalidArgument("grid_search: holdout must contain both normal and anomalous "
                              "samples");

    const auto holdout_auc = [&](auto&& scorer) {
        std::vector<double> sn, sa;
        sn.reserve(normal.size());
        sa.reserve(anomalous.size());
        for (const TestSample* s : normal)
            sn.push_back(scorer(s->pixels));
        for (const TestSample* s : anomalous)
            sa.push_back(scorer(s->pixels));
        return roc_auc(sn, sa).auc;
    };

    GridChoice best;
    best.holdout_auc = -1.0;
    for (double gamma : gammas) {
        if (method == BaselineMethod::Kpca) {
            for (int q : qs) {
                KpcaModel model;
                try {
                    model = kpca_fit(train, gamma, q);
                } catch (const CapacityError&) {
                    continue; // grid point not realizable for this training set
                }
                const double auc = holdout_auc(
                    [&](const PixelVector& x) { return kpca_score(model, x); });
                if (auc > best.holdout_auc) {
                    best = GridChoice{gamma, q, 0.0, auc};
                }
            }
        } else {
            for (double nu : nus) {
                if (nu * static_cast<double>(train.size()) < 1.0)
                    continue; // box bound incompatible with sum(alpha) = 1
                const OcsvmModel model = ocsvm_fit(train, gamma, nu);
                const double auc = holdout_auc(
                    [&](const PixelVector& x) { return ocsvm_score(model, x); });
                if (auc > best.holdout_auc) {
                    best = GridChoice{gamma, 0, nu, auc};
                }
            }
        }
    }
    if (best.holdout_auc < 0.0)
        throw CapacityError("grid_search: no grid point is feasible for this training set");
    return best;
}

} // namespace vqocc
