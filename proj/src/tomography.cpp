#include "kerrlab/tomography.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "kerrlab/error.hpp"
#include "kerrlab/parallel.hpp"
#include "kerrlab/random.hpp"

namespace kerrlab {

namespace {

constexpr int kMinPhases = 8;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGaussNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                               -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                               0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};

double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

void add_outer(Eigen::MatrixXd& rows, int b, const std::vector<double>& psi, double weight, int dim) {
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) rows(b, n * dim + m) += weight * psi[m] * psi[n];
    }
}

// Row b holds vec(A_b), A_b[m][n] = integral of psi_m psi_n against bin b's response.
Eigen::MatrixXd build_povm(const std::vector<double>& edges, int dim, const NoiseModel& noise, bool noise_aware) {
    const int bins = static_cast<int>(edges.size()) - 1;
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(bins, dim * dim);
    const double gain = noise.gain();
    const double spread = noise.added_std();
    if (!noise_aware || noise.kind == NoiseKind::none || spread == 0.0) {
        // Ideal projectors, or pure gain without added noise (a rescaled bin).
        const double scale = noise_aware ? gain : 1.0;
        for (int b = 0; b < bins; ++b) {
            const double lo = edges[b] / scale;
            const double hi = edges[b + 1] / scale;
            const double half = 0.5 * (hi - lo);
            const double mid = 0.5 * (hi + lo);
            for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
                const auto psi = hermite_functions(dim - 1, mid + half * kGaussNodes[q]);
                add_outer(rows, b, psi, half * kGaussWeights[q], dim);
            }
        }
        return rows;
    }
    const double reach = std::sqrt(2.0 * dim + 1.0) + 6.0;
    constexpr int kPoints = 4001;
    const double dx = 2.0 * reach / (kPoints - 1);
    for (int i = 0; i < kPoints; ++i) {
        const double x = -reach + dx * i;
        const auto psi = hermite_functions(dim - 1, x);
        const double w = (i == 0 || i == kPoints - 1 ? 0.5 : 1.0) * dx;
        for (int b = 0; b < bins; ++b) {
            const double prob = normal_cdf((edges[b + 1] - gain * x) / spread) - normal_cdf((edges[b] - gain * x) / spread);
            if (prob < 1e-18) continue;
            add_outer(rows, b, psi, w * prob, dim);
        }
    }
    return rows;
}

class Likelihood {
public:
    Likelihood(const BinnedQuadratures& binned, Eigen::MatrixXd povm, int dim)
        : binned_(binned), povm_(std::move(povm)), dim_(dim) {
        for (double theta : binned_.phases) {
            Vector d(dim_);
            for (int n = 0; n < dim_; ++n) d(n) = std::polar(1.0, theta * n);
            rotations_.push_back(std::move(d));
        }
    }

    // probs[k](b) = Tr(Pi_kb rho)
    std::vector<Eigen::VectorXd> probabilities(const Matrix& rho) const {
        std::vector<Eigen::VectorXd> out;
        out.reserve(rotations_.size());
        for (const auto& d : rotations_) {
            const Matrix rotated = d.conjugate().asDiagonal() * rho * d.asDiagonal();
            const Eigen::MatrixXd re = rotated.real();
            out.push_back(povm_ * Eigen::Map<const Eigen::VectorXd>(re.data(), re.size()));
        }
        return out;
    }

    double log_likelihood(const std::vector<Eigen::VectorXd>& probs) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            for (Eigen::Index b = 0; b < probs[k].size(); ++b) {
                const double f = binned_.counts[k][static_cast<std::size_t>(b)];
                if (f > 0.0) acc += f * std::log(std::max(probs[k](b), 1e-300));
            }
        }
        return acc;
    }

    // R = (1/N) sum_kb f_kb / p_kb Pi_kb
    Matrix r_operator(const std::vector<Eigen::VectorXd>& probs) const {
        Matrix r = Matrix::Zero(dim_, dim_);
        Eigen::VectorXd weights(povm_.rows());
        for (std::size_t k = 0; k < probs.size(); ++k) {
            for (Eigen::Index b = 0; b < weights.size(); ++b) {
                const double f = binned_.counts[k][static_cast<std::size_t>(b)];
                weights(b) = f > 0.0 ? f / std::max(probs[k](b), 1e-300) : 0.0;
            }
            const Eigen::VectorXd flat = povm_.transpose() * weights;
            const Eigen::Map<const Eigen::MatrixXd> rk(flat.data(), dim_, dim_);
            const auto& d = rotations_[k];
            r += d.asDiagonal() * rk.cast<cplx>() * d.conjugate().asDiagonal();
        }
        r /= binned_.total;
        return 0.5 * (r + r.adjoint());
    }

private:
    const BinnedQuadratures& binned_;
    Eigen::MatrixXd povm_;
    int dim_;
    std::vector<Vector> rotations_;
};

Matrix normalized(const Matrix& m) {
    Matrix h = 0.5 * (m + m.adjoint());
    return h / h.trace().real();
}

}  // namespace

void ReconstructionConfig::validate() const {
    if (cutoff < 1) throw Error(ErrorKind::invalid_argument, "reconstruction cutoff must be >= 1");
    if (max_iterations < 1) throw Error(ErrorKind::invalid_argument, "max_iterations must be >= 1");
    if (!(convergence_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "convergence_tol must be > 0");
    if (bin_count < 2) throw Error(ErrorKind::invalid_argument, "bin_count must be >= 2");
}

double trace_distance(const Matrix& a, const Matrix& b) { return 0.5 * trace_norm(0.5 * ((a - b) + (a - b).adjoint())); }

BinnedQuadratures bin_quadratures(const QuadratureDataset& data, int bin_count) {
    if (data.records.empty()) throw Error(ErrorKind::invalid_argument, "dataset has no records");
    if (bin_count < 2) throw Error(ErrorKind::invalid_argument, "bin_count must be >= 2");
    BinnedQuadratures out;
    for (const auto& r : data.records) out.phases.push_back(r.lo_phase);
    std::sort(out.phases.begin(), out.phases.end());
    out.phases.erase(std::unique(out.phases.begin(), out.phases.end()), out.phases.end());
    if (static_cast<int>(out.phases.size()) < kMinPhases) {
        throw Error(ErrorKind::insufficient_phases,
                    "need >= " + std::to_string(kMinPhases) + " distinct phases, got " + std::to_string(out.phases.size()));
    }

    double reach = 0.0;
    for (const auto& r : data.records) reach = std::max(reach, std::abs(r.value));
    reach = reach * (1.0 + 1e-12) + 1e-12;
    out.edges.resize(static_cast<std::size_t>(bin_count) + 1);
    for (int b = 0; b <= bin_count; ++b) out.edges[b] = -reach + 2.0 * reach * b / bin_count;

    out.counts.assign(out.phases.size(), std::vector<double>(static_cast<std::size_t>(bin_count), 0.0));
    out.record_phase.reserve(data.records.size());
    out.record_bin.reserve(data.records.size());
    for (const auto& r : data.records) {
        const auto k = static_cast<std::size_t>(std::lower_bound(out.phases.begin(), out.phases.end(), r.lo_phase) -
                                                out.phases.begin());
        auto b = static_cast<std::size_t>(std::floor((r.value + reach) / (2.0 * reach) * bin_count));
        b = std::min<std::size_t>(b, static_cast<std::size_t>(bin_count) - 1);
        out.counts[k][b] += 1.0;
        out.record_phase.push_back(k);
        out.record_bin.push_back(b);
    }
    out.total = static_cast<double>(data.records.size());
    return out;
}

ReconstructionResult reconstruct_binned(const BinnedQuadratures& binned, const NoiseModel& noise,
                                        const ReconstructionConfig& config, const std::optional<DensityMatrix>& initial) {
    config.validate();
    const int dim = config.cutoff + 1;
    const ModeLayout layout({Mode::bosonic(config.cutoff)});
    const Likelihood model(binned, build_povm(binned.edges, dim, noise, config.noise_aware), dim);

    Matrix rho = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    if (initial) {
        if (initial->dim() != static_cast<std::size_t>(dim)) {
            throw Error(ErrorKind::dimension_mismatch, "initial state cutoff differs from reconstruction cutoff");
        }
        // Keep full rank so the multiplicative update can reach every direction.
        rho = 0.99 * initial->matrix() + 0.01 * Matrix::Identity(dim, dim) / static_cast<double>(dim);
    }

    auto probs = model.probabilities(rho);
    double loglik = model.log_likelihood(probs);
    ReconstructionResult result{DensityMatrix(layout, normalized(rho), 1e-9), 0, 0.0, false, {loglik}};

    const Matrix identity = Matrix::Identity(dim, dim);
    for (int it = 1; it <= config.max_iterations; ++it) {
        const Matrix r = model.r_operator(probs);
        Matrix candidate = normalized(r * rho * r);
        auto cand_probs = model.probabilities(candidate);
        double cand_ll = model.log_likelihood(cand_probs);
        if (!(cand_ll >= loglik)) {
            bool improved = false;
            for (double eps = 1.0; eps > 1e-12; eps *= 0.5) {
                const Matrix g = identity + eps * r;
                candidate = normalized(g * rho * g);
                cand_probs = model.probabilities(candidate);
                cand_ll = model.log_likelihood(cand_probs);
                if (cand_ll >= loglik) {
                    improved = true;
                    break;
                }
            }
            if (!improved) {
                // No ascent direction left at this precision: stationary point.
                result.iterations = it;
                result.residual = 0.0;
                result.converged = true;
                break;
            }
        }
        const double residual = trace_distance(candidate, rho);
        rho = std::move(candidate);
        probs = std::move(cand_probs);
        loglik = cand_ll;
        result.log_likelihood.push_back(loglik);
        result.iterations = it;
        result.residual = residual;
        if (residual < config.convergence_tol) {
            result.converged = true;
            break;
        }
    }

    if (!result.converged && config.require_convergence) {
        throw Error(ErrorKind::non_convergence, "no convergence after " + std::to_string(result.iterations) +
                                                    " iterations, final residual " + std::to_string(result.residual));
    }
    result.rho = DensityMatrix(layout, normalized(rho), 1e-9);
    return result;
}

ReconstructionResult reconstruct_maxlik(const QuadratureDataset& data, const ReconstructionConfig& config,
                                        const std::optional<DensityMatrix>& initial) {
    config.validate();
    data.noise.validate();
    return reconstruct_binned(bin_quadratures(data, config.bin_count), data.noise, config, initial);
}

NegativityReport negativity_report(const DensityMatrix& rho, const GridSpec& grid, int bootstrap_resamples,
                                   const QuadratureDataset& data, const ReconstructionConfig& config,
                                   std::uint64_t seed) {
    if (bootstrap_resamples < 50) throw Error(ErrorKind::invalid_argument, "bootstrap_resamples must be >= 50");
    const auto point = wigner_min(wigner(rho, grid, false));

    const auto binned = bin_quadratures(data, config.bin_count);
    std::vector<std::vector<std::size_t>> by_phase(binned.phases.size());
    for (std::size_t i = 0; i < binned.record_phase.size(); ++i) by_phase[binned.record_phase[i]].push_back(i);

    ReconstructionConfig boot_config = config;
    boot_config.require_convergence = false;

    std::vector<double> minima(static_cast<std::size_t>(bootstrap_resamples));
    parallel_for(minima.size(), [&](std::size_t r) {
        Rng rng(derive_seed(seed, r));
        BinnedQuadratures resampled = binned;
        for (auto& row : resampled.counts) std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t k = 0; k < by_phase.size(); ++k) {
            const auto& members = by_phase[k];
            for (std::size_t s = 0; s < members.size(); ++s) {
                resampled.counts[k][binned.record_bin[members[rng.below(members.size())]]] += 1.0;
            }
        }
        const auto boot = reconstruct_binned(resampled, data.noise, boot_config, rho);
        minima[r] = wigner_min(wigner(boot.rho, grid, false)).value;
    });

    const double mean = std::accumulate(minima.begin(), minima.end(), 0.0) / static_cast<double>(minima.size());
    double var = 0.0;
    for (double m : minima) var += (m - mean) * (m - mean);
    var /= static_cast<double>(minima.size() - 1);

    NegativityReport report;
    report.min_wigner = point.value;
    report.x = point.x;
    report.p = point.p;
    report.bootstrap_std = std::sqrt(var);
    report.resamples = bootstrap_resamples;
    if (report.bootstrap_std > 0.0) {
        report.significance_sigmas = -report.min_wigner / report.bootstrap_std;
    } else {
        report.significance_sigmas = report.min_wigner < 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    report.identified = report.min_wigner + 3.0 * report.bootstrap_std < 0.0;
    return report;
}

}  // namespace kerrlab
