// SPDX-License-Identifier: Apache-2.0

#include "polarcat/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "polarcat/channels.hpp"
#include "polarcat/kernels.hpp"

namespace polarcat {

namespace {

void require_single_mode(const DensityOperator& rho) {
    if (rho.reg().n_modes() != 1)
        throw DimensionMismatch("operation requires a single-mode state");
}

Eigen::MatrixXd rotate_re(const MatrixXcd& rho, double theta) {
    // Re(Phi^dag rho Phi), Phi = diag(e^{i n theta})
    const long d = rho.rows();
    Eigen::MatrixXd out(d, d);
    for (long m = 0; m < d; ++m)
        for (long n = 0; n < d; ++n)
            out(m, n) = (std::polar(1.0, (n - m) * theta) * rho(m, n)).real();
    return out;
}

}  // namespace

std::vector<double> TomographySettings::phases() const {
    if (!phase_grid.empty()) return phase_grid;
    std::vector<double> ps(12);
    for (int i = 0; i < 12; ++i) ps[i] = i * std::numbers::pi / 12.0;
    return ps;
}

VectorXd hermite_psi(double x, int nmax) {
    VectorXd psi(nmax);
    if (nmax <= 0) return psi;
    psi(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
    if (nmax > 1) psi(1) = std::sqrt(2.0) * x * psi(0);
    for (int n = 2; n < nmax; ++n)
        psi(n) = std::sqrt(2.0 / n) * x * psi(n - 1) -
                 std::sqrt(double(n - 1) / n) * psi(n - 2);
    return psi;
}

QuadraturePdf::QuadraturePdf(const DensityOperator& rho, double theta) {
    require_single_mode(rho);
    re_rho_theta_ = rotate_re(rho.matrix(), theta);
}

double QuadraturePdf::operator()(double x) const {
    const VectorXd psi = hermite_psi(x, static_cast<int>(re_rho_theta_.rows()));
    return psi.dot(re_rho_theta_ * psi);
}

QuadraturePdf quadrature_pdf(const DensityOperator& rho, double theta) {
    return QuadraturePdf(rho, theta);
}

std::vector<QuadratureSample> sample_quadratures(const DensityOperator& rho,
                                                 const TomographySettings& settings) {
    require_single_mode(rho);
    if (settings.n_samples <= 0)
        throw DimensionMismatch("n_samples must be positive");
    if (settings.eta <= 0.0 || settings.eta > 1.0)
        throw DimensionMismatch("eta must be in (0, 1]");

    const std::string mode = rho.reg().mode(0).label;
    const DensityOperator lossy = apply_loss(rho, LossChannel{settings.eta, mode});

    const auto thetas = settings.phases();
    const int n_grid = kSampleGridPoints;
    const double dx = (kSampleGridMax - kSampleGridMin) / (n_grid - 1);

    // Per-phase cumulative point-mass distribution over the grid.
    std::vector<std::vector<double>> cdfs;
    cdfs.reserve(thetas.size());
    for (double th : thetas) {
        QuadraturePdf pdf(lossy, th);
        std::vector<double> cdf(n_grid);
        double acc = 0.0;
        for (int i = 0; i < n_grid; ++i) {
            acc += std::max(0.0, pdf(kSampleGridMin + i * dx));
            cdf[i] = acc;
        }
        for (double& c : cdf) c /= acc;
        cdfs.push_back(std::move(cdf));
    }

    std::mt19937_64 rng(settings.seed);
    auto uniform = [&rng]() {
        return double(rng() >> 11) * 0x1.0p-53;  // [0, 1)
    };

    std::vector<QuadratureSample> samples;
    samples.reserve(settings.n_samples);
    for (int i = 0; i < settings.n_samples; ++i) {
        const std::size_t ti = i % thetas.size();
        const double u = uniform();
        const auto& cdf = cdfs[ti];
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const int gi = std::min<int>(int(it - cdf.begin()), n_grid - 1);
        samples.push_back({thetas[ti], kSampleGridMin + gi * dx});
    }
    return samples;
}

// ---------------------------------------------------------------------------
// MaxLik

ReconstructionResult maxlik_reconstruct(const std::vector<QuadratureSample>& samples,
                                        const TomographySettings& settings) {
    if (samples.empty()) throw DimensionMismatch("no samples to reconstruct from");
    const int d = settings.cutoff + 1;

    // Deduplicate samples: identical (theta, x) pairs share a POVM element.
    std::map<double, std::map<double, long>> grouped;
    for (const auto& s : samples) {
        if (!std::isfinite(s.x) || !(s.theta >= 0.0 && s.theta < std::numbers::pi))
            throw DimensionMismatch("sample outside (theta in [0, pi), finite x)");
        ++grouped[s.theta][s.x];
    }

    std::map<double, int> x_index;
    for (const auto& [th, xs] : grouped)
        for (const auto& [x, c] : xs) x_index.emplace(x, 0);
    int next = 0;
    for (auto& [x, idx] : x_index) idx = next++;
    const int n_x = next;

    // Theta-independent POVM blocks Pi0_x = Lambda_eta^dag(|x><x|), real
    // symmetric, stored flattened for the dot/axpy kernels.
    const auto kraus = loss_kraus_ops(settings.eta, d);
    std::vector<std::vector<double>> pov(n_x, std::vector<double>(d * d));
    for (const auto& [x, idx] : x_index) {
        const VectorXd psi = hermite_psi(x, d);
        Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(d, d);
        for (const auto& a : kraus) {
            const VectorXd v = a.transpose() * psi;  // A_k^dag |x>
            pi.noalias() += v * v.transpose();
        }
        std::copy(pi.data(), pi.data() + d * d, pov[idx].begin());
    }

    struct Group {
        double theta;
        std::vector<std::pair<int, double>> entries;  // (x index, count)
    };
    std::vector<Group> groups;
    for (const auto& [th, xs] : grouped) {
        Group g{th, {}};
        for (const auto& [x, c] : xs) g.entries.emplace_back(x_index.at(x), double(c));
        groups.push_back(std::move(g));
    }

    ModeRegister reg{{"C", settings.cutoff}};
    MatrixXcd rho = MatrixXcd::Identity(d, d) / double(d);

    std::vector<double> re_rho(d * d), s_theta(d * d);

    // One pass over the data: log-likelihood of rho and the R operator.
    auto evaluate = [&](const MatrixXcd& state, MatrixXcd* r_out) {
        double ll = 0.0;
        if (r_out) r_out->setZero();
        for (const auto& g : groups) {
            const Eigen::MatrixXd rr = rotate_re(state, g.theta);
            std::copy(rr.data(), rr.data() + d * d, re_rho.begin());
            std::fill(s_theta.begin(), s_theta.end(), 0.0);
            for (const auto& [xi, count] : g.entries) {
                const double pr = std::max(kernels::dot(re_rho, pov[xi]), 1e-300);
                ll += count * std::log(pr);
                if (r_out) kernels::axpy(count / pr, pov[xi], s_theta);
            }
            if (r_out) {
                // R += Phi S Phi^dag; S is symmetric so its flattened layout
                // is immaterial.
                for (int m = 0; m < d; ++m)
                    for (int n = 0; n < d; ++n)
                        (*r_out)(m, n) +=
                            std::polar(1.0, (m - n) * g.theta) * s_theta[n * d + m];
            }
        }
        return ll;
    };

    std::vector<double> trace;
    trace.reserve(settings.max_iters);
    double prev_ll = -std::numeric_limits<double>::infinity();
    bool converged = false;
    int iters = 0;
    MatrixXcd r_op(d, d);

    while (iters < settings.max_iters) {
        const double ll = evaluate(rho, &r_op);
        ++iters;
        trace.push_back(ll);
        if (std::isfinite(prev_ll) &&
            std::abs(ll - prev_ll) <=
                settings.log_likelihood_tol * std::max(1.0, std::abs(ll))) {
            converged = true;
            break;
        }
        prev_ll = ll;

        MatrixXcd next_rho = r_op * rho * r_op;
        next_rho = 0.5 * (next_rho + next_rho.adjoint()).eval();
        const double tr = next_rho.trace().real();
        if (!(tr > 0.0)) break;  // degenerate data; keep the last iterate
        rho = next_rho / tr;
    }
    if (!converged) trace.push_back(evaluate(rho, nullptr));

    ReconstructionResult result;
    result.rho = DensityOperator(reg, rho);
    result.iterations = iters;
    result.final_log_likelihood = trace.back();
    result.converged = converged;
    result.log_likelihood_trace = std::move(trace);
    return result;
}

// ---------------------------------------------------------------------------
// Wigner

namespace {

// Associated Laguerre table L_n^{(k)}(y), n rows 0..d-1, k cols 0..d-1.
Eigen::MatrixXd laguerre_table(double y, int d) {
    Eigen::MatrixXd l(d, d);
    for (int k = 0; k < d; ++k) {
        l(0, k) = 1.0;
        if (d > 1) l(1, k) = 1.0 + k - y;
        for (int n = 1; n + 1 < d; ++n)
            l(n + 1, k) = ((2 * n + 1 + k - y) * l(n, k) - (n + k) * l(n - 1, k)) / (n + 1);
    }
    return l;
}

}  // namespace

double wigner_point(const DensityOperator& rho, double x, double p) {
    require_single_mode(rho);
    const int d = static_cast<int>(rho.dim());
    const cplx alpha(x / std::sqrt(2.0), p / std::sqrt(2.0));
    const cplx beta = 2.0 * alpha;
    const double y = std::norm(beta);
    const Eigen::MatrixXd lag = laguerre_table(y, d);

    // sqrt(n!/m!) ratio factors and powers of beta
    std::vector<cplx> pow_beta(d), pow_nbc(d);
    pow_beta[0] = pow_nbc[0] = 1.0;
    for (int k = 1; k < d; ++k) {
        pow_beta[k] = pow_beta[k - 1] * beta;
        pow_nbc[k] = pow_nbc[k - 1] * (-std::conj(beta));
    }
    std::vector<double> logfact(d);
    logfact[0] = 0.0;
    for (int n = 1; n < d; ++n) logfact[n] = logfact[n - 1] + std::log(double(n));

    // W = (1/pi) e^{-|beta|^2/2} sum_{mn} rho_{mn} (-1)^m g_{nm},
    // g_{nm} = <n|D(beta)|m> e^{+|beta|^2/2}
    cplx acc = 0.0;
    const auto& m_ = rho.matrix();
    for (int m = 0; m < d; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        for (int n = 0; n < d; ++n) {
            cplx g;
            if (n >= m)
                g = std::exp(0.5 * (logfact[m] - logfact[n])) * pow_beta[n - m] *
                    lag(m, n - m);
            else
                g = std::exp(0.5 * (logfact[n] - logfact[m])) * pow_nbc[m - n] *
                    lag(n, m - n);
            acc += m_(m, n) * sign * g;
        }
    }
    return (acc * std::exp(-0.5 * y) / std::numbers::pi).real();
}

Eigen::MatrixXd wigner(const DensityOperator& rho, const WignerGrid& grid) {
    require_single_mode(rho);
    if (grid.n < 2) throw DimensionMismatch("wigner grid needs n >= 2");
    Eigen::MatrixXd w(grid.n, grid.n);
    const double dx = (grid.x_max - grid.x_min) / (grid.n - 1);
    const double dp = (grid.p_max - grid.p_min) / (grid.n - 1);
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            w(i, j) = wigner_point(rho, grid.x_min + i * dx, grid.p_min + j * dp);
    return w;
}

}  // namespace polarcat
