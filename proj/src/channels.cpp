// SPDX-License-Identifier: Apache-2.0

#include "polarcat/channels.hpp"

#include <cmath>

namespace polarcat {

namespace {

double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

}  // namespace

MatrixXcd beamsplitter_matrix(const BeamsplitterSpec& spec, int dim) {
    if (spec.reflectivity < 0.0 || spec.reflectivity > 1.0)
        throw DimensionMismatch("beamsplitter reflectivity must be in [0,1]");
    const double st = std::sqrt(1.0 - spec.reflectivity);
    const double sr = std::sqrt(spec.reflectivity);
    // Creation operators transform as
    //   U a1^dag U^dag = t a1^dag + r21 a2^dag
    //   U a2^dag U^dag = r12 a1^dag + t a2^dag
    const cplx t(st, 0.0);
    cplx r21, r12;
    if (spec.phase == BsPhase::real_orthogonal) {
        r21 = cplx(-sr, 0.0);
        r12 = cplx(sr, 0.0);
    } else {
        r21 = cplx(0.0, sr);
        r12 = cplx(0.0, sr);
    }

    const long d2 = long(dim) * dim;
    MatrixXcd u = MatrixXcd::Zero(d2, d2);
    // U|m,n> = (t a1+ + r21 a2+)^m (r12 a1+ + t a2+)^n |0,0> / sqrt(m! n!)
    for (int m = 0; m < dim; ++m) {
        for (int n = 0; n < dim; ++n) {
            const long col = long(m) * dim + n;
            for (int j = 0; j <= m; ++j) {
                for (int k = 0; k <= n; ++k) {
                    const int p = j + k;          // photons in output mode 1
                    const int q = m + n - j - k;  // photons in output mode 2
                    if (p >= dim || q >= dim) continue;
                    // C(m,j) C(n,k) t^j r21^{m-j} r12^k t^{n-k}
                    //   * sqrt(p! q!) / sqrt(m! n!)
                    const double logmag =
                        log_factorial(m) + log_factorial(n) - log_factorial(j) -
                        log_factorial(m - j) - log_factorial(k) - log_factorial(n - k) +
                        0.5 * (log_factorial(p) + log_factorial(q) - log_factorial(m) -
                               log_factorial(n));
                    cplx coeff = std::exp(logmag);
                    coeff *= std::pow(t, j) * std::pow(r21, m - j) * std::pow(r12, k) *
                             std::pow(t, n - k);
                    u(long(p) * dim + q, col) += coeff;
                }
            }
        }
    }
    return u;
}

FockVector apply_beamsplitter(const FockVector& state, const BeamsplitterSpec& spec) {
    const auto& reg = state.reg();
    const int c1 = reg.mode(reg.position(spec.mode_pair.first)).cutoff;
    const int c2 = reg.mode(reg.position(spec.mode_pair.second)).cutoff;
    if (c1 != c2)
        throw DimensionMismatch("beamsplitter modes must share a cutoff");
    const MatrixXcd u = beamsplitter_matrix(spec, c1 + 1);
    return apply_matrix(state, u, {spec.mode_pair.first, spec.mode_pair.second});
}

std::vector<Eigen::MatrixXd> loss_kraus_ops(double eta, int dim) {
    if (eta < 0.0 || eta > 1.0)
        throw DimensionMismatch("loss efficiency must be in [0,1]");
    std::vector<Eigen::MatrixXd> ops;
    ops.reserve(dim);
    for (int k = 0; k < dim; ++k) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
        // A_k |n> = sqrt(C(n,k) (1-eta)^k eta^{n-k}) |n-k>
        for (int n = k; n < dim; ++n) {
            const double binom = std::exp(log_factorial(n) - log_factorial(k) -
                                          log_factorial(n - k));
            a(n - k, n) = std::sqrt(binom * std::pow(1.0 - eta, k) *
                                    std::pow(eta, n - k));
        }
        ops.push_back(std::move(a));
    }
    return ops;
}

DensityOperator apply_loss(const DensityOperator& rho, const LossChannel& channel) {
    const auto& reg = rho.reg();
    const int dim = reg.mode(reg.position(channel.mode)).dim();
    const auto kraus = loss_kraus_ops(channel.eta, dim);
    DensityOperator out(reg, MatrixXcd::Zero(rho.dim(), rho.dim()));
    for (const auto& a : kraus) {
        DensityOperator term = apply_matrix(rho, a.cast<cplx>(), {channel.mode});
        out.matrix() += term.matrix();
    }
    return out;
}

PolarizationProjector::PolarizationProjector(cplx a_, cplx b_, std::string h,
                                             std::string v)
    : a(a_), b(b_), h_rail(std::move(h)), v_rail(std::move(v)) {
    const double n2 = std::norm(a) + std::norm(b);
    if (std::abs(n2 - 1.0) > 1e-9) {
        const double n = std::sqrt(n2);
        if (n <= 0.0) throw DimensionMismatch("zero polarization projector");
        a /= n;
        b /= n;
    }
}

namespace {

std::vector<BraTerm> polarization_bras(const PolarizationProjector& p) {
    return {
        BraTerm{p.a, {{p.h_rail, 1}, {p.v_rail, 0}}},
        BraTerm{p.b, {{p.h_rail, 0}, {p.v_rail, 1}}},
    };
}

}  // namespace

std::pair<FockVector, double> project_polarization(const FockVector& state,
                                                   const PolarizationProjector& proj) {
    FockVector out = project_modes(state, polarization_bras(proj));
    return {out, out.squared_norm()};
}

std::pair<DensityOperator, double> project_polarization(
    const DensityOperator& state, const PolarizationProjector& proj) {
    DensityOperator out = project_modes(state, polarization_bras(proj));
    return {out, out.trace()};
}

std::pair<FockVector, double> project_bell_psi_minus(const FockVector& state,
                                                     const std::string& h_rail_a,
                                                     const std::string& v_rail_a,
                                                     const std::string& h_rail_b,
                                                     const std::string& v_rail_b) {
    const double s = 1.0 / std::sqrt(2.0);
    std::vector<BraTerm> bras = {
        BraTerm{cplx(s, 0.0),
                {{h_rail_a, 1}, {v_rail_a, 0}, {h_rail_b, 0}, {v_rail_b, 1}}},
        BraTerm{cplx(-s, 0.0),
                {{h_rail_a, 0}, {v_rail_a, 1}, {h_rail_b, 1}, {v_rail_b, 0}}},
    };
    FockVector out = project_modes(state, bras);
    return {out, out.squared_norm()};
}

DensityOperator bell_pair_psi_plus(double visibility, const std::string& h_rail_b,
                                   const std::string& v_rail_b,
                                   const std::string& h_rail_d,
                                   const std::string& v_rail_d, int rail_cutoff) {
    if (visibility < 0.0 || visibility > 1.0)
        throw DimensionMismatch("visibility must be in [0,1]");
    ModeRegister reg{{h_rail_b, rail_cutoff},
                     {v_rail_b, rail_cutoff},
                     {h_rail_d, rail_cutoff},
                     {v_rail_d, rail_cutoff}};
    // |HV> = H photon in B, V photon in D; |VH> the converse.
    FockVector hv = FockVector::zero(reg);
    hv.amps()(reg.flatten({1, 0, 0, 1})) = 1.0;
    FockVector vh = FockVector::zero(reg);
    vh.amps()(reg.flatten({0, 1, 1, 0})) = 1.0;
    const double s = 1.0 / std::sqrt(2.0);
    FockVector psi_plus = FockVector::zero(reg);
    psi_plus.amps() = s * (hv.amps() + vh.amps());

    MatrixXcd m = visibility * (psi_plus.amps() * psi_plus.amps().adjoint()) +
                  0.5 * (1.0 - visibility) *
                      (hv.amps() * hv.amps().adjoint() + vh.amps() * vh.amps().adjoint());
    return DensityOperator(std::move(reg), std::move(m));
}

}  // namespace polarcat
