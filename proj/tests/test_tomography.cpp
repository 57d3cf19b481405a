// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <numbers>
#include <thread>

#include "polarcat/analysis.hpp"
#include "polarcat/channels.hpp"
#include "polarcat/tomography.hpp"
#include "test_helpers.hpp"

using namespace polarcat;
using polarcat::testing::random_density;

namespace {

double pdf_moment(const QuadraturePdf& pdf, int k) {
    const int n = 4001;
    const double lo = -8.0, hi = 8.0;
    const double dx = (hi - lo) / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = lo + i * dx;
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * std::pow(x, k) * pdf(x);
    }
    return acc * dx;
}

DensityOperator single(const FockVector& v) { return v.to_density(); }

FockVector fock_n(int n, int cutoff) {
    FockVector v = FockVector::zero(ModeRegister{{"C", cutoff}});
    v.amps()(n) = 1.0;
    return v;
}

/// Independent Wigner oracle: displaced parity evaluated with a matrix
/// exponential on an enlarged space.
double wigner_oracle(const DensityOperator& rho, double x, double p, int pad = 30) {
    const int d = static_cast<int>(rho.dim());
    const int big = d + pad;
    MatrixXcd a = MatrixXcd::Zero(big, big);
    for (int n = 1; n < big; ++n) a(n - 1, n) = std::sqrt(double(n));
    const cplx alpha(x / std::sqrt(2.0), p / std::sqrt(2.0));
    MatrixXcd gen = alpha * a.adjoint() - std::conj(alpha) * a;
    MatrixXcd disp = gen.exp();

    MatrixXcd rho_big = MatrixXcd::Zero(big, big);
    rho_big.topLeftCorner(d, d) = rho.matrix();
    MatrixXcd m = disp.adjoint() * rho_big * disp;
    double acc = 0.0;
    for (int n = 0; n < big; ++n) acc += ((n % 2 == 0) ? 1.0 : -1.0) * m(n, n).real();
    return acc / std::numbers::pi;
}

}  // namespace

TEST_CASE("hermite functions are orthonormal") {
    const int nmax = 10;
    const int n = 6001;
    const double lo = -9.0, hi = 9.0, dx = (hi - lo) / (n - 1);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nmax, nmax);
    for (int i = 0; i < n; ++i) {
        const VectorXd psi = hermite_psi(lo + i * dx, nmax);
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        gram += w * dx * psi * psi.transpose();
    }
    CHECK((gram - Eigen::MatrixXd::Identity(nmax, nmax)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("quadrature pdf: vacuum, single photon, squeezed variances") {
    DensityOperator vac = single(vacuum(ModeRegister{{"C", 10}}));
    for (double th : {0.0, 0.7, 2.0}) {
        QuadraturePdf pdf(vac, th);
        CHECK(pdf_moment(pdf, 0) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(pdf_moment(pdf, 1) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(pdf_moment(pdf, 2) == doctest::Approx(0.5).epsilon(1e-6));
    }

    DensityOperator one = single(fock_n(1, 10));
    QuadraturePdf pdf1(one, 1.1);
    for (double x : {-2.0, -0.5, 0.0, 0.3, 1.7}) {
        const double expect = 2.0 * x * x * std::exp(-x * x) / std::sqrt(std::numbers::pi);
        CHECK(pdf1(x) == doctest::Approx(expect).epsilon(1e-12));
    }

    // anti-squeezed along x at theta = 0 under this project's convention
    const double r = 0.18;
    DensityOperator sq = single(squeezed_vacuum(r, 14));
    CHECK(pdf_moment(QuadraturePdf(sq, 0.0), 2) ==
          doctest::Approx(std::exp(2 * r) / 2).epsilon(1e-6));
    CHECK(pdf_moment(QuadraturePdf(sq, std::numbers::pi / 2), 2) ==
          doctest::Approx(std::exp(-2 * r) / 2).epsilon(1e-6));
}

TEST_CASE("sampling: determinism and vacuum variance") {
    DensityOperator vac = single(vacuum(ModeRegister{{"C", 6}}));
    TomographySettings s;
    s.n_samples = 100000;
    s.eta = 1.0;
    s.cutoff = 6;
    s.seed = 4242;

    auto samples = sample_quadratures(vac, s);
    auto again = sample_quadratures(vac, s);
    REQUIRE(samples.size() == again.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(samples[i].theta == again[i].theta);
        CHECK(samples[i].x == again[i].x);
    }

    double mean = 0.0, var = 0.0;
    for (const auto& q : samples) mean += q.x;
    mean /= double(samples.size());
    for (const auto& q : samples) var += (q.x - mean) * (q.x - mean);
    var /= double(samples.size());
    CHECK(var == doctest::Approx(0.5).epsilon(0.02));
    CHECK(std::abs(var - 0.5) < 0.01);

    // round-robin phase assignment
    const auto phases = s.phases();
    for (std::size_t i = 0; i < 30; ++i)
        CHECK(samples[i].theta == phases[i % phases.size()]);
}

TEST_CASE("sampling: lossy cat matches the pdf moments at every phase") {
    FockVector cat = cat_state(0.9, CatParity::minus, 14);
    DensityOperator rho = single(cat);
    TomographySettings s;
    s.n_samples = 60000;
    s.eta = 0.55;
    s.cutoff = 14;
    s.seed = 7;

    auto samples = sample_quadratures(rho, s);
    DensityOperator lossy = apply_loss(rho, {0.55, "C"});
    const auto phases = s.phases();
    for (double th : {phases[0], phases[4], phases[10]}) {
        double m1 = 0, m2 = 0;
        long n = 0;
        for (const auto& q : samples)
            if (q.theta == th) {
                m1 += q.x;
                m2 += q.x * q.x;
                ++n;
            }
        m1 /= double(n);
        m2 /= double(n);
        const double sample_var = m2 - m1 * m1;

        QuadraturePdf pdf(lossy, th);
        const double mu = pdf_moment(pdf, 1);
        const double v = pdf_moment(pdf, 2) - mu * mu;
        const double m4 = pdf_moment(pdf, 4);
        const double se = std::sqrt(std::max(m4 - v * v, 0.0) / double(n));
        CHECK(std::abs(sample_var - v) < 3.0 * se + 1e-6);
    }
}

TEST_CASE("POVM completeness over a fine phase-quadrature grid") {
    const int d = 6;
    const double eta = 0.55;
    const auto kraus = loss_kraus_ops(eta, d);
    const int n_theta = 12;
    const int n_x = 2001;
    const double lo = -7.0, hi = 7.0, dx = (hi - lo) / (n_x - 1);

    MatrixXcd total = MatrixXcd::Zero(d, d);
    for (int t = 0; t < n_theta; ++t) {
        const double th = t * std::numbers::pi / n_theta;
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < n_x; ++i) {
            const VectorXd psi = hermite_psi(lo + i * dx, d);
            const double w = (i == 0 || i == n_x - 1) ? 0.5 : 1.0;
            for (const auto& a : kraus) {
                const VectorXd v = a.transpose() * psi;
                s += (w * dx) * v * v.transpose();
            }
        }
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
                total(m, n) += std::polar(1.0, (m - n) * th) * s(m, n) / double(n_theta);
    }
    CHECK((total - MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-3);

    for (int i = 0; i < 5; ++i) {
        DensityOperator rho = random_density(ModeRegister{{"C", d - 1}});
        CHECK((total * rho.matrix()).trace().real() == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("maxlik: vacuum round trip without efficiency correction") {
    DensityOperator vac = single(vacuum(ModeRegister{{"C", 8}}));
    TomographySettings s;
    s.n_samples = 10000;
    s.eta = 1.0;
    s.cutoff = 8;
    s.seed = 11;
    auto samples = sample_quadratures(vac, s);
    ReconstructionResult rec = maxlik_reconstruct(samples, s);
    CHECK(fidelity(rec.rho, vacuum(ModeRegister{{"C", 8}})) >= 0.99);
    CHECK_NOTHROW(rec.rho.validate());
}

TEST_CASE("maxlik: log-likelihood is monotone and convergence is flagged") {
    FockVector cat = cat_state(0.7, CatParity::minus, 10);
    TomographySettings s;
    s.n_samples = 4000;
    s.eta = 0.55;
    s.cutoff = 10;
    s.seed = 5;
    auto samples = sample_quadratures(single(cat), s);

    ReconstructionResult rec = maxlik_reconstruct(samples, s);
    REQUIRE(rec.log_likelihood_trace.size() >= 2);
    for (std::size_t i = 1; i < rec.log_likelihood_trace.size(); ++i) {
        const double prev = rec.log_likelihood_trace[i - 1];
        const double cur = rec.log_likelihood_trace[i];
        CHECK(cur >= prev - 1e-9 * std::max(1.0, std::abs(cur)));
    }

    TomographySettings tight = s;
    tight.max_iters = 3;
    ReconstructionResult capped = maxlik_reconstruct(samples, tight);
    CHECK_FALSE(capped.converged);
    CHECK(capped.iterations == 3);

    // reconstruction through loss, with correction, recovers the cat
    CHECK(fidelity(rec.rho, cat) >= 0.9);
}

TEST_CASE("maxlik: deterministic for identical input") {
    DensityOperator vac = single(vacuum(ModeRegister{{"C", 5}}));
    TomographySettings s;
    s.n_samples = 2000;
    s.eta = 0.8;
    s.cutoff = 5;
    s.seed = 3;
    auto samples = sample_quadratures(vac, s);
    ReconstructionResult r1 = maxlik_reconstruct(samples, s);
    ReconstructionResult r2 = maxlik_reconstruct(samples, s);
    CHECK((r1.rho.matrix() - r2.rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r1.iterations == r2.iterations);
}

TEST_CASE("wigner: canonical points and the parity identity") {
    const double inv_pi = 1.0 / std::numbers::pi;
    CHECK(wigner_point(single(vacuum(ModeRegister{{"C", 8}})), 0, 0) ==
          doctest::Approx(inv_pi).epsilon(1e-12));
    CHECK(wigner_point(single(fock_n(1, 8)), 0, 0) ==
          doctest::Approx(-inv_pi).epsilon(1e-12));
    for (double g : {0.3, 0.9}) {
        CHECK(wigner_point(single(cat_state(g, CatParity::minus, 14)), 0, 0) ==
              doctest::Approx(-inv_pi).epsilon(1e-10));
    }

    for (int i = 0; i < 8; ++i) {
        DensityOperator rho = random_density(ModeRegister{{"C", 9}});
        double parity_sum = 0.0;
        for (long n = 0; n < rho.dim(); ++n)
            parity_sum += ((n % 2 == 0) ? 1.0 : -1.0) * rho.matrix()(n, n).real();
        CHECK(wigner_point(rho, 0, 0) ==
              doctest::Approx(parity_sum * inv_pi).epsilon(1e-10));
    }
}

TEST_CASE("wigner: agrees with the displaced-parity matrix oracle") {
    for (int i = 0; i < 3; ++i) {
        DensityOperator rho = random_density(ModeRegister{{"C", 7}});
        for (auto [x, p] : {std::pair{0.3, -0.4}, {1.2, 0.9}, {-2.0, 0.1}}) {
            CHECK(wigner_point(rho, x, p) ==
                  doctest::Approx(wigner_oracle(rho, x, p)).epsilon(1e-8).scale(1.0));
        }
    }
    // displaced coherent blob lands where it should
    DensityOperator coh = single(coherent(0.9, 12));
    const double at_peak = wigner_point(coh, 0.9 * std::sqrt(2.0), 0.0);
    CHECK(at_peak == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("wigner: grid integrates to one") {
    FockVector cat = cat_state(0.9, CatParity::minus, 14);
    WignerGrid grid;
    grid.x_min = grid.p_min = -5.0;
    grid.x_max = grid.p_max = 5.0;
    grid.n = 81;
    Eigen::MatrixXd w = wigner(single(cat), grid);
    const double dx = (grid.x_max - grid.x_min) / (grid.n - 1);
    double integral = 0.0;
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j) {
            double weight = 1.0;
            if (i == 0 || i == grid.n - 1) weight *= 0.5;
            if (j == 0 || j == grid.n - 1) weight *= 0.5;
            integral += weight * w(i, j);
        }
    integral *= dx * dx;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("reconstruction fidelity grows with sample count on average") {
    FockVector cat = cat_state(0.9, CatParity::minus, 14);
    DensityOperator rho = single(cat);
    double mean_f[3] = {0, 0, 0};
    const int counts[3] = {1000, 10000, 50000};
    for (int seed = 1; seed <= 5; ++seed) {
        for (int k = 0; k < 3; ++k) {
            TomographySettings s;
            s.n_samples = counts[k];
            s.eta = 0.55;
            s.cutoff = 14;
            s.seed = 1000 + seed;
            auto samples = sample_quadratures(rho, s);
            ReconstructionResult rec = maxlik_reconstruct(samples, s);
            mean_f[k] += fidelity(rec.rho, cat) / 5.0;
        }
    }
    CHECK(mean_f[1] >= mean_f[0] - 1e-3);
    CHECK(mean_f[2] >= mean_f[1] - 1e-3);
    MESSAGE("mean fidelities 1k/10k/50k: ", mean_f[0], " ", mean_f[1], " ", mean_f[2]);
}

TEST_CASE("reconstruction with a mismatched (smaller) cutoff still recovers the state") {
    FockVector truth = cat_state(0.9, CatParity::minus, 14);
    TomographySettings s;
    s.n_samples = 20000;
    s.eta = 0.55;
    s.cutoff = 14;
    s.seed = 31;
    auto samples = sample_quadratures(truth.to_density(), s);

    TomographySettings small = s;
    small.cutoff = 10;
    ReconstructionResult rec = maxlik_reconstruct(samples, small);
    FockVector truth_small = cat_state(0.9, CatParity::minus, 10);
    CHECK(fidelity(rec.rho, truth_small) >= 0.9);
}

TEST_CASE("maxlik rejects out-of-range samples") {
    TomographySettings s;
    s.cutoff = 5;
    CHECK_THROWS_AS(
        maxlik_reconstruct({{-0.1, 0.0}}, s), DimensionMismatch);
    CHECK_THROWS_AS(
        maxlik_reconstruct({{0.2, std::numeric_limits<double>::infinity()}}, s),
        DimensionMismatch);
}

TEST_CASE("error paths: multimode inputs rejected") {
    DensityOperator two =
        polarcat::testing::random_density(ModeRegister{{"X", 2}, {"Y", 2}});
    CHECK_THROWS_AS(quadrature_pdf(two, 0.0), DimensionMismatch);
    CHECK_THROWS_AS(wigner_point(two, 0, 0), DimensionMismatch);
    TomographySettings s;
    CHECK_THROWS_AS(sample_quadratures(two, s), DimensionMismatch);
}

TEST_CASE("independent reconstructions are safe to run concurrently") {
    FockVector cat = cat_state(0.6, CatParity::minus, 8);
    TomographySettings s;
    s.n_samples = 2000;
    s.eta = 0.7;
    s.cutoff = 8;
    s.seed = 77;
    auto samples = sample_quadratures(cat.to_density(), s);
    ReconstructionResult serial = maxlik_reconstruct(samples, s);

    ReconstructionResult from_thread_a, from_thread_b;
    std::thread a([&] { from_thread_a = maxlik_reconstruct(samples, s); });
    std::thread b([&] { from_thread_b = maxlik_reconstruct(samples, s); });
    a.join();
    b.join();
    CHECK((from_thread_a.rho.matrix() - serial.rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((from_thread_b.rho.matrix() - serial.rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(from_thread_a.iterations == serial.iterations);
}
